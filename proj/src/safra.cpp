#include <algorithm>
#include <unordered_map>

#include "ltlmon/automata.hpp"

namespace ltlmon {

namespace {

// Fixed-width bitset over NBA states.
class StateBits {
 public:
  StateBits() = default;
  explicit StateBits(std::size_t words) : w_(words, 0) {}

  void set(StateId s) { w_[s / 64] |= std::uint64_t{1} << (s % 64); }
  bool test(StateId s) const { return (w_[s / 64] >> (s % 64)) & 1; }
  bool empty() const {
    return std::all_of(w_.begin(), w_.end(), [](std::uint64_t x) { return x == 0; });
  }
  bool intersects(const StateBits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  StateBits& operator|=(const StateBits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  StateBits operator&(const StateBits& o) const {
    StateBits r = *this;
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] &= o.w_[i];
    return r;
  }
  void subtract(const StateBits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
  }
  bool operator==(const StateBits& o) const { return w_ == o.w_; }
  const std::vector<std::uint64_t>& words() const { return w_; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t x = w_[i];
      while (x) {
        int b = __builtin_ctzll(x);
        f(static_cast<StateId>(i * 64 + b));
        x &= x - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> w_;
};

struct TreeNode {
  std::uint32_t name;
  bool marked = false;
  StateBits label;
  std::vector<std::uint32_t> children;  // indices into SafraTree::nodes, oldest first
};

// nodes[0] is the root when the tree is nonempty. Unreferenced slots are garbage
// until compact() runs.
struct SafraTree {
  std::vector<TreeNode> nodes;

  bool empty() const { return nodes.empty(); }

  // Canonical preorder encoding used as the DRA state key.
  std::vector<std::uint64_t> encode() const {
    std::vector<std::uint64_t> out;
    if (nodes.empty()) return out;
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
      const TreeNode& n = nodes[stack.back()];
      stack.pop_back();
      out.push_back((std::uint64_t{n.name} << 33) | (std::uint64_t{n.marked} << 32) |
                    n.children.size());
      out.insert(out.end(), n.label.words().begin(), n.label.words().end());
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }
};

struct VectorHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull + (h >> 29);
    return h;
  }
};

class Safra {
 public:
  Safra(const BuchiAutomaton& nba) : nba_(nba), words_((nba.num_states() + 63) / 64) {
    accepting_ = StateBits(words_);
    for (StateId s = 0; s < nba.num_states(); ++s)
      if (nba.accepting(s)) accepting_.set(s);
    post_.resize(nba.num_states() * nba.letter_count(), StateBits(words_));
    for (StateId s = 0; s < nba.num_states(); ++s)
      for (Letter l = 0; l < nba.letter_count(); ++l)
        for (StateId t : nba.successors(s, l)) post_[s * nba.letter_count() + l].set(t);
  }

  SafraTree initial() const {
    SafraTree t;
    StateBits init(words_);
    for (StateId s : nba_.initial()) init.set(s);
    if (!init.empty()) t.nodes.push_back({0, false, init, {}});
    return t;
  }

  SafraTree step(const SafraTree& in, Letter letter) const {
    if (in.empty()) return in;
    SafraTree t = in;
    std::vector<char> used(2 * nba_.num_states() + 1, 0);
    for (const auto& n : t.nodes) used[n.name] = 1;

    // 1-2: unmark; spawn a youngest child holding the accepting part of each label
    const std::size_t existing = t.nodes.size();
    for (std::size_t i = 0; i < existing; ++i) {
      t.nodes[i].marked = false;
      StateBits acc = t.nodes[i].label & accepting_;
      if (acc.empty()) continue;
      auto name = static_cast<std::uint32_t>(std::find(used.begin(), used.end(), 0) - used.begin());
      used[name] = 1;
      t.nodes.push_back({name, false, acc, {}});
      t.nodes[i].children.push_back(static_cast<std::uint32_t>(t.nodes.size() - 1));
    }
    // 3: powerset step on every label
    for (auto& n : t.nodes) {
      StateBits next(words_);
      n.label.for_each([&](StateId s) { next |= post_[s * nba_.letter_count() + letter]; });
      n.label = std::move(next);
    }
    // 4: a state stays only in the oldest branch that holds it
    horizontal_merge(t, 0);
    // 5-6: drop empty nodes; collapse nodes whose children cover their label
    if (t.nodes[0].label.empty()) return SafraTree{};
    prune(t, 0);
    return compact(t);
  }

 private:
  void remove_states(SafraTree& t, std::uint32_t v, const StateBits& states) const {
    t.nodes[v].label.subtract(states);
    for (auto c : t.nodes[v].children) remove_states(t, c, states);
  }

  void horizontal_merge(SafraTree& t, std::uint32_t v) const {
    StateBits seen(words_);
    for (auto c : t.nodes[v].children) {
      remove_states(t, c, seen);
      seen |= t.nodes[c].label;
    }
    for (auto c : t.nodes[v].children) horizontal_merge(t, c);
  }

  void prune(SafraTree& t, std::uint32_t v) const {
    auto& kids = t.nodes[v].children;
    kids.erase(std::remove_if(kids.begin(), kids.end(),
                              [&](std::uint32_t c) { return t.nodes[c].label.empty(); }),
               kids.end());
    StateBits covered(words_);
    for (auto c : t.nodes[v].children) covered |= t.nodes[c].label;
    if (!t.nodes[v].children.empty() && covered == t.nodes[v].label) {
      t.nodes[v].children.clear();
      t.nodes[v].marked = true;
      return;
    }
    for (auto c : t.nodes[v].children) prune(t, c);
  }

  static SafraTree compact(const SafraTree& t) {
    SafraTree out;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0, UINT32_MAX}};
    while (!stack.empty()) {
      auto [v, parent] = stack.back();
      stack.pop_back();
      auto idx = static_cast<std::uint32_t>(out.nodes.size());
      TreeNode n = t.nodes[v];
      auto kids = n.children;
      n.children.clear();
      out.nodes.push_back(std::move(n));
      if (parent != UINT32_MAX) out.nodes[parent].children.push_back(idx);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, idx});
    }
    return out;
  }

  const BuchiAutomaton& nba_;
  std::size_t words_;
  StateBits accepting_;
  std::vector<StateBits> post_;
};

}  // namespace

RabinAutomaton determinize(const BuchiAutomaton& nba, std::size_t state_cap) {
  Safra safra(nba);
  const std::size_t letters = nba.letter_count();
  const std::size_t names = 2 * nba.num_states() + 1;

  std::unordered_map<std::vector<std::uint64_t>, StateId, VectorHash> ids;
  std::vector<SafraTree> trees;
  std::vector<StateId> delta;

  auto id_of = [&](SafraTree t) {
    auto key = t.encode();
    auto [it, fresh] = ids.emplace(std::move(key), static_cast<StateId>(trees.size()));
    if (fresh) {
      if (trees.size() >= state_cap)
        throw CapExceeded("determinization exceeded the state cap of " + std::to_string(state_cap));
      trees.push_back(std::move(t));
    }
    return it->second;
  };

  id_of(safra.initial());
  for (StateId q = 0; q < trees.size(); ++q) {
    for (Letter l = 0; l < letters; ++l) {
      SafraTree next = safra.step(trees[q], l);
      delta.push_back(id_of(std::move(next)));
    }
  }

  RabinAutomaton dra(nba.ap(), trees.size(), 0);
  for (StateId q = 0; q < trees.size(); ++q)
    for (Letter l = 0; l < letters; ++l) dra.set_transition(q, l, delta[q * letters + l]);

  for (std::uint32_t name = 0; name < names; ++name) {
    RabinPair p{std::vector<char>(trees.size(), 0), std::vector<char>(trees.size(), 1)};
    bool any_marked = false;
    for (StateId q = 0; q < trees.size(); ++q) {
      for (const auto& n : trees[q].nodes) {
        if (n.name != name) continue;
        p.fin[q] = 0;
        if (n.marked) {
          p.inf[q] = 1;
          any_marked = true;
        }
      }
    }
    if (any_marked) dra.add_pair(std::move(p));
  }
  return dra;
}

}  // namespace ltlmon
