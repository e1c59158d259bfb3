#include "ltlmon/graph.hpp"

#include <algorithm>
#include <deque>

namespace ltlmon {

void Digraph::normalize() {
  for (auto& v : adj_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
}

bool Digraph::has_edge(std::uint32_t from, std::uint32_t to) const {
  const auto& v = adj_[from];
  return std::find(v.begin(), v.end(), to) != v.end();
}

bool Digraph::is_nontrivial(const std::vector<std::uint32_t>& scc) const {
  return scc.size() > 1 || (scc.size() == 1 && has_edge(scc[0], scc[0]));
}

std::vector<char> Digraph::forward_reachable(const std::vector<std::uint32_t>& from) const {
  std::vector<char> seen(size(), 0);
  std::vector<std::uint32_t> stack;
  for (auto v : from)
    if (!seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto w : adj_[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return seen;
}

std::vector<char> Digraph::backward_reachable(const std::vector<std::uint32_t>& to) const {
  Digraph rev(size());
  for (std::uint32_t v = 0; v < size(); ++v)
    for (auto w : adj_[v]) rev.add_edge(w, v);
  return rev.forward_reachable(to);
}

Digraph Digraph::induced(const std::vector<char>& keep) const {
  Digraph g(size());
  for (std::uint32_t v = 0; v < size(); ++v) {
    if (!keep[v]) continue;
    for (auto w : adj_[v])
      if (keep[w]) g.add_edge(v, w);
  }
  return g;
}

std::vector<std::vector<std::uint32_t>> strongly_connected_components(const Digraph& g) {
  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  const std::size_t n = g.size();
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> out;
  std::uint32_t counter = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t next_child;
  };
  std::vector<Frame> call;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = g.successors(f.v);
      if (f.next_child < succ.size()) {
        std::uint32_t w = succ[f.next_child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::uint32_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  return out;
}

}  // namespace ltlmon
