#include "ltlmon/markov.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace ltlmon {

namespace {

// cpp_int treats a leading 0 as an octal prefix.
boost::multiprecision::cpp_int decimal_integer(std::string_view digits) {
  auto first = digits.find_first_not_of('0');
  if (first == std::string_view::npos) return 0;
  return boost::multiprecision::cpp_int(std::string(digits.substr(first)));
}

}  // namespace

Rational parse_probability(std::string_view text) {
  auto bad = [&]() { return FormatError("invalid probability '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    auto num = text.substr(0, slash), den = text.substr(slash + 1);
    auto digits = [](std::string_view s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
    };
    if (!digits(num) || !digits(den)) throw bad();
    boost::multiprecision::cpp_int n = decimal_integer(num), d = decimal_integer(den);
    if (d == 0) throw bad();
    return Rational(n, d);
  }
  // decimal with optional exponent
  std::string mantissa(text), exponent;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = std::string(text.substr(0, e));
    exponent = std::string(text.substr(e + 1));
  }
  std::string digits;
  long scale = 0;
  bool seen_dot = false;
  for (char ch : mantissa) {
    if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits += ch;
      if (seen_dot) ++scale;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  if (!exponent.empty()) {
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exponent, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != exponent.size() || e > 300 || e < -300) throw bad();
    scale -= e;
  }
  boost::multiprecision::cpp_int n = decimal_integer(digits), p10 = 1;
  for (long i = 0; i < std::labs(scale); ++i) p10 *= 10;
  return scale >= 0 ? Rational(n, p10) : Rational(n * p10);
}

std::string to_string(const Rational& r) {
  auto num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

StateId MarkovChain::add_state(const std::string& name, std::vector<std::string> props) {
  if (index_.count(name)) throw std::invalid_argument("state '" + name + "' declared twice");
  auto id = static_cast<StateId>(names_.size());
  std::sort(props.begin(), props.end());
  props.erase(std::unique(props.begin(), props.end()), props.end());
  names_.push_back(name);
  index_.emplace(name, id);
  props_.push_back(std::move(props));
  rows_.emplace_back();
  return id;
}

void MarkovChain::add_initial(StateId s, const Rational& p) {
  if (s >= size()) throw std::out_of_range("initial state out of range");
  for (auto& [t, q] : initial_)
    if (t == s) {
      q += p;
      return;
    }
  initial_.emplace_back(s, p);
}

void MarkovChain::add_transition(StateId from, StateId to, const Rational& p) {
  if (from >= size() || to >= size()) throw std::out_of_range("transition state out of range");
  for (auto& t : rows_[from])
    if (t.to == to) {
      t.p += p;
      t.pd = t.p.convert_to<double>();
      return;
    }
  rows_[from].push_back({to, p, p.convert_to<double>()});
}

std::optional<StateId> MarkovChain::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Rational MarkovChain::initial_probability(StateId s) const {
  for (const auto& [t, p] : initial_)
    if (t == s) return p;
  return 0;
}

Rational MarkovChain::probability(StateId s, StateId t) const {
  for (const auto& tr : rows_.at(s))
    if (tr.to == t) return tr.p;
  return 0;
}

double MarkovChain::probability_d(StateId s, StateId t) const {
  for (const auto& tr : rows_.at(s))
    if (tr.to == t) return tr.pd;
  return 0.0;
}

std::vector<std::string> MarkovChain::ap_names() const {
  std::set<std::string> all;
  for (const auto& p : props_) all.insert(p.begin(), p.end());
  return {all.begin(), all.end()};
}

std::optional<Rational> MarkovChain::min_probability() const {
  std::optional<Rational> best;
  for (const auto& row : rows_)
    for (const auto& t : row)
      if (t.p > 0 && (!best || t.p < *best)) best = t.p;
  return best;
}

MarkovChain parse_chain(std::string_view text) {
  MarkovChain c;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto error = [&](const std::string& msg) {
    return FormatError("chain line " + std::to_string(lineno) + ": " + msg);
  };
  auto lookup = [&](const std::string& name) {
    auto id = c.find(name);
    if (!id) throw error("state '" + name + "' used before it is declared");
    return *id;
  };
  auto prob = [&](const std::string& s) {
    try {
      return parse_probability(s);
    } catch (const FormatError& e) {
      throw error(e.what());
    }
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok[0] == "state") {
      if (tok.size() < 2) throw error("expected 'state <id> [props <ap> ...]'");
      std::vector<std::string> props;
      if (tok.size() > 2) {
        if (tok[2] != "props") throw error("expected 'props' after the state id");
        props.assign(tok.begin() + 3, tok.end());
      }
      if (c.find(tok[1])) throw error("state '" + tok[1] + "' declared twice");
      c.add_state(tok[1], std::move(props));
    } else if (tok[0] == "init") {
      if (tok.size() != 3) throw error("expected 'init <id> <prob>'");
      c.add_initial(lookup(tok[1]), prob(tok[2]));
    } else if (tok[0] == "trans") {
      if (tok.size() != 4) throw error("expected 'trans <src> <dst> <prob>'");
      c.add_transition(lookup(tok[1]), lookup(tok[2]), prob(tok[3]));
    } else {
      throw error("unknown directive '" + tok[0] + "'");
    }
  }
  return c;
}

std::string print_chain(const MarkovChain& c) {
  std::ostringstream os;
  for (StateId s = 0; s < c.size(); ++s) {
    os << "state " << c.name(s);
    if (!c.props(s).empty()) {
      os << " props";
      for (const auto& p : c.props(s)) os << " " << p;
    }
    os << "\n";
  }
  for (const auto& [s, p] : c.initial()) os << "init " << c.name(s) << " " << to_string(p) << "\n";
  for (StateId s = 0; s < c.size(); ++s)
    for (const auto& t : c.row(s))
      os << "trans " << c.name(s) << " " << c.name(t.to) << " " << to_string(t.p) << "\n";
  return os.str();
}

std::vector<std::string> validate(const MarkovChain& c, const std::optional<Rational>& p_min) {
  std::vector<std::string> out;
  Rational mass = 0;
  for (const auto& [s, p] : c.initial()) {
    if (p < 0) out.push_back("initial probability of " + c.name(s) + " is negative");
    mass += p;
  }
  if (mass != 1) out.push_back("initial distribution sums to " + to_string(mass) + ", not 1");
  for (StateId s = 0; s < c.size(); ++s) {
    Rational sum = 0;
    for (const auto& t : c.row(s)) {
      if (t.p < 0) out.push_back("transition " + c.name(s) + " -> " + c.name(t.to) + " is negative");
      if (p_min && t.p > 0 && t.p < *p_min)
        out.push_back("transition " + c.name(s) + " -> " + c.name(t.to) + " has probability " +
                      to_string(t.p) + " below p_min " + to_string(*p_min));
      sum += t.p;
    }
    if (sum != 1) out.push_back("row " + c.name(s) + " sums to " + to_string(sum) + ", not 1");
  }
  return out;
}

// ---------------------------------------------------------------------------

PairMembership PairMembership::of(const RabinAutomaton& a) {
  PairMembership m;
  m.num_pairs = a.pairs().size();
  m.inf.assign(a.num_states(), PairSet(m.num_pairs));
  m.fin.assign(a.num_states(), PairSet(m.num_pairs));
  for (std::size_t i = 0; i < m.num_pairs; ++i)
    for (StateId q = 0; q < a.num_states(); ++q) {
      if (a.pairs()[i].inf[q]) m.inf[q].set(i);
      if (a.pairs()[i].fin[q]) m.fin[q].set(i);
    }
  return m;
}

StateId ProductChain::add_state(const std::string& name, StateId q, StateId s, PairSet in_inf,
                                PairSet in_fin) {
  StateId id = chain.add_state(name);
  automaton_state.push_back(q);
  system_state.push_back(s);
  inf.push_back(std::move(in_inf));
  fin.push_back(std::move(in_fin));
  return id;
}

bool ProductChain::is_good(const std::vector<StateId>& component) const {
  PairSet i(num_pairs), f(num_pairs);
  for (auto s : component) {
    i |= inf[s];
    f |= fin[s];
  }
  return i.has_outside(f);
}

ProductChain product(const RabinAutomaton& a, const MarkovChain& c) {
  ProductChain pc;
  PairMembership mem = PairMembership::of(a);
  pc.num_pairs = mem.num_pairs;
  std::vector<Letter> letter(c.size());
  for (StateId s = 0; s < c.size(); ++s) letter[s] = a.ap().letter_of(c.props(s));

  std::unordered_map<std::uint64_t, StateId> ids;
  std::vector<std::pair<StateId, StateId>> work;
  auto id_of = [&](StateId q, StateId s) {
    std::uint64_t key = (std::uint64_t{q} << 32) | s;
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    StateId id = pc.add_state(c.name(s) + "@" + std::to_string(q), q, s, mem.inf[q], mem.fin[q]);
    ids.emplace(key, id);
    work.emplace_back(q, s);
    return id;
  };
  for (const auto& [s, p] : c.initial())
    if (p > 0) pc.chain.add_initial(id_of(a.initial(), s), p);
  for (std::size_t i = 0; i < work.size(); ++i) {
    auto [q, s] = work[i];
    StateId from = static_cast<StateId>(i);
    StateId q2 = a.next(q, letter[s]);
    for (const auto& t : c.row(s))
      if (t.p > 0) pc.chain.add_transition(from, id_of(q2, t.to), t.p);
  }
  return pc;
}

std::string print_product(const ProductChain& pc) {
  MarkovChain labelled;
  for (StateId s = 0; s < pc.chain.size(); ++s) {
    std::vector<std::string> props;
    for (std::size_t i = 0; i < pc.num_pairs; ++i) {
      if (pc.inf[s].test(i)) props.push_back("rabin_inf_" + std::to_string(i));
      if (pc.fin[s].test(i)) props.push_back("rabin_fin_" + std::to_string(i));
    }
    labelled.add_state(pc.chain.name(s), std::move(props));
  }
  for (const auto& [s, p] : pc.chain.initial()) labelled.add_initial(s, p);
  for (StateId s = 0; s < pc.chain.size(); ++s)
    for (const auto& t : pc.chain.row(s)) labelled.add_transition(s, t.to, t.p);
  std::ostringstream os;
  os << "# product chain; labels rabin_inf_<i>/rabin_fin_<i> give Rabin pair membership\n";
  os << "# pairs " << pc.num_pairs << "\n";
  os << print_chain(labelled);
  return os.str();
}

ProductChain product_from_chain_file(const MarkovChain& c) {
  auto pair_index = [](const std::string& prop, const std::string& prefix) -> std::optional<std::size_t> {
    if (prop.rfind(prefix, 0) != 0) return std::nullopt;
    auto rest = prop.substr(prefix.size());
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return std::nullopt;
    return std::stoul(rest);
  };
  std::size_t pairs = 0;
  for (StateId s = 0; s < c.size(); ++s)
    for (const auto& p : c.props(s)) {
      if (auto i = pair_index(p, "rabin_inf_")) pairs = std::max(pairs, *i + 1);
      if (auto i = pair_index(p, "rabin_fin_")) pairs = std::max(pairs, *i + 1);
    }
  ProductChain pc;
  pc.num_pairs = pairs;
  for (StateId s = 0; s < c.size(); ++s) {
    PairSet inf(pairs), fin(pairs);
    for (const auto& p : c.props(s)) {
      if (auto i = pair_index(p, "rabin_inf_")) inf.set(*i);
      if (auto i = pair_index(p, "rabin_fin_")) fin.set(*i);
    }
    pc.add_state(c.name(s), kNoAutomatonState, s, std::move(inf), std::move(fin));
  }
  for (const auto& [s, p] : c.initial()) pc.chain.add_initial(s, p);
  for (StateId s = 0; s < c.size(); ++s)
    for (const auto& t : c.row(s)) pc.chain.add_transition(s, t.to, t.p);
  return pc;
}

// ---------------------------------------------------------------------------

Digraph graph_of(const MarkovChain& c) {
  Digraph g(c.size());
  for (StateId s = 0; s < c.size(); ++s)
    for (const auto& t : c.row(s))
      if (t.p > 0) g.add_edge(s, t.to);
  g.normalize();
  return g;
}

SccDecomposition scc_decompose(const MarkovChain& c) {
  Digraph g = graph_of(c);
  SccDecomposition d;
  d.components = strongly_connected_components(g);
  std::reverse(d.components.begin(), d.components.end());
  d.component_of.assign(c.size(), 0);
  for (std::uint32_t i = 0; i < d.components.size(); ++i)
    for (auto s : d.components[i]) d.component_of[s] = i;
  d.bottom.assign(d.components.size(), 1);
  for (StateId s = 0; s < c.size(); ++s)
    for (auto t : g.successors(s))
      if (d.component_of[t] != d.component_of[s]) d.bottom[d.component_of[s]] = 0;
  return d;
}

SccDecomposition scc_decompose(const ProductChain& pc) {
  SccDecomposition d = scc_decompose(pc.chain);
  d.good.resize(d.components.size());
  for (std::size_t i = 0; i < d.components.size(); ++i) d.good[i] = pc.is_good(d.components[i]);
  return d;
}

Rational absorption_probability(const MarkovChain& c, const SccDecomposition& d,
                                const std::vector<char>& target,
                                const std::vector<std::pair<StateId, Rational>>& start) {
  const std::size_t n = c.size();
  Digraph g = graph_of(c);
  std::vector<StateId> hit, miss;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    if (!d.bottom[i]) continue;
    auto& dst = target[i] ? hit : miss;
    dst.insert(dst.end(), d.components[i].begin(), d.components[i].end());
  }
  std::vector<char> can_hit = g.backward_reachable(hit);
  std::vector<char> can_miss = g.backward_reachable(miss);

  // known[s]: 0 or 1 when determined by graph structure alone
  std::vector<int> known(n, -1);
  std::vector<std::uint32_t> unknown_index(n, UINT32_MAX);
  std::vector<StateId> unknowns;
  for (StateId s = 0; s < n; ++s) {
    if (!can_hit[s]) known[s] = 0;
    else if (!can_miss[s]) known[s] = 1;
    else {
      unknown_index[s] = static_cast<std::uint32_t>(unknowns.size());
      unknowns.push_back(s);
    }
  }

  // x_s - sum_{t unknown} P(s,t) x_t = sum_{t known} P(s,t) known_t
  const std::size_t m = unknowns.size();
  std::vector<Rational> x(m);
  if (m > 0) {
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m + 1, 0));
    for (std::size_t i = 0; i < m; ++i) {
      a[i][i] = 1;
      for (const auto& t : c.row(unknowns[i])) {
        if (unknown_index[t.to] != UINT32_MAX) a[i][unknown_index[t.to]] -= t.p;
        else if (known[t.to] == 1) a[i][m] += t.p;
      }
    }
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t piv = col;
      while (piv < m && a[piv][col] == 0) ++piv;
      if (piv == m) throw std::runtime_error("singular reachability system");
      std::swap(a[piv], a[col]);
      Rational inv = 1 / a[col][col];
      for (std::size_t k = col; k <= m; ++k) a[col][k] *= inv;
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col || a[r][col] == 0) continue;
        Rational f = a[r][col];
        for (std::size_t k = col; k <= m; ++k)
          if (a[col][k] != 0) a[r][k] -= f * a[col][k];
      }
    }
    for (std::size_t i = 0; i < m; ++i) x[i] = a[i][m];
  }

  Rational result = 0;
  for (const auto& [s, p] : start) {
    if (known[s] >= 0) result += p * known[s];
    else result += p * x[unknown_index[s]];
  }
  return result;
}

Rational sat_probability(const ProductChain& pc) {
  auto d = scc_decompose(pc);
  return absorption_probability(pc.chain, d, d.good, pc.chain.initial());
}

Rational sat_probability_from(const ProductChain& pc, StateId s) {
  auto d = scc_decompose(pc);
  return absorption_probability(pc.chain, d, d.good, {{s, Rational(1)}});
}

// ---------------------------------------------------------------------------

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Sampler::Sampler(const MarkovChain& c, std::uint64_t seed) : chain_(c), rng_(seed) {
  double acc = 0;
  for (const auto& [s, p] : c.initial()) {
    if (p <= 0) continue;
    acc += p.convert_to<double>();
    init_cum_.push_back(acc);
    init_targets_.push_back(s);
  }
  cum_.resize(c.size());
  targets_.resize(c.size());
  for (StateId s = 0; s < c.size(); ++s) {
    acc = 0;
    for (const auto& t : c.row(s)) {
      if (t.p <= 0) continue;
      acc += t.pd;
      cum_[s].push_back(acc);
      targets_[s].push_back(t.to);
    }
  }
}

double Sampler::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

StateId Sampler::draw(const std::vector<double>& cumulative, const std::vector<StateId>& targets) {
  double u = uniform() * cumulative.back();
  for (std::size_t i = 0; i + 1 < cumulative.size(); ++i)
    if (u < cumulative[i]) return targets[i];
  return targets.back();
}

StateId Sampler::start() {
  if (init_targets_.empty()) throw std::runtime_error("chain has no initial state");
  return draw(init_cum_, init_targets_);
}

StateId Sampler::step(StateId s) {
  if (targets_.at(s).empty())
    throw std::runtime_error("state " + chain_.name(s) + " has no successors");
  return draw(cum_[s], targets_[s]);
}

std::vector<StateId> sample_run(const MarkovChain& c, std::uint64_t seed, std::size_t max_steps) {
  std::vector<StateId> run;
  if (max_steps == 0) return run;
  run.reserve(max_steps);
  Sampler sampler(c, seed);
  run.push_back(sampler.start());
  while (run.size() < max_steps) run.push_back(sampler.step(run.back()));
  return run;
}

}  // namespace ltlmon
