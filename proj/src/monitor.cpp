#include "ltlmon/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ltlmon {

namespace {

std::uint64_t pack(StateId q, StateId s) { return (std::uint64_t{q} << 32) | s; }

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Unknown: return "?";
  }
  return "?";
}

double log_gamma_per_visit(double p_min) {
  if (p_min >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-p_min);
}

Confidence make_confidence(std::uint64_t m, double p_min) {
  Confidence c;
  c.m = m;
  if (m == 0) return c;
  c.log_gamma = static_cast<double>(m) * log_gamma_per_visit(p_min);
  c.infinite = std::isinf(c.log_gamma);
  return c;
}

Rational gamma_exact(std::uint64_t m, const Rational& p_min) {
  if (p_min >= 1) throw std::invalid_argument("gamma is infinite for p_min = 1");
  Rational base = 1 / (1 - p_min), out = 1;
  for (std::uint64_t i = 0; i < m; ++i) out *= base;
  return out;
}

MonitorAutomaton::MonitorAutomaton(RabinAutomaton a)
    : dra(std::move(a)), classes(classify_states(dra)), pairs(PairMembership::of(dra)) {}

// ---------------------------------------------------------------------------

Monitor::Monitor(std::shared_ptr<const MonitorAutomaton> automaton, double p_min, bool record)
    : automaton_(std::move(automaton)), p_min_(p_min), record_(record) {
  if (!(p_min > 0.0 && p_min <= 1.0)) throw std::invalid_argument("p_min must lie in (0, 1]");
}

StateId Monitor::find(StateId r) {
  while (parent_[r] != r) {
    parent_[r] = parent_[parent_[r]];
    r = parent_[r];
  }
  return r;
}

void Monitor::bump_exit(StateId r) {
  Frame& top = frames_.back();
  std::uint64_t old = exits_[r]++;
  if (old != top.min_exit) return;
  if (--top.at_min > 0) return;
  top.min_exit = std::numeric_limits<std::uint64_t>::max();
  for (auto x : top.members) {
    if (exits_[x] < top.min_exit) {
      top.min_exit = exits_[x];
      top.at_min = 1;
    } else if (exits_[x] == top.min_exit) {
      ++top.at_min;
    }
  }
}

void Monitor::merge_from(std::size_t pos) {
  if (pos + 1 >= frames_.size()) return;
  std::size_t largest = pos;
  for (std::size_t i = pos + 1; i < frames_.size(); ++i)
    if (frames_[i].members.size() > frames_[largest].members.size()) largest = i;
  Frame merged = std::move(frames_[largest]);
  for (std::size_t i = pos; i < frames_.size(); ++i) {
    if (i == largest) continue;
    Frame& f = frames_[i];
    parent_[f.root] = merged.root;
    merged.members.insert(merged.members.end(), f.members.begin(), f.members.end());
    merged.inf |= f.inf;
    merged.fin |= f.fin;
    if (f.min_exit < merged.min_exit) {
      merged.min_exit = f.min_exit;
      merged.at_min = f.at_min;
    } else if (f.min_exit == merged.min_exit) {
      merged.at_min += f.at_min;
    }
  }
  frames_.resize(pos);
  frame_pos_[merged.root] = static_cast<std::uint32_t>(pos);
  frames_.push_back(std::move(merged));
}

void Monitor::observe(StateId s, Letter letter) {
  const auto& a = automaton_->dra;
  StateId q = length_ == 0 ? a.initial() : a.next(q_, last_letter_);
  auto [it, fresh] = ids_.emplace(pack(q, s), static_cast<StateId>(keys_.size()));
  StateId r = it->second;
  if (fresh) {
    keys_.push_back({q, s});
    exits_.push_back(0);
    parent_.push_back(r);
    frame_pos_.push_back(0);
  }
  if (length_ > 0) {
    bump_exit(current_);
    if (record_) ++transitions_[pack(current_, r)];
  }
  if (fresh) {
    frame_pos_[r] = static_cast<std::uint32_t>(frames_.size());
    frames_.push_back({r, {r}, automaton_->pairs.inf[q], automaton_->pairs.fin[q], 0, 1});
    closed_ = false;
  } else {
    closed_ = true;
    merge_from(frame_pos_[find(r)]);
  }
  if (record_) trace_.push_back(r);
  q_ = q;
  last_letter_ = letter;
  current_ = r;
  ++length_;
}

Verdict Monitor::verdict() const {
  if (length_ == 0) return Verdict::Unknown;
  switch (automaton_->classes[q_]) {
    case StateClass::Universal: return Verdict::True;
    case StateClass::Empty: return Verdict::False;
    case StateClass::Other: break;
  }
  if (!closed_) return Verdict::Unknown;
  const Frame& top = frames_.back();
  return top.inf.has_outside(top.fin) ? Verdict::True : Verdict::False;
}

Confidence Monitor::confidence() const {
  Confidence c;
  if (length_ == 0) {
    c.infinite = c.vacuous = true;
    c.log_gamma = std::numeric_limits<double>::infinity();
    return c;
  }
  std::uint64_t m = closed_ ? frames_.back().min_exit : 0;
  if (automaton_->classes[q_] != StateClass::Other || !closed_) {
    c.m = m;
    c.infinite = true;
    c.vacuous = automaton_->classes[q_] == StateClass::Other;
    c.log_gamma = std::numeric_limits<double>::infinity();
    return c;
  }
  return make_confidence(m, p_min_);
}

std::uint64_t Monitor::transitions(StateId r, StateId r2) const {
  if (!record_) throw std::invalid_argument("monitor does not record transitions");
  auto it = transitions_.find(pack(r, r2));
  return it == transitions_.end() ? 0 : it->second;
}

std::vector<StateId> Monitor::bottom_component() const {
  if (frames_.empty()) return {};
  auto out = frames_.back().members;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<StateId>> Monitor::components() const {
  std::vector<std::vector<StateId>> out;
  for (const auto& f : frames_) {
    out.push_back(f.members);
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

ProductChain induced_chain(const Monitor& m, const std::vector<std::string>* system_names) {
  if (!m.recording()) throw std::invalid_argument("monitor does not record transitions");
  if (!m.closed()) throw std::invalid_argument("the induced chain is defined for closed traces only");
  const auto& pairs = m.automaton().pairs;
  ProductChain pc;
  pc.num_pairs = pairs.num_pairs;
  for (StateId r = 0; r < m.num_states(); ++r) {
    auto k = m.key(r);
    std::string sys = system_names ? system_names->at(k.s) : "s" + std::to_string(k.s);
    pc.add_state(sys + "@" + std::to_string(k.q), k.q, k.s, pairs.inf[k.q], pairs.fin[k.q]);
  }
  pc.chain.add_initial(m.trace().front(), 1);
  // Walk the trace once so rows come out in first-use order.
  std::unordered_map<std::uint64_t, char> seen;
  const auto& t = m.trace();
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    std::uint64_t key = pack(t[i], t[i + 1]);
    if (!seen.emplace(key, 1).second) continue;
    pc.chain.add_transition(t[i], t[i + 1],
                            Rational(m.transitions(t[i], t[i + 1])) / Rational(m.exits(t[i])));
  }
  return pc;
}

double likelihood(const MarkovChain& c, const std::vector<StateId>& trace) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  if (trace.empty()) return 0.0;
  double mu = c.initial_probability(trace.front()).convert_to<double>();
  if (mu <= 0) return neg_inf;
  double ll = std::log(mu);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    double p = c.probability_d(trace[i - 1], trace[i]);
    if (p <= 0) return neg_inf;
    ll += std::log(p);
  }
  return ll;
}

ProductChain escape_chain(const ProductChain& pc, StateId r, const Rational& c) {
  if (c <= 0 || c >= 1) throw std::invalid_argument("escape probability must lie in (0, 1)");
  auto d = scc_decompose(pc.chain);
  if (r >= pc.chain.size() || !d.bottom[d.component_of[r]])
    throw std::invalid_argument("escape state must lie in a bottom SCC");
  ProductChain out;
  out.num_pairs = pc.num_pairs;
  for (StateId s = 0; s < pc.chain.size(); ++s)
    out.add_state(pc.chain.name(s), pc.automaton_state[s], pc.system_state[s], pc.inf[s], pc.fin[s]);
  StateId sink = out.add_state("escape", kNoAutomatonState, kNoAutomatonState, PairSet(pc.num_pairs),
                               PairSet(pc.num_pairs));
  for (const auto& [s, p] : pc.chain.initial()) out.chain.add_initial(s, p);
  for (StateId s = 0; s < pc.chain.size(); ++s)
    for (const auto& t : pc.chain.row(s)) out.chain.add_transition(s, t.to, s == r ? t.p * (1 - c) : t.p);
  out.chain.add_transition(r, sink, c);
  out.chain.add_transition(sink, sink, 1);
  return out;
}

Rational verdict_probability(const ProductChain& pc, const std::vector<StateId>& trace) {
  if (trace.empty()) throw std::invalid_argument("empty trace");
  if (pc.chain.initial_probability(trace.front()) <= 0)
    throw std::invalid_argument("trace has zero likelihood");
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (pc.chain.probability(trace[i - 1], trace[i]) <= 0)
      throw std::invalid_argument("trace has zero likelihood");
  return sat_probability_from(pc, trace.back());
}

// ---------------------------------------------------------------------------

OnlineMonitor::OnlineMonitor(std::shared_ptr<const MonitorAutomaton> automaton, double p_min)
    : automaton_(std::move(automaton)), p_min_(p_min) {
  if (!(p_min > 0.0 && p_min <= 1.0)) throw std::invalid_argument("p_min must lie in (0, 1]");
}

std::uint32_t OnlineMonitor::find(std::uint32_t node) {
  while (parent_[node] != node) {
    parent_[node] = parent_[parent_[node]];
    node = parent_[node];
  }
  return node;
}

OnlineMonitor::Frame& OnlineMonitor::frame_of(std::uint32_t node) {
  return frames_[serial_[find(node)] - front_serial_];
}

void OnlineMonitor::insert(std::uint64_t key, StateId q) {
  if (total_ == bound_) {
    ++bound_;
    if (!frames_.empty()) {
      for (auto k : frames_.front().members) entries_.erase(k);
      total_ -= frames_.front().members.size();
      frames_.pop_front();
      ++front_serial_;
    }
  }
  auto node = static_cast<std::uint32_t>(parent_.size());
  parent_.push_back(node);
  serial_.push_back(front_serial_ + frames_.size());
  entries_[key] = {0, node};
  frames_.push_back({node, {key}, automaton_->pairs.inf[q], automaton_->pairs.fin[q], 0, 1});
  ++total_;
}

void OnlineMonitor::merge_from(std::size_t pos) {
  if (pos + 1 >= frames_.size()) return;
  std::size_t largest = pos;
  for (std::size_t i = pos + 1; i < frames_.size(); ++i)
    if (frames_[i].members.size() > frames_[largest].members.size()) largest = i;
  Frame merged = std::move(frames_[largest]);
  for (std::size_t i = pos; i < frames_.size(); ++i) {
    if (i == largest) continue;
    Frame& f = frames_[i];
    parent_[f.root] = merged.root;
    merged.members.insert(merged.members.end(), f.members.begin(), f.members.end());
    merged.inf |= f.inf;
    merged.fin |= f.fin;
    if (f.min_visit < merged.min_visit) {
      merged.min_visit = f.min_visit;
      merged.at_min = f.at_min;
    } else if (f.min_visit == merged.min_visit) {
      merged.at_min += f.at_min;
    }
  }
  frames_.resize(pos);
  serial_[merged.root] = front_serial_ + pos;
  frames_.push_back(std::move(merged));
}

void OnlineMonitor::observe(StateId s, Letter letter) {
  const auto& a = automaton_->dra;
  StateId q = length_ == 0 ? a.initial() : a.next(q_, last_letter_);
  std::uint64_t key = pack(q, s);
  if (length_ > 0) {
    Entry& e = entries_.at(current_);
    Frame& last = frames_.back();
    std::uint64_t old = e.vi++;
    if (old == last.min_visit && --last.at_min == 0) {
      last.min_visit = std::numeric_limits<std::uint64_t>::max();
      for (auto k : last.members) {
        std::uint64_t v = entries_.at(k).vi;
        if (v < last.min_visit) {
          last.min_visit = v;
          last.at_min = 1;
        } else if (v == last.min_visit) {
          ++last.at_min;
        }
      }
    }
  }
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.vi > 0) {
    std::uint32_t root = find(it->second.node);
    merge_from(serial_[root] - front_serial_);
  } else {
    insert(key, q);
  }
  q_ = q;
  last_letter_ = letter;
  current_ = key;
  ++length_;
}

bool OnlineMonitor::closed() const {
  if (length_ == 0) return false;
  return entries_.at(current_).vi > 0;
}

Verdict OnlineMonitor::verdict() const {
  if (length_ == 0) return Verdict::Unknown;
  switch (automaton_->classes[q_]) {
    case StateClass::Universal: return Verdict::True;
    case StateClass::Empty: return Verdict::False;
    case StateClass::Other: break;
  }
  if (!closed()) return Verdict::Unknown;
  const Frame& last = frames_.back();
  return last.inf.has_outside(last.fin) ? Verdict::True : Verdict::False;
}

Confidence OnlineMonitor::confidence() const {
  Confidence c;
  bool open = !closed();
  bool other = length_ > 0 && automaton_->classes[q_] == StateClass::Other;
  if (open || !other) {
    c.m = open ? 0 : frames_.back().min_visit;
    c.infinite = true;
    c.vacuous = other || length_ == 0;
    c.log_gamma = std::numeric_limits<double>::infinity();
    return c;
  }
  return make_confidence(frames_.back().min_visit, p_min_);
}

std::uint64_t OnlineMonitor::visits(ProductKey k) const {
  auto it = entries_.find(pack(k.q, k.s));
  return it == entries_.end() ? 0 : it->second.vi;
}

std::vector<std::vector<ProductKey>> OnlineMonitor::sccs() const {
  std::vector<std::vector<ProductKey>> out;
  for (const auto& f : frames_) {
    std::vector<std::uint64_t> keys = f.members;
    std::sort(keys.begin(), keys.end());
    auto& dst = out.emplace_back();
    for (auto k : keys) dst.push_back({static_cast<StateId>(k >> 32), static_cast<StateId>(k & 0xffffffffu)});
  }
  return out;
}

ProductKey OnlineMonitor::current() const {
  return {static_cast<StateId>(current_ >> 32), static_cast<StateId>(current_ & 0xffffffffu)};
}

}  // namespace ltlmon
