#include "ltlmon/oracle.hpp"

namespace ltlmon {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& atoms, std::size_t size) {
  if (size == 0) throw std::invalid_argument("formula size must be positive");
  if (size == 1) {
    std::size_t k = pick(rng, atoms.size() + 2);
    if (k == atoms.size()) return Formula::top();
    if (k == atoms.size() + 1) return Formula::bottom();
    return Formula::atom(atoms[k]);
  }
  bool unary = size == 2 || pick(rng, 2) == 0;
  if (unary) {
    Formula sub = random_formula(rng, atoms, size - 1);
    switch (pick(rng, 4)) {
      case 0: return Formula::negation(sub);
      case 1: return Formula::next(sub);
      case 2: return Formula::eventually(sub);
      default: return Formula::always(sub);
    }
  }
  std::size_t left = 1 + pick(rng, size - 2);
  Formula l = random_formula(rng, atoms, left);
  Formula r = random_formula(rng, atoms, size - 1 - left);
  switch (pick(rng, 4)) {
    case 0: return Formula::conjunction(l, r);
    case 1: return Formula::disjunction(l, r);
    case 2: return Formula::until(l, r);
    default: return Formula::release(l, r);
  }
}

LassoWord random_lasso(std::mt19937_64& rng, std::size_t letter_count, std::size_t max_prefix,
                       std::size_t max_cycle) {
  LassoWord w;
  w.prefix.resize(pick(rng, max_prefix + 1));
  w.cycle.resize(1 + pick(rng, max_cycle));
  for (auto& l : w.prefix) l = static_cast<Letter>(pick(rng, letter_count));
  for (auto& l : w.cycle) l = static_cast<Letter>(pick(rng, letter_count));
  return w;
}

std::string to_string(const LassoWord& w, const ApSet& ap) {
  std::string out;
  for (Letter l : w.prefix) out += ap.letter_to_string(l) + " ";
  out += "(";
  for (std::size_t i = 0; i < w.cycle.size(); ++i) out += (i ? " " : "") + ap.letter_to_string(w.cycle[i]);
  return out + ")^w";
}

OracleReport oracle_check(const Formula& f, const RabinAutomaton& dra, std::size_t samples,
                          std::uint64_t seed, std::size_t max_prefix, std::size_t max_cycle) {
  std::mt19937_64 rng(seed);
  OracleReport rep;
  for (std::size_t i = 0; i < samples; ++i) {
    LassoWord w = random_lasso(rng, dra.letter_count(), max_prefix, max_cycle);
    ++rep.samples;
    if (accepts_lasso(dra, w) != lasso_models(w, f, dra.ap())) {
      ++rep.disagreements;
      if (rep.examples.size() < 5) rep.examples.push_back(to_string(w, dra.ap()));
    }
  }
  return rep;
}

}  // namespace ltlmon
