#pragma once

#include <vector>

#include "ltlmon/alphabet.hpp"
#include "ltlmon/formula.hpp"

namespace ltlmon {

/// The ultimately periodic word prefix . cycle^omega.
struct LassoWord {
  std::vector<Letter> prefix;
  std::vector<Letter> cycle;

  std::size_t length() const { return prefix.size() + cycle.size(); }
  /// Letter at an arbitrary position of the infinite word.
  Letter at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : cycle[(i - prefix.size()) % cycle.size()];
  }
};

/// Does prefix.cycle^omega satisfy f? Atoms are resolved against `ap`.
/// Throws std::invalid_argument for an empty cycle or an atom missing from `ap`.
bool lasso_models(const LassoWord& w, const Formula& f, const ApSet& ap);

/// Second, independent evaluator that follows the satisfaction relation literally,
/// searching bounded witnesses for U/R over an unrolling of the cycle. Slow; test use.
bool lasso_models_reference(const LassoWord& w, const Formula& f, const ApSet& ap);

}  // namespace ltlmon
