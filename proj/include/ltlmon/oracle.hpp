#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ltlmon/automata.hpp"
#include "ltlmon/lasso.hpp"

namespace ltlmon {

/// Uniformly shaped random formula with exactly `size` nodes over `atoms`.
Formula random_formula(std::mt19937_64& rng, const std::vector<std::string>& atoms, std::size_t size);

/// Prefix length in [0, max_prefix], cycle length in [1, max_cycle].
LassoWord random_lasso(std::mt19937_64& rng, std::size_t letter_count, std::size_t max_prefix,
                       std::size_t max_cycle);

std::string to_string(const LassoWord& w, const ApSet& ap);

struct OracleReport {
  std::size_t samples = 0;
  std::size_t disagreements = 0;
  std::vector<std::string> examples;  // first few disagreeing words
};

/// Compares DRA lasso acceptance with the direct lasso evaluator on random words.
OracleReport oracle_check(const Formula& f, const RabinAutomaton& dra, std::size_t samples,
                          std::uint64_t seed, std::size_t max_prefix = 8, std::size_t max_cycle = 8);

}  // namespace ltlmon
