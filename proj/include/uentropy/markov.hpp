#pragma once

#include <random>
#include <vector>

#include "uentropy/systems.hpp"

namespace uent {

// Stationary or non-stationary Markov chain on the symbols of an SFT.
// Transition probabilities must be supported on allowed transitions.
struct MarkovChain {
  std::vector<double> initial;               // distribution over symbols
  std::vector<std::vector<double>> rows;     // row-stochastic on the support

  static MarkovChain bernoulli(std::vector<double> probs);
  // Entropy-maximizing chain of an irreducible SFT, from the leading
  // eigendata of the transition matrix.
  static MarkovChain parry(const SymbolicSystem& sys);

  void validate(const SymbolicSystem& sys) const;

  int alphabet() const { return static_cast<int>(initial.size()); }
  double cylinder_weight(std::span<const Symbol> w) const;
  double log_cylinder_weight(std::span<const Symbol> w) const;

  std::vector<double> stationary() const;  // left fixed vector of `rows`
  double entropy_rate() const;             // -sum_a pi_a sum_b P_ab log P_ab
  double expected_value(const std::vector<double>& per_symbol) const;

  Word sample_word(int length, std::mt19937_64& rng) const;
};

// Leading eigenvalue and right eigenvector of a nonnegative primitive matrix
// by power iteration (tolerance 1e-12, at most 10000 sweeps).
struct PowerResult {
  double eigenvalue = 0.0;
  std::vector<double> vector;  // normalized, positive
  int iterations = 0;
};
PowerResult power_iteration(const std::vector<std::vector<double>>& m);

}  // namespace uent
