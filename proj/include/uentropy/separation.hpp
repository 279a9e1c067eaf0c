#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uentropy/markov.hpp"
#include "uentropy/multifractal.hpp"
#include "uentropy/sample.hpp"
#include "uentropy/systems.hpp"

namespace uent {

// phi(rho) = -rho log rho - (1-rho) log(1-rho), natural log, phi(0)=phi(1)=0.
double binary_entropy(double rho);

int hamming_distance(const Word& a, const Word& b);

// Exact Hamming-ball cardinality sum_{i<=r} C(n,i) (k-1)^i next to the
// exponential bound e^{n phi(r/n)} (k-1)^r. The bound dominates whenever
// 0 < r/n <= 1 - 1/k.
struct HammingBallSize {
  unsigned __int128 exact = 0;
  double log_exact = 0.0;
  double bound = 0.0;
  std::string exact_str() const;
};
HammingBallSize hamming_ball_size(int n, int r, int k);

// Greedy maximal subset with pairwise Hamming distance > threshold,
// lexicographic insertion order. Never extendable.
std::vector<std::size_t> max_hamming_separated(const std::vector<Word>& words, int threshold);
// Exact maximum by branch and bound; intended for <= 24 words.
std::vector<std::size_t> max_hamming_separated_exact(const std::vector<Word>& words,
                                                     int threshold);

// --------------------------------------------------------------------------
// (rho, n, eps) u-separation
// --------------------------------------------------------------------------
struct SeparationConfig {
  double rho = 0.5;
  double eps = 0.5;
  int n = 1;
  int required_indices() const;  // ceil(rho * n), at least 1
  void validate() const;
};

// Number of indices j < n with d^u(f^j y, f^j z) > eps.
int separated_index_count(const BowenSpace& space, std::size_t i, std::size_t j, int n,
                          double eps);
int separated_index_count_words(const Word& a, const Word& b, int n, double eps, double base);

struct RhoSeparatedResult {
  std::size_t count = 0;
  std::vector<std::size_t> witnesses;
  bool exact = false;
  std::vector<std::string> flags;
};

// Maximal (rho, n, eps) u-separated subset of the sample restricted to the
// weak* neighborhood (when a family and center are given). Exact by branch
// and bound on small restrictions, greedy otherwise.
struct WeakStarNeighborhood {
  TestFamily family;
  std::vector<double> center;
  double tau = 0.02;
  bool contains(const DynSystem& sys, const PointView& p, int n) const;
};

RhoSeparatedResult rho_separated_count(const DynSystem& sys, const SubsetSample& sample,
                                       const std::optional<WeakStarNeighborhood>& F,
                                       const SeparationConfig& cfg);

inline constexpr const char* kFlagNeighborhoodEmpty = "neighborhood_empty";

// --------------------------------------------------------------------------
// Separation-rate quantities: growth rates of separated counts inside
// shrinking weak* neighborhoods; for ergodic oracles both should bracket the
// measure entropy.
// --------------------------------------------------------------------------
struct SQuantities {
  double s_lower = 0.0;
  double s_upper = 0.0;
  struct PerTau {
    double tau;
    double lower_slope;
    double upper_slope;
  };
  std::vector<PerTau> per_tau;
  bool exact = false;
};

// Symbolic route. The neighborhood is the window |freq - center| <= tau for
// the depth-1 indicator family; counts are exact constrained word counts.
SQuantities s_quantities_symbolic(const SymbolicSystem& sys, const std::vector<int>& v,
                                  double center, const std::vector<double>& taus,
                                  const std::vector<int>& n_schedule);

// --------------------------------------------------------------------------
// Tree-labeled orbit gluing
// --------------------------------------------------------------------------
struct GluingPlan {
  std::vector<std::vector<Word>> blocks;  // Gamma'_1..Gamma'_k, uniform length each
  double rho_star = 0.0;                  // separation claimed for glued words
  double eps_star = 0.5;
};

struct GluingResult {
  std::vector<Word> words;
  std::size_t expected = 0;  // product of block-set sizes
  bool cardinality_ok = false;
  int bridge_length = 0;  // symbols inserted at each seam (0 on full shifts)
  int glued_length = 0;
  bool separation_ok = false;      // exhaustive pairwise check
  int min_separated_indices = 0;   // over distinct pairs
  int required_indices = 0;
};

// Concatenates one block from each set; SFT seams get a fixed-length bridge
// (the shortest length that joins every symbol pair, from the primitivity
// power). Verifies cardinality and the (rho*, n, eps*)-separation of distinct
// glued words pair by pair.
GluingResult glue_orbits(const SymbolicSystem& sys, const GluingPlan& plan);

// --------------------------------------------------------------------------
// Uniform-separation probe
// --------------------------------------------------------------------------
struct UniformSeparationProbe {
  double kappa = 0.0;
  double kappa_prime = 0.0;
  double rho_star = 0.0;
  int hamming_threshold = 0;
  bool feasible = false;
  double min_feasible_kappa = 0.0;
  int n = 0;
  std::size_t typical_count = 0;    // |Xi_n|
  std::size_t separated_count = 0;  // |Xi'_n|
  double achieved = 0.0;            // log|Xi'_n| / n
  double target = 0.0;              // h_mu - kappa
  double h_mu = 0.0;
  bool pass = false;
};

// Instantiates the uniform-separation constants at desk scale: picks
// (kappa', rho*) on a grid satisfying
//   phi(rho* + 2 kappa') + (rho* + 2 kappa') log(2k-1) < kappa - kappa',
// builds Xi_n from mu-typical words and extracts a maximal Hamming-separated
// subfamily, reporting log|Xi'_n|/n against h_mu - kappa.
UniformSeparationProbe uniform_separation_probe(const SymbolicSystem& sys,
                                                const MarkovChain& mu, double kappa, int n);

}  // namespace uent
