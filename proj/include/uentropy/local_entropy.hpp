#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uentropy/caratheodory.hpp"
#include "uentropy/markov.hpp"
#include "uentropy/sample.hpp"
#include "uentropy/systems.hpp"
#include "uentropy/unstable.hpp"

namespace uent {

// ---------------------------------------------------------------------------
// Measures on one leaf with exact Bowen-ball mass queries. Supported kinds:
//  * leaf Lebesgue and polynomial densities on a toral chart (closed-form
//    integrals),
//  * Markov/Bernoulli cylinder weights on a symbolic leaf,
//  * uniform measure conditioned on a subshift's admissible words,
//  * finite atomic measures,
//  * convex mixtures of the above.
// ---------------------------------------------------------------------------
class LeafMeasure {
 public:
  struct Mass {
    double value = 0.0;
    bool boundary_truncated = false;
  };

  static LeafMeasure leaf_lebesgue(LeafSegment seg);
  static LeafMeasure polynomial_density(LeafSegment seg, std::vector<double> coeffs);
  static LeafMeasure cylinder(std::shared_ptr<const DynSystem> sys, MarkovChain chain);
  // Uniform over the admissible words of `subshift` (a subsystem of `host`'s
  // alphabet), at the given horizon; cylinder masses are exact count ratios.
  static LeafMeasure conditioned_uniform(std::shared_ptr<const DynSystem> host,
                                         SymbolicSystem subshift, int horizon);
  static LeafMeasure atoms(std::shared_ptr<const DynSystem> sys, std::vector<Point> points,
                           std::vector<double> weights, std::optional<LeafSegment> seg = {});
  static LeafMeasure mixture(double theta, LeafMeasure a, LeafMeasure b);

  Mass ball_mass(const Point& x, int n, double eps) const;
  Mass ball_mass_param(double t, int n, double eps) const;  // toral kinds

  // Exact quadrature nodes for symbolic kinds: the generating cylinders at
  // the deepest ball depth the schedule will query, with their masses.
  std::vector<std::pair<Word, double>> quadrature_words(const CountSchedule& sched) const;

  bool is_symbolic() const;
  const LeafSegment* segment() const;  // toral kinds
  // Entropy rate through the ergodic-decomposition route: closed form for
  // Markov kinds, theta-combination for mixtures; nullopt otherwise.
  std::optional<double> entropy_rate() const;
  const MarkovChain* markov() const;

 private:
  LeafMeasure() = default;
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// Pointwise local unstable entropies via -1/n log mu(B^u_n(x, eps)).
// ---------------------------------------------------------------------------
struct LocalEntropyTrace {
  double eps = 0.0;
  std::vector<std::pair<int, double>> a;  // (n, a_n)
  bool truncated = false;                 // zero mass hit; trace cut short
};

struct LocalEntropyResult {
  double lower = 0.0;  // tail min at the smallest eps
  double upper = 0.0;  // tail max at the smallest eps
  std::vector<LocalEntropyTrace> traces;
  std::vector<std::string> flags;
};

LocalEntropyResult local_unstable_entropy(const LeafMeasure& mu, const Point& x,
                                          const CountSchedule& sched);
// Chart-parameter entry point for measures living on a toral leaf.
LocalEntropyResult local_unstable_entropy_param(const LeafMeasure& mu, double t,
                                                const CountSchedule& sched);

struct LocalEntropyField {
  std::vector<Point> points;
  std::vector<double> lower;
  std::vector<double> upper;
};

LocalEntropyField local_entropy_field(const LeafMeasure& mu, const std::vector<Point>& xs,
                                      const CountSchedule& sched, int threads = 1);

// ---------------------------------------------------------------------------
// Vitali selection: greedy largest-radius-first disjoint subfamily whose
// 3-eps enlargements (same depth) swallow every input ball.
// ---------------------------------------------------------------------------
struct VitaliBall {
  double center = 0.0;
  int depth = 1;
  double eps = 0.0;
  double radius = 0.0;  // eps * lambda_u^-(depth-1)
};

std::vector<std::size_t> vitali_select(const std::vector<VitaliBall>& balls);

// ---------------------------------------------------------------------------
// Distribution-principle and variational harnesses.
// ---------------------------------------------------------------------------
struct PrincipleVerdict {
  bool pass = false;
  bool hypothesis_met = false;
  double entropy_estimate = 0.0;
  double s = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

// Checks h_lower >= s at every sample point of Z, then asserts the Bowen
// estimate of Z stays above s - tol.
PrincipleVerdict distribution_principle_lower(const LeafMeasure& mu, const SubsetSample& z,
                                              const std::vector<Point>& hypothesis_points,
                                              double s, const CountSchedule& local_sched,
                                              const CoverSchedule& cover_sched,
                                              double s_hint, double tol = 0.05);

// Dual: h_lower <= s everywhere, Bowen estimate <= s + tol.
PrincipleVerdict distribution_principle_upper(const LeafMeasure& mu, const SubsetSample& z,
                                              const std::vector<Point>& hypothesis_points,
                                              double s, const CountSchedule& local_sched,
                                              const CoverSchedule& cover_sched,
                                              double s_hint, double tol = 0.05);

struct VariationalGap {
  double bowen_estimate = 0.0;
  double best_lower = 0.0;  // sup over the family of the quadrature mean of h_lower
  std::vector<double> per_measure;
  bool pass = false;
};

// Quadrature mean of the pointwise lower local entropy over mu.
double mean_lower_local_entropy(const LeafMeasure& mu, const CountSchedule& sched,
                                int quadrature_points = 33);

VariationalGap subset_variational_gap(const SubsetSample& k, const CoverSchedule& cover_sched,
                                      double s_hint, const std::vector<LeafMeasure>& family,
                                      const CountSchedule& local_sched, double tol = 0.05);

inline constexpr const char* kFlagBoundaryTruncated = "boundary_truncated";
inline constexpr const char* kFlagZeroMass = "zero_mass";

}  // namespace uent
