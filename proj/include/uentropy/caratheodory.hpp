#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "uentropy/sample.hpp"

namespace uent {

// Schedules. Counting runs over increasing n at each eps of a decreasing
// list; cover estimates run over (min depth N, eps) pairs with N increasing
// and eps decreasing.
struct CountSchedule {
  std::vector<int> n;
  std::vector<double> eps;
  void validate() const;
};

struct CoverSchedule {
  struct Pair {
    int min_depth;
    double eps;
  };
  std::vector<Pair> pairs;
  void validate() const;
};

// --------------------------------------------------------------------------
// Separated / spanning counts
// --------------------------------------------------------------------------
struct SeparatedResult {
  std::size_t count = 0;
  std::vector<std::size_t> witnesses;  // indices of a maximal separated set
  bool exact = false;                  // true when the count is a proven maximum
};

// Maximal (n, eps)-separated subset by greedy insertion in canonical index
// order. Exact for symbolic samples (separation is prefix disagreement) and
// for sorted 1-D leaf samples (left-to-right sweep).
SeparatedResult max_separated_count(const SubsetSample& s, int n, double eps);

// Size of an (n, eps)-spanning family of balls centered at sample points:
// minimum of the greedy set cover and the cover induced by a maximal
// separated set; brute-forced exactly when the sample has <= 15 points.
std::size_t min_spanning_count(const SubsetSample& s, int n, double eps);

// --------------------------------------------------------------------------
// Upper capacity (growth-rate) estimates
// --------------------------------------------------------------------------
struct SlopeDiagnostics {
  double eps = 0.0;
  double slope = 0.0;
  std::vector<std::pair<int, std::size_t>> counts;  // (n, separated count)
  bool saturated = false;  // some counts hit the sample size
};

struct UpperCapacityReport {
  double estimate = 0.0;  // slope at the smallest eps
  std::vector<SlopeDiagnostics> per_eps;
  std::vector<std::string> flags;
};

// Least-squares slope of log(count) over the tail (last half) of the
// n-schedule; saturated counts are excluded and flagged.
UpperCapacityReport upper_capacity_entropy(const SubsetSample& s, const CountSchedule& sched);

// --------------------------------------------------------------------------
// Weighted Bowen-ball covers and the critical exponent
// --------------------------------------------------------------------------
struct BowenBall {
  std::size_t center = 0;
  int depth = 0;
};

struct BowenBallCover {
  std::vector<BowenBall> balls;
  double eps = 0.0;
  double weight(double s) const;  // sum exp(-s * depth), strictly decreasing in s
};

enum class CoverMethod { exact_cover, greedy_cover };

struct CoverResult {
  double weight = 0.0;
  BowenBallCover cover;
  CoverMethod method = CoverMethod::exact_cover;
  bool feasible = true;
};

// Approximate infimum of sum exp(-s n_i) over verified covers of the sample
// by Bowen balls centered at sample points with depths in [min_depth, budget].
// Interval-structured spaces are solved exactly by a sweep DP; otherwise
// branch-and-bound when few candidate balls remain after dominance pruning,
// else the greedy ratio rule.
CoverResult weighted_cover_infimum(const SubsetSample& s, double s_exp, int min_depth,
                                   double eps);

// Spec'd heuristics, exposed for cross-checking against the exact route.
CoverResult cover_greedy(const SubsetSample& s, double s_exp, int min_depth, double eps);
CoverResult cover_branch_and_bound(const SubsetSample& s, double s_exp, int min_depth,
                                   double eps);

// Depth budget for covers of an m-point sample starting at min_depth.
int cover_depth_budget(const SubsetSample& s, int min_depth);

struct CriticalExponentReport {
  double s_star = 0.0;
  int depth_used = 0;
  double eps_used = 0.0;
  CoverMethod method = CoverMethod::exact_cover;
  double weight_at_s_star = 0.0;
  struct PerPair {
    int min_depth;
    double eps;
    double s;
    double weight;
  };
  std::vector<PerPair> per_pair;
  std::vector<std::string> flags;
};

// Critical exponent under the threshold-1 convention: the s where the finite
// cover weight crosses 1, located by bisection (tolerance 1e-3, <= 40 steps)
// for every (N, eps) pair; the final pair's value is reported.
CriticalExponentReport bowen_entropy_estimate(const SubsetSample& s, const CoverSchedule& sched,
                                              double s_hint);

// Flag vocabulary shared with reports.
inline constexpr const char* kFlagResolutionLimited = "resolution_limited";
inline constexpr const char* kFlagGreedyNonmonotone = "greedy_nonmonotone";
inline constexpr const char* kFlagEmptyIntersection = "empty_intersection";
inline constexpr const char* kFlagBracketExtended = "bracket_extended";

}  // namespace uent
