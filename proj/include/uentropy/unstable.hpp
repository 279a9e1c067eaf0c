#pragma once

#include <string>
#include <vector>

#include "uentropy/caratheodory.hpp"
#include "uentropy/sample.hpp"
#include "uentropy/systems.hpp"

namespace uent {

enum class EntropyKind { bowen, upper_capacity };

struct LeafEntropyEntry {
  std::vector<double> base_point;  // toral leaves
  Word cylinder;                   // symbolic leaves
  double delta = 0.0;              // segment radius, or base^depth for cylinders
  double estimate = 0.0;
  std::size_t sample_size = 0;
  std::vector<std::string> flags;
};

struct LeafEntropyReport {
  EntropyKind kind = EntropyKind::upper_capacity;
  std::vector<LeafEntropyEntry> per_leaf;
  double sup_estimate = 0.0;  // max over per_leaf
  std::vector<double> delta_schedule;
  std::vector<std::string> flags;
};

struct LeafOptions {
  int grid = 2001;            // points per leaf for counting
  int bowen_grid = 0;         // 0 = same as grid
  int threads = 1;
  // Estimates are repeated at delta * factor to exhibit delta-independence.
  std::vector<double> delta_factors = {0.5, 1.0, 2.0};
  // For the critical-exponent runs, eps is rescaled with the segment radius
  // so that the finite-depth bias log(delta/eps)/N stays fixed across the
  // delta schedule; the counting runs use the eps schedule as-is.
  bool scale_eps_with_delta = true;
};

// Bowen entropy of {predicate} intersected with each leaf W^u(x, delta) over
// the base grid; reports per-leaf values and their sup. Null predicate = all.
LeafEntropyReport unstable_bowen_entropy(const std::shared_ptr<const DynSystem>& sys,
                                         const Predicate& pred,
                                         const std::vector<std::vector<double>>& x_grid,
                                         double delta, const CoverSchedule& sched,
                                         const LeafOptions& opts = {});

LeafEntropyReport unstable_upper_capacity_entropy(const std::shared_ptr<const DynSystem>& sys,
                                                  const Predicate& pred,
                                                  const std::vector<std::vector<double>>& x_grid,
                                                  double delta, const CountSchedule& sched,
                                                  const LeafOptions& opts = {});

// Max over base points of (max - min over delta) of the leaf estimates.
double delta_independence_spread(const LeafEntropyReport& report);

// Leaf samples for one system/base/delta (used by harnesses that need the
// raw sample rather than a finished report).
SubsetSample system_leaf_sample(const std::shared_ptr<const DynSystem>& sys,
                                const std::vector<double>& base, double delta, int grid);

inline constexpr const char* kFlagUnreliableSmallDelta = "unreliable_small_delta";

}  // namespace uent
