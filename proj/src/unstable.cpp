#include "uentropy/unstable.hpp"

#include <algorithm>
#include <cmath>

#include "uentropy/parallel.hpp"

namespace uent {

namespace {

struct LeafSpec {
  std::vector<double> base;
  Word cylinder;
  double delta = 0.0;
  double eps_scale = 1.0;
};

// One entry per (base point, delta factor). Symbolic systems have a single
// leaf; the delta schedule is realized by cylinder depths instead.
std::vector<LeafSpec> leaf_specs(const DynSystem& sys,
                                 const std::vector<std::vector<double>>& x_grid, double delta,
                                 const LeafOptions& opts, std::vector<double>* delta_schedule) {
  std::vector<LeafSpec> specs;
  if (const auto* sym = symbolic(sys)) {
    const double base = sym->metric_base;
    // depth-0 (whole space) and a depth-1 cylinder stand in for two deltas
    for (int depth : {0, 1}) {
      LeafSpec spec;
      if (depth == 1) spec.cylinder.push_back(0);
      spec.delta = std::pow(base, depth);
      spec.eps_scale = 1.0;
      specs.push_back(std::move(spec));
      delta_schedule->push_back(std::pow(base, depth));
    }
    return specs;
  }
  for (double f : opts.delta_factors) {
    const double d = delta * f;
    if (!(d > 0.0) || d >= kMaxLeafRadius) continue;
    delta_schedule->push_back(d);
  }
  std::sort(delta_schedule->begin(), delta_schedule->end());
  for (const auto& x : x_grid) {
    for (double d : *delta_schedule) {
      LeafSpec spec;
      spec.base = x;
      spec.delta = d;
      spec.eps_scale = opts.scale_eps_with_delta ? d / delta : 1.0;
      specs.push_back(std::move(spec));
    }
  }
  return specs;
}

SubsetSample build_leaf_sample(const std::shared_ptr<const DynSystem>& sys, const LeafSpec& spec,
                               int grid) {
  if (symbolic(*sys)) {
    return leaf_sample(LeafSegment::symbolic_leaf(sys, spec.cylinder), grid);
  }
  return leaf_sample(LeafSegment::toral_leaf(sys, spec.base, spec.delta), grid);
}

LeafEntropyEntry make_entry(const LeafSpec& spec, double estimate, std::size_t m,
                            std::vector<std::string> flags) {
  LeafEntropyEntry e;
  e.base_point = spec.base;
  e.cylinder = spec.cylinder;
  e.delta = spec.delta;
  e.estimate = estimate;
  e.sample_size = m;
  e.flags = std::move(flags);
  return e;
}

void finalize(LeafEntropyReport& rep) {
  rep.sup_estimate = 0.0;
  for (const auto& e : rep.per_leaf) rep.sup_estimate = std::max(rep.sup_estimate, e.estimate);
  for (const auto& e : rep.per_leaf) {
    for (const auto& f : e.flags) {
      if (std::find(rep.flags.begin(), rep.flags.end(), f) == rep.flags.end()) {
        rep.flags.push_back(f);
      }
    }
  }
}

}  // namespace

SubsetSample system_leaf_sample(const std::shared_ptr<const DynSystem>& sys,
                                const std::vector<double>& base, double delta, int grid) {
  LeafSpec spec;
  spec.base = base;
  spec.delta = delta;
  return build_leaf_sample(sys, spec, grid);
}

LeafEntropyReport unstable_bowen_entropy(const std::shared_ptr<const DynSystem>& sys,
                                         const Predicate& pred,
                                         const std::vector<std::vector<double>>& x_grid,
                                         double delta, const CoverSchedule& sched,
                                         const LeafOptions& opts) {
  sched.validate();
  LeafEntropyReport rep;
  rep.kind = EntropyKind::bowen;
  const auto specs = leaf_specs(*sys, x_grid, delta, opts, &rep.delta_schedule);
  rep.per_leaf.resize(specs.size());
  const double hint = entropy_upper_hint(*sys);
  const int grid = opts.bowen_grid > 0 ? opts.bowen_grid : opts.grid;

  parallel_for(specs.size(), opts.threads, [&](std::size_t i) {
    const auto& spec = specs[i];
    SubsetSample sample = build_leaf_sample(sys, spec, grid);
    sample = filter_sample(sample, pred);
    std::vector<std::string> flags;
    if (sample.size() == 0) {
      flags.push_back(kFlagEmptyIntersection);
      rep.per_leaf[i] = make_entry(spec, 0.0, 0, std::move(flags));
      return;
    }
    CoverSchedule scaled = sched;
    for (auto& p : scaled.pairs) p.eps *= spec.eps_scale;
    if (spec.delta > 0.0 && sample.resolution > 0.0 && spec.delta < 10.0 * sample.resolution) {
      flags.push_back(kFlagUnreliableSmallDelta);
    }
    const auto est = bowen_entropy_estimate(sample, scaled, hint);
    for (const auto& f : est.flags) flags.push_back(f);
    rep.per_leaf[i] = make_entry(spec, est.s_star, sample.size(), std::move(flags));
  });
  finalize(rep);
  return rep;
}

LeafEntropyReport unstable_upper_capacity_entropy(const std::shared_ptr<const DynSystem>& sys,
                                                  const Predicate& pred,
                                                  const std::vector<std::vector<double>>& x_grid,
                                                  double delta, const CountSchedule& sched,
                                                  const LeafOptions& opts) {
  sched.validate();
  LeafEntropyReport rep;
  rep.kind = EntropyKind::upper_capacity;
  const auto specs = leaf_specs(*sys, x_grid, delta, opts, &rep.delta_schedule);
  rep.per_leaf.resize(specs.size());

  parallel_for(specs.size(), opts.threads, [&](std::size_t i) {
    const auto& spec = specs[i];
    SubsetSample sample = build_leaf_sample(sys, spec, opts.grid);
    sample = filter_sample(sample, pred);
    std::vector<std::string> flags;
    if (sample.size() == 0) {
      flags.push_back(kFlagEmptyIntersection);
      rep.per_leaf[i] = make_entry(spec, 0.0, 0, std::move(flags));
      return;
    }
    const auto uc = upper_capacity_entropy(sample, sched);
    flags.insert(flags.end(), uc.flags.begin(), uc.flags.end());
    rep.per_leaf[i] = make_entry(spec, uc.estimate, sample.size(), std::move(flags));
  });
  finalize(rep);
  return rep;
}

double delta_independence_spread(const LeafEntropyReport& report) {
  // group entries by base point (cylinder depths realize the delta schedule
  // on symbolic systems), spread = max - min over delta within a group
  double spread = 0.0;
  for (std::size_t i = 0; i < report.per_leaf.size(); ++i) {
    double lo = report.per_leaf[i].estimate;
    double hi = lo;
    for (std::size_t j = 0; j < report.per_leaf.size(); ++j) {
      if (report.per_leaf[j].base_point == report.per_leaf[i].base_point) {
        lo = std::min(lo, report.per_leaf[j].estimate);
        hi = std::max(hi, report.per_leaf[j].estimate);
      }
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

}  // namespace uent
