#include "uentropy/caratheodory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uentropy/errors.hpp"

namespace uent {

void CountSchedule::validate() const {
  if (n.empty() || eps.empty()) throw ValidationError("counting schedule must be nonempty");
  for (std::size_t i = 1; i < n.size(); ++i) {
    if (n[i] <= n[i - 1]) throw ValidationError("n schedule must be strictly increasing");
  }
  for (std::size_t i = 1; i < eps.size(); ++i) {
    if (eps[i] > eps[i - 1]) throw ValidationError("eps schedule must be non-increasing");
  }
  if (n.front() < 1) throw ValidationError("n must start at 1 or later");
  for (double e : eps) {
    if (!(e > 0.0)) throw ValidationError("eps must be positive");
  }
}

void CoverSchedule::validate() const {
  if (pairs.empty()) throw ValidationError("cover schedule must be nonempty");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].min_depth < 1) throw ValidationError("cover depth must be at least 1");
    if (!(pairs[i].eps > 0.0)) throw ValidationError("eps must be positive");
    if (i > 0 && pairs[i].min_depth < pairs[i - 1].min_depth) {
      throw ValidationError("cover depths must be non-decreasing");
    }
    if (i > 0 && pairs[i].eps > pairs[i - 1].eps) {
      throw ValidationError("cover eps must be non-increasing");
    }
  }
}

// ---------------------------------------------------------------------------
// separated / spanning counts
// ---------------------------------------------------------------------------
SeparatedResult max_separated_count(const SubsetSample& s, int n, double eps) {
  if (n < 1) throw ValidationError("n must be at least 1");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  SeparatedResult res;
  const std::size_t m = s.size();
  if (m == 0) return res;

  if (auto classes = s.space->ball_classes(n, eps)) {
    // separation is prefix disagreement: one representative per class
    std::uint32_t last = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t i = 0; i < m; ++i) {
      if ((*classes)[i] != last) {
        res.witnesses.push_back(i);
        last = (*classes)[i];
      }
    }
    res.count = res.witnesses.size();
    res.exact = true;
    return res;
  }

  if (const auto* leaf = dynamic_cast<const ToralLeafSample*>(s.space.get())) {
    // sorted 1-D sweep; greedy in index order is a maximum here
    const auto& t = leaf->params();
    const double thr = eps * std::pow(leaf->lambda_u(), -(n - 1));
    res.witnesses.push_back(0);
    for (std::size_t i = 1; i < m; ++i) {
      if (t[i] - t[res.witnesses.back()] > thr) res.witnesses.push_back(i);
    }
    res.count = res.witnesses.size();
    res.exact = true;
    return res;
  }

  // generic greedy insertion in index order
  for (std::size_t i = 0; i < m; ++i) {
    bool ok = true;
    for (std::size_t w : res.witnesses) {
      if (s.space->bowen_dist(i, w, n) <= eps) {
        ok = false;
        break;
      }
    }
    if (ok) res.witnesses.push_back(i);
  }
  res.count = res.witnesses.size();
  return res;
}

namespace {

std::size_t greedy_point_cover(const BowenSpace& space, int n, double eps) {
  const std::size_t m = space.size();
  std::vector<IndexRange> ranges(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto r = space.cover_range(i, n, eps, /*patch=*/false);
    ranges[i] = r.value_or(IndexRange{i, i});
  }
  std::vector<char> covered(m, 0);
  std::size_t covered_count = 0, used = 0;
  while (covered_count < m) {
    std::size_t best = m, best_gain = 0;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t gain = 0;
      for (std::size_t j = ranges[i].lo; j <= ranges[i].hi; ++j) gain += !covered[j];
      if (gain > best_gain) {
        best_gain = gain;
        best = i;
      }
    }
    if (best == m) break;  // cannot happen: every point covers itself
    for (std::size_t j = ranges[best].lo; j <= ranges[best].hi; ++j) {
      if (!covered[j]) {
        covered[j] = 1;
        ++covered_count;
      }
    }
    ++used;
  }
  return used;
}

std::size_t exact_point_cover(const BowenSpace& space, int n, double eps) {
  const std::size_t m = space.size();
  std::vector<std::uint32_t> masks(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    auto r = space.cover_range(i, n, eps, /*patch=*/false);
    IndexRange range = r.value_or(IndexRange{i, i});
    for (std::size_t j = range.lo; j <= range.hi; ++j) masks[i] |= (1u << j);
  }
  const std::uint32_t full = m == 32 ? ~0u : ((1u << m) - 1);
  std::size_t best = m;
  for (std::uint32_t subset = 0; subset < (1u << m); ++subset) {
    const std::size_t bits = static_cast<std::size_t>(__builtin_popcount(subset));
    if (bits >= best) continue;
    std::uint32_t cov = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (subset & (1u << i)) cov |= masks[i];
    }
    if (cov == full) best = bits;
  }
  return best;
}

}  // namespace

std::size_t min_spanning_count(const SubsetSample& s, int n, double eps) {
  if (n < 1) throw ValidationError("n must be at least 1");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  const std::size_t m = s.size();
  if (m == 0) return 0;

  if (auto classes = s.space->ball_classes(n, eps)) {
    // balls are exactly the classes: class count is the optimal cover
    return static_cast<std::size_t>((*classes).back()) + 1;
  }
  if (m <= 15) return exact_point_cover(*s.space, n, eps);

  // a maximal separated set induces a cover; keep the better of the two
  const std::size_t greedy = greedy_point_cover(*s.space, n, eps);
  const std::size_t induced = max_separated_count(s, n, eps).count;
  return std::min(greedy, induced);
}

// ---------------------------------------------------------------------------
// upper capacity
// ---------------------------------------------------------------------------
namespace {

double least_squares_slope(const std::vector<std::pair<int, double>>& pts) {
  if (pts.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += static_cast<double>(x) * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(pts.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (k * sxy - sx * sy) / denom;
}

}  // namespace

UpperCapacityReport upper_capacity_entropy(const SubsetSample& s, const CountSchedule& sched) {
  sched.validate();
  UpperCapacityReport rep;
  const std::size_t m = s.size();
  if (m == 0) {
    rep.flags.push_back(kFlagEmptyIntersection);
    return rep;
  }

  for (double eps : sched.eps) {
    SlopeDiagnostics diag;
    diag.eps = eps;
    std::vector<std::pair<int, double>> usable;  // (n, log count) before saturation
    for (int n : sched.n) {
      const std::size_t c = max_separated_count(s, n, eps).count;
      diag.counts.emplace_back(n, c);
      if ((c >= m && m > 1) || s.space->resolution_exhausted(n, eps)) {
        diag.saturated = true;
      } else if (!diag.saturated) {
        usable.emplace_back(n, std::log(static_cast<double>(c)));
      }
    }
    if (diag.saturated && std::find(rep.flags.begin(), rep.flags.end(), kFlagResolutionLimited) ==
                              rep.flags.end()) {
      rep.flags.push_back(kFlagResolutionLimited);
    }
    // tail = last half of the usable range
    const std::size_t tail_len = std::max<std::size_t>(2, (usable.size() + 1) / 2);
    std::vector<std::pair<int, double>> tail;
    if (usable.size() >= 2) {
      tail.assign(usable.end() - std::min(tail_len, usable.size()), usable.end());
    } else {
      tail = usable;
    }
    diag.slope = least_squares_slope(tail);
    rep.per_eps.push_back(std::move(diag));
  }
  rep.estimate = rep.per_eps.back().slope;  // smallest eps
  return rep;
}

// ---------------------------------------------------------------------------
// weighted covers
// ---------------------------------------------------------------------------
double BowenBallCover::weight(double s) const {
  double w = 0.0;
  for (const auto& b : balls) w += std::exp(-s * b.depth);
  return w;
}

int cover_depth_budget(const SubsetSample& s, int min_depth) {
  const double m = static_cast<double>(std::max<std::size_t>(s.size(), 2));
  int budget = min_depth + 2 * static_cast<int>(std::ceil(std::log2(m)));
  if (s.resolution == 0.0) {
    // exact finite sets: allow depths that drive the finite-set weight below
    // threshold 1 for every s beyond the bisection tolerance
    budget = std::max(budget, static_cast<int>(std::ceil(std::log(m + 1) / 0.01)));
  }
  return budget;
}

namespace {

struct DepthPlan {
  int lo = 1;
  int hi = 1;
  bool patch = false;
};

DepthPlan plan_depths(const SubsetSample& s, int min_depth, double eps) {
  DepthPlan plan;
  plan.lo = min_depth;
  plan.hi = cover_depth_budget(s, min_depth);
  plan.patch = s.resolution > 0.0;
  if (auto cap = s.space->max_patch_depth(eps)) plan.hi = std::min(plan.hi, *cap);
  if (plan.hi < plan.lo) {
    throw DomainError(
        "no feasible cover within the depth budget: depth " + std::to_string(plan.lo) +
        " balls at eps " + std::to_string(eps) +
        " are finer than the sample resolution; refine the sample or lower the depth");
  }
  return plan;
}

// Exact sweep DP over interval-structured balls: dp[j] = least cover weight
// for the first j points; at the first uncovered point only the farthest-
// reaching ball of each depth matters.
CoverResult cover_interval_dp(const SubsetSample& s, double s_exp, const DepthPlan& plan,
                              double eps) {
  const std::size_t m = s.size();
  const int depths = plan.hi - plan.lo + 1;
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  // reach[d][j]: farthest hi over balls of depth plan.lo+d whose range starts
  // at or before j; who[d][j]: a center realizing it.
  std::vector<std::vector<std::size_t>> reach(depths, std::vector<std::size_t>(m, kNone));
  std::vector<std::vector<std::size_t>> who(depths, std::vector<std::size_t>(m, kNone));
  for (int d = 0; d < depths; ++d) {
    auto& rch = reach[d];
    auto& wh = who[d];
    for (std::size_t i = 0; i < m; ++i) {
      auto r = s.space->cover_range(i, plan.lo + d, eps, plan.patch);
      if (!r) continue;
      if (rch[r->lo] == kNone || r->hi > rch[r->lo]) {
        rch[r->lo] = r->hi;
        wh[r->lo] = i;
      }
    }
    for (std::size_t j = 1; j < m; ++j) {
      if (rch[j - 1] == kNone) continue;
      if (rch[j] == kNone || rch[j - 1] > rch[j]) {
        rch[j] = rch[j - 1];
        wh[j] = wh[j - 1];
      }
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(m + 1, inf);
  std::vector<std::pair<std::size_t, int>> parent(m + 1, {kNone, -1});  // (prev j, depth)
  dp[0] = 0.0;
  std::vector<double> w(depths);
  for (int d = 0; d < depths; ++d) w[d] = std::exp(-s_exp * (plan.lo + d));
  for (std::size_t j = 0; j < m; ++j) {
    if (dp[j] == inf) continue;
    for (int d = 0; d < depths; ++d) {
      const std::size_t r = reach[d][j];
      if (r == kNone || r < j) continue;
      const double cand = dp[j] + w[d];
      if (cand < dp[r + 1]) {
        dp[r + 1] = cand;
        parent[r + 1] = {j, d};
      }
    }
  }
  CoverResult res;
  if (dp[m] == inf) {
    res.feasible = false;
    return res;
  }
  res.weight = dp[m];
  res.method = CoverMethod::exact_cover;
  res.cover.eps = eps;
  std::size_t j = m;
  while (j > 0) {
    const auto [prev, d] = parent[j];
    res.cover.balls.push_back({who[d][prev], plan.lo + d});
    j = prev;
  }
  std::reverse(res.cover.balls.begin(), res.cover.balls.end());
  return res;
}

struct CandidateBall {
  std::size_t center;
  int depth;
  IndexRange range;
  double weight;
};

std::vector<CandidateBall> candidate_balls(const SubsetSample& s, double s_exp,
                                           const DepthPlan& plan, double eps) {
  std::vector<CandidateBall> balls;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (int n = plan.lo; n <= plan.hi; ++n) {
      auto r = s.space->cover_range(i, n, eps, plan.patch);
      if (!r) continue;
      balls.push_back({i, n, *r, std::exp(-s_exp * n)});
    }
  }
  // dominance: drop a ball when another covers at least as much for at most
  // the same weight
  std::vector<char> drop(balls.size(), 0);
  for (std::size_t a = 0; a < balls.size(); ++a) {
    for (std::size_t b = 0; b < balls.size(); ++b) {
      if (a == b || drop[a] || drop[b]) continue;
      if (balls[a].weight <= balls[b].weight && balls[a].range.lo <= balls[b].range.lo &&
          balls[a].range.hi >= balls[b].range.hi) {
        if (balls[a].weight < balls[b].weight || balls[a].range.count() > balls[b].range.count() ||
            a < b) {
          drop[b] = 1;
        }
      }
    }
  }
  std::vector<CandidateBall> kept;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    if (!drop[i]) kept.push_back(balls[i]);
  }
  return kept;
}

}  // namespace

CoverResult cover_greedy(const SubsetSample& s, double s_exp, int min_depth, double eps) {
  const DepthPlan plan = plan_depths(s, min_depth, eps);
  const auto balls = candidate_balls(s, s_exp, plan, eps);
  const std::size_t m = s.size();
  std::vector<char> covered(m, 0);
  std::size_t covered_count = 0;
  CoverResult res;
  res.method = CoverMethod::greedy_cover;
  res.cover.eps = eps;
  while (covered_count < m) {
    double best_ratio = std::numeric_limits<double>::infinity();
    std::size_t best = balls.size(), best_gain = 0;
    for (std::size_t i = 0; i < balls.size(); ++i) {
      std::size_t gain = 0;
      for (std::size_t j = balls[i].range.lo; j <= balls[i].range.hi; ++j) gain += !covered[j];
      if (gain == 0) continue;
      const double ratio = balls[i].weight / static_cast<double>(gain);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = i;
        best_gain = gain;
      }
    }
    if (best == balls.size()) {
      res.feasible = false;
      return res;
    }
    for (std::size_t j = balls[best].range.lo; j <= balls[best].range.hi; ++j) {
      if (!covered[j]) {
        covered[j] = 1;
        --best_gain;
        ++covered_count;
      }
    }
    res.cover.balls.push_back({balls[best].center, balls[best].depth});
    res.weight += balls[best].weight;
  }
  return res;
}

CoverResult cover_branch_and_bound(const SubsetSample& s, double s_exp, int min_depth,
                                   double eps) {
  const DepthPlan plan = plan_depths(s, min_depth, eps);
  auto balls = candidate_balls(s, s_exp, plan, eps);
  if (balls.size() > 24) {
    throw ValidationError("branch and bound is limited to small candidate families");
  }
  const std::size_t m = s.size();
  const CoverResult greedy = cover_greedy(s, s_exp, min_depth, eps);
  std::vector<std::size_t> chosen, best_choice;
  // the greedy weight bounds the search but must not prune an equal optimum
  double best_weight = greedy.feasible ? greedy.weight * (1.0 + 1e-12)
                                       : std::numeric_limits<double>::infinity();

  // order by weight so pruning bites early
  std::sort(balls.begin(), balls.end(), [](const CandidateBall& a, const CandidateBall& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.center < b.center;
  });

  std::vector<int> cover_count(m, 0);
  auto first_uncovered = [&]() -> std::size_t {
    for (std::size_t j = 0; j < m; ++j) {
      if (cover_count[j] == 0) return j;
    }
    return m;
  };
  auto rec = [&](auto&& self, double acc) -> void {
    if (acc >= best_weight) return;
    const std::size_t j = first_uncovered();
    if (j == m) {
      best_weight = acc;
      best_choice = chosen;
      return;
    }
    for (std::size_t i = 0; i < balls.size(); ++i) {
      if (balls[i].range.lo > j || balls[i].range.hi < j) continue;
      for (std::size_t p = balls[i].range.lo; p <= balls[i].range.hi; ++p) ++cover_count[p];
      chosen.push_back(i);
      self(self, acc + balls[i].weight);
      chosen.pop_back();
      for (std::size_t p = balls[i].range.lo; p <= balls[i].range.hi; ++p) --cover_count[p];
    }
  };
  rec(rec, 0.0);

  CoverResult res;
  res.method = CoverMethod::exact_cover;
  res.cover.eps = eps;
  if (best_choice.empty()) {
    res.feasible = false;
    return res;
  }
  for (std::size_t i : best_choice) {
    res.cover.balls.push_back({balls[i].center, balls[i].depth});
    res.weight += balls[i].weight;
  }
  return res;
}

CoverResult weighted_cover_infimum(const SubsetSample& s, double s_exp, int min_depth,
                                   double eps) {
  if (min_depth < 1) throw ValidationError("cover depth must be at least 1");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (s_exp < 0.0) throw ValidationError("the exponent must be nonnegative");
  if (s.size() == 0) {
    CoverResult res;
    res.cover.eps = eps;
    return res;
  }
  const DepthPlan plan = plan_depths(s, min_depth, eps);
  CoverResult res = cover_interval_dp(s, s_exp, plan, eps);
  if (!res.feasible) {
    throw DomainError("no feasible cover within the depth budget");
  }
  return res;
}

// ---------------------------------------------------------------------------
// critical exponent
// ---------------------------------------------------------------------------
CriticalExponentReport bowen_entropy_estimate(const SubsetSample& s, const CoverSchedule& sched,
                                              double s_hint) {
  sched.validate();
  CriticalExponentReport rep;
  if (s.size() == 0) {
    rep.flags.push_back(kFlagEmptyIntersection);
    return rep;
  }

  for (const auto& pair : sched.pairs) {
    auto weight_at = [&](double s_exp) {
      return weighted_cover_infimum(s, s_exp, pair.min_depth, pair.eps);
    };
    double s_val = 0.0;
    CoverResult at;
    const CoverResult w0 = weight_at(0.0);
    if (w0.weight <= 1.0 + 1e-12) {
      s_val = 0.0;
      at = w0;
    } else {
      double lo = 0.0;
      double hi = s_hint + 1.0;
      CoverResult whi = weight_at(hi);
      int extensions = 0;
      while (whi.weight > 1.0 && extensions < 8) {
        hi *= 1.5;
        whi = weight_at(hi);
        ++extensions;
      }
      if (extensions > 0 &&
          std::find(rep.flags.begin(), rep.flags.end(), kFlagBracketExtended) == rep.flags.end()) {
        rep.flags.push_back(kFlagBracketExtended);
      }
      double prev_weight = w0.weight;
      for (int it = 0; it < 40 && hi - lo > 1e-3; ++it) {
        const double mid = 0.5 * (lo + hi);
        const CoverResult wm = weight_at(mid);
        if (wm.weight > prev_weight * (1.0 + 1e-9) && wm.method == CoverMethod::greedy_cover &&
            std::find(rep.flags.begin(), rep.flags.end(), kFlagGreedyNonmonotone) ==
                rep.flags.end()) {
          rep.flags.push_back(kFlagGreedyNonmonotone);
        }
        prev_weight = wm.weight;
        if (wm.weight >= 1.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      s_val = 0.5 * (lo + hi);
      at = weight_at(s_val);
    }
    rep.per_pair.push_back({pair.min_depth, pair.eps, s_val, at.weight});
    rep.s_star = s_val;
    rep.depth_used = pair.min_depth;
    rep.eps_used = pair.eps;
    rep.method = at.method;
    rep.weight_at_s_star = at.weight;
  }
  return rep;
}

}  // namespace uent
