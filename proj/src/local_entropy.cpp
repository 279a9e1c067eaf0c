#include "uentropy/local_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "uentropy/parallel.hpp"

namespace uent {

// ---------------------------------------------------------------------------
// LeafMeasure
// ---------------------------------------------------------------------------
struct LeafMeasure::Impl {
  enum class Kind { lebesgue, density, cylinder, conditioned, atoms, mixture };
  Kind kind = Kind::lebesgue;

  // toral kinds
  std::optional<LeafSegment> seg;
  std::vector<double> coeffs;  // density polynomial on the chart, normalized

  // symbolic kinds
  std::shared_ptr<const DynSystem> sys;
  std::optional<MarkovChain> chain;
  std::optional<SymbolicSystem> subshift;
  int horizon = 0;
  std::vector<std::vector<double>> ext_counts;  // [remaining length][symbol]

  // atoms
  std::vector<double> atom_params;
  std::vector<Word> atom_words;
  std::vector<double> atom_weights;

  // mixture
  double theta = 0.0;
  std::shared_ptr<const Impl> a, b;

  double lambda_u() const { return seg ? seg->lambda_u() : 0.0; }

  double density_integral(double lo, double hi) const {
    // antiderivative of sum c_i t^i
    auto F = [&](double t) {
      double acc = 0.0, p = t;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        acc += coeffs[i] * p / static_cast<double>(i + 1);
        p *= t;
      }
      return acc;
    };
    return F(hi) - F(lo);
  }

  int ball_depth(int n, double eps, double base) const {
    const double t = std::log(eps) / std::log(base);
    const double cut = n - 1 + t;
    const double r = std::round(cut);
    long long q = std::abs(cut - r) <= 1e-9 ? static_cast<long long>(r)
                                            : static_cast<long long>(std::ceil(cut));
    return static_cast<int>(std::max(0LL, q));
  }

  Mass mass_param(double t, int n, double eps) const {
    Mass out;
    const double r = eps * std::pow(lambda_u(), -(n - 1));
    const double delta = seg->radius;
    double lo = t - r, hi = t + r;
    if (lo < -delta || hi > delta) {
      out.boundary_truncated = true;
      lo = std::max(lo, -delta);
      hi = std::min(hi, delta);
    }
    if (hi <= lo) {
      out.value = 0.0;
      return out;
    }
    if (kind == Kind::lebesgue) {
      out.value = (hi - lo) / (2.0 * delta);
    } else {
      out.value = density_integral(lo, hi);
    }
    return out;
  }

  Mass mass_word(const Word& x, int n, double eps) const {
    Mass out;
    const SymbolicSystem* sym = symbolic(*sys);
    const int q = ball_depth(n, eps, sym->metric_base);
    if (q > static_cast<int>(x.size())) {
      throw ValidationError("point word is too short for the requested ball depth");
    }
    std::span<const Symbol> prefix(x.data(), static_cast<std::size_t>(q));
    if (kind == Kind::cylinder) {
      out.value = chain->cylinder_weight(prefix);
      return out;
    }
    // conditioned uniform: ratio of admissible extension counts
    if (q > horizon) throw ValidationError("ball depth exceeds the conditioning horizon");
    if (!subshift->admissible(prefix)) {
      out.value = 0.0;
      return out;
    }
    double total = 0.0;
    for (double c : ext_counts[horizon - 1]) total += c;
    if (q == 0) {
      out.value = 1.0;
      return out;
    }
    const double ext = ext_counts[horizon - q][prefix[q - 1]];
    out.value = ext / total;
    return out;
  }

  Mass mass_atoms(const Point& x, int n, double eps) const {
    Mass out;
    if (!atom_words.empty()) {
      const auto& w = std::get<Word>(x);
      const SymbolicSystem* sym = symbolic(*sys);
      const int q = ball_depth(n, eps, sym->metric_base);
      for (std::size_t i = 0; i < atom_words.size(); ++i) {
        const std::size_t d = first_disagreement(w, atom_words[i]);
        if (d == kNoDisagreement || static_cast<int>(d) >= q) out.value += atom_weights[i];
      }
      return out;
    }
    const double t = param_of(x);
    const double r = eps * std::pow(lambda_u(), -(n - 1));
    for (std::size_t i = 0; i < atom_params.size(); ++i) {
      if (std::abs(atom_params[i] - t) <= r) out.value += atom_weights[i];
    }
    return out;
  }

  double param_of(const Point& x) const {
    const auto& coords = std::get<std::vector<double>>(x);
    const auto t = seg->chart_inverse(coords);
    if (!t) throw DomainError("point does not lie on the measure's leaf segment");
    return *t;
  }

  Mass mass(const Point& x, int n, double eps) const {
    switch (kind) {
      case Kind::lebesgue:
      case Kind::density:
        return mass_param(param_of(x), n, eps);
      case Kind::cylinder:
      case Kind::conditioned:
        return mass_word(std::get<Word>(x), n, eps);
      case Kind::atoms:
        return mass_atoms(x, n, eps);
      case Kind::mixture: {
        const Mass ma = a->mass(x, n, eps);
        const Mass mb = b->mass(x, n, eps);
        Mass out;
        out.value = theta * ma.value + (1.0 - theta) * mb.value;
        out.boundary_truncated = ma.boundary_truncated || mb.boundary_truncated;
        return out;
      }
    }
    return {};
  }
};

LeafMeasure LeafMeasure::leaf_lebesgue(LeafSegment seg) {
  if (seg.is_symbolic()) throw ValidationError("leaf Lebesgue needs a toral segment");
  LeafMeasure m;
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::lebesgue;
  impl->seg = std::move(seg);
  m.impl_ = impl;
  return m;
}

LeafMeasure LeafMeasure::polynomial_density(LeafSegment seg, std::vector<double> coeffs) {
  if (seg.is_symbolic()) throw ValidationError("densities need a toral segment");
  if (coeffs.empty()) throw ValidationError("density polynomial must be nonempty");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::density;
  impl->seg = std::move(seg);
  impl->coeffs = std::move(coeffs);
  // normalize to total mass 1, rejecting sign changes on a probe grid
  const double delta = impl->seg->radius;
  double total = impl->density_integral(-delta, delta);
  if (!(total > 0.0)) throw ValidationError("density must have positive total mass");
  for (double& c : impl->coeffs) c /= total;
  for (int i = 0; i <= 200; ++i) {
    const double t = -delta + 2.0 * delta * i / 200.0;
    double v = 0.0, p = 1.0;
    for (double c : impl->coeffs) {
      v += c * p;
      p *= t;
    }
    if (v < -1e-12) throw ValidationError("density is negative on the segment");
  }
  LeafMeasure m;
  m.impl_ = impl;
  return m;
}

LeafMeasure LeafMeasure::cylinder(std::shared_ptr<const DynSystem> sys, MarkovChain chain) {
  const auto* sym = symbolic(*sys);
  if (!sym) throw ValidationError("cylinder measures need a symbolic system");
  chain.validate(*sym);
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::cylinder;
  impl->sys = std::move(sys);
  impl->chain = std::move(chain);
  LeafMeasure m;
  m.impl_ = impl;
  return m;
}

LeafMeasure LeafMeasure::conditioned_uniform(std::shared_ptr<const DynSystem> host,
                                             SymbolicSystem subshift, int horizon) {
  const auto* sym = symbolic(*host);
  if (!sym) throw ValidationError("conditioned measures need a symbolic host");
  if (subshift.alphabet_size != sym->alphabet_size) {
    throw ValidationError("subshift alphabet must match the host");
  }
  if (horizon < 1) throw ValidationError("conditioning horizon must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::conditioned;
  impl->sys = std::move(host);
  impl->horizon = horizon;
  // ext_counts[j][a] = number of admissible words of length j+1 starting at a
  const int k = subshift.alphabet_size;
  impl->ext_counts.assign(horizon + 1, std::vector<double>(k, 0.0));
  for (int a = 0; a < k; ++a) impl->ext_counts[0][a] = 1.0;
  for (int j = 1; j <= horizon; ++j) {
    for (int a = 0; a < k; ++a) {
      double acc = 0.0;
      for (int b = 0; b < k; ++b) {
        if (subshift.transition[a][b] != 0) acc += impl->ext_counts[j - 1][b];
      }
      impl->ext_counts[j][a] = acc;
    }
  }
  impl->subshift = std::move(subshift);
  LeafMeasure m;
  m.impl_ = impl;
  return m;
}

LeafMeasure LeafMeasure::atoms(std::shared_ptr<const DynSystem> sys, std::vector<Point> points,
                               std::vector<double> weights, std::optional<LeafSegment> seg) {
  if (points.empty() || points.size() != weights.size()) {
    throw ValidationError("atomic measures need matching nonempty points and weights");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::atoms;
  impl->sys = std::move(sys);
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw ValidationError("atomic weights must have positive mass");
  for (double& w : weights) w /= total;
  impl->atom_weights = std::move(weights);
  if (symbolic(*impl->sys)) {
    for (auto& p : points) impl->atom_words.push_back(std::get<Word>(p));
  } else {
    if (!seg) throw ValidationError("toral atoms need a leaf segment");
    impl->seg = std::move(seg);
    for (auto& p : points) {
      const auto t = impl->seg->chart_inverse(std::get<std::vector<double>>(p));
      if (!t) throw DomainError("atom does not lie on the leaf segment");
      impl->atom_params.push_back(*t);
    }
  }
  LeafMeasure m;
  m.impl_ = impl;
  return m;
}

LeafMeasure LeafMeasure::mixture(double theta, LeafMeasure a, LeafMeasure b) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ValidationError("mixture weight must lie in [0,1]");
  auto impl = std::make_shared<Impl>();
  impl->kind = Impl::Kind::mixture;
  impl->theta = theta;
  impl->a = a.impl_;
  impl->b = b.impl_;
  impl->sys = a.impl_->sys;
  impl->seg = a.impl_->seg;
  LeafMeasure m;
  m.impl_ = impl;
  return m;
}

LeafMeasure::Mass LeafMeasure::ball_mass(const Point& x, int n, double eps) const {
  if (n < 1) throw ValidationError("ball mass needs n >= 1");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  return impl_->mass(x, n, eps);
}

LeafMeasure::Mass LeafMeasure::ball_mass_param(double t, int n, double eps) const {
  if (n < 1) throw ValidationError("ball mass needs n >= 1");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  switch (impl_->kind) {
    case Impl::Kind::lebesgue:
    case Impl::Kind::density:
      return impl_->mass_param(t, n, eps);
    case Impl::Kind::atoms: {
      if (!impl_->atom_params.empty()) {
        Mass out;
        const double r = eps * std::pow(impl_->lambda_u(), -(n - 1));
        for (std::size_t i = 0; i < impl_->atom_params.size(); ++i) {
          if (std::abs(impl_->atom_params[i] - t) <= r) out.value += impl_->atom_weights[i];
        }
        return out;
      }
      break;
    }
    case Impl::Kind::mixture: {
      LeafMeasure a_side, b_side;
      a_side.impl_ = impl_->a;
      b_side.impl_ = impl_->b;
      const Mass ma = a_side.ball_mass_param(t, n, eps);
      const Mass mb = b_side.ball_mass_param(t, n, eps);
      Mass out;
      out.value = impl_->theta * ma.value + (1.0 - impl_->theta) * mb.value;
      out.boundary_truncated = ma.boundary_truncated || mb.boundary_truncated;
      return out;
    }
    default:
      break;
  }
  throw ValidationError("chart-parameter mass queries need a toral measure");
}

std::vector<std::pair<Word, double>> LeafMeasure::quadrature_words(
    const CountSchedule& sched) const {
  const auto& impl = *impl_;
  if (impl.kind == Impl::Kind::atoms && !impl.atom_words.empty()) {
    std::vector<std::pair<Word, double>> nodes;
    for (std::size_t i = 0; i < impl.atom_words.size(); ++i) {
      nodes.emplace_back(impl.atom_words[i], impl.atom_weights[i]);
    }
    return nodes;
  }
  if (impl.kind == Impl::Kind::mixture) {
    LeafMeasure a_side, b_side;
    a_side.impl_ = impl.a;
    b_side.impl_ = impl.b;
    auto nodes = a_side.quadrature_words(sched);
    for (auto& [w, wt] : nodes) wt *= impl.theta;
    auto bn = b_side.quadrature_words(sched);
    for (auto& [w, wt] : bn) nodes.emplace_back(std::move(w), (1.0 - impl.theta) * wt);
    return nodes;
  }
  const SymbolicSystem* sym = symbolic(*impl.sys);
  if (!sym) throw ValidationError("word quadrature needs a symbolic measure");
  const int depth = impl.ball_depth(sched.n.back(), sched.eps.back(), sym->metric_base);
  std::vector<std::pair<Word, double>> nodes;
  if (impl.kind == Impl::Kind::cylinder) {
    for (auto& w : sym->enumerate_words(depth)) {
      const double wt = impl.chain->cylinder_weight(w);
      if (wt > 0.0) nodes.emplace_back(std::move(w), wt);
    }
    return nodes;
  }
  if (impl.kind == Impl::Kind::conditioned) {
    if (depth > impl.horizon) {
      throw ValidationError("schedule queries deeper than the conditioning horizon");
    }
    double total = 0.0;
    for (double c : impl.ext_counts[impl.horizon - 1]) total += c;
    for (auto& w : impl.subshift->enumerate_words(depth)) {
      const double ext = impl.ext_counts[impl.horizon - depth][w.back()];
      nodes.emplace_back(std::move(w), ext / total);
    }
    return nodes;
  }
  throw ValidationError("word quadrature is not available for this measure kind");
}

bool LeafMeasure::is_symbolic() const {
  return impl_->kind == Impl::Kind::cylinder || impl_->kind == Impl::Kind::conditioned ||
         (impl_->kind == Impl::Kind::atoms && !impl_->atom_words.empty()) ||
         (impl_->kind == Impl::Kind::mixture && impl_->sys && symbolic(*impl_->sys));
}

const LeafSegment* LeafMeasure::segment() const {
  return impl_->seg ? &*impl_->seg : nullptr;
}

std::optional<double> LeafMeasure::entropy_rate() const {
  if (impl_->kind == Impl::Kind::cylinder) return impl_->chain->entropy_rate();
  if (impl_->kind == Impl::Kind::mixture) {
    LeafMeasure ma, mb;
    ma.impl_ = impl_->a;
    mb.impl_ = impl_->b;
    const auto ha = ma.entropy_rate();
    const auto hb = mb.entropy_rate();
    if (ha && hb) return impl_->theta * *ha + (1.0 - impl_->theta) * *hb;
  }
  return std::nullopt;
}

const MarkovChain* LeafMeasure::markov() const {
  return impl_->chain ? &*impl_->chain : nullptr;
}

// ---------------------------------------------------------------------------
// local entropies
// ---------------------------------------------------------------------------
namespace {

LocalEntropyResult local_entropy_from_masses(
    const CountSchedule& sched,
    const std::function<LeafMeasure::Mass(int n, double eps)>& mass_fn) {
  sched.validate();
  LocalEntropyResult res;
  for (double eps : sched.eps) {
    LocalEntropyTrace trace;
    trace.eps = eps;
    for (int n : sched.n) {
      const auto m = mass_fn(n, eps);
      if (!(m.value > 0.0)) {
        trace.truncated = true;
        break;
      }
      trace.a.emplace_back(n, -std::log(m.value) / n);
      if (m.boundary_truncated &&
          std::find(res.flags.begin(), res.flags.end(), kFlagBoundaryTruncated) ==
              res.flags.end()) {
        res.flags.push_back(kFlagBoundaryTruncated);
      }
    }
    if (trace.truncated &&
        std::find(res.flags.begin(), res.flags.end(), kFlagZeroMass) == res.flags.end()) {
      res.flags.push_back(kFlagZeroMass);
    }
    res.traces.push_back(std::move(trace));
  }
  const auto& final_trace = res.traces.back();  // smallest eps
  if (!final_trace.a.empty()) {
    const std::size_t tail = std::max<std::size_t>(1, (final_trace.a.size() + 1) / 2);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = final_trace.a.size() - tail; i < final_trace.a.size(); ++i) {
      lo = std::min(lo, final_trace.a[i].second);
      hi = std::max(hi, final_trace.a[i].second);
    }
    res.lower = lo;
    res.upper = hi;
  }
  return res;
}

}  // namespace

LocalEntropyResult local_unstable_entropy(const LeafMeasure& mu, const Point& x,
                                          const CountSchedule& sched) {
  return local_entropy_from_masses(
      sched, [&](int n, double eps) { return mu.ball_mass(x, n, eps); });
}

LocalEntropyResult local_unstable_entropy_param(const LeafMeasure& mu, double t,
                                                const CountSchedule& sched) {
  return local_entropy_from_masses(
      sched, [&](int n, double eps) { return mu.ball_mass_param(t, n, eps); });
}

LocalEntropyField local_entropy_field(const LeafMeasure& mu, const std::vector<Point>& xs,
                                      const CountSchedule& sched, int threads) {
  LocalEntropyField field;
  field.points = xs;
  field.lower.resize(xs.size());
  field.upper.resize(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const auto r = local_unstable_entropy(mu, xs[i], sched);
    field.lower[i] = r.lower;
    field.upper[i] = r.upper;
  });
  return field;
}

// ---------------------------------------------------------------------------
// Vitali selection
// ---------------------------------------------------------------------------
std::vector<std::size_t> vitali_select(const std::vector<VitaliBall>& balls) {
  std::vector<std::size_t> order(balls.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (balls[a].radius != balls[b].radius) return balls[a].radius > balls[b].radius;
    return a < b;
  });
  std::vector<std::size_t> selected;
  for (std::size_t i : order) {
    bool disjoint = true;
    for (std::size_t j : selected) {
      if (std::abs(balls[i].center - balls[j].center) <= balls[i].radius + balls[j].radius) {
        disjoint = false;
        break;
      }
    }
    if (disjoint) selected.push_back(i);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

// ---------------------------------------------------------------------------
// harness pieces
// ---------------------------------------------------------------------------
namespace {

PrincipleVerdict principle_common(const LeafMeasure& mu, const SubsetSample& z,
                                  const std::vector<Point>& hyp_points, double s,
                                  const CountSchedule& local_sched,
                                  const CoverSchedule& cover_sched, double s_hint, double tol,
                                  bool lower_bound_direction) {
  PrincipleVerdict v;
  v.s = s;
  v.tolerance = tol;
  v.hypothesis_met = true;
  for (const auto& x : hyp_points) {
    const auto le = local_unstable_entropy(mu, x, local_sched);
    const bool ok = lower_bound_direction ? le.lower >= s - 1e-12 : le.lower <= s + 1e-12;
    if (!ok) {
      v.hypothesis_met = false;
      v.detail = "hypothesis fails at a sample point (local lower " +
                 std::to_string(le.lower) + " vs s " + std::to_string(s) + ")";
      return v;
    }
  }
  const auto est = bowen_entropy_estimate(z, cover_sched, s_hint);
  v.entropy_estimate = est.s_star;
  v.pass = lower_bound_direction ? est.s_star >= s - tol : est.s_star <= s + tol;
  v.detail = lower_bound_direction ? "estimate >= s - tol" : "estimate <= s + tol";
  return v;
}

}  // namespace

PrincipleVerdict distribution_principle_lower(const LeafMeasure& mu, const SubsetSample& z,
                                              const std::vector<Point>& hypothesis_points,
                                              double s, const CountSchedule& local_sched,
                                              const CoverSchedule& cover_sched, double s_hint,
                                              double tol) {
  return principle_common(mu, z, hypothesis_points, s, local_sched, cover_sched, s_hint, tol,
                          /*lower_bound_direction=*/true);
}

PrincipleVerdict distribution_principle_upper(const LeafMeasure& mu, const SubsetSample& z,
                                              const std::vector<Point>& hypothesis_points,
                                              double s, const CountSchedule& local_sched,
                                              const CoverSchedule& cover_sched, double s_hint,
                                              double tol) {
  return principle_common(mu, z, hypothesis_points, s, local_sched, cover_sched, s_hint, tol,
                          /*lower_bound_direction=*/false);
}

double mean_lower_local_entropy(const LeafMeasure& mu, const CountSchedule& sched,
                                int quadrature_points) {
  sched.validate();
  if (const LeafSegment* seg = mu.segment()) {
    // middle half of the segment, steering clear of boundary truncation;
    // nodes weighted by their local cell mass
    const double delta = seg->radius;
    const int q = std::max(2, quadrature_points);
    std::vector<double> ts(q), ws(q);
    double total = 0.0;
    for (int i = 0; i < q; ++i) {
      ts[i] = -delta / 2 + delta * i / (q - 1);
      ws[i] = mu.ball_mass_param(ts[i], 1, delta / (2.0 * q)).value;
      total += ws[i];
    }
    double acc = 0.0;
    for (int i = 0; i < q; ++i) {
      acc += (ws[i] / total) * local_unstable_entropy_param(mu, ts[i], sched).lower;
    }
    return acc;
  }
  // symbolic kinds: exact quadrature over the cylinders at the deepest
  // scheduled ball depth
  const auto nodes = mu.quadrature_words(sched);
  double acc = 0.0;
  for (const auto& [w, weight] : nodes) {
    if (weight <= 0.0) continue;
    acc += weight * local_unstable_entropy(mu, Point(w), sched).lower;
  }
  return acc;
}

VariationalGap subset_variational_gap(const SubsetSample& k, const CoverSchedule& cover_sched,
                                      double s_hint, const std::vector<LeafMeasure>& family,
                                      const CountSchedule& local_sched, double tol) {
  VariationalGap gap;
  const auto est = bowen_entropy_estimate(k, cover_sched, s_hint);
  gap.bowen_estimate = est.s_star;
  for (const auto& mu : family) {
    gap.per_measure.push_back(mean_lower_local_entropy(mu, local_sched));
  }
  gap.best_lower = family.empty() ? 0.0
                                  : *std::max_element(gap.per_measure.begin(),
                                                      gap.per_measure.end());
  gap.pass = gap.best_lower <= gap.bowen_estimate + tol;
  return gap;
}

}  // namespace uent
