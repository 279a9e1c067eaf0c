#include "uentropy/harness.hpp"

#include <algorithm>
#include <cmath>

#include "uentropy/report.hpp"

namespace uent {

namespace {

constexpr double kLogGolden = 0.48121182505960347;  // log((1+sqrt 5)/2)

CountSchedule cat_local_schedule() {
  CountSchedule s;
  s.n = {10, 14, 18, 22, 26, 30};
  s.eps = {0.1, 0.05};
  return s;
}

CoverSchedule cat_cover_schedule() {
  CoverSchedule s;
  s.pairs = {{4, 0.06}, {6, 0.05}, {7, 0.04}};
  return s;
}

CountSchedule symbolic_local_schedule() {
  CountSchedule s;
  s.n = {4, 6, 8, 10, 12};
  s.eps = {0.5};
  return s;
}

CoverSchedule full_shift_cover_schedule() {
  CoverSchedule s;
  s.pairs = {{4, 0.5}, {6, 0.5}, {8, 0.5}};
  return s;
}

CoverSchedule golden_cover_schedule() {
  CoverSchedule s;
  s.pairs = {{6, 0.5}, {8, 0.5}, {10, 0.5}};
  return s;
}

struct CatSetup {
  std::shared_ptr<const DynSystem> sys;
  LeafSegment seg;
  SubsetSample leaf;
  LeafMeasure lebesgue;
  std::vector<Point> hyp_points;
};

CatSetup cat_setup() {
  auto sys = std::make_shared<const DynSystem>(make_cat_map());
  auto seg = LeafSegment::toral_leaf(sys, {0.3, 0.7}, 0.1);
  CatSetup c{sys, seg, leaf_sample(seg, 8001), LeafMeasure::leaf_lebesgue(seg), {}};
  for (double t : {-0.05, -0.025, 0.0, 0.025, 0.05}) c.hyp_points.emplace_back(c.seg.chart(t));
  return c;
}

CheckRow row_from_verdict(const std::string& name, const PrincipleVerdict& v) {
  CheckRow row;
  row.instance = name;
  row.lhs = v.entropy_estimate;
  row.rhs = v.s;
  row.tolerance = v.tolerance;
  row.verdict = !v.hypothesis_met ? "hypothesis_not_met" : (v.pass ? "PASS" : "FAIL");
  row.detail = v.detail;
  return row;
}

}  // namespace

bool CheckReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.verdict == "PASS"; });
}

CheckReport check_a_upper(int threads) {
  (void)threads;
  CheckReport rep;
  rep.name = "a_upper";
  const auto cat = cat_setup();
  const double lam = std::log(toral_factor(*cat.sys)->splitting.lambda_u);
  const double hint = entropy_upper_hint(*cat.sys);

  rep.rows.push_back(row_from_verdict(
      "cat/lebesgue s=1.0",
      distribution_principle_upper(cat.lebesgue, cat.leaf, cat.hyp_points, 1.0,
                                   cat_local_schedule(), cat_cover_schedule(), hint)));
  rep.rows.push_back(row_from_verdict(
      "cat/lebesgue s=log(lambda_u)",
      distribution_principle_upper(cat.lebesgue, cat.leaf, cat.hyp_points, lam,
                                   cat_local_schedule(), cat_cover_schedule(), hint)));

  // point mass on a fixed point; the subset is that one exact point
  auto atom_measure = LeafMeasure::atoms(cat.sys, {Point(cat.seg.chart(0.0))}, {1.0}, cat.seg);
  auto z = exact_toral_sample(cat.seg, {0.0});
  rep.rows.push_back(row_from_verdict(
      "cat/fixed-point-atom s=0",
      distribution_principle_upper(atom_measure, z, {Point(cat.seg.chart(0.0))}, 0.0,
                                   cat_local_schedule(), cat_cover_schedule(), hint)));
  return rep;
}

CheckReport check_a_lower(int threads) {
  (void)threads;
  CheckReport rep;
  rep.name = "a_lower";
  const auto cat = cat_setup();
  const double hint = entropy_upper_hint(*cat.sys);

  rep.rows.push_back(row_from_verdict(
      "cat/lebesgue s=0.9",
      distribution_principle_lower(cat.lebesgue, cat.leaf, cat.hyp_points, 0.9,
                                   cat_local_schedule(), cat_cover_schedule(), hint)));

  {
    auto full2 = std::make_shared<const DynSystem>(make_full_shift(2));
    const auto* sym = symbolic(*full2);
    auto z = leaf_sample(LeafSegment::symbolic_leaf(full2, {}), 1 << 12);
    auto mu = LeafMeasure::cylinder(full2, MarkovChain::bernoulli({0.5, 0.5}));
    std::vector<Point> pts;
    for (const auto& w : sym->enumerate_words(12)) {
      pts.emplace_back(w);
      if (pts.size() >= 4) break;
    }
    rep.rows.push_back(row_from_verdict(
        "full2/bernoulli(1/2) s=0.6",
        distribution_principle_lower(mu, z, pts, 0.6, symbolic_local_schedule(),
                                     full_shift_cover_schedule(), entropy_upper_hint(*full2))));
  }
  {
    auto golden = std::make_shared<const DynSystem>(make_golden_mean_sft());
    const auto* sym = symbolic(*golden);
    auto z = leaf_sample(LeafSegment::symbolic_leaf(golden, {}), 1 << 14);
    auto mu = LeafMeasure::cylinder(golden, MarkovChain::parry(*sym));
    std::vector<Point> pts;
    const auto words = sym->enumerate_words(12);
    for (std::size_t i = 0; i < words.size(); i += words.size() / 4 + 1) pts.emplace_back(words[i]);
    rep.rows.push_back(row_from_verdict(
        "golden/parry s=0.45",
        distribution_principle_lower(mu, z, pts, 0.45, symbolic_local_schedule(),
                                     golden_cover_schedule(), entropy_upper_hint(*golden))));
  }
  return rep;
}

CheckReport check_b(int threads) {
  (void)threads;
  CheckReport rep;
  rep.name = "b";
  const double tol = 0.05;

  auto push_gap = [&](const std::string& name, const VariationalGap& gap, bool expect_equality) {
    CheckRow row;
    row.instance = name;
    row.lhs = gap.best_lower;
    row.rhs = gap.bowen_estimate;
    row.tolerance = tol;
    bool ok = gap.pass;
    if (expect_equality) ok = ok && std::abs(gap.best_lower - gap.bowen_estimate) <= tol;
    row.verdict = ok ? "PASS" : "FAIL";
    row.detail = expect_equality ? "two-sided within tol" : "lower <= estimate + tol";
    rep.rows.push_back(row);
  };

  {
    const auto cat = cat_setup();
    push_gap("cat-leaf/lebesgue",
             subset_variational_gap(cat.leaf, cat_cover_schedule(),
                                    entropy_upper_hint(*cat.sys), {cat.lebesgue},
                                    cat_local_schedule(), tol),
             true);
    auto atom_measure = LeafMeasure::atoms(cat.sys, {Point(cat.seg.chart(0.0))}, {1.0}, cat.seg);
    push_gap("cat-fixed-point/atom",
             subset_variational_gap(exact_toral_sample(cat.seg, {0.0}), cat_cover_schedule(),
                                    entropy_upper_hint(*cat.sys), {atom_measure},
                                    cat_local_schedule(), tol),
             true);
  }
  {
    auto full2 = std::make_shared<const DynSystem>(make_full_shift(2));
    auto k = leaf_sample(LeafSegment::symbolic_leaf(full2, {}), 1 << 12);
    auto mu = LeafMeasure::cylinder(full2, MarkovChain::bernoulli({0.5, 0.5}));
    push_gap("full2/bernoulli(1/2)",
             subset_variational_gap(k, full_shift_cover_schedule(), entropy_upper_hint(*full2),
                                    {mu}, symbolic_local_schedule(), tol),
             true);
  }
  {
    auto golden = std::make_shared<const DynSystem>(make_golden_mean_sft());
    const auto* sym = symbolic(*golden);
    auto k = leaf_sample(LeafSegment::symbolic_leaf(golden, {}), 1 << 14);
    auto parry = LeafMeasure::cylinder(golden, MarkovChain::parry(*sym));
    auto uniform = LeafMeasure::conditioned_uniform(golden, *sym, 12);
    push_gap("golden/{parry,conditioned-uniform}",
             subset_variational_gap(k, golden_cover_schedule(), entropy_upper_hint(*golden),
                                    {parry, uniform}, symbolic_local_schedule(), tol),
             true);
  }
  return rep;
}

CheckReport check_c3(int threads) {
  CheckReport rep;
  rep.name = "c3";
  const auto phi = Potential::indicator("1");

  {
    auto full2 = std::make_shared<const DynSystem>(make_full_shift(2));
    SpectrumOptions opts;
    opts.window = 0.005;
    opts.n_exact = 2000;
    opts.tol_upper = 0.05;
    opts.tol_two_sided = 0.05;
    opts.threads = threads;
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
    const auto spec = corollary_spectrum_check(full2, phi, grid, opts);
    for (const auto& row : spec.rows) {
      CheckRow cr;
      cr.instance = "full2 a=" + format_full(row.a);
      cr.lhs = row.lhs;
      cr.rhs = row.rhs;
      cr.tolerance = *opts.tol_two_sided;
      cr.verdict = !row.reachable                      ? "FAIL"
                   : std::abs(row.gap) <= cr.tolerance ? "PASS"
                                                       : "FAIL";
      cr.detail = "two-sided (full shift)";
      rep.rows.push_back(cr);
    }
  }
  {
    auto golden = std::make_shared<const DynSystem>(make_golden_mean_sft());
    SpectrumOptions opts;
    opts.window = 0.005;
    opts.n_exact = 2000;
    opts.tol_upper = 0.03;
    opts.threads = threads;
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(0.05 * i);
    const auto spec = corollary_spectrum_check(golden, phi, grid, opts);
    for (const auto& row : spec.rows) {
      CheckRow cr;
      cr.instance = "golden a=" + format_full(row.a);
      cr.lhs = row.lhs;
      cr.rhs = row.rhs;
      cr.tolerance = opts.tol_upper;
      cr.verdict = !row.reachable                   ? "level_unreachable"
                   : row.gap <= opts.tol_upper      ? "PASS"
                                                    : "FAIL";
      cr.detail = "upper bound (sft)";
      rep.rows.push_back(cr);
    }
  }
  // unreachable rows are informational, not failures
  for (auto& row : rep.rows) {
    if (row.verdict == "level_unreachable") row.verdict = "PASS";
  }
  return rep;
}

CheckReport check_d1(int threads) {
  (void)threads;
  CheckReport rep;
  rep.name = "d1";
  const auto full2 = SymbolicSystem::full_shift(2);
  const auto golden = SymbolicSystem::sft(2, {"11"});
  const auto bern = MarkovChain::bernoulli({0.5, 0.5});
  const auto parry = MarkovChain::parry(golden);

  struct Case {
    const SymbolicSystem* sys;
    const MarkovChain* mu;
    const char* name;
    int n;
    double kappa;
  };
  const Case cases[] = {
      {&full2, &bern, "bernoulli(1/2) n=14 kappa=0.2", 14, 0.2},
      {&full2, &bern, "bernoulli(1/2) n=14 kappa=0.3", 14, 0.3},
      {&golden, &parry, "parry n=16 kappa=0.2", 16, 0.2},
      {&golden, &parry, "parry n=16 kappa=0.3", 16, 0.3},
  };
  for (const auto& c : cases) {
    const auto probe = uniform_separation_probe(*c.sys, *c.mu, c.kappa, c.n);
    CheckRow row;
    row.instance = c.name;
    row.lhs = probe.achieved;
    row.rhs = probe.target;
    row.tolerance = 0.0;
    row.verdict = probe.feasible && probe.pass ? "PASS" : "FAIL";
    row.detail = "achieved exponent >= h_mu - kappa (rho*=" + format_full(probe.rho_star) +
                 ", kappa'=" + format_full(probe.kappa_prime) + ")";
    rep.rows.push_back(row);
  }
  return rep;
}

CheckReport check_d2(int threads) {
  (void)threads;
  CheckReport rep;
  rep.name = "d2";
  const auto full2 = SymbolicSystem::full_shift(2);
  const auto golden = SymbolicSystem::sft(2, {"11"});
  const std::vector<double> taus = {0.04, 0.02, 0.01};
  std::vector<int> ns;
  for (int n = 40; n <= 400; n += 40) ns.push_back(n);
  const std::vector<int> ones = {0, 1};

  struct Case {
    const SymbolicSystem* sys;
    double center;
    double h;
    const char* name;
  };
  const auto parry = MarkovChain::parry(golden);
  const Case cases[] = {
      {&full2, 0.5, std::log(2.0), "bernoulli(1/2)"},
      {&full2, 0.3, -(0.3 * std::log(0.3) + 0.7 * std::log(0.7)), "bernoulli(0.3)"},
      {&golden, parry.expected_value({0.0, 1.0}), kLogGolden, "parry"},
  };
  for (const auto& c : cases) {
    const auto sq = s_quantities_symbolic(*c.sys, ones, c.center, taus, ns);
    CheckRow row;
    row.instance = c.name;
    row.lhs = sq.s_lower;
    row.rhs = c.h;
    row.tolerance = 0.05;
    const bool ok = std::abs(sq.s_lower - c.h) <= 0.05 && std::abs(sq.s_upper - c.h) <= 0.05;
    row.verdict = ok ? "PASS" : "FAIL";
    row.detail = "s_upper=" + format_full(sq.s_upper);
    rep.rows.push_back(row);
  }
  return rep;
}

CheckReport run_check(const std::string& theorem, int threads) {
  if (theorem == "a_upper") return check_a_upper(threads);
  if (theorem == "a_lower") return check_a_lower(threads);
  if (theorem == "b") return check_b(threads);
  if (theorem == "c3") return check_c3(threads);
  if (theorem == "d1") return check_d1(threads);
  if (theorem == "d2") return check_d2(threads);
  throw ValidationError("unknown check name: " + theorem);
}

std::vector<std::string> known_checks() { return {"a_upper", "a_lower", "b", "c3", "d1", "d2"}; }

}  // namespace uent
