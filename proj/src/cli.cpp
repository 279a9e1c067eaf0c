#include "uentropy/cli.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include "uentropy/harness.hpp"
#include "uentropy/local_entropy.hpp"
#include "uentropy/multifractal.hpp"
#include "uentropy/report.hpp"
#include "uentropy/separation.hpp"
#include "uentropy/unstable.hpp"

namespace uent {

namespace {

const std::set<std::string> kDataQualityFlags = {
    kFlagResolutionLimited, kFlagUnreliableSmallDelta, kFlagEmptyIntersection,
    kFlagZeroMass,          kFlagEmptyLevel,           kFlagNeighborhoodEmpty,
};

bool has_quality_flag(const std::vector<std::string>& flags) {
  for (const auto& f : flags) {
    if (kDataQualityFlags.count(f)) return true;
  }
  return false;
}

std::string out_path(const RunConfig& rc, const std::string& name) {
  return (std::filesystem::path(rc.out_dir) / name).string();
}

std::string point_cell(const LeafEntropyEntry& e) {
  if (!e.cylinder.empty() || e.base_point.empty()) {
    return "[" + word_to_string(e.cylinder) + "]";
  }
  std::string s;
  for (std::size_t i = 0; i < e.base_point.size(); ++i) {
    if (i) s += ';';
    s += format_full(e.base_point[i]);
  }
  return s;
}

CountSchedule count_schedule_from(const KVConfig& cfg, const std::string& prefix) {
  CountSchedule s;
  s.n = cfg.get_or<std::vector<int>>(prefix + ".n", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  s.eps = cfg.get_or<std::vector<double>>(prefix + ".eps", {0.5});
  s.validate();
  return s;
}

CoverSchedule cover_schedule_from(const KVConfig& cfg) {
  CoverSchedule s;
  const auto pairs =
      cfg.get_or<std::vector<std::vector<double>>>("schedule.bowen", {{4, 0.5}, {6, 0.5}});
  for (const auto& p : pairs) {
    if (p.size() != 2) throw ValidationError("schedule.bowen entries must be [depth, eps] pairs");
    s.pairs.push_back({static_cast<int>(p[0]), p[1]});
  }
  s.validate();
  return s;
}

Predicate predicate_from(const KVConfig& cfg, const std::shared_ptr<const DynSystem>& sys) {
  const std::string kind = cfg.get_or<std::string>("predicate.kind", "all");
  if (kind == "all") return nullptr;
  if (kind == "empty") {
    return [](const PointView&) { return false; };
  }
  if (kind == "subshift") {
    const auto* sym = symbolic(*sys);
    if (!sym) throw ValidationError("the subshift predicate needs a symbolic system");
    auto forbidden = cfg.get<std::vector<std::string>>("predicate.forbidden");
    const SymbolicSystem sub = SymbolicSystem::sft(sym->alphabet_size, forbidden,
                                                   sym->metric_base);
    return [sub](const PointView& p) { return p.word && sub.admissible(*p.word); };
  }
  throw ValidationError("unknown predicate.kind: " + kind);
}

Potential potential_from(const KVConfig& cfg) {
  const std::string kind = cfg.get_or<std::string>("potential.kind", "cylinder_indicator");
  if (kind == "cylinder_indicator") {
    return Potential::indicator(cfg.get_or<std::string>("potential.word", "1"));
  }
  if (kind == "constant") {
    return Potential::constant(cfg.get_or<double>("potential.value", 0.0));
  }
  if (kind == "locally_constant") {
    return Potential::locally_constant_table(cfg.get_or<int>("potential.depth", 1),
                                             cfg.get<std::vector<double>>("potential.table"));
  }
  throw ValidationError("unknown potential.kind: " + kind);
}

nlohmann::json base_summary(const RunConfig& rc) {
  nlohmann::json j;
  j["config"] = rc.cfg.echo();
  j["seed"] = rc.seed;
  j["threads"] = rc.threads;
  return j;
}

}  // namespace

int cmd_estimate_entropy(const RunConfig& rc) {
  auto sys = std::make_shared<const DynSystem>(system_from_config(rc.cfg));
  const double delta = rc.cfg.get_or<double>("leaf.delta", 0.1);
  LeafOptions opts;
  opts.grid = rc.cfg.get_or<int>("leaf.grid", 2001);
  opts.bowen_grid = rc.cfg.get_or<int>("leaf.bowen_grid", 0);
  opts.threads = rc.threads;
  const int base_points = rc.cfg.get_or<int>("leaf.base_points", 8);
  const auto x_grid = default_base_grid(*sys, base_points);
  const auto pred = predicate_from(rc.cfg, sys);
  const std::string kind = rc.cfg.get_or<std::string>("estimate.kind", "both");

  CsvWriter csv({"x", "delta", "kind", "estimate", "sample_size", "flags"});
  nlohmann::json summary = base_summary(rc);
  std::vector<std::string> all_flags;

  auto emit = [&](const LeafEntropyReport& rep, const std::string& name) {
    for (const auto& e : rep.per_leaf) {
      csv.add_row({point_cell(e), CsvWriter::cell(e.delta), name, CsvWriter::cell(e.estimate),
                   CsvWriter::cell(e.sample_size), CsvWriter::cell(join_flags(e.flags))});
    }
    summary[name]["sup_estimate"] = rep.sup_estimate;
    summary[name]["delta_spread"] = delta_independence_spread(rep);
    summary[name]["flags"] = rep.flags;
    for (const auto& f : rep.flags) all_flags.push_back(f);
  };

  if (kind == "both" || kind == "uc") {
    emit(unstable_upper_capacity_entropy(sys, pred, x_grid, delta,
                                         count_schedule_from(rc.cfg, "schedule"), opts),
         "upper_capacity");
  }
  if (kind == "both" || kind == "bowen") {
    emit(unstable_bowen_entropy(sys, pred, x_grid, delta, cover_schedule_from(rc.cfg), opts),
         "bowen");
  }
  csv.write(out_path(rc, "leaf_entropy.csv"));
  write_json_file(out_path(rc, "summary.json"), summary);
  return rc.strict && has_quality_flag(all_flags) ? kExitStrict : kExitOk;
}

int cmd_local_entropy(const RunConfig& rc) {
  auto sys = std::make_shared<const DynSystem>(system_from_config(rc.cfg));
  const auto sched = count_schedule_from(rc.cfg, "local");
  const std::string kind = rc.cfg.get_or<std::string>("measure.kind", "leaf_lebesgue");

  CsvWriter csv({"x", "eps", "n", "a_n"});
  nlohmann::json summary = base_summary(rc);
  std::vector<std::string> all_flags;
  nlohmann::json points = nlohmann::json::array();

  auto emit = [&](const std::string& label, const LocalEntropyResult& r) {
    for (const auto& tr : r.traces) {
      for (const auto& [n, a] : tr.a) {
        csv.add_row({CsvWriter::cell(label), CsvWriter::cell(tr.eps), CsvWriter::cell(n),
                     CsvWriter::cell(a)});
      }
    }
    nlohmann::json p;
    p["x"] = label;
    p["lower"] = r.lower;
    p["upper"] = r.upper;
    p["flags"] = r.flags;
    points.push_back(p);
    for (const auto& f : r.flags) all_flags.push_back(f);
  };

  if (symbolic(*sys)) {
    auto chain = kind == "parry"
                     ? MarkovChain::parry(*symbolic(*sys))
                     : MarkovChain::bernoulli(rc.cfg.get_or<std::vector<double>>(
                           "measure.probs", {0.5, 0.5}));
    auto mu = LeafMeasure::cylinder(sys, chain);
    const auto words = rc.cfg.get_or<std::vector<std::string>>("local.words", {});
    if (words.empty()) throw ValidationError("local.words is required for symbolic systems");
    for (const auto& w : words) emit(w, local_unstable_entropy(mu, Point(word_from_string(w)), sched));
  } else {
    const double delta = rc.cfg.get_or<double>("leaf.delta", 0.1);
    auto seg = LeafSegment::toral_leaf(sys, default_base_grid(*sys, 1).front(), delta);
    auto mu = kind == "density"
                  ? LeafMeasure::polynomial_density(
                        seg, rc.cfg.get<std::vector<double>>("measure.coeffs"))
                  : LeafMeasure::leaf_lebesgue(seg);
    const auto params = rc.cfg.get_or<std::vector<double>>("local.params", {0.0});
    for (double t : params) emit(format_full(t), local_unstable_entropy_param(mu, t, sched));
  }
  summary["points"] = points;
  csv.write(out_path(rc, "local_entropy.csv"));
  write_json_file(out_path(rc, "summary.json"), summary);
  return rc.strict && has_quality_flag(all_flags) ? kExitStrict : kExitOk;
}

int cmd_spectrum(const RunConfig& rc) {
  auto sys = std::make_shared<const DynSystem>(system_from_config(rc.cfg));
  if (!symbolic(*sys)) throw ValidationError("the spectrum command needs a symbolic system");
  const auto phi = potential_from(rc.cfg);
  SpectrumOptions opts;
  opts.window = rc.cfg.get_or<double>("spectrum.window", 0.005);
  opts.n_exact = rc.cfg.get_or<int>("spectrum.n", 2000);
  opts.tol_upper = rc.cfg.get_or<double>("spectrum.tol_upper", 0.03);
  if (rc.cfg.has("spectrum.tol_two_sided")) {
    opts.tol_two_sided = rc.cfg.get<double>("spectrum.tol_two_sided");
  }
  opts.threads = rc.threads;
  const auto grid = rc.cfg.get_or<std::vector<double>>(
      "spectrum.levels", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});

  const auto spec = corollary_spectrum_check(sys, phi, grid, opts);
  CsvWriter csv({"a", "lhs", "rhs", "gap", "flags"});
  for (const auto& row : spec.rows) {
    csv.add_row({CsvWriter::cell(row.a), CsvWriter::cell(row.lhs), CsvWriter::cell(row.rhs),
                 CsvWriter::cell(row.gap), CsvWriter::cell(join_flags(row.flags))});
  }
  csv.write(out_path(rc, "spectrum.csv"));

  nlohmann::json summary = base_summary(rc);
  summary["pass"] = spec.pass;
  summary["max_gap"] = spec.max_gap;
  summary["max_two_sided_gap"] = spec.max_two_sided_gap;
  summary["window"] = spec.window;
  write_json_file(out_path(rc, "summary.json"), summary);
  return spec.pass ? kExitOk : 1;
}

int cmd_separated_count(const RunConfig& rc) {
  auto sys = std::make_shared<const DynSystem>(system_from_config(rc.cfg));
  SubsetSample sample;
  if (symbolic(*sys)) {
    sample = leaf_sample(LeafSegment::symbolic_leaf(sys, {}),
                         1 << rc.cfg.get_or<int>("count.word_len", 10));
  } else {
    sample = system_leaf_sample(sys, default_base_grid(*sys, 1).front(),
                                rc.cfg.get_or<double>("leaf.delta", 0.1),
                                rc.cfg.get_or<int>("leaf.grid", 2001));
  }
  const auto ns = rc.cfg.get_or<std::vector<int>>("count.n", {1, 2, 3, 4, 5, 6, 7, 8});
  const auto epss = rc.cfg.get_or<std::vector<double>>("count.eps", {0.5});
  const double rho = rc.cfg.get_or<double>("count.rho", 0.0);

  CsvWriter csv({"n", "eps", "rho", "separated", "spanning", "exact", "flags"});
  for (int n : ns) {
    for (double eps : epss) {
      if (rho > 0.0) {
        SeparationConfig cfg{rho, eps, n};
        const auto r = rho_separated_count(*sys, sample, std::nullopt, cfg);
        csv.add_row({CsvWriter::cell(n), CsvWriter::cell(eps), CsvWriter::cell(rho),
                     CsvWriter::cell(r.count), "", r.exact ? "1" : "0",
                     CsvWriter::cell(join_flags(r.flags))});
      } else {
        const auto sep = max_separated_count(sample, n, eps);
        const auto span = min_spanning_count(sample, n, eps);
        csv.add_row({CsvWriter::cell(n), CsvWriter::cell(eps), "0", CsvWriter::cell(sep.count),
                     CsvWriter::cell(span), sep.exact ? "1" : "0", ""});
      }
    }
  }
  csv.write(out_path(rc, "separated.csv"));
  nlohmann::json summary = base_summary(rc);
  summary["sample_size"] = sample.size();
  write_json_file(out_path(rc, "summary.json"), summary);
  return kExitOk;
}

int cmd_glue_demo(const RunConfig& rc) {
  auto sys = system_from_config(rc.cfg);
  const auto* sym = symbolic(sys);
  if (!sym) throw ValidationError("glueing runs on symbolic systems");
  GluingPlan plan;
  const auto blocks = rc.cfg.get_or<std::vector<std::vector<std::string>>>(
      "glue.blocks", {{"000", "111"}, {"000", "111"}, {"000", "111"}});
  for (const auto& set : blocks) {
    std::vector<Word> ws;
    for (const auto& s : set) ws.push_back(word_from_string(s));
    plan.blocks.push_back(std::move(ws));
  }
  plan.rho_star = rc.cfg.get_or<double>("glue.rho_star", 1.0 / 3.0);
  plan.eps_star = rc.cfg.get_or<double>("glue.eps_star", 0.5);

  const auto res = glue_orbits(*sym, plan);
  CsvWriter csv({"word"});
  for (const auto& w : res.words) csv.add_row({word_to_string(w)});
  csv.write(out_path(rc, "glued_words.csv"));

  nlohmann::json summary = base_summary(rc);
  summary["cardinality"] = res.words.size();
  summary["expected"] = res.expected;
  summary["cardinality_ok"] = res.cardinality_ok;
  summary["bridge_length"] = res.bridge_length;
  summary["glued_length"] = res.glued_length;
  summary["separation_ok"] = res.separation_ok;
  summary["min_separated_indices"] = res.min_separated_indices;
  summary["required_indices"] = res.required_indices;
  write_json_file(out_path(rc, "summary.json"), summary);
  return res.cardinality_ok && res.separation_ok ? kExitOk : 1;
}

int cmd_uniform_separation(const RunConfig& rc) {
  auto sys = system_from_config(rc.cfg);
  const auto* sym = symbolic(sys);
  if (!sym) throw ValidationError("uniform separation runs on symbolic systems");
  const std::string kind = rc.cfg.get_or<std::string>("measure.kind", "bernoulli");
  const auto chain = kind == "parry" ? MarkovChain::parry(*sym)
                                     : MarkovChain::bernoulli(rc.cfg.get_or<std::vector<double>>(
                                           "measure.probs", {0.5, 0.5}));
  const int n = rc.cfg.get_or<int>("us.n", 14);
  const auto kappas = rc.cfg.get_or<std::vector<double>>("us.kappa", {0.2, 0.3});

  CsvWriter csv({"kappa", "kappa_prime", "rho_star", "threshold", "typical", "separated",
                 "achieved", "target", "pass"});
  bool all = true;
  for (double kappa : kappas) {
    const auto p = uniform_separation_probe(*sym, chain, kappa, n);
    all = all && p.feasible && p.pass;
    csv.add_row({CsvWriter::cell(p.kappa), CsvWriter::cell(p.kappa_prime),
                 CsvWriter::cell(p.rho_star), CsvWriter::cell(p.hamming_threshold),
                 CsvWriter::cell(p.typical_count), CsvWriter::cell(p.separated_count),
                 CsvWriter::cell(p.achieved), CsvWriter::cell(p.target),
                 p.pass ? "1" : "0"});
  }
  csv.write(out_path(rc, "uniform_separation.csv"));
  nlohmann::json summary = base_summary(rc);
  summary["pass"] = all;
  write_json_file(out_path(rc, "summary.json"), summary);
  return all ? kExitOk : 1;
}

int cmd_irregular_demo(const RunConfig& rc) {
  auto sys_val = system_from_config(rc.cfg);
  const auto* sym = symbolic(sys_val);
  if (!sym) throw ValidationError("the irregular demo runs on symbolic systems");
  const Word p1 = word_from_string(rc.cfg.get_or<std::string>("irregular.proxy1", "0"));
  const Word p2 = word_from_string(rc.cfg.get_or<std::string>("irregular.proxy2", "1"));
  const int steps = rc.cfg.get_or<int>("irregular.doubling", 14);

  const Word x = irregular_orbit(*sym, p1, p2, steps);
  TestFamily fam = TestFamily::defaults(sys_val, 6, rc.cfg.get_or<double>("irregular.tau", 0.02));
  // checkpoints at the block boundaries, where the swings are visible
  std::vector<int> checkpoints;
  const int max_depth = 3;  // indicators need lookahead
  for (int k = 2, acc = 3; k < steps; ++k) {
    acc += 1 << k;
    if (acc + max_depth < static_cast<int>(x.size())) checkpoints.push_back(acc);
  }
  const auto probe = limit_set_probe(sys_val, Point(x), fam, checkpoints);

  // contrast: a pseudorandom word from the fair coin measure converges
  std::mt19937_64 rng(rc.seed);
  const auto chain = MarkovChain::bernoulli(std::vector<double>(sym->alphabet_size,
                                                                1.0 / sym->alphabet_size));
  Word generic = chain.sample_word(static_cast<int>(x.size()), rng);
  // repair for SFTs: resample inadmissible steps
  for (std::size_t i = 0; i + 1 < generic.size(); ++i) {
    while (!sym->allowed(generic[i], generic[i + 1])) {
      generic[i + 1] = static_cast<Symbol>((generic[i + 1] + 1) % sym->alphabet_size);
    }
  }
  const auto generic_probe = limit_set_probe(sys_val, Point(generic), fam, checkpoints);

  CsvWriter csv({"word", "classification", "max_tail_swing"});
  csv.add_row({"glued", probe.cls == LimitClass::oscillating ? "oscillating" : "convergent",
               CsvWriter::cell(probe.max_tail_swing)});
  csv.add_row({"generic",
               generic_probe.cls == LimitClass::oscillating ? "oscillating" : "convergent",
               CsvWriter::cell(generic_probe.max_tail_swing)});
  csv.write(out_path(rc, "irregular.csv"));

  nlohmann::json summary = base_summary(rc);
  summary["glued_oscillating"] = probe.cls == LimitClass::oscillating;
  summary["generic_oscillating"] = generic_probe.cls == LimitClass::oscillating;
  summary["word_length"] = x.size();
  write_json_file(out_path(rc, "summary.json"), summary);
  return kExitOk;
}

int cmd_check(const RunConfig& rc, const std::string& theorem) {
  const auto rep = run_check(theorem, rc.threads);
  CsvWriter csv({"instance", "lhs", "rhs", "tolerance", "verdict", "detail"});
  bool any_fail = false;
  for (const auto& row : rep.rows) {
    any_fail = any_fail || row.verdict == "FAIL";
    csv.add_row({CsvWriter::cell(row.instance), CsvWriter::cell(row.lhs),
                 CsvWriter::cell(row.rhs), CsvWriter::cell(row.tolerance), row.verdict,
                 CsvWriter::cell(row.detail)});
  }
  csv.write(out_path(rc, "verdicts.csv"));
  nlohmann::json summary = base_summary(rc);
  summary["check"] = rep.name;
  summary["all_pass"] = rep.all_pass();
  write_json_file(out_path(rc, "summary.json"), summary);
  return any_fail ? 1 : kExitOk;
}

}  // namespace uent
