#include "uentropy/multifractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uentropy/parallel.hpp"
#include "uentropy/unstable.hpp"

namespace uent {

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// Potential
// ---------------------------------------------------------------------------
Potential Potential::indicator(const std::string& w) {
  Potential p;
  p.kind = Kind::cylinder_indicator;
  p.word = word_from_string(w);
  if (p.word.empty()) throw ValidationError("indicator word must be nonempty");
  return p;
}

Potential Potential::locally_constant_table(int depth, std::vector<double> table) {
  Potential p;
  p.kind = Kind::locally_constant;
  p.depth = depth;
  p.table = std::move(table);
  if (depth < 1) throw ValidationError("locally constant potentials need depth >= 1");
  return p;
}

Potential Potential::trigonometric(std::vector<TrigTerm> terms) {
  Potential p;
  p.kind = Kind::trig_poly;
  p.trig = std::move(terms);
  return p;
}

Potential Potential::constant(double c) {
  Potential p;
  p.kind = Kind::locally_constant;
  p.depth = 1;
  p.table = {};  // resolved per alphabet in eval: empty table means constant
  p.table.assign(1, c);
  return p;
}

int Potential::symbolic_depth() const {
  if (kind == Kind::cylinder_indicator) return static_cast<int>(word.size());
  if (kind == Kind::locally_constant) return depth;
  return 0;
}

double Potential::eval_word(std::span<const Symbol> w) const {
  switch (kind) {
    case Kind::cylinder_indicator: {
      if (w.size() < word.size()) throw ValidationError("word too short for the indicator");
      return std::equal(word.begin(), word.end(), w.begin()) ? 1.0 : 0.0;
    }
    case Kind::locally_constant: {
      if (table.size() == 1) return table[0];  // constant
      if (static_cast<int>(w.size()) < depth) {
        throw ValidationError("word too short for the locally constant depth");
      }
      // infer the alphabet from the table size
      int k = 2;
      while (static_cast<std::size_t>(std::pow(k, depth)) < table.size()) ++k;
      std::size_t idx = 0;
      for (int i = 0; i < depth; ++i) idx = idx * k + w[i];
      return table.at(idx);
    }
    case Kind::trig_poly:
      throw ValidationError("trigonometric potentials evaluate on torus coordinates");
  }
  return 0.0;
}

double Potential::eval_coords(std::span<const double> x) const {
  if (kind != Kind::trig_poly) {
    if (kind == Kind::locally_constant && table.size() == 1) return table[0];
    throw ValidationError("symbolic potentials evaluate on words");
  }
  double v = 0.0;
  for (const auto& term : trig) {
    double phase = 0.0;
    for (std::size_t i = 0; i < term.freq.size() && i < x.size(); ++i) {
      phase += term.freq[i] * x[i];
    }
    phase *= 2.0 * std::numbers::pi;
    v += term.c_cos * std::cos(phase) + term.c_sin * std::sin(phase);
  }
  return v;
}

std::optional<std::vector<double>> Potential::depth1_table(int alphabet) const {
  if (kind == Kind::cylinder_indicator && word.size() == 1) {
    std::vector<double> t(alphabet, 0.0);
    t[word[0]] = 1.0;
    return t;
  }
  if (kind == Kind::locally_constant && depth == 1) {
    if (table.size() == 1) return std::vector<double>(alphabet, table[0]);
    if (static_cast<int>(table.size()) == alphabet) return table;
  }
  return std::nullopt;
}

double birkhoff_average(const DynSystem& sys, const Potential& phi, const Point& x, int n) {
  if (n < 1) throw ValidationError("birkhoff averages need n >= 1");
  if (const auto* sym = symbolic(sys)) {
    (void)sym;
    const auto& w = std::get<Word>(x);
    const int need = phi.symbolic_depth();
    if (static_cast<int>(w.size()) < n + need - 1) {
      throw ValidationError("word too short for the birkhoff window");
    }
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += phi.eval_word(std::span<const Symbol>(w.data() + j, w.size() - j));
    }
    return acc / n;
  }
  auto coords = std::get<std::vector<double>>(x);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += phi.eval_coords(coords);
    if (j + 1 < n) coords = std::get<std::vector<double>>(map_once(sys, Point(coords)));
  }
  return acc / n;
}

// ---------------------------------------------------------------------------
// exact constrained counts
// ---------------------------------------------------------------------------
namespace {

// log #admissible n-words by total per-symbol score, index shifted by
// n * min(v); entry s holds words with sum = s + n * min(v).
std::vector<double> log_count_by_sum(const SymbolicSystem& sys, const std::vector<int>& v,
                                     int n) {
  const int k = sys.alphabet_size;
  const int vmin = *std::min_element(v.begin(), v.end());
  const int vmax = *std::max_element(v.begin(), v.end());
  const int span = (vmax - vmin) * n;
  // dp[s][a]: log count of admissible words of current length ending at a
  // with shifted score s
  std::vector<std::vector<double>> dp(span + 1, std::vector<double>(k, kNegInf));
  for (int a = 0; a < k; ++a) dp[v[a] - vmin][a] = 0.0;
  for (int step = 1; step < n; ++step) {
    std::vector<std::vector<double>> next(span + 1, std::vector<double>(k, kNegInf));
    const int smax = (vmax - vmin) * step;
    for (int s = 0; s <= smax; ++s) {
      for (int a = 0; a < k; ++a) {
        if (dp[s][a] == kNegInf) continue;
        for (int b = 0; b < k; ++b) {
          if (sys.transition[a][b] == 0) continue;
          double& slot = next[s + (v[b] - vmin)][b];
          slot = log_add(slot, dp[s][a]);
        }
      }
    }
    dp.swap(next);
  }
  std::vector<double> out(span + 1, kNegInf);
  for (int s = 0; s <= span; ++s) {
    for (int a = 0; a < k; ++a) out[s] = log_add(out[s], dp[s][a]);
  }
  return out;
}

}  // namespace

double log_constrained_count(const SymbolicSystem& sys, const std::vector<int>& v, int n, int lo,
                             int hi) {
  if (static_cast<int>(v.size()) != sys.alphabet_size) {
    throw ValidationError("score table size must match the alphabet");
  }
  const auto by_sum = log_count_by_sum(sys, v, n);
  const int vmin = *std::min_element(v.begin(), v.end());
  double acc = kNegInf;
  for (int s = lo; s <= hi; ++s) {
    const int idx = s - n * vmin;
    if (idx < 0 || idx >= static_cast<int>(by_sum.size())) continue;
    acc = log_add(acc, by_sum[idx]);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// level sets
// ---------------------------------------------------------------------------
LevelSetResult level_set_entropy(const std::shared_ptr<const DynSystem>& sys,
                                 const Potential& phi, double a, double window,
                                 const CountSchedule& sched, int grid) {
  sched.validate();
  if (!(window > 0.0)) throw ValidationError("level window must be positive");
  LevelSetResult res;

  if (const auto* sym = symbolic(*sys)) {
    if (auto table = phi.depth1_table(sym->alphabet_size)) {
      // integer-valued tables go through the exact counter
      std::vector<int> v(table->size());
      bool integer_valued = true;
      for (std::size_t i = 0; i < table->size(); ++i) {
        v[i] = static_cast<int>(std::llround((*table)[i]));
        if (std::abs((*table)[i] - v[i]) > 1e-12) integer_valued = false;
      }
      if (integer_valued) {
        double estimate = 0.0;
        bool any = false;
        for (int n : sched.n) {
          // strict window |sum/n - a| < window
          const int lo = static_cast<int>(std::floor(n * (a - window) + 1e-9)) + 1;
          const int hi = static_cast<int>(std::ceil(n * (a + window) - 1e-9)) - 1;
          if (lo > hi) continue;
          const double lc = log_constrained_count(*sym, v, n, lo, hi);
          if (lc == kNegInf) continue;
          estimate = lc / n;
          any = true;
        }
        res.exact = true;
        if (!any) {
          res.flags.push_back(kFlagEmptyLevel);
          res.estimate = 0.0;
        } else {
          res.estimate = estimate;  // largest scheduled n
        }
        return res;
      }
    }
  }

  // sampled route: level membership re-evaluated at every n on a leaf grid
  const auto bases = default_base_grid(*sys, 1);
  SubsetSample sample = system_leaf_sample(sys, bases.front(), 0.1, grid);
  bool any = false;
  std::vector<std::pair<int, double>> log_counts;
  const double eps = sched.eps.back();
  for (int n : sched.n) {
    Predicate pred = [&](const PointView& p) {
      double avg;
      if (p.word) {
        avg = birkhoff_average(*sys, phi, Point(*p.word), n);
      } else {
        avg = birkhoff_average(*sys, phi, Point(*p.coords), n);
      }
      return std::abs(avg - a) < window;
    };
    const SubsetSample level = filter_sample(sample, pred);
    if (level.size() == 0) continue;
    any = true;
    log_counts.emplace_back(n, std::log(static_cast<double>(
                                   max_separated_count(level, n, eps).count)));
  }
  if (!any) {
    res.flags.push_back(kFlagEmptyLevel);
    return res;
  }
  // growth rate over the tail
  const std::size_t tail = std::max<std::size_t>(2, (log_counts.size() + 1) / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const std::size_t begin = log_counts.size() > tail ? log_counts.size() - tail : 0;
  std::size_t cnt = 0;
  for (std::size_t i = begin; i < log_counts.size(); ++i) {
    sx += log_counts[i].first;
    sy += log_counts[i].second;
    sxx += static_cast<double>(log_counts[i].first) * log_counts[i].first;
    sxy += log_counts[i].first * log_counts[i].second;
    ++cnt;
  }
  const double denom = cnt * sxx - sx * sx;
  res.estimate = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  return res;
}

// ---------------------------------------------------------------------------
// pressure and the Legendre oracle
// ---------------------------------------------------------------------------
namespace {

struct LiftedMatrix {
  std::vector<Word> states;                 // admissible depth-m words
  std::vector<std::vector<int>> support;    // 0/1 transitions
  std::vector<double> values;               // phi per state
};

LiftedMatrix lift(const SymbolicSystem& sys, const Potential& phi) {
  const int m = std::max(1, phi.symbolic_depth());
  LiftedMatrix lm;
  lm.states = sys.enumerate_words(m);
  const std::size_t s = lm.states.size();
  lm.support.assign(s, std::vector<int>(s, 0));
  lm.values.resize(s);
  for (std::size_t i = 0; i < s; ++i) lm.values[i] = phi.eval_word(lm.states[i]);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      if (m == 1) {
        lm.support[i][j] = sys.transition[lm.states[i][0]][lm.states[j][0]];
      } else {
        const bool overlap = std::equal(lm.states[i].begin() + 1, lm.states[i].end(),
                                        lm.states[j].begin());
        lm.support[i][j] = overlap ? 1 : 0;
      }
    }
  }
  return lm;
}

void require_primitive(const LiftedMatrix& lm) {
  SymbolicSystem probe;
  probe.alphabet_size = static_cast<int>(lm.states.size());
  probe.metric_base = 0.5;
  probe.transition = lm.support;
  bool has_row = true;
  for (const auto& row : probe.transition) {
    if (std::all_of(row.begin(), row.end(), [](int x) { return x == 0; })) has_row = false;
  }
  if (!has_row || !probe.primitivity_power()) {
    throw ValidationError("not_irreducible: the transition matrix is not primitive");
  }
}

}  // namespace

double pressure_sft(const SymbolicSystem& sys, const Potential& phi, double q) {
  if (phi.kind == Potential::Kind::trig_poly) {
    throw ValidationError("pressure needs a locally constant potential");
  }
  const LiftedMatrix lm = lift(sys, phi);
  require_primitive(lm);
  const std::size_t s = lm.states.size();
  std::vector<std::vector<double>> weighted(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    const double w = std::exp(q * lm.values[i]);
    for (std::size_t j = 0; j < s; ++j) {
      if (lm.support[i][j]) weighted[i][j] = w;
    }
  }
  return std::log(power_iteration(weighted).eigenvalue);
}

double pressure_slope(const SymbolicSystem& sys, const Potential& phi, double q) {
  // equilibrium average of phi from the tilted eigendata
  const LiftedMatrix lm = lift(sys, phi);
  require_primitive(lm);
  const std::size_t s = lm.states.size();
  std::vector<std::vector<double>> weighted(s, std::vector<double>(s, 0.0));
  std::vector<std::vector<double>> transposed(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    const double w = std::exp(q * lm.values[i]);
    for (std::size_t j = 0; j < s; ++j) {
      if (lm.support[i][j]) {
        weighted[i][j] = w;
        transposed[j][i] = w;
      }
    }
  }
  const auto right = power_iteration(weighted);
  const auto left = power_iteration(transposed);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    const double pi = left.vector[i] * right.vector[i];
    num += pi * lm.values[i];
    den += pi;
  }
  return num / den;
}

std::pair<double, double> achievable_interval(const SymbolicSystem& sys, const Potential& phi) {
  const LiftedMatrix lm = lift(sys, phi);
  const int s = static_cast<int>(lm.states.size());
  // Karp cycle means over the lifted graph, edge weight = phi(source)
  auto cycle_mean = [&](double sign) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(s + 1, std::vector<double>(s, -inf));
    for (int v = 0; v < s; ++v) dp[0][v] = 0.0;
    for (int k = 1; k <= s; ++k) {
      for (int u = 0; u < s; ++u) {
        if (dp[k - 1][u] == -inf) continue;
        for (int v = 0; v < s; ++v) {
          if (!lm.support[u][v]) continue;
          dp[k][v] = std::max(dp[k][v], dp[k - 1][u] + sign * lm.values[u]);
        }
      }
    }
    double best = -inf;
    for (int v = 0; v < s; ++v) {
      if (dp[s][v] == -inf) continue;
      double worst = inf;
      for (int k = 0; k < s; ++k) {
        if (dp[k][v] == -inf) continue;
        worst = std::min(worst, (dp[s][v] - dp[k][v]) / (s - k));
      }
      best = std::max(best, worst);
    }
    return sign * best;
  };
  return {cycle_mean(-1.0), cycle_mean(1.0)};
}

LegendreResult legendre_spectrum(const SymbolicSystem& sys, const Potential& phi, double a) {
  LegendreResult res;
  const auto [lo, hi] = achievable_interval(sys, phi);
  if (a < lo - 1e-9 || a > hi + 1e-9) {
    res.reachable = false;
    return res;
  }
  constexpr double kQ = 50.0;
  auto g = [&](double q) { return pressure_sft(sys, phi, q) - q * a; };
  // golden-section on a convex objective
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double ql = -kQ, qr = kQ;
  double q1 = qr - gr * (qr - ql);
  double q2 = ql + gr * (qr - ql);
  double g1 = g(q1), g2 = g(q2);
  while (qr - ql > 1e-8) {
    if (g1 <= g2) {
      qr = q2;
      q2 = q1;
      g2 = g1;
      q1 = qr - gr * (qr - ql);
      g1 = g(q1);
    } else {
      ql = q1;
      q1 = q2;
      g1 = g2;
      q2 = ql + gr * (qr - ql);
      g2 = g(q2);
    }
  }
  res.q_star = 0.5 * (ql + qr);
  res.value = std::max(0.0, g(res.q_star));
  return res;
}

// ---------------------------------------------------------------------------
// spectrum harness
// ---------------------------------------------------------------------------
SpectrumResult corollary_spectrum_check(const std::shared_ptr<const DynSystem>& sys,
                                        const Potential& phi, const std::vector<double>& grid,
                                        const SpectrumOptions& opts) {
  const auto* sym = symbolic(*sys);
  if (!sym) throw ValidationError("spectrum checks run on symbolic systems");
  SpectrumResult out;
  out.window = opts.window;
  out.rows.resize(grid.size());

  CountSchedule sched;
  sched.n = {opts.n_exact};
  sched.eps = {sym->metric_base};

  parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
    SpectrumRow row;
    row.a = grid[i];
    const auto rhs = legendre_spectrum(*sym, phi, row.a);
    row.reachable = rhs.reachable;
    if (!rhs.reachable) {
      row.flags.push_back(kFlagLevelUnreachable);
      out.rows[i] = std::move(row);
      return;
    }
    row.rhs = rhs.value;
    const auto lhs = level_set_entropy(sys, phi, row.a, opts.window, sched);
    row.lhs = lhs.estimate;
    row.gap = row.lhs - row.rhs;
    for (const auto& f : lhs.flags) row.flags.push_back(f);
    out.rows[i] = std::move(row);
  });

  out.pass = true;
  for (const auto& row : out.rows) {
    if (!row.reachable) continue;
    out.max_gap = std::max(out.max_gap, row.gap);
    out.max_two_sided_gap = std::max(out.max_two_sided_gap, std::abs(row.gap));
    if (row.gap > opts.tol_upper) out.pass = false;
    if (opts.tol_two_sided && std::abs(row.gap) > *opts.tol_two_sided) out.pass = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// limit probes and irregular points
// ---------------------------------------------------------------------------
TestFamily TestFamily::defaults(const DynSystem& sys, int count, double tau) {
  TestFamily fam;
  fam.tau = tau;
  if (const auto* sym = symbolic(sys)) {
    // cylinder indicators: singles, then pairs, lexicographically
    for (int len = 1; static_cast<int>(fam.fns.size()) < count && len <= 3; ++len) {
      for (const auto& w : sym->enumerate_words(len)) {
        if (static_cast<int>(fam.fns.size()) >= count) break;
        Potential p;
        p.kind = Potential::Kind::cylinder_indicator;
        p.word = w;
        fam.fns.push_back(std::move(p));
      }
    }
    return fam;
  }
  const int d = space_dim(sys);
  std::vector<std::vector<int>> freqs = {{1}, {0, 1}, {1, 1}};
  for (const auto& f : freqs) {
    for (bool sine : {false, true}) {
      if (static_cast<int>(fam.fns.size()) >= count) break;
      Potential::TrigTerm term;
      term.freq.assign(d, 0);
      for (std::size_t i = 0; i < f.size() && i < term.freq.size(); ++i) term.freq[i] = f[i];
      term.c_cos = sine ? 0.0 : 1.0;
      term.c_sin = sine ? 1.0 : 0.0;
      fam.fns.push_back(Potential::trigonometric({term}));
    }
  }
  return fam;
}

std::vector<double> birkhoff_vector(const DynSystem& sys, const TestFamily& fam, const Point& x,
                                    int n) {
  std::vector<double> v;
  v.reserve(fam.fns.size());
  for (const auto& phi : fam.fns) v.push_back(birkhoff_average(sys, phi, x, n));
  return v;
}

LimitProbe limit_set_probe(const DynSystem& sys, const Point& x, const TestFamily& fam,
                           const std::vector<int>& checkpoints) {
  if (checkpoints.empty()) throw ValidationError("limit probes need checkpoints");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw ValidationError("checkpoints must be strictly increasing");
    }
  }
  LimitProbe probe;
  for (int n : checkpoints) probe.witness.emplace_back(n, birkhoff_vector(sys, fam, x, n));
  const std::size_t tail_begin = probe.witness.size() - probe.witness.size() / 3 - 1;
  for (std::size_t i = std::max<std::size_t>(tail_begin, 1); i < probe.witness.size(); ++i) {
    for (std::size_t f = 0; f < fam.fns.size(); ++f) {
      probe.max_tail_swing = std::max(
          probe.max_tail_swing,
          std::abs(probe.witness[i].second[f] - probe.witness[i - 1].second[f]));
    }
  }
  probe.cls = probe.max_tail_swing > 2.0 * fam.tau ? LimitClass::oscillating
                                                   : LimitClass::convergent;
  return probe;
}

Word irregular_orbit(const SymbolicSystem& sys, const Word& proxy1, const Word& proxy2,
                     int doubling_steps) {
  if (proxy1.empty() || proxy2.empty()) throw ValidationError("proxy words must be nonempty");
  if (!sys.admissible(proxy1) || !sys.admissible(proxy2)) {
    throw ValidationError("proxy words must be admissible");
  }
  if (!sys.primitivity_power()) {
    throw ValidationError("not_mixing: the transition matrix is not primitive");
  }
  for (const Word* p : {&proxy1, &proxy2}) {
    if (!sys.allowed(p->back(), p->front())) {
      throw ValidationError("proxy word cannot be repeated admissibly");
    }
  }
  // shortest admissible bridges between symbol pairs (possibly empty)
  auto bridge = [&](Symbol a, Symbol b) -> Word {
    if (sys.allowed(a, b)) return {};
    // BFS over interior paths, preferring lexicographically small words
    std::vector<Word> frontier = {{}};
    for (int len = 1; len <= sys.alphabet_size + 1; ++len) {
      std::vector<Word> next;
      for (const auto& w : frontier) {
        const Symbol last = w.empty() ? a : w.back();
        for (int c = 0; c < sys.alphabet_size; ++c) {
          if (!sys.allowed(last, static_cast<Symbol>(c))) continue;
          Word cand = w;
          cand.push_back(static_cast<Symbol>(c));
          if (sys.allowed(static_cast<Symbol>(c), b)) return cand;
          next.push_back(std::move(cand));
        }
      }
      frontier.swap(next);
    }
    throw ValidationError("no admissible bridge between symbols");
  };

  Word out;
  for (int k = 0; k < doubling_steps; ++k) {
    const Word& proxy = (k % 2 == 0) ? proxy1 : proxy2;
    const int len = 1 << k;
    Word block;
    block.reserve(len);
    for (int i = 0; i < len; ++i) block.push_back(proxy[i % proxy.size()]);
    if (!out.empty()) {
      const Word b = bridge(out.back(), block.front());
      out.insert(out.end(), b.begin(), b.end());
    }
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

}  // namespace uent
