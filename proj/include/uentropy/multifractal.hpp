#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uentropy/caratheodory.hpp"
#include "uentropy/markov.hpp"
#include "uentropy/sample.hpp"
#include "uentropy/systems.hpp"

namespace uent {

// ---------------------------------------------------------------------------
// Observables: cylinder indicators and locally constant tables on symbolic
// systems, low-order trigonometric polynomials on tori.
// ---------------------------------------------------------------------------
struct Potential {
  enum class Kind { cylinder_indicator, locally_constant, trig_poly };

  Kind kind = Kind::cylinder_indicator;
  Word word;                  // cylinder_indicator
  int depth = 1;              // locally_constant
  std::vector<double> table;  // size alphabet^depth

  struct TrigTerm {
    std::vector<int> freq;  // integer frequency vector
    double c_cos = 0.0;
    double c_sin = 0.0;
  };
  std::vector<TrigTerm> trig;

  static Potential indicator(const std::string& w);
  static Potential locally_constant_table(int depth, std::vector<double> table);
  static Potential trigonometric(std::vector<TrigTerm> terms);
  static Potential constant(double c);

  double eval_word(std::span<const Symbol> w) const;      // needs enough lookahead
  double eval_coords(std::span<const double> x) const;
  int symbolic_depth() const;  // lookahead needed per evaluation
  // Indicator/table as a per-symbol value table when depth == 1.
  std::optional<std::vector<double>> depth1_table(int alphabet) const;
};

double birkhoff_average(const DynSystem& sys, const Potential& phi, const Point& x, int n);

// ---------------------------------------------------------------------------
// Exact constrained word counts: log #{admissible n-words w with
// sum_j v[w_j] in [lo, hi]} for integer-valued per-symbol tables, by dynamic
// programming in log space (no enumeration).
// ---------------------------------------------------------------------------
double log_constrained_count(const SymbolicSystem& sys, const std::vector<int>& v, int n,
                             int lo, int hi);

// ---------------------------------------------------------------------------
// Level sets of Birkhoff averages.
// ---------------------------------------------------------------------------
struct LevelSetResult {
  double estimate = 0.0;
  bool exact = false;
  std::vector<std::string> flags;
};

// Growth rate of |average - a| < window level sets, with the membership
// predicate re-evaluated at every n. Symbolic systems with integer-valued
// depth-1 potentials are counted exactly; everything else runs through the
// sampled counting engine on leaf grids.
LevelSetResult level_set_entropy(const std::shared_ptr<const DynSystem>& sys,
                                 const Potential& phi, double a, double window,
                                 const CountSchedule& sched, int grid = 2001);

// ---------------------------------------------------------------------------
// Pressure and the Legendre spectrum oracle.
// ---------------------------------------------------------------------------
// Topological pressure P(q phi) as the log leading eigenvalue of the
// e^{q phi}-weighted transition matrix on depth-m words.
double pressure_sft(const SymbolicSystem& sys, const Potential& phi, double q);

// Equilibrium average of phi at parameter q (from the tilted eigendata).
double pressure_slope(const SymbolicSystem& sys, const Potential& phi, double q);

// Achievable interval of ergodic averages: min/max cycle mean over the
// transition graph.
std::pair<double, double> achievable_interval(const SymbolicSystem& sys, const Potential& phi);

struct LegendreResult {
  double value = 0.0;
  double q_star = 0.0;
  bool reachable = true;
};

// sup{h_mu : integral of phi d mu = a} by convex duality:
// inf over q in [-50, 50] of P(q phi) - q a (golden-section, tol 1e-8).
LegendreResult legendre_spectrum(const SymbolicSystem& sys, const Potential& phi, double a);

// ---------------------------------------------------------------------------
// Spectrum comparison harness.
// ---------------------------------------------------------------------------
struct SpectrumRow {
  double a = 0.0;
  double lhs = 0.0;  // level-set entropy estimate
  double rhs = 0.0;  // variational value from the pressure oracle
  double gap = 0.0;  // lhs - rhs
  bool reachable = true;
  std::vector<std::string> flags;
};

struct SpectrumResult {
  std::vector<SpectrumRow> rows;
  double window = 0.0;
  bool pass = false;
  double max_gap = 0.0;            // max lhs - rhs over reachable rows
  double max_two_sided_gap = 0.0;  // max |lhs - rhs|, meaningful on full shifts
};

struct SpectrumOptions {
  double window = 0.005;
  int n_exact = 2000;
  double tol_upper = 0.03;                    // PASS requires lhs <= rhs + tol
  std::optional<double> tol_two_sided = {};   // full shifts: |lhs - rhs| <= tol
  int threads = 1;
};

SpectrumResult corollary_spectrum_check(const std::shared_ptr<const DynSystem>& sys,
                                        const Potential& phi, const std::vector<double>& grid,
                                        const SpectrumOptions& opts);

// ---------------------------------------------------------------------------
// Empirical-measure limit probes and irregular points.
// ---------------------------------------------------------------------------
struct TestFamily {
  std::vector<Potential> fns;
  double tau = 0.02;
  static TestFamily defaults(const DynSystem& sys, int count = 6, double tau = 0.02);
};

std::vector<double> birkhoff_vector(const DynSystem& sys, const TestFamily& fam,
                                    const Point& x, int n);

enum class LimitClass { convergent, oscillating };

struct LimitProbe {
  LimitClass cls = LimitClass::convergent;
  // one row per checkpoint: the test-family averages
  std::vector<std::pair<int, std::vector<double>>> witness;
  double max_tail_swing = 0.0;
};

// `oscillating` when some test function's averages swing by more than 2 tau
// between consecutive checkpoints in the last third. The classification is
// relative to the family and tau; finite data can never certify convergence
// in the strict sense.
LimitProbe limit_set_probe(const DynSystem& sys, const Point& x, const TestFamily& fam,
                           const std::vector<int>& checkpoints);

// Point with oscillating averages: alternating blocks sampled from two proxy
// words, block lengths doubling. SFT seams are repaired with the shortest
// admissible bridge; hosts must be mixing.
Word irregular_orbit(const SymbolicSystem& sys, const Word& proxy1, const Word& proxy2,
                     int doubling_steps);

inline constexpr const char* kFlagEmptyLevel = "empty_level";
inline constexpr const char* kFlagLevelUnreachable = "level_unreachable";

}  // namespace uent
