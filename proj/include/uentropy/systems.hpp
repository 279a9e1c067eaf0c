#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "uentropy/config.hpp"
#include "uentropy/errors.hpp"
#include "uentropy/words.hpp"

namespace uent {

// ---------------------------------------------------------------------------
// Symbolic systems: one-sided full shifts and subshifts of finite type.
// The whole space acts as a single unstable leaf (expanding degenerate case);
// the leaf of a point is its coordinate cylinder.
// ---------------------------------------------------------------------------
struct SymbolicSystem {
  int alphabet_size = 2;
  std::vector<std::vector<int>> transition;  // k x k, 0/1
  double metric_base = 0.5;                  // d(x,y) = base^(first disagreement)

  static SymbolicSystem full_shift(int k, double base = 0.5);
  // Forbidden words must have length 2; longer constraints need a higher-block
  // recoding which is out of scope here.
  static SymbolicSystem sft(int k, const std::vector<std::string>& forbidden, double base = 0.5);

  void validate() const;  // no all-zero row/column, base in (0,1)

  bool is_full_shift() const;
  bool allowed(Symbol a, Symbol b) const { return transition[a][b] != 0; }
  bool admissible(std::span<const Symbol> w) const;

  // Primitivity (irreducible + aperiodic): some power of the transition
  // matrix is entrywise positive. Returns that power when found.
  std::optional<int> primitivity_power(int max_power = 64) const;

  double word_metric(const Word& a, const Word& b) const;
  double bowen_metric(const Word& a, const Word& b, int n) const;

  // All admissible words of the given length extending `prefix`, in
  // lexicographic order.
  std::vector<Word> enumerate_words(int length, const Word& prefix = {}) const;
  double count_words_log(int length) const;  // log of the admissible word count
};

// ---------------------------------------------------------------------------
// Linear toral automorphisms x -> Ax mod 1 with an integer matrix, |det| = 1.
// ---------------------------------------------------------------------------
struct EigenSplit {
  std::vector<double> moduli;  // all eigenvalue moduli, descending
  int dim_s = 0;
  int dim_c = 0;
  int dim_u = 0;
  double lambda_u = 0.0;          // unstable eigenvalue modulus (dim_u == 1)
  std::vector<double> e_u;        // unit unstable eigenvector (dim_u == 1)
};

inline constexpr double kEigenUnitTolerance = 1e-9;

struct ToralAutomorphism {
  int dim = 0;
  std::vector<std::vector<long long>> matrix;
  EigenSplit splitting;

  static ToralAutomorphism from_matrix(std::vector<std::vector<long long>> m);

  std::vector<double> apply(std::span<const double> x) const;  // reduced to [0,1)
};

// Product of a toral automorphism with a circle rotation; the rotation is the
// center direction and never enters unstable-leaf geometry.
struct ProductSystem {
  ToralAutomorphism factor;
  double rotation = 0.0;

  int dim() const { return factor.dim + 1; }
  std::vector<double> apply(std::span<const double> x) const;
};

using DynSystem = std::variant<SymbolicSystem, ToralAutomorphism, ProductSystem>;

const SymbolicSystem* symbolic(const DynSystem& s);
// The hyperbolic toral factor carrying E^u (identity for plain automorphisms).
const ToralAutomorphism* toral_factor(const DynSystem& s);
int space_dim(const DynSystem& s);
// log(alphabet) or log(lambda_u); used to bracket critical-exponent searches.
double entropy_upper_hint(const DynSystem& s);

DynSystem system_from_config(const KVConfig& cfg);

// Shipped desk systems.
DynSystem make_full_shift(int k);
DynSystem make_golden_mean_sft();
DynSystem make_cat_map();
DynSystem make_cat_rotation_product();
DynSystem make_toral_3d();

// ---------------------------------------------------------------------------
// Points and orbits
// ---------------------------------------------------------------------------
using Point = std::variant<Word, std::vector<double>>;

struct Orbit {
  std::vector<Point> points;  // x, f(x), ..., f^(n-1)(x)
  int length() const { return static_cast<int>(points.size()); }
};

Point map_once(const DynSystem& s, const Point& x);
Orbit iterate(const DynSystem& s, const Point& x, int n);

// ---------------------------------------------------------------------------
// Unstable leaf segments.
//
// Toral: W^u(x, delta) parameterized by arclength t in [-delta, delta] along
// the unit unstable eigenvector; the chart is an exact isometry for linear
// maps. Segments require delta < 0.25 so the mod-1 projection never
// self-intersects. Symbolic: the "segment" is a cylinder set; the whole
// space is the depth-0 cylinder.
// ---------------------------------------------------------------------------
inline constexpr double kMaxLeafRadius = 0.25;
inline constexpr double kChartTolerance = 1e-9;

struct LeafSegment {
  std::shared_ptr<const DynSystem> system;
  // toral fields
  std::vector<double> base_point;
  double radius = 0.0;
  // symbolic field
  Word cylinder;

  bool is_symbolic() const;
  double lambda_u() const;

  // Toral chart and its inverse (wrap-aware; rejects off-leaf points).
  std::vector<double> chart(double t) const;
  std::optional<double> chart_inverse(std::span<const double> y) const;

  static LeafSegment toral_leaf(std::shared_ptr<const DynSystem> sys,
                                std::vector<double> base, double delta);
  static LeafSegment symbolic_leaf(std::shared_ptr<const DynSystem> sys, Word cyl);
};

double u_metric(const LeafSegment& seg, const Point& y, const Point& z);
double bowen_u_distance(const LeafSegment& seg, const Point& y, const Point& z, int n);

// Radius of the (n, eps) Bowen u-ball for a 1-D unstable linear system:
// eps * lambda_u^-(n-1), independent of the center.
double u_ball_radius_linear(const DynSystem& s, int n, double eps);

// Deterministic low-discrepancy base points on the system's space.
std::vector<std::vector<double>> default_base_grid(const DynSystem& s, int count);

}  // namespace uent
