#include "uentropy/systems.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

namespace uent {

// ---------------------------------------------------------------------------
// words
// ---------------------------------------------------------------------------
std::size_t first_disagreement(const Word& a, const Word& b) {
  const std::size_t overlap = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < overlap; ++i) {
    if (a[i] != b[i]) return i;
  }
  if (a.size() == b.size()) return kNoDisagreement;
  return overlap;  // strict prefix: diverges right after the overlap
}

Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '9') throw ValidationError("word contains a non-digit symbol: " + s);
    w.push_back(static_cast<Symbol>(c - '0'));
  }
  return w;
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol a : w) s.push_back(static_cast<char>('0' + a));
  return s;
}

bool lex_less(const Word& a, const Word& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------------------
// SymbolicSystem
// ---------------------------------------------------------------------------
SymbolicSystem SymbolicSystem::full_shift(int k, double base) {
  SymbolicSystem s;
  s.alphabet_size = k;
  s.metric_base = base;
  s.transition.assign(k, std::vector<int>(k, 1));
  s.validate();
  return s;
}

SymbolicSystem SymbolicSystem::sft(int k, const std::vector<std::string>& forbidden,
                                   double base) {
  SymbolicSystem s;
  s.alphabet_size = k;
  s.metric_base = base;
  s.transition.assign(k, std::vector<int>(k, 1));
  for (const auto& f : forbidden) {
    if (f.size() != 2) {
      throw ValidationError("forbidden words must have length 2, got: '" + f + "'");
    }
    const Word w = word_from_string(f);
    if (w[0] >= static_cast<Symbol>(k) || w[1] >= static_cast<Symbol>(k)) {
      throw ValidationError("forbidden word uses an out-of-range symbol: " + f);
    }
    s.transition[w[0]][w[1]] = 0;
  }
  s.validate();
  return s;
}

void SymbolicSystem::validate() const {
  if (alphabet_size < 2) throw ValidationError("alphabet size must be at least 2");
  if (!(metric_base > 0.0 && metric_base < 1.0)) {
    throw ValidationError("metric base must lie in (0,1)");
  }
  if (static_cast<int>(transition.size()) != alphabet_size) {
    throw ValidationError("transition matrix size does not match the alphabet");
  }
  for (int a = 0; a < alphabet_size; ++a) {
    if (static_cast<int>(transition[a].size()) != alphabet_size) {
      throw ValidationError("transition matrix is not square");
    }
    bool row = false, col = false;
    for (int b = 0; b < alphabet_size; ++b) {
      if (transition[a][b] != 0) row = true;
      if (transition[b][a] != 0) col = true;
    }
    if (!row || !col) {
      throw ValidationError("transition matrix has an all-zero row or column: symbol " +
                            std::to_string(a) + " is not extendable");
    }
  }
}

bool SymbolicSystem::is_full_shift() const {
  for (const auto& row : transition) {
    for (int v : row) {
      if (v == 0) return false;
    }
  }
  return true;
}

bool SymbolicSystem::admissible(std::span<const Symbol> w) const {
  for (const Symbol a : w) {
    if (a >= alphabet_size) return false;
  }
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (!allowed(w[i], w[i + 1])) return false;
  }
  return true;
}

std::optional<int> SymbolicSystem::primitivity_power(int max_power) const {
  const int k = alphabet_size;
  std::vector<std::vector<int>> p = transition;  // boolean powers
  for (int g = 1; g <= max_power; ++g) {
    bool positive = true;
    for (int a = 0; a < k && positive; ++a) {
      for (int b = 0; b < k; ++b) {
        if (p[a][b] == 0) {
          positive = false;
          break;
        }
      }
    }
    if (positive) return g;
    std::vector<std::vector<int>> next(k, std::vector<int>(k, 0));
    for (int a = 0; a < k; ++a) {
      for (int c = 0; c < k; ++c) {
        if (p[a][c] == 0) continue;
        for (int b = 0; b < k; ++b) {
          if (transition[c][b] != 0) next[a][b] = 1;
        }
      }
    }
    p.swap(next);
  }
  return std::nullopt;
}

double SymbolicSystem::word_metric(const Word& a, const Word& b) const {
  const std::size_t idx = first_disagreement(a, b);
  if (idx == kNoDisagreement) return 0.0;
  return std::pow(metric_base, static_cast<double>(idx));
}

double SymbolicSystem::bowen_metric(const Word& a, const Word& b, int n) const {
  // max_{j<n} base^(i* - j) with i* the first disagreement: attained at
  // j = min(n-1, i*), so the only thing that matters is i* - (n-1).
  const std::size_t idx = first_disagreement(a, b);
  if (idx == kNoDisagreement) return 0.0;
  const long long e = static_cast<long long>(idx) - (n - 1);
  return std::pow(metric_base, static_cast<double>(std::max(0LL, e)));
}

std::vector<Word> SymbolicSystem::enumerate_words(int length, const Word& prefix) const {
  if (length < static_cast<int>(prefix.size())) {
    throw ValidationError("enumeration length is shorter than the prefix");
  }
  if (!prefix.empty() && !admissible(prefix)) {
    throw ValidationError("cylinder prefix is not admissible");
  }
  std::vector<Word> out;
  Word w = prefix;
  w.reserve(length);
  auto emit = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == length) {
      out.push_back(w);
      return;
    }
    for (int b = 0; b < alphabet_size; ++b) {
      if (!w.empty() && !allowed(w.back(), static_cast<Symbol>(b))) continue;
      w.push_back(static_cast<Symbol>(b));
      self(self);
      w.pop_back();
    }
  };
  emit(emit);
  return out;
}

double SymbolicSystem::count_words_log(int length) const {
  if (length <= 0) return 0.0;
  const int k = alphabet_size;
  std::vector<double> v(k, 1.0);
  double log_scale = 0.0;
  for (int step = 1; step < length; ++step) {
    std::vector<double> next(k, 0.0);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        if (transition[a][b] != 0) next[a] += v[b];
      }
    }
    double m = *std::max_element(next.begin(), next.end());
    for (double& x : next) x /= m;
    log_scale += std::log(m);
    v.swap(next);
  }
  return log_scale + std::log(std::accumulate(v.begin(), v.end(), 0.0));
}

// ---------------------------------------------------------------------------
// integer linear algebra + eigen machinery for small matrices
// ---------------------------------------------------------------------------
namespace {

long long integer_determinant(std::vector<std::vector<long long>> m) {
  // Bareiss fraction-free elimination.
  const int d = static_cast<int>(m.size());
  using I = __int128;
  std::vector<std::vector<I>> a(d, std::vector<I>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a[i][j] = m[i][j];
  I prev = 1;
  int sign = 1;
  for (int p = 0; p < d - 1; ++p) {
    if (a[p][p] == 0) {
      int swap_row = -1;
      for (int r = p + 1; r < d; ++r) {
        if (a[r][p] != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return 0;
      std::swap(a[p], a[swap_row]);
      sign = -sign;
    }
    for (int i = p + 1; i < d; ++i) {
      for (int j = p + 1; j < d; ++j) {
        a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
      }
      a[i][p] = 0;
    }
    prev = a[p][p];
  }
  return sign * static_cast<long long>(a[d - 1][d - 1]);
}

// Characteristic polynomial x^d + c[d-1] x^(d-1) + ... + c[0] by
// Faddeev-LeVerrier.
std::vector<double> characteristic_polynomial(const std::vector<std::vector<long long>>& m) {
  const int d = static_cast<int>(m.size());
  std::vector<std::vector<double>> a(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a[i][j] = static_cast<double>(m[i][j]);

  std::vector<std::vector<double>> mk(d, std::vector<double>(d, 0.0));
  for (int i = 0; i < d; ++i) mk[i][i] = 1.0;
  std::vector<double> c(d + 1, 0.0);
  c[d] = 1.0;
  for (int k = 1; k <= d; ++k) {
    std::vector<std::vector<double>> am(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) am[i][j] += a[i][l] * mk[l][j];
    double tr = 0.0;
    for (int i = 0; i < d; ++i) tr += am[i][i];
    const double ck = -tr / k;
    c[d - k] = ck;
    mk = am;
    for (int i = 0; i < d; ++i) mk[i][i] += ck;
  }
  return c;  // c[0..d], c[d] = 1
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& c) {
  const int d = static_cast<int>(c.size()) - 1;
  std::vector<std::complex<double>> roots(d);
  const std::complex<double> seed(0.4, 0.9);
  std::complex<double> p(1.0, 0.0);
  for (int i = 0; i < d; ++i) {
    p *= seed;
    roots[i] = p;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(c[d], 0.0);
    for (int i = d - 1; i >= 0; --i) v = v * x + c[i];
    return v;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double shift = 0.0;
    for (int i = 0; i < d; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (int j = 0; j < d; ++j) {
        if (j != i) denom *= roots[i] - roots[j];
      }
      const std::complex<double> delta = eval(roots[i]) / denom;
      roots[i] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-14) break;
  }
  return roots;
}

// Null vector of (A - lambda I) by Gaussian elimination with partial
// pivoting; lambda is a simple real eigenvalue.
std::vector<double> real_eigenvector(const std::vector<std::vector<long long>>& m, double lambda) {
  const int d = static_cast<int>(m.size());
  std::vector<std::vector<double>> b(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b[i][j] = static_cast<double>(m[i][j]) - (i == j ? lambda : 0.0);

  std::vector<int> pivot_col(d, -1);
  int row = 0;
  for (int col = 0; col < d && row < d; ++col) {
    int best = row;
    for (int r = row + 1; r < d; ++r) {
      if (std::abs(b[r][col]) > std::abs(b[best][col])) best = r;
    }
    if (std::abs(b[best][col]) < 1e-10) continue;
    std::swap(b[row], b[best]);
    for (int r = 0; r < d; ++r) {
      if (r == row) continue;
      const double f = b[r][col] / b[row][col];
      for (int cc = col; cc < d; ++cc) b[r][cc] -= f * b[row][cc];
    }
    pivot_col[row] = col;
    ++row;
  }
  std::vector<bool> is_pivot(d, false);
  for (int r = 0; r < row; ++r) is_pivot[pivot_col[r]] = true;
  int free_col = -1;
  for (int col = d - 1; col >= 0; --col) {
    if (!is_pivot[col]) {
      free_col = col;
      break;
    }
  }
  if (free_col < 0) throw ValidationError("eigenvector solve failed: matrix appears nonsingular");
  std::vector<double> v(d, 0.0);
  v[free_col] = 1.0;
  for (int r = row - 1; r >= 0; --r) {
    const int col = pivot_col[r];
    double s = 0.0;
    for (int cc = col + 1; cc < d; ++cc) s += b[r][cc] * v[cc];
    v[col] = -s / b[r][col];
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      break;
    }
  }
  return v;
}

double frac_unit(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;  // guard against floor rounding at the boundary
  if (f < 0.0) f += 1.0;
  return f;
}

double wrap_half(double x) {
  // representative of x mod 1 in [-0.5, 0.5)
  double f = x - std::round(x);
  if (f < -0.5) f += 1.0;
  if (f >= 0.5) f -= 1.0;
  return f;
}

double halton(unsigned index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

}  // namespace

ToralAutomorphism ToralAutomorphism::from_matrix(std::vector<std::vector<long long>> m) {
  const int d = static_cast<int>(m.size());
  if (d < 1) throw ValidationError("toral matrix must be nonempty");
  for (const auto& row : m) {
    if (static_cast<int>(row.size()) != d) throw ValidationError("toral matrix must be square");
  }
  const long long det = integer_determinant(m);
  if (det != 1 && det != -1) {
    throw ValidationError("toral matrix must have |det| = 1 (torus diffeomorphism), got det = " +
                          std::to_string(det));
  }

  ToralAutomorphism t;
  t.dim = d;
  t.matrix = std::move(m);

  const auto roots = polynomial_roots(characteristic_polynomial(t.matrix));
  EigenSplit split;
  double best_unstable = 0.0;
  for (const auto& r : roots) {
    const double mod = std::abs(r);
    split.moduli.push_back(mod);
    if (mod > 1.0 + kEigenUnitTolerance) {
      ++split.dim_u;
      if (mod > best_unstable) best_unstable = mod;
    } else if (mod < 1.0 - kEigenUnitTolerance) {
      ++split.dim_s;
    } else {
      ++split.dim_c;
    }
  }
  std::sort(split.moduli.rbegin(), split.moduli.rend());
  if (split.dim_s + split.dim_c + split.dim_u != d) {
    throw ValidationError("eigenvalue classification failed");
  }
  if (split.dim_u == 1) {
    split.lambda_u = best_unstable;
    // the modulus-dominant root is real when E^u is one-dimensional; recover
    // its sign for the eigenvector solve
    double signed_lambda = best_unstable;
    for (const auto& r : roots) {
      if (std::abs(std::abs(r) - best_unstable) < 1e-9) {
        signed_lambda = r.real();
        break;
      }
    }
    split.e_u = real_eigenvector(t.matrix, signed_lambda);
  }
  t.splitting = split;
  return t;
}

std::vector<double> ToralAutomorphism::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) throw ValidationError("point dimension mismatch");
  std::vector<double> y(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += static_cast<double>(matrix[i][j]) * x[j];
    y[i] = frac_unit(s);
  }
  return y;
}

std::vector<double> ProductSystem::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) throw ValidationError("point dimension mismatch");
  auto y = factor.apply(x.subspan(0, factor.dim));
  y.push_back(frac_unit(x[factor.dim] + rotation));
  return y;
}

// ---------------------------------------------------------------------------
// DynSystem helpers
// ---------------------------------------------------------------------------
const SymbolicSystem* symbolic(const DynSystem& s) { return std::get_if<SymbolicSystem>(&s); }

const ToralAutomorphism* toral_factor(const DynSystem& s) {
  if (const auto* t = std::get_if<ToralAutomorphism>(&s)) return t;
  if (const auto* p = std::get_if<ProductSystem>(&s)) return &p->factor;
  return nullptr;
}

int space_dim(const DynSystem& s) {
  if (const auto* t = std::get_if<ToralAutomorphism>(&s)) return t->dim;
  if (const auto* p = std::get_if<ProductSystem>(&s)) return p->dim();
  return 0;
}

double entropy_upper_hint(const DynSystem& s) {
  if (const auto* sym = symbolic(s)) return std::log(static_cast<double>(sym->alphabet_size));
  const auto* t = toral_factor(s);
  if (t && t->splitting.dim_u == 1) return std::log(t->splitting.lambda_u);
  return std::log(4.0);
}

DynSystem make_full_shift(int k) { return SymbolicSystem::full_shift(k); }

DynSystem make_golden_mean_sft() { return SymbolicSystem::sft(2, {"11"}); }

DynSystem make_cat_map() { return ToralAutomorphism::from_matrix({{2, 1}, {1, 1}}); }

DynSystem make_cat_rotation_product() {
  ProductSystem p;
  p.factor = ToralAutomorphism::from_matrix({{2, 1}, {1, 1}});
  p.rotation = (std::sqrt(5.0) - 1.0) / 2.0;
  return p;
}

DynSystem make_toral_3d() {
  return ToralAutomorphism::from_matrix({{2, 1, 0}, {1, 1, 0}, {0, 0, 1}});
}

DynSystem system_from_config(const KVConfig& cfg) {
  const std::string kind = cfg.get<std::string>("system.kind");
  const double base = cfg.get_or<double>("system.base", 0.5);
  if (kind == "full_shift") {
    return SymbolicSystem::full_shift(cfg.get_or<int>("system.alphabet", 2), base);
  }
  if (kind == "sft") {
    const int k = cfg.get_or<int>("system.alphabet", 2);
    std::vector<std::string> forbidden;
    if (cfg.has("system.forbidden")) forbidden = cfg.get<std::vector<std::string>>("system.forbidden");
    return SymbolicSystem::sft(k, forbidden, base);
  }
  if (kind == "toral" || kind == "product") {
    const auto rows = cfg.get<std::vector<std::vector<long long>>>("system.matrix");
    auto aut = ToralAutomorphism::from_matrix(rows);
    if (aut.splitting.dim_u != 1) {
      throw ValidationError("unsupported configuration: dim E^u = " +
                            std::to_string(aut.splitting.dim_u) +
                            " (only one-dimensional unstable bundles are supported)");
    }
    if (kind == "toral") return aut;
    ProductSystem p;
    p.factor = std::move(aut);
    p.rotation = cfg.get_or<double>("system.rotation", (std::sqrt(5.0) - 1.0) / 2.0);
    return p;
  }
  throw ValidationError("unknown system.kind: " + kind +
                        " (expected full_shift, sft, toral or product)");
}

// ---------------------------------------------------------------------------
// points and orbits
// ---------------------------------------------------------------------------
Point map_once(const DynSystem& s, const Point& x) {
  if (const auto* sym = symbolic(s)) {
    const auto& w = std::get<Word>(x);
    if (!sym->admissible(w)) throw ValidationError("symbolic point is not admissible");
    if (w.size() < 2) throw ValidationError("symbolic point is too short to shift");
    return Word(w.begin() + 1, w.end());
  }
  const auto& coords = std::get<std::vector<double>>(x);
  if (const auto* t = std::get_if<ToralAutomorphism>(&s)) return t->apply(coords);
  return std::get<ProductSystem>(s).apply(coords);
}

Orbit iterate(const DynSystem& s, const Point& x, int n) {
  Orbit orbit;
  if (n <= 0) return orbit;
  orbit.points.reserve(n);
  if (const auto* sym = symbolic(s)) {
    const auto& w = std::get<Word>(x);
    if (!sym->admissible(w)) throw ValidationError("symbolic point is not admissible");
    if (static_cast<int>(w.size()) < n) {
      throw ValidationError("symbolic point is too short for " + std::to_string(n) + " iterates");
    }
    for (int j = 0; j < n; ++j) orbit.points.emplace_back(Word(w.begin() + j, w.end()));
    return orbit;
  }
  auto coords = std::get<std::vector<double>>(x);
  for (double& c : coords) c = frac_unit(c);
  orbit.points.emplace_back(coords);
  for (int j = 1; j < n; ++j) {
    coords = std::get<std::vector<double>>(map_once(s, Point(coords)));
    orbit.points.emplace_back(coords);
  }
  return orbit;
}

// ---------------------------------------------------------------------------
// leaf segments
// ---------------------------------------------------------------------------
bool LeafSegment::is_symbolic() const { return symbolic(*system) != nullptr; }

double LeafSegment::lambda_u() const {
  const auto* t = toral_factor(*system);
  if (!t) throw ValidationError("symbolic leaves have no linear expansion rate");
  return t->splitting.lambda_u;
}

LeafSegment LeafSegment::toral_leaf(std::shared_ptr<const DynSystem> sys,
                                    std::vector<double> base, double delta) {
  const auto* t = toral_factor(*sys);
  if (!t) throw ValidationError("toral leaf requested on a symbolic system");
  if (t->splitting.dim_u != 1) {
    throw ValidationError("unsupported configuration: leaf charts need dim E^u = 1");
  }
  if (!(delta > 0.0) || delta >= kMaxLeafRadius) {
    throw ValidationError("leaf radius must lie in (0, 0.25): segments must not self-intersect");
  }
  if (static_cast<int>(base.size()) != space_dim(*sys)) {
    throw ValidationError("leaf base point dimension mismatch");
  }
  for (double& c : base) c = frac_unit(c);
  LeafSegment seg;
  seg.system = std::move(sys);
  seg.base_point = std::move(base);
  seg.radius = delta;
  return seg;
}

LeafSegment LeafSegment::symbolic_leaf(std::shared_ptr<const DynSystem> sys, Word cyl) {
  const auto* sym = symbolic(*sys);
  if (!sym) throw ValidationError("symbolic leaf requested on a toral system");
  if (!sym->admissible(cyl)) throw ValidationError("cylinder prefix is not admissible");
  LeafSegment seg;
  seg.system = std::move(sys);
  seg.cylinder = std::move(cyl);
  return seg;
}

std::vector<double> LeafSegment::chart(double t) const {
  const auto* aut = toral_factor(*system);
  if (!aut) throw ValidationError("symbolic leaves have no affine chart");
  const auto& e = aut->splitting.e_u;
  std::vector<double> y = base_point;
  for (std::size_t i = 0; i < e.size(); ++i) y[i] = frac_unit(y[i] + t * e[i]);
  return y;
}

std::optional<double> LeafSegment::chart_inverse(std::span<const double> y) const {
  const auto* aut = toral_factor(*system);
  if (!aut) return std::nullopt;
  if (y.size() != base_point.size()) return std::nullopt;
  const auto& e = aut->splitting.e_u;
  double t = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) t += wrap_half(y[i] - base_point[i]) * e[i];
  // residual off the unstable line (including any center coordinates)
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double expected = i < e.size() ? t * e[i] : 0.0;
    if (std::abs(wrap_half(y[i] - base_point[i]) - expected) > kChartTolerance) return std::nullopt;
  }
  if (std::abs(t) > radius + kChartTolerance) return std::nullopt;
  return t;
}

double u_metric(const LeafSegment& seg, const Point& y, const Point& z) {
  if (seg.is_symbolic()) {
    const auto* sym = symbolic(*seg.system);
    const auto& wy = std::get<Word>(y);
    const auto& wz = std::get<Word>(z);
    const auto& cyl = seg.cylinder;
    for (const Word* w : {&wy, &wz}) {
      if (w->size() < cyl.size() || !std::equal(cyl.begin(), cyl.end(), w->begin())) {
        throw DomainError("point does not lie on the leaf cylinder");
      }
    }
    return sym->word_metric(wy, wz);
  }
  const auto ty = seg.chart_inverse(std::get<std::vector<double>>(y));
  const auto tz = seg.chart_inverse(std::get<std::vector<double>>(z));
  if (!ty || !tz) throw DomainError("point does not lie on the leaf segment");
  return std::abs(*ty - *tz);
}

double bowen_u_distance(const LeafSegment& seg, const Point& y, const Point& z, int n) {
  if (n < 1) throw ValidationError("bowen distance needs n >= 1");
  if (seg.is_symbolic()) {
    const auto* sym = symbolic(*seg.system);
    return sym->bowen_metric(std::get<Word>(y), std::get<Word>(z), n);
  }
  // exact for linear maps: d^u expands by lambda_u each step
  return std::pow(seg.lambda_u(), n - 1) * u_metric(seg, y, z);
}

double u_ball_radius_linear(const DynSystem& s, int n, double eps) {
  const auto* t = toral_factor(s);
  if (!t) throw ValidationError("linear ball radius requested on a symbolic system");
  if (t->splitting.dim_u != 1) {
    throw ValidationError("unsupported configuration: ball radii need dim E^u = 1");
  }
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (n < 1) throw ValidationError("n must be at least 1");
  return eps * std::pow(t->splitting.lambda_u, -(n - 1));
}

std::vector<std::vector<double>> default_base_grid(const DynSystem& s, int count) {
  const int d = space_dim(s);
  std::vector<std::vector<double>> grid;
  if (d == 0) {
    grid.push_back({});  // symbolic: a single leaf carries the whole space
    return grid;
  }
  static const unsigned primes[] = {2, 3, 5, 7, 11, 13};
  grid.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(d);
    for (int j = 0; j < d; ++j) x[j] = halton(static_cast<unsigned>(i + 1), primes[j % 6]);
    grid.push_back(std::move(x));
  }
  return grid;
}

}  // namespace uent
