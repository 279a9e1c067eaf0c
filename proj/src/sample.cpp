#include "uentropy/sample.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace uent {

namespace {

// Snap x to the nearest integer when within tol, otherwise take the ceiling.
long long snapped_ceil(double x, double tol = 1e-9) {
  const double r = std::round(x);
  if (std::abs(x - r) <= tol) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(x));
}

}  // namespace

// ---------------------------------------------------------------------------
// SymbolicSample
// ---------------------------------------------------------------------------
SymbolicSample::SymbolicSample(std::shared_ptr<const DynSystem> sys, std::vector<Word> words,
                               double resolution)
    : system_(std::move(sys)), words_(std::move(words)), resolution_(resolution) {
  if (!symbolic(*system_)) throw ValidationError("symbolic sample needs a symbolic system");
  std::sort(words_.begin(), words_.end(), lex_less);
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  if (!words_.empty()) {
    word_length_ = static_cast<int>(words_.front().size());
    for (const auto& w : words_) {
      if (static_cast<int>(w.size()) != word_length_) {
        throw ValidationError("symbolic sample words must have uniform length");
      }
    }
  }
}

const SymbolicSystem& SymbolicSample::system() const { return *symbolic(*system_); }

PointView SymbolicSample::point(std::size_t i) const {
  PointView v;
  v.word = &words_[i];
  return v;
}

double SymbolicSample::bowen_dist(std::size_t i, std::size_t j, int n) const {
  return system().bowen_metric(words_[i], words_[j], n);
}

int SymbolicSample::separation_prefix(int n, double eps) const {
  // (n, eps)-separated iff the first disagreement lands before n-1+t symbols,
  // t = log eps / log base.
  if (eps >= 1.0) return 0;
  const double t = std::log(eps) / std::log(system().metric_base);
  const double cut = n - 1 + t;
  const double r = std::round(cut);
  long long p;
  if (std::abs(cut - r) <= 1e-9) {
    p = static_cast<long long>(r);  // strict inequality: i* < integer cut
  } else {
    p = static_cast<long long>(std::ceil(cut));
  }
  p = std::clamp<long long>(p, 0, word_length_);
  return static_cast<int>(p);
}

int SymbolicSample::ball_depth(int n, double eps) const {
  const double t = std::log(eps) / std::log(system().metric_base);
  const long long q = snapped_ceil(n - 1 + t);
  return static_cast<int>(std::max(0LL, q));
}

std::optional<IndexRange> SymbolicSample::cover_range(std::size_t i, int n, double eps,
                                                      bool patch) const {
  int q = ball_depth(n, eps);
  if (q > word_length_) {
    // deeper than the stored symbols: cannot certify coverage of a cylinder
    if (patch) return std::nullopt;
    q = word_length_;  // the ball still contains its own (deduplicated) word
  }
  const Word& w = words_[i];
  auto prefix_less = [q](const Word& a, const Word& b) {
    const int la = std::min<int>(q, static_cast<int>(a.size()));
    const int lb = std::min<int>(q, static_cast<int>(b.size()));
    return std::lexicographical_compare(a.begin(), a.begin() + la, b.begin(), b.begin() + lb);
  };
  const auto lo = std::lower_bound(words_.begin(), words_.end(), w, prefix_less);
  const auto hi = std::upper_bound(words_.begin(), words_.end(), w, prefix_less);
  IndexRange r;
  r.lo = static_cast<std::size_t>(lo - words_.begin());
  r.hi = static_cast<std::size_t>(hi - words_.begin()) - 1;
  return r;
}

std::optional<int> SymbolicSample::max_patch_depth(double eps) const {
  // ball depth n-1+t must stay within the stored word length
  const double t = std::log(eps) / std::log(system().metric_base);
  const double n_max = word_length_ + 1 - t;
  return static_cast<int>(std::floor(n_max + 1e-9));
}

std::optional<std::vector<std::uint32_t>> SymbolicSample::ball_classes(int n, double eps) const {
  const int p = separation_prefix(n, eps);
  std::vector<std::uint32_t> cls(words_.size(), 0);
  std::uint32_t id = 0;
  for (std::size_t i = 1; i < words_.size(); ++i) {
    if (!std::equal(words_[i].begin(), words_[i].begin() + p, words_[i - 1].begin())) ++id;
    cls[i] = id;
  }
  return cls;
}

std::shared_ptr<BowenSpace> SymbolicSample::subsample(const std::vector<std::size_t>& keep,
                                                      double new_resolution) const {
  std::vector<Word> sub;
  sub.reserve(keep.size());
  for (std::size_t i : keep) sub.push_back(words_[i]);
  return std::make_shared<SymbolicSample>(system_, std::move(sub), new_resolution);
}

// ---------------------------------------------------------------------------
// ToralLeafSample
// ---------------------------------------------------------------------------
ToralLeafSample::ToralLeafSample(std::shared_ptr<const DynSystem> sys, LeafSegment seg,
                                 std::vector<double> params, double resolution)
    : system_(std::move(sys)),
      segment_(std::move(seg)),
      params_(std::move(params)),
      resolution_(resolution) {
  const auto* t = toral_factor(*system_);
  if (!t || t->splitting.dim_u != 1) {
    throw ValidationError("leaf samples need a system with one-dimensional E^u");
  }
  lambda_u_ = t->splitting.lambda_u;
  std::sort(params_.begin(), params_.end());
  coords_.reserve(params_.size());
  for (double p : params_) coords_.push_back(segment_.chart(p));
}

PointView ToralLeafSample::point(std::size_t i) const {
  PointView v;
  v.coords = &coords_[i];
  v.leaf_param = params_[i];
  return v;
}

double ToralLeafSample::bowen_dist(std::size_t i, std::size_t j, int n) const {
  return std::pow(lambda_u_, n - 1) * std::abs(params_[i] - params_[j]);
}

double ToralLeafSample::ball_radius(int n, double eps) const {
  return eps * std::pow(lambda_u_, -(n - 1));
}

std::optional<IndexRange> ToralLeafSample::cover_range(std::size_t i, int n, double eps,
                                                       bool patch) const {
  double reach = ball_radius(n, eps);
  if (patch) reach -= resolution_ / 2.0;
  if (reach < 0.0) return std::nullopt;
  const double c = params_[i];
  const auto lo = std::lower_bound(params_.begin(), params_.end(), c - reach);
  const auto hi = std::upper_bound(params_.begin(), params_.end(), c + reach);
  if (lo == hi) return std::nullopt;
  IndexRange r;
  r.lo = static_cast<std::size_t>(lo - params_.begin());
  r.hi = static_cast<std::size_t>(hi - params_.begin()) - 1;
  return r;
}

bool ToralLeafSample::resolution_exhausted(int n, double eps) const {
  // quantization of the grid starts to bite once the threshold falls under a
  // few grid spacings
  return resolution_ > 0.0 && ball_radius(n, eps) < 10.0 * resolution_;
}

std::optional<int> ToralLeafSample::max_patch_depth(double eps) const {
  if (resolution_ <= 0.0) return std::nullopt;  // exact points: no depth cap
  // need eps * lambda^-(n-1) >= resolution/2
  const double bound = 1.0 + std::log(2.0 * eps / resolution_) / std::log(lambda_u_);
  return static_cast<int>(std::floor(bound + 1e-9));
}

std::shared_ptr<BowenSpace> ToralLeafSample::subsample(const std::vector<std::size_t>& keep,
                                                       double new_resolution) const {
  std::vector<double> sub;
  sub.reserve(keep.size());
  for (std::size_t i : keep) sub.push_back(params_[i]);
  return std::make_shared<ToralLeafSample>(system_, segment_, std::move(sub), new_resolution);
}

// ---------------------------------------------------------------------------
// sample constructors
// ---------------------------------------------------------------------------
SubsetSample make_sample(std::shared_ptr<const BowenSpace> space, std::string label) {
  SubsetSample s;
  s.resolution = space->resolution();
  s.space = std::move(space);
  s.label = std::move(label);
  return s;
}

SubsetSample leaf_sample(const LeafSegment& seg, int grid_m) {
  if (grid_m < 2) throw ValidationError("leaf samples need at least 2 grid points");
  if (seg.is_symbolic()) {
    const auto* sym = symbolic(*seg.system);
    const int extra = static_cast<int>(
        std::ceil(std::log(static_cast<double>(grid_m)) / std::log(double(sym->alphabet_size)) -
                  1e-12));
    const int len = static_cast<int>(seg.cylinder.size()) + std::max(1, extra);
    auto words = sym->enumerate_words(len, seg.cylinder);
    const double res = std::pow(sym->metric_base, len);
    return make_sample(std::make_shared<SymbolicSample>(seg.system, std::move(words), res),
                       "cylinder[" + word_to_string(seg.cylinder) + "]");
  }
  std::vector<double> params(grid_m);
  const double h = 2.0 * seg.radius / (grid_m - 1);
  for (int i = 0; i < grid_m; ++i) params[i] = -seg.radius + h * i;
  return make_sample(
      std::make_shared<ToralLeafSample>(seg.system, seg, std::move(params), h),
      "leaf");
}

SubsetSample filter_sample(const SubsetSample& s, const Predicate& pred) {
  if (!pred) return s;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (pred(s.space->point(i))) keep.push_back(i);
  }
  SubsetSample out;
  out.space = s.space->subsample(keep, s.resolution);
  out.resolution = s.resolution;
  out.label = s.label;
  return out;
}

SubsetSample exact_toral_sample(const LeafSegment& seg, const std::vector<double>& params) {
  return make_sample(std::make_shared<ToralLeafSample>(seg.system, seg, params, 0.0),
                     "exact");
}

SubsetSample exact_symbolic_sample(std::shared_ptr<const DynSystem> sys, std::vector<Word> words) {
  return make_sample(std::make_shared<SymbolicSample>(std::move(sys), std::move(words), 0.0),
                     "exact");
}

SubsetSample merge_samples(const SubsetSample& a, const SubsetSample& b) {
  const double res = std::max(a.resolution, b.resolution);
  if (const auto* sa = dynamic_cast<const SymbolicSample*>(a.space.get())) {
    const auto* sb = dynamic_cast<const SymbolicSample*>(b.space.get());
    if (!sb) throw ValidationError("cannot merge samples of different kinds");
    std::vector<Word> words = sa->words();
    words.insert(words.end(), sb->words().begin(), sb->words().end());
    return make_sample(std::make_shared<SymbolicSample>(sa->system_ptr(), std::move(words), res),
                       a.label + "+" + b.label);
  }
  const auto* ta = dynamic_cast<const ToralLeafSample*>(a.space.get());
  const auto* tb = dynamic_cast<const ToralLeafSample*>(b.space.get());
  if (!ta || !tb) throw ValidationError("cannot merge samples of different kinds");
  std::vector<double> params = ta->params();
  params.insert(params.end(), tb->params().begin(), tb->params().end());
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  return make_sample(std::make_shared<ToralLeafSample>(ta->segment().system, ta->segment(),
                                                       std::move(params), res),
                     a.label + "+" + b.label);
}

}  // namespace uent
