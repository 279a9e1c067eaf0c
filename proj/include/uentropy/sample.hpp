#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uentropy/systems.hpp"

namespace uent {

// Read-only view of one sample point, for predicates.
struct PointView {
  const Word* word = nullptr;                // symbolic
  const std::vector<double>* coords = nullptr;  // toral (torus coordinates)
  double leaf_param = 0.0;                   // chart parameter on the leaf
};

using Predicate = std::function<bool(const PointView&)>;

struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
  std::size_t count() const { return hi - lo + 1; }
};

// ---------------------------------------------------------------------------
// A finite point sample on one unstable leaf together with its exact Bowen
// u-metric. Points are kept in a canonical order (sorted chart parameters,
// or lexicographic words) so that Bowen balls cover contiguous index ranges.
//
// Coverage comes in two flavors:
//  * point coverage: ball contains the sample point (separated/spanning
//    counts);
//  * patch coverage: the sample stands for a set at declared resolution r,
//    each point owning a patch of radius r/2; a ball certifies coverage only
//    if it swallows the patch. Used by the outer-measure covers, where balls
//    finer than the data would otherwise cover points one by one and drive
//    the cover weight to zero at any exponent.
// ---------------------------------------------------------------------------
class BowenSpace {
 public:
  virtual ~BowenSpace() = default;

  virtual std::size_t size() const = 0;
  virtual double resolution() const = 0;
  virtual PointView point(std::size_t i) const = 0;

  virtual double bowen_dist(std::size_t i, std::size_t j, int n) const = 0;

  // Contiguous index range covered by the depth-n ball centered at point i,
  // or nullopt when the ball covers nothing.
  virtual std::optional<IndexRange> cover_range(std::size_t i, int n, double eps,
                                                bool patch) const = 0;

  // Largest depth at which balls still certify patch coverage (at least of
  // their own patch); no bound for exact samples (resolution 0).
  virtual std::optional<int> max_patch_depth(double eps) const = 0;

  // True when (n, eps) separated counts are no longer trustworthy at this
  // resolution (the separation scale has shrunk into the grid spacing).
  virtual bool resolution_exhausted(int n, double eps) const {
    (void)n;
    (void)eps;
    return false;
  }

  // Class labels when (n, eps)-separation is an equivalence relation
  // (symbolic prefixes); separated count == class count, and one ball per
  // class is a minimal spanning family.
  virtual std::optional<std::vector<std::uint32_t>> ball_classes(int n, double eps) const {
    (void)n;
    (void)eps;
    return std::nullopt;
  }

  virtual std::shared_ptr<BowenSpace> subsample(const std::vector<std::size_t>& keep,
                                                double new_resolution) const = 0;
};

// Symbolic leaf sample: admissible words of one length, lexicographic order.
class SymbolicSample final : public BowenSpace {
 public:
  SymbolicSample(std::shared_ptr<const DynSystem> sys, std::vector<Word> words,
                 double resolution);

  std::size_t size() const override { return words_.size(); }
  double resolution() const override { return resolution_; }
  PointView point(std::size_t i) const override;
  double bowen_dist(std::size_t i, std::size_t j, int n) const override;
  std::optional<IndexRange> cover_range(std::size_t i, int n, double eps,
                                        bool patch) const override;
  std::optional<int> max_patch_depth(double eps) const override;
  std::optional<std::vector<std::uint32_t>> ball_classes(int n, double eps) const override;
  std::shared_ptr<BowenSpace> subsample(const std::vector<std::size_t>& keep,
                                        double new_resolution) const override;

  const std::vector<Word>& words() const { return words_; }
  const SymbolicSystem& system() const;
  std::shared_ptr<const DynSystem> system_ptr() const { return system_; }
  int word_length() const { return word_length_; }

  // Number of leading symbols that must differ for (n, eps)-separation;
  // depth of the cylinder equal to an (n, eps) Bowen ball.
  int separation_prefix(int n, double eps) const;
  int ball_depth(int n, double eps) const;

 private:
  std::shared_ptr<const DynSystem> system_;
  std::vector<Word> words_;  // lex sorted, deduplicated
  double resolution_;
  int word_length_ = 0;
};

// Sample on a 1-D unstable leaf of a linear system: sorted chart parameters.
class ToralLeafSample final : public BowenSpace {
 public:
  ToralLeafSample(std::shared_ptr<const DynSystem> sys, LeafSegment seg,
                  std::vector<double> params, double resolution);

  std::size_t size() const override { return params_.size(); }
  double resolution() const override { return resolution_; }
  PointView point(std::size_t i) const override;
  double bowen_dist(std::size_t i, std::size_t j, int n) const override;
  std::optional<IndexRange> cover_range(std::size_t i, int n, double eps,
                                        bool patch) const override;
  std::optional<int> max_patch_depth(double eps) const override;
  bool resolution_exhausted(int n, double eps) const override;
  std::shared_ptr<BowenSpace> subsample(const std::vector<std::size_t>& keep,
                                        double new_resolution) const override;

  const std::vector<double>& params() const { return params_; }
  const LeafSegment& segment() const { return segment_; }
  double lambda_u() const { return lambda_u_; }
  double ball_radius(int n, double eps) const;  // eps * lambda_u^-(n-1)

 private:
  std::shared_ptr<const DynSystem> system_;
  LeafSegment segment_;
  std::vector<double> params_;  // ascending
  std::vector<std::vector<double>> coords_;  // torus coordinates per point
  double resolution_;
  double lambda_u_;
};

// Finite stand-in for a subset Z (or Z intersected with a leaf).
struct SubsetSample {
  std::shared_ptr<const BowenSpace> space;
  double resolution = 0.0;  // declared, not verified
  std::string label;

  std::size_t size() const { return space ? space->size() : 0; }
};

SubsetSample make_sample(std::shared_ptr<const BowenSpace> space, std::string label);

// Chart-uniform grid of m points on a leaf segment. Toral: m >= 2 points,
// resolution 2*delta/(m-1). Symbolic: all admissible words of length
// ceil(log_k m) extending the leaf cylinder, resolution base^length.
SubsetSample leaf_sample(const LeafSegment& seg, int grid_m);

SubsetSample filter_sample(const SubsetSample& s, const Predicate& pred);

// Exact samples (resolution 0): the points ARE the intended set.
SubsetSample exact_toral_sample(const LeafSegment& seg, const std::vector<double>& params);
SubsetSample exact_symbolic_sample(std::shared_ptr<const DynSystem> sys, std::vector<Word> words);

// Union of two samples over the same kind of space (deduplicated).
SubsetSample merge_samples(const SubsetSample& a, const SubsetSample& b);

}  // namespace uent
