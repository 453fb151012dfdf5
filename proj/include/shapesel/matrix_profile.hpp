#ifndef SHAPESEL_MATRIX_PROFILE_HPP
#define SHAPESEL_MATRIX_PROFILE_HPP

#include "shapesel/dataset_io.hpp"
#include "shapesel/series.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace shapesel {

/// Subsequence distance used by the profile computations.
///  - euclidean: sqrt of the summed squared differences of the raw values
///  - znorm_euclidean: euclidean after z-normalising each subsequence
///  - manhattan: summed absolute differences
enum class Metric { euclidean, znorm_euclidean, manhattan };

/// All series of one class laid end to end. Segments shorter than the window
/// are dropped (their original indices are kept in dropped_segments()), so
/// every remaining segment holds at least one subsequence.
class ConcatenatedClassSeries {
public:
  ConcatenatedClassSeries() = default;

  static ConcatenatedClassSeries from_segments(std::span<const Seriesd> segments, Index window);

  /// Concatenates already-built series (all with the same window), keeping
  /// each part's segment boundaries.
  static ConcatenatedClassSeries join(std::span<const ConcatenatedClassSeries* const> parts);

  const Seriesd& values() const { return values_; }
  const std::vector<Index>& boundaries() const { return boundaries_; }
  Index window() const { return window_; }
  const std::vector<std::size_t>& dropped_segments() const { return dropped_; }
  std::size_t segment_count() const { return boundaries_.size(); }
  Index segment_end(std::size_t segment) const;

  /// Number of start positions, valid or not: len(values) - window + 1 (or 0).
  Index position_count() const;

  /// true for start positions whose window crosses a segment boundary.
  std::vector<bool> invalid_mask() const;

private:
  Seriesd values_;
  std::vector<Index> boundaries_;
  Index window_ = 0;
  std::vector<std::size_t> dropped_;
};

/// Start positions whose window lies inside a single segment, ascending.
std::vector<Index> subsequences(const ConcatenatedClassSeries& series);

struct MatrixProfile {
  static constexpr Index kNoNeighbor = -1;

  /// One entry per start position of the query; masked entries hold +inf.
  Seriesd distances;
  /// Start position of the nearest reference subsequence, kNoNeighbor when
  /// masked or when no admissible neighbour exists.
  std::vector<Index> nn_index;
  Index window = 0;
  /// true where the query position is invalid (boundary-spanning).
  std::vector<bool> mask;

  Index size() const { return distances.size(); }
};

struct ProfileOptions {
  Metric metric = Metric::euclidean;
};

enum class JoinKind { ab, self };

/// Nearest-neighbour profile of every valid query subsequence against the
/// valid reference subsequences. For JoinKind::self the reference must be the
/// query object itself and neighbours closer than one window are excluded.
/// Ties resolve to the smallest reference position.
MatrixProfile ab_join(const ConcatenatedClassSeries& query, const ConcatenatedClassSeries& reference,
                      JoinKind kind = JoinKind::ab, const ProfileOptions& options = {});

MatrixProfile self_join(const ConcatenatedClassSeries& series, const ProfileOptions& options = {});

/// Direct double loop over all subsequence pairs. Same contract as ab_join;
/// kept as the correctness reference for the diagonal-update kernel.
MatrixProfile ab_join_naive(const ConcatenatedClassSeries& query,
                            const ConcatenatedClassSeries& reference, JoinKind kind = JoinKind::ab,
                            const ProfileOptions& options = {});

namespace detail {

template <typename Scalar>
struct MeanStd {
  Scalar mean;
  Scalar stddev;
  bool constant;
};

template <typename Derived>
MeanStd<typename Derived::Scalar> mean_std(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Scalar mean = x.mean();
  const Scalar var = (x.array() - mean).square().mean();
  const Scalar stddev = std::sqrt(var);
  const bool constant = stddev <= Scalar(1e-12) * std::max(Scalar(1), std::abs(mean));
  return {mean, stddev, constant};
}

} // namespace detail

/// Distance between two equal-length subsequences under `metric`.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar subsequence_distance(const Eigen::MatrixBase<DerivedA>& a,
                                               const Eigen::MatrixBase<DerivedB>& b,
                                               Metric metric) {
  using Scalar = typename DerivedA::Scalar;
  const Index w = a.size();
  switch (metric) {
  case Metric::manhattan: {
    Scalar acc = 0;
    for (Index i = 0; i < w; ++i) acc += std::abs(a[i] - b[i]);
    return acc;
  }
  case Metric::znorm_euclidean: {
    const auto sa = detail::mean_std(a);
    const auto sb = detail::mean_std(b);
    Scalar acc = 0;
    for (Index i = 0; i < w; ++i) {
      const Scalar za = sa.constant ? Scalar(0) : (a[i] - sa.mean) / sa.stddev;
      const Scalar zb = sb.constant ? Scalar(0) : (b[i] - sb.mean) / sb.stddev;
      acc += (za - zb) * (za - zb);
    }
    return std::sqrt(acc);
  }
  case Metric::euclidean:
  default: {
    Scalar acc = 0;
    for (Index i = 0; i < w; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
  }
  }
}

using PerClassSeries = std::map<int, ConcatenatedClassSeries>;

/// Concatenates each class's series in dataset order.
PerClassSeries concatenate_classes(const LabeledDataset& ds, Index window);

struct ClassProfiles {
  MatrixProfile own;   ///< self-join of the class
  MatrixProfile other; ///< class against all remaining classes
};

/// One-vs-all profiles for class `label`. Throws DataError with fewer than
/// two classes or when either side has no valid subsequence.
ClassProfiles cross_class_profiles(const PerClassSeries& per_class, int label,
                                   const ProfileOptions& options = {});

} // namespace shapesel

#endif
