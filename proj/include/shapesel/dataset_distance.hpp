#ifndef SHAPESEL_DATASET_DISTANCE_HPP
#define SHAPESEL_DATASET_DISTANCE_HPP

#include "shapesel/dataset_io.hpp"
#include "shapesel/shapelet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shapesel {

enum class DistanceMeasure { avg_shapelet, min_shapelet, dba_dtw };

/// Command-line spelling: avg-shapelet, min-shapelet, dba-dtw.
std::string_view measure_name(DistanceMeasure m);
std::optional<DistanceMeasure> parse_measure(std::string_view name);
/// Transferability scores that are recognised by name but not implemented.
bool is_reserved_measure(std::string_view name);

struct DatasetDistance {
  std::string source;
  std::string target;
  DistanceMeasure measure = DistanceMeasure::min_shapelet;
  double value = 0.0;
};

double shapelet_l2(const Shapelet& a, const Shapelet& b);

/// Mean L2 distance over every (source shapelet, target shapelet) pair,
/// classes pooled. The pair distances are summed in sorted order so the
/// result does not depend on argument order.
DatasetDistance avg_shapelet_distance(const ShapeletSet& src, const ShapeletSet& tgt);

/// Smallest L2 distance over every (source shapelet, target shapelet) pair.
DatasetDistance min_shapelet_distance(const ShapeletSet& src, const ShapeletSet& tgt);

struct DtwOptions {
  /// Sakoe-Chiba radius; widened to the length difference when needed.
  std::optional<Index> band;
};

/// Accumulated squared-difference cost of the optimal warping path.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dtw_cost(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b,
                                   const DtwOptions& options = {}) {
  using Scalar = typename DerivedA::Scalar;
  const Index n = a.size();
  const Index m = b.size();
  if (n == 0 || m == 0) throw std::invalid_argument("dtw: empty input");
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  const Index band = options.band ? std::max<Index>(*options.band, std::abs(n - m)) : std::max(n, m);

  Series<Scalar> prev = Series<Scalar>::Constant(m + 1, inf);
  Series<Scalar> cur(m + 1);
  prev[0] = 0;
  for (Index i = 1; i <= n; ++i) {
    cur.setConstant(inf);
    const Index lo = std::max<Index>(1, i - band);
    const Index hi = std::min<Index>(m, i + band);
    for (Index j = lo; j <= hi; ++j) {
      const Scalar d = a[i - 1] - b[j - 1];
      cur[j] = d * d + std::min({prev[j - 1], prev[j], cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

/// DTW distance: square root of dtw_cost, so dtw(a, a) == 0 and the result
/// carries the signal's units.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dtw(const Eigen::MatrixBase<DerivedA>& a,
                              const Eigen::MatrixBase<DerivedB>& b,
                              const DtwOptions& options = {}) {
  return std::sqrt(dtw_cost(a, b, options));
}

/// Optimal warping path as (index in a, index in b) pairs from (0,0) to
/// (n-1,m-1). Backtracking prefers the diagonal step on ties.
std::vector<std::pair<Index, Index>> dtw_path(const Seriesd& a, const Seriesd& b,
                                              double* cost = nullptr);

struct DbaOptions {
  int max_iter = 10;
  double tol = 1e-6;
};

struct DbaPrototype {
  int class_label = 0;
  Seriesd values;
  int iterations_run = 0;
  /// Sum over members of the squared DTW distance to `values`.
  double objective = 0.0;
  /// Objective at the initial barycenter followed by one entry per accepted
  /// iteration; non-increasing.
  std::vector<double> objective_history;
};

/// Member with the smallest summed DTW distance to the others (first on ties).
std::size_t medoid_index(std::span<const Seriesd> members);

/// DTW Barycenter Averaging from `init`. Stops after max_iter updates or
/// once the relative objective improvement falls below tol. An update that
/// would raise the objective is discarded.
DbaPrototype dba(std::span<const Seriesd> members, const Seriesd& init, const DbaOptions& options = {});

/// One medoid-initialised DBA prototype per class, classes ascending.
std::vector<DbaPrototype> class_prototypes(const LabeledDataset& ds, const DbaOptions& options = {});

/// Smallest DTW distance between any source and target class prototype.
/// Both datasets must already have the same length.
DatasetDistance dba_dtw_distance(const LabeledDataset& src, const LabeledDataset& tgt,
                                 const DbaOptions& options = {});

/// Same as above with precomputed prototypes.
double prototype_distance(std::span<const DbaPrototype> src, std::span<const DbaPrototype> tgt);

} // namespace shapesel

#endif
