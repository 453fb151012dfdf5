#ifndef SHAPESEL_SHAPELET_HPP
#define SHAPESEL_SHAPELET_HPP

#include "shapesel/dataset_io.hpp"
#include "shapesel/matrix_profile.hpp"

#include <map>
#include <string>
#include <vector>

namespace shapesel {

inline constexpr Index kDefaultShapeletWindow = 15;
inline constexpr Index kDefaultShapeletsPerClass = 10;

struct Shapelet {
  Seriesd values;
  int class_label = 0;
  std::string dataset_name;
  /// Start offset in the concatenated class series.
  Index position = 0;
  /// Difference-profile value at `position`.
  double score = 0.0;
};

struct ShapeletSet {
  std::string dataset_name;
  Index window = 0;
  /// Per class, in descending score order.
  std::map<int, std::vector<Shapelet>> per_class;

  std::size_t total() const;
  /// All shapelets, classes ascending, each class in score order.
  std::vector<const Shapelet*> flattened() const;
};

/// other - own at valid positions, -inf at masked ones (and wherever `own`
/// has no admissible neighbour).
Seriesd difference_profile(const MatrixProfile& other, const MatrixProfile& own);

/// Greedy top-k over a score profile: descending score, ties to the smaller
/// position, skipping positions within window-1 of one already taken.
/// Non-finite scores are never selected.
std::vector<Index> select_top_k(const Seriesd& scores, Index window, Index k);

struct DiscoveryOptions {
  Index window = kDefaultShapeletWindow;
  Index k = kDefaultShapeletsPerClass;
  ProfileOptions profile;
};

/// One-vs-all discriminative subsequences for every class of `ds`.
/// Throws DataError for single-class datasets and for classes that cannot
/// produce a candidate.
ShapeletSet discover(const LabeledDataset& ds, const DiscoveryOptions& options = {});

} // namespace shapesel

#endif
