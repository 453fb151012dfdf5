#ifndef SHAPESEL_PIPELINE_HPP
#define SHAPESEL_PIPELINE_HPP

#include "shapesel/dataset_distance.hpp"
#include "shapesel/dataset_io.hpp"
#include "shapesel/shapelet.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace shapesel {

/// Default number of sources merged into a super dataset.
inline constexpr std::size_t kDefaultSourceCount = 14;

struct RankEntry {
  std::string source;
  double distance = 0.0;
};

struct RankError {
  std::string source;
  std::string reason;
};

struct SourceRanking {
  std::string target;
  DistanceMeasure measure = DistanceMeasure::min_shapelet;
  Index window = 0;
  Index k = 0;
  /// Ascending distance, ties by source name.
  std::vector<RankEntry> entries;
  /// Candidates that could not be scored.
  std::vector<RankError> errors;

  std::vector<std::string> top(std::size_t n) const;
};

struct RankOptions {
  DistanceMeasure measure = DistanceMeasure::min_shapelet;
  DiscoveryOptions discovery;
  DbaOptions dba;
  /// Worker threads for candidate scoring; results do not depend on it.
  unsigned threads = 1;
};

/// Discovered shapelet sets keyed by dataset name and discovery settings.
/// Safe to share between threads.
class ShapeletCache {
public:
  std::shared_ptr<const ShapeletSet> get(const LabeledDataset& ds, const DiscoveryOptions& options);
  std::size_t size() const;

private:
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const ShapeletSet>> sets_;
};

/// Scores every candidate against the target. Candidates that fail (too
/// short for the window, single class, same name as the target, ...) are
/// listed in `errors` and left out of `entries`. Throws if the target itself
/// cannot be processed or candidate names repeat.
SourceRanking rank_sources(const LabeledDataset& target, std::span<const LabeledDataset> candidates,
                           const RankOptions& options = {}, ShapeletCache* cache = nullptr);

enum class OversampleMode { cycle, random };

struct SuperSource {
  std::string name;
  std::size_t original_size = 0;
  std::size_t balanced_size = 0;
  std::size_t class_count = 0;
  int label_offset = 0;
  ResampleSpec resample;
  std::vector<std::string> raw_labels;
  std::vector<std::size_t> original_class_sizes;
  std::vector<std::size_t> balanced_class_sizes;
};

struct SuperDatasetManifest {
  std::string target;
  Index target_length = 0;
  std::vector<SuperSource> sources;
  int total_classes = 0;
  std::size_t total_series = 0;
  std::uint64_t seed = 0;
  OversampleMode mode = OversampleMode::cycle;
};

struct SuperDataset {
  SuperDatasetManifest manifest;
  /// Global labels are label_offset + local class index.
  LabeledDataset merged;
};

/// Splits `total` across classes in proportion to `counts` (largest
/// remainder, ties to the lower index). Exact integer arithmetic.
std::vector<std::size_t> largest_remainder_quota(std::span<const std::size_t> counts, std::size_t total);

/// Resamples every source to the target length, oversamples each to the
/// largest source size keeping class ratios, and concatenates label spaces.
/// In cycle mode extra copies take class members 0,1,2,... in turn; in
/// random mode they are drawn with a generator seeded by `seed`.
SuperDataset build_super_dataset(const LabeledDataset& target, std::span<const LabeledDataset> selected,
                                 std::uint64_t seed = 0, OversampleMode mode = OversampleMode::cycle);

/// (source index, local class index) for a global label. Throws
/// std::out_of_range for labels outside [0, total_classes).
std::pair<std::size_t, int> decode_global_label(const SuperDatasetManifest& manifest, int label);

/// Writes <dir>/manifest.json and <dir>/super.tsv.
void write_super_dataset(const SuperDataset& super, const std::filesystem::path& dir);

} // namespace shapesel

#endif
