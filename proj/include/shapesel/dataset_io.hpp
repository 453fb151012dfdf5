#ifndef SHAPESEL_DATASET_IO_HPP
#define SHAPESEL_DATASET_IO_HPP

#include "shapesel/series.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shapesel {

struct LabeledSeries {
  Seriesd values;
  int label = 0;
};

/// Gaussian smoothing followed by linear interpolation to a new length.
struct ResampleSpec {
  Index target_length = 2;
  double smoothing_sigma = 0.0;
};

/// Smoothing below this width is treated as "no smoothing".
inline constexpr double kSmoothingEpsilon = 1e-6;

/// Immutable collection of equal-length labeled series. Labels are 0-based
/// and contiguous; the textual labels from the source file are kept in
/// raw_labels()[label].
class LabeledDataset {
public:
  LabeledDataset() = default;

  /// Throws std::invalid_argument if the series are empty, of unequal
  /// length, or carry labels outside [0, raw_labels.size()) when raw labels
  /// are supplied. With empty raw_labels the labels' decimal text is used.
  LabeledDataset(std::string name, std::vector<LabeledSeries> series,
                 std::vector<std::string> raw_labels = {},
                 std::optional<ResampleSpec> resampled = std::nullopt);

  const std::string& name() const { return name_; }
  const std::vector<LabeledSeries>& series() const { return series_; }
  Index length() const { return length_; }
  std::size_t size() const { return series_.size(); }
  const std::vector<int>& classes() const { return classes_; }
  const std::vector<std::string>& raw_labels() const { return raw_labels_; }
  const std::optional<ResampleSpec>& resampled() const { return resampled_; }

  /// Number of series per class, indexed like classes().
  std::vector<std::size_t> class_histogram() const;

  /// Series of one class, in dataset order.
  std::vector<Seriesd> class_members(int label) const;

  LabeledDataset renamed(std::string name) const;

  bool operator==(const LabeledDataset&) const;

private:
  std::string name_;
  std::vector<LabeledSeries> series_;
  Index length_ = 0;
  std::vector<int> classes_;
  std::vector<std::string> raw_labels_;
  std::optional<ResampleSpec> resampled_;
};

struct LoadOptions {
  /// Split on any run of whitespace instead of single tabs.
  bool whitespace = false;
  /// Dataset name; defaults to the file stem.
  std::optional<std::string> name;
};

LabeledDataset load_ucr_tsv(const std::filesystem::path& path, const LoadOptions& options = {});
LabeledDataset parse_ucr_tsv(std::istream& in, std::string name, const LoadOptions& options = {});

enum class LabelStyle { raw, internal };

void write_ucr_tsv(const LabeledDataset& ds, std::ostream& out, LabelStyle style = LabelStyle::raw);
void save_ucr_tsv(const LabeledDataset& ds, const std::filesystem::path& path,
                  LabelStyle style = LabelStyle::raw);

/// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

/// Fills NaN/Inf entries: linear interpolation between the nearest finite
/// neighbours, edge values extended outward. Throws DataError if no entry is
/// finite.
Seriesd repair_missing(const Seriesd& values);

/// Linear interpolation at `length` equally spaced positions over [0, n-1].
Seriesd interpolate_linear(const Seriesd& values, Index length);

/// Gaussian convolution with edge replication; kernel truncated at 4 sigma.
Seriesd gaussian_smooth(const Seriesd& values, double sigma);

Seriesd resample(const Seriesd& series, const ResampleSpec& spec);

/// Kernel width used by resample_dataset for a given length change.
double smoothing_sigma_for(Index source_length, Index target_length);

LabeledDataset resample_dataset(const LabeledDataset& ds, Index target_length);

} // namespace shapesel

#endif
