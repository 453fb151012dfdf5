#include "shapesel/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string_view>

namespace shapesel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string_view> split_fields(std::string_view line, bool whitespace) {
  std::vector<std::string_view> fields;
  if (whitespace) {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return v;
}

bool is_missing_token(std::string_view token) {
  token = trim(token);
  return token.empty() || token == "?" || token == "NA";
}

struct RawRow {
  double label;
  std::string label_text;
  Seriesd values;
  std::size_t line_no;
};

} // namespace

LabeledDataset::LabeledDataset(std::string name, std::vector<LabeledSeries> series,
                               std::vector<std::string> raw_labels,
                               std::optional<ResampleSpec> resampled)
    : name_(std::move(name)), series_(std::move(series)), raw_labels_(std::move(raw_labels)),
      resampled_(resampled) {
  if (series_.empty()) throw std::invalid_argument("dataset '" + name_ + "' has no series");
  length_ = series_.front().values.size();
  if (length_ < 1) throw std::invalid_argument("dataset '" + name_ + "' has empty series");
  int max_label = -1;
  for (const auto& s : series_) {
    if (s.values.size() != length_)
      throw std::invalid_argument("dataset '" + name_ + "' has series of unequal length");
    if (s.label < 0) throw std::invalid_argument("dataset '" + name_ + "' has a negative label");
    if (!s.values.allFinite())
      throw std::invalid_argument("dataset '" + name_ + "' contains non-finite values");
    max_label = std::max(max_label, s.label);
    classes_.push_back(s.label);
  }
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  if (raw_labels_.empty()) {
    raw_labels_.resize(static_cast<std::size_t>(max_label) + 1);
    for (int c = 0; c <= max_label; ++c) raw_labels_[c] = std::to_string(c);
  } else if (max_label >= static_cast<int>(raw_labels_.size())) {
    throw std::invalid_argument("dataset '" + name_ + "' has a label without raw label text");
  }
}

std::vector<std::size_t> LabeledDataset::class_histogram() const {
  std::vector<std::size_t> counts(classes_.size(), 0);
  for (const auto& s : series_) {
    const auto it = std::lower_bound(classes_.begin(), classes_.end(), s.label);
    ++counts[static_cast<std::size_t>(it - classes_.begin())];
  }
  return counts;
}

std::vector<Seriesd> LabeledDataset::class_members(int label) const {
  std::vector<Seriesd> out;
  for (const auto& s : series_)
    if (s.label == label) out.push_back(s.values);
  return out;
}

LabeledDataset LabeledDataset::renamed(std::string name) const {
  LabeledDataset copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

bool LabeledDataset::operator==(const LabeledDataset& o) const {
  if (name_ != o.name_ || length_ != o.length_ || classes_ != o.classes_ ||
      raw_labels_ != o.raw_labels_ || series_.size() != o.series_.size())
    return false;
  for (std::size_t i = 0; i < series_.size(); ++i) {
    if (series_[i].label != o.series_[i].label) return false;
    if (series_[i].values != o.series_[i].values) return false;
  }
  return true;
}

Seriesd repair_missing(const Seriesd& values) {
  const Index n = values.size();
  Seriesd out = values;
  Index prev = -1;
  for (Index i = 0; i < n; ++i) {
    if (!std::isfinite(values[i])) continue;
    if (prev < 0) {
      for (Index j = 0; j < i; ++j) out[j] = values[i];
    } else if (i - prev > 1) {
      const double span = static_cast<double>(i - prev);
      for (Index j = prev + 1; j < i; ++j) {
        const double t = static_cast<double>(j - prev) / span;
        out[j] = values[prev] + t * (values[i] - values[prev]);
      }
    }
    prev = i;
  }
  if (prev < 0) throw DataError("series has no finite values");
  for (Index j = prev + 1; j < n; ++j) out[j] = values[prev];
  return out;
}

Seriesd interpolate_linear(const Seriesd& values, Index length) {
  const Index n = values.size();
  if (n < 1 || length < 1) throw std::invalid_argument("interpolate_linear: empty input or output");
  Seriesd out(length);
  if (n == 1 || length == 1) {
    out.setConstant(values[0]);
    return out;
  }
  for (Index i = 0; i < length; ++i) {
    const double pos = (static_cast<double>(i) * static_cast<double>(n - 1)) /
                       static_cast<double>(length - 1);
    const auto lo = static_cast<Index>(std::floor(pos));
    if (lo >= n - 1) {
      out[i] = values[n - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(lo);
    out[i] = frac == 0.0 ? values[lo] : values[lo] + frac * (values[lo + 1] - values[lo]);
  }
  return out;
}

Seriesd gaussian_smooth(const Seriesd& values, double sigma) {
  if (!(sigma > kSmoothingEpsilon)) return values;
  const Index n = values.size();
  const auto radius = static_cast<Index>(std::ceil(4.0 * sigma));
  Seriesd kernel(2 * radius + 1);
  for (Index k = -radius; k <= radius; ++k) {
    const double x = static_cast<double>(k) / sigma;
    kernel[k + radius] = std::exp(-0.5 * x * x);
  }
  kernel /= kernel.sum();
  Seriesd out(n);
  for (Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Index k = -radius; k <= radius; ++k) {
      const Index j = std::clamp<Index>(i + k, 0, n - 1);
      acc += kernel[k + radius] * values[j];
    }
    out[i] = acc;
  }
  return out;
}

Seriesd resample(const Seriesd& series, const ResampleSpec& spec) {
  if (series.size() < 1) throw std::invalid_argument("resample: empty series");
  if (spec.target_length < 2) throw std::invalid_argument("resample: target_length must be >= 2");
  if (!(spec.smoothing_sigma >= 0.0) || !std::isfinite(spec.smoothing_sigma))
    throw std::invalid_argument("resample: invalid smoothing sigma");
  return interpolate_linear(gaussian_smooth(series, spec.smoothing_sigma), spec.target_length);
}

double smoothing_sigma_for(Index source_length, Index target_length) {
  if (source_length > target_length) {
    const double ratio = static_cast<double>(source_length) / static_cast<double>(target_length);
    return std::max(kSmoothingEpsilon, ratio / 2.0);
  }
  return kSmoothingEpsilon;
}

LabeledDataset resample_dataset(const LabeledDataset& ds, Index target_length) {
  const ResampleSpec spec{target_length, smoothing_sigma_for(ds.length(), target_length)};
  std::vector<LabeledSeries> out;
  out.reserve(ds.size());
  for (const auto& s : ds.series()) out.push_back({resample(s.values, spec), s.label});
  return LabeledDataset(ds.name(), std::move(out), ds.raw_labels(), spec);
}

LabeledDataset parse_ucr_tsv(std::istream& in, std::string name, const LoadOptions& options) {
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  Index max_len = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    const auto fields = split_fields(view, options.whitespace);
    const auto label = parse_number(fields.front());
    if (!label || !std::isfinite(*label))
      throw DataError(name + ":" + std::to_string(line_no) + ": unparseable label '" +
                      std::string(trim(fields.front())) + "'");
    const auto count = static_cast<Index>(fields.size()) - 1;
    if (count < 2)
      throw DataError(name + ":" + std::to_string(line_no) + ": fewer than 2 values");
    Seriesd values(count);
    for (Index i = 0; i < count; ++i) {
      const auto token = fields[static_cast<std::size_t>(i) + 1];
      if (is_missing_token(token)) {
        values[i] = kNaN;
        continue;
      }
      const auto v = parse_number(token);
      if (!v)
        throw DataError(name + ":" + std::to_string(line_no) + ": unparseable value '" +
                        std::string(trim(token)) + "'");
      values[i] = std::isfinite(*v) ? *v : kNaN;
    }
    try {
      values = repair_missing(values);
    } catch (const DataError&) {
      throw DataError(name + ":" + std::to_string(line_no) + ": row has no finite values");
    }
    max_len = std::max(max_len, count);
    rows.push_back({*label, std::string(trim(fields.front())), std::move(values), line_no});
  }
  if (rows.empty()) throw DataError(name + ": empty dataset file");

  // Raw labels sorted numerically map onto 0..K-1; the first spelling seen is kept.
  std::map<double, std::string> label_text;
  for (const auto& r : rows) label_text.emplace(r.label, r.label_text);
  std::map<double, int> label_index;
  std::vector<std::string> raw_labels;
  for (const auto& [value, text] : label_text) {
    label_index.emplace(value, static_cast<int>(raw_labels.size()));
    raw_labels.push_back(text);
  }

  std::vector<LabeledSeries> series;
  series.reserve(rows.size());
  for (auto& r : rows) {
    Seriesd values = r.values.size() == max_len ? std::move(r.values)
                                                : interpolate_linear(r.values, max_len);
    series.push_back({std::move(values), label_index.at(r.label)});
  }
  return LabeledDataset(std::move(name), std::move(series), std::move(raw_labels));
}

LabeledDataset load_ucr_tsv(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_ucr_tsv(in, options.name.value_or(path.stem().string()), options);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_ucr_tsv(const LabeledDataset& ds, std::ostream& out, LabelStyle style) {
  for (const auto& s : ds.series()) {
    out << (style == LabelStyle::raw ? ds.raw_labels()[static_cast<std::size_t>(s.label)]
                                     : std::to_string(s.label));
    for (Index i = 0; i < s.values.size(); ++i) out << '\t' << format_double(s.values[i]);
    out << '\n';
  }
}

void save_ucr_tsv(const LabeledDataset& ds, const std::filesystem::path& path, LabelStyle style) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_ucr_tsv(ds, out, style);
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

} // namespace shapesel
