#include "shapesel/pipeline.hpp"

#include "shapesel/json_io.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <future>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace shapesel {

namespace {

std::string cache_key(const std::string& name, const DiscoveryOptions& o) {
  return name + '\x1f' + std::to_string(o.window) + '\x1f' + std::to_string(o.k) + '\x1f' +
         std::to_string(static_cast<int>(o.profile.metric));
}

struct CandidateResult {
  std::optional<double> distance;
  std::string error;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> workers;
  const unsigned count = std::min<unsigned>(threads, static_cast<unsigned>(n));
  for (unsigned t = 0; t < count; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    }));
  for (auto& w : workers) w.get();
}

} // namespace

std::vector<std::string> SourceRanking::top(std::size_t n) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(n, entries.size()); ++i) out.push_back(entries[i].source);
  return out;
}

std::shared_ptr<const ShapeletSet> ShapeletCache::get(const LabeledDataset& ds,
                                                      const DiscoveryOptions& options) {
  const auto key = cache_key(ds.name(), options);
  {
    std::lock_guard lock(mutex_);
    if (const auto it = sets_.find(key); it != sets_.end()) return it->second;
  }
  auto set = std::make_shared<const ShapeletSet>(discover(ds, options));
  std::lock_guard lock(mutex_);
  return sets_.emplace(key, std::move(set)).first->second;
}

std::size_t ShapeletCache::size() const {
  std::lock_guard lock(mutex_);
  return sets_.size();
}

SourceRanking rank_sources(const LabeledDataset& target, std::span<const LabeledDataset> candidates,
                           const RankOptions& options, ShapeletCache* cache) {
  if (candidates.empty()) throw std::invalid_argument("rank_sources: no candidates");
  std::set<std::string> names;
  for (const auto& c : candidates)
    if (!names.insert(c.name()).second)
      throw std::invalid_argument("rank_sources: duplicate candidate name '" + c.name() + "'");

  ShapeletCache local_cache;
  ShapeletCache& shapelets = cache ? *cache : local_cache;
  const bool shapelet_measure = options.measure != DistanceMeasure::dba_dtw;

  std::shared_ptr<const ShapeletSet> target_set;
  std::vector<DbaPrototype> target_protos;
  if (shapelet_measure)
    target_set = shapelets.get(target, options.discovery);
  else
    target_protos = class_prototypes(target, options.dba);

  std::vector<CandidateResult> results(candidates.size());
  parallel_for(candidates.size(), options.threads, [&](std::size_t i) {
    const auto& cand = candidates[i];
    auto& res = results[i];
    if (cand.name() == target.name()) {
      res.error = "candidate has the same name as the target";
      return;
    }
    try {
      if (shapelet_measure) {
        const auto set = shapelets.get(cand, options.discovery);
        res.distance = options.measure == DistanceMeasure::avg_shapelet
                           ? avg_shapelet_distance(*set, *target_set).value
                           : min_shapelet_distance(*set, *target_set).value;
      } else {
        const auto resampled = resample_dataset(cand, target.length());
        res.distance = prototype_distance(class_prototypes(resampled, options.dba), target_protos);
      }
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });

  SourceRanking ranking;
  ranking.target = target.name();
  ranking.measure = options.measure;
  ranking.window = options.discovery.window;
  ranking.k = options.discovery.k;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (results[i].distance)
      ranking.entries.push_back({candidates[i].name(), *results[i].distance});
    else
      ranking.errors.push_back({candidates[i].name(), results[i].error});
  }
  std::sort(ranking.entries.begin(), ranking.entries.end(), [](const auto& a, const auto& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.source < b.source;
  });
  std::sort(ranking.errors.begin(), ranking.errors.end(),
            [](const auto& a, const auto& b) { return a.source < b.source; });
  return ranking;
}

std::vector<std::size_t> largest_remainder_quota(std::span<const std::size_t> counts, std::size_t total) {
  const std::size_t n = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (n == 0) throw std::invalid_argument("largest_remainder_quota: no samples");
  std::vector<std::size_t> quota(counts.size());
  std::vector<std::size_t> remainder(counts.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    quota[c] = total * counts[c] / n;
    remainder[c] = total * counts[c] % n;
    assigned += quota[c];
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) ++quota[order[i]];
  return quota;
}

SuperDataset build_super_dataset(const LabeledDataset& target, std::span<const LabeledDataset> selected,
                                 std::uint64_t seed, OversampleMode mode) {
  if (selected.empty()) throw DataError("build_super_dataset: no sources selected");
  std::set<std::string> names;
  for (const auto& s : selected)
    if (!names.insert(s.name()).second) throw DataError("build_super_dataset: duplicate source '" + s.name() + "'");

  SuperDatasetManifest manifest;
  manifest.target = target.name();
  manifest.target_length = target.length();
  manifest.seed = seed;
  manifest.mode = mode;

  std::size_t quota = 0;
  for (const auto& s : selected) quota = std::max(quota, s.size());

  std::mt19937_64 rng(seed);
  std::vector<LabeledSeries> merged;
  std::vector<std::string> merged_raw;
  int offset = 0;
  for (const auto& src : selected) {
    const auto resampled = resample_dataset(src, target.length());
    const auto& classes = resampled.classes();
    const auto histogram = resampled.class_histogram();
    const auto per_class = largest_remainder_quota(histogram, quota);

    SuperSource info;
    info.name = src.name();
    info.original_size = src.size();
    info.balanced_size = quota;
    info.class_count = classes.size();
    info.label_offset = offset;
    info.resample = *resampled.resampled();
    info.original_class_sizes = histogram;
    info.balanced_class_sizes = per_class;

    auto local = [&](int label) {
      return static_cast<int>(std::lower_bound(classes.begin(), classes.end(), label) - classes.begin());
    };
    for (const auto& s : resampled.series()) merged.push_back({s.values, offset + local(s.label)});
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
      std::vector<const Seriesd*> members;
      for (const auto& s : resampled.series())
        if (s.label == classes[ci]) members.push_back(&s.values);
      const std::size_t extra = per_class[ci] - histogram[ci];
      for (std::size_t j = 0; j < extra; ++j) {
        const std::size_t pick = mode == OversampleMode::cycle ? j % members.size()
                                                               : static_cast<std::size_t>(rng() % members.size());
        merged.push_back({*members[pick], offset + static_cast<int>(ci)});
      }
      const auto raw = resampled.raw_labels()[static_cast<std::size_t>(classes[ci])];
      info.raw_labels.push_back(raw);
      merged_raw.push_back(src.name() + ":" + raw);
    }
    offset += static_cast<int>(classes.size());
    manifest.sources.push_back(std::move(info));
  }
  manifest.total_classes = offset;
  manifest.total_series = merged.size();
  LabeledDataset merged_ds("super_" + target.name(), std::move(merged), std::move(merged_raw));
  return {std::move(manifest), std::move(merged_ds)};
}

std::pair<std::size_t, int> decode_global_label(const SuperDatasetManifest& manifest, int label) {
  for (std::size_t i = 0; i < manifest.sources.size(); ++i) {
    const auto& s = manifest.sources[i];
    if (label >= s.label_offset && label < s.label_offset + static_cast<int>(s.class_count))
      return {i, label - s.label_offset};
  }
  throw std::out_of_range("label " + std::to_string(label) + " outside the merged label space");
}

void write_super_dataset(const SuperDataset& super, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_ucr_tsv(super.merged, dir / "super.tsv", LabelStyle::internal);
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw DataError("cannot write '" + (dir / "manifest.json").string() + "'");
  out << manifest_to_json(super.manifest).dump(2) << '\n';
}

} // namespace shapesel
