#include "shapesel/json_io.hpp"

#include <cmath>
#include <sstream>

namespace shapesel {

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json series_to_json(const Seriesd& s) {
  Json arr = Json::array();
  for (Index i = 0; i < s.size(); ++i) arr.push_back(s[i]);
  return arr;
}

std::string_view mode_name(OversampleMode m) { return m == OversampleMode::cycle ? "cycle" : "random"; }

} // namespace

Json dataset_metadata_to_json(const LabeledDataset& ds) {
  Json j;
  j["name"] = ds.name();
  j["length"] = ds.length();
  j["classes"] = ds.classes();
  Json map = Json::object();
  for (const int c : ds.classes()) map[ds.raw_labels()[static_cast<std::size_t>(c)]] = c;
  j["raw_label_map"] = map;
  if (ds.resampled())
    j["resample"] = {{"target_length", ds.resampled()->target_length},
                     {"sigma", ds.resampled()->smoothing_sigma}};
  else
    j["resample"] = nullptr;
  return j;
}

Json profile_to_json(const MatrixProfile& mp) {
  Json j;
  j["window"] = mp.window;
  Json d = Json::array();
  for (Index r = 0; r < mp.size(); ++r) d.push_back(finite_or_null(mp.distances[r]));
  j["distances"] = d;
  j["nn_index"] = mp.nn_index;
  j["mask"] = mp.mask;
  return j;
}

Json shapelet_set_to_json(const ShapeletSet& set) {
  Json j;
  j["dataset"] = set.dataset_name;
  j["window"] = set.window;
  Json classes = Json::array();
  for (const auto& [label, list] : set.per_class) {
    Json shapelets = Json::array();
    for (const auto& s : list)
      shapelets.push_back({{"position", s.position}, {"score", s.score}, {"values", series_to_json(s.values)}});
    classes.push_back({{"label", label}, {"shapelets", shapelets}});
  }
  j["classes"] = classes;
  return j;
}

ShapeletSet shapelet_set_from_json(const Json& j) {
  try {
    ShapeletSet set;
    set.dataset_name = j.at("dataset").get<std::string>();
    set.window = j.at("window").get<Index>();
    for (const auto& cls : j.at("classes")) {
      const int label = cls.at("label").get<int>();
      auto& list = set.per_class[label];
      for (const auto& s : cls.at("shapelets")) {
        const auto values = s.at("values").get<std::vector<double>>();
        if (static_cast<Index>(values.size()) != set.window)
          throw DataError("shapelet length differs from window");
        Shapelet sh;
        sh.values = Eigen::Map<const Seriesd>(values.data(), static_cast<Index>(values.size()));
        sh.class_label = label;
        sh.dataset_name = set.dataset_name;
        sh.position = s.at("position").get<Index>();
        sh.score = s.at("score").get<double>();
        list.push_back(std::move(sh));
      }
    }
    return set;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed shapelet set JSON: ") + e.what());
  }
}

Json distance_to_json(const DatasetDistance& d) {
  return {{"source", d.source}, {"target", d.target}, {"measure", measure_name(d.measure)}, {"value", d.value}};
}

Json ranking_to_json(const SourceRanking& r) {
  Json j;
  j["target"] = r.target;
  j["measure"] = measure_name(r.measure);
  j["window"] = r.window;
  j["k"] = r.k;
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back({{"source", e.source}, {"distance", e.distance}});
  j["entries"] = entries;
  Json errors = Json::array();
  for (const auto& e : r.errors) errors.push_back({{"source", e.source}, {"reason", e.reason}});
  j["errors"] = errors;
  return j;
}

SourceRanking ranking_from_json(const Json& j) {
  try {
    SourceRanking r;
    r.target = j.at("target").get<std::string>();
    const auto measure = parse_measure(j.at("measure").get<std::string>());
    if (!measure) throw DataError("ranking JSON has an unknown measure");
    r.measure = *measure;
    r.window = j.at("window").get<Index>();
    r.k = j.at("k").get<Index>();
    for (const auto& e : j.at("entries"))
      r.entries.push_back({e.at("source").get<std::string>(), e.at("distance").get<double>()});
    if (j.contains("errors"))
      for (const auto& e : j.at("errors"))
        r.errors.push_back({e.at("source").get<std::string>(), e.at("reason").get<std::string>()});
    return r;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed ranking JSON: ") + e.what());
  }
}

std::string ranking_to_csv(const SourceRanking& r) {
  std::ostringstream out;
  out << "rank,source,distance\n";
  for (std::size_t i = 0; i < r.entries.size(); ++i)
    out << i + 1 << ',' << r.entries[i].source << ',' << format_double(r.entries[i].distance) << '\n';
  return out.str();
}

Json leep_to_json(const LeepScore& score, const PredictionMatrix& preds) {
  return {{"value", score.value}, {"n_samples", preds.samples()}, {"n_source_classes", preds.source_classes()}};
}

Json manifest_to_json(const SuperDatasetManifest& m) {
  Json j;
  j["target"] = m.target;
  j["target_length"] = m.target_length;
  Json sources = Json::array();
  Json resample = Json::array();
  for (const auto& s : m.sources) {
    Json e;
    e["name"] = s.name;
    e["original_size"] = s.original_size;
    e["balanced_size"] = s.balanced_size;
    e["class_count"] = s.class_count;
    e["label_offset"] = s.label_offset;
    e["raw_labels"] = s.raw_labels;
    e["original_class_sizes"] = s.original_class_sizes;
    e["balanced_class_sizes"] = s.balanced_class_sizes;
    sources.push_back(e);
    resample.push_back({{"source", s.name},
                        {"target_length", s.resample.target_length},
                        {"sigma", s.resample.smoothing_sigma}});
  }
  j["sources"] = sources;
  j["total_classes"] = m.total_classes;
  j["total_series"] = m.total_series;
  j["resample_params"] = resample;
  j["seed"] = m.seed;
  j["oversampling"] = mode_name(m.mode);
  return j;
}

std::vector<std::string> validate_manifest(const Json& j) {
  std::vector<std::string> problems;
  auto require = [&](const Json& obj, const char* key, auto check, const char* what,
                     const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
      problems.push_back(where + ": missing '" + key + "'");
      return false;
    }
    if (!check(obj.at(key))) {
      problems.push_back(where + ": '" + key + "' must be " + what);
      return false;
    }
    return true;
  };
  const auto is_string = [](const Json& v) { return v.is_string(); };
  const auto is_count = [](const Json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); };
  const auto is_positive = [](const Json& v) { return v.is_number_integer() && v.get<long long>() > 0; };
  const auto is_array = [](const Json& v) { return v.is_array(); };
  const auto is_count_array = [&](const Json& v) {
    if (!v.is_array()) return false;
    for (const auto& x : v)
      if (!is_count(x)) return false;
    return true;
  };

  if (!j.is_object()) return {"manifest is not a JSON object"};
  require(j, "target", is_string, "a string", "manifest");
  const bool has_len = require(j, "target_length", is_positive, "a positive integer", "manifest");
  const bool has_sources = require(j, "sources", is_array, "an array", "manifest");
  const bool has_classes = require(j, "total_classes", is_count, "a non-negative integer", "manifest");
  const bool has_series = require(j, "total_series", is_count, "a non-negative integer", "manifest");
  const bool has_resample = require(j, "resample_params", is_array, "an array", "manifest");
  require(j, "seed", is_count, "a non-negative integer", "manifest");
  if (!has_sources) return problems;
  if (j.at("sources").empty()) problems.push_back("manifest: 'sources' is empty");

  long long expected_offset = 0, total_series = 0;
  std::optional<long long> quota;
  for (std::size_t i = 0; i < j.at("sources").size(); ++i) {
    const auto& s = j.at("sources")[i];
    const std::string where = "sources[" + std::to_string(i) + "]";
    bool ok = require(s, "name", is_string, "a string", where);
    ok &= require(s, "original_size", is_positive, "a positive integer", where);
    ok &= require(s, "balanced_size", is_positive, "a positive integer", where);
    ok &= require(s, "class_count", is_positive, "a positive integer", where);
    ok &= require(s, "label_offset", is_count, "a non-negative integer", where);
    ok &= require(s, "original_class_sizes", is_count_array, "an array of counts", where);
    ok &= require(s, "balanced_class_sizes", is_count_array, "an array of counts", where);
    if (!ok) continue;
    const auto original = s.at("original_size").get<long long>();
    const auto balanced = s.at("balanced_size").get<long long>();
    const auto classes = s.at("class_count").get<long long>();
    if (s.at("label_offset").get<long long>() != expected_offset)
      problems.push_back(where + ": label_offset is not the running class-count sum");
    expected_offset += classes;
    total_series += balanced;
    if (quota && *quota != balanced) problems.push_back(where + ": balanced_size differs from other sources");
    quota = balanced;
    if (balanced < original) problems.push_back(where + ": balanced_size below original_size");
    const auto orig_sizes = s.at("original_class_sizes").get<std::vector<long long>>();
    const auto bal_sizes = s.at("balanced_class_sizes").get<std::vector<long long>>();
    if (static_cast<long long>(orig_sizes.size()) != classes ||
        static_cast<long long>(bal_sizes.size()) != classes) {
      problems.push_back(where + ": class size arrays do not match class_count");
      continue;
    }
    long long orig_sum = 0, bal_sum = 0;
    for (long long c = 0; c < classes; ++c) {
      orig_sum += orig_sizes[c];
      bal_sum += bal_sizes[c];
      // |bal_c - balanced * orig_c / original| < 1, in integers
      if (std::llabs(bal_sizes[c] * original - balanced * orig_sizes[c]) >= original)
        problems.push_back(where + ": class " + std::to_string(c) + " ratio not preserved");
    }
    if (orig_sum != original) problems.push_back(where + ": original_class_sizes do not sum to original_size");
    if (bal_sum != balanced) problems.push_back(where + ": balanced_class_sizes do not sum to balanced_size");
  }
  if (has_classes && j.at("total_classes").get<long long>() != expected_offset)
    problems.push_back("manifest: total_classes is not the sum of class counts");
  if (has_series && j.at("total_series").get<long long>() != total_series)
    problems.push_back("manifest: total_series is not the sum of balanced sizes");
  if (has_resample) {
    const auto& rp = j.at("resample_params");
    if (rp.size() != j.at("sources").size())
      problems.push_back("manifest: resample_params does not have one entry per source");
    for (std::size_t i = 0; i < rp.size(); ++i) {
      const std::string where = "resample_params[" + std::to_string(i) + "]";
      const bool len_ok = require(rp[i], "target_length", is_positive, "a positive integer", where);
      require(rp[i], "sigma", [](const Json& v) { return v.is_number() && v.get<double>() > 0.0; },
              "a positive number", where);
      if (len_ok && has_len && rp[i].at("target_length") != j.at("target_length"))
        problems.push_back(where + ": target_length differs from the manifest's");
    }
  }
  return problems;
}

} // namespace shapesel
