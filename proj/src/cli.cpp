#include "shapesel/cli.hpp"

#include "shapesel/dataset_distance.hpp"
#include "shapesel/dataset_io.hpp"
#include "shapesel/json_io.hpp"
#include "shapesel/matrix_profile.hpp"
#include "shapesel/pipeline.hpp"
#include "shapesel/shapelet.hpp"
#include "shapesel/transferability.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace fs = std::filesystem;

namespace shapesel {

namespace {

/// Bad flag values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Recognised but unimplemented features.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  bool whitespace = false;
  Index window = kDefaultShapeletWindow;
  Index k = kDefaultShapeletsPerClass;
  std::string metric = "l2";
};

void add_discovery_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--window", c.window, "Shapelet length")->check(CLI::PositiveNumber);
  cmd->add_option("--top-k", c.k, "Shapelets kept per class")->check(CLI::PositiveNumber);
  cmd->add_option("--metric", c.metric, "Subsequence distance")
      ->check(CLI::IsMember({"l2", "l1", "znorm"}));
}

void add_format_flag(CLI::App* cmd, Common& c) {
  cmd->add_flag("--whitespace", c.whitespace, "Input columns are whitespace separated");
}

Metric metric_of(const std::string& s) {
  if (s == "l1") return Metric::manhattan;
  if (s == "znorm") return Metric::znorm_euclidean;
  return Metric::euclidean;
}

DiscoveryOptions discovery_of(const Common& c) {
  DiscoveryOptions o;
  o.window = c.window;
  o.k = c.k;
  o.profile.metric = metric_of(c.metric);
  return o;
}

DistanceMeasure measure_of(const std::string& name) {
  if (const auto m = parse_measure(name)) return *m;
  if (is_reserved_measure(name))
    throw UnsupportedError("measure '" + name + "' is reserved but not implemented");
  throw UsageError("unknown measure '" + name + "' (expected avg-shapelet, min-shapelet or dba-dtw)");
}

LabeledDataset load(const fs::path& p, const Common& c) {
  LoadOptions o;
  o.whitespace = c.whitespace;
  return load_ucr_tsv(p, o);
}

/// Files listed directly plus every *.tsv inside listed directories, sorted.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".tsv") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + out_path + "'");
  f << text;
}

std::string error_line(std::string_view kind, std::string_view message) {
  return Json{{"error", kind}, {"message", message}}.dump();
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shapelet-based source selection and super-dataset assembly for time series transfer learning",
               "shapesel"};
  app.require_subcommand(1);

  Common common;
  std::string data_path, target_path, source_path, out_path, predictions_path, ranking_path;
  std::string measure_name_str = "min-shapelet", format = "json", join = "self", meta_path;
  std::string oversample = "cycle";
  std::vector<std::string> candidates, sources;
  unsigned threads = 1;
  int class_label = 0;
  Index length = 0;
  std::uint64_t seed = 0;
  std::size_t num_sources = kDefaultSourceCount;

  auto* shapelets = app.add_subcommand("shapelets", "Discover shapelets of one dataset (JSON)");
  shapelets->add_option("--data", data_path, "UCR TSV file")->required();
  shapelets->add_option("--out", out_path, "Output file (default stdout)");
  add_discovery_flags(shapelets, common);
  add_format_flag(shapelets, common);

  auto* distance = app.add_subcommand("distance", "Distance between a source and a target dataset");
  distance->add_option("--source", source_path, "Source TSV or shapelet JSON")->required();
  distance->add_option("--target", target_path, "Target TSV or shapelet JSON")->required();
  distance->add_option("--measure", measure_name_str, "avg-shapelet | min-shapelet | dba-dtw");
  add_discovery_flags(distance, common);
  add_format_flag(distance, common);

  auto* rank = app.add_subcommand("rank", "Rank candidate sources for a target");
  rank->add_option("--target", target_path, "Target TSV")->required();
  rank->add_option("--candidates", candidates, "Candidate TSV files or directories")->required();
  rank->add_option("--measure", measure_name_str, "avg-shapelet | min-shapelet | dba-dtw");
  rank->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  rank->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  rank->add_option("--out", out_path, "Output file (default stdout)");
  add_discovery_flags(rank, common);
  add_format_flag(rank, common);

  auto* build = app.add_subcommand("build-super", "Assemble the balanced multi-source training set");
  build->add_option("--target", target_path, "Target TSV")->required();
  build->add_option("--sources", sources, "Source TSV files in selection order");
  build->add_option("--ranking", ranking_path, "Ranking JSON to select sources from");
  build->add_option("--candidates", candidates, "Files or directories holding the ranked sources");
  build->add_option("--num-sources", num_sources, "Sources taken from the ranking")->check(CLI::PositiveNumber);
  build->add_option("--out", out_path, "Output directory")->required();
  build->add_option("--seed", seed, "Seed for random oversampling");
  build->add_option("--oversample", oversample, "cycle | random")->check(CLI::IsMember({"cycle", "random"}));
  add_format_flag(build, common);

  auto* leep_cmd = app.add_subcommand("leep", "LEEP score from a prediction matrix CSV");
  leep_cmd->add_option("--predictions", predictions_path, "CSV with header label,p0,p1,...")->required();

  auto* mp = app.add_subcommand("mp", "Dump a class's matrix profile (JSON)");
  mp->add_option("--data", data_path, "UCR TSV file")->required();
  mp->add_option("--class", class_label, "Class index (0-based, after label remapping)")->required();
  mp->add_option("--join", join, "self | other")->check(CLI::IsMember({"self", "other"}));
  add_discovery_flags(mp, common);
  add_format_flag(mp, common);

  auto* resample_cmd = app.add_subcommand("resample", "Resample every series of a dataset");
  resample_cmd->add_option("--data", data_path, "UCR TSV file")->required();
  resample_cmd->add_option("--length", length, "Target length")->required()->check(CLI::Range(Index{2}, Index{1} << 40));
  resample_cmd->add_option("--out", out_path, "Output TSV")->required();
  resample_cmd->add_option("--meta", meta_path, "Metadata JSON (default: output path with .json)");
  add_format_flag(resample_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_line("usage", e.what()) << '\n' << app.help();
    return 2;
  }

  try {
    if (shapelets->parsed()) {
      const auto ds = load(data_path, common);
      emit(shapelet_set_to_json(discover(ds, discovery_of(common))).dump(2) + "\n", out_path, out);
    } else if (distance->parsed()) {
      const auto measure = measure_of(measure_name_str);
      const auto options = discovery_of(common);
      const bool json_in = fs::path(source_path).extension() == ".json" ||
                           fs::path(target_path).extension() == ".json";
      DatasetDistance d;
      if (measure == DistanceMeasure::dba_dtw) {
        if (json_in) throw UsageError("dba-dtw needs TSV datasets, not shapelet JSON");
        const auto tgt = load(target_path, common);
        d = dba_dtw_distance(resample_dataset(load(source_path, common), tgt.length()), tgt);
      } else {
        auto set_of = [&](const std::string& path) {
          if (fs::path(path).extension() == ".json") {
            std::ifstream in(path);
            if (!in) throw DataError("cannot open '" + path + "'");
            try {
              return shapelet_set_from_json(Json::parse(in));
            } catch (const Json::parse_error& e) {
              throw DataError("'" + path + "' is not valid JSON: " + e.what());
            }
          }
          return discover(load(path, common), options);
        };
        const auto src = set_of(source_path);
        const auto tgt = set_of(target_path);
        d = measure == DistanceMeasure::avg_shapelet ? avg_shapelet_distance(src, tgt)
                                                     : min_shapelet_distance(src, tgt);
      }
      out << distance_to_json(d).dump(2) << '\n';
    } else if (rank->parsed()) {
      RankOptions options;
      options.measure = measure_of(measure_name_str);
      options.discovery = discovery_of(common);
      options.threads = threads;
      const fs::path tpath(target_path);
      const auto target = load(tpath, common);
      std::vector<LabeledDataset> loaded;
      std::vector<RankError> load_errors;
      for (const auto& p : expand_inputs(candidates)) {
        if (p.stem().string() == target.name()) continue;
        try {
          loaded.push_back(load(p, common));
        } catch (const DataError& e) {
          load_errors.push_back({p.stem().string(), e.what()});
        }
      }
      if (loaded.empty()) throw DataError("no usable candidate datasets");
      auto ranking = rank_sources(target, loaded, options);
      ranking.errors.insert(ranking.errors.end(), load_errors.begin(), load_errors.end());
      std::sort(ranking.errors.begin(), ranking.errors.end(),
                [](const auto& a, const auto& b) { return a.source < b.source; });
      emit(format == "csv" ? ranking_to_csv(ranking) : ranking_to_json(ranking).dump(2) + "\n", out_path, out);
    } else if (build->parsed()) {
      const auto target = load(target_path, common);
      std::vector<fs::path> chosen;
      if (!ranking_path.empty()) {
        if (!sources.empty()) throw UsageError("use either --sources or --ranking, not both");
        std::ifstream in(ranking_path);
        if (!in) throw DataError("cannot open '" + ranking_path + "'");
        SourceRanking ranking;
        try {
          ranking = ranking_from_json(Json::parse(in));
        } catch (const Json::parse_error& e) {
          throw DataError("'" + ranking_path + "' is not valid JSON: " + e.what());
        }
        std::map<std::string, fs::path> by_name;
        for (const auto& p : expand_inputs(candidates)) by_name.emplace(p.stem().string(), p);
        for (const auto& name : ranking.top(num_sources)) {
          const auto it = by_name.find(name);
          if (it == by_name.end()) throw DataError("ranked source '" + name + "' not found among --candidates");
          chosen.push_back(it->second);
        }
      } else {
        if (sources.empty()) throw UsageError("build-super needs --sources or --ranking");
        for (const auto& s : sources) chosen.emplace_back(s);
      }
      std::vector<LabeledDataset> selected;
      for (const auto& p : chosen) selected.push_back(load(p, common));
      const auto super = build_super_dataset(target, selected, seed,
                                             oversample == "random" ? OversampleMode::random : OversampleMode::cycle);
      write_super_dataset(super, out_path);
      out << manifest_to_json(super.manifest).dump(2) << '\n';
    } else if (leep_cmd->parsed()) {
      std::ifstream in(predictions_path);
      if (!in) throw DataError("cannot open '" + predictions_path + "'");
      const auto preds = read_prediction_csv(in);
      const auto score = leep(preds);
      for (const auto& w : score.warnings) err << error_line("warning", w) << '\n';
      out << leep_to_json(score, preds).dump(2) << '\n';
    } else if (mp->parsed()) {
      const auto ds = load(data_path, common);
      const auto per_class = concatenate_classes(ds, common.window);
      ProfileOptions options;
      options.metric = metric_of(common.metric);
      const auto profiles = cross_class_profiles(per_class, class_label, options);
      out << profile_to_json(join == "self" ? profiles.own : profiles.other).dump() << '\n';
    } else if (resample_cmd->parsed()) {
      const auto resampled = resample_dataset(load(data_path, common), length);
      save_ucr_tsv(resampled, out_path);
      const fs::path meta = meta_path.empty() ? fs::path(out_path).replace_extension(".json") : fs::path(meta_path);
      std::ofstream m(meta, std::ios::binary);
      if (!m) throw DataError("cannot write '" + meta.string() + "'");
      m << dataset_metadata_to_json(resampled).dump(2) << '\n';
    }
  } catch (const UsageError& e) {
    err << error_line("usage", e.what()) << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    err << error_line("unsupported", e.what()) << '\n';
    return 1;
  } catch (const DataError& e) {
    err << error_line("data", e.what()) << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << error_line("data", e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << error_line("internal", e.what()) << '\n';
    return 1;
  }
  return 0;
}

} // namespace shapesel
