#ifndef SHAPESEL_JSON_IO_HPP
#define SHAPESEL_JSON_IO_HPP

#include "shapesel/dataset_distance.hpp"
#include "shapesel/dataset_io.hpp"
#include "shapesel/matrix_profile.hpp"
#include "shapesel/pipeline.hpp"
#include "shapesel/shapelet.hpp"
#include "shapesel/transferability.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace shapesel {

/// Insertion-ordered so emitted field order is fixed.
using Json = nlohmann::ordered_json;

/// {name, length, classes, raw_label_map, resample: {target_length, sigma} | null}
Json dataset_metadata_to_json(const LabeledDataset& ds);

/// {window, distances[], nn_index[], mask[]}; infinite distances become null.
Json profile_to_json(const MatrixProfile& mp);

/// {dataset, window, classes: [{label, shapelets: [{position, score, values[]}]}]}
Json shapelet_set_to_json(const ShapeletSet& set);
ShapeletSet shapelet_set_from_json(const Json& j);

/// {source, target, measure, value}
Json distance_to_json(const DatasetDistance& d);

/// {target, measure, window, k, entries: [{source, distance}], errors: [{source, reason}]}
Json ranking_to_json(const SourceRanking& r);
SourceRanking ranking_from_json(const Json& j);

/// rank,source,distance
std::string ranking_to_csv(const SourceRanking& r);

/// {value, n_samples, n_source_classes}
Json leep_to_json(const LeepScore& score, const PredictionMatrix& preds);

Json manifest_to_json(const SuperDatasetManifest& m);

/// Structural and consistency checks on a manifest document; returns one
/// message per problem, empty when valid.
std::vector<std::string> validate_manifest(const Json& j);

} // namespace shapesel

#endif
