#include "shapesel/shapelet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace shapesel {

std::size_t ShapeletSet::total() const {
  std::size_t n = 0;
  for (const auto& [c, list] : per_class) n += list.size();
  return n;
}

std::vector<const Shapelet*> ShapeletSet::flattened() const {
  std::vector<const Shapelet*> out;
  out.reserve(total());
  for (const auto& [c, list] : per_class)
    for (const auto& s : list) out.push_back(&s);
  return out;
}

Seriesd difference_profile(const MatrixProfile& other, const MatrixProfile& own) {
  if (other.window != own.window) throw std::invalid_argument("difference_profile: window mismatch");
  if (other.size() != own.size() || other.mask != own.mask)
    throw std::invalid_argument("difference_profile: profiles cover different query positions");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  Seriesd diff(other.size());
  for (Index r = 0; r < other.size(); ++r) {
    if (other.mask[r] || !std::isfinite(own.distances[r]) || !std::isfinite(other.distances[r]))
      diff[r] = kNegInf;
    else
      diff[r] = other.distances[r] - own.distances[r];
  }
  return diff;
}

std::vector<Index> select_top_k(const Seriesd& scores, Index window, Index k) {
  std::vector<Index> order;
  for (Index r = 0; r < scores.size(); ++r)
    if (std::isfinite(scores[r])) order.push_back(r);
  std::stable_sort(order.begin(), order.end(),
                   [&](Index x, Index y) { return scores[x] > scores[y]; });
  std::vector<Index> chosen;
  for (const Index r : order) {
    if (static_cast<Index>(chosen.size()) >= k) break;
    const bool overlaps = std::any_of(chosen.begin(), chosen.end(),
                                      [&](Index s) { return std::abs(s - r) < window; });
    if (!overlaps) chosen.push_back(r);
  }
  return chosen;
}

ShapeletSet discover(const LabeledDataset& ds, const DiscoveryOptions& options) {
  if (options.window < 1) throw std::invalid_argument("discover: window must be positive");
  if (options.k < 1) throw std::invalid_argument("discover: k must be positive");
  if (ds.classes().size() < 2)
    throw DataError("dataset '" + ds.name() + "' has a single class; shapelets need at least two");
  if (options.window > ds.length())
    throw DataError("dataset '" + ds.name() + "': window " + std::to_string(options.window) +
                    " exceeds series length " + std::to_string(ds.length()));

  const auto per_class = concatenate_classes(ds, options.window);
  ShapeletSet out;
  out.dataset_name = ds.name();
  out.window = options.window;
  for (const auto& [label, series] : per_class) {
    const auto profiles = cross_class_profiles(per_class, label, options.profile);
    const Seriesd diff = difference_profile(profiles.other, profiles.own);
    const auto positions = select_top_k(diff, options.window, options.k);
    if (positions.empty())
      throw DataError("dataset '" + ds.name() + "': class " + std::to_string(label) +
                      " yields no shapelet candidate");
    auto& list = out.per_class[label];
    for (const Index p : positions)
      list.push_back({series.values().segment(p, options.window), label, ds.name(), p, diff[p]});
  }
  return out;
}

} // namespace shapesel
