#include "shapesel/dataset_distance.hpp"

#include <stdexcept>

namespace shapesel {

namespace {

void check_sets(const ShapeletSet& src, const ShapeletSet& tgt) {
  if (src.total() == 0 || tgt.total() == 0) throw std::invalid_argument("empty shapelet set");
  if (src.window != tgt.window)
    throw std::invalid_argument("shapelet sets use different windows (" + std::to_string(src.window) +
                                " vs " + std::to_string(tgt.window) + ")");
}

std::vector<double> pair_distances(const ShapeletSet& src, const ShapeletSet& tgt) {
  check_sets(src, tgt);
  const auto a = src.flattened();
  const auto b = tgt.flattened();
  std::vector<double> d;
  d.reserve(a.size() * b.size());
  for (const auto* x : a)
    for (const auto* y : b) d.push_back(shapelet_l2(*x, *y));
  return d;
}

} // namespace

std::string_view measure_name(DistanceMeasure m) {
  switch (m) {
  case DistanceMeasure::avg_shapelet: return "avg-shapelet";
  case DistanceMeasure::min_shapelet: return "min-shapelet";
  case DistanceMeasure::dba_dtw: return "dba-dtw";
  }
  return "unknown";
}

std::optional<DistanceMeasure> parse_measure(std::string_view name) {
  for (const auto m : {DistanceMeasure::avg_shapelet, DistanceMeasure::min_shapelet,
                       DistanceMeasure::dba_dtw})
    if (measure_name(m) == name) return m;
  return std::nullopt;
}

bool is_reserved_measure(std::string_view name) {
  return name == "leep" || name == "nce" || name == "logme" || name == "transrate" ||
         name == "h-score";
}

double shapelet_l2(const Shapelet& a, const Shapelet& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("shapelet_l2: window mismatch");
  double acc = 0.0;
  for (Index i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

DatasetDistance avg_shapelet_distance(const ShapeletSet& src, const ShapeletSet& tgt) {
  auto d = pair_distances(src, tgt);
  std::sort(d.begin(), d.end());
  double sum = 0.0;
  for (const double x : d) sum += x;
  return {src.dataset_name, tgt.dataset_name, DistanceMeasure::avg_shapelet,
          sum / static_cast<double>(d.size())};
}

DatasetDistance min_shapelet_distance(const ShapeletSet& src, const ShapeletSet& tgt) {
  const auto d = pair_distances(src, tgt);
  return {src.dataset_name, tgt.dataset_name, DistanceMeasure::min_shapelet,
          *std::min_element(d.begin(), d.end())};
}

std::vector<std::pair<Index, Index>> dtw_path(const Seriesd& a, const Seriesd& b, double* cost) {
  const Index n = a.size();
  const Index m = b.size();
  if (n == 0 || m == 0) throw std::invalid_argument("dtw: empty input");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Tabled acc = Tabled::Constant(n + 1, m + 1, inf);
  acc(0, 0) = 0.0;
  for (Index i = 1; i <= n; ++i)
    for (Index j = 1; j <= m; ++j) {
      const double d = a[i - 1] - b[j - 1];
      acc(i, j) = d * d + std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
    }
  if (cost) *cost = acc(n, m);

  std::vector<std::pair<Index, Index>> path;
  Index i = n, j = m;
  while (true) {
    path.emplace_back(i - 1, j - 1);
    if (i == 1 && j == 1) break;
    const double diag = acc(i - 1, j - 1);
    const double up = acc(i - 1, j);
    const double left = acc(i, j - 1);
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t medoid_index(std::span<const Seriesd> members) {
  if (members.empty()) throw std::invalid_argument("medoid_index: no members");
  const std::size_t n = members.size();
  Tabled d = Tabled::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = dtw(members[i], members[j]);
  Index best = 0;
  d.rowwise().sum().minCoeff(&best);
  return static_cast<std::size_t>(best);
}

DbaPrototype dba(std::span<const Seriesd> members, const Seriesd& init, const DbaOptions& options) {
  if (members.empty()) throw std::invalid_argument("dba: no members");
  if (options.max_iter < 1) throw std::invalid_argument("dba: max_iter must be positive");
  for (const auto& m : members)
    if (m.size() != init.size()) throw std::invalid_argument("dba: member length differs from init");

  auto objective_of = [&](const Seriesd& center) {
    double total = 0.0;
    for (const auto& m : members) total += dtw_cost(m, center);
    return total;
  };

  DbaPrototype out;
  out.values = init;
  out.objective = objective_of(init);
  out.objective_history.push_back(out.objective);

  for (int it = 0; it < options.max_iter; ++it) {
    Seriesd sums = Seriesd::Zero(init.size());
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(init.size());
    for (const auto& m : members)
      for (const auto& [mi, ci] : dtw_path(m, out.values)) {
        sums[ci] += m[mi];
        ++counts[ci];
      }
    const Seriesd next = sums.array() / counts.cast<double>().array();
    const double next_objective = objective_of(next);
    if (next_objective > out.objective) break;

    const double previous = out.objective;
    out.values = next;
    out.objective = next_objective;
    out.objective_history.push_back(next_objective);
    ++out.iterations_run;
    if (previous <= 0.0 || (previous - next_objective) / previous < options.tol) break;
  }
  return out;
}

std::vector<DbaPrototype> class_prototypes(const LabeledDataset& ds, const DbaOptions& options) {
  std::vector<DbaPrototype> out;
  for (const int c : ds.classes()) {
    const auto members = ds.class_members(c);
    auto proto = dba(members, members[medoid_index(members)], options);
    proto.class_label = c;
    out.push_back(std::move(proto));
  }
  return out;
}

double prototype_distance(std::span<const DbaPrototype> src, std::span<const DbaPrototype> tgt) {
  if (src.empty() || tgt.empty()) throw std::invalid_argument("prototype_distance: no prototypes");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : src)
    for (const auto& t : tgt) best = std::min(best, dtw(s.values, t.values));
  return best;
}

DatasetDistance dba_dtw_distance(const LabeledDataset& src, const LabeledDataset& tgt,
                                 const DbaOptions& options) {
  if (src.length() != tgt.length())
    throw std::invalid_argument("dba_dtw_distance: length mismatch (" + std::to_string(src.length()) +
                                " vs " + std::to_string(tgt.length()) + "); resample first");
  const auto ps = class_prototypes(src, options);
  const auto pt = class_prototypes(tgt, options);
  return {src.name(), tgt.name(), DistanceMeasure::dba_dtw, prototype_distance(ps, pt)};
}

} // namespace shapesel
