#include "shapesel/matrix_profile.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace shapesel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rows between full recomputations of the running window sums; bounds the
// drift of the add/subtract updates.
constexpr Index kRefreshRows = 64;

void check_join_inputs(const ConcatenatedClassSeries& query, const ConcatenatedClassSeries& reference,
                       JoinKind kind) {
  if (query.window() != reference.window())
    throw std::invalid_argument("ab_join: window mismatch (" + std::to_string(query.window()) +
                                " vs " + std::to_string(reference.window()) + ")");
  if (kind == JoinKind::self && &query != &reference)
    throw std::invalid_argument("ab_join: self join requires query and reference to be the same object");
  if (subsequences(query).empty()) throw DataError("ab_join: query has no valid subsequences");
  if (subsequences(reference).empty()) throw DataError("ab_join: reference has no valid subsequences");
}

MatrixProfile empty_profile(const ConcatenatedClassSeries& query) {
  MatrixProfile mp;
  mp.window = query.window();
  mp.mask = query.invalid_mask();
  const Index n = query.position_count();
  mp.distances = Seriesd::Constant(n, kInf);
  mp.nn_index.assign(static_cast<std::size_t>(n), MatrixProfile::kNoNeighbor);
  return mp;
}

// Running per-pair quantity along diagonals: summed squared difference,
// summed absolute difference, or dot product (z-normalised mode).
enum class Accumulator { squared_diff, abs_diff, dot };

inline double pair_term(Accumulator acc, double x, double y) {
  switch (acc) {
  case Accumulator::squared_diff: return (x - y) * (x - y);
  case Accumulator::abs_diff: return std::abs(x - y);
  case Accumulator::dot:
  default: return x * y;
  }
}

template <Accumulator Acc>
void fill_direct(const double* a, const double* b, Index w, Index count, double* out) {
  for (Index q = 0; q < count; ++q) {
    double s = 0.0;
    for (Index i = 0; i < w; ++i) s += pair_term(Acc, a[i], b[q + i]);
    out[q] = s;
  }
}

template <Accumulator Acc>
void advance_row(const double* b, double a_out, double a_in, Index w, Index count,
                 const double* prev, double* next) {
  // next[q] = prev[q-1] - term(a_out, b[q-1]) + term(a_in, b[q+w-1]); next[0] is direct.
  for (Index q = 1; q < count; ++q)
    next[q] = prev[q - 1] - pair_term(Acc, a_out, b[q - 1]) + pair_term(Acc, a_in, b[q + w - 1]);
}

struct WindowStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<char> constant;
};

WindowStats window_stats(const Seriesd& values, Index w) {
  const Index n = values.size() - w + 1;
  WindowStats s;
  s.mean.resize(static_cast<std::size_t>(std::max<Index>(n, 0)));
  s.stddev.resize(s.mean.size());
  s.constant.resize(s.mean.size());
  for (Index r = 0; r < n; ++r) {
    const auto ms = detail::mean_std(values.segment(r, w));
    s.mean[r] = ms.mean;
    s.stddev[r] = ms.stddev;
    s.constant[r] = ms.constant ? 1 : 0;
  }
  return s;
}

template <Accumulator Acc>
MatrixProfile diagonal_kernel(const ConcatenatedClassSeries& query,
                              const ConcatenatedClassSeries& reference, JoinKind kind,
                              Metric metric) {
  MatrixProfile mp = empty_profile(query);
  const Index w = query.window();
  const Index rows = query.position_count();
  const Index cols = reference.position_count();
  const double* a = query.values().data();
  const double* b = reference.values().data();

  std::vector<double> ref_penalty(static_cast<std::size_t>(cols), 0.0);
  const auto ref_mask = reference.invalid_mask();
  for (Index q = 0; q < cols; ++q)
    if (ref_mask[q]) ref_penalty[q] = kInf;

  WindowStats qs, rs;
  if constexpr (Acc == Accumulator::dot) {
    qs = window_stats(query.values(), w);
    rs = window_stats(reference.values(), w);
  }
  const double wd = static_cast<double>(w);

  std::vector<double> prev(static_cast<std::size_t>(cols)), next(prev.size());
  for (Index r = 0; r < rows; ++r) {
    if (r % kRefreshRows == 0) {
      fill_direct<Acc>(a + r, b, w, cols, next.data());
    } else {
      advance_row<Acc>(b, a[r - 1], a[r + w - 1], w, cols, prev.data(), next.data());
      fill_direct<Acc>(a + r, b, w, 1, next.data());
    }
    std::swap(prev, next);
    if (mp.mask[r]) continue;

    double best = kInf;
    Index best_q = MatrixProfile::kNoNeighbor;
    auto scan = [&](Index lo, Index hi) {
      for (Index q = lo; q < hi; ++q) {
        double score;
        if constexpr (Acc == Accumulator::dot) {
          if (qs.constant[r] && rs.constant[q]) {
            score = 0.0;
          } else if (qs.constant[r] || rs.constant[q]) {
            score = wd;
          } else {
            const double corr = (prev[q] - wd * qs.mean[r] * rs.mean[q]) /
                                (wd * qs.stddev[r] * rs.stddev[q]);
            score = 2.0 * wd * (1.0 - corr);
          }
          score += ref_penalty[q];
        } else {
          score = prev[q] + ref_penalty[q];
        }
        if (score < best) {
          best = score;
          best_q = q;
        }
      }
    };
    if (kind == JoinKind::self) {
      scan(0, std::max<Index>(0, r - w + 1));
      scan(std::min(cols, r + w), cols);
    } else {
      scan(0, cols);
    }
    if (best_q == MatrixProfile::kNoNeighbor) continue;
    mp.nn_index[r] = best_q;
    mp.distances[r] = subsequence_distance(query.values().segment(r, w),
                                           reference.values().segment(best_q, w), metric);
  }
  return mp;
}

} // namespace

ConcatenatedClassSeries ConcatenatedClassSeries::from_segments(std::span<const Seriesd> segments,
                                                               Index window) {
  if (window < 1) throw std::invalid_argument("window must be positive");
  ConcatenatedClassSeries out;
  out.window_ = window;
  Index total = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].size() < window) {
      out.dropped_.push_back(i);
      continue;
    }
    out.boundaries_.push_back(total);
    total += segments[i].size();
  }
  out.values_.resize(total);
  std::size_t part = 0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].size() < window) continue;
    out.values_.segment(out.boundaries_[part], segments[i].size()) = segments[i];
    ++part;
  }
  return out;
}

ConcatenatedClassSeries ConcatenatedClassSeries::join(
    std::span<const ConcatenatedClassSeries* const> parts) {
  if (parts.empty()) throw std::invalid_argument("join: no parts");
  ConcatenatedClassSeries out;
  out.window_ = parts.front()->window_;
  Index total = 0;
  for (const auto* p : parts) {
    if (p->window_ != out.window_) throw std::invalid_argument("join: window mismatch");
    for (const Index b : p->boundaries_) out.boundaries_.push_back(total + b);
    total += p->values_.size();
  }
  out.values_.resize(total);
  Index offset = 0;
  for (const auto* p : parts) {
    out.values_.segment(offset, p->values_.size()) = p->values_;
    offset += p->values_.size();
  }
  return out;
}

Index ConcatenatedClassSeries::segment_end(std::size_t segment) const {
  return segment + 1 < boundaries_.size() ? boundaries_[segment + 1] : values_.size();
}

Index ConcatenatedClassSeries::position_count() const {
  return std::max<Index>(0, values_.size() - window_ + 1);
}

std::vector<bool> ConcatenatedClassSeries::invalid_mask() const {
  std::vector<bool> mask(static_cast<std::size_t>(position_count()), true);
  for (const Index r : subsequences(*this)) mask[r] = false;
  return mask;
}

std::vector<Index> subsequences(const ConcatenatedClassSeries& series) {
  std::vector<Index> positions;
  for (std::size_t s = 0; s < series.segment_count(); ++s) {
    const Index last = series.segment_end(s) - series.window();
    for (Index r = series.boundaries()[s]; r <= last; ++r) positions.push_back(r);
  }
  return positions;
}

MatrixProfile ab_join(const ConcatenatedClassSeries& query, const ConcatenatedClassSeries& reference,
                      JoinKind kind, const ProfileOptions& options) {
  check_join_inputs(query, reference, kind);
  switch (options.metric) {
  case Metric::manhattan:
    return diagonal_kernel<Accumulator::abs_diff>(query, reference, kind, options.metric);
  case Metric::znorm_euclidean:
    return diagonal_kernel<Accumulator::dot>(query, reference, kind, options.metric);
  case Metric::euclidean:
  default:
    return diagonal_kernel<Accumulator::squared_diff>(query, reference, kind, options.metric);
  }
}

MatrixProfile self_join(const ConcatenatedClassSeries& series, const ProfileOptions& options) {
  return ab_join(series, series, JoinKind::self, options);
}

MatrixProfile ab_join_naive(const ConcatenatedClassSeries& query,
                            const ConcatenatedClassSeries& reference, JoinKind kind,
                            const ProfileOptions& options) {
  check_join_inputs(query, reference, kind);
  MatrixProfile mp = empty_profile(query);
  const Index w = query.window();
  const auto candidates = subsequences(reference);
  for (const Index r : subsequences(query)) {
    const auto a = query.values().segment(r, w);
    for (const Index q : candidates) {
      if (kind == JoinKind::self && std::abs(q - r) < w) continue;
      const double d = subsequence_distance(a, reference.values().segment(q, w), options.metric);
      if (d < mp.distances[r]) {
        mp.distances[r] = d;
        mp.nn_index[r] = q;
      }
    }
  }
  return mp;
}

PerClassSeries concatenate_classes(const LabeledDataset& ds, Index window) {
  PerClassSeries out;
  for (const int c : ds.classes()) {
    const auto members = ds.class_members(c);
    out.emplace(c, ConcatenatedClassSeries::from_segments(members, window));
  }
  return out;
}

ClassProfiles cross_class_profiles(const PerClassSeries& per_class, int label,
                                   const ProfileOptions& options) {
  if (per_class.size() < 2) throw DataError("one-vs-all profiles need at least two classes");
  const auto it = per_class.find(label);
  if (it == per_class.end())
    throw std::invalid_argument("class " + std::to_string(label) + " not present");
  const auto& own_series = it->second;
  if (subsequences(own_series).empty())
    throw DataError("class " + std::to_string(label) + " has no subsequence of length " +
                    std::to_string(own_series.window()));

  std::vector<const ConcatenatedClassSeries*> rest_parts;
  for (const auto& [c, s] : per_class)
    if (c != label) rest_parts.push_back(&s);
  const auto rest = ConcatenatedClassSeries::join(rest_parts);
  if (subsequences(rest).empty())
    throw DataError("classes other than " + std::to_string(label) + " have no valid subsequence");

  return {self_join(own_series, options), ab_join(own_series, rest, JoinKind::ab, options)};
}

} // namespace shapesel
