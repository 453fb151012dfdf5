#ifndef SHAPESEL_TRANSFERABILITY_HPP
#define SHAPESEL_TRANSFERABILITY_HPP

#include "shapesel/series.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace shapesel {

/// Source-model class probabilities for each target sample, plus the
/// samples' target labels.
class PredictionMatrix {
public:
  /// Rows must be probability vectors (entries in [0,1], sum within 1e-6 of
  /// one); they are renormalised to sum to exactly one. Labels must be
  /// non-negative. Throws DataError otherwise.
  PredictionMatrix(Tabled probabilities, std::vector<int> target_labels);

  const Tabled& probabilities() const { return probs_; }
  const std::vector<int>& target_labels() const { return labels_; }
  Index samples() const { return probs_.rows(); }
  Index source_classes() const { return probs_.cols(); }
  /// max(label) + 1
  Index target_classes() const { return target_classes_; }

private:
  Tabled probs_;
  std::vector<int> labels_;
  Index target_classes_ = 0;
};

/// CSV with header `label,p0,p1,...` and one row per target sample.
PredictionMatrix read_prediction_csv(std::istream& in);

struct EmpiricalDistribution {
  Tabled joint;        ///< target_classes x source_classes, P(y, c)
  Seriesd marginal;    ///< source_classes, P(c)
  Tabled conditional;  ///< target_classes x source_classes, P(y | c)
  std::vector<std::string> warnings;
};

/// Joint, marginal and conditional label distributions. Source classes that
/// never receive probability mass get a uniform conditional and a warning.
EmpiricalDistribution empirical_conditional(const PredictionMatrix& preds);

struct LeepScore {
  double value = 0.0;
  Tabled joint;
  Tabled conditional;
  std::vector<std::string> warnings;
};

/// Mean over samples of log(sum_c P(y_n | c) f(x_n)_c). The mixture
/// probability is clamped to [1e-300, 1] before the log.
LeepScore leep(const PredictionMatrix& preds);

} // namespace shapesel

#endif
