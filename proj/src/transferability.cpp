#include "shapesel/transferability.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

namespace shapesel {

namespace {

constexpr double kRowSumTolerance = 1e-6;
constexpr double kLogFloor = 1e-300;

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.pop_back();
    std::size_t b = 0;
    while (b < cell.size() && std::isspace(static_cast<unsigned char>(cell[b]))) ++b;
    out.push_back(cell.substr(b));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* begin = s.data() + (!s.empty() && s.front() == '+' ? 1 : 0);
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("predictions:" + std::to_string(line_no) + ": cannot parse '" + s + "'");
  return v;
}

} // namespace

PredictionMatrix::PredictionMatrix(Tabled probabilities, std::vector<int> target_labels)
    : probs_(std::move(probabilities)), labels_(std::move(target_labels)) {
  if (probs_.rows() == 0 || probs_.cols() == 0) throw DataError("prediction matrix is empty");
  if (static_cast<Index>(labels_.size()) != probs_.rows())
    throw DataError("prediction matrix has " + std::to_string(probs_.rows()) + " rows but " +
                    std::to_string(labels_.size()) + " labels");
  for (Index n = 0; n < probs_.rows(); ++n) {
    const auto row = probs_.row(n);
    if (!row.allFinite() || row.minCoeff() < 0.0 || row.maxCoeff() > 1.0)
      throw DataError("prediction row " + std::to_string(n) + " has entries outside [0,1]");
    const double sum = row.sum();
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw DataError("prediction row " + std::to_string(n) + " sums to " + std::to_string(sum));
    probs_.row(n) /= sum;
  }
  for (const int y : labels_)
    if (y < 0) throw DataError("negative target label");
  target_classes_ = *std::max_element(labels_.begin(), labels_.end()) + 1;
}

PredictionMatrix read_prediction_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split_csv(line);
  }
  if (header.size() < 2 || header.front() != "label")
    throw DataError("predictions: expected header 'label,p0,p1,...'");
  const Index cols = static_cast<Index>(header.size()) - 1;

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv(line);
    if (static_cast<Index>(cells.size()) != cols + 1)
      throw DataError("predictions:" + std::to_string(line_no) + ": expected " +
                      std::to_string(cols + 1) + " columns");
    const double label = parse_cell(cells[0], line_no);
    if (label != std::floor(label) || label < 0)
      throw DataError("predictions:" + std::to_string(line_no) + ": label must be a non-negative integer");
    labels.push_back(static_cast<int>(label));
    std::vector<double> row;
    for (Index c = 0; c < cols; ++c) row.push_back(parse_cell(cells[c + 1], line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("predictions: no data rows");
  Tabled probs(static_cast<Index>(rows.size()), cols);
  for (Index n = 0; n < probs.rows(); ++n)
    for (Index c = 0; c < cols; ++c) probs(n, c) = rows[n][c];
  return PredictionMatrix(std::move(probs), std::move(labels));
}

EmpiricalDistribution empirical_conditional(const PredictionMatrix& preds) {
  const Index N = preds.samples();
  const Index K = preds.target_classes();
  const Index C = preds.source_classes();
  const auto& f = preds.probabilities();

  EmpiricalDistribution out;
  out.joint = Tabled::Zero(K, C);
  for (Index n = 0; n < N; ++n) out.joint.row(preds.target_labels()[n]) += f.row(n);
  out.joint /= static_cast<double>(N);
  out.marginal = f.colwise().sum().transpose() / static_cast<double>(N);

  out.conditional.resize(K, C);
  for (Index c = 0; c < C; ++c) {
    if (out.marginal[c] > 0.0) {
      out.conditional.col(c) = out.joint.col(c) / out.marginal[c];
    } else {
      out.conditional.col(c).setConstant(1.0 / static_cast<double>(K));
      out.warnings.push_back("source class " + std::to_string(c) +
                             " has zero marginal; using a uniform conditional");
    }
  }
  return out;
}

LeepScore leep(const PredictionMatrix& preds) {
  auto dist = empirical_conditional(preds);
  const auto& f = preds.probabilities();
  double total = 0.0;
  for (Index n = 0; n < preds.samples(); ++n) {
    const double mix = dist.conditional.row(preds.target_labels()[n]).dot(f.row(n));
    total += std::log(std::clamp(mix, kLogFloor, 1.0));
  }
  return {total / static_cast<double>(preds.samples()), std::move(dist.joint),
          std::move(dist.conditional), std::move(dist.warnings)};
}

} // namespace shapesel
