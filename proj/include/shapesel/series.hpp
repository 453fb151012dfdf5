#ifndef SHAPESEL_SERIES_HPP
#define SHAPESEL_SERIES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace shapesel {

using Index = Eigen::Index;

template <typename Scalar>
using Series = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Table = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Seriesd = Series<double>;
using Tabled = Table<double>;

/// Raised for malformed or unusable input data (as opposed to programming
/// errors, which surface as std::invalid_argument).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace shapesel

#endif
