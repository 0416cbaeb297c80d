#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace diffent {

using cd = std::complex<double>;
using ComplexVector = std::vector<cd>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cd kI{0.0, 1.0};

}  // namespace diffent
