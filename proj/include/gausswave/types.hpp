#pragma once

#include <complex>
#include <Eigen/Dense>

namespace gw {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

} // namespace gw
