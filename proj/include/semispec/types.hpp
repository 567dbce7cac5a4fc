#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

namespace semispec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

namespace constants {
// Atomic units throughout.
inline constexpr double hbar = 1.0;
}  // namespace constants

}  // namespace semispec
