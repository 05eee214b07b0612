#pragma once

#include <complex>

#include <Eigen/Core>

namespace netent {

using Index = Eigen::Index;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;

using MatX = Mat<double>;
using VecX = Vec<double>;
using CMatX = Mat<Complex>;
using CVecX = Vec<Complex>;

// log2(e), converts natural-log quantities to bits.
inline constexpr double kLog2E = 1.4426950408889634074;

}  // namespace netent
