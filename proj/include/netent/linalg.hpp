#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "netent/bits.hpp"
#include "netent/errors.hpp"
#include "netent/types.hpp"

namespace netent {

// Eigenvalues at or below this are treated as exact zeros by entropy and
// log-determinant evaluation.
inline constexpr double kEigenClip = 1e-12;
// Eigenvalues below -kNegativeEigenTolerance are a PSD violation.
inline constexpr double kNegativeEigenTolerance = 1e-10;
// Maximum |A - A^H| accepted for a Hermitian input.
inline constexpr double kHermitianTolerance = 1e-12;

template <typename Scalar>
struct SymmetricEigen {
  Vec<Scalar> values;   // ascending
  Mat<Scalar> vectors;  // orthonormal columns
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite matrix entry");
  }
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ValidationError(std::string(what) + ": matrix is not square");
  }
}

}  // namespace detail

// (A + A^T)/2, the projection onto symmetric matrices.
template <typename Derived>
Mat<typename Derived::Scalar> symmetrized(const Eigen::MatrixBase<Derived>& a) {
  detail::require_square(a, "symmetrized");
  Mat<typename Derived::Scalar> m = a;
  return (m + m.adjoint()) / typename Derived::Scalar(2);
}

// Eigendecomposition of a real symmetric matrix. The input is symmetrized
// before decomposition.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> eig_sym(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  static_assert(!Eigen::NumTraits<Scalar>::IsComplex, "eig_sym expects a real matrix");
  detail::require_square(a, "eig_sym");
  detail::require_finite(a, "eig_sym");
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(symmetrized(a));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_sym: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// exp(t A) for symmetric A, evaluated as V exp(t Lambda) V^T.
template <typename Derived>
Mat<typename Derived::Scalar> expm_sym(const Eigen::MatrixBase<Derived>& a,
                                       typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  if (t == Scalar(0)) {
    detail::require_square(a, "expm_sym");
    return Mat<Scalar>::Identity(a.rows(), a.cols());
  }
  const auto eig = eig_sym(a);
  const Vec<Scalar> scaled = (t * eig.values.array()).exp().matrix();
  return symmetrized(eig.vectors * scaled.asDiagonal() * eig.vectors.transpose());
}

// Spectrum of a Hermitian matrix, ascending. Rejects inputs whose Hermitian
// defect exceeds kHermitianTolerance (relative to max(1, |A|_max)).
template <typename Derived>
Vec<typename Eigen::NumTraits<typename Derived::Scalar>::Real> eigvals_hermitian(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  detail::require_square(a, "eigvals_hermitian");
  detail::require_finite(a, "eigvals_hermitian");
  const Mat<Scalar> m = a;
  const Real scale = std::max(Real(1), m.cwiseAbs().maxCoeff());
  const Real defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > Real(kHermitianTolerance) * scale) {
    throw ValidationError("eigvals_hermitian: matrix is not Hermitian (defect " +
                          std::to_string(static_cast<double>(defect)) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(symmetrized(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigvals_hermitian: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

// log2 of the product of clipped eigenvalues. Any eigenvalue at or below
// kEigenClip makes the result -infinity.
template <typename Real>
Bits log_det_from_eigenvalues(const Vec<Real>& values) {
  double sum = 0.0;
  bool degenerate = false;
  for (Index i = 0; i < values.size(); ++i) {
    const double v = static_cast<double>(values(i));
    if (v < -kNegativeEigenTolerance) {
      throw NumericalError("log_det_sym: matrix is not positive semidefinite (eigenvalue " +
                           std::to_string(v) + ")");
    }
    if (v <= kEigenClip) {
      degenerate = true;
    } else {
      sum += std::log2(v);
    }
  }
  return degenerate ? Bits::minus_infinity() : Bits(sum);
}

// log2 |A| for a symmetric positive semidefinite A.
template <typename Derived>
Bits log_det_sym(const Eigen::MatrixBase<Derived>& a) {
  return log_det_from_eigenvalues(eig_sym(a).values);
}

// log2 |exp(t A)| = t tr(A) log2(e), evaluated through the spectrum of A so
// that it stays exact when exp(t A) has eigenvalues far below kEigenClip.
template <typename Derived>
double log_det_expm_sym(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar t) {
  const auto eig = eig_sym(a);
  return static_cast<double>(t * eig.values.sum()) * kLog2E;
}

// Non-negative least squares, min |A x - b| subject to x >= 0, by the
// Lawson-Hanson active-set method.
VecX nnls(const MatX& a, const VecX& b);

}  // namespace netent
