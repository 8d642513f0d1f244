// Dense complex linear-algebra kernel shared by the channel, rate and
// Monte Carlo code. Everything here is templated on the real scalar type so
// the same routines run in float for quick experiments and in double (the
// default aliases) for the simulator proper.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace fdsec {

template <typename T>
using CMatrix = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using CVector = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;
template <typename T>
using RVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;
using RealVector = RVector<double>;
using Index = Eigen::Index;

/// Unitary n x n DFT matrix, F(k, l) = exp(-j 2 pi k l / n) / sqrt(n).
template <typename T = double>
CMatrix<T> dft_matrix(Index n) {
  if (n < 1) throw std::invalid_argument("dft_matrix: size must be >= 1");
  CMatrix<T> f(n, n);
  const T scale = T(1) / std::sqrt(static_cast<T>(n));
  for (Index k = 0; k < n; ++k) {
    for (Index l = 0; l < n; ++l) {
      // Reduce k*l mod n first so the phase stays exact for large indices.
      const Index kl = (k * l) % n;
      const T phase = -T(2) * std::numbers::pi_v<T> * static_cast<T>(kl) / static_cast<T>(n);
      f(k, l) = std::polar(scale, phase);
    }
  }
  return f;
}

template <typename T>
struct NullSpaceResult {
  CMatrix<T> basis;      // orthonormal columns spanning the right null space
  T residual{0};         // ||M * basis||_F / ||M||_F
  T tolerance_used{0};   // bound on residual implied by the singular-value threshold

  Index dimension() const { return basis.cols(); }
};

/// Right null space of `m` from a full SVD. A singular direction is treated
/// as null when sigma <= tol * sigma_max; for wide matrices the trailing
/// cols - rows right singular vectors are always included.
template <typename Derived>
NullSpaceResult<typename Derived::RealScalar> null_space_basis(
    const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol = 1e-10) {
  using T = typename Derived::RealScalar;
  if (m.rows() < 1 || m.cols() < 1) throw std::invalid_argument("null_space_basis: empty matrix");
  if (!(tol > T(0) && tol < T(1))) throw std::invalid_argument("null_space_basis: tol must lie in (0, 1)");

  const CMatrix<T> a = m.template cast<std::complex<T>>();
  NullSpaceResult<T> out;
  const T norm = a.norm();
  if (norm == T(0)) {
    out.basis = CMatrix<T>::Identity(a.cols(), a.cols());
    out.tolerance_used = tol;
    return out;
  }

  Eigen::BDCSVD<CMatrix<T>> svd(a, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const T threshold = tol * sigma(0);
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > threshold) ++rank;

  const Index nullity = a.cols() - rank;
  out.basis = svd.matrixV().rightCols(nullity);
  out.residual = nullity == 0 ? T(0) : (a * out.basis).norm() / norm;
  out.tolerance_used = tol * std::sqrt(static_cast<T>(std::max<Index>(nullity, 1)));
  return out;
}

/// Numerical rank at a relative singular-value threshold.
template <typename Derived>
Index numerical_rank(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol = 1e-10) {
  using T = typename Derived::RealScalar;
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<CMatrix<T>> svd(m.template cast<std::complex<T>>());
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == T(0)) return 0;
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol * sigma(0)) ++rank;
  return rank;
}

/// log2 det of a Hermitian positive definite matrix via Cholesky.
template <typename Derived>
typename Derived::RealScalar log2det_hpd(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::RealScalar;
  Eigen::LLT<CMatrix<T>> llt(m.template cast<std::complex<T>>());
  if (llt.info() != Eigen::Success) throw std::domain_error("log2det_hpd: matrix is not positive definite");
  const auto diag = llt.matrixLLT().diagonal();
  T acc = 0;
  for (Index i = 0; i < diag.size(); ++i) acc += std::log2(diag(i).real());
  return T(2) * acc;
}

/// log2 det(I + m) for Hermitian positive semidefinite m.
template <typename Derived>
typename Derived::RealScalar logdet_identity_plus(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::RealScalar;
  if (m.rows() != m.cols()) throw std::invalid_argument("logdet_identity_plus: matrix must be square");
  if (m.rows() == 0) return T(0);
  const CMatrix<T> a = m.template cast<std::complex<T>>();
  const T scale = std::max<T>(T(1), a.cwiseAbs().maxCoeff());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > T(1e-9) * scale)
    throw std::domain_error("logdet_identity_plus: matrix is not Hermitian");

  Eigen::LDLT<CMatrix<T>> ldlt(a);
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().real().minCoeff() < -T(1e-9) * scale)
    throw std::domain_error("logdet_identity_plus: matrix is indefinite");

  const CMatrix<T> shifted = CMatrix<T>::Identity(a.rows(), a.cols()) + a;
  return std::max(T(0), log2det_hpd(shifted));
}

/// ||offdiag(m)||_F / ||m||_F, zero for the zero matrix.
template <typename Derived>
typename Derived::RealScalar offdiag_ratio(const Eigen::MatrixBase<Derived>& m) {
  using T = typename Derived::RealScalar;
  if (m.rows() != m.cols()) throw std::invalid_argument("offdiag_ratio: matrix must be square");
  const T total = m.norm();
  if (total == T(0)) return T(0);
  // Summed directly; total^2 - diag^2 cancels catastrophically near diagonal.
  T off2 = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != j) off2 += std::norm(m(i, j));
  return std::sqrt(off2) / total;
}

}  // namespace fdsec
