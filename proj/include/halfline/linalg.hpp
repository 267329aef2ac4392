// linalg.hpp - dense complex linear algebra helpers shared by all modules
#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace halfline {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

inline double hermitian_defect(const CMatrix& m) { return (m - m.adjoint()).norm(); }

/// Largest singular value.
inline double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

/// Largest |eigenvalue| of a Hermitian matrix; equals the operator norm.
inline double hermitian_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

inline CMatrix random_gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cplx(normal(rng), normal(rng));
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's diagonal removed.
inline CMatrix random_unitary(int n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Random Hermitian matrix with independent Gaussian entries.
inline CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian_matrix(n, n, rng);
  return (g + g.adjoint()) * 0.5;
}

}  // namespace halfline
