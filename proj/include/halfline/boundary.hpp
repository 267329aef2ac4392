// boundary.hpp - self-adjoint boundary pairs (A, B) at x = 0 and their angle classification
//
// A pair encodes the boundary condition -B^dagger psi(0) + A^dagger psi'(0) = 0. Everything
// downstream depends on the pair only through the unitary U = (B - iA)(B + iA)^{-1}, whose
// eigenvalues e^{2 i theta_j} give angles theta_j in (0, pi]: theta = pi is Dirichlet,
// theta = pi/2 Neumann, anything else mixed (Robin).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "linalg.hpp"

namespace halfline {

namespace tolerance {
/// Self-adjointness and unitarity tolerance, relative to the scale of A^dagger A + B^dagger B.
inline double self_adjoint(int n) { return 1e-10 * n; }
inline double unitary(int n) { return 1e-10 * n; }
inline constexpr double positive_definite = 1e-12;
inline constexpr double angle_class = 1e-9;
}  // namespace tolerance

enum class ChannelKind { Mixed, Neumann, Dirichlet };

/// A validated boundary pair. Only constructible through validate_pair().
class BoundaryPair {
 public:
  int n() const { return static_cast<int>(a_.rows()); }
  const CMatrix& A() const { return a_; }
  const CMatrix& B() const { return b_; }

  friend BoundaryPair validate_pair(const CMatrix& a, const CMatrix& b);

 private:
  BoundaryPair(CMatrix a, CMatrix b) : a_(std::move(a)), b_(std::move(b)) {}
  CMatrix a_;
  CMatrix b_;
};

/// Checks A^dagger B = B^dagger A and A^dagger A + B^dagger B > 0. Both tests are relative to
/// the largest eigenvalue of A^dagger A + B^dagger B so that a gauge (A, B) -> (AT, BT) with a
/// badly scaled T does not change the verdict.
inline BoundaryPair validate_pair(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw Error(ErrorKind::DimensionMismatch,
                "A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", B is " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  const int n = static_cast<int>(a.rows());
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "boundary matrices must be at least 1x1");

  const CMatrix gram = a.adjoint() * a + b.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  const double scale = std::max(top, 1e-300);

  const double sa_defect = (a.adjoint() * b - b.adjoint() * a).norm();
  if (sa_defect > tolerance::self_adjoint(n) * std::max(1.0, scale))
    throw Error(ErrorKind::SelfAdjointnessViolated,
                "||A^dagger B - B^dagger A|| = " + std::to_string(sa_defect));

  const double bottom = es.eigenvalues().minCoeff();
  if (top <= 0.0 || bottom <= tolerance::positive_definite * scale)
    throw Error(ErrorKind::Degenerate,
                "smallest eigenvalue of A^dagger A + B^dagger B is " + std::to_string(bottom));
  return BoundaryPair(a, b);
}

/// U = (B - iA)(B + iA)^{-1}.
inline CMatrix compute_U(const BoundaryPair& pair) {
  const CMatrix plus = pair.B() + I * pair.A();
  const CMatrix minus = pair.B() - I * pair.A();
  // U (B + iA) = (B - iA)  <=>  (B + iA)^T U^T = (B - iA)^T
  Eigen::PartialPivLU<CMatrix> lu(plus.transpose());
  if (!(lu.rcond() > 1e-14))
    throw Error(ErrorKind::NumericalSingularity, "B + iA is numerically singular");
  return lu.solve(minus.transpose()).transpose();
}

struct BoundaryClassification {
  CMatrix U;
  CMatrix M;                   ///< columns: orthonormal eigenvectors of U, in theta order
  std::vector<double> thetas;  ///< ascending, each in (0, pi]
  std::vector<ChannelKind> kinds;
  int n_N = 0;
  int n_D = 0;
  int n_M = 0;
  int n_Mb = 0;  ///< mixed channels with theta in (0, pi/2): these bind already at V = 0
  RVector Theta;   ///< diagonal of Theta: cot theta, or 0 for Neumann and Dirichlet
  RVector ThetaT;  ///< diagonal of Theta_T: tan theta on (pi/2, pi], 0 on (0, pi/2]

  int n() const { return static_cast<int>(thetas.size()); }

  /// M Theta M^dagger: the boundary term of the quadratic form. Independent of the choice of M.
  CMatrix rotated_theta() const { return M * Theta.cast<cplx>().asDiagonal() * M.adjoint(); }

  /// M Theta_T M^dagger. Negative semidefinite.
  CMatrix rotated_theta_t() const { return M * ThetaT.cast<cplx>().asDiagonal() * M.adjoint(); }

  /// Columns of M for channels that are not Dirichlet.
  CMatrix non_dirichlet_basis() const {
    CMatrix basis(n(), n() - n_D);
    int col = 0;
    for (int j = 0; j < n(); ++j)
      if (kinds[j] != ChannelKind::Dirichlet) basis.col(col++) = M.col(j);
    return basis;
  }
};

/// Maps eigenvalue lambda = e^{2 i theta} to theta in (0, pi] and snaps near-Neumann and
/// near-Dirichlet angles. Dirichlet sits at both ends of the circle (theta -> 0+ or theta = pi).
inline double angle_from_eigenvalue(cplx lambda, double eps_class) {
  const double a = std::arg(lambda);
  double theta = a > 0.0 ? a / 2.0 : a / 2.0 + pi;
  if (std::abs(theta - pi / 2.0) < eps_class) theta = pi / 2.0;
  if (std::abs(theta - pi) < eps_class || theta < eps_class) theta = pi;
  return theta;
}

inline ChannelKind channel_kind(double theta) {
  if (theta == pi) return ChannelKind::Dirichlet;
  if (theta == pi / 2.0) return ChannelKind::Neumann;
  return ChannelKind::Mixed;
}

/// Builds the classification from a unitary U directly.
inline BoundaryClassification classify_unitary(const CMatrix& u,
                                               double eps_class = tolerance::angle_class) {
  if (!(eps_class > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps_class must be positive");
  const int n = static_cast<int>(u.rows());
  const double defect = (u.adjoint() * u - CMatrix::Identity(n, n)).norm();
  if (defect > tolerance::unitary(n))
    throw Error(ErrorKind::NumericalSingularity,
                "U is not unitary, residual " + std::to_string(defect));

  // U is normal, so its complex Schur form is diagonal and the Schur vectors are an
  // orthonormal eigenbasis even when eigenvalues repeat.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& q = schur.matrixU();
  const CMatrix& t = schur.matrixT();

  std::vector<double> raw(n);
  for (int j = 0; j < n; ++j) raw[j] = angle_from_eigenvalue(t(j, j), eps_class);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return raw[l] < raw[r]; });

  BoundaryClassification c;
  c.U = u;
  c.M.resize(n, n);
  c.thetas.resize(n);
  c.kinds.resize(n);
  c.Theta = RVector::Zero(n);
  c.ThetaT = RVector::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double theta = raw[order[j]];
    c.M.col(j) = q.col(order[j]);
    c.thetas[j] = theta;
    c.kinds[j] = channel_kind(theta);
    switch (c.kinds[j]) {
      case ChannelKind::Dirichlet: ++c.n_D; break;
      case ChannelKind::Neumann: ++c.n_N; break;
      case ChannelKind::Mixed:
        ++c.n_M;
        if (theta < pi / 2.0) ++c.n_Mb;
        c.Theta(j) = 1.0 / std::tan(theta);
        if (theta > pi / 2.0) c.ThetaT(j) = std::tan(theta);
        break;
    }
  }
  return c;
}

inline BoundaryClassification classify(const BoundaryPair& pair,
                                       double eps_class = tolerance::angle_class) {
  return classify_unitary(compute_U(pair), eps_class);
}

/// The diagonal representative: A = -diag(sin theta_j), B = diag(cos theta_j).
inline BoundaryPair diagonal_pair(std::span<const double> thetas) {
  const int n = static_cast<int>(thetas.size());
  CMatrix a = CMatrix::Zero(n, n);
  CMatrix b = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double theta = thetas[j];
    if (!(theta > 0.0 && theta <= pi))
      throw Error(ErrorKind::AngleOutOfRange, "theta = " + std::to_string(theta) + " not in (0, pi]");
    double s = std::sin(theta);
    double c = std::cos(theta);
    if (theta == pi) s = 0.0, c = -1.0;
    if (theta == pi / 2.0) s = 1.0, c = 0.0;
    a(j, j) = -s;
    b(j, j) = c;
  }
  return validate_pair(a, b);
}

inline BoundaryPair diagonal_pair(std::initializer_list<double> thetas) {
  return diagonal_pair(std::span<const double>(thetas.begin(), thetas.size()));
}

/// Pair whose U is the given unitary: A = (i/2)(U0 - I), B = (I + U0)/2, so that B + iA = I.
inline BoundaryPair pair_from_unitary(const CMatrix& u0) {
  const int n = static_cast<int>(u0.rows());
  const CMatrix id = CMatrix::Identity(n, n);
  return validate_pair(0.5 * I * (u0 - id), 0.5 * (id + u0));
}

inline BoundaryPair random_pair(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  std::mt19937_64 rng(seed);
  return pair_from_unitary(random_unitary(n, rng));
}

}  // namespace halfline
