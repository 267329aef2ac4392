// free_resolvent.hpp - closed-form objects of the free (V = 0) half-line operator
//
// Per channel in the diagonal frame the regular solution is
//   Dirichlet: -sin(kx)/k,   Neumann: -cos(kx),   mixed: cos(theta) sin(kx)/k - sin(theta) cos(kx)
// and the Jost function is -1, ik, cos(theta) + ik sin(theta) respectively. The kernel of
// (H0 - z)^{-1} is phi(min(x,y)) e^{ik max(x,y)} / J, rotated back with M.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "boundary.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace halfline {

inline constexpr double eps_singular_jost = 1e-14;

/// k = sqrt(z) on the branch Im k >= 0.
inline cplx principal_k(cplx z) {
  cplx k = std::sqrt(z);
  if (k.imag() < 0.0) k = -k;
  return k;
}

inline cplx free_regular_solution(double theta, cplx k, double x) {
  switch (channel_kind(theta)) {
    case ChannelKind::Dirichlet: return -std::sin(k * x) / k;
    case ChannelKind::Neumann: return -std::cos(k * x);
    case ChannelKind::Mixed: break;
  }
  return std::cos(theta) * std::sin(k * x) / k - std::sin(theta) * std::cos(k * x);
}

inline cplx free_regular_derivative(double theta, cplx k, double x) {
  switch (channel_kind(theta)) {
    case ChannelKind::Dirichlet: return -std::cos(k * x);
    case ChannelKind::Neumann: return k * std::sin(k * x);
    case ChannelKind::Mixed: break;
  }
  return std::cos(theta) * std::cos(k * x) + std::sin(theta) * k * std::sin(k * x);
}

inline cplx free_jost_entry(double theta, cplx k) {
  switch (channel_kind(theta)) {
    case ChannelKind::Dirichlet: return -1.0;
    case ChannelKind::Neumann: return I * k;
    case ChannelKind::Mixed: break;
  }
  return std::cos(theta) + I * k * std::sin(theta);
}

/// Diagonal Jost matrix in the frame of M.
inline CMatrix free_jost_matrix(const BoundaryClassification& c, cplx k) {
  CMatrix j = CMatrix::Zero(c.n(), c.n());
  for (int i = 0; i < c.n(); ++i) {
    j(i, i) = free_jost_entry(c.thetas[i], k);
    if (std::abs(j(i, i)) < eps_singular_jost)
      throw Error(ErrorKind::SingularJost, "Jost entry vanishes for theta = " + std::to_string(c.thetas[i]));
  }
  return j;
}

/// J_{0,A,B}(k) = B - ik A for a general pair.
inline CMatrix free_jost_matrix(const BoundaryPair& pair, cplx k) { return pair.B() - I * k * pair.A(); }

/// Kernel of the free resolvent R0(z) for a classified boundary condition.
class ResolventKernel {
 public:
  ResolventKernel(BoundaryClassification classification, cplx z)
      : c_(std::move(classification)), z_(z), k_(principal_k(z)) {
    if (z.imag() == 0.0 && z.real() >= 0.0)
      throw Error(ErrorKind::InvalidArgument, "z must lie off [0, inf)");
    jost_inv_.resize(c_.n());
    const CMatrix j = free_jost_matrix(c_, k_);
    for (int i = 0; i < c_.n(); ++i) jost_inv_(i) = 1.0 / j(i, i);
  }

  const BoundaryClassification& classification() const { return c_; }
  cplx z() const { return z_; }
  cplx k() const { return k_; }

  /// Scalar kernel of channel j in the diagonal frame.
  cplx channel(int j, double x, double y) const {
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    // phi(lo) = alpha e^{ik lo} + beta e^{-ik lo}; multiplying out with e^{ik hi} keeps both
    // exponents in the upper half plane, so nothing overflows for large x.
    const double theta = c_.thetas[j];
    cplx alpha, beta;
    switch (channel_kind(theta)) {
      case ChannelKind::Dirichlet:
        alpha = -1.0 / (2.0 * I * k_);
        beta = -alpha;
        break;
      case ChannelKind::Neumann:
        alpha = beta = -0.5;
        break;
      case ChannelKind::Mixed:
        alpha = std::cos(theta) / (2.0 * I * k_) - 0.5 * std::sin(theta);
        beta = -std::cos(theta) / (2.0 * I * k_) - 0.5 * std::sin(theta);
        break;
    }
    return (alpha * std::exp(I * k_ * (lo + hi)) + beta * std::exp(I * k_ * (hi - lo))) * jost_inv_(j);
  }

  /// Kernel in the diagonal frame, i.e. M^dagger R0(x, y) M.
  CVector diagonal(double x, double y) const {
    CVector d(c_.n());
    for (int j = 0; j < c_.n(); ++j) d(j) = channel(j, x, y);
    return d;
  }

  CMatrix operator()(double x, double y) const {
    if (x < 0.0 || y < 0.0) throw Error(ErrorKind::NegativeCoordinate, "kernel needs x, y >= 0");
    return c_.M * diagonal(x, y).asDiagonal() * c_.M.adjoint();
  }

  /// D(k) = max(1/|k|, 1/|cos theta_j + ik sin theta_j| over mixed channels).
  double bound_scale() const {
    double d = 1.0 / std::abs(k_);
    for (int j = 0; j < c_.n(); ++j)
      if (c_.kinds[j] == ChannelKind::Mixed) d = std::max(d, std::abs(jost_inv_(j)));
    return d;
  }

 private:
  BoundaryClassification c_;
  cplx z_;
  cplx k_;
  CVector jost_inv_;
};

inline CMatrix kernel_eval(const ResolventKernel& kernel, double x, double y) { return kernel(x, y); }

/// Kernel built straight from (A, B), without diagonalizing U: the regular solution with
/// phi(0) = A, phi'(0) = B, and J = B - ikA.
inline CMatrix general_kernel_eval(const BoundaryPair& pair, cplx z, double x, double y) {
  const cplx k = principal_k(z);
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  const CMatrix phi = pair.A() * std::cos(k * lo) + pair.B() * (std::sin(k * lo) / k);
  Eigen::PartialPivLU<CMatrix> lu(free_jost_matrix(pair, k));
  if (!(lu.rcond() > eps_singular_jost)) throw Error(ErrorKind::SingularJost, "B - ikA is singular");
  const CMatrix jinv = lu.inverse();
  return std::exp(I * k * hi) * phi * jinv;
}

/// max over random (x, y) in [0, x_max]^2 of ||R(x,y)|| / (D(k) e^{-Im k |x - y|}).
inline double kernel_bound_check(const ResolventKernel& kernel, int samples, std::uint64_t seed = 1,
                                 double x_max = 10.0) {
  if (kernel.z().imag() != 0.0 || kernel.z().real() >= 0.0)
    throw Error(ErrorKind::InvalidArgument, "kernel_bound_check needs real z < 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, x_max);
  const double d = kernel.bound_scale();
  const double im_k = kernel.k().imag();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = u(rng);
    const double y = u(rng);
    const double ratio = operator_norm(kernel(x, y)) / (d * std::exp(-im_k * std::abs(x - y)));
    worst = std::max(worst, ratio);
  }
  return worst;
}

}  // namespace halfline
