// bound.hpp - the eigenvalue-count bound
//
//   N_{A,B} <= n_Mb + n_N + int_0^inf trace[V_-(x) (x I - M Theta_T M^dagger)] dx
//
// plus the diagonal-frame trace bounds at finite energy E < 0 and in the limit E -> 0-.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "boundary.hpp"
#include "error.hpp"
#include "free_resolvent.hpp"
#include "linalg.hpp"
#include "potential.hpp"
#include "quadrature.hpp"

namespace halfline {

struct BoundResult {
  int n_Mb = 0;
  int n_N = 0;
  double integral = 0.0;
  double total = 0.0;
  int integer_bound = 0;
};

inline constexpr double bound_rel_tol = 1e-8;

inline BoundResult bargmann_bound(const BoundaryPair& pair, const MatrixPotential& v,
                                  double eps_class = tolerance::angle_class) {
  if (v.n() != pair.n())
    throw Error(ErrorKind::DimensionMismatch, "potential and boundary pair differ in dimension");
  faddeev_moment(v);  // throws DivergentMoment for non-Faddeev input
  const BoundaryClassification c = classify(pair, eps_class);

  BoundResult r;
  r.n_Mb = c.n_Mb;
  r.n_N = c.n_N;
  if (!v.is_zero()) {
    const CMatrix shift = c.rotated_theta_t();
    const int n = pair.n();
    const auto integrand = [&](double x) {
      const CMatrix minus = split(v, x).minus;
      return (minus * (x * CMatrix::Identity(n, n) - shift)).trace().real();
    };
    const auto pts = v.breakpoints();
    r.integral = std::max(0.0, quad::integrate_pieces(integrand, pts, bound_rel_tol));
  }
  r.total = r.n_Mb + r.n_N + r.integral;
  r.integer_bound = static_cast<int>(std::floor(r.total));
  return r;
}

namespace detail {

inline void check_diagonal_regime(std::span<const double> thetas, const MatrixPotential& v) {
  if (static_cast<int>(thetas.size()) != v.n())
    throw Error(ErrorKind::DimensionMismatch, "one angle per channel required");
  for (double t : thetas) {
    if (!(t > 0.0 && t <= pi)) throw Error(ErrorKind::AngleOutOfRange, "theta outside (0, pi]");
    if (t <= pi / 2.0)
      throw Error(ErrorKind::RegimeViolation,
                  "diagonal trace bound needs every theta in (pi/2, pi]; got " + std::to_string(t));
  }
  for (double x : v.breakpoints()) {
    const CMatrix m = v.evaluate(x);
    const CMatrix off = m - CMatrix(m.diagonal().asDiagonal());
    if (off.norm() > 1e-12 * std::max(1.0, m.norm()))
      throw Error(ErrorKind::RegimeViolation, "potential is not diagonal");
    if (m.diagonal().real().maxCoeff() > 0.0)
      throw Error(ErrorKind::NotNegativePotential, "diagonal trace bound needs V <= 0");
  }
}

}  // namespace detail

/// -int sum_j V_jj(x) R0(E)(x,x)_jj dx for a diagonal V <= 0 and a diagonal pair with no
/// Neumann and no binding mixed channels.
inline double diagonal_trace_bound(std::span<const double> thetas, const MatrixPotential& v, double e) {
  detail::check_diagonal_regime(thetas, v);
  if (!(e < 0.0)) throw Error(ErrorKind::InvalidArgument, "E must be negative");
  if (v.is_zero()) return 0.0;
  const BoundaryClassification c = classify(diagonal_pair(thetas));
  // classify sorts the angles; M R0 M^dagger puts the kernel back in the caller's channel order
  const ResolventKernel kernel(c, cplx(e, 0.0));
  const auto integrand = [&](double x) {
    const CMatrix m = v.evaluate(x);
    const CMatrix r = kernel(x, x);
    return -(m.diagonal().cwiseProduct(r.diagonal())).sum().real();
  };
  return quad::integrate_pieces(integrand, v.breakpoints(), bound_rel_tol);
}

/// The E -> 0- limit: -int sum_j V_jj(x) (x - tan theta_j) dx.
inline double diagonal_trace_limit(std::span<const double> thetas, const MatrixPotential& v) {
  detail::check_diagonal_regime(thetas, v);
  if (v.is_zero()) return 0.0;
  std::vector<double> tans(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) tans[j] = thetas[j] == pi ? 0.0 : std::tan(thetas[j]);
  const auto integrand = [&](double x) {
    const CMatrix m = v.evaluate(x);
    double s = 0.0;
    for (std::size_t j = 0; j < tans.size(); ++j) s -= m(j, j).real() * (x - tans[j]);
    return s;
  };
  return quad::integrate_pieces(integrand, v.breakpoints(), bound_rel_tol);
}

}  // namespace halfline
