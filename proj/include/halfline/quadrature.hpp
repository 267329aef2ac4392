// quadrature.hpp - adaptive Simpson and Gauss-Legendre rules
#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace halfline::quad {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with absolute tolerance `abs_tol`. The interval is pre-split
/// into `initial` panels so that narrow features are not missed by the first sample.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol, int initial = 16,
                        int max_depth = 40) {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  const double width = (b - a) / initial;
  for (int p = 0; p < initial; ++p) {
    const double lo = a + p * width;
    const double hi = p + 1 == initial ? b : lo + width;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += detail::simpson_step(f, lo, hi, flo, fm, fhi, whole, abs_tol / initial, max_depth);
  }
  return total;
}

/// Integrates piecewise over consecutive breakpoints with a relative tolerance. A coarse
/// pass fixes the scale, then each piece gets its share of the absolute budget.
template <class F>
double integrate_pieces(const F& f, std::span<const double> breakpoints, double rel_tol) {
  if (breakpoints.size() < 2) return 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    for (int s = 1; s <= 9; ++s) scale += std::abs(f(a + (b - a) * s / 10.0)) * (b - a) / 9.0;
  }
  const double abs_tol = std::max(rel_tol * scale, 1e-300);
  const double share = abs_tol / static_cast<double>(breakpoints.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    // stay strictly inside the piece so a jump sitting on a breakpoint is seen from one side
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    const double lo = a + 1e-13 * (b - a);
    const double hi = b - 1e-13 * (b - a);
    total += adaptive_simpson([&](double x) { return f(std::clamp(x, lo, hi)); }, a, b, share);
  }
  return total;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

/// Composite Gauss-Legendre on [a, b] with `panels` panels of `order` points each.
template <class F>
auto composite_gauss(const F& f, double a, double b, int panels, int order = 10) {
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  const double width = (b - a) / panels;
  decltype(f(a)) total = f(a) * 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    for (int i = 0; i < order; ++i) total += f(lo + 0.5 * width * (x[i] + 1.0)) * (0.5 * width * w[i]);
  }
  return total;
}

}  // namespace halfline::quad
