// fd_oracle.hpp - eigenvalue counting by finite elements on the quadratic form
//
// The form h(psi) = ||psi'||^2 - <M Theta M^dagger psi(0), psi(0)> + (V psi, psi) is
// discretized with piecewise-linear elements on [0, L], Dirichlet at x = L. Dirichlet channels
// at x = 0 are removed from the first nodal block by restricting psi(0) to the span of the
// non-Dirichlet eigenvectors of U. Negative eigenvalues of the pencil (K, Mass) are counted
// from the inertia of K - E Mass.
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "banded.hpp"
#include "boundary.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "potential.hpp"

namespace halfline {

inline constexpr double eps_near_zero_eigenvalue = 1e-8;

struct Discretization {
  double length = 40.0;
  double h = 0.02;

  int intervals() const { return static_cast<int>(std::lround(length / h)); }
};

struct FormMatrices {
  BandedHermitian stiffness;
  BandedHermitian mass;
  Discretization disc;
  int origin_dim = 0;  ///< unknowns kept at x = 0
};

inline FormMatrices assemble_form_matrix(const BoundaryPair& pair, const MatrixPotential& v,
                                         const Discretization& disc,
                                         double eps_class = tolerance::angle_class) {
  if (v.n() != pair.n())
    throw Error(ErrorKind::DimensionMismatch, "potential and boundary pair differ in dimension");
  if (!(disc.h > 0.0) || disc.intervals() < 100 || disc.length < 10.0)
    throw Error(ErrorKind::MeshTooCoarse, "need h > 0, L >= 10 and at least 100 intervals; got L = " +
                                              std::to_string(disc.length) + ", h = " + std::to_string(disc.h));
  const BoundaryClassification c = classify(pair, eps_class);
  const int n = pair.n();
  const int m = disc.intervals();
  const double h = disc.length / m;
  const CMatrix basis = c.non_dirichlet_basis();  // psi(0) = basis * coefficients
  const int n0 = static_cast<int>(basis.cols());

  // unknowns: n0 at node 0, n at nodes 1..m-1; node m carries the Dirichlet condition
  const int size = n0 + (m - 1) * n;
  const auto offset = [&](int node) { return node == 0 ? 0 : n0 + (node - 1) * n; };
  const int bw = 2 * n - 1;
  FormMatrices f{BandedHermitian(size, bw), BandedHermitian(size, bw), disc, n0};

  const auto add_block = [&](BandedHermitian& target, int row_node, int col_node, const CMatrix& blk) {
    for (int i = 0; i < blk.rows(); ++i)
      for (int j = 0; j < blk.cols(); ++j)
        if (blk(i, j) != cplx(0.0) && offset(row_node) + i >= offset(col_node) + j)
          target.add(offset(row_node) + i, offset(col_node) + j, blk(i, j));
  };

  const CMatrix id = CMatrix::Identity(n, n);
  // (V phi_a, phi_b) on each element by two-point Gauss; the points are interior, so a jump of V
  // sitting on a node is seen from the correct side
  const double g = h / (2.0 * std::sqrt(3.0));
  const auto element_potential = [&](int left, CMatrix& ll, CMatrix& rl, CMatrix& rr) {
    const double mid = (left + 0.5) * h;
    ll = rl = rr = CMatrix::Zero(n, n);
    for (double xg : {mid - g, mid + g}) {
      const CMatrix vg = v.evaluate(xg) * (0.5 * h);
      const double pl = (mid + 0.5 * h - xg) / h;
      const double pr = 1.0 - pl;
      ll += vg * (pl * pl);
      rl += vg * (pr * pl);
      rr += vg * (pr * pr);
    }
  };
  const auto project = [&](int node, const CMatrix& blk) -> CMatrix { return node == 0 ? CMatrix(basis.adjoint() * blk * basis) : blk; };
  const auto project_col = [&](int node, const CMatrix& blk) -> CMatrix { return node == 0 ? CMatrix(blk * basis) : blk; };

  // node 0, in full C^n coordinates, then projected onto the kept subspace
  add_block(f.stiffness, 0, 0, project(0, -c.rotated_theta()));
  CMatrix ll, rl, rr;
  for (int e = 0; e < m; ++e) {
    const int l = e, r = e + 1;
    element_potential(e, ll, rl, rr);
    add_block(f.stiffness, l, l, project(l, id / h + ll));
    add_block(f.mass, l, l, project(l, id * (h / 3.0)));
    if (r < m) {
      add_block(f.stiffness, r, r, id / h + rr);
      add_block(f.mass, r, r, id * (h / 3.0));
      add_block(f.stiffness, r, l, project_col(l, -id / h + rl));
      add_block(f.mass, r, l, project_col(l, id * (h / 6.0)));
    }
  }
  return f;
}

struct LadderRung {
  double length = 0.0;
  double h = 0.0;
  int count = 0;
};

struct CountReport {
  int count = 0;
  std::vector<double> eigenvalues;  ///< ascending estimates, all below the shift
  bool converged = false;
  int near_zero = 0;  ///< eigenvalues in (-eps_e, 0) left out of the count
  std::vector<LadderRung> diagnostics;
};

/// Number of generalized eigenvalues of (K, Mass) below E.
inline int count_below(const FormMatrices& f, double e) {
  return inertia(f.stiffness.combined(-e, f.mass)).negative;
}

inline void check_mass(const FormMatrices& f) {
  const Inertia in = inertia(f.mass);
  if (in.negative != 0 || in.zero != 0)
    throw Error(ErrorKind::IndefiniteMass, "mass matrix is not positive definite");
}

/// Eigenvalues below `threshold` by bisection on the inertia count.
inline std::vector<double> eigenvalues_below(const FormMatrices& f, double threshold, int count,
                                             double rel_tol = 1e-10) {
  std::vector<double> out;
  if (count == 0) return out;
  double floor = -1.0;
  for (int it = 0; it < 200 && count_below(f, floor) > 0; ++it) floor *= 2.0;
  // lower[i] and upper[i] bracket eigenvalue i; refined jointly as counts come in
  std::vector<double> lower(count, floor), upper(count, threshold);
  for (int i = 0; i < count; ++i) {
    double lo = std::max(lower[i], i > 0 ? out.back() : floor);
    double hi = upper[i];
    while (hi - lo > rel_tol * std::max(1.0, std::abs(lo))) {
      const double mid = 0.5 * (lo + hi);
      const int c = count_below(f, mid);
      // c eigenvalues lie below mid
      for (int j = i; j < count; ++j) {
        if (j < c) upper[j] = std::min(upper[j], mid);
        else lower[j] = std::max(lower[j], mid);
      }
      if (c > i) hi = mid;
      else lo = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

/// Counts eigenvalues below `shift` (<= 0). For shift = 0 the count is of eigenvalues below
/// -eps_e; those in (-eps_e, 0) are reported separately as truncation artifacts.
inline CountReport count_negative(const FormMatrices& f, double shift = 0.0, bool with_eigenvalues = true) {
  if (shift > 0.0) throw Error(ErrorKind::InvalidArgument, "shift must be <= 0");
  check_mass(f);
  const double threshold = std::min(shift, -eps_near_zero_eigenvalue);
  CountReport r;
  r.count = count_below(f, threshold);
  if (shift == 0.0) r.near_zero = count_below(f, 0.0) - r.count;
  if (with_eigenvalues) r.eigenvalues = eigenvalues_below(f, threshold, r.count);
  r.converged = true;
  r.diagnostics.push_back({f.disc.length, f.disc.h, r.count});
  return r;
}

inline CountReport count_negative(const BoundaryPair& pair, const MatrixPotential& v,
                                  const Discretization& disc, double shift = 0.0,
                                  bool with_eigenvalues = true) {
  return count_negative(assemble_form_matrix(pair, v, disc), shift, with_eigenvalues);
}

struct LadderOptions {
  std::vector<Discretization> rungs{{40.0, 0.02}, {80.0, 0.01}, {160.0, 0.005}};
  double min_length = 0.0;  ///< every rung is stretched to at least this length
  double shift = 0.0;
  bool with_eigenvalues = true;
};

/// Runs the ladder until two successive rungs agree. The returned report carries the
/// eigenvalues of the last rung computed and the whole table in `diagnostics`.
inline CountReport converge_count(const BoundaryPair& pair, const MatrixPotential& v,
                                  const LadderOptions& opts = {}) {
  CountReport out;
  std::vector<LadderRung> table;
  for (std::size_t r = 0; r < opts.rungs.size(); ++r) {
    Discretization d = opts.rungs[r];
    d.length = std::max(d.length, opts.min_length);
    CountReport rung = count_negative(pair, v, d, opts.shift, false);
    table.push_back({d.length, d.h, rung.count});
    const bool agree = r > 0 && table[r - 1].count == rung.count;
    out = rung;
    if (agree || r + 1 == opts.rungs.size()) {
      out.converged = agree;
      if (opts.with_eigenvalues) {
        const FormMatrices f = assemble_form_matrix(pair, v, d);
        out.eigenvalues = eigenvalues_below(f, std::min(opts.shift, -eps_near_zero_eigenvalue), out.count);
      }
      break;
    }
  }
  out.diagnostics = std::move(table);
  return out;
}

/// The rung at which converge_count stopped.
inline Discretization final_rung(const CountReport& r) {
  return r.diagnostics.empty() ? Discretization{} : Discretization{r.diagnostics.back().length, r.diagnostics.back().h};
}

}  // namespace halfline
