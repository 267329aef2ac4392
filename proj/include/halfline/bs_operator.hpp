// bs_operator.hpp - Nystrom discretization of the Birman-Schwinger operator V1 R0(E) V1
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "boundary.hpp"
#include "error.hpp"
#include "free_resolvent.hpp"
#include "linalg.hpp"
#include "potential.hpp"

namespace halfline {

inline constexpr double eps_near_one = 1e-6;
inline constexpr double bs_nodes_per_unit = 400.0;

struct BSMatrix {
  double E = 0.0;
  int n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  CMatrix matrix;  ///< (nodes * n) square, Hermitian
};

/// Default trapezoid node count for the support of V.
inline int default_bs_nodes(const MatrixPotential& v, double per_unit = bs_nodes_per_unit) {
  const auto [lo, hi] = v.support();
  return std::max(2, static_cast<int>(std::ceil(per_unit * (hi - lo))) + 1);
}

/// Blocks sqrt(w_i) V1(x_i) R0(E)(x_i, x_j) V1(x_j) sqrt(w_j) on a composite trapezoid grid
/// over the support of V. Requires V <= 0 at every node.
inline BSMatrix build_bs(const BoundaryPair& pair, const MatrixPotential& v, double e, int nodes,
                         double eps_class = tolerance::angle_class) {
  if (v.n() != pair.n())
    throw Error(ErrorKind::DimensionMismatch, "potential and boundary pair differ in dimension");
  if (!(e < 0.0)) throw Error(ErrorKind::InvalidArgument, "E must be negative");
  if (nodes < 2) throw Error(ErrorKind::InvalidArgument, "need at least two nodes");
  const int n = pair.n();
  BSMatrix b;
  b.E = e;
  b.n = n;
  const ResolventKernel kernel(classify(pair, eps_class), cplx(e, 0.0));
  if (v.is_zero()) {
    b.matrix = CMatrix::Zero(n, n);
    return b;
  }

  const auto [lo, hi] = v.support();
  const double step = (hi - lo) / (nodes - 1);
  b.nodes.resize(nodes);
  b.weights.assign(nodes, step);
  b.weights.front() = b.weights.back() = 0.5 * step;
  std::vector<CMatrix> root(nodes);
  for (int i = 0; i < nodes; ++i) {
    b.nodes[i] = i + 1 == nodes ? hi : lo + i * step;
    const PotentialSplit s = split(v, b.nodes[i]);
    if (operator_norm(s.plus) > 1e-12 * std::max(1.0, operator_norm(s.minus)))
      throw Error(ErrorKind::NotNegativePotential,
                  "V has a positive part at x = " + std::to_string(b.nodes[i]));
    root[i] = s.sqrt_abs * std::sqrt(b.weights[i]);
  }

  const CMatrix& m = kernel.classification().M;
  // work in the diagonal frame: R0 = M D M^dagger, so each block is (V1 M) D (V1 M)^dagger
  std::vector<CMatrix> left(nodes);
  for (int i = 0; i < nodes; ++i) left[i] = root[i] * m;
  b.matrix.resize(nodes * n, nodes * n);
  for (int j = 0; j < nodes; ++j) {
    for (int i = j; i < nodes; ++i) {
      const CVector d = kernel.diagonal(b.nodes[i], b.nodes[j]);
      const CMatrix blk = left[i] * d.asDiagonal() * left[j].adjoint();
      b.matrix.block(i * n, j * n, n, n) = blk;
      if (i != j) b.matrix.block(j * n, i * n, n, n) = blk.adjoint();
    }
  }
  b.matrix = 0.5 * (b.matrix + b.matrix.adjoint()).eval();
  return b;
}

inline RVector bs_eigenvalues(const BSMatrix& b) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(b.matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Eigenvalues of the free operator below E: -cot^2 theta for each binding mixed channel.
inline int free_count_below(const BoundaryClassification& c, double e) {
  int count = 0;
  for (int j = 0; j < c.n(); ++j)
    if (c.kinds[j] == ChannelKind::Mixed && c.thetas[j] < pi / 2.0) {
      const double cot = 1.0 / std::tan(c.thetas[j]);
      if (-cot * cot < e) ++count;
    }
  return count;
}

struct BSReport {
  int count = 0;        ///< eigenvalues of H below E
  int free_count = 0;   ///< of which present already at V = 0
  int crossings = 0;    ///< eigenvalues of the BS matrix above 1
  double trace = 0.0;
  std::vector<double> top_eigenvalues;  ///< descending
};

/// Counts eigenvalues of H below E: eigenvalues of the free operator below E plus the
/// eigenvalues of the BS matrix above 1. Without binding mixed channels the first term is 0.
inline BSReport bs_analyze(const BoundaryPair& pair, const MatrixPotential& v, double e, int nodes,
                           int top = 8, double eps_class = tolerance::angle_class) {
  const BSMatrix b = build_bs(pair, v, e, nodes, eps_class);
  BSReport r;
  r.free_count = free_count_below(classify(pair, eps_class), e);
  r.trace = b.matrix.trace().real();
  const RVector ev = bs_eigenvalues(b);
  for (int i = static_cast<int>(ev.size()) - 1; i >= 0; --i) {
    if (std::abs(ev(i) - 1.0) < eps_near_one)
      throw Error(ErrorKind::EigenvalueNearOne,
                  "BS eigenvalue " + std::to_string(ev(i)) + " is within 1e-6 of 1; perturb E");
    if (ev(i) > 1.0) ++r.crossings;
    if (static_cast<int>(r.top_eigenvalues.size()) < top) r.top_eigenvalues.push_back(ev(i));
  }
  r.count = r.free_count + r.crossings;
  return r;
}

inline int bs_count(const BoundaryPair& pair, const MatrixPotential& v, double e, int nodes) {
  return bs_analyze(pair, v, e, nodes).count;
}

inline double bs_trace_bound(const BoundaryPair& pair, const MatrixPotential& v, double e, int nodes) {
  return build_bs(pair, v, e, nodes).matrix.trace().real();
}

}  // namespace halfline
