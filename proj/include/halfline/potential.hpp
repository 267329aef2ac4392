// potential.hpp - Hermitian matrix potentials on [0, inf)
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "error.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"

namespace halfline {

namespace potentials {

/// V(x) = depth on [a, b], zero elsewhere.
struct SquareWell {
  CMatrix depth;
  double a = 0.0;
  double b = 0.0;
};

/// V(x) = C e^{-mu x}.
struct Exponential {
  CMatrix coefficient;
  double mu = 1.0;
};

/// V(x) = C * exp(1 - 1/(1 - t^2)) with t mapping [a, b] onto [-1, 1]; smooth, peak value C.
struct Bump {
  CMatrix coefficient;
  double a = 0.0;
  double b = 1.0;
};

/// Linear interpolation between grid nodes, zero beyond the last node.
struct Sampled {
  std::vector<double> xs;
  std::vector<CMatrix> values;
};

struct Zero {
  int n = 1;
};

}  // namespace potentials

class MatrixPotential {
 public:
  using Preset = std::variant<potentials::Zero, potentials::SquareWell, potentials::Exponential,
                              potentials::Bump, potentials::Sampled>;

  MatrixPotential() : preset_(potentials::Zero{1}), n_(1) {}
  explicit MatrixPotential(Preset preset) : preset_(std::move(preset)) { n_ = check(); }

  static MatrixPotential zero(int n) { return MatrixPotential(potentials::Zero{n}); }
  static MatrixPotential square_well(CMatrix depth, double a, double b) {
    return MatrixPotential(potentials::SquareWell{std::move(depth), a, b});
  }
  static MatrixPotential exponential(CMatrix c, double mu) {
    return MatrixPotential(potentials::Exponential{std::move(c), mu});
  }
  static MatrixPotential bump(CMatrix c, double a, double b) {
    return MatrixPotential(potentials::Bump{std::move(c), a, b});
  }
  static MatrixPotential sampled(std::vector<double> xs, std::vector<CMatrix> vs) {
    return MatrixPotential(potentials::Sampled{std::move(xs), std::move(vs)});
  }

  int n() const { return n_; }
  const Preset& preset() const { return preset_; }

  CMatrix operator()(double x) const { return evaluate(x); }

  CMatrix evaluate(double x) const {
    if (x < 0.0 || std::isnan(x))
      throw Error(ErrorKind::NegativeCoordinate, "x = " + std::to_string(x));
    return std::visit([&](const auto& p) { return eval(p, x); }, preset_);
  }

  /// Interval [lo, hi] outside of which V vanishes (or, for the exponential, is below
  /// machine precision relative to its peak).
  std::pair<double, double> support() const {
    return std::visit([&](const auto& p) { return support_of(p); }, preset_);
  }

  /// Smallest R with ||V|| ~ 0 beyond R.
  double support_hint() const { return support().second; }

  /// Points where V may be non-smooth, including the support ends, ascending.
  std::vector<double> breakpoints() const {
    std::vector<double> pts = std::visit([&](const auto& p) { return breaks_of(p); }, preset_);
    pts.push_back(0.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  bool is_zero() const { return std::holds_alternative<potentials::Zero>(preset_); }

 private:
  int check() const {
    return std::visit([&](const auto& p) { return check_preset(p); }, preset_);
  }

  static void require_hermitian(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be square");
    if (hermitian_defect(m) > 1e-12 * std::max(1.0, m.norm()))
      throw Error(ErrorKind::NonHermitianInput, std::string(what) + " is not Hermitian");
  }

  static int check_preset(const potentials::Zero& p) {
    if (p.n < 1) throw Error(ErrorKind::DimensionMismatch, "zero potential needs n >= 1");
    return p.n;
  }
  static int check_preset(const potentials::SquareWell& p) {
    require_hermitian(p.depth, "square_well depth");
    if (!(p.a >= 0.0 && p.b >= p.a))
      throw Error(ErrorKind::InvalidArgument, "square_well needs 0 <= a <= b");
    return static_cast<int>(p.depth.rows());
  }
  static int check_preset(const potentials::Exponential& p) {
    require_hermitian(p.coefficient, "exp coefficient");
    return static_cast<int>(p.coefficient.rows());
  }
  static int check_preset(const potentials::Bump& p) {
    require_hermitian(p.coefficient, "bump coefficient");
    if (!(p.a >= 0.0 && p.b > p.a)) throw Error(ErrorKind::InvalidArgument, "bump needs 0 <= a < b");
    return static_cast<int>(p.coefficient.rows());
  }
  static int check_preset(const potentials::Sampled& p) {
    if (p.xs.empty() || p.xs.size() != p.values.size())
      throw Error(ErrorKind::DimensionMismatch, "sampled potential needs one matrix per node");
    if (p.xs.front() < 0.0) throw Error(ErrorKind::NegativeCoordinate, "sampled grid starts below 0");
    for (std::size_t i = 1; i < p.xs.size(); ++i)
      if (!(p.xs[i] > p.xs[i - 1]))
        throw Error(ErrorKind::InvalidArgument, "sampled grid must be strictly increasing");
    const auto n = p.values.front().rows();
    for (const auto& v : p.values) {
      require_hermitian(v, "sampled value");
      if (v.rows() != n) throw Error(ErrorKind::DimensionMismatch, "sampled values differ in size");
    }
    return static_cast<int>(n);
  }

  CMatrix eval(const potentials::Zero& p, double) const { return CMatrix::Zero(p.n, p.n); }
  CMatrix eval(const potentials::SquareWell& p, double x) const {
    return x >= p.a && x <= p.b ? p.depth : CMatrix::Zero(n_, n_);
  }
  CMatrix eval(const potentials::Exponential& p, double x) const {
    return p.coefficient * std::exp(-p.mu * x);
  }
  CMatrix eval(const potentials::Bump& p, double x) const {
    const double t = (2.0 * x - p.a - p.b) / (p.b - p.a);
    if (std::abs(t) >= 1.0) return CMatrix::Zero(n_, n_);
    return p.coefficient * std::exp(1.0 - 1.0 / (1.0 - t * t));
  }
  CMatrix eval(const potentials::Sampled& p, double x) const {
    if (x < p.xs.front() || x > p.xs.back()) return CMatrix::Zero(n_, n_);
    if (p.xs.size() == 1) return p.values.front();
    const auto it = std::upper_bound(p.xs.begin(), p.xs.end(), x);
    if (it == p.xs.end()) return p.values.back();
    const std::size_t hi = static_cast<std::size_t>(it - p.xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - p.xs[lo]) / (p.xs[hi] - p.xs[lo]);
    return (1.0 - t) * p.values[lo] + t * p.values[hi];
  }

  static std::pair<double, double> support_of(const potentials::Zero&) { return {0.0, 0.0}; }
  static std::pair<double, double> support_of(const potentials::SquareWell& p) { return {p.a, p.b}; }
  static std::pair<double, double> support_of(const potentials::Exponential& p) {
    if (!(p.mu > 0.0)) return {0.0, std::numeric_limits<double>::infinity()};
    // e^{-mu R} = 1e-17 relative to the peak
    return {0.0, 17.0 * std::log(10.0) / p.mu};
  }
  static std::pair<double, double> support_of(const potentials::Bump& p) { return {p.a, p.b}; }
  static std::pair<double, double> support_of(const potentials::Sampled& p) {
    return {p.xs.front(), p.xs.back()};
  }

  static std::vector<double> breaks_of(const potentials::Zero&) { return {}; }
  static std::vector<double> breaks_of(const potentials::SquareWell& p) { return {p.a, p.b}; }
  static std::vector<double> breaks_of(const potentials::Exponential& p) {
    return {support_of(p).second};
  }
  static std::vector<double> breaks_of(const potentials::Bump& p) {
    return {p.a, 0.5 * (p.a + p.b), p.b};
  }
  static std::vector<double> breaks_of(const potentials::Sampled& p) { return p.xs; }

  Preset preset_;
  int n_ = 1;
};

/// Pointwise spectral parts of V(x): V = V+ - V-, and V1 = sqrt|V| = sqrt(V+ + V-).
struct PotentialSplit {
  CMatrix plus;
  CMatrix minus;
  CMatrix sqrt_abs;
};

inline constexpr double eps_zero_eigenvalue = 1e-13;

inline PotentialSplit split_matrix(const CMatrix& v) {
  if (hermitian_defect(v) > 1e-12 * std::max(1.0, v.norm()))
    throw Error(ErrorKind::NonHermitianInput, "V(x) is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(v);
  RVector d = es.eigenvalues();
  for (auto& e : d)
    if (std::abs(e) <= eps_zero_eigenvalue) e = 0.0;
  const CMatrix& q = es.eigenvectors();
  const RVector pos = d.cwiseMax(0.0);
  const RVector neg = (-d).cwiseMax(0.0);
  const RVector root = d.cwiseAbs().cwiseSqrt();
  return {q * pos.cast<cplx>().asDiagonal() * q.adjoint(),
          q * neg.cast<cplx>().asDiagonal() * q.adjoint(),
          q * root.cast<cplx>().asDiagonal() * q.adjoint()};
}

inline PotentialSplit split(const MatrixPotential& v, double x) { return split_matrix(v.evaluate(x)); }

/// Largest eigenvalue of V(x) over the given points; <= 0 means V is negative semidefinite there.
inline double max_eigenvalue(const MatrixPotential& v, double x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(v.evaluate(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

struct FaddeevMoments {
  double l1 = 0.0;            ///< int ||V(x)|| dx
  double first_moment = 0.0;  ///< int (1 + x) ||V(x)|| dx
};

inline FaddeevMoments faddeev_moment(const MatrixPotential& v, double rel_tol = 1e-8) {
  if (v.is_zero()) return {};
  if (const auto* e = std::get_if<potentials::Exponential>(&v.preset())) {
    if (!(e->mu > 0.0))
      throw Error(ErrorKind::DivergentMoment, "exponential potential needs mu > 0");
  }
  const auto pts = v.breakpoints();
  const auto norm_at = [&](double x) { return hermitian_norm(v.evaluate(x)); };
  FaddeevMoments m;
  m.l1 = quad::integrate_pieces(norm_at, pts, rel_tol);
  m.first_moment = quad::integrate_pieces([&](double x) { return (1.0 + x) * norm_at(x); }, pts, rel_tol);
  if (const auto* e = std::get_if<potentials::Exponential>(&v.preset())) {
    // analytic tail beyond the truncation point
    const double r = v.support_hint();
    const double c = hermitian_norm(e->coefficient) * std::exp(-e->mu * r) / e->mu;
    m.l1 += c;
    m.first_moment += c * (1.0 + r + 1.0 / e->mu);
  }
  if (!std::isfinite(m.l1) || !std::isfinite(m.first_moment))
    throw Error(ErrorKind::DivergentMoment, "Faddeev moment is not finite");
  return m;
}

/// M^dagger V M, pointwise. Used for moving a potential into the diagonal boundary frame.
inline MatrixPotential conjugate(const MatrixPotential& v, const CMatrix& m) {
  const auto rot = [&](const CMatrix& x) -> CMatrix {
    CMatrix r = m.adjoint() * x * m;
    return 0.5 * (r + r.adjoint());
  };
  struct Visitor {
    decltype(rot)& f;
    MatrixPotential operator()(const potentials::Zero& p) const { return MatrixPotential::zero(p.n); }
    MatrixPotential operator()(const potentials::SquareWell& p) const {
      return MatrixPotential::square_well(f(p.depth), p.a, p.b);
    }
    MatrixPotential operator()(const potentials::Exponential& p) const {
      return MatrixPotential::exponential(f(p.coefficient), p.mu);
    }
    MatrixPotential operator()(const potentials::Bump& p) const {
      return MatrixPotential::bump(f(p.coefficient), p.a, p.b);
    }
    MatrixPotential operator()(const potentials::Sampled& p) const {
      std::vector<CMatrix> vs;
      vs.reserve(p.values.size());
      for (const auto& x : p.values) vs.push_back(f(x));
      return MatrixPotential::sampled(p.xs, std::move(vs));
    }
  };
  return std::visit(Visitor{rot}, v.preset());
}

/// lambda * V.
inline MatrixPotential scaled(const MatrixPotential& v, double lambda) {
  return std::visit(
      [&](auto p) -> MatrixPotential {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, potentials::SquareWell>) p.depth *= lambda;
        else if constexpr (std::is_same_v<T, potentials::Exponential>) p.coefficient *= lambda;
        else if constexpr (std::is_same_v<T, potentials::Bump>) p.coefficient *= lambda;
        else if constexpr (std::is_same_v<T, potentials::Sampled>)
          for (auto& x : p.values) x *= lambda;
        return MatrixPotential(std::move(p));
      },
      v.preset());
}

}  // namespace halfline
