#include <gtest/gtest.h>

#include <random>

#include <halfline/bs_operator.hpp>
#include <halfline/fd_oracle.hpp>
#include <halfline/harness.hpp>

#include "oracles.hpp"

using namespace halfline;

namespace {

CMatrix scalar(double v) { return CMatrix::Constant(1, 1, v); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(BuildBS, ZeroPotential) {
  const auto b = build_bs(diagonal_pair({pi, 2.0}), MatrixPotential::zero(2), -0.5, 50);
  EXPECT_EQ(b.matrix.norm(), 0.0);
  EXPECT_EQ(bs_trace_bound(diagonal_pair({pi}), MatrixPotential::zero(1), -0.5, 50), 0.0);
  EXPECT_EQ(bs_count(diagonal_pair({pi}), MatrixPotential::zero(1), -0.5, 50), 0);
}

TEST(BuildBS, Errors) {
  const auto p = diagonal_pair({pi});
  EXPECT_EQ(kind_of([&] { build_bs(p, MatrixPotential::square_well(scalar(1), 0, 1), -0.5, 50); }),
            ErrorKind::NotNegativePotential);
  EXPECT_EQ(kind_of([&] { build_bs(p, MatrixPotential::square_well(scalar(-1), 0, 1), 0.5, 50); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { build_bs(p, MatrixPotential::square_well(scalar(-1), 0, 1), -0.5, 1); }),
            ErrorKind::InvalidArgument);
  const double cot = 1.0 / std::tan(pi / 3);
  EXPECT_EQ(kind_of([&] { build_bs(diagonal_pair({pi / 3}), MatrixPotential::square_well(scalar(-1), 0, 1), -cot * cot, 50); }),
            ErrorKind::SingularJost);
}

TEST(BuildBS, TraceMatchesDiagonalQuadrature) {
  const double g = 2.0, e = -0.5, kappa = std::sqrt(0.5);
  const auto v = MatrixPotential::square_well(scalar(-g), 0, 1);
  const double nystrom = bs_trace_bound(diagonal_pair({pi}), v, e, 400);
  const double direct = oracle::simpson([&](double x) { return g * oracle::dirichlet_kernel(kappa, x, x); }, 0, 1, 2000);
  const double exact = g / (2 * kappa) * (1 - (1 - std::exp(-2 * kappa)) / (2 * kappa));
  EXPECT_NEAR(direct, exact, 1e-12);
  EXPECT_NEAR(nystrom, direct, 1e-6);
}

TEST(BuildBS, TraceNearZeroEnergy) {
  for (double g : {1.0, 4.0}) {
    const auto v = MatrixPotential::square_well(scalar(-g), 0, 1);
    EXPECT_NEAR(bs_trace_bound(diagonal_pair({pi}), v, -1e-4, 400), g / 2, 1e-2 * g);
  }
}

TEST(BuildBS, HermitianAndNonNegative) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 3;
    // no binding channels: R0(E) is then a positive operator
    std::uniform_real_distribution<double> ang(pi / 2, pi);
    std::vector<double> t(n);
    for (auto& x : t) x = ang(rng);
    const CMatrix u = random_unitary(n, rng);
    const auto c = classify(diagonal_pair(std::span<const double>(t)));
    CVector d(n);
    for (int j = 0; j < n; ++j) d(j) = std::exp(2.0 * I * c.thetas[j]);
    const auto p = pair_from_unitary(u * d.asDiagonal() * u.adjoint());
    const auto v = random_negative_potential(n, rng);
    const auto b = build_bs(p, v, -0.3, 150);
    EXPECT_LE(hermitian_defect(b.matrix), 1e-12);
    EXPECT_GE(bs_eigenvalues(b).minCoeff(), -1e-10);
    EXPECT_GE(b.matrix.trace().real() + 1e-12, bs_analyze(p, v, -0.3, 150).crossings);
  }
}

TEST(BSCount, ScalarWellsMatchMatchingOracle) {
  const auto deep = MatrixPotential::square_well(scalar(-25), 0, 1);
  EXPECT_EQ(bs_count(diagonal_pair({pi}), deep, -1e-3, 400), 2);
  EXPECT_EQ(bs_count(diagonal_pair({pi}), deep, -1e-3, 400), oracle::dirichlet_unit_well_count(25));
  const auto shallow = MatrixPotential::square_well(scalar(-2), 0, 1);
  const int fd = converge_count(diagonal_pair({pi}), shallow).count;
  EXPECT_EQ(bs_count(diagonal_pair({pi}), shallow, -1e-3, 400), fd);
  EXPECT_EQ(fd, oracle::dirichlet_unit_well_count(2));
}

TEST(BSCount, EnergyResolvedAgainstMatching) {
  // every threshold between the matching eigenvalues gives the right count
  const double theta = 2.4, depth = 10.0;
  const auto v = MatrixPotential::square_well(scalar(-depth), 0, 2);
  const auto levels = oracle::well_eigenvalues(theta, depth, 0, 2);
  ASSERT_GE(levels.size(), 2u);
  for (double e : {-9.5, 0.5 * (levels[0] + levels[1]), -0.05}) {
    int want = 0;
    for (double l : levels) want += l < e;
    EXPECT_EQ(bs_count(diagonal_pair({theta}), v, e, 600), want) << e;
  }
}

TEST(BSCount, BindingChannelAddsFreeEigenvalue) {
  // theta = pi/4 binds at -1 with V = 0; below that the BS matrix alone undercounts
  const auto v = MatrixPotential::square_well(scalar(-0.5), 1, 2);
  const auto p = diagonal_pair({pi / 4});
  const auto r = bs_analyze(p, v, -0.5, 200);
  EXPECT_EQ(r.free_count, 1);
  EXPECT_EQ(r.count, count_negative(p, v, {80.0, 0.01}, -0.5, false).count);
}

TEST(BSCount, NearOneIsReported) {
  const auto p = diagonal_pair({pi});
  const auto v = MatrixPotential::square_well(scalar(-25), 0, 1);
  const int nodes = 200;
  // bisect for the energy where the second BS eigenvalue equals one
  double lo = -3.0, hi = -0.1;
  const auto second = [&](double e) {
    const RVector ev = bs_eigenvalues(build_bs(p, v, e, nodes));
    return ev(ev.size() - 2);
  };
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (second(mid) > 1.0 ? hi : lo) = mid;
  }
  EXPECT_EQ(kind_of([&] { bs_analyze(p, v, 0.5 * (lo + hi), nodes); }), ErrorKind::EigenvalueNearOne);
}

TEST(Properties, MonotoneInEnergy) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 1 + trial % 2;
    const auto p = diagonal_pair(n == 1 ? std::vector<double>{2.5} : std::vector<double>{pi, 1.9});
    const auto v = random_negative_potential(n, rng);
    const RVector e1 = bs_eigenvalues(build_bs(p, v, -2.0, 150));
    const RVector e2 = bs_eigenvalues(build_bs(p, v, -0.7, 150));
    const RVector e3 = bs_eigenvalues(build_bs(p, v, -0.1, 150));
    for (int i = 0; i < e1.size(); ++i) {
      EXPECT_LE(e1(i), e2(i) + 1e-12);
      EXPECT_LE(e2(i), e3(i) + 1e-12);
    }
    EXPECT_LE(bs_count(p, v, -2.0, 150), bs_count(p, v, -0.7, 150));
    EXPECT_LE(bs_count(p, v, -0.7, 150), bs_count(p, v, -0.1, 150));
  }
}

TEST(Properties, NystromConvergence) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 1 + trial;
    const auto p = random_pair(n, 1300 + trial);
    const auto v = random_negative_potential(n, rng);
    const int base = default_bs_nodes(v, 150.0);
    const RVector a = bs_eigenvalues(build_bs(p, v, -0.5, base));
    const RVector b = bs_eigenvalues(build_bs(p, v, -0.5, 2 * base - 1));
    // compare from the top down
    for (int i = 0; i < a.size(); ++i) {
      const double ea = a(a.size() - 1 - i), eb = b(b.size() - 1 - i);
      if (ea <= 0.1) break;
      EXPECT_LT(std::abs(ea - eb), 1e-4) << "trial " << trial << " #" << i;
    }
  }
}

TEST(Properties, NeumannTraceDivergesAtZeroEnergy) {
  const auto p = diagonal_pair({pi / 2});
  const auto v = MatrixPotential::square_well(scalar(-1), 1, 2);
  double prev = 0.0;
  for (int m = 2; m <= 6; ++m) {
    const double e = -std::pow(10.0, -m);
    const double tr = bs_trace_bound(p, v, e, 200);
    EXPECT_GT(tr, prev);
    // R0(E)(x,x) = (1 + e^{-2 kappa x}) / (2 kappa), integrated over [1, 2]
    const double kappa = std::sqrt(-e);
    const double exact = 0.5 / kappa + (std::exp(-2 * kappa) - std::exp(-4 * kappa)) / (4 * kappa * kappa);
    EXPECT_NEAR(tr, exact, 1e-6 * exact) << m;
    EXPECT_NEAR(tr * kappa, 1.0, 2.0 * kappa) << m;
    prev = tr;
  }
}

TEST(Properties, CrossOracleOnRandomInstances) {
  int compared = 0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto rng = trial_rng(11, trial);
    const int n = 1 + trial % 3;
    const Instance inst = random_instance(n, rng);
    const int fd = count_negative(inst.pair, inst.potential, {80.0, 0.01}, -0.5, false).count;
    try {
      EXPECT_EQ(bs_count(inst.pair, inst.potential, -0.5, default_bs_nodes(inst.potential, 200.0)), fd)
          << "trial " << trial;
      ++compared;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::EigenvalueNearOne);
    }
  }
  EXPECT_GE(compared, 8);
}
