#include <gtest/gtest.h>

#include <random>

#include <halfline/boundary.hpp>

using namespace halfline;

namespace {

CMatrix diag(std::initializer_list<double> d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  int i = 0;
  for (double x : d) m(i, i) = x, ++i;
  return m;
}

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

/// Invertible T with condition number at most 1e3.
CMatrix random_gauge(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> expo(0.0, 3.0);
  RVector s(n);
  for (int i = 0; i < n; ++i) s(i) = std::pow(10.0, expo(rng));
  s(0) = 1.0;
  s(n - 1) = 1e3;
  if (n == 1) s(0) = 7.0;
  return random_unitary(n, rng) * s.cast<cplx>().asDiagonal() * random_unitary(n, rng);
}

CMatrix unitary_with_angles(const std::vector<double>& thetas, const CMatrix& q) {
  CVector d(thetas.size());
  for (std::size_t j = 0; j < thetas.size(); ++j) d(j) = std::exp(2.0 * I * thetas[j]);
  return q * d.asDiagonal() * q.adjoint();
}

}  // namespace

TEST(ValidatePair, DirichletAndNeumannAccepted) {
  const CMatrix z = CMatrix::Zero(2, 2), id = CMatrix::Identity(2, 2);
  EXPECT_NO_THROW(validate_pair(z, id));
  EXPECT_NO_THROW(validate_pair(id, z));
}

TEST(ValidatePair, NonHermitianProductRejected) {
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(0, 1) = 1.0;
  // A^dagger B = [[0,1],[0,0]] is not Hermitian; A^dagger A + B^dagger B = I is fine
  EXPECT_EQ(kind_of([&] { validate_pair(a, b); }), ErrorKind::SelfAdjointnessViolated);
}

TEST(ValidatePair, RankDeficientRejected) {
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  EXPECT_EQ(kind_of([&] { validate_pair(a, b); }), ErrorKind::Degenerate);
}

TEST(ValidatePair, ShapeErrors) {
  EXPECT_EQ(kind_of([] { validate_pair(CMatrix::Zero(2, 2), CMatrix::Identity(3, 3)); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { validate_pair(CMatrix::Zero(2, 3), CMatrix::Identity(2, 3)); }),
            ErrorKind::DimensionMismatch);
}

TEST(ComputeU, ScalarExamples) {
  EXPECT_NEAR(std::abs(compute_U(validate_pair(diag({0}), diag({1})))(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(compute_U(validate_pair(diag({1}), diag({0})))(0, 0) + 1.0), 0.0, 1e-15);
  const double r = std::sqrt(0.5);
  const cplx u = compute_U(validate_pair(diag({-r}), diag({r})))(0, 0);
  EXPECT_NEAR(std::abs(u - I), 0.0, 1e-15);
}

TEST(ComputeU, UnitaryForRandomPairs) {
  for (int n = 1; n <= 16; ++n)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const CMatrix u = compute_U(random_pair(n, seed));
      EXPECT_LE((u.adjoint() * u - CMatrix::Identity(n, n)).norm(), 1e-12) << "n=" << n;
    }
}

TEST(ComputeU, GaugeInvariance) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 5;
    const BoundaryPair p = random_pair(n, 100 + trial);
    const CMatrix t = random_gauge(n, rng);
    const BoundaryPair q = validate_pair(p.A() * t, p.B() * t);
    EXPECT_LE((compute_U(q) - compute_U(p)).norm(), 1e-10) << "trial " << trial;
  }
}

TEST(Classify, Dirichlet) {
  const auto c = classify(validate_pair(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2)));
  EXPECT_EQ(c.thetas, (std::vector<double>{pi, pi}));
  EXPECT_EQ(c.n_D, 2);
  EXPECT_EQ(c.n_N + c.n_M + c.n_Mb, 0);
  EXPECT_EQ(c.ThetaT.norm(), 0.0);
}

TEST(Classify, Neumann) {
  const auto c = classify(validate_pair(CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)));
  EXPECT_EQ(c.thetas, (std::vector<double>{pi / 2, pi / 2}));
  EXPECT_EQ(c.n_N, 2);
  EXPECT_EQ(c.ThetaT.norm(), 0.0);
  EXPECT_EQ(c.Theta.norm(), 0.0);
}

TEST(Classify, ThreeQuarterPi) {
  const double t = 3 * pi / 4;
  const auto c = classify(validate_pair(diag({-std::sin(t)}), diag({std::cos(t)})));
  EXPECT_NEAR(c.thetas[0], t, 1e-12);
  EXPECT_EQ(c.n_M, 1);
  EXPECT_EQ(c.n_Mb, 0);
  EXPECT_NEAR(c.ThetaT(0), -1.0, 1e-12);
  EXPECT_NEAR(c.Theta(0), -1.0, 1e-12);
}

TEST(Classify, BindingAngleCounted) {
  const auto c = classify(diagonal_pair({pi / 4, pi / 2, 2.0, pi}));
  EXPECT_EQ(c.n_Mb, 1);
  EXPECT_EQ(c.n_M, 2);
  EXPECT_EQ(c.n_N, 1);
  EXPECT_EQ(c.n_D, 1);
  EXPECT_EQ(c.ThetaT(0), 0.0);
  EXPECT_NEAR(c.ThetaT(2), std::tan(2.0), 1e-12);
  for (int j = 0; j < 4; ++j) EXPECT_LE(c.ThetaT(j), 0.0);
}

TEST(Classify, SnappingNearSpecialAngles) {
  const auto near = classify_unitary(unitary_with_angles({pi / 2 + 1e-11, pi - 1e-11, 1e-11},
                                                         CMatrix::Identity(3, 3)));
  EXPECT_EQ(near.n_N, 1);
  EXPECT_EQ(near.n_D, 2);
  const auto far = classify_unitary(unitary_with_angles({pi / 2 + 1e-6}, CMatrix::Identity(1, 1)));
  EXPECT_EQ(far.n_M, 1);
  EXPECT_EQ(far.n_Mb, 0);
}

TEST(Classify, DiagonalizesU) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = classify(random_pair(4, seed));
    const CMatrix d = c.M.adjoint() * c.U * c.M;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) {
          EXPECT_NEAR(std::abs(d(i, i)), 1.0, 1e-12);
          EXPECT_NEAR(std::abs(d(i, i) - std::exp(2.0 * I * c.thetas[i])), 0.0, 1e-10);
        } else {
          EXPECT_LE(std::abs(d(i, j)), 1e-12);
        }
      }
    EXPECT_TRUE(std::is_sorted(c.thetas.begin(), c.thetas.end()));
  }
}

TEST(Classify, CountsAddUpAtExtremes) {
  const std::vector<std::vector<double>> cases{
      {pi, pi, pi}, {pi / 2, pi / 2, pi / 2}, {0.3, 2.0, 1.0}, {pi, pi / 2, 0.5}, {pi}};
  for (const auto& t : cases) {
    const auto c = classify(diagonal_pair(std::span<const double>(t)));
    EXPECT_EQ(c.n_N + c.n_D + c.n_M, static_cast<int>(t.size()));
    EXPECT_LE(c.n_Mb, c.n_M);
  }
}

TEST(DiagonalPair, Examples) {
  auto p = diagonal_pair({pi});
  EXPECT_EQ(p.A()(0, 0), cplx(0.0));
  EXPECT_EQ(p.B()(0, 0), cplx(-1.0));
  p = diagonal_pair({pi / 2});
  EXPECT_EQ(p.A()(0, 0), cplx(-1.0));
  EXPECT_EQ(p.B()(0, 0), cplx(0.0));
  p = diagonal_pair({pi / 4, pi});
  const double r = std::sqrt(2.0) / 2;
  EXPECT_NEAR(std::abs(p.A()(0, 0) + r), 0.0, 1e-15);
  EXPECT_EQ(p.A()(1, 1), cplx(0.0));
  EXPECT_NEAR(std::abs(p.B()(0, 0) - r), 0.0, 1e-15);
  EXPECT_EQ(p.B()(1, 1), cplx(-1.0));
  EXPECT_EQ(classify(diagonal_pair({pi})).n_D, 1);
  EXPECT_EQ(classify(diagonal_pair({pi / 2})).n_N, 1);
}

TEST(DiagonalPair, AngleOutOfRange) {
  EXPECT_EQ(kind_of([] { diagonal_pair({0.0}); }), ErrorKind::AngleOutOfRange);
  EXPECT_EQ(kind_of([] { diagonal_pair({1.0, 3.5}); }), ErrorKind::AngleOutOfRange);
  EXPECT_EQ(kind_of([] { diagonal_pair({-1.0}); }), ErrorKind::AngleOutOfRange);
}

TEST(DiagonalPair, RoundTrip) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(1e-3, pi);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t(1 + trial % 6);
    for (auto& x : t) x = ang(rng);
    if (trial % 3 == 0) t[0] = pi;
    if (trial % 4 == 0) t.back() = pi / 2;
    const auto c = classify(diagonal_pair(std::span<const double>(t)));
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < t.size(); ++j) EXPECT_NEAR(c.thetas[j], sorted[j], 1e-10);
    // the diagonalizer of a diagonal U is a permutation up to phases
    for (int i = 0; i < c.M.rows(); ++i) EXPECT_NEAR(c.M.row(i).cwiseAbs().maxCoeff(), 1.0, 1e-12);
  }
}

TEST(Classify, RotatedMatricesIndependentOfDiagonalizer) {
  std::mt19937_64 rng(9);
  const std::vector<double> t{pi / 3, pi / 3, 3 * pi / 4, 3 * pi / 4, 3 * pi / 4};
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix q = random_unitary(5, rng);
    const auto c = classify_unitary(unitary_with_angles(t, q));
    // another orthonormal eigenbasis: rotate within each eigenspace
    CMatrix w = CMatrix::Zero(5, 5);
    w.block(0, 0, 2, 2) = random_unitary(2, rng);
    w.block(2, 2, 3, 3) = random_unitary(3, rng);
    const CMatrix m2 = c.M * w;
    const CMatrix theta2 = m2 * c.Theta.cast<cplx>().asDiagonal() * m2.adjoint();
    const CMatrix theta_t2 = m2 * c.ThetaT.cast<cplx>().asDiagonal() * m2.adjoint();
    EXPECT_LE((theta2 - c.rotated_theta()).norm(), 1e-12);
    EXPECT_LE((theta_t2 - c.rotated_theta_t()).norm(), 1e-12);
    EXPECT_LE(hermitian_defect(c.rotated_theta()), 1e-12);
    EXPECT_LE(hermitian_defect(c.rotated_theta_t()), 1e-12);

    // perturb U slightly, orthonormalize, and classify again: rotated matrices stay put
    const CMatrix noisy = unitary_with_angles(t, q) + 1e-13 * random_gaussian_matrix(5, 5, rng);
    Eigen::HouseholderQR<CMatrix> qr(noisy);
    CMatrix un = qr.householderQ() * CMatrix::Identity(5, 5);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 5; ++j) un.col(j) *= r(j, j) / std::abs(r(j, j));
    const auto c2 = classify_unitary(un);
    EXPECT_LE((c2.rotated_theta() - c.rotated_theta()).norm(), 1e-9);
    EXPECT_LE((c2.rotated_theta_t() - c.rotated_theta_t()).norm(), 1e-9);
  }
}

TEST(RandomPair, IdentityAndMinusIdentity) {
  const auto d = pair_from_unitary(CMatrix::Identity(2, 2));
  EXPECT_EQ(d.A().norm(), 0.0);
  EXPECT_EQ((d.B() - CMatrix::Identity(2, 2)).norm(), 0.0);
  const auto n = pair_from_unitary(-CMatrix::Identity(2, 2));
  EXPECT_EQ((n.A() + I * CMatrix::Identity(2, 2)).norm(), 0.0);
  EXPECT_EQ(n.B().norm(), 0.0);
  EXPECT_LE((compute_U(n) + CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_EQ(classify(n).n_N, 2);
}

TEST(RandomPair, RoundTripsToDrawnUnitary) {
  std::mt19937_64 rng(7);
  const CMatrix u0 = random_unitary(3, rng);
  const BoundaryPair p = random_pair(3, 7);
  EXPECT_LE((compute_U(p) - u0).norm(), 1e-12);
  EXPECT_NO_THROW(validate_pair(p.A(), p.B()));
}

TEST(RandomPair, Deterministic) {
  EXPECT_EQ((random_pair(4, 11).A() - random_pair(4, 11).A()).norm(), 0.0);
  EXPECT_GT((random_pair(4, 11).A() - random_pair(4, 12).A()).norm(), 0.0);
}
