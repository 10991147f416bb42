#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "colnoise/fock.hpp"
#include "oracle_values.hpp"

using namespace colnoise;

TEST(Reduce, ProductAndMaximallyEntangled) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 3);
  a(1, 2) = 1.0;
  const auto rho = reduce(PureState(a), Side::left);
  EXPECT_EQ(rho(1, 1), cplx(1.0));
  EXPECT_EQ(rho(0, 0), cplx(0.0));

  Eigen::MatrixXcd bell = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
  EXPECT_LT((reduce(PureState(bell), Side::left) - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-15);
  EXPECT_THROW(PureState(Eigen::MatrixXcd::Ones(2, 2)), ParameterError);
}

TEST(Reduce, HermitianUnitTraceAndSharedSpectrum) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto psi = random_state(2 + int(rng() % 5), 2 + int(rng() % 5), rng);
    const auto l = reduce(psi, Side::left), r = reduce(psi, Side::right);
    EXPECT_TRUE(is_hermitian(l));
    EXPECT_NEAR(l.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> el(l), er(r);
    EXPECT_GE(el.eigenvalues()(0), -1e-12);
    // Nonzero spectra of the two marginals coincide.
    const int m = std::min(l.rows(), r.rows());
    for (int j = 0; j < m; ++j)
      EXPECT_NEAR(el.eigenvalues()(l.rows() - 1 - j), er.eigenvalues()(r.rows() - 1 - j), 1e-12);
  }
}

TEST(TraceNorm, Basics) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.5;
  EXPECT_NEAR(trace_norm(d), 1.0, 1e-15);
  EXPECT_EQ(trace_norm(Eigen::MatrixXcd::Zero(3, 3)), 0.0);
  Eigen::MatrixXcd nh = Eigen::MatrixXcd::Zero(2, 2);
  nh(0, 1) = 1.0;
  EXPECT_THROW(trace_norm(nh), ParameterError);
  EXPECT_THROW(trace_norm(Eigen::MatrixXcd::Zero(2, 3)), ParameterError);
  // Rank-2 difference of pure-state projectors: 2 sqrt(1 - |<u,v>|^2).
  Eigen::VectorXcd u(2), v(2);
  u << 1.0, 0.0;
  v << std::cos(0.3), std::sin(0.3);
  EXPECT_NEAR(trace_norm(u * u.adjoint() - v * v.adjoint()), 2.0 * std::sin(0.3), 1e-14);
}

TEST(Lipschitz, HoldsOnRandomPairs) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const int d1 = 1 + int(rng() % 6), d2 = 1 + int(rng() % 6);
    const auto a = random_state(d1, d2, rng), b = random_state(d1, d2, rng);
    EXPECT_TRUE(lipschitz_check(a, b).holds);
  }
  const auto a = random_state(3, 3, rng);
  EXPECT_EQ(lipschitz_check(a, a).lhs, 0.0);
  EXPECT_THROW(lipschitz_check(random_state(2, 3, rng), random_state(3, 2, rng)), ParameterError);
}

TEST(Lipschitz, OrthogonalProductStates) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  const auto c = lipschitz_check(PureState(a), PureState(b));
  EXPECT_NEAR(c.lhs, 2.0, 1e-14);
  EXPECT_NEAR(c.rhs, 2.0 * std::sqrt(2.0), 1e-14);
}

TEST(Covariance, UnitaryActions) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const int d1 = 1 + int(rng() % 6), d2 = 1 + int(rng() % 6);
    const auto psi = random_state(d1, d2, rng);
    const auto U1 = random_unitary(d1, rng), U2 = random_unitary(d2, rng);
    EXPECT_TRUE(is_unitary(U1));
    EXPECT_TRUE(covariance_check(psi, U1, U2).holds);
    // A unitary on the traced-out factor leaves the marginal untouched.
    const auto c = covariance_check(psi, Eigen::MatrixXcd::Identity(d1, d1), U2);
    EXPECT_LT(c.max_error, 1e-12);
  }
  const auto psi = random_state(2, 2, rng);
  EXPECT_THROW(covariance_check(psi, 2.0 * Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)),
               ParameterError);
}

TEST(MofR, LimitsAndOracle) {
  EXPECT_EQ(M_of_r(0.0), 0.0);
  EXPECT_NEAR(M_of_r(1e-3) / 1e-3, std::exp(-0.5), 1e-6);
  EXPECT_NEAR(M_of_r(1.0), oracle::kMofOne, 1e-12);
  EXPECT_NEAR(M_of_r(1e3), 2.0, 1e-5);
  double prev = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double m = M_of_r(0.1 * i);
    EXPECT_GE(m, prev);
    EXPECT_LE(m, 2.0);
    prev = m;
  }
  for (double r : {1e-4, 1e-3, 1e-2}) EXPECT_LE(M_of_r(r), 1.1 * r * std::exp(-0.5));
  EXPECT_THROW(M_of_r(-1.0), ParameterError);
}

TEST(Coherent, StateAndDimension) {
  double tail = 1.0;
  const auto c = coherent_state(cplx(1.0, 0.5), 60, &tail);
  EXPECT_NEAR(c.norm(), 1.0, 1e-14);
  EXPECT_LT(tail, 1e-14);
  EXPECT_EQ(coherent_dimension(0.0), 40);
  EXPECT_GT(coherent_dimension(4.0), 40);
  EXPECT_THROW(coherent_state(1.0, 0), ParameterError);
}

TEST(Coherent, BoundHoldsOnGrid) {
  const auto zero = coherent_bound_check(0.0);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_TRUE(zero.holds);
  for (int i = 1; i <= 50; ++i) {
    const double b = 4.0 * i / 50.0;
    const auto r = coherent_bound_check(cplx(b, 0.0));
    EXPECT_TRUE(r.holds) << b;
    EXPECT_NEAR(r.lhs, r.lhs_closed, 1e-9) << b;
  }
  const auto r = coherent_bound_check(cplx(0.5, 0.0), 40);
  EXPECT_NEAR(r.lhs, 2.0 * std::sqrt(1.0 - std::exp(-0.25)), 1e-12);
}

TEST(Coherent, TruncationTooSmallIsReported) {
  EXPECT_THROW(coherent_bound_check(cplx(4.0, 0.0), 40), PrecisionError);
  EXPECT_NO_THROW(coherent_bound_check(cplx(4.0, 0.0), 70));
}
