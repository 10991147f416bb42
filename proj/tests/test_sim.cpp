#include <gtest/gtest.h>

#include <cmath>

#include "colnoise/sim.hpp"

using namespace colnoise;

TEST(Philox, KnownAnswerVectors) {
  using C = Philox4x32::ctr_type;
  using K = Philox4x32::key_type;
  EXPECT_EQ(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}), (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::apply(C{~0u, ~0u, ~0u, ~0u}, K{~0u, ~0u}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::apply(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, K{0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(CounterNormal, DeterministicAndAddressable) {
  CounterNormal a(42), b(42), c(43);
  EXPECT_EQ(a(0, 123, 7), b(0, 123, 7));
  EXPECT_NE(a(0, 123, 7), c(0, 123, 7));
  EXPECT_NE(a(0, 123, 7), a(1, 123, 7));
  const auto p = a.pair_at(0, 5, 3);
  EXPECT_EQ(a(0, 5, 6), p.first);
  EXPECT_EQ(a(0, 5, 7), p.second);
}

TEST(CounterNormal, Moments) {
  CounterNormal g(1);
  const int n = 200000;
  double s = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = g(0, i, 0);
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 5.0 / std::sqrt(double(n)));
  EXPECT_NEAR(s2 / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(s4 / n, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(BinCov, ToeplitzSumsToVarianceOfZ) {
  const auto k = make_kernel(2.0);
  const auto c = bin_cov(k, 512);
  EXPECT_NEAR(c.matrix.sum(), unit_norm2(k), 1e-10);
  EXPECT_LT((c.matrix - c.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(c.clip_ratio(), 1e-6);
  for (int m = 1; m < 40; ++m) EXPECT_LE(c.lag[m], c.lag[m - 1]);
  EXPECT_EQ(c.lag[300], 0.0);
  EXPECT_THROW(bin_cov(k, 1), ParameterError);
}

TEST(Sample, EmpiricalCovarianceMatches) {
  const auto k = make_kernel(2.0);
  const auto c = bin_cov(k, 16);
  const int n = 40000;
  const auto X = sample(c, n, 7);
  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - mean;
  const Eigen::MatrixXd emp = centered.transpose() * centered / (n - 1);
  for (int i = 0; i < 16; ++i) {
    EXPECT_NEAR(mean(i), 0.0, 5.0 * std::sqrt(c.matrix(i, i) / n));
    for (int j = 0; j < 16; ++j) {
      const double sd = std::sqrt((c.matrix(i, i) * c.matrix(j, j) + c.matrix(i, j) * c.matrix(i, j)) / n);
      EXPECT_NEAR(emp(i, j), c.matrix(i, j), 5.0 * sd) << i << " " << j;
    }
  }
  EXPECT_EQ(sample(c, 3, 7), sample(c, 3, 7));
  EXPECT_NE(sample(c, 3, 7), sample(c, 3, 8));
}

TEST(BinsPerCell, Resolution) {
  EXPECT_EQ(bins_per_cell(64, 0.25), 4);
  EXPECT_EQ(bins_per_cell(64, 0.1), 10);
  EXPECT_EQ(bins_per_cell(100, 0.2), 5);
  EXPECT_EQ(bins_per_cell(64, 1.0), 1);
  EXPECT_EQ(bins_per_cell(64, 1.0 / kPi, 256), 0);
}

TEST(McZn, FullIntervalIsExact) {
  const auto r = mc_zn(make_kernel(2.0), 64, 1.0, 2000, 5, 100);
  EXPECT_NEAR(r.corr_hat, 1.0, 1e-12);
  EXPECT_TRUE(r.corr_ci.contains(1.0, 1e-12));
}

TEST(McZn, BracketsQuadratureAndIsReproducible) {
  const auto k = make_kernel(2.0);
  const auto z = zn_stats(k, 64, 0.25);
  const auto a = mc_zn(k, 64, 0.25, 20000, 11, 200);
  EXPECT_NEAR(a.corr_exact, z.corr, 1e-6);
  EXPECT_NEAR(a.var_exact, z.var_Zn, 1e-6 * z.var_Zn);
  EXPECT_TRUE(a.corr_ci.contains(z.corr)) << a.corr_ci.lo << " " << a.corr_ci.hi << " " << z.corr;
  EXPECT_TRUE(a.var_ci.contains(z.var_Zn));
  const auto b = mc_zn(k, 64, 0.25, 20000, 11, 200);
  EXPECT_EQ(a.corr_hat, b.corr_hat);
  EXPECT_EQ(a.corr_ci.lo, b.corr_ci.lo);
}

TEST(McZn, RejectsBadInput) {
  const auto k = make_kernel(2.0);
  EXPECT_THROW(mc_zn(k, 64, 0.0, 100, 1), ParameterError);
  EXPECT_THROW(mc_zn(k, 64, 0.5, 1, 1), ParameterError);
  EXPECT_THROW(mc_zn(k, 64, 1.0 / kPi, 100, 1, 10, 256), ParameterError);
}

TEST(McZn, Json) {
  nlohmann::json j = mc_zn(make_kernel(2.0), 8, 0.5, 500, 1, 20);
  EXPECT_EQ(j["n"], 8);
  EXPECT_EQ(j["corr_ci95"].size(), 2u);
}
