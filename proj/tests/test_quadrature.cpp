#include <gtest/gtest.h>

#include <cmath>

#include "colnoise/error.hpp"
#include "colnoise/quadrature.hpp"

using namespace colnoise;

TEST(Rules, WeightsIntegrateConstants) {
  const auto& g = detail::gauss_rule<20>();
  double sg = 0.0;
  for (double w : g.w) sg += w;
  EXPECT_EQ(g.x.size(), 20u);
  EXPECT_NEAR(sg, 2.0, 1e-14);

  const auto& k = detail::kronrod_rule();
  double sk = 0.0, sg10 = 0.0;
  int gauss_nodes = 0;
  for (std::size_t i = 0; i < k.x.size(); ++i) {
    sk += k.wk[i];
    sg10 += k.wg[i];
    gauss_nodes += k.wg[i] != 0.0;
  }
  EXPECT_EQ(k.x.size(), 21u);
  EXPECT_EQ(gauss_nodes, 10);
  EXPECT_NEAR(sk, 2.0, 1e-14);
  EXPECT_NEAR(sg10, 2.0, 1e-14);
}

TEST(GaussLegendre, ExactForPolynomialsOfDegree39) {
  auto p = [](double x) { return std::pow(x, 39) + 3.0 * std::pow(x, 38); };
  const double exact = (std::pow(2.0, 40) - 1.0) / 40.0 + 3.0 * (std::pow(2.0, 39) - 1.0) / 39.0;
  EXPECT_NEAR(gauss_legendre(p, 1.0, 2.0) / exact, 1.0, 1e-13);
}

TEST(GaussLegendre, PanelsConverge) {
  auto f = [](double x) { return std::cos(40.0 * x); };
  EXPECT_NEAR(gauss_legendre(f, 0.0, 3.0, 8), std::sin(120.0) / 40.0, 1e-13);
}

TEST(Adaptive, SmoothAndComplex) {
  auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, std::expm1(1.0), 1e-14);
  auto c = integrate([](double x) { return cplx(std::cos(x), std::sin(x)); }, 0.0, kPi);
  EXPECT_NEAR(c.value.real(), 0.0, 1e-14);
  EXPECT_NEAR(c.value.imag(), 2.0, 1e-13);
}

TEST(Adaptive, EndpointSingularity) {
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  auto l = integrate([](double x) { return std::log(x); }, 0.0, 1.0);
  EXPECT_NEAR(l.value, -1.0, 1e-11);
}

TEST(Adaptive, BreakpointsHandleKinks) {
  const double brk[] = {0.3};
  auto r = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, {}, brk);
  EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-15);
  EXPECT_EQ(r.intervals, 2);
}

TEST(Adaptive, EmptyRangeIsZero) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
}

TEST(Adaptive, ThrowsWhenBudgetExhausted) {
  AdaptiveOptions o;
  o.max_intervals = 5;
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / x) / x; }, 1e-6, 1.0, o), NumericError);
  o.throw_on_failure = false;
  auto r = integrate([](double x) { return std::sin(1.0 / x) / x; }, 1e-6, 1.0, o);
  EXPECT_GT(r.error, 0.0);
}

TEST(Adaptive, Deterministic) {
  auto f = [](double x) { return std::sin(50.0 * x) * std::exp(-x); };
  auto a = integrate(f, 0.0, 5.0), b = integrate(f, 0.0, 5.0);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.intervals, b.intervals);
}
