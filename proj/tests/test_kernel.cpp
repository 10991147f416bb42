#include <gtest/gtest.h>

#include <cmath>

#include "colnoise/kernel.hpp"
#include "oracle_values.hpp"

using namespace colnoise;

TEST(MakeKernel, DefaultsForAlpha2) {
  const auto k = make_kernel(2.0);
  EXPECT_DOUBLE_EQ(k.eps_cut, std::exp(-4.0));
  EXPECT_NEAR(k.t_zero, 0.054946916666, 1e-11);
  EXPECT_GT(k.t_zero, k.eps_cut);
  EXPECT_LT(k.slope_at_cut, 0.0);
}

TEST(MakeKernel, RejectsBadParameters) {
  EXPECT_THROW(make_kernel(1.0), ParameterError);
  EXPECT_THROW(make_kernel(0.5), ParameterError);
  EXPECT_THROW(make_kernel(NAN), ParameterError);
  EXPECT_THROW(make_kernel(2.0, std::exp(-2.0)), ShapeError);
  EXPECT_THROW(make_kernel(2.0, 0.2), ShapeError);
  EXPECT_THROW(make_kernel(2.0, 0.0, -1.0), ParameterError);
}

TEST(EvalB, MatchesClosedFormBelowCut) {
  for (double alpha : {1.5, 2.0, 3.0}) {
    const auto k = make_kernel(alpha);
    for (double t : {1e-300, 1e-100, 1e-20, 1e-6, 0.5 * k.eps_cut, k.eps_cut}) {
      const double L = std::log(1.0 / t);
      EXPECT_NEAR(eval_B(k, t) * t * std::pow(L, alpha), 1.0, 1e-14) << alpha << " " << t;
    }
  }
  const auto k = make_kernel(2.0);
  EXPECT_NEAR(eval_B(k, std::exp(-5.0)), std::exp(5.0) / 25.0, 1e-12);
}

TEST(EvalB, EvenContinuousAndCompact) {
  const auto k = make_kernel(2.0);
  for (double t : {1e-5, 0.01, 0.03, 0.05})
    EXPECT_EQ(eval_B(k, t), eval_B(k, -t));
  EXPECT_NEAR(eval_B(k, k.eps_cut * (1 + 1e-12)), eval_B(k, k.eps_cut), 1e-8);
  EXPECT_EQ(eval_B(k, k.t_zero), 0.0);
  EXPECT_EQ(eval_B(k, k.t_zero + 1.0), 0.0);
  EXPECT_THROW(eval_B(k, 0.0), DomainError);
}

TEST(EvalB, QuadraticTailIsC1AndConvex) {
  const auto k = make_kernel(2.0, 0.0, 1.0, TailShape::quadratic);
  const double h = 1e-7;
  const double left = (eval_B(k, k.eps_cut) - eval_B(k, k.eps_cut - h)) / h;
  const double right = (eval_B(k, k.eps_cut + h) - eval_B(k, k.eps_cut)) / h;
  EXPECT_NEAR(right / left, 1.0, 1e-4);
  EXPECT_GT(k.tail_poly[2], 0.0);
  // Tail and its slope vanish together at t_zero.
  EXPECT_NEAR(eval_B(k, k.t_zero - 1e-6) / eval_B(k, k.eps_cut), 0.0, 1e-6);
}

TEST(Shape, ProductionKernelsPassAllWitnesses) {
  for (double alpha : {1.5, 2.0, 2.5, 3.0}) {
    const auto r = shape_report(make_kernel(alpha), 1000);
    EXPECT_TRUE(r.positive && r.decreasing && r.convex) << alpha;
    EXPECT_TRUE(r.spectral_nonnegative) << alpha << " min " << r.min_spectral;
  }
}

TEST(Shape, NonConvexControlIsFlagged) {
  // Concave on (0, 1): 1 - t^2, whose transform changes sign.
  auto B = [](double t) { return 1.0 - t * t; };
  auto Bhat = [](double l) {
    if (l == 0.0) return 4.0 / 3.0;
    return 4.0 * (std::sin(l) - l * std::cos(l)) / (l * l * l);
  };
  const auto r = shape_report_generic(B, Bhat, 1.0, 500);
  EXPECT_TRUE(r.positive);
  EXPECT_TRUE(r.decreasing);
  EXPECT_FALSE(r.convex);
  EXPECT_FALSE(r.spectral_nonnegative);
}

TEST(Shape, RejectsTinyGrid) { EXPECT_THROW(shape_report(make_kernel(2.0), 10), ParameterError); }

TEST(SpectralDensity, FrozenOracleValues) {
  const auto k2 = make_kernel(2.0), k3 = make_kernel(3.0);
  EXPECT_NEAR(spectral_density(k2, 0.0), oracle::kBhatAlpha2_0, 1e-11);
  EXPECT_NEAR(spectral_density(k2, 1.0) / oracle::kBhatAlpha2_1, 1.0, 1e-10);
  EXPECT_NEAR(spectral_density(k2, 100.0) / oracle::kBhatAlpha2_100, 1.0, 1e-10);
  EXPECT_NEAR(spectral_density(k2, 1e4) / oracle::kBhatAlpha2_10000, 1.0, 1e-10);
  EXPECT_NEAR(spectral_density(k3, 10.0) / oracle::kBhatAlpha3_10, 1.0, 1e-10);
}

TEST(SpectralDensity, EvenAndSlowlyDecaying) {
  const auto k = make_kernel(2.0);
  EXPECT_NEAR(spectral_density(k, -37.0), spectral_density(k, 37.0), 1e-15);
  // B^(l) ~ 2 / ((alpha-1) ln^{alpha-1} l): the decade ratio tracks ln ratio.
  const double r = spectral_density(k, 1e4) / spectral_density(k, 1e6);
  EXPECT_NEAR(r, std::log(1e6) / std::log(1e4), 0.1);
}

TEST(Integrals, CumulativeAndFirstMoment) {
  const auto k = make_kernel(2.0);
  EXPECT_NEAR(2.0 * cumulative_B(k, k.t_zero), oracle::kBhatAlpha2_0, 1e-13);
  EXPECT_NEAR(first_moment_B(k, 1.0) / oracle::kFirstMomentAlpha2, 1.0, 1e-12);
  EXPECT_EQ(cumulative_B(k, -1.0), 0.0);
  EXPECT_NEAR(cumulative_B(k, 1e-10), 1.0 / std::log(1e10), 1e-15);
}

TEST(Integrals, OverlapMatchesTwoDimensionalOracle) {
  const auto k = make_kernel(2.0);
  EXPECT_NEAR(overlap_integral(k, 0.1, 0.2, 0.15, 0.3) / oracle::kOverlapA, 1.0, 1e-10);
  EXPECT_NEAR(overlap_integral(k, 0.1, 0.12, 0.13, 0.2) / oracle::kOverlapB, 1.0, 1e-10);
  EXPECT_NEAR(overlap_integral(k, 0.15, 0.3, 0.1, 0.2), overlap_integral(k, 0.1, 0.2, 0.15, 0.3), 1e-15);
  EXPECT_NEAR(overlap_integral(k, 0.0, 1.0, 0.0, 1.0), oracle::kNormX0Alpha2, 1e-11);
  EXPECT_NEAR(overlap_integral(make_kernel(1.5), 0.0, 1.0, 0.0, 1.0), oracle::kNormX0Alpha1p5, 1e-10);
  EXPECT_EQ(overlap_integral(k, 0.0, 0.1, 0.5, 0.6), 0.0);
}

TEST(SingularMoment, FrozenOracleValues) {
  const cplx m0 = detail::log_singular_moment(2.0, 0, 500.0, 0.0, 0.05);
  const cplx m1 = detail::log_singular_moment(2.0, 1, 500.0, 0.0, 0.05);
  EXPECT_NEAR(m0.real(), oracle::kSingularMoment0Re, 1e-12);
  EXPECT_NEAR(m0.imag(), oracle::kSingularMoment0Im, 1e-12);
  EXPECT_NEAR(m1.real(), oracle::kSingularMoment1Re, 1e-15);
  EXPECT_NEAR(m1.imag(), oracle::kSingularMoment1Im, 1e-15);
}

TEST(SingularMoment, RoutesAgreeAcrossTheSwitch) {
  detail::SingularOptions real_only, contour;
  real_only.contour_phase = 1e300;
  contour.contour_phase = 0.0;
  for (double alpha : {1.5, 2.0, 3.0})
    for (int j : {0, 1})
      for (double lambda : {700.0, 2e3, 5e3}) {
        const cplx a = detail::log_singular_moment(alpha, j, lambda, 0.0, 0.04, real_only);
        const cplx b = detail::log_singular_moment(alpha, j, lambda, 0.0, 0.04, contour);
        EXPECT_LT(std::abs(a - b), 1e-11 * std::max(1.0, std::abs(a)) + 1e-14)
            << alpha << " " << j << " " << lambda;
      }
}

TEST(SingularMoment, NegativeFrequencyConjugates) {
  const cplx p = detail::log_singular_moment(2.0, 0, 321.0, 0.0, 0.03);
  const cplx m = detail::log_singular_moment(2.0, 0, -321.0, 0.0, 0.03);
  EXPECT_NEAR(std::abs(p - std::conj(m)), 0.0, 1e-15);
}

TEST(Json, KernelSpecRoundTripsKeys) {
  nlohmann::json j = make_kernel(2.0);
  EXPECT_EQ(j["alpha"], 2.0);
  EXPECT_TRUE(j.contains("t_zero"));
  EXPECT_TRUE(j.contains("eps_cut"));
}
