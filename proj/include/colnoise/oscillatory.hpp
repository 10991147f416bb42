#pragma once

// Fourier-type moments of the model singularity
//
//     f(t) = 1 / (t ln^alpha(1/t)),      0 < t < 1,
//
// i.e.  S_j(lambda; a, b) = int_a^b e^{i lambda t} t^j f(t) dt,   j in {0, 1}.
//
// Two routes:
//   * few oscillations (lambda * b small): substitute t = e^{-u}; the
//     integrand e^{i lambda e^{-u}} e^{-j u} u^{-alpha} is smooth and decays
//     algebraically, so the far tail is taken in closed form.
//   * many oscillations: f continues analytically to the quarter plane
//     {Re t > 0, Im t > 0} (no zero of ln(1/t) and no branch cut there), so
//     int_a^b = V(a) - V(b) with V(c) the integral up the vertical ray
//     c + i[0, inf). Along the rays e^{i lambda t} decays like e^{-lambda y}
//     and the cost no longer depends on lambda. The ray from 0 becomes, with
//     y = e^{-u},  int e^{-lambda e^{-u}} (i e^{-u})^j (u - i pi/2)^{-alpha} du.

#include <cmath>
#include <complex>

#include "colnoise/error.hpp"
#include "colnoise/quadrature.hpp"

namespace colnoise::detail {

/// Analytic continuation of 1/(t ln^alpha(1/t)) with principal branches.
inline cplx log_kernel(double alpha, cplx t) {
  const cplx L = -std::log(t);
  return 1.0 / (t * std::pow(L, alpha));
}

inline double log_kernel(double alpha, double t) {
  const double L = -std::log(t);
  return 1.0 / (t * std::pow(L, alpha));
}

struct SingularOptions {
  double rel_tol = 1e-12;
  /// Route switch: contour when lambda * b exceeds this many radians.
  double contour_phase = 24.0;
};

namespace singular {

inline cplx pow_c(cplx z, double p) { return std::pow(z, p); }

// int_U^inf u^{-alpha} e^{-j u} (...) tails for the real-axis route, first
// order in lambda e^{-U} (which is below e^{-50} by construction).
inline cplx real_route(double alpha, int j, double lambda, double a, double b,
                       const SingularOptions& o) {
  const double u_lo = -std::log(b);
  auto h = [=](double u) -> cplx {
    const double decay = (j == 0) ? 1.0 : std::exp(-u);
    const double amp = decay * std::pow(u, -alpha);
    const double ph = lambda * std::exp(-u);
    return amp * cplx(std::cos(ph), std::sin(ph));
  };
  const double scale = (j == 0) ? std::pow(u_lo, 1.0 - alpha) / (alpha - 1.0)
                                : std::exp(-u_lo) * std::pow(u_lo, -alpha);
  AdaptiveOptions opt;
  opt.rel_tol = o.rel_tol;
  opt.abs_tol = 1e-16 * scale;

  if (a > 0.0) {
    const double u_hi = -std::log(a);
    if (lambda == 0.0 && j == 0)
      return (std::pow(u_lo, 1.0 - alpha) - std::pow(u_hi, 1.0 - alpha)) / (alpha - 1.0);
    return integrate(h, u_lo, u_hi, opt).value;
  }
  if (lambda == 0.0 && j == 0) return std::pow(u_lo, 1.0 - alpha) / (alpha - 1.0);

  const double U = std::max(u_lo, std::log(std::max(lambda, 1.0))) + 50.0;
  const double brk[] = {u_lo + 1.0, u_lo + 4.0, u_lo + 12.0};
  cplx body = integrate(h, u_lo, U, opt, brk).value;
  cplx tail;
  if (j == 0) {
    tail = std::pow(U, 1.0 - alpha) / (alpha - 1.0) +
           cplx(0.0, lambda * std::exp(-U) * std::pow(U, -alpha));
  } else {
    tail = std::exp(-U) * std::pow(U, -alpha) / (1.0 + alpha / U);
  }
  return body + tail;
}

// Ray from the origin: int_0^{i inf} e^{i lambda t} t^j f(t) dt.
inline cplx ray_from_origin(double alpha, int j, double lambda, const SingularOptions& o) {
  const double lnl = std::log(lambda);
  const double u1 = lnl - 6.0, U = lnl + 50.0;
  const cplx shift(0.0, -0.5 * kPi);
  auto h = [=](double u) -> cplx {
    const cplx L = u + shift;
    cplx v = std::exp(-lambda * std::exp(-u)) * pow_c(L, -alpha);
    if (j == 1) v *= cplx(0.0, std::exp(-u));
    return v;
  };
  AdaptiveOptions opt;
  opt.rel_tol = o.rel_tol;
  const double scale = (j == 0) ? std::pow(lnl, 1.0 - alpha) / (alpha - 1.0)
                                : std::pow(lnl, -alpha) / lambda;
  opt.abs_tol = 1e-16 * scale;
  const double brk[] = {lnl - 2.0, lnl, lnl + 2.0, lnl + 8.0, lnl + 20.0};
  cplx body = integrate(h, u1, U, opt, brk).value;
  const cplx LU = U + shift;
  cplx tail;
  if (j == 0) {
    tail = pow_c(LU, 1.0 - alpha) / (alpha - 1.0) - lambda * std::exp(-U) * pow_c(LU, -alpha);
  } else {
    tail = cplx(0.0, std::exp(-U)) * pow_c(LU, -alpha);
  }
  return body + tail;
}

// Ray from c > 0: int_c^{c + i inf} e^{i lambda t} t^j f(t) dt
//   = (i / lambda) e^{i lambda c} int_0^inf e^{-s} g(c + i s / lambda) ds.
inline cplx ray_from_point(double alpha, int j, double lambda, double c,
                           const SingularOptions& o) {
  auto g = [=](double s) -> cplx {
    const cplx t(c, s / lambda);
    cplx v = log_kernel(alpha, t) * std::exp(-s);
    if (j == 1) v *= t;
    return v;
  };
  const double S = 60.0;
  const double lc = lambda * c;
  const double brk[] = {0.01 * lc, 0.1 * lc, lc, 2.0, 8.0, 20.0};
  AdaptiveOptions opt;
  opt.rel_tol = o.rel_tol;
  opt.abs_tol = 1e-16 * std::abs(g(0.0));
  const cplx body = integrate(g, 0.0, S, opt, brk).value;
  const double ph = lambda * c;
  return cplx(0.0, 1.0 / lambda) * cplx(std::cos(ph), std::sin(ph)) * body;
}

}  // namespace singular

/// int_a^b e^{i lambda t} t^j / (t ln^alpha(1/t)) dt for 0 <= a < b < 1, j in {0,1}.
inline cplx log_singular_moment(double alpha, int j, double lambda, double a, double b,
                                const SingularOptions& o = {}) {
  if (!(alpha > 1.0)) throw ParameterError("log_singular_moment: alpha must exceed 1");
  if (j != 0 && j != 1) throw ParameterError("log_singular_moment: j must be 0 or 1");
  if (!(a >= 0.0 && b > a && b < 1.0))
    throw ParameterError("log_singular_moment: need 0 <= a < b < 1");
  if (lambda < 0.0) return std::conj(log_singular_moment(alpha, j, -lambda, a, b, o));
  if (lambda * b <= o.contour_phase) return singular::real_route(alpha, j, lambda, a, b, o);
  const cplx lower = (a > 0.0) ? singular::ray_from_point(alpha, j, lambda, a, o)
                               : singular::ray_from_origin(alpha, j, lambda, o);
  return lower - singular::ray_from_point(alpha, j, lambda, b, o);
}

}  // namespace colnoise::detail
