#pragma once

// Covariance kernel B(t) = 1/(|t| ln^alpha(1/|t|)) near the origin, continued
// beyond eps_cut by a convex decreasing polynomial tail that reaches zero at
// t_zero. The production tail is the tangent line; a C^1 quadratic tail exists
// for continuation-independence checks.
//
// Fourier convention: f^(lambda) = int e^{i lambda t} f(t) dt.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "colnoise/error.hpp"
#include "colnoise/oscillatory.hpp"
#include "colnoise/quadrature.hpp"

namespace colnoise {

enum class TailShape { tangent, quadratic };

struct KernelSpec {
  double alpha = 2.0;
  double eps_cut = 0.0;
  double slope_at_cut = 0.0;  // B'(eps_cut)
  double t_zero = 0.0;
  double support_T = 1.0;
  TailShape tail = TailShape::tangent;
  // Tail polynomial in s = t - eps_cut, valid on [eps_cut, t_zero].
  std::array<double, 3> tail_poly{};

  double value_at_cut() const { return tail_poly[0]; }
};

inline double default_eps_cut(double alpha) { return std::min(std::exp(-(alpha + 2.0)), 0.05); }

namespace detail {

inline double closed_form_B(double alpha, double t) { return log_kernel(alpha, t); }

inline double closed_form_dB(double alpha, double t) {
  const double L = -std::log(t);
  return -(L - alpha) / (t * t * std::pow(L, alpha + 1.0));
}

inline double eval_B_nonneg(const KernelSpec& k, double t) {
  if (t <= k.eps_cut) return closed_form_B(k.alpha, t);
  if (t >= k.t_zero) return 0.0;
  const double s = t - k.eps_cut;
  const auto& c = k.tail_poly;
  return std::max(0.0, c[0] + s * (c[1] + s * c[2]));
}

struct ShapeFlags {
  bool positive = true, decreasing = true, convex = true;
};

// Finite-difference shape test of a callable on a strictly increasing grid.
template <class F>
ShapeFlags grid_shape(F&& B, const std::vector<double>& t, double tol = 1e-10) {
  ShapeFlags out;
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    v[i] = B(t[i]);
    if (!(v[i] > 0.0)) out.positive = false;
  }
  double prev_slope = -INFINITY;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dv = v[i + 1] - v[i];
    if (dv > tol * std::max(1.0, std::abs(v[i]))) out.decreasing = false;
    const double slope = dv / (t[i + 1] - t[i]);
    if (i > 0 && slope < prev_slope - tol * std::max(1.0, std::abs(prev_slope))) out.convex = false;
    prev_slope = slope;
  }
  return out;
}

// Grid that resolves both the singular end (log spaced) and the tail (linear).
inline std::vector<double> shape_grid(const KernelSpec& k, int n_grid) {
  std::vector<double> t;
  const int n_log = n_grid / 2, n_lin = n_grid - n_log;
  const double lo = k.eps_cut * 1e-12;
  for (int i = 0; i < n_log; ++i)
    t.push_back(lo * std::pow(k.eps_cut / lo, static_cast<double>(i) / n_log));
  for (int i = 0; i < n_lin; ++i)
    t.push_back(k.eps_cut + (k.t_zero - k.eps_cut) * i / static_cast<double>(n_lin));
  return t;
}

}  // namespace detail

/// Builds the kernel. eps_cut <= 0 selects default_eps_cut(alpha).
inline KernelSpec make_kernel(double alpha, double eps_cut = 0.0, double T = 1.0,
                              TailShape tail = TailShape::tangent) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw ParameterError("make_kernel: alpha must exceed 1");
  if (!(T > 0.0)) throw ParameterError("make_kernel: T must be positive");
  if (eps_cut <= 0.0) eps_cut = default_eps_cut(alpha);
  if (!(eps_cut < std::exp(-alpha)))
    throw ShapeError("make_kernel: eps_cut must be below e^-alpha, where 1/(t ln^alpha(1/t)) decreases");

  KernelSpec k;
  k.alpha = alpha;
  k.eps_cut = eps_cut;
  k.support_T = T;
  k.tail = tail;
  const double B0 = detail::closed_form_B(alpha, eps_cut);
  const double dB = detail::closed_form_dB(alpha, eps_cut);
  k.slope_at_cut = dB;
  if (tail == TailShape::tangent) {
    k.t_zero = eps_cut + B0 / -dB;
    k.tail_poly = {B0, dB, 0.0};
  } else {
    const double delta = 2.0 * B0 / -dB;
    k.t_zero = eps_cut + delta;
    k.tail_poly = {B0, -2.0 * B0 / delta, B0 / (delta * delta)};
  }

  auto grid = detail::shape_grid(k, 10000);
  auto flags = detail::grid_shape([&](double t) { return detail::eval_B_nonneg(k, t); }, grid);
  if (!flags.positive || !flags.decreasing || !flags.convex)
    throw ShapeError("make_kernel: kernel fails the positive/decreasing/convex grid check");
  return k;
}

/// B(t), even in t. Throws DomainError at t = 0.
inline double eval_B(const KernelSpec& k, double t) {
  if (t == 0.0) throw DomainError("eval_B: kernel is singular at t = 0");
  return detail::eval_B_nonneg(k, std::abs(t));
}

/// F(x) = int_0^x B(t) dt for x >= 0.
inline double cumulative_B(const KernelSpec& k, double x) {
  if (x <= 0.0) return 0.0;
  const double e = std::min(x, k.eps_cut);
  double v = std::pow(-std::log(e), 1.0 - k.alpha) / (k.alpha - 1.0);
  if (x > k.eps_cut) {
    const double s = std::min(x, k.t_zero) - k.eps_cut;
    const auto& c = k.tail_poly;
    v += s * (c[0] + s * (c[1] / 2.0 + s * c[2] / 3.0));
  }
  return v;
}

/// G(x) = int_0^x t B(t) dt for x >= 0.
inline double first_moment_B(const KernelSpec& k, double x) {
  if (x <= 0.0) return 0.0;
  const double e = std::min(x, k.eps_cut);
  // int_0^e t B dt = int_{ln(1/e)}^inf e^{-u} u^{-alpha} du
  const double Le = -std::log(e);
  const double a = k.alpha;
  auto h = [&](double u) { return std::exp(-(u - Le)) * std::pow(u, -a); };
  AdaptiveOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-14;
  const double brk[] = {Le + 1.0, Le + 5.0, Le + 15.0};
  double v = std::exp(-Le) * integrate(h, Le, Le + 60.0, opt, brk).value;
  if (x > k.eps_cut) {
    const double s = std::min(x, k.t_zero) - k.eps_cut;
    const auto& c = k.tail_poly;
    // int_0^s (eps + s') P(s') ds'
    const double P0 = s * (c[0] + s * (c[1] / 2.0 + s * c[2] / 3.0));
    const double P1 = s * s * (c[0] / 2.0 + s * (c[1] / 3.0 + s * c[2] / 4.0));
    v += k.eps_cut * P0 + P1;
  }
  return v;
}

/// Affine weight w(t) = value + slope (t - anchor).
struct Affine {
  double anchor = 0.0, value = 0.0, slope = 0.0;
  double operator()(double t) const { return value + slope * (t - anchor); }
};

/// int_a^b w(t) B(t) dt for any real a < b (B even, singular at 0).
inline double integrate_affine_B(const KernelSpec& k, double a, double b, Affine w) {
  if (!(b > a)) return 0.0;
  if (a < 0.0 && b > 0.0) return integrate_affine_B(k, a, 0.0, w) + integrate_affine_B(k, 0.0, b, w);
  if (b <= 0.0) return integrate_affine_B(k, -b, -a, Affine{-w.anchor, w.value, -w.slope});
  b = std::min(b, k.t_zero);
  if (!(b > a)) return 0.0;

  const double alpha = k.alpha;
  double total = 0.0;
  if (a < k.eps_cut) {
    const double e = std::min(b, k.eps_cut);
    if (a == 0.0) {
      const double w0 = w(0.0);
      total += w0 * cumulative_B(k, e);
      if (w.slope != 0.0) total += w.slope * first_moment_B(k, e);
    } else if (e / a <= 2.0) {
      AdaptiveOptions opt;
      opt.abs_tol = 0.0;
      opt.rel_tol = 1e-13;
      total += integrate([&](double t) { return w(t) * detail::closed_form_B(alpha, t); }, a, e, opt).value;
    } else {
      const double u_lo = -std::log(e), u_hi = -std::log(a);
      AdaptiveOptions opt;
      opt.abs_tol = 0.0;
      opt.rel_tol = 1e-13;
      total += integrate([&](double u) { return w(std::exp(-u)) * std::pow(u, -alpha); }, u_lo, u_hi,
                         opt).value;
    }
  }
  if (b > k.eps_cut) {
    const double lo = std::max(a, k.eps_cut);
    const auto& c = k.tail_poly;
    total += gauss_legendre<4>(
        [&](double t) {
          const double s = t - k.eps_cut;
          return w(t) * (c[0] + s * (c[1] + s * c[2]));
        },
        lo, b);
  }
  return total;
}

/// Double integral of B(s - t) over s in (a1, b1), t in (a2, b2).
inline double overlap_integral(const KernelSpec& k, double a1, double b1, double a2, double b2) {
  if (!(b1 > a1) || !(b2 > a2)) return 0.0;
  // Density of tau = s - t is the trapezoid with knots below.
  const double k1 = a1 - b2, k4 = b1 - a2;
  const double k2 = std::min(a1 - a2, b1 - b2), k3 = std::max(a1 - a2, b1 - b2);
  const double top = std::min(b1 - a1, b2 - a2);
  if (k1 >= k.t_zero || k4 <= -k.t_zero) return 0.0;
  double v = integrate_affine_B(k, k1, k2, Affine{k1, 0.0, 1.0});
  v += integrate_affine_B(k, k2, k3, Affine{k2, top, 0.0});
  v += integrate_affine_B(k, k3, k4, Affine{k4, 0.0, -1.0});
  return v;
}

namespace detail {

// int_a^b e^{i lambda t} P(t - ref) dt for a polynomial P (low degree).
inline cplx fourier_poly(const std::vector<double>& P, double ref, double lambda, double a, double b) {
  auto eval = [&](double s) {
    double v = 0.0;
    for (std::size_t m = P.size(); m-- > 0;) v = v * s + P[m];
    return v;
  };
  if (std::abs(lambda) * (b - a) <= 4.0) {
    return gauss_legendre<20>(
        [&](double t) { return eval(t - ref) * cplx(std::cos(lambda * t), std::sin(lambda * t)); }, a, b);
  }
  // Repeated integration by parts: antiderivative e^{i l t} sum (-1)^k P^(k) / (i l)^{k+1}.
  auto anti = [&](double t) {
    std::vector<double> d = P;
    const cplx il(0.0, lambda);
    cplx acc = 0.0, denom = il;
    double sign = 1.0;
    while (!d.empty()) {
      double v = 0.0;
      for (std::size_t m = d.size(); m-- > 0;) v = v * (t - ref) + d[m];
      acc += sign * v / denom;
      std::vector<double> nd;
      for (std::size_t m = 1; m < d.size(); ++m) nd.push_back(d[m] * static_cast<double>(m));
      d = std::move(nd);
      denom *= il;
      sign = -sign;
    }
    return acc * cplx(std::cos(lambda * t), std::sin(lambda * t));
  };
  return anti(b) - anti(a);
}

}  // namespace detail

/// int_a^b e^{i lambda t} (p + q t) B(t) dt for 0 <= a < b (b is clipped to t_zero).
inline cplx fourier_moment(const KernelSpec& k, double lambda, double a, double b, double p = 1.0,
                           double q = 0.0, const detail::SingularOptions& o = {}) {
  if (!(a >= 0.0)) throw ParameterError("fourier_moment: need a >= 0");
  b = std::min(b, k.t_zero);
  if (!(b > a)) return 0.0;
  cplx total = 0.0;
  if (a < k.eps_cut) {
    const double e = std::min(b, k.eps_cut);
    if (p != 0.0) total += p * detail::log_singular_moment(k.alpha, 0, lambda, a, e, o);
    if (q != 0.0) total += q * detail::log_singular_moment(k.alpha, 1, lambda, a, e, o);
  }
  if (b > k.eps_cut) {
    const auto& c = k.tail_poly;
    const double w0 = p + q * k.eps_cut;
    // (w0 + q s)(c0 + c1 s + c2 s^2)
    std::vector<double> P = {w0 * c[0], w0 * c[1] + q * c[0], w0 * c[2] + q * c[1], q * c[2]};
    while (P.size() > 1 && P.back() == 0.0) P.pop_back();
    total += detail::fourier_poly(P, k.eps_cut, lambda, std::max(a, k.eps_cut), b);
  }
  return total;
}

/// B^(lambda) = 2 int_0^{t_zero} cos(lambda t) B(t) dt.
inline double spectral_density(const KernelSpec& k, double lambda) {
  if (!std::isfinite(lambda)) throw ParameterError("spectral_density: lambda must be finite");
  return 2.0 * fourier_moment(k, std::abs(lambda), 0.0, k.t_zero).real();
}

struct ShapeReport {
  bool positive = false, decreasing = false, convex = false;
  double min_spectral = 0.0;
  double argmin_lambda = 0.0;
  bool spectral_nonnegative = false;
};

/// Standard lambda probe set {0} U {10^{j/8}: j = 0..64}.
inline std::vector<double> positivity_lambda_grid() {
  std::vector<double> g{0.0};
  for (int j = 0; j <= 64; ++j) g.push_back(std::pow(10.0, j / 8.0));
  return g;
}

/// Shape witnesses for an arbitrary kernel callable on (0, t_end).
template <class F, class Fhat>
ShapeReport shape_report_generic(F&& B, Fhat&& Bhat, double t_end, int n_grid) {
  if (n_grid < 100) throw ParameterError("shape_report: n_grid must be at least 100");
  std::vector<double> t;
  for (int i = 1; i <= n_grid; ++i) t.push_back(t_end * i / (n_grid + 1.0));
  auto f = detail::grid_shape(B, t);
  ShapeReport r;
  r.positive = f.positive;
  r.decreasing = f.decreasing;
  r.convex = f.convex;
  r.min_spectral = INFINITY;
  for (double l : positivity_lambda_grid()) {
    const double v = Bhat(l);
    if (v < r.min_spectral) {
      r.min_spectral = v;
      r.argmin_lambda = l;
    }
  }
  r.spectral_nonnegative = r.min_spectral >= -1e-9;
  return r;
}

inline ShapeReport shape_report(const KernelSpec& k, int n_grid) {
  if (n_grid < 100) throw ParameterError("shape_report: n_grid must be at least 100");
  auto grid = detail::shape_grid(k, n_grid);
  auto f = detail::grid_shape([&](double t) { return eval_B(k, t); }, grid);
  auto r = shape_report_generic([&](double t) { return eval_B(k, t); },
                                [&](double l) { return spectral_density(k, l); }, k.t_zero, n_grid);
  r.positive = r.positive && f.positive;
  r.decreasing = r.decreasing && f.decreasing;
  r.convex = r.convex && f.convex;
  return r;
}

inline void to_json(nlohmann::json& j, const KernelSpec& k) {
  j = {{"alpha", k.alpha},
       {"eps_cut", k.eps_cut},
       {"t_zero", k.t_zero},
       {"support_T", k.support_T},
       {"slope_at_cut", k.slope_at_cut},
       {"tail", k.tail == TailShape::tangent ? "tangent" : "quadratic"}};
}

inline void to_json(nlohmann::json& j, const ShapeReport& r) {
  j = {{"positive", r.positive},
       {"decreasing", r.decreasing},
       {"convex", r.convex},
       {"min_spectral", r.min_spectral},
       {"argmin_lambda", r.argmin_lambda},
       {"spectral_nonnegative", r.spectral_nonnegative}};
}

}  // namespace colnoise
