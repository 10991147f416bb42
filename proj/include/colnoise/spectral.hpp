#pragma once

// Half-line Fourier transforms of the jump-free corrections b1, b2 of B,
//
//   b1(t) = B(t) - B(T)(T - t)/T                 on (0, T]
//         = B(T)(2T - t)/T                       on [T, 2T],
//   b2(t) = B(t) - B(t + T) - (B(T) - B(2T))(T - t)/T   on (0, T]
//         = (B(T) - B(2T))(2T - t)/T                    on [T, 2T],
//
// both zero elsewhere, and the check of their large-lambda behaviour against
// 1/((alpha-1) ln^{alpha-1} lambda) and its derivative -1/(lambda ln^alpha lambda).

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "colnoise/error.hpp"
#include "colnoise/kernel.hpp"

namespace colnoise {

enum class CorrectionKind { b1, b2 };

struct CorrectedKernel {
  CorrectionKind kind = CorrectionKind::b1;
  KernelSpec base;
  double T = 1.0;
  double jump = 0.0;  // B(T) for b1, B(T) - B(2T) for b2

  /// b(t) for t > 0.
  double operator()(double t) const {
    if (!(t > 0.0)) throw DomainError("corrected kernel is defined on (0, inf)");
    if (t <= T) {
      double v = eval_B(base, t) - jump * (T - t) / T;
      if (kind == CorrectionKind::b2) v -= eval_B(base, t + T);
      return v;
    }
    if (t <= 2.0 * T) return jump * (2.0 * T - t) / T;
    return 0.0;
  }
};

inline CorrectedKernel make_corrected(const KernelSpec& k, double T, CorrectionKind kind) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ParameterError("make_corrected: T must be positive");
  CorrectedKernel b;
  b.kind = kind;
  b.base = k;
  b.T = T;
  b.jump = eval_B(k, T);
  if (kind == CorrectionKind::b2) b.jump -= eval_B(k, 2.0 * T);
  return b;
}

namespace detail {

inline cplx expi(double x) { return {std::cos(x), std::sin(x)}; }

// int_0^inf e^{i lambda t} t^j b(t) dt, j in {0, 1}, any real lambda.
inline cplx corrected_moment(const CorrectedKernel& b, double lambda, int j) {
  const KernelSpec& k = b.base;
  const double T = b.T;
  const double p = (j == 0) ? 1.0 : 0.0, q = (j == 0) ? 0.0 : 1.0;
  cplx v = fourier_moment(k, lambda, 0.0, T, p, q);
  if (b.kind == CorrectionKind::b2 && T < k.t_zero) {
    // int_0^T e^{i l t} t^j B(t + T) dt = e^{-i l T} int_T^{2T} e^{i l s} (s - T)^j B(s) ds
    const double pp = (j == 0) ? 1.0 : -T;
    v -= expi(-lambda * T) * fourier_moment(k, lambda, T, 2.0 * T, pp, q);
  }
  if (b.jump != 0.0) {
    // -jump (T - t)/T t^j on (0, T], jump (2T - t)/T t^j on [T, 2T], as polynomials in t
    const double c = b.jump / T;
    std::vector<double> left = (j == 0) ? std::vector<double>{-c * T, c} : std::vector<double>{0.0, -c * T, c};
    std::vector<double> right =
        (j == 0) ? std::vector<double>{2.0 * c * T, -c} : std::vector<double>{0.0, 2.0 * c * T, -c};
    v += fourier_poly(left, 0.0, lambda, 0.0, T);
    v += fourier_poly(right, 0.0, lambda, T, 2.0 * T);
  }
  return v;
}

/// b^(lambda) for any real lambda (b^(-lambda) = conj b^(lambda)).
inline cplx fourier_halfline_signed(const CorrectedKernel& b, double lambda) {
  return corrected_moment(b, lambda, 0);
}

}  // namespace detail

/// b^(lambda) = int_0^inf e^{i lambda t} b(t) dt, lambda > 0.
inline cplx fourier_halfline(const CorrectedKernel& b, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("fourier_halfline: lambda must be positive and finite");
  return detail::corrected_moment(b, lambda, 0);
}

/// d b^ / d lambda = i int_0^inf t e^{i lambda t} b(t) dt, lambda > 0.
inline cplx fourier_halfline_derivative(const CorrectedKernel& b, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ParameterError("fourier_halfline_derivative: lambda must be positive and finite");
  return cplx(0.0, 1.0) * detail::corrected_moment(b, lambda, 1);
}

/// int_0^inf |b(t)| dt, the trivial bound on |b^|.
inline double l1_norm(const CorrectedKernel& b) {
  const KernelSpec& k = b.base;
  auto f = [&](double t) { return std::abs(b(t)); };
  double total = 0.0;
  const double T = b.T;
  // Singular part: |b| = b there because B dominates near 0.
  const double t1 = std::min({k.eps_cut, T}) * 1e-3;
  total += cumulative_B(k, t1) - b.jump * (t1 - t1 * t1 / (2.0 * T));
  if (b.kind == CorrectionKind::b2) total -= cumulative_B(k, t1 + T) - cumulative_B(k, T);
  AdaptiveOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-12;
  const double brk[] = {k.eps_cut, k.t_zero, T - k.t_zero, T};
  total += integrate(f, t1, T, opt, brk).value;
  total += std::abs(b.jump) * T / 2.0;
  return total;
}

struct AsymptoteReport {
  double alpha = 0.0, T = 0.0;
  std::vector<double> lambda, ratio_value, ratio_derivative;
  // |ratio - 1| ~ C (1/ln lambda)^p; least-squares p for both ratios.
  double value_decay_exponent = 0.0, derivative_decay_exponent = 0.0;
  double max_value_deviation = 0.0, max_derivative_deviation = 0.0;
};

/// 8 points per decade from 10^lo to 10^hi.
inline std::vector<double> log_lambda_grid(int lo = 2, int hi = 7, int per_decade = 8) {
  std::vector<double> g;
  for (int i = lo * per_decade; i <= hi * per_decade; ++i) g.push_back(std::pow(10.0, i / double(per_decade)));
  return g;
}

namespace detail {

inline double log_log_slope(const std::vector<double>& lambda, const std::vector<double>& r) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double d = std::abs(r[i] - 1.0);
    if (!(d > 0.0)) continue;
    const double x = std::log(1.0 / std::log(lambda[i])), y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Ratios Re b1^(l) (alpha-1) ln^{alpha-1} l and -Re b1^'(l) l ln^alpha l on the grid.
inline AsymptoteReport asymptote_check(const KernelSpec& k, double T, const std::vector<double>& lambda_grid,
                                       CorrectionKind kind = CorrectionKind::b1) {
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= 1e2 * (1 - 1e-12) && lambda_grid[i] <= 1e7 * (1 + 1e-12)))
      throw ParameterError("asymptote_check: grid must lie within [1e2, 1e7]");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      throw ParameterError("asymptote_check: grid must be strictly increasing");
  }
  const auto b = make_corrected(k, T, kind);
  const double a = k.alpha;
  AsymptoteReport r;
  r.alpha = a;
  r.T = T;
  r.lambda = lambda_grid;
  for (double l : lambda_grid) {
    const double L = std::log(l);
    r.ratio_value.push_back(fourier_halfline(b, l).real() * (a - 1.0) * std::pow(L, a - 1.0));
    r.ratio_derivative.push_back(-fourier_halfline_derivative(b, l).real() * l * std::pow(L, a));
  }
  for (std::size_t i = 0; i < r.lambda.size(); ++i) {
    r.max_value_deviation = std::max(r.max_value_deviation, std::abs(r.ratio_value[i] - 1.0));
    r.max_derivative_deviation = std::max(r.max_derivative_deviation, std::abs(r.ratio_derivative[i] - 1.0));
  }
  r.value_decay_exponent = detail::log_log_slope(r.lambda, r.ratio_value);
  r.derivative_decay_exponent = detail::log_log_slope(r.lambda, r.ratio_derivative);
  return r;
}

inline void write_csv(std::ostream& os, const AsymptoteReport& r) {
  os << "lambda,ratio_value,ratio_derivative\n";
  char buf[128];
  for (std::size_t i = 0; i < r.lambda.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10e,%.12f,%.12f\n", r.lambda[i], r.ratio_value[i], r.ratio_derivative[i]);
    os << buf;
  }
}

inline void to_json(nlohmann::json& j, const AsymptoteReport& r) {
  j = {{"alpha", r.alpha},
       {"T", r.T},
       {"points", r.lambda.size()},
       {"value_decay_exponent", r.value_decay_exponent},
       {"derivative_decay_exponent", r.derivative_decay_exponent},
       {"max_value_deviation", r.max_value_deviation},
       {"max_derivative_deviation", r.max_derivative_deviation},
       {"final_ratio_value", r.ratio_value.empty() ? 0.0 : r.ratio_value.back()},
       {"final_ratio_derivative", r.ratio_derivative.empty() ? 0.0 : r.ratio_derivative.back()}};
}

}  // namespace colnoise
