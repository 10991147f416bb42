#pragma once

// Quadrature building blocks shared by every module: fixed Gauss-Legendre
// panels and a globally adaptive Gauss-Kronrod (21 point) driver that accepts
// real or complex integrands. Node tables come from Boost.Math.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "colnoise/error.hpp"

namespace colnoise {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const cplx& z) { return std::abs(z); }

// Full symmetric node/weight set on [-1, 1] for an N-point Gauss rule.
template <unsigned N>
struct GaussRule {
  std::vector<double> x, w;
  GaussRule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& ww = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        x.push_back(0.0);
        w.push_back(ww[i]);
      } else {
        x.push_back(-a[i]);
        w.push_back(ww[i]);
        x.push_back(a[i]);
        w.push_back(ww[i]);
      }
    }
  }
};

template <unsigned N>
const GaussRule<N>& gauss_rule() {
  static const GaussRule<N> rule;
  return rule;
}

// GK21: Kronrod abscissae with the embedded 10-point Gauss weights aligned to
// them (zero where the node is Kronrod-only).
struct KronrodRule {
  std::vector<double> x, wk, wg;
  KronrodRule() {
    using K = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& ka = K::abscissa();
    const auto& kw = K::weights();
    const auto& ga = G::abscissa();
    const auto& gw = G::weights();
    auto gauss_weight = [&](double node) {
      for (std::size_t j = 0; j < ga.size(); ++j)
        if (std::abs(ga[j] - node) < 1e-14) return gw[j];
      return 0.0;
    };
    for (std::size_t i = 0; i < ka.size(); ++i) {
      const double g = gauss_weight(ka[i]);
      if (ka[i] == 0.0) {
        x.push_back(0.0);
        wk.push_back(kw[i]);
        wg.push_back(g);
      } else {
        for (double s : {-1.0, 1.0}) {
          x.push_back(s * ka[i]);
          wk.push_back(kw[i]);
          wg.push_back(g);
        }
      }
    }
  }
};

inline const KronrodRule& kronrod_rule() {
  static const KronrodRule rule;
  return rule;
}

template <class F>
using integrand_t = std::decay_t<std::invoke_result_t<F&, double>>;

template <class F>
std::pair<integrand_t<F>, double> gk21(F& f, double a, double b) {
  using T = integrand_t<F>;
  const auto& r = kronrod_rule();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T sk{}, sg{};
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const T v = f(c + h * r.x[i]);
    sk += r.wk[i] * v;
    if (r.wg[i] != 0.0) sg += r.wg[i] * v;
  }
  return {sk * h, magnitude((sk - sg) * h)};
}

}  // namespace detail

/// Fixed composite Gauss-Legendre rule: `panels` equal panels of N nodes.
template <unsigned N = 20, class F>
auto gauss_legendre(F&& f, double a, double b, int panels = 1) {
  using T = detail::integrand_t<F>;
  const auto& r = detail::gauss_rule<N>();
  T total{};
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double c = lo + 0.5 * width, h = 0.5 * width;
    T s{};
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
    total += s * h;
  }
  return total;
}

struct AdaptiveOptions {
  double abs_tol = 1e-15;
  double rel_tol = 1e-12;
  int max_intervals = 2000;
  bool throw_on_failure = true;
};

/// Globally adaptive GK21 on [a, b]. `breaks` optionally seeds interior
/// subdivision points (they are clipped to (a, b) and sorted). Subdivision
/// always bisects the interval with the largest error estimate, so the result
/// is a deterministic function of the inputs.
template <class F>
QuadResult<detail::integrand_t<F>> integrate(F&& f, double a, double b,
                                             const AdaptiveOptions& opt = {},
                                             std::span<const double> breaks = {}) {
  using T = detail::integrand_t<F>;
  QuadResult<T> out;
  if (!(b > a)) return out;

  struct Seg {
    double a, b;
    T v;
    double e;
  };
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Seg> segs;
  segs.reserve(64);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto [v, e] = detail::gk21(f, pts[i], pts[i + 1]);
    segs.push_back({pts[i], pts[i + 1], v, e});
  }

  auto totals = [&] {
    T v{};
    double e = 0.0;
    for (const auto& s : segs) {
      v += s.v;
      e += s.e;
    }
    return std::pair{v, e};
  };

  auto [value, err] = totals();
  while (err > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(value)) &&
         static_cast<int>(segs.size()) < opt.max_intervals) {
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const Seg& l, const Seg& r) { return l.e < r.e; });
    const Seg s = *worst;
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) break;  // interval exhausted in double precision
    auto [v1, e1] = detail::gk21(f, s.a, mid);
    auto [v2, e2] = detail::gk21(f, mid, s.b);
    *worst = {s.a, mid, v1, e1};
    segs.push_back({mid, s.b, v2, e2});
    std::tie(value, err) = totals();
  }
  out.value = value;
  out.error = err;
  out.intervals = static_cast<int>(segs.size());
  if (opt.throw_on_failure &&
      err > 10.0 * std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(value)))
    throw NumericError("adaptive quadrature did not converge", err);
  return out;
}

}  // namespace colnoise
