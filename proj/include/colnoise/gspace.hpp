#pragma once

// Step functions in G_{0,1}: inner products in the time domain (exact overlap
// reduction) and in the frequency domain (1/2pi int B^ f^ conj g^), elementary
// sets E_n, the Z_n statistics and the two-system separation diagnostics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "colnoise/error.hpp"
#include "colnoise/kernel.hpp"
#include "colnoise/quadrature.hpp"

namespace colnoise {

struct Piece {
  double a = 0.0, b = 0.0;
  cplx c = 1.0;
};

class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (!(p.a >= 0.0 && p.b <= 1.0 && p.b > p.a))
        throw ParameterError("StepFunction: pieces must be nonempty subintervals of (0, 1)");
      if (i > 0 && p.a < pieces_[i - 1].b)
        throw ParameterError("StepFunction: pieces must be sorted and disjoint");
    }
  }
  static StepFunction indicator(double a, double b, cplx c = 1.0) { return StepFunction({{a, b, c}}); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }

  StepFunction scaled(cplx s) const {
    auto p = pieces_;
    for (auto& q : p) q.c *= s;
    return StepFunction(std::move(p));
  }

 private:
  std::vector<Piece> pieces_;
};

struct Interval {
  double a = 0.0, b = 0.0;
};

/// n equal intervals, one per cell ((k-1)/n, k/n), at a common offset.
struct ElementarySet {
  std::vector<Interval> intervals;
  int n = 0;
  double mes = 0.0;
  double offset = 0.0;  // start of each interval relative to its cell
  double length = 0.0;

  StepFunction to_step(cplx value = 1.0) const {
    std::vector<Piece> p;
    p.reserve(intervals.size());
    for (const auto& I : intervals) p.push_back({I.a, I.b, value});
    return StepFunction(std::move(p));
  }
};

enum class EnStyle { centered, left };

namespace detail {

inline ElementarySet equidistant_set(int n, double mes, EnStyle style) {
  ElementarySet e;
  e.n = n;
  e.mes = mes;
  e.length = mes / n;
  e.offset = (style == EnStyle::centered) ? (1.0 - mes) / (2.0 * n) : 0.0;
  e.intervals.reserve(n);
  for (int k = 0; k < n; ++k) {
    if (style == EnStyle::centered) {
      const double c = (k + 0.5) / n, h = mes / (2.0 * n);
      e.intervals.push_back({c - h, c + h});
    } else {
      e.intervals.push_back({double(k) / n, (k + mes) / n});
    }
  }
  return e;
}

}  // namespace detail

inline ElementarySet make_En(int n, double mes, EnStyle style) {
  if (n < 1) throw ParameterError("make_En: n must be positive");
  if (!(mes > 0.0 && mes < 1.0)) throw ParameterError("make_En: mes must lie in (0, 1)");
  return detail::equidistant_set(n, mes, style);
}

/// f^(lambda) = int e^{i lambda t} f(t) dt, exact.
inline cplx fourier_step(const StepFunction& f, double lambda) {
  cplx s = 0.0;
  if (std::abs(lambda) < 1e-8) {
    for (const auto& p : f.pieces()) s += p.c * (p.b - p.a);
    return s;
  }
  for (const auto& p : f.pieces()) {
    const double mid = 0.5 * (p.a + p.b), half = 0.5 * (p.b - p.a);
    s += p.c * cplx(std::cos(lambda * mid), std::sin(lambda * mid)) * (2.0 * std::sin(lambda * half) / lambda);
  }
  return s;
}

/// <f, g> = int int f(s) conj(g(t)) B(s - t) ds dt via interval overlaps.
inline cplx g_inner_time(const KernelSpec& k, const StepFunction& f, const StepFunction& g) {
  cplx s = 0.0;
  for (const auto& p : f.pieces())
    for (const auto& q : g.pieces()) {
      if (p.a - q.b >= k.t_zero || q.a - p.b >= k.t_zero) continue;
      s += p.c * std::conj(q.c) * overlap_integral(k, p.a, p.b, q.a, q.b);
    }
  return s;
}

inline double g_norm2_time(const KernelSpec& k, const StepFunction& f) { return g_inner_time(k, f, f).real(); }

// ---------------------------------------------------------------------------
// Frequency domain.

/// B^ tabulated on the Gauss nodes of the head interval [0, lambda_head].
struct SpectrumTable {
  KernelSpec kernel;
  double lambda_head = 0.0;
  int panels = 0;
  std::vector<double> lambda, weight, bhat;
};

inline SpectrumTable make_spectrum_table(const KernelSpec& k, double lambda_head = 1e4, double panel_width = 2.0) {
  if (!(lambda_head > 0.0) || !(panel_width > 0.0)) throw ParameterError("make_spectrum_table: bad grid");
  SpectrumTable t;
  t.kernel = k;
  t.lambda_head = lambda_head;
  t.panels = std::max(1, static_cast<int>(std::ceil(lambda_head / panel_width)));
  const auto& r = detail::gauss_rule<20>();
  const double w = lambda_head / t.panels;
  for (int p = 0; p < t.panels; ++p) {
    const double c = (p + 0.5) * w, h = 0.5 * w;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      t.lambda.push_back(c + h * r.x[i]);
      t.weight.push_back(h * r.w[i]);
    }
  }
  t.bhat.resize(t.lambda.size());
  for (std::size_t i = 0; i < t.lambda.size(); ++i) t.bhat[i] = spectral_density(k, t.lambda[i]);
  return t;
}

struct FreqInner {
  cplx value = 0.0;
  cplx head = 0.0;
  cplx tail = 0.0;
  double tail_bound = 0.0;  // |tail| upper estimate
  bool precision_warning = false;
};

namespace detail {

// int_{L}^inf B^(lambda) cos(lambda d) / lambda^2 d lambda, d >= 0.
inline double spectral_tail_integral(const KernelSpec& k, double L, double d) {
  AdaptiveOptions opt;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-10;
  if (d == 0.0) {
    auto h = [&](double u) {
      const double l = std::exp(u);
      return spectral_density(k, l) / l;
    };
    return integrate(h, std::log(L), std::log(L) + 40.0, opt).value;
  }
  const double Lstar = std::max(L, 200.0 / d);
  double v = 0.0;
  if (Lstar > L) {
    std::vector<double> brk;
    const double period = 2.0 * kPi / d;
    const int np = static_cast<int>(std::min(4096.0, std::ceil((Lstar - L) / period)));
    for (int i = 1; i < np; ++i) brk.push_back(L + (Lstar - L) * i / np);
    opt.max_intervals = 20000;
    v += integrate([&](double l) { return spectral_density(k, l) * std::cos(l * d) / (l * l); }, L, Lstar, opt,
                   brk)
             .value;
  }
  // Integration by parts beyond Lstar (relative error O(1/(d Lstar))).
  v += -spectral_density(k, Lstar) * std::sin(Lstar * d) / (d * Lstar * Lstar);
  return v;
}

// f^(lambda) = (1/(i lambda)) sum_p J_p e^{i lambda x_p}: jump amplitudes of f.
inline void jump_form(const StepFunction& f, std::vector<double>& x, std::vector<cplx>& J) {
  for (const auto& p : f.pieces()) {
    x.push_back(p.b);
    J.push_back(p.c);
    x.push_back(p.a);
    J.push_back(-p.c);
  }
}

}  // namespace detail

/// <f, g> = (1/2pi) int B^(lambda) f^(lambda) conj g^(lambda) d lambda.
inline FreqInner g_inner_freq(const SpectrumTable& tab, const StepFunction& f, const StepFunction& g) {
  FreqInner out;
  cplx head = 0.0;
  double ff = 0.0, gg = 0.0;  // head parts of ||f||^2, ||g||^2, for the warning scale
  for (std::size_t i = 0; i < tab.lambda.size(); ++i) {
    const double l = tab.lambda[i];
    const cplx fp = fourier_step(f, l), fm = fourier_step(f, -l);
    const cplx gp = fourier_step(g, l), gm = fourier_step(g, -l);
    const double wb = tab.weight[i] * tab.bhat[i];
    head += wb * (fp * std::conj(gp) + fm * std::conj(gm));
    ff += wb * (std::norm(fp) + std::norm(fm));
    gg += wb * (std::norm(gp) + std::norm(gm));
  }
  out.head = head / (2.0 * kPi);

  // Tail: f^ conj g^ = lambda^-2 sum_{p,q} J_p conj K_q e^{i lambda (x_p - y_q)}; both signs of lambda
  // together give 2 cos(lambda (x_p - y_q)) for every (p, q) term.
  std::vector<double> x, y;
  std::vector<cplx> J, K;
  detail::jump_form(f, x, J);
  detail::jump_form(g, y, K);
  const double L = tab.lambda_head;
  cplx tail = 0.0;
  double bound = 0.0;
  const double b_L = spectral_density(tab.kernel, L);
  std::vector<std::pair<double, double>> cache;  // d -> integral
  auto tail_of = [&](double d) {
    for (const auto& [dd, v] : cache)
      if (dd == d) return v;
    const double v = detail::spectral_tail_integral(tab.kernel, L, d);
    cache.emplace_back(d, v);
    return v;
  };
  for (std::size_t p = 0; p < x.size(); ++p)
    for (std::size_t q = 0; q < y.size(); ++q) {
      const double d = std::abs(x[p] - y[q]);
      const cplx w = J[p] * std::conj(K[q]);
      tail += w * 2.0 * tail_of(d);
      bound += std::abs(w) * 2.0 * b_L / L;
    }
  out.tail = tail / (2.0 * kPi);
  out.tail_bound = bound / (2.0 * kPi);
  out.value = out.head + out.tail;
  out.precision_warning = out.tail_bound > 0.01 * std::sqrt(ff * gg) / (2.0 * kPi);
  return out;
}

inline FreqInner g_norm2_freq(const SpectrumTable& tab, const StepFunction& f) { return g_inner_freq(tab, f, f); }

inline FreqInner g_norm2_freq(const KernelSpec& k, const StepFunction& f) {
  return g_norm2_freq(make_spectrum_table(k), f);
}

// ---------------------------------------------------------------------------
// Structured sums for equidistant sets (n up to ~1e5 intervals).

/// <1_E, 1_E> for an equidistant set: sum over lags m of (n - |m|) W(m / n).
inline double equidistant_self_inner(const KernelSpec& k, const ElementarySet& e) {
  const int n = e.n;
  const double len = e.length;
  double total = n * overlap_integral(k, 0.0, len, 0.0, len);
  for (int m = 1; m < n; ++m) {
    const double d = double(m) / n;
    if (d - len >= k.t_zero) break;
    total += 2.0 * (n - m) * overlap_integral(k, d, d + len, 0.0, len);
  }
  return total;
}

/// <1_E, 1_(0,1)>.
inline double equidistant_unit_inner(const KernelSpec& k, const ElementarySet& e) {
  double total = 0.0;
  for (const auto& I : e.intervals) total += overlap_integral(k, I.a, I.b, 0.0, 1.0);
  return total;
}

inline double unit_norm2(const KernelSpec& k) { return overlap_integral(k, 0.0, 1.0, 0.0, 1.0); }

// ---------------------------------------------------------------------------
// Z_n = (1/eps_n) sum_k int_{k/n}^{(k+eps_n)/n} xi,  Z = int_0^1 xi.

struct ZnStats {
  int n = 0;
  double eps_n = 0.0;
  double var_Z = 0.0, var_Zn = 0.0, cov = 0.0, corr = 0.0;
  double theta = 0.0;  // eps_n ln^{alpha-1} n
};

inline ZnStats zn_stats(const KernelSpec& k, int n, double eps_n) {
  if (n < 1) throw ParameterError("zn_stats: n must be positive");
  if (!(eps_n > 0.0 && eps_n <= 1.0)) throw ParameterError("zn_stats: eps_n must lie in (0, 1]");
  ZnStats z;
  z.n = n;
  z.eps_n = eps_n;
  z.theta = eps_n * std::pow(std::log(double(n)), k.alpha - 1.0);
  z.var_Z = unit_norm2(k);
  if (eps_n == 1.0) {
    z.var_Zn = z.var_Z;
    z.cov = z.var_Z;
  } else {
    const auto e = detail::equidistant_set(n, eps_n, EnStyle::left);
    z.var_Zn = equidistant_self_inner(k, e) / (eps_n * eps_n);
    z.cov = equidistant_unit_inner(k, e) / eps_n;
  }
  z.corr = z.cov / std::sqrt(z.var_Z * z.var_Zn);
  return z;
}

enum class Trend { diverging, stabilizing, collapsing_to_Z, inconclusive };

inline const char* to_string(Trend t) {
  switch (t) {
    case Trend::diverging: return "diverging";
    case Trend::stabilizing: return "stabilizing";
    case Trend::collapsing_to_Z: return "collapsing-to-Z";
    default: return "inconclusive";
  }
}

struct TrendThresholds {
  double stabilizing = 0.05;  // last-doubling relative change of var and corr
  double diverging = 0.05;    // last-doubling relative growth of var
  double collapse = 0.02;     // 1 - corr at the end of the scan
};

struct ScanResult {
  std::vector<ZnStats> rows;
  Trend trend = Trend::inconclusive;
  double last_var_change = 0.0, last_corr_change = 0.0;
};

inline Trend classify(const std::vector<ZnStats>& rows, const TrendThresholds& th, double* dvar = nullptr,
                      double* dcorr = nullptr) {
  if (rows.size() < 2) return Trend::inconclusive;
  const auto& a = rows[rows.size() - 2];
  const auto& b = rows.back();
  const double rv = (b.var_Zn - a.var_Zn) / a.var_Zn;
  const double rc = (b.corr - a.corr) / a.corr;
  if (dvar) *dvar = rv;
  if (dcorr) *dcorr = rc;
  bool var_up = true, corr_down = true, corr_up = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    var_up = var_up && rows[i].var_Zn > rows[i - 1].var_Zn;
    corr_down = corr_down && rows[i].corr < rows[i - 1].corr;
    corr_up = corr_up && rows[i].corr >= rows[i - 1].corr - 1e-12;
  }
  if (corr_up && 1.0 - b.corr <= th.collapse) return Trend::collapsing_to_Z;
  if (var_up && corr_down && rv > th.diverging) return Trend::diverging;
  if (std::abs(rv) < th.stabilizing && std::abs(rc) < th.stabilizing) return Trend::stabilizing;
  return Trend::inconclusive;
}

inline ScanResult threshold_scan(const KernelSpec& k, const std::vector<std::pair<int, double>>& schedule,
                                 const TrendThresholds& th = {}) {
  ScanResult s;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule[i].first <= schedule[i - 1].first)
      throw ParameterError("threshold_scan: n must increase along the schedule");
    s.rows.push_back(zn_stats(k, schedule[i].first, schedule[i].second));
  }
  s.trend = classify(s.rows, th, &s.last_var_change, &s.last_corr_change);
  return s;
}

enum class ScheduleKind { subcritical, critical, supercritical };

/// eps_n = c / ln^p n with p = alpha, alpha - 1, alpha - 2; clamped to (0, 1].
inline double schedule_eps(ScheduleKind kind, double alpha, int n, double c = 1.0) {
  const double p = (kind == ScheduleKind::subcritical) ? alpha : (kind == ScheduleKind::critical) ? alpha - 1.0
                                                                                                   : alpha - 2.0;
  return std::min(1.0, c / std::pow(std::log(double(n)), p));
}

inline std::vector<std::pair<int, double>> doubling_schedule(ScheduleKind kind, double alpha, int n_min, int n_max,
                                                            double c = 1.0) {
  std::vector<std::pair<int, double>> s;
  for (long n = n_min; n <= n_max; n *= 2) s.emplace_back(int(n), schedule_eps(kind, alpha, int(n), c));
  return s;
}

// ---------------------------------------------------------------------------
// Separation of two systems on g_n = 1_{E_n} / mes E_n versus g = 1_(0,1).

struct SetGeometry {
  double norm_gn = 0.0, inner = 0.0, dist = 0.0, norm_g = 0.0;
  double overlap() const { return inner / (norm_gn * norm_g); }
};

inline SetGeometry set_geometry(const KernelSpec& k, const ElementarySet& e) {
  SetGeometry s;
  const double m = e.mes;
  const double nn = equidistant_self_inner(k, e) / (m * m);
  s.inner = equidistant_unit_inner(k, e) / m;
  const double gg = unit_norm2(k);
  s.norm_gn = std::sqrt(nn);
  s.norm_g = std::sqrt(gg);
  s.dist = std::sqrt(std::max(0.0, nn - 2.0 * s.inner + gg));
  return s;
}

struct SeparationRow {
  int n = 0;
  double mes = 0.0;
  SetGeometry A, B;
};

struct SeparationReport {
  double alpha_a = 0.0, alpha_b = 0.0;
  std::vector<SeparationRow> rows;
  double floor_b = 0.0;          // min normalized overlap in system B
  bool a_decreasing_tail = false;  // strictly decreasing over the last five rows
  double a_final_over_initial = 0.0;
};

/// mes E_n = 2 / ln^{alpha_B - 1} n, centered intervals.
inline SeparationReport separation_report(const KernelSpec& kA, const KernelSpec& kB, const std::vector<int>& n_list) {
  if (!(kA.alpha < kB.alpha)) throw ParameterError("separation_report: need alpha_A < alpha_B");
  SeparationReport r;
  r.alpha_a = kA.alpha;
  r.alpha_b = kB.alpha;
  for (int n : n_list) {
    if (n < 2) throw ParameterError("separation_report: n must be at least 2");
    const double mes = 2.0 / std::pow(std::log(double(n)), kB.alpha - 1.0);
    if (!(mes < 1.0)) throw ParameterError("separation_report: mes E_n >= 1 at n = " + std::to_string(n));
    const auto e = make_En(n, mes, EnStyle::centered);
    r.rows.push_back({n, mes, set_geometry(kA, e), set_geometry(kB, e)});
  }
  if (r.rows.empty()) return r;
  r.floor_b = INFINITY;
  for (const auto& row : r.rows) r.floor_b = std::min(r.floor_b, row.B.overlap());
  const std::size_t m = r.rows.size();
  r.a_decreasing_tail = m >= 2;
  for (std::size_t i = (m > 5 ? m - 4 : 1); i < m; ++i)
    r.a_decreasing_tail = r.a_decreasing_tail && r.rows[i].A.overlap() < r.rows[i - 1].A.overlap();
  r.a_final_over_initial = r.rows.back().A.overlap() / r.rows.front().A.overlap();
  return r;
}

struct ConvergenceRow {
  int n = 0;
  double rel_dist = 0.0;  // ||g_n - g|| / ||g||
};

/// ||g_n - g|| / ||g|| with mes E_n held fixed.
inline std::vector<ConvergenceRow> constant_mes_convergence(const KernelSpec& k, double mes,
                                                            const std::vector<int>& n_list) {
  std::vector<ConvergenceRow> out;
  for (int n : n_list) {
    const auto g = set_geometry(k, make_En(n, mes, EnStyle::centered));
    out.push_back({n, g.dist / g.norm_g});
  }
  return out;
}

inline void write_csv(std::ostream& os, const std::vector<ZnStats>& rows) {
  os << "n,eps_n,theta,var_Z,var_Zn,cov,corr\n";
  char buf[256];
  for (const auto& z : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n", z.n, z.eps_n, z.theta, z.var_Z,
                  z.var_Zn, z.cov, z.corr);
    os << buf;
  }
}

inline void write_csv(std::ostream& os, const SeparationReport& r) {
  os << "n,mes,normA_gn,innerA,distA,overlapA,normB_gn,innerB,distB,overlapB\n";
  char buf[320];
  for (const auto& x : r.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e\n", x.n, x.mes,
                  x.A.norm_gn, x.A.inner, x.A.dist, x.A.overlap(), x.B.norm_gn, x.B.inner, x.B.dist, x.B.overlap());
    os << buf;
  }
}

inline void to_json(nlohmann::json& j, const ZnStats& z) {
  j = {{"n", z.n},         {"eps_n", z.eps_n}, {"theta", z.theta}, {"var_Z", z.var_Z},
       {"var_Zn", z.var_Zn}, {"cov", z.cov},     {"corr", z.corr}};
}

}  // namespace colnoise
