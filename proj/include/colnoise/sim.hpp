#pragma once

// Monte Carlo over bin integrals of the noise: X_i = int_{bin i} xi, with the
// exact Toeplitz covariance from the overlap reduction. Normals come from a
// Philox4x32-10 counter generator keyed by (seed, sample, component).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "colnoise/error.hpp"
#include "colnoise/gspace.hpp"
#include "colnoise/kernel.hpp"

namespace colnoise {

struct Philox4x32 {
  using ctr_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static ctr_type apply(ctr_type c, key_type k) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u, W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = std::uint64_t(M0) * c[0], p1 = std::uint64_t(M1) * c[2];
      const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
      k[0] += W0;
      k[1] += W1;
    }
    return c;
  }
};

/// Deterministic standard normals indexed by (stream, sample, component).
class CounterNormal {
 public:
  explicit CounterNormal(std::uint64_t seed) : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)} {}

  double operator()(std::uint32_t stream, std::uint64_t sample, std::uint64_t component) const {
    const auto pair = pair_at(stream, sample, component / 2);
    return (component % 2 == 0) ? pair.first : pair.second;
  }

  /// Box-Muller pair for block `block` (components 2 block, 2 block + 1).
  std::pair<double, double> pair_at(std::uint32_t stream, std::uint64_t sample, std::uint64_t block) const {
    const auto r = raw(stream, sample, block);
    // 53-bit uniforms in (0, 1] and [0, 1).
    const double u1 = ((std::uint64_t(r[0]) << 21 ^ (r[1] >> 11)) + 1.0) * 0x1p-53;
    const double u2 = (std::uint64_t(r[2]) << 21 ^ (r[3] >> 11)) * 0x1p-53;
    const double rad = std::sqrt(-2.0 * std::log(u1));
    return {rad * std::cos(2.0 * kPi * u2), rad * std::sin(2.0 * kPi * u2)};
  }

  Philox4x32::ctr_type raw(std::uint32_t stream, std::uint64_t sample, std::uint64_t block) const {
    return Philox4x32::apply({std::uint32_t(sample), std::uint32_t(sample >> 32), std::uint32_t(block),
                              stream},
                             key_);
  }

 private:
  Philox4x32::key_type key_;
};

struct BinCov {
  int n_bins = 0;
  std::vector<double> lag;   // Cov(X_0, X_m), m = 0..n_bins-1
  Eigen::MatrixXd matrix;    // repaired (clipped) covariance
  Eigen::MatrixXd factor;    // matrix = factor factor^T
  double clip_mass = 0.0;    // sum of |negative eigenvalues| removed
  double trace = 0.0;
  double clip_ratio() const { return trace > 0.0 ? clip_mass / trace : 0.0; }
};

inline BinCov bin_cov(const KernelSpec& k, int n_bins) {
  if (n_bins < 2) throw ParameterError("bin_cov: n_bins must be at least 2");
  BinCov c;
  c.n_bins = n_bins;
  const double h = 1.0 / n_bins;
  c.lag.assign(n_bins, 0.0);
  for (int m = 0; m < n_bins; ++m) {
    const double d = m * h;
    if (d - h >= k.t_zero) break;
    c.lag[m] = overlap_integral(k, d, d + h, 0.0, h);
  }
  Eigen::MatrixXd raw(n_bins, n_bins);
  for (int i = 0; i < n_bins; ++i)
    for (int j = 0; j < n_bins; ++j) raw(i, j) = c.lag[std::abs(i - j)];
  c.trace = raw.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(raw);
  if (es.info() != Eigen::Success) throw NumericError("bin_cov: eigensolver failed");
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < n_bins; ++i)
    if (ev(i) < 0.0) {
      c.clip_mass += -ev(i);
      ev(i) = 0.0;
    }
  c.factor = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  c.matrix = c.factor * c.factor.transpose();
  return c;
}

/// n_samples x n_bins matrix of draws X = factor * z.
inline Eigen::MatrixXd sample(const BinCov& cov, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ParameterError("sample: n_samples must be positive");
  const int d = cov.n_bins;
  CounterNormal rng(seed);
  Eigen::MatrixXd out(n_samples, d);
  Eigen::VectorXd z(d);
  for (int s = 0; s < n_samples; ++s) {
    for (int b = 0; 2 * b < d; ++b) {
      const auto [z0, z1] = rng.pair_at(0, std::uint64_t(s), std::uint64_t(b));
      z(2 * b) = z0;
      if (2 * b + 1 < d) z(2 * b + 1) = z1;
    }
    out.row(s) = (cov.factor * z).transpose();
  }
  return out;
}

struct Interval95 {
  double lo = 0.0, hi = 0.0;
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
  double half_width() const { return 0.5 * (hi - lo); }
};

struct McZn {
  int n = 0, bins_per_cell = 0, n_bins = 0, n_samples = 0;
  double eps_n = 0.0;
  double var_hat = 0.0, corr_hat = 0.0;
  Interval95 var_ci, corr_ci;
  double var_exact = 0.0, corr_exact = 0.0;  // from the bin covariance
  double clip_ratio = 0.0;
};

/// Smallest q with eps_n q integral (to 1e-9) and n q <= max_bins; 0 if none.
inline int bins_per_cell(int n, double eps_n, int max_bins = 4096) {
  for (int q = 1; n * q <= max_bins; ++q) {
    const double x = eps_n * q;
    if (std::abs(x - std::round(x)) <= 1e-9 && std::round(x) >= 1.0) return q;
  }
  return 0;
}

namespace detail {

inline double corr_of(const std::vector<double>& a, const std::vector<double>& b, const std::vector<std::uint32_t>* idx,
                      double* var_a) {
  const std::size_t n = idx ? idx->size() : a.size();
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = idx ? (*idx)[i] : i;
    ma += a[j];
    mb += b[j];
  }
  ma /= n;
  mb /= n;
  double saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = idx ? (*idx)[i] : i;
    const double x = a[j] - ma, y = b[j] - mb;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  if (var_a) *var_a = saa / (n - 1);
  return sab / std::sqrt(saa * sbb);
}

inline Interval95 percentile_interval(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double pos = p * (v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double f = pos - i;
    return (i + 1 < v.size()) ? v[i] * (1 - f) + v[i + 1] * f : v[i];
  };
  return {at(0.025), at(0.975)};
}

}  // namespace detail

/// Empirical Var(Z_n), Corr(Z_n, Z) from sampled bin integrals, with percentile
/// bootstrap 95% intervals (n_boot resamples, drawn from stream 1 of the seed).
inline McZn mc_zn(const KernelSpec& k, int n, double eps_n, int n_samples, std::uint64_t seed, int n_boot = 500,
                  int max_bins = 4096) {
  if (n < 1 || !(eps_n > 0.0 && eps_n <= 1.0)) throw ParameterError("mc_zn: need n >= 1 and eps_n in (0, 1]");
  if (n_samples < 2) throw ParameterError("mc_zn: need at least two samples");
  const int q = bins_per_cell(n, eps_n, max_bins);
  if (q == 0) throw ParameterError("mc_zn: no bin resolution <= max_bins puts every E_n endpoint on a bin edge");
  McZn r;
  r.n = n;
  r.eps_n = eps_n;
  r.bins_per_cell = q;
  r.n_bins = n * q;
  r.n_samples = n_samples;
  const auto cov = bin_cov(k, r.n_bins);
  r.clip_ratio = cov.clip_ratio();

  const int inside = static_cast<int>(std::lround(eps_n * q));
  Eigen::VectorXd w_z = Eigen::VectorXd::Ones(r.n_bins), w_zn = Eigen::VectorXd::Zero(r.n_bins);
  for (int j = 0; j < r.n_bins; ++j)
    if (j % q < inside) w_zn(j) = 1.0 / eps_n;
  // Z and Z_n are linear in the bin vector, so only two projected factor rows are needed.
  const Eigen::VectorXd p_z = cov.factor.transpose() * w_z, p_zn = cov.factor.transpose() * w_zn;
  {
    const double vz = w_z.dot(cov.matrix * w_z), vzn = w_zn.dot(cov.matrix * w_zn), czz = w_zn.dot(cov.matrix * w_z);
    r.var_exact = vzn;
    r.corr_exact = czz / std::sqrt(vz * vzn);
  }
  std::vector<double> z(n_samples), zn(n_samples);
  CounterNormal rng(seed);
  for (int s = 0; s < n_samples; ++s) {
    double a = 0.0, b = 0.0;
    for (int blk = 0; 2 * blk < r.n_bins; ++blk) {
      const auto [g0, g1] = rng.pair_at(0, std::uint64_t(s), std::uint64_t(blk));
      a += p_z(2 * blk) * g0;
      b += p_zn(2 * blk) * g0;
      if (2 * blk + 1 < r.n_bins) {
        a += p_z(2 * blk + 1) * g1;
        b += p_zn(2 * blk + 1) * g1;
      }
    }
    z[s] = a;
    zn[s] = b;
  }
  r.corr_hat = detail::corr_of(zn, z, nullptr, &r.var_hat);

  std::vector<double> boot_var, boot_corr;
  std::vector<std::uint32_t> idx(n_samples);
  for (int bs = 0; bs < n_boot; ++bs) {
    for (int i = 0; i < n_samples; i += 4) {
      const auto u = rng.raw(1, std::uint64_t(bs), std::uint64_t(i / 4));
      for (int t = 0; t < 4 && i + t < n_samples; ++t)
        idx[i + t] = static_cast<std::uint32_t>((std::uint64_t(u[t]) * std::uint64_t(n_samples)) >> 32);
    }
    double v = 0.0;
    boot_corr.push_back(detail::corr_of(zn, z, &idx, &v));
    boot_var.push_back(v);
  }
  r.var_ci = detail::percentile_interval(boot_var);
  r.corr_ci = detail::percentile_interval(boot_corr);
  return r;
}

inline void to_json(nlohmann::json& j, const McZn& r) {
  j = {{"n", r.n},
       {"eps_n", r.eps_n},
       {"n_bins", r.n_bins},
       {"n_samples", r.n_samples},
       {"var_hat", r.var_hat},
       {"var_ci95", {r.var_ci.lo, r.var_ci.hi}},
       {"corr_hat", r.corr_hat},
       {"corr_ci95", {r.corr_ci.lo, r.corr_ci.hi}},
       {"var_exact", r.var_exact},
       {"corr_exact", r.corr_exact},
       {"clip_ratio", r.clip_ratio}};
}

}  // namespace colnoise
