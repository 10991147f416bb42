#pragma once

// Gram geometry of the trigonometric systems
//   X_k = 1_(0,T) e^{2 pi i k t / T},   Y_k = 1_(-T,0) e^{2 pi i k t / T}
// under <f, g> = int int f(s) conj(g(t)) B(s - t) ds dt.
//
// Every entry is assembled from four half-line moments per frequency
// lambda_k = 2 pi k / T:
//   A_k  = int_0^T e^{i l t} B,    A1_k = int_0^T t e^{i l t} B,
//   C_k  = int_T^2T e^{i l t} B,   C1_k = int_T^2T t e^{i l t} B.
// Flat index of X_k is k + N, of Y_k is (2N + 1) + k + N.

#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "colnoise/error.hpp"
#include "colnoise/kernel.hpp"

namespace colnoise {

namespace detail {

struct FrequencyMoments {
  cplx A, A1, C, C1;
};

inline FrequencyMoments frequency_moments(const KernelSpec& k, double T, long idx) {
  const double lambda = 2.0 * kPi * static_cast<double>(idx) / T;
  FrequencyMoments m;
  m.A = fourier_moment(k, lambda, 0.0, T);
  m.A1 = fourier_moment(k, lambda, 0.0, T, 0.0, 1.0);
  if (T < k.t_zero) {
    m.C = fourier_moment(k, lambda, T, 2.0 * T);
    m.C1 = fourier_moment(k, lambda, T, 2.0 * T, 0.0, 1.0);
  }
  return m;
}

inline cplx xx_from(const FrequencyMoments& a, const FrequencyMoments& b, long m, long n, double T) {
  if (m == n) return 2.0 * (T * a.A - a.A1).real();
  return -T / (kPi * static_cast<double>(m - n)) * (a.A.imag() - b.A.imag());
}

inline cplx xy_from(const FrequencyMoments& a, const FrequencyMoments& b, long m, long n, double T) {
  if (m == n) return a.A1 + 2.0 * T * a.C - a.C1;
  return cplx(0.0, -T / (2.0 * kPi * static_cast<double>(m - n))) * ((a.A - a.C) - (b.A - b.C));
}

}  // namespace detail

/// <X_m, X_n> (= <Y_m, Y_n>).
inline cplx inner_XX(const KernelSpec& k, double T, long m, long n) {
  const auto a = detail::frequency_moments(k, T, m);
  const auto b = (m == n) ? a : detail::frequency_moments(k, T, n);
  return detail::xx_from(a, b, m, n, T);
}

/// <X_m, Y_n>.
inline cplx inner_XY(const KernelSpec& k, double T, long m, long n) {
  const auto a = detail::frequency_moments(k, T, m);
  const auto b = (m == n) ? a : detail::frequency_moments(k, T, n);
  return detail::xy_from(a, b, m, n, T);
}

struct GramMatrix {
  int N = 0;
  double alpha = 0.0, T = 0.0;
  Eigen::MatrixXcd G;        // normalized, size 2(2N+1)
  std::vector<double> norm2; // ||X_k||^2 = ||Y_k||^2, k = -N..N

  int size() const { return static_cast<int>(G.rows()); }
  int x_index(int k) const { return k + N; }
  int y_index(int k) const { return 2 * N + 1 + k + N; }
  Eigen::MatrixXcd xx() const { return G.topLeftCorner(2 * N + 1, 2 * N + 1); }
  Eigen::MatrixXcd yy() const { return G.bottomRightCorner(2 * N + 1, 2 * N + 1); }
  Eigen::MatrixXcd xy() const { return G.topRightCorner(2 * N + 1, 2 * N + 1); }

  /// Principal sub-Gram for a smaller truncation.
  GramMatrix truncated(int n) const {
    if (n < 1 || n > N) throw ParameterError("GramMatrix::truncated: need 1 <= n <= N");
    GramMatrix g;
    g.N = n;
    g.alpha = alpha;
    g.T = T;
    const int d = 2 * n + 1, off = N - n;
    g.G.resize(2 * d, 2 * d);
    g.G.topLeftCorner(d, d) = G.block(off, off, d, d);
    g.G.topRightCorner(d, d) = G.block(off, 2 * N + 1 + off, d, d);
    g.G.bottomLeftCorner(d, d) = G.block(2 * N + 1 + off, off, d, d);
    g.G.bottomRightCorner(d, d) = G.block(2 * N + 1 + off, 2 * N + 1 + off, d, d);
    g.norm2.assign(norm2.begin() + off, norm2.begin() + off + d);
    return g;
  }
};

inline GramMatrix build_gram(const KernelSpec& k, double T, int N) {
  if (N < 1) throw ParameterError("build_gram: N must be at least 1");
  if (!(T > 0.0)) throw ParameterError("build_gram: T must be positive");
  const int d = 2 * N + 1;
  std::vector<detail::FrequencyMoments> mom(d);
  for (int i = 0; i <= N; ++i) {
    mom[N + i] = detail::frequency_moments(k, T, i);
    // B is real, so the moments at -lambda are conjugates.
    const auto& p = mom[N + i];
    mom[N - i] = {std::conj(p.A), std::conj(p.A1), std::conj(p.C), std::conj(p.C1)};
  }
  GramMatrix g;
  g.N = N;
  g.alpha = k.alpha;
  g.T = T;
  g.norm2.resize(d);
  for (int i = 0; i < d; ++i) g.norm2[i] = detail::xx_from(mom[i], mom[i], i - N, i - N, T).real();
  g.G.resize(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const long m = i - N, n = j - N;
      const double s = std::sqrt(g.norm2[i] * g.norm2[j]);
      const cplx xx = (i == j) ? cplx(1.0) : detail::xx_from(mom[i], mom[j], m, n, T) / s;
      const cplx xy = detail::xy_from(mom[i], mom[j], m, n, T) / s;
      g.G(i, j) = xx;
      g.G(d + i, d + j) = xx;
      g.G(i, d + j) = xy;
      g.G(d + j, i) = std::conj(xy);
    }
  }
  return g;
}

/// ||G - I||_F^2.
inline double hs_defect(const GramMatrix& g) {
  return (g.G - Eigen::MatrixXcd::Identity(g.size(), g.size())).squaredNorm();
}

struct DefectRow {
  int N = 0;
  double S = 0.0;
  double increment = 0.0;  // S_N - S_{N/2}; zero for the first row
  double min_eig = 0.0;
};

inline double min_eigenvalue(const GramMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.G, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("min_eigenvalue: eigensolver failed");
  return es.eigenvalues()(0);
}

inline double min_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("min_eigenvalue: eigensolver failed");
  return es.eigenvalues()(0);
}

/// Defect partial sums and eigenvalue floor over increasing truncations, all
/// taken from one Gram built at the largest N.
inline std::vector<DefectRow> defect_sequence(const KernelSpec& k, double T, const std::vector<int>& Ns) {
  if (Ns.empty()) return {};
  int nmax = 0;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw ParameterError("defect_sequence: N list must increase");
    nmax = std::max(nmax, Ns[i]);
  }
  const auto full = build_gram(k, T, nmax);
  std::vector<DefectRow> rows;
  for (int n : Ns) {
    const auto g = (n == nmax) ? full : full.truncated(n);
    DefectRow r;
    r.N = n;
    r.S = hs_defect(g);
    r.increment = rows.empty() ? 0.0 : r.S - rows.back().S;
    r.min_eig = min_eigenvalue(g);
    rows.push_back(r);
  }
  return rows;
}

struct DiagRow {
  long k = 0;
  double norm2 = 0.0;
  double ratio = 0.0;  // ||X_k||^2 ln^{alpha-1}|k| (alpha-1)/(2T)
};

struct DiagReport {
  std::vector<DiagRow> rows;
  double slope_vs_inv_log = 0.0;  // least-squares d(ratio)/d(1/ln|k|)
};

inline DiagReport diag_asymptotic(const KernelSpec& k, double T, const std::vector<long>& k_list) {
  DiagReport rep;
  const double a = k.alpha;
  for (long kk : k_list) {
    if (std::labs(kk) < 2) throw ParameterError("diag_asymptotic: |k| must be at least 2");
    DiagRow r;
    r.k = kk;
    r.norm2 = inner_XX(k, T, kk, kk).real();
    r.ratio = r.norm2 * std::pow(std::log(std::fabs(double(kk))), a - 1.0) * (a - 1.0) / (2.0 * T);
    rep.rows.push_back(r);
  }
  if (rep.rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rep.rows.size());
    for (const auto& r : rep.rows) {
      const double x = 1.0 / std::log(std::fabs(double(r.k)));
      sx += x;
      sy += r.ratio;
      sxx += x * x;
      sxy += x * r.ratio;
    }
    rep.slope_vs_inv_log = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

inline void to_json(nlohmann::json& j, const GramMatrix& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < g.size(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < g.size(); ++c) row.push_back({g.G(r, c).real(), g.G(r, c).imag()});
    rows.push_back(std::move(row));
  }
  j = {{"N", g.N},
       {"alpha", g.alpha},
       {"T", g.T},
       {"ordering", "X_{-N..N} then Y_{-N..N}"},
       {"norm2", g.norm2},
       {"entries", std::move(rows)}};
}

inline void write_csv(std::ostream& os, const std::vector<DefectRow>& rows) {
  os << "N,hs_defect,increment,min_eig\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12e,%.12e,%.12e\n", r.N, r.S, r.increment, r.min_eig);
    os << buf;
  }
}

}  // namespace colnoise
