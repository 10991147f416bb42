#pragma once

// Reduced density matrices of bipartite pure states, the trace norm, and the
// coherent-state slice of the lower bound ||rho(psi) - rho(U_x psi)|| >= M(dist).

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <json.hpp>

#include "colnoise/error.hpp"
#include "colnoise/quadrature.hpp"

namespace colnoise {

/// psi = sum_{i,k} amp(i, k) e_i (x) f_k.
struct PureState {
  Eigen::MatrixXcd amp;

  PureState() = default;
  explicit PureState(Eigen::MatrixXcd a, double tol = 1e-12) : amp(std::move(a)) {
    if (amp.size() == 0) throw ParameterError("PureState: empty amplitude array");
    if (std::abs(amp.squaredNorm() - 1.0) > tol) throw ParameterError("PureState: state is not normalized");
  }
  int d1() const { return static_cast<int>(amp.rows()); }
  int d2() const { return static_cast<int>(amp.cols()); }
};

enum class Side { left, right };

/// Partial trace over the other factor; left gives A A^*, right gives A^T conj(A).
inline Eigen::MatrixXcd reduce(const PureState& psi, Side side) {
  if (std::abs(psi.amp.squaredNorm() - 1.0) > 1e-12) throw ParameterError("reduce: state is not normalized");
  if (side == Side::left) return psi.amp * psi.amp.adjoint();
  return psi.amp.transpose() * psi.amp.conjugate();
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol = 1e-12) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
inline double trace_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw ParameterError("trace_norm: matrix must be square");
  if (m.size() == 0) return 0.0;
  if (!is_hermitian(m)) throw ParameterError("trace_norm: matrix must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("trace_norm: eigensolver failed");
  return es.eigenvalues().cwiseAbs().sum();
}

struct BoundCheck {
  double lhs = 0.0, rhs = 0.0;
  bool holds = false;
  double margin() const { return rhs - lhs; }
};

/// ||rho(psi1) - rho(psi2)||_1 <= 2 ||psi1 - psi2|| (left factor).
inline BoundCheck lipschitz_check(const PureState& psi1, const PureState& psi2, double slack = 1e-10) {
  if (psi1.d1() != psi2.d1() || psi1.d2() != psi2.d2()) throw ParameterError("lipschitz_check: shape mismatch");
  BoundCheck b;
  b.lhs = trace_norm(reduce(psi1, Side::left) - reduce(psi2, Side::left));
  b.rhs = 2.0 * (psi1.amp - psi2.amp).norm();
  b.holds = b.lhs <= b.rhs + slack;
  return b;
}

inline bool is_unitary(const Eigen::MatrixXcd& u, double tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

struct CovarianceCheck {
  double max_error = 0.0;
  bool holds = false;
};

/// rho((U1 (x) U2) psi) = U1 rho(psi) U1^* entrywise.
inline CovarianceCheck covariance_check(const PureState& psi, const Eigen::MatrixXcd& U1, const Eigen::MatrixXcd& U2,
                                        double tol = 1e-10) {
  if (U1.rows() != psi.d1() || U2.rows() != psi.d2()) throw ParameterError("covariance_check: shape mismatch");
  if (!is_unitary(U1) || !is_unitary(U2)) throw ParameterError("covariance_check: factors must be unitary");
  PureState moved(U1 * psi.amp * U2.transpose(), 1e-10);
  const Eigen::MatrixXcd lhs = reduce(moved, Side::left);
  const Eigen::MatrixXcd rhs = U1 * reduce(psi, Side::left) * U1.adjoint();
  CovarianceCheck c;
  c.max_error = (lhs - rhs).cwiseAbs().maxCoeff();
  c.holds = c.max_error <= tol;
  return c;
}

/// M(r) = max_{phi in [0, pi]} exp(-phi^2 / 2r^2) 2 sin(phi/2); M(0) = 0.
inline double M_of_r(double r) {
  if (!(r >= 0.0)) throw ParameterError("M_of_r: r must be nonnegative");
  if (r == 0.0) return 0.0;
  auto f = [r](double phi) { return std::exp(-phi * phi / (2.0 * r * r)) * 2.0 * std::sin(0.5 * phi); };
  const int n = 1000;
  int best = 0;
  double best_v = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double v = f(kPi * i / n);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = kPi * std::max(0, best - 1) / n, hi = kPi * std::min(n, best + 1) / n;
  auto res = boost::math::tools::brent_find_minima([&](double phi) { return -f(phi); }, lo, hi, 52);
  return std::max(best_v, -res.second);
}

/// Fock coefficients of the coherent state |beta> truncated to `dim` levels.
inline Eigen::VectorXcd coherent_state(cplx beta, int dim, double* tail_mass = nullptr) {
  if (dim < 1) throw ParameterError("coherent_state: dim must be positive");
  Eigen::VectorXcd c(dim);
  const double nb2 = std::norm(beta);
  c(0) = std::exp(-0.5 * nb2);
  for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * beta / std::sqrt(double(n));
  if (tail_mass) *tail_mass = std::max(0.0, 1.0 - c.squaredNorm());
  return c;
}

/// Smallest dimension (at least `floor_dim`) whose coherent-state tail is below `tol`.
inline int coherent_dimension(cplx beta, double tol = 1e-12, int floor_dim = 40) {
  // Poisson(|beta|^2) tail, summed downward from far out for accuracy.
  const double mu = std::norm(beta);
  int dim = floor_dim;
  while (true) {
    double tail = 0.0;
    const int far = dim + 200 + static_cast<int>(4.0 * mu);
    for (int n = far; n >= dim; --n) tail += std::exp(-mu + n * std::log(std::max(mu, 1e-300)) - std::lgamma(n + 1.0));
    if (mu == 0.0 || tail < tol) return dim;
    dim += 5;
  }
}

struct CoherentBoundResult {
  double lhs = 0.0;         // trace distance, computed from the truncated states
  double lhs_closed = 0.0;  // 2 sqrt(1 - e^{-|beta|^2})
  double rhs = 0.0;         // M(2 |beta|)
  double tail_mass = 0.0;
  int fock_dim = 0;
  bool holds = false;
};

/// Vacuum versus the state displaced by beta on the first factor; fock_dim <= 0 picks one.
inline CoherentBoundResult coherent_bound_check(cplx beta, int fock_dim = 0, double tail_tol = 1e-8) {
  CoherentBoundResult r;
  r.fock_dim = fock_dim > 0 ? fock_dim : coherent_dimension(beta);
  Eigen::VectorXcd coh = coherent_state(beta, r.fock_dim, &r.tail_mass);
  // 1 - |c|^2 loses digits once the tail is tiny; use the direct Poisson tail.
  {
    double tail = 0.0;
    const double mu = std::norm(beta);
    if (mu > 0.0)
      for (int n = r.fock_dim; n < r.fock_dim + 400 + int(4 * mu); ++n)
        tail += std::exp(-mu + n * std::log(mu) - std::lgamma(n + 1.0));
    r.tail_mass = tail;
  }
  if (r.tail_mass >= tail_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "coherent_bound_check: Fock tail %.3e at dim %d exceeds %.1e", r.tail_mass,
                  r.fock_dim, tail_tol);
    throw PrecisionError(buf);
  }
  coh /= coh.norm();
  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(r.fock_dim, 2), disp = Eigen::MatrixXcd::Zero(r.fock_dim, 2);
  vac(0, 0) = 1.0;
  disp.col(0) = coh;
  const Eigen::MatrixXcd d = reduce(PureState(vac), Side::left) - reduce(PureState(disp, 1e-10), Side::left);
  r.lhs = trace_norm(d);
  r.lhs_closed = 2.0 * std::sqrt(-std::expm1(-std::norm(beta)));
  r.rhs = M_of_r(2.0 * std::abs(beta));
  r.holds = r.lhs >= r.rhs - 1e-8;
  return r;
}

/// Random normalized state with i.i.d. complex Gaussian amplitudes.
template <class Rng>
PureState random_state(int d1, int d2, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(d1, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) a(i, j) = cplx(g(rng), g(rng));
  a /= a.norm();
  return PureState(a);
}

/// Haar-distributed unitary via QR of a complex Ginibre matrix.
template <class Rng>
Eigen::MatrixXcd random_unitary(int d, Rng& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const cplx diag = r(j, j);
    q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

inline void to_json(nlohmann::json& j, const CoherentBoundResult& r) {
  j = {{"lhs", r.lhs},         {"lhs_closed", r.lhs_closed}, {"rhs", r.rhs},
       {"tail_mass", r.tail_mass}, {"fock_dim", r.fock_dim},   {"holds", r.holds}};
}

}  // namespace colnoise
