#pragma once

// Hellinger affinity vs variation distance for discrete measures, Kakutani's
// criterion for Gaussian product measures, and the closed-form overlaps of
// shifted and coherent Gaussian states.

#include <cmath>
#include <vector>

#include <json.hpp>

#include "colnoise/error.hpp"

namespace colnoise {

struct DiscreteMeasurePair {
  std::vector<double> p, q;

  DiscreteMeasurePair(std::vector<double> p_, std::vector<double> q_) : p(std::move(p_)), q(std::move(q_)) {
    if (p.size() != q.size() || p.empty()) throw ParameterError("measure pair: supports must have equal nonzero size");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) throw ParameterError("measure pair: weights must be nonnegative");
      sp += p[i];
      sq += q[i];
    }
    if (std::abs(sp - 1.0) > 1e-12 || std::abs(sq - 1.0) > 1e-12)
      throw ParameterError("measure pair: weights must sum to 1");
  }
};

/// sum_i sqrt(p_i q_i).
inline double hellinger_affinity(const DiscreteMeasurePair& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.p.size(); ++i) s += std::sqrt(m.p[i] * m.q[i]);
  return s;
}

/// ||P - Q|| = sum_i |p_i - q_i|, in [0, 2].
inline double variation_distance(const DiscreteMeasurePair& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.p.size(); ++i) s += std::abs(m.p[i] - m.q[i]);
  return s;
}

struct SandwichResult {
  double lower = 0.0;   // (||P-Q|| / 2)^2
  double middle = 0.0;  // 1 - affinity
  double upper = 0.0;   // ||P-Q|| / 2
  double lower_margin = 0.0, upper_margin = 0.0;  // middle - lower, upper - middle
  bool holds = false;
  // (||P-Q|| / 2)^2 <= 1 - affinity^2, the bound that is actually true.
  double squared_affinity_margin = 0.0;
};

/// (||P-Q||/2)^2 <= 1 - <sqrt P, sqrt Q> <= ||P-Q||/2, with `slack`.
inline SandwichResult sandwich_check(const DiscreteMeasurePair& m, double slack = 1e-12) {
  const double aff = hellinger_affinity(m);
  const double half = 0.5 * variation_distance(m);
  SandwichResult r;
  r.lower = half * half;
  r.middle = 1.0 - aff;
  r.upper = half;
  r.lower_margin = r.middle - r.lower;
  r.upper_margin = r.upper - r.middle;
  r.holds = r.lower_margin >= -slack && r.upper_margin >= -slack;
  r.squared_affinity_margin = (1.0 - aff * aff) - r.lower;
  return r;
}

struct AffinityResult {
  double affinity = 0.0;
  double log_affinity = 0.0;
  bool underflow = false;  // log product below the floor; affinity reported as 0
};

/// prod_k ((l_k^{-1/2} + l_k^{1/2}) / 2)^{-1/2}, accumulated in log space.
inline AffinityResult gaussian_affinity_full(const std::vector<double>& lambdas, double log_floor = -700.0) {
  AffinityResult r;
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ParameterError("gaussian_affinity: ratios must be positive");
    const double s = std::sqrt(l);
    r.log_affinity -= 0.5 * std::log(0.5 * (s + 1.0 / s));
  }
  r.underflow = r.log_affinity < log_floor;
  r.affinity = r.underflow ? 0.0 : std::exp(r.log_affinity);
  return r;
}

inline double gaussian_affinity(const std::vector<double>& lambdas) { return gaussian_affinity_full(lambdas).affinity; }

enum class KakutaniVerdict { equivalent_signature, singular_signature, inconclusive };

inline const char* to_string(KakutaniVerdict v) {
  switch (v) {
    case KakutaniVerdict::equivalent_signature: return "equivalent-signature";
    case KakutaniVerdict::singular_signature: return "singular-signature";
    default: return "inconclusive";
  }
}

struct KakutaniResult {
  double sum_sq_sigma = 0.0, sum_sq_mean = 0.0;
  double increment_ratio = 0.0;  // last doubling increment over the previous one
  KakutaniVerdict verdict = KakutaniVerdict::inconclusive;
};

/// Partial sums of (sigma_k - 1)^2 + m_k^2 up to K and a doubling-increment trend.
/// `means` may be empty (all zero). Ratios <= 0.75 read as convergent, >= 0.9 as divergent.
inline KakutaniResult kakutani_check(const std::vector<double>& sigmas, const std::vector<double>& means, int K) {
  if (K < 8) throw ParameterError("kakutani_check: K must be at least 8");
  if (static_cast<int>(sigmas.size()) < K || (!means.empty() && static_cast<int>(means.size()) < K))
    throw ParameterError("kakutani_check: sequences shorter than K");
  auto partial = [&](int upto, double* ss, double* sm) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < upto; ++i) {
      if (!(sigmas[i] > 0.0)) throw ParameterError("kakutani_check: sigmas must be positive");
      a += (sigmas[i] - 1.0) * (sigmas[i] - 1.0);
      if (!means.empty()) b += means[i] * means[i];
    }
    if (ss) *ss = a;
    if (sm) *sm = b;
    return a + b;
  };
  KakutaniResult r;
  const double s4 = partial(K / 4, nullptr, nullptr);
  const double s2 = partial(K / 2, nullptr, nullptr);
  const double s1 = partial(K, &r.sum_sq_sigma, &r.sum_sq_mean);
  const double i_prev = s2 - s4, i_last = s1 - s2;
  if (i_last <= 1e-300 || s1 <= 1e-300) {
    r.increment_ratio = 0.0;
    r.verdict = KakutaniVerdict::equivalent_signature;
    return r;
  }
  r.increment_ratio = (i_prev > 0.0) ? i_last / i_prev : INFINITY;
  if (r.increment_ratio <= 0.75)
    r.verdict = KakutaniVerdict::equivalent_signature;
  else if (r.increment_ratio >= 0.9)
    r.verdict = KakutaniVerdict::singular_signature;
  return r;
}

/// exp(-||x||^2 / 8): affinity of a Gaussian measure and its shift by x.
inline double shift_affinity(double norm_x) {
  if (!(norm_x >= 0.0)) throw ParameterError("shift_affinity: norm must be nonnegative");
  return std::exp(-norm_x * norm_x / 8.0);
}

/// exp(-||y||^2 / 2): overlap of the vacuum and its coherent displacement by y.
inline double coherent_overlap(double norm_y) {
  if (!(norm_y >= 0.0)) throw ParameterError("coherent_overlap: norm must be nonnegative");
  return std::exp(-norm_y * norm_y / 2.0);
}

inline void to_json(nlohmann::json& j, const SandwichResult& r) {
  j = {{"lower", r.lower},
       {"middle", r.middle},
       {"upper", r.upper},
       {"lower_margin", r.lower_margin},
       {"upper_margin", r.upper_margin},
       {"holds", r.holds},
       {"squared_affinity_margin", r.squared_affinity_margin}};
}

}  // namespace colnoise
