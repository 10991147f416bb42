// Build a kernel, look at its spectrum, and compare Z_n with Z along two schedules.

#include <cstdio>

#include "colnoise/colnoise.hpp"

int main() {
  using namespace colnoise;
  const auto k = make_kernel(2.0);
  std::printf("B(t) = 1/(t ln^2(1/t)) near 0, cut at %.4g, zero from t = %.6f\n", k.eps_cut, k.t_zero);
  std::printf("B^(0) = %.6f, B^(1e4) = %.3e\n", spectral_density(k, 0.0), spectral_density(k, 1e4));

  const auto g = build_gram(k, 1.0, 16);
  std::printf("Gram N=16: ||G - I||_F^2 = %.5f, min eigenvalue %.4f\n", hs_defect(g), min_eigenvalue(g));

  for (auto kind : {ScheduleKind::subcritical, ScheduleKind::critical}) {
    const auto s = threshold_scan(k, doubling_schedule(kind, 2.0, 64, 4096));
    std::printf("%s schedule -> %s\n", kind == ScheduleKind::subcritical ? "subcritical" : "critical",
                to_string(s.trend));
    for (const auto& z : s.rows) std::printf("  n=%5d eps=%.4f var(Zn)=%.4f corr=%.4f\n", z.n, z.eps_n, z.var_Zn, z.corr);
  }

  const auto mc = mc_zn(k, 64, 0.25, 20000, 1);
  std::printf("Monte Carlo n=64 eps=1/4: corr %.4f, 95%% CI [%.4f, %.4f]\n", mc.corr_hat, mc.corr_ci.lo, mc.corr_ci.hi);
  return 0;
}
