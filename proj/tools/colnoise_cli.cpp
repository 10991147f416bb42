// colnoise: runs named experiments and writes <out>/<command>.csv and .json.
//
// Exit codes: 0 success, 2 a reported check failed, 1 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "colnoise/colnoise.hpp"

namespace fs = std::filesystem;
using namespace colnoise;
using nlohmann::json;

namespace {

struct Config {
  double alpha = 2.0, alpha_a = 1.5, alpha_b = 2.5, T = 1.0;
  int N = 64;
  std::string schedule = "critical";
  int n_min = 64, n_max = 16384;
  std::string eps_file;
  double eps = 0.25;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int samples = 0;
  int emit_samples = 0;
  std::string out = "colnoise_out";
  double tol_quad = 1e-8;
  std::string format = "both";
};

json echo(const Config& c) {
  json j = {{"alpha", c.alpha},   {"alpha_a", c.alpha_a}, {"alpha_b", c.alpha_b},   {"T", c.T},
            {"N", c.N},           {"schedule", c.schedule}, {"n_min", c.n_min},      {"n_max", c.n_max},
            {"eps_file", c.eps_file}, {"eps", c.eps},     {"samples", c.samples},    {"out", c.out},
            {"tol_quad", c.tol_quad}, {"format", c.format}, {"emit_samples", c.emit_samples}};
  j["seed"] = c.has_seed ? json(c.seed) : json(nullptr);
  return j;
}

struct Check {
  std::string name;
  bool pass;
  double margin;
};

struct Report {
  json results = json::object();
  std::vector<Check> checks;
  std::string csv;
  void check(std::string name, double margin) { checks.push_back({std::move(name), margin >= 0.0, margin}); }
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_row(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<int> doubling(int lo, int hi) {
  if (lo < 2 || hi < lo) throw UsageError("need 2 <= --n-min <= --n-max");
  std::vector<int> v;
  for (long n = lo; n <= hi; n *= 2) v.push_back(int(n));
  return v;
}

std::vector<std::pair<int, double>> read_eps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read --eps-file " + path);
  std::vector<std::pair<int, double>> s;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    std::istringstream is(line);
    int n;
    double e;
    if (!(is >> n >> e)) throw UsageError("bad line in --eps-file: " + line);
    s.emplace_back(n, e);
  }
  if (s.empty()) throw UsageError("--eps-file has no rows");
  return s;
}

std::uint64_t need_seed(const Config& c, const char* cmd) {
  if (!c.has_seed) throw UsageError(std::string(cmd) + " is stochastic and requires --seed");
  return c.seed;
}

Report cmd_kernel(const Config& c) {
  Report r;
  const auto k = make_kernel(c.alpha, 0.0, c.T);
  const auto s = shape_report(k, 2000);
  r.results = {{"kernel", k}, {"shape", s}, {"B_hat_0", spectral_density(k, 0.0)}};
  std::ostringstream os;
  os << "t,B\n";
  for (int i = 0; i <= 200; ++i) {
    const double t = k.t_zero * std::pow(1e-8, 1.0 - i / 200.0);
    os << fmt_row("%.12e,%.12e\n", t, i == 200 ? 0.0 : eval_B(k, t));
  }
  r.csv = os.str();
  r.check("positive", s.positive ? 0.0 : -1.0);
  r.check("decreasing", s.decreasing ? 0.0 : -1.0);
  r.check("convex", s.convex ? 0.0 : -1.0);
  r.check("spectral_nonnegative", s.min_spectral + 1e-9);
  return r;
}

Report cmd_spectrum(const Config& c) {
  Report r;
  const auto a = asymptote_check(make_kernel(c.alpha, 0.0, c.T), c.T, log_lambda_grid());
  r.results = a;
  std::ostringstream os;
  write_csv(os, a);
  r.csv = os.str();
  const double last = a.ratio_value.back();
  r.check("final_ratio_in_band", 0.25 - std::abs(last - 1.0));
  return r;
}

Report cmd_gram(const Config& c) {
  Report r;
  if (c.N < 16) throw UsageError("--N must be at least 16 for gram");
  std::vector<int> Ns;
  for (int n = 16; n <= c.N; n *= 2) Ns.push_back(n);
  const auto rows = defect_sequence(make_kernel(c.alpha, 0.0, c.T), c.T, Ns);
  std::ostringstream os;
  write_csv(os, rows);
  r.csv = os.str();
  double min_eig = INFINITY, incr_margin = INFINITY;
  json jr = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    min_eig = std::min(min_eig, rows[i].min_eig);
    if (i >= 2) incr_margin = std::min(incr_margin, rows[i - 1].increment - rows[i].increment);
    jr.push_back({{"N", rows[i].N}, {"hs_defect", rows[i].S}, {"increment", rows[i].increment},
                  {"min_eig", rows[i].min_eig}});
  }
  r.results = {{"rows", jr}, {"min_eig", min_eig}};
  r.check("min_eig_above_0.02", min_eig - 0.02);
  if (std::isfinite(incr_margin)) r.check("increments_decreasing", incr_margin);
  return r;
}

Report cmd_zn_scan(const Config& c) {
  Report r;
  std::vector<std::pair<int, double>> sched;
  if (c.schedule == "custom") {
    if (c.eps_file.empty()) throw UsageError("--schedule custom requires --eps-file");
    sched = read_eps_file(c.eps_file);
  } else {
    const auto kind = c.schedule == "subcritical" ? ScheduleKind::subcritical
                      : c.schedule == "critical"  ? ScheduleKind::critical
                                                  : ScheduleKind::supercritical;
    for (int n : doubling(c.n_min, c.n_max)) sched.emplace_back(n, schedule_eps(kind, c.alpha, n));
  }
  const auto s = threshold_scan(make_kernel(c.alpha, 0.0, c.T), sched);
  std::ostringstream os;
  write_csv(os, s.rows);
  r.csv = os.str();
  r.results = {{"classification", to_string(s.trend)},
               {"last_var_change", s.last_var_change},
               {"last_corr_change", s.last_corr_change},
               {"rows", s.rows}};
  r.check("classified", s.trend == Trend::inconclusive ? -1.0 : 0.0);
  return r;
}

Report cmd_separation(const Config& c) {
  Report r;
  const auto s =
      separation_report(make_kernel(c.alpha_a, 0.0, c.T), make_kernel(c.alpha_b, 0.0, c.T), doubling(c.n_min, c.n_max));
  std::ostringstream os;
  write_csv(os, s);
  r.csv = os.str();
  const bool separated = s.floor_b > 0.0 && s.a_decreasing_tail;
  r.results = {{"alpha_a", s.alpha_a},
               {"alpha_b", s.alpha_b},
               {"floor_b", s.floor_b},
               {"a_decreasing_tail", s.a_decreasing_tail},
               {"a_final_over_initial", s.a_final_over_initial},
               {"verdict", separated ? "separated" : "not-separated"}};
  r.check("b_floor_positive", s.floor_b);
  r.check("a_decreasing_tail", s.a_decreasing_tail ? 0.0 : -1.0);
  return r;
}

std::vector<double> dirichlet(std::mt19937_64& rng, int k) {
  std::gamma_distribution<double> g(1.0, 1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& x : p) s += (x = g(rng));
  for (auto& x : p) x /= s;
  return p;
}

Report cmd_measures(const Config& c) {
  Report r;
  std::mt19937_64 rng(need_seed(c, "measures"));
  const int pairs = c.samples > 0 ? c.samples : 1000;
  std::ostringstream os;
  os << "pair,k,lower,middle,upper,lower_margin,upper_margin\n";
  double worst_lower = INFINITY, worst_upper = INFINITY;
  int violations = 0;
  char buf[256];
  for (int i = 0; i < pairs; ++i) {
    const int k = 2 + int(rng() % 9);
    const auto s = sandwich_check(DiscreteMeasurePair(dirichlet(rng, k), dirichlet(rng, k)));
    worst_lower = std::min(worst_lower, s.lower_margin);
    worst_upper = std::min(worst_upper, s.upper_margin);
    violations += !s.holds;
    std::snprintf(buf, sizeof buf, "%d,%d,%.12e,%.12e,%.12e,%.12e,%.12e\n", i, k, s.lower, s.middle, s.upper,
                  s.lower_margin, s.upper_margin);
    os << buf;
  }
  r.csv = os.str();
  double mult = 0.0, sym = 0.0;
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < pairs; ++i) {
    const double a = std::exp(u(rng)), b = std::exp(u(rng));
    mult = std::max(mult, std::abs(gaussian_affinity({a, b}) - gaussian_affinity({a}) * gaussian_affinity({b})));
    sym = std::max(sym, std::abs(gaussian_affinity({a}) - gaussian_affinity({1.0 / a})));
  }
  r.results = {{"pairs", pairs},
               {"sandwich_violations", violations},
               {"worst_lower_margin", worst_lower},
               {"worst_upper_margin", worst_upper},
               {"multiplicativity_error", mult},
               {"symmetry_error", sym}};
  r.check("sandwich_lower", worst_lower + 1e-12);
  r.check("sandwich_upper", worst_upper + 1e-12);
  r.check("affinity_multiplicative", 1e-12 - mult);
  r.check("affinity_symmetric", 1e-12 - sym);
  return r;
}

Report cmd_fock(const Config& c) {
  Report r;
  std::mt19937_64 rng(need_seed(c, "fock"));
  const int trials = c.samples > 0 ? c.samples : 1000;
  double lip = INFINITY, cov = 0.0;
  for (int i = 0; i < trials; ++i) {
    const int d1 = 1 + int(rng() % 6), d2 = 1 + int(rng() % 6);
    const auto a = random_state(d1, d2, rng), b = random_state(d1, d2, rng);
    lip = std::min(lip, lipschitz_check(a, b).margin());
    cov = std::max(cov, covariance_check(a, random_unitary(d1, rng), random_unitary(d2, rng)).max_error);
  }
  std::ostringstream os;
  os << "beta,lhs,lhs_closed,rhs,fock_dim\n";
  double coh = INFINITY;
  char buf[200];
  for (int i = 1; i <= 50; ++i) {
    const double beta = 4.0 * i / 50.0;
    const auto b = coherent_bound_check(cplx(beta, 0.0), 0, c.tol_quad);
    coh = std::min(coh, b.lhs - b.rhs);
    std::snprintf(buf, sizeof buf, "%.4f,%.12e,%.12e,%.12e,%d\n", beta, b.lhs, b.lhs_closed, b.rhs, b.fock_dim);
    os << buf;
  }
  r.csv = os.str();
  r.results = {{"trials", trials}, {"lipschitz_min_margin", lip}, {"covariance_max_error", cov},
               {"coherent_min_margin", coh}};
  r.check("lipschitz", lip + 1e-10);
  r.check("covariance", 1e-10 - cov);
  r.check("coherent_slice", coh + 1e-8);
  return r;
}

Report cmd_simulate(const Config& c, const fs::path& out) {
  Report r;
  const auto seed = need_seed(c, "simulate");
  const int samples = c.samples > 0 ? c.samples : 100000;
  const auto k = make_kernel(c.alpha, 0.0, c.T);
  const auto m = mc_zn(k, c.N, c.eps, samples, seed);
  const auto q = zn_stats(k, c.N, c.eps);
  r.results = {{"mc", m}, {"quadrature_corr", q.corr}, {"quadrature_var_Zn", q.var_Zn}};
  std::ostringstream os;
  char buf[400];
  os << "n,eps_n,n_bins,samples,corr_hat,corr_lo,corr_hi,var_hat,var_lo,var_hi,corr_quadrature,clip_ratio\n";
  std::snprintf(buf, sizeof buf, "%d,%.12e,%d,%d,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.12e,%.6e\n", m.n, m.eps_n,
                m.n_bins, m.n_samples, m.corr_hat, m.corr_ci.lo, m.corr_ci.hi, m.var_hat, m.var_ci.lo, m.var_ci.hi,
                q.corr, m.clip_ratio);
  os << buf;
  r.csv = os.str();
  r.check("corr_in_ci", std::min(q.corr - m.corr_ci.lo, m.corr_ci.hi - q.corr));
  r.check("clip_ratio", 1e-6 - m.clip_ratio);
  if (c.emit_samples > 0) {
    if (double(c.emit_samples) * m.n_bins > 1e7) throw UsageError("--emit-samples too large (limit 1e7 values)");
    const auto X = sample(bin_cov(k, m.n_bins), c.emit_samples, seed);
    std::ofstream f(out / "simulate_samples.csv");
    for (int i = 0; i < X.rows(); ++i)
      for (int j = 0; j < X.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%.12e%c", X(i, j), j + 1 == X.cols() ? '\n' : ',');
        f << buf;
      }
  }
  return r;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"colnoise: numerical experiments on slightly coloured noise kernels"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);
  app.fallthrough();

  Config c;
  app.add_option("--alpha", c.alpha, "log exponent of the kernel")->check(CLI::Range(1.0 + 1e-9, 1e3));
  app.add_option("--alpha-a", c.alpha_a, "system A exponent (separation)");
  app.add_option("--alpha-b", c.alpha_b, "system B exponent (separation)");
  app.add_option("--T", c.T, "period / window length")->check(CLI::PositiveNumber);
  app.add_option("--N", c.N, "Gram truncation (gram) or cell count (simulate)")->check(CLI::PositiveNumber);
  app.add_option("--schedule", c.schedule)
      ->check(CLI::IsMember({"subcritical", "critical", "supercritical", "custom"}));
  app.add_option("--n-min", c.n_min, "first n of a doubling scan");
  app.add_option("--n-max", c.n_max, "last n of a doubling scan");
  app.add_option("--eps-file", c.eps_file, "custom schedule: lines 'n eps'");
  app.add_option("--eps", c.eps, "eps_n for simulate");
  auto* seed = app.add_option("--seed", c.seed, "RNG seed (required by stochastic commands)");
  app.add_option("--samples", c.samples, "sample / trial count (0 = command default)");
  app.add_option("--emit-samples", c.emit_samples, "simulate: also write this many raw bin samples");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--tol-quad", c.tol_quad, "truncation tolerance (Fock tail mass)")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format)->check(CLI::IsMember({"csv", "json", "both"}));

  const char* names[] = {"kernel", "spectrum", "gram", "zn-scan", "separation", "measures", "fock", "simulate"};
  for (const char* n : names) app.add_subcommand(n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  c.has_seed = seed->count() > 0;
  const std::string cmd = app.get_subcommands().front()->get_name();

  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  const fs::path out(c.out);
  try {
    fs::create_directories(out);
    if (cmd == "kernel") r = cmd_kernel(c);
    else if (cmd == "spectrum") r = cmd_spectrum(c);
    else if (cmd == "gram") r = cmd_gram(c);
    else if (cmd == "zn-scan") r = cmd_zn_scan(c);
    else if (cmd == "separation") r = cmd_separation(c);
    else if (cmd == "measures") r = cmd_measures(c);
    else if (cmd == "fock") r = cmd_fock(c);
    else r = cmd_simulate(c, out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool all = true;
  json checks = json::array();
  for (const auto& ch : r.checks) {
    all = all && ch.pass;
    checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"margin", ch.margin}});
  }
  if (c.format != "json") std::ofstream(out / (cmd + ".csv")) << r.csv;
  if (c.format != "csv") {
    const json j = {{"command", cmd},       {"version", kVersion}, {"config", echo(c)},    {"results", r.results},
                    {"checks", checks},     {"runtime_s", runtime}, {"timestamp", utc_now()}};
    std::ofstream(out / (cmd + ".json")) << j.dump(2) << "\n";
  }
  for (const auto& ch : r.checks)
    std::printf("%-24s %s  margin %.3e\n", ch.name.c_str(), ch.pass ? "pass" : "FAIL", ch.margin);
  if (r.results.contains("classification"))
    std::printf("classification: %s\n", r.results["classification"].get<std::string>().c_str());
  if (r.results.contains("verdict")) std::printf("verdict: %s\n", r.results["verdict"].get<std::string>().c_str());
  return all ? 0 : 2;
}
