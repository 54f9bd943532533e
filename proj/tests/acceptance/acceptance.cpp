// One line per acceptance criterion: "ACn PASS|FAIL|SKIP <detail>".
// Exit status is nonzero only when a criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nsgev/distributions.hpp"
#include "nsgev/error.hpp"
#include "nsgev/fitters.hpp"
#include "nsgev/inference.hpp"
#include "nsgev/lmoments.hpp"
#include "nsgev/regression.hpp"
#include "nsgev/returns.hpp"
#include "nsgev/rng.hpp"
#include "nsgev/simulation.hpp"
#include "oracles.hpp"

using namespace nsgev;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::pass;
  std::string detail;
};

// Collects failed checks; the first few go into the detail line.
struct Checks {
  std::size_t total = 0;
  std::vector<std::string> failed;

  void near(double got, double want, double tol, const std::string& what) {
    ++total;
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream os;
      os << what << ": got " << got << " want " << want << " +/- " << tol;
      failed.push_back(os.str());
    }
  }
  void rel(double got, double want, double frac, const std::string& what) {
    near(got, want, frac * std::abs(want), what);
  }
  // Relative band, never tighter than half a unit of the last reported digit.
  void reported(double got, double want, double frac, double half_unit, const std::string& what) {
    near(got, want, std::max(frac * std::abs(want), half_unit), what);
  }
  void truth(bool ok, const std::string& what) {
    ++total;
    if (!ok) failed.push_back(what);
  }
  Outcome outcome(std::string pass_note = {}) const {
    if (failed.empty()) return {Verdict::pass, std::to_string(total) + " checks" + (pass_note.empty() ? "" : "; " + pass_note)};
    std::string d = std::to_string(failed.size()) + "/" + std::to_string(total) + " checks failed";
    for (std::size_t i = 0; i < failed.size() && i < 4; ++i) d += "; " + failed[i];
    return {Verdict::fail, d};
  }
};

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

const double kXi8[] = {-0.35, -0.25, -0.15, -0.05, 0.05, 0.15, 0.25, 0.35};

Outcome ac1() {
  Checks c;
  const double want[] = {79.51, 58.79, 43.95, 33.21, 25.36, 19.55, 15.19, 11.89};
  const auto d = SimDesign::gev11();
  for (int k = 0; k < 8; ++k)
    c.near(conventional_rl_at(d.true_params(kXi8[k]), time_row(d.spec, 50), 100), want[k], 0.02,
           "xi=" + fmt(kXi8[k]));
  const double gum = conventional_rl_at(d.true_params(0.0), time_row(d.spec, 50), 100);
  c.near(gum, 28.99, 0.02, "xi=0 analytic");
  return c.outcome("xi=0 cell " + fmt(gum) + " (reference table lists 28.59)");
}

Outcome ac2() {
  Checks c;
  const double want[] = {37.44, 29.24, 23.02, 18.25, 14.58, 11.71, 9.46, 7.66};
  const auto d = SimDesign::gev11();
  for (int k = 0; k < 8; ++k) c.near(parey_rl(d.true_params(kXi8[k]), d.spec, 50), want[k], 0.02, "xi=" + fmt(kXi8[k]));
  // xi = 0: the tabulated 16.47 is not reproducible; compare with an
  // independent bisection on the exceedance count instead.
  const auto p0 = d.true_params(0.0);
  auto excess = [&](double r) {
    double s = 0;
    for (int t = 1; t <= 50; ++t) s += 1 - oracle::gev_F(r, -0.1 * t, std::exp(1 + 0.02 * t), 0.0);
    return s - 1;
  };
  const double ref = oracle::bisect(excess, -50, 500);
  const double gum = parey_rl(p0, d.spec, 50);
  c.near(gum, ref, 1e-6, "xi=0 oracle");
  return c.outcome("xi=0 cell " + fmt(gum, 3) + " (reference table lists 16.47)");
}

Outcome ac3() {
  Checks c;
  const auto z = gev_rand(1000000, {0, 1, 0}, 20240601);
  const auto lm = sample_lmoments(z);
  c.near(lm.l1, 0.57722, 0.005, "l1");
  c.near(lm.l2, 0.69315, 0.005, "l2");
  c.near(lm.t3, 0.16993, 0.005, "t3");
  CounterRng rng(31337);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const GevParams p{20 * (rng.uniform() - 0.5), std::exp(4 * (rng.uniform() - 0.5)), 0.9 * (rng.uniform() - 0.5)};
    const double x = gev_quantile(0.001 + 0.998 * rng.uniform(), p);
    const double back = gumbel_back_transform(gumbel_transform(x, p), p);
    worst = std::max(worst, std::abs(back - x) / std::max(1.0, std::abs(x)));
  }
  c.truth(worst <= 1e-10, "round trip worst " + sci(worst));
  return c.outcome("l=(" + fmt(lm.l1, 5) + ", " + fmt(lm.l2, 5) + ", " + fmt(lm.t3, 5) + "), round trip " + sci(worst));
}

Outcome ac4() {
  Checks c;
  CounterRng r(4242);
  // 50 base samples of size 8; every prefix of size 4..8 is checked.
  for (int k = 0; k < 50; ++k) {
    std::vector<double> base(8);
    const GevParams p{10 * (r.uniform() - 0.5), std::exp(r.uniform()), 0.8 * (r.uniform() - 0.5)};
    for (auto& v : base) v = gev_draw(r, p);
    if (k % 10 == 0) base[3] = base[1];  // ties
    for (std::size_t n = 4; n <= 8; ++n) {
      std::vector<double> x(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(n));
      const auto lm = sample_lmoments(x);
      const double b2 = oracle::brute_lmoment(x, 2);
      c.near(lm.l1, oracle::brute_lmoment(x, 1), 1e-12, "l1");
      c.near(lm.l2, b2, 1e-12, "l2");
      c.near(lm.t3, oracle::brute_lmoment(x, 3) / b2, 1e-12, "t3");
      c.near(lm.t4, oracle::brute_lmoment(x, 4) / b2, 1e-12, "t4");
    }
  }
  return c.outcome();
}

std::size_t env_size(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  return static_cast<std::size_t>(std::strtoull(v, nullptr, 10));
}

Outcome ac5() {
  const std::size_t N = env_size("NSGEV_AC5_N", 1000);
  const bool full = N >= 1000;
  auto d = SimDesign::gev11();
  d.replicates = N;
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = run_simulation(d, default_sim_methods(), 1);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::map<std::tuple<std::string, Method, double>, double> cell;
  for (const auto& x : rep.cells)
    if (x.target == SimTarget::conventional) cell[{x.measure, x.method, x.xi}] = x.value;
  Checks c;
  if (full) {
    const double xi[] = {-0.25, -0.05, 0.15};
    const double want[] = {24.49, 12.87, 8.04};
    for (int k = 0; k < 3; ++k) c.rel(cell.at({"rmse", Method::prop, xi[k]}), want[k], 0.15, "PROP rmse xi=" + fmt(xi[k]));
  }
  for (double xi : d.xi_grid) {
    if (xi > 0) continue;
    const double p = cell.at({"rmse", Method::prop, xi}), g = cell.at({"rmse", Method::gn16, xi});
    c.truth(p < g, "PROP rmse " + fmt(p) + " !< GN16 " + fmt(g) + " at xi=" + fmt(xi));
  }
  for (double xi : {-0.35, -0.25, -0.15}) {
    const double b = cell.at({"bias", Method::lme_sta_gev, xi});
    c.truth(b < -10, "LME bias " + fmt(b) + " at xi=" + fmt(xi));
  }
  std::string note = "N=" + std::to_string(N) + (full ? "" : " smoke tier (ordering and bias only)") +
                     ", PROP rmse " + fmt(cell.at({"rmse", Method::prop, -0.25})) + "/" +
                     fmt(cell.at({"rmse", Method::prop, -0.05})) + "/" + fmt(cell.at({"rmse", Method::prop, 0.15})) +
                     ", " + fmt(secs, 1) + " s";
  return c.outcome(note);
}

fs::path find_data(const char* env, const char* name) {
  if (const char* v = std::getenv(env); v != nullptr && *v != '\0') return v;
  const fs::path p = fs::path(NSGEV_SOURCE_DIR) / "data" / name;
  return fs::exists(p) ? p : fs::path{};
}

Outcome ac6() {
  const auto path = find_data("NSGEV_TREHAFOD_CSV", "trehafod.csv");
  if (path.empty()) return {Verdict::skip, "Trehafod series not supplied (set NSGEV_TREHAFOD_CSV or add data/trehafod.csv)"};
  const auto s = ingest_csv(path);
  Checks c;
  const auto gum = fit_stationary(s, true).params;
  c.rel(gum.mu_coef[0], 110.7, 0.005, "Gumbel mu");
  c.rel(std::exp(gum.logsigma_coef[0]), 30.15, 0.005, "Gumbel sigma");
  const auto gev = fit_stationary(s, false).params;
  c.rel(gev.mu_coef[0], 110.9, 0.005, "GEV mu");
  c.rel(std::exp(gev.logsigma_coef[0]), 30.57, 0.005, "GEV sigma");
  c.reported(gev.xi, 0.015, 0.005, 0.0005, "GEV xi");
  const auto prop = fit_prop(s, ModelSpec::gev11());
  const double got[] = {prop.params.mu_coef[0], prop.params.mu_coef[1], prop.params.logsigma_coef[0],
                        prop.params.logsigma_coef[1], prop.params.xi};
  const double want[] = {82.9, 1.09, 3.12, 0.0013, -0.093};
  const char* names[] = {"mu0", "mu1", "sigma0", "sigma1", "xi"};
  const double half[] = {0.05, 0.005, 0.005, 0.00005, 0.0005};
  for (int k = 0; k < 5; ++k) c.reported(got[k], want[k], 0.02, half[k], std::string("PROP ") + names[k]);
  const int T[] = {2, 10, 20, 50, 100, 200};
  const double rl[] = {92.9, 146.0, 173.4, 225.1, 293.1, 422.5};
  for (int k = 0; k < 6; ++k) c.rel(parey_rl(prop.params, prop.spec, T[k]), rl[k], 0.02, "Parey T=" + std::to_string(T[k]));
  return c.outcome(path.string());
}

Outcome ac7() {
  const auto path = find_data("NSGEV_FREMANTLE_CSV", "fremantle.csv");
  if (path.empty()) return {Verdict::skip, "Fremantle series not supplied (set NSGEV_FREMANTLE_CSV or add data/fremantle.csv)"};
  const auto s = ingest_csv(path);
  if (!s.has_covariate("soi")) return {Verdict::fail, "Fremantle file has no soi column"};
  Checks c;
  const std::vector<ModelSpec> models{ModelSpec::stationary(), ModelSpec::parse("loc=t"), ModelSpec::parse("loc=soi"),
                                      ModelSpec::parse("loc=t+soi")};
  std::vector<FitResult> fits;
  for (const auto& m : models) fits.push_back(fit_prop_covariate(s, m));
  auto check = [&](const FitResult& f, std::vector<double> want, const std::string& label) {
    auto got = parameter_vector(f);
    for (std::size_t k = 0; k < want.size() && k < got.size(); ++k)
      c.near(got[k], want[k], 0.02, label + " coef " + std::to_string(k));
    c.truth(got.size() == want.size(), label + " parameter count");
  };
  check(fits[1], {1.39, 0.0019, 0.125, 0.120}, "Model 1");
  check(fits[3], {1.34, 0.0020, 0.064, 0.122, 0.169}, "Model 3");
  const std::vector<std::vector<double>> se{{0.017, 0.013, 0.084},
                                            {0.037, 0.0006, 0.010, 0.085},
                                            {0.018, 0.022, 0.012, 0.081},
                                            {0.033, 0.0006, 0.021, 0.010, 0.075}};
  for (std::size_t m = 0; m < 4; ++m) {
    const auto b = bootstrap_se(fits[m], s, 300, 1);
    for (std::size_t k = 0; k < se[m].size() && k < b.se.size(); ++k)
      c.rel(b.se[k], se[m][k], 0.30, "Model " + std::to_string(m) + " SE " + b.names[k]);
  }
  int wins = 0;
  CvGldOptions opt;
  opt.covariate_variant = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) wins += cv_gld(s, models, Method::prop, seed, opt).best == 3;
  c.truth(wins >= 7, "Model 3 lowest CV GLD in " + std::to_string(wins) + "/10 seeds");
  return c.outcome("Model 3 lowest in " + std::to_string(wins) + "/10 seeds");
}

Outcome ac8() {
  Checks c;
  // PROP residual bound on converged fits.
  std::size_t converged = 0;
  double worst = 0.0;
  const auto d = SimDesign::gev11();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed, 99);
    const auto truth = d.true_params(-0.35 + 0.007 * static_cast<double>(seed));
    std::vector<double> z(50);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = gev_draw(rng, evaluate(truth, time_row(d.spec, i + 1.0)));
    const auto r = fit_prop(AnnualSeries::from_values(z), d.spec);
    if (!r.diagnostics.converged) continue;
    ++converged;
    worst = std::max(worst, r.diagnostics.residual_norm);
  }
  c.truth(worst < 1e-8, "PROP residual bound worst " + sci(worst));
  c.truth(converged >= 90, "PROP converged " + std::to_string(converged) + "/100");

  // rmse^2 = bias^2 + se^2.
  auto small = SimDesign::gev11();
  small.xi_grid = {-0.15, 0.15};
  small.replicates = 30;
  small.threads = 1;
  const auto a = run_simulation(small, default_sim_methods(), 5);
  std::map<std::tuple<std::string, Method, double, SimTarget>, double> cell;
  for (const auto& x : a.cells) cell[{x.measure, x.method, x.xi, x.target}] = x.value;
  for (const auto& x : a.cells) {
    if (x.measure != "rmse") continue;
    const double b = cell.at({"bias", x.method, x.xi, x.target}), s = cell.at({"se", x.method, x.xi, x.target});
    c.near(x.value * x.value, b * b + s * s, 1e-9 * (1 + x.value * x.value), "rmse identity");
  }

  // MM regression resists 20% gross outliers; OLS does not.
  {
    const std::size_t n = 60;
    std::vector<double> t(n), y(n);
    CounterRng rng(8);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<double>(i + 1);
      y[i] = 2 + 0.5 * t[i] + (rng.uniform() - 0.5);
      if (i % 5 == 0) y[i] += 200;
    }
    const auto X = DesignMatrix::with_intercept(n, {{"t", t}});
    const auto mm = mm_robust_fit(X, y);
    c.near(mm.coef(1), 0.5, 0.05, "MM slope under outliers");
    c.near(mm.coef(0), 2.0, 1.0, "MM intercept under outliers");
  }

  // Fixed seed, different thread counts: byte-identical CSV.
  auto th = small;
  th.replicates = 8;
  th.keep_replicates = true;
  const auto x1 = run_simulation(th, default_sim_methods(), 77);
  th.threads = 3;
  const auto x3 = run_simulation(th, default_sim_methods(), 77);
  c.truth(sim_report_csv(x1) == sim_report_csv(x3) && sim_replicates_csv(x1) == sim_replicates_csv(x3),
          "simulation output depends on the thread count");
  const auto s = AnnualSeries::from_values(gev_rand(50, {5, 2, -0.1}, 3));
  const auto f = fit_prop(s, ModelSpec::gev11());
  c.truth(bootstrap_se(f, s, 30, 4, 1).se == bootstrap_se(f, s, 30, 4, 2).se, "bootstrap depends on the thread count");
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    failures += o.verdict == Verdict::fail;
    std::printf("%s %s %s\n", name, tag, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
