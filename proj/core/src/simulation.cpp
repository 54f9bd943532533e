#include "nsgev/simulation.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsgev/distributions.hpp"
#include "nsgev/error.hpp"
#include "nsgev/fitters.hpp"
#include "nsgev/returns.hpp"
#include "nsgev/rng.hpp"
#include "parallel.hpp"

namespace nsgev {

const char* to_string(SimTarget t) noexcept { return t == SimTarget::conventional ? "conventional" : "parey"; }

SimDesign SimDesign::gev11() { return {}; }

SimDesign SimDesign::gev10() {
  SimDesign d;
  d.spec = ModelSpec::gev10();
  d.mu_coef = {0.0, -0.2};
  d.logsigma_coef = {0.0};
  return d;
}

SimDesign SimDesign::gev20() {
  SimDesign d;
  d.spec = ModelSpec::gev20();
  d.mu_coef = {50.0, -0.02, 0.06};
  d.logsigma_coef = {std::log(33.0)};
  return d;
}

NsGevParams SimDesign::true_params(double xi) const {
  NsGevParams p;
  p.mu_coef = mu_coef;
  p.logsigma_coef = logsigma_coef;
  p.xi = xi;
  return p;
}

void SimDesign::validate() const {
  if (!spec.time_only()) throw DomainError("simulation designs use time trends only");
  if (mu_coef.size() != spec.location_terms.size() + 1 || logsigma_coef.size() != spec.logscale_terms.size() + 1)
    throw DomainError("simulation coefficients do not match the model terms");
  if (xi_grid.empty() || n_values.empty()) throw DomainError("simulation grids must be non-empty");
  if (replicates < 1) throw DomainError("simulation needs at least one replicate");
  if (!(conventional_period > 1.0) || parey_period < 2) throw DomainError("return periods must exceed 1");
}

std::vector<Method> default_sim_methods() {
  return {Method::lme_sta_gev, Method::mle, Method::wls, Method::gn16, Method::prop};
}

std::vector<TrueRl> true_rl_table(const SimDesign& design) {
  design.validate();
  std::vector<TrueRl> out;
  for (std::size_t n : design.n_values) {
    for (double xi : design.xi_grid) {
      const NsGevParams p = design.true_params(xi);
      out.push_back({xi, n,
                     conventional_rl_at(p, time_row(design.spec, static_cast<double>(n)), design.conventional_period),
                     parey_rl(p, design.spec, design.parey_period)});
    }
  }
  return out;
}

SimReport run_simulation(const SimDesign& design, const std::vector<Method>& methods, std::uint64_t seed) {
  design.validate();
  if (methods.empty()) throw DomainError("simulation needs at least one method");
  SimReport report;
  report.seed = seed;
  report.replicates = design.replicates;
  report.true_rl = true_rl_table(design);

  const std::size_t nx = design.xi_grid.size(), nm = methods.size(), N = design.replicates;
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::size_t cell_row = 0;
  for (std::size_t ni = 0; ni < design.n_values.size(); ++ni) {
    const std::size_t n = design.n_values[ni];
    const ModelSpec fit_spec = design.spec;
    // results[(xi * N + rep) * nm + method]
    std::vector<SimReplicate> results(nx * N * nm);
    detail::parallel_for(nx * N, design.threads, [&](std::size_t job) {
      const std::size_t xk = job / N, rep = job % N;
      const double xi = design.xi_grid[xk];
      const NsGevParams truth = design.true_params(xi);
      CounterRng rng(seed, derive_stream({seed, xk, n, rep}));
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i)
        z[i] = gev_draw(rng, evaluate(truth, time_row(design.spec, static_cast<double>(i + 1))));
      const AnnualSeries series = AnnualSeries::from_values(z);
      for (std::size_t m = 0; m < nm; ++m) {
        SimReplicate& out = results[job * nm + m];
        out.method = methods[m];
        out.xi = xi;
        out.n = n;
        out.rep = rep;
        out.conventional = kNaN;
        out.parey = kNaN;
        try {
          const FitResult r = fit(methods[m], series, fit_spec);
          const double c = conventional_rl_at(r.params, time_row(r.spec, static_cast<double>(n)),
                                              design.conventional_period);
          const double pr = parey_rl(r.params, r.spec, design.parey_period);
          if (std::isfinite(c) && std::isfinite(pr)) {
            out.conventional = c;
            out.parey = pr;
          }
          out.fallback = r.diagnostics.fallback;
        } catch (const Error&) {
        }
      }
    });

    for (std::size_t m = 0; m < nm; ++m) {
      for (std::size_t xk = 0; xk < nx; ++xk) {
        const TrueRl& tr = report.true_rl[cell_row + xk];
        for (SimTarget target : {SimTarget::conventional, SimTarget::parey}) {
          const double truth = target == SimTarget::conventional ? tr.conventional : tr.parey;
          double sum = 0.0;
          std::size_t ok = 0;
          for (std::size_t rep = 0; rep < N; ++rep) {
            const auto& r = results[(xk * N + rep) * nm + m];
            const double v = target == SimTarget::conventional ? r.conventional : r.parey;
            if (std::isfinite(v)) {
              sum += v;
              ++ok;
            }
          }
          double bias = kNaN, se = kNaN;
          if (ok > 0) {
            const double mean = sum / static_cast<double>(ok);
            double ss = 0.0;
            for (std::size_t rep = 0; rep < N; ++rep) {
              const auto& r = results[(xk * N + rep) * nm + m];
              const double v = target == SimTarget::conventional ? r.conventional : r.parey;
              if (std::isfinite(v)) ss += (v - mean) * (v - mean);
            }
            bias = mean - truth;
            se = std::sqrt(ss / static_cast<double>(ok));
          }
          const double rmse = std::sqrt(bias * bias + se * se);
          const std::size_t failures = N - ok;
          for (auto [name, val] : {std::pair{"bias", bias}, std::pair{"se", se}, std::pair{"rmse", rmse}})
            report.cells.push_back({name, methods[m], design.xi_grid[xk], n, target, val, failures, truth});
        }
      }
    }
    if (design.keep_replicates)
      report.replicate_rows.insert(report.replicate_rows.end(), results.begin(), results.end());
    cell_row += nx;
  }
  return report;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string sim_report_csv(const SimReport& report) {
  std::ostringstream os;
  os << "measure,method,xi,n,target,value,failures,true_rl\n";
  for (const auto& c : report.cells) {
    os << c.measure << ',' << to_string(c.method) << ',' << format_double(c.xi) << ',' << c.n << ','
       << to_string(c.target) << ',' << format_double(c.value) << ',' << c.failures << ','
       << format_double(c.true_rl) << '\n';
  }
  return os.str();
}

std::string sim_replicates_csv(const SimReport& report) {
  std::ostringstream os;
  os << "method,xi,n,rep,conventional,parey,fallback\n";
  for (const auto& r : report.replicate_rows) {
    os << to_string(r.method) << ',' << format_double(r.xi) << ',' << r.n << ',' << r.rep << ','
       << format_double(r.conventional) << ',' << format_double(r.parey) << ',' << (r.fallback ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace nsgev
