#include "nsgev/returns.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsgev/error.hpp"
#include "nsgev/solvers.hpp"

namespace nsgev {

double conventional_rl_at(const NsGevParams& params, const CovariateRow& row, double period) {
  if (!(period > 1.0)) throw DomainError("return period must exceed 1");
  return gev_quantile(1.0 - 1.0 / period, evaluate(params, row));
}

ReturnLevelCurve conventional_rl(const NsGevParams& params, const ModelSpec& spec, double period,
                                 std::span<const double> t_values) {
  ReturnLevelCurve c;
  c.kind = ReturnLevelKind::conventional_at_t;
  c.period = period;
  c.t.assign(t_values.begin(), t_values.end());
  c.values.reserve(t_values.size());
  for (double t : t_values) c.values.push_back(conventional_rl_at(params, time_row(spec, t), period));
  return c;
}

double parey_rl(const NsGevParams& params, const ModelSpec& spec, int period) {
  if (period < 1) throw DomainError("Parey return period must be at least 1");
  std::vector<GevParams> per_year;
  per_year.reserve(static_cast<std::size_t>(period));
  for (int t = 1; t <= period; ++t) per_year.push_back(evaluate(params, time_row(spec, t)));

  auto g = [&](double r) {
    double s = -1.0;
    for (const auto& p : per_year) s += 1.0 - gev_cdf(r, p);
    return s;
  };
  const double T = period;
  const double q_lo = std::max(1.0 - 10.0 / T, 1e-3);
  const double q_hi = 1.0 - 1.0 / (10.0 * T);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : per_year) {
    lo = std::min(lo, gev_quantile(q_lo, p));
    hi = std::max(hi, gev_quantile(q_hi, p));
  }
  double width = std::max(hi - lo, 1e-8 * (1.0 + std::abs(hi)));
  for (int k = 0; k < 200 && g(lo) < 0.0; ++k) lo -= width * std::ldexp(1.0, k);
  for (int k = 0; k < 200 && g(hi) > 0.0; ++k) hi += width * std::ldexp(1.0, k);
  if (!(g(lo) >= 0.0) || !(g(hi) <= 0.0)) {
    std::ostringstream msg;
    msg << "parey_rl: no bracket for T=" << period;
    if (auto b = per_year.front().support_bound()) msg << " (support bound at t=1: " << *b << ")";
    throw NumericalError(msg.str());
  }
  return brent_root(g, lo, hi, 1e-10 * (1.0 + std::abs(hi)));
}

std::vector<double> default_chi_periods(std::size_t n) {
  return {5.0, 10.0, 20.0, 40.0, std::round(1.6 * static_cast<double>(n))};
}

double chi_distance(std::span<const double> values, std::span<const GevParams> per_obs,
                    std::span<const double> periods) {
  if (values.size() != per_obs.size()) throw DomainError("chi_distance: length mismatch");
  const std::vector<double> defaults = default_chi_periods(values.size());
  if (periods.empty()) periods = defaults;
  const double n = static_cast<double>(values.size());
  double chi = 0.0;
  for (double T : periods) {
    const double expected = n / T;
    std::size_t exceed = 0;
    for (std::size_t j = 0; j < values.size(); ++j)
      if (values[j] >= gev_quantile(1.0 - 1.0 / T, per_obs[j])) ++exceed;
    chi += std::abs(expected - static_cast<double>(exceed)) / expected;
  }
  return chi;
}

double chi_distance(const AnnualSeries& series, const ModelSpec& spec, const NsGevParams& params,
                    std::span<const double> periods) {
  const ModelDesign design(series, spec);
  const auto per_obs = evaluate_all(params, design);
  return chi_distance(series.values(), per_obs, periods);
}

ModifiedRlPlot modified_rl_plot_data(const FitResult& fit, const AnnualSeries& series,
                                     std::span<const int> periods) {
  ModifiedRlPlot plot;
  for (int T : periods) plot.curve.push_back({static_cast<double>(T), parey_rl(fit.params, fit.spec, T)});
  std::vector<double> sorted = series.values();
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double pos = (static_cast<double>(i + 1) - 0.44) / (n + 0.12);
    plot.observations.push_back({1.0 / (1.0 - pos), sorted[i]});
  }
  return plot;
}

std::vector<PlotPoint> qq_plot_data(const FitResult& fit) {
  std::vector<double> r;
  for (double v : fit.std_residuals)
    if (std::isfinite(v)) r.push_back(v);
  std::sort(r.begin(), r.end());
  const double n = static_cast<double>(r.size());
  std::vector<PlotPoint> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double p = static_cast<double>(i + 1) / (n + 1.0);
    out.push_back({-std::log(-std::log(p)), r[i]});
  }
  return out;
}

}  // namespace nsgev
