#pragma once

#include <span>
#include <vector>

#include "nsgev/fit_result.hpp"
#include "nsgev/model.hpp"
#include "nsgev/series.hpp"

namespace nsgev {

enum class ReturnLevelKind { conventional_at_t, parey };

struct ReturnLevelCurve {
  ReturnLevelKind kind = ReturnLevelKind::conventional_at_t;
  double period = 0.0;
  std::vector<double> t;       // conventional only
  std::vector<double> values;  // per-t levels, or a single Parey level
};

/// Per-t quantile at probability 1 - 1/T; requires time-only terms.
ReturnLevelCurve conventional_rl(const NsGevParams& params, const ModelSpec& spec, double period,
                                 std::span<const double> t_values);
double conventional_rl_at(const NsGevParams& params, const CovariateRow& row, double period);

/// Level r with sum_{t=1..T} (1 - F_t(r)) = 1: one expected exceedance in T years.
double parey_rl(const NsGevParams& params, const ModelSpec& spec, int period);

/// {5, 10, 20, 40, round(1.6 n)}.
std::vector<double> default_chi_periods(std::size_t n);

/// Sum over periods of |E - S| / E with E = n / T_i and S the count of
/// observations at or above their own time-varying T_i-level.
double chi_distance(std::span<const double> values, std::span<const GevParams> per_obs,
                    std::span<const double> periods = {});
double chi_distance(const AnnualSeries& series, const ModelSpec& spec, const NsGevParams& params,
                    std::span<const double> periods = {});

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct ModifiedRlPlot {
  std::vector<PlotPoint> curve;         // (T, Parey level)
  std::vector<PlotPoint> observations;  // (empirical T, ordered observation)
};

/// Parey levels over T_grid with observations placed at Gringorten positions
/// (i - 0.44) / (n + 0.12) mapped to T = 1 / (1 - p).
ModifiedRlPlot modified_rl_plot_data(const FitResult& fit, const AnnualSeries& series, std::span<const int> periods);

/// (-log(-log(i / (n + 1))), i-th smallest standardized residual); NaN residuals dropped.
std::vector<PlotPoint> qq_plot_data(const FitResult& fit);

}  // namespace nsgev
