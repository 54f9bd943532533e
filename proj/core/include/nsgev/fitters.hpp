#pragma once

#include <span>
#include <vector>

#include "nsgev/fit_result.hpp"
#include "nsgev/model.hpp"
#include "nsgev/series.hpp"
#include "nsgev/solvers.hpp"

namespace nsgev {

/// Stationary L-moment fit (Gumbel or GEV); spec is stationary.
FitResult fit_stationary(const AnnualSeries& series, bool gumbel);

/// Nonstationary maximum likelihood by Nelder-Mead from the stationary LME
/// with zero trend coefficients.
FitResult fit_mle(const AnnualSeries& series, const ModelSpec& spec);

/// Weighted least squares trend + stationary LME on standardized residuals.
/// The location is stored exactly: mu(t) = mu0 + mu1 t + kappa sigma(t).
FitResult fit_wls(const AnnualSeries& series, const ModelSpec& spec);

/// Detrend, Cunderlik-Burn pseudo-residuals, stationary LME shape, and
/// parameters from the temporal-moment relations. Time families only.
FitResult fit_gn16(const AnnualSeries& series, const ModelSpec& spec);

struct PropOptions {
  NewtonOptions newton{};
  /// Periods for the chi tie-breaker; empty = default_chi_periods(n).
  std::vector<double> chi_periods;
};

/// Robust GN16 start, then (mu0, sigma0, xi) solved so the standardized
/// residuals have standard-Gumbel l1, l2, t3; trend slopes stay frozen.
FitResult fit_prop(const AnnualSeries& series, const ModelSpec& spec, const PropOptions& opt = {});

/// Physical-covariate version: robust location regression, log-linear
/// regression of absolute residuals, then the same three-equation solve.
FitResult fit_prop_covariate(const AnnualSeries& series, const ModelSpec& spec, const PropOptions& opt = {});

/// Dispatch on method; LME-STA-* ignore the spec. With covariate_variant,
/// PROP always uses fit_prop_covariate.
FitResult fit(Method method, const AnnualSeries& series, const ModelSpec& spec, bool covariate_variant = false);

/// Same method, spec and PROP variant as `like`, on new data.
FitResult refit(const FitResult& like, const AnnualSeries& series);

/// Gumbel-transformed observations under params; NaN outside the support.
std::vector<double> standardized_residuals(const AnnualSeries& series, const ModelSpec& spec,
                                           const NsGevParams& params, std::size_t* violations = nullptr);

/// (l1 - gamma, l2 - log 2, t3 - tau3_Gumbel) of the standardized residuals at
/// (mu0, sigma0, xi) with every slope of `frozen` held fixed; nullopt when an
/// observation leaves the support.
ResidualFn gumbel_lmoment_residual(const AnnualSeries& series, const ModelSpec& spec, const NsGevParams& frozen);

/// OLS of the exact location mu(t) on (1, t) over the observed t.
std::vector<double> linearized_location(const AnnualSeries& series, const ModelSpec& spec, const NsGevParams& params);

}  // namespace nsgev
