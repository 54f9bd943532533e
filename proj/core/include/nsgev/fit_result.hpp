#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "nsgev/model.hpp"

namespace nsgev {

enum class Method { lme_sta_gum, lme_sta_gev, mle, wls, gn16, prop };

/// "LME-STA-GUM", "LME-STA-GEV", "MLE", "WLS", "GN16", "PROP".
const char* to_string(Method m) noexcept;
/// Accepts the tags above and the short CLI names gum, lme, mle, wls, gn16, prop.
Method parse_method(std::string_view name);

struct FitDiagnostics {
  std::string status = "converged";
  bool converged = true;
  double chi = std::numeric_limits<double>::quiet_NaN();
  std::size_t candidate_roots = 0;
  bool fallback = false;
  bool zero_scale_slope = false;
  std::size_t n = 0;
  std::size_t support_violations = 0;  // observations outside the fitted support
  int iterations = 0;
  double residual_norm = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> notes;
};

struct FitResult {
  Method method = Method::prop;
  ModelSpec spec;
  NsGevParams params;
  /// Gumbel-transformed observations; NaN where an observation lies outside
  /// the fitted support.
  std::vector<double> std_residuals;
  FitDiagnostics diagnostics;
  /// OLS of the exact location over the observed t (WLS/GN16 only), the
  /// two-coefficient summary used when reporting mu0, mu1.
  std::vector<double> summary_mu_coef;
  /// PROP fitted with the physical-covariate algorithm (MM location start)
  /// even when the terms are time-only.
  bool covariate_variant = false;
};

}  // namespace nsgev
