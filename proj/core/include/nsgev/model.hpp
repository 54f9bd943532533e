#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "nsgev/distributions.hpp"
#include "nsgev/regression.hpp"
#include "nsgev/series.hpp"

namespace nsgev {

enum class Family { gev10, gev11, gev20, covariate };

/// Location mu(X) = mu0 + sum mu_j X_j and scale sigma(X) = exp(s0 + sum s_j X_j);
/// the shape is always constant. Term names "t" and "t2" are the time index
/// and its square, anything else names a series covariate.
struct ModelSpec {
  Family family = Family::gev11;
  std::vector<std::string> location_terms;
  std::vector<std::string> logscale_terms;

  static ModelSpec gev10();
  static ModelSpec gev11();
  static ModelSpec gev20();
  static ModelSpec stationary();
  static ModelSpec covariate(std::vector<std::string> location, std::vector<std::string> logscale = {});

  /// "gev10" | "gev11" | "gev20" | "stationary" | "loc=t+soi;logscale=t".
  static ModelSpec parse(std::string_view text);
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::string family_name() const;

  /// Every term is "t" or "t2", so parameters can be evaluated at any t.
  [[nodiscard]] bool time_only() const;
  [[nodiscard]] bool constant_scale() const noexcept { return logscale_terms.empty(); }
  [[nodiscard]] std::size_t parameter_count() const noexcept {
    return location_terms.size() + logscale_terms.size() + 3;
  }

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Coefficients of a nonstationary GEV. `loc_scale_coupling` (kappa) adds
/// kappa * sigma(X) to the location; it is nonzero only for the exact WLS and
/// GN16 back-transformations, whose location is not linear in the terms.
struct NsGevParams {
  std::vector<double> mu_coef;        // mu0, mu_1..mu_k
  std::vector<double> logsigma_coef;  // s0, s_1..s_k
  double xi = 0.0;
  double loc_scale_coupling = 0.0;

  friend bool operator==(const NsGevParams&, const NsGevParams&) = default;
};

/// Term values of one observation (intercepts excluded).
struct CovariateRow {
  std::vector<double> loc;
  std::vector<double> logscale;
};

CovariateRow time_row(const ModelSpec& spec, double t);
GevParams evaluate(const NsGevParams& p, const CovariateRow& row);

/// Spec resolved against a series: per-observation covariate rows and the
/// regression designs used by the trend steps.
class ModelDesign {
 public:
  ModelDesign(const AnnualSeries& series, const ModelSpec& spec);

  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
  [[nodiscard]] const CovariateRow& row(std::size_t i) const { return rows_.at(i); }
  [[nodiscard]] const std::vector<CovariateRow>& rows() const noexcept { return rows_; }
  [[nodiscard]] const DesignMatrix& location_design() const noexcept { return loc_; }
  [[nodiscard]] const DesignMatrix& logscale_design() const noexcept { return logscale_; }
  [[nodiscard]] const ModelSpec& spec() const noexcept { return spec_; }

 private:
  ModelSpec spec_;
  std::vector<CovariateRow> rows_;
  DesignMatrix loc_;
  DesignMatrix logscale_;
};

std::vector<GevParams> evaluate_all(const NsGevParams& p, const ModelDesign& design);

}  // namespace nsgev
