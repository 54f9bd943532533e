#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nsgev {

/// Regressor matrix whose first column is the intercept (x_i0 = 1).
struct DesignMatrix {
  Eigen::MatrixXd x;
  std::vector<std::string> names;

  /// Intercept plus one column per (name, values) pair; all columns length n.
  static DesignMatrix with_intercept(std::size_t n,
                                     const std::vector<std::pair<std::string, std::vector<double>>>& columns);
  [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(x.rows()); }
  [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(x.cols()); }
};

enum class RegressionMethod { ols, wls, mm, sen };

struct RegressionFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  double scale_tau = 0.0;  // robust scale, MM only
  RegressionMethod method = RegressionMethod::ols;
  bool converged = true;
  int iterations = 0;
};

RegressionFit ols_fit(const DesignMatrix& X, std::span<const double> y);
RegressionFit wls_fit(const DesignMatrix& X, std::span<const double> y, std::span<const double> w);

enum class MmStart {
  s_estimate,  // high-breakdown S-estimate of coefficients and scale (as lmrob)
  ols_mad,     // OLS start, tau = 1.4826 (1 + 5 / (n - p)) med|r_i| of its residuals
};

struct MmOptions {
  double tuning = 4.685;  // Tukey biweight, 95% Gaussian efficiency
  double tol = 1e-10;
  int max_iter = 200;
  MmStart start = MmStart::s_estimate;
  std::size_t subsamples = 500;  // S-estimate elemental subsets
  std::uint64_t seed = 0x5eed;   // subset draws; fixed so fits are reproducible
};

/// Biweight estimating equations sum psi(r_i / tau) x_ij = 0 solved by IRLS
/// with tau held fixed. tau and the starting coefficients come from a
/// fast-S estimate (50% breakdown) or, with MmStart::ols_mad, from OLS.
RegressionFit mm_robust_fit(const DesignMatrix& X, std::span<const double> y, const MmOptions& opt = {});

/// Theil-Sen: median pairwise slope, median intercept.
RegressionFit sen_fit(std::span<const double> t, std::span<const double> y);

double tukey_psi(double u, double c) noexcept;
/// psi(u) / u, with the limit 1 at u = 0.
double tukey_weight(double u, double c) noexcept;

/// Midpoint of the two central order statistics for even sizes.
double median(std::vector<double> v);

/// Fit log(e_i + delta) = X beta, the exponential-link regression used for
/// scale trends. `robust` selects mm_robust_fit instead of OLS.
inline constexpr double kLogGuard = 1e-12;
RegressionFit log_linear_fit(const DesignMatrix& X, std::span<const double> e, bool robust);

}  // namespace nsgev
