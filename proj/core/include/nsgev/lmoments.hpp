#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "nsgev/distributions.hpp"

namespace nsgev {

enum class LMomentKind { population, sample };

/// First two L-moments and the L-skewness / L-kurtosis ratios.
struct LMomentSet {
  double l1 = 0.0;
  double l2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  LMomentKind kind = LMomentKind::population;
  std::size_t n = 0;  // sample size for kind == sample

  [[nodiscard]] Eigen::Vector4d as_vector() const { return {l1, l2, t3, t4}; }
};

/// Unbiased sample L-moments from probability weighted moments. n >= 4.
LMomentSet sample_lmoments(std::span<const double> x);

/// (l1, l2) only; n >= 2. Used by the two-parameter Gumbel fit.
std::pair<double, double> sample_l1_l2(std::span<const double> x);

/// L-moments of the standard Gumbel: (gamma, log 2, 0.169925, 0.150373).
LMomentSet gumbel_population_lmoments();

double gev_tau3(double xi);
double gev_tau4(double xi);
LMomentSet gev_lmoments_from_params(const GevParams& p);

/// Shape whose GEV L-skewness equals t3, in (-0.99, 0.99).
double gev_shape_from_tau3(double t3);

GevParams stationary_lme_gev(std::span<const double> x);
GevParams stationary_lme_gev(const LMomentSet& lm);
GevParams stationary_lme_gumbel(std::span<const double> x);

enum class CovarianceSource { analytic_oracle, bootstrap };

/// Covariance of (l1, l2, t3, t4) for samples of size n.
struct LMomentCovariance {
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  std::size_t n = 0;
  CovarianceSource source = CovarianceSource::bootstrap;
  std::optional<std::string> warning;
};

inline constexpr std::size_t kDefaultCovarianceReps = 500;

/// Nonparametric bootstrap: b_reps resamples of size `resample_size`
/// (0 = x.size()) drawn with replacement from x. Requires x.size() >= 8.
LMomentCovariance lmoment_covariance(std::span<const double> x,
                                     std::size_t b_reps = kDefaultCovarianceReps,
                                     std::uint64_t seed = 0, std::size_t resample_size = 0);

/// Inverse of V + 1e-10 * trace(V) * I. Throws NumericalError when still singular.
Eigen::Matrix4d regularized_inverse(const LMomentCovariance& cov);

}  // namespace nsgev
