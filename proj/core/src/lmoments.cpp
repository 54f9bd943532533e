#include "nsgev/lmoments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nsgev/error.hpp"
#include "nsgev/rng.hpp"
#include "nsgev/special.hpp"

namespace nsgev {
namespace {

constexpr double kShapeLo = -0.99;
constexpr double kShapeHi = 0.99;

// (1 - a^-xi) / xi, continuous at 0
double one_minus_pow_over_xi(double log_a, double xi) {
  if (std::abs(xi) < kXiEps) return log_a;
  return -std::expm1(-xi * log_a) / xi;
}

struct Pwm {
  double b0 = 0, b1 = 0, b2 = 0, b3 = 0;
};

Pwm probability_weighted_moments(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  Pwm p;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double i = static_cast<double>(k);  // i = rank - 1
    const double x = xs[k];
    p.b0 += x;
    p.b1 += x * i / (n - 1.0);
    if (n > 2) p.b2 += x * i * (i - 1.0) / ((n - 1.0) * (n - 2.0));
    if (n > 3) p.b3 += x * i * (i - 1.0) * (i - 2.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0));
  }
  p.b0 /= n;
  p.b1 /= n;
  p.b2 /= n;
  p.b3 /= n;
  return p;
}

void check_finite(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("L-moments: sample contains a non-finite value");
}

}  // namespace

LMomentSet sample_lmoments(std::span<const double> x) {
  if (x.size() < 4) throw InsufficientDataError("sample L-moments need at least 4 observations");
  check_finite(x);
  const Pwm p = probability_weighted_moments({x.begin(), x.end()});
  const double l2 = 2.0 * p.b1 - p.b0;
  const double l3 = 6.0 * p.b2 - 6.0 * p.b1 + p.b0;
  const double l4 = 20.0 * p.b3 - 30.0 * p.b2 + 12.0 * p.b1 - p.b0;
  if (!(l2 > 0.0)) throw DegenerateSampleError("degenerate sample: l2 is zero");
  return {p.b0, l2, l3 / l2, l4 / l2, LMomentKind::sample, x.size()};
}

std::pair<double, double> sample_l1_l2(std::span<const double> x) {
  if (x.size() < 2) throw InsufficientDataError("l1/l2 need at least 2 observations");
  check_finite(x);
  const Pwm p = probability_weighted_moments({x.begin(), x.end()});
  return {p.b0, 2.0 * p.b1 - p.b0};
}

LMomentSet gumbel_population_lmoments() {
  return {kEulerGamma, kLn2, gev_tau3(0.0), gev_tau4(0.0), LMomentKind::population, 0};
}

double gev_tau3(double xi) {
  const double ratio = one_minus_pow_over_xi(kLn3, xi) / one_minus_pow_over_xi(kLn2, xi);
  return 2.0 * ratio - 3.0;
}

double gev_tau4(double xi) {
  const double d2 = one_minus_pow_over_xi(kLn2, xi);
  const double d3 = one_minus_pow_over_xi(kLn3, xi);
  const double d4 = one_minus_pow_over_xi(2.0 * kLn2, xi);
  return (5.0 * d4 - 10.0 * d3 + 6.0 * d2) / d2;
}

LMomentSet gev_lmoments_from_params(const GevParams& p) {
  p.validate();
  if (!(p.xi > -1.0)) throw DomainError("GEV L-moments are infinite for xi <= -1");
  const double g = std::exp(lgamma1p(p.xi));
  LMomentSet lm;
  lm.l1 = p.mu + p.sigma * gev_mean_offset(p.xi);
  lm.l2 = p.sigma * one_minus_pow_over_xi(kLn2, p.xi) * g;
  lm.t3 = gev_tau3(p.xi);
  lm.t4 = gev_tau4(p.xi);
  lm.kind = LMomentKind::population;
  return lm;
}

double gev_shape_from_tau3(double t3) {
  if (!(t3 > -1.0 && t3 < 1.0)) throw DomainError("L-skewness must lie in (-1, 1)");
  // tau3 is strictly decreasing in xi on the bracket.
  double lo = kShapeLo, hi = kShapeHi;
  const double f_lo = gev_tau3(lo) - t3;
  const double f_hi = gev_tau3(hi) - t3;
  if (f_lo < 0.0 || f_hi > 0.0)
    throw NumericalError("L-skewness " + std::to_string(t3) +
                         " is not attainable for shape in (-0.99, 0.99)");

  const double c = 2.0 / (3.0 + t3) - kLn2 / kLn3;
  double xi = std::clamp(7.8590 * c + 2.9554 * c * c, lo + 1e-6, hi - 1e-6);
  for (int it = 0; it < 100; ++it) {
    const double f = gev_tau3(xi) - t3;
    if (std::abs(f) < 1e-13) return xi;
    if (f > 0.0) lo = xi; else hi = xi;
    const double h = 1e-6;
    const double df = (gev_tau3(xi + h) - gev_tau3(xi - h)) / (2.0 * h);
    double next = xi - f / df;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15) return next;
    xi = next;
  }
  return xi;
}

GevParams stationary_lme_gev(const LMomentSet& lm) {
  if (!(lm.l2 > 0.0)) throw DegenerateSampleError("stationary LME: l2 must be positive");
  const double xi = gev_shape_from_tau3(lm.t3);
  const double g = std::exp(lgamma1p(xi));
  const double sigma = lm.l2 / (one_minus_pow_over_xi(kLn2, xi) * g);
  const double mu = lm.l1 - sigma * gev_mean_offset(xi);
  return {mu, sigma, xi};
}

GevParams stationary_lme_gev(std::span<const double> x) { return stationary_lme_gev(sample_lmoments(x)); }

GevParams stationary_lme_gumbel(std::span<const double> x) {
  const auto [l1, l2] = sample_l1_l2(x);
  if (!(l2 > 0.0)) throw DegenerateSampleError("Gumbel LME: l2 must be positive");
  const double sigma = l2 / kLn2;
  return {l1 - kEulerGamma * sigma, sigma, 0.0};
}

LMomentCovariance lmoment_covariance(std::span<const double> x, std::size_t b_reps,
                                     std::uint64_t seed, std::size_t resample_size) {
  if (x.size() < 8) throw InsufficientDataError("L-moment covariance needs at least 8 observations");
  if (b_reps < 2) throw DomainError("L-moment covariance needs at least 2 bootstrap replicates");
  const std::size_t m = resample_size == 0 ? x.size() : resample_size;
  if (m < 4) throw InsufficientDataError("bootstrap resample size must be at least 4");

  CounterRng rng(seed, 0x4C4D4F4DULL);
  std::vector<Eigen::Vector4d> reps;
  reps.reserve(b_reps);
  std::vector<double> buf(m);
  for (std::size_t b = 0; b < b_reps; ++b) {
    for (auto& v : buf) v = x[static_cast<std::size_t>(rng.below(x.size()))];
    try {
      reps.push_back(sample_lmoments(buf).as_vector());
    } catch (const DegenerateSampleError&) {
      // tied resample; skipped
    }
  }
  if (reps.size() < 2) throw NumericalError("L-moment covariance: too few usable resamples");

  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  for (const auto& r : reps) mean += r;
  mean /= static_cast<double>(reps.size());
  LMomentCovariance cov;
  for (const auto& r : reps) cov.v += (r - mean) * (r - mean).transpose();
  cov.v /= static_cast<double>(reps.size() - 1);
  cov.v = 0.5 * (cov.v + cov.v.transpose());
  cov.n = m;
  cov.source = CovarianceSource::bootstrap;
  if (b_reps < 50)
    cov.warning = "only " + std::to_string(b_reps) + " bootstrap replicates; covariance is noisy";
  return cov;
}

Eigen::Matrix4d regularized_inverse(const LMomentCovariance& cov) {
  const double tr = cov.v.trace();
  const Eigen::Matrix4d reg = cov.v + 1e-10 * tr * Eigen::Matrix4d::Identity();
  Eigen::FullPivLU<Eigen::Matrix4d> lu(reg);
  if (!(tr > 0.0) || !lu.isInvertible())
    throw NumericalError("L-moment covariance is singular after regularisation");
  return lu.inverse();
}

}  // namespace nsgev
