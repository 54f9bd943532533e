#pragma once

// Stationary GEV / Gumbel distribution functions in the Hosking-Wallis
// parameterisation F(x) = exp{-(1 - xi (x - mu) / sigma)^(1/xi)}:
// xi < 0 is the heavy tail, xi > 0 is bounded above at mu + sigma / xi.
// The Coles (ismev / extRemes) shape is xi_coles = -xi.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nsgev/rng.hpp"

namespace nsgev {

/// |xi| below this uses the Gumbel branch of every formula.
inline constexpr double kXiEps = 1e-7;

struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  /// Throws DomainError unless sigma > 0 and all fields are finite.
  void validate() const;
  [[nodiscard]] bool is_gumbel() const noexcept;
  /// mu + sigma / xi: upper endpoint for xi > 0, lower endpoint for xi < 0.
  [[nodiscard]] std::optional<double> support_bound() const noexcept;
  /// True when 1 - xi (x - mu) / sigma > 0.
  [[nodiscard]] bool in_support(double x) const noexcept;

  friend bool operator==(const GevParams&, const GevParams&) = default;
};

double gev_cdf(double x, const GevParams& p);
double gev_quantile(double q, const GevParams& p);

/// Inversion sample of length n (n >= 1) from stream (seed, stream).
std::vector<double> gev_rand(std::size_t n, const GevParams& p, std::uint64_t seed,
                             std::uint64_t stream = 0);
/// One inversion draw from an existing generator.
double gev_draw(CounterRng& rng, const GevParams& p);

/// Map z ~ GEV(p) to a standard Gumbel variate. Throws SupportError(index 0)
/// when z is outside the support.
double gumbel_transform(double z, const GevParams& p);
std::optional<double> try_gumbel_transform(double z, const GevParams& p) noexcept;
/// Exact inverse of gumbel_transform; defined for every real input.
double gumbel_back_transform(double ztilde, const GevParams& p);

/// b(xi) = (1 - Gamma(1 + xi)) / xi, the standardized mean offset.
double gev_mean_offset(double xi);
/// c(xi) = xi / sqrt(Gamma(1 + 2 xi) - Gamma(1 + xi)^2) = sigma / sd.
double gev_scale_per_std(double xi);

struct MeanStd {
  double mean;
  double std;
};
/// Requires xi > -0.5 (finite variance).
MeanStd gev_mean_std(const GevParams& p);

}  // namespace nsgev
