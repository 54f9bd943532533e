#include "nsgev/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nsgev/error.hpp"
#include "nsgev/special.hpp"

namespace nsgev {

void GevParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(xi))
    throw DomainError("GEV parameters must be finite");
  if (!(sigma > 0.0)) throw DomainError("GEV scale must be positive, got " + std::to_string(sigma));
}

bool GevParams::is_gumbel() const noexcept { return std::abs(xi) < kXiEps; }

std::optional<double> GevParams::support_bound() const noexcept {
  if (is_gumbel()) return std::nullopt;
  return mu + sigma / xi;
}

bool GevParams::in_support(double x) const noexcept {
  return std::isfinite(x) && 1.0 - xi * (x - mu) / sigma > 0.0;
}

double gev_cdf(double x, const GevParams& p) {
  p.validate();
  const double y = (x - p.mu) / p.sigma;
  if (p.xi == 0.0) return std::exp(-std::exp(-y));
  if (1.0 - p.xi * y <= 0.0) return p.xi > 0.0 ? 1.0 : 0.0;
  return std::exp(-std::exp(-*try_gumbel_transform(x, p)));
}

double gev_quantile(double q, const GevParams& p) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("gev_quantile: probability must lie in (0, 1)");
  p.validate();
  const double ly = std::log(-std::log(q));
  // Inside the Gumbel band keep the first-order shape term so the quantile is
  // continuous in xi to O(xi^2).
  if (p.is_gumbel()) return p.mu - p.sigma * ly * (1.0 + 0.5 * p.xi * ly);
  // (1 - y^xi) / xi = -expm1(xi log y) / xi
  return p.mu - p.sigma * std::expm1(p.xi * ly) / p.xi;
}

double gev_draw(CounterRng& rng, const GevParams& p) { return gev_quantile(rng.uniform(), p); }

std::vector<double> gev_rand(std::size_t n, const GevParams& p, std::uint64_t seed,
                             std::uint64_t stream) {
  if (n == 0) throw DomainError("gev_rand: n must be at least 1");
  p.validate();
  CounterRng rng(seed, stream);
  std::vector<double> out(n);
  for (auto& v : out) v = gev_draw(rng, p);
  return out;
}

std::optional<double> try_gumbel_transform(double z, const GevParams& p) noexcept {
  if (!(p.sigma > 0.0)) return std::nullopt;
  const double y = (z - p.mu) / p.sigma;
  if (!std::isfinite(y)) return std::nullopt;
  if (p.is_gumbel()) {
    if (p.xi * y >= 1.0) return std::nullopt;
    return y * (1.0 + 0.5 * p.xi * y);
  }
  const double w = 1.0 - p.xi * y;
  if (!(w > 0.0) || !std::isfinite(w)) return std::nullopt;
  return -std::log1p(-p.xi * y) / p.xi;
}

double gumbel_transform(double z, const GevParams& p) {
  auto r = try_gumbel_transform(z, p);
  if (!r) throw SupportError("gumbel_transform: value outside the GEV support", 0);
  return *r;
}

double gumbel_back_transform(double ztilde, const GevParams& p) {
  if (p.is_gumbel()) return p.mu + p.sigma * ztilde * (1.0 - 0.5 * p.xi * ztilde);
  return p.mu - p.sigma * std::expm1(-p.xi * ztilde) / p.xi;
}

double gev_mean_offset(double xi) {
  if (!(xi > -1.0)) throw DomainError("GEV mean is infinite for xi <= -1");
  if (std::abs(xi) < kXiEps) return kEulerGamma;
  return -std::expm1(lgamma1p(xi)) / xi;
}

double gev_scale_per_std(double xi) {
  if (!(xi > -0.5)) throw DomainError("GEV variance is infinite for xi <= -0.5");
  if (std::abs(xi) < kXiEps) return std::sqrt(6.0) / kPi;
  return std::abs(xi) / std::sqrt(gamma_variance_term(xi));
}

MeanStd gev_mean_std(const GevParams& p) {
  p.validate();
  return {p.mu + p.sigma * gev_mean_offset(p.xi), p.sigma / gev_scale_per_std(p.xi)};
}

}  // namespace nsgev
