#pragma once

namespace nsgev {

inline constexpr double kEulerGamma = 0.57721566490153286;
inline constexpr double kLn2 = 0.69314718055994531;
inline constexpr double kLn3 = 1.0986122886681098;
inline constexpr double kPi = 3.14159265358979324;

/// Gamma function for x > 0 (Lanczos, g = 7, 9 terms; reflection below 0.5).
double gamma_fn(double x);

/// log Gamma(x) for x > 0.
double lgamma_fn(double x);

/// log Gamma(1 + x), accurate in absolute terms near x = 0 (power series for |x| < 0.25).
double lgamma1p(double x);

/// Gamma(1 + 2x) - Gamma(1 + x)^2 without cancellation near x = 0.
double gamma_variance_term(double x);

}  // namespace nsgev
