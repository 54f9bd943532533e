#include "nsgev/special.hpp"

#include <array>
#include <cmath>

#include "nsgev/error.hpp"

namespace nsgev {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
constexpr double kHalfLog2Pi = 0.91893853320467274;

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  return a;
}

// zeta(k) for integer k >= 2 by Euler-Maclaurin summation.
double zeta_int(int k) {
  constexpr int kTerms = 40;
  const double s = k;
  double sum = 0.0;
  for (int n = 1; n < kTerms; ++n) sum += std::pow(static_cast<double>(n), -s);
  const double N = kTerms;
  const double nk = std::pow(N, -s);
  sum += N * nk / (s - 1.0) + 0.5 * nk;
  sum += s * nk / N / 12.0;
  sum -= s * (s + 1) * (s + 2) * nk / (N * N * N) / 720.0;
  sum += s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * nk / std::pow(N, 5) / 30240.0;
  return sum;
}

constexpr int kSeriesTerms = 48;

struct ZetaTable {
  std::array<double, kSeriesTerms + 1> z{};
  ZetaTable() {
    for (int k = 2; k <= kSeriesTerms; ++k) z[k] = zeta_int(k);
  }
};

const ZetaTable& zeta_table() {
  static const ZetaTable table;
  return table;
}

// sum_{k>=2} (-1)^k zeta(k) / k * w_k * x^k, with weights w_k supplied by `weight`.
template <class Weight>
double zeta_series(double x, Weight weight) {
  const auto& z = zeta_table().z;
  double total = 0.0;
  double xk = x;
  for (int k = 2; k <= kSeriesTerms; ++k) {
    xk *= x;
    const double term = ((k % 2 == 0) ? 1.0 : -1.0) * z[k] / k * weight(k) * xk;
    total += term;
    if (std::abs(term) < 1e-18 * std::abs(total)) break;
  }
  return total;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0) && x == std::floor(x)) throw DomainError("gamma_fn: pole at non-positive integer");
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, xm1 + 0.5) * std::exp(-t) * lanczos_sum(xm1);
}

double lgamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("lgamma_fn: argument must be positive");
  if (x < 0.5) return std::log(kPi / std::abs(std::sin(kPi * x))) - lgamma_fn(1.0 - x);
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return kHalfLog2Pi + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

double lgamma1p(double x) {
  if (std::abs(x) < 0.25) {
    return -kEulerGamma * x + zeta_series(x, [](int) { return 1.0; });
  }
  return lgamma_fn(1.0 + x);
}

double gamma_variance_term(double x) {
  double d = 0.0;
  if (std::abs(x) < 0.1) {
    // log Gamma(1+2x) - 2 log Gamma(1+x); the linear terms cancel exactly.
    d = zeta_series(x, [](int k) { return std::ldexp(1.0, k) - 2.0; });
  } else {
    d = lgamma1p(2.0 * x) - 2.0 * lgamma1p(x);
  }
  const double g = std::exp(lgamma1p(x));
  return g * g * std::expm1(d);
}

}  // namespace nsgev
