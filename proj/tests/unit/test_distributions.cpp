#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nsgev/distributions.hpp"
#include "nsgev/error.hpp"
#include "nsgev/special.hpp"
#include "oracles.hpp"

using namespace nsgev;

TEST(GevCdf, GumbelAtLocation) { EXPECT_NEAR(gev_cdf(3.0, {3.0, 2.0, 0.0}), std::exp(-1.0), 1e-15); }

TEST(GevCdf, QuantileRoundTrip) {
  const GevParams p{0.0, 1.0, 0.35};
  EXPECT_NEAR(gev_cdf(gev_quantile(0.99, p), p), 0.99, 1e-14);
  const GevParams h{0.0, 1.0, -0.35};
  const double x = (std::pow(-std::log(0.99), -0.35) - 1.0) / 0.35;
  EXPECT_NEAR(gev_quantile(0.99, h), x, 1e-12);
  EXPECT_NEAR(gev_cdf(x, h), 0.99, 1e-14);
}

TEST(GevCdf, ClampsOutsideSupport) {
  const GevParams bounded{0.0, 1.0, 0.5};  // upper bound 2
  EXPECT_EQ(gev_cdf(2.5, bounded), 1.0);
  const GevParams heavy{0.0, 1.0, -0.5};  // lower bound -2
  EXPECT_EQ(gev_cdf(-2.5, heavy), 0.0);
}

TEST(GevCdf, MatchesIndependentFormula) {
  for (double xi : {-0.4, -0.1, 0.2, 0.45}) {
    for (double x : {-1.0, 0.0, 0.7, 2.0}) {
      EXPECT_NEAR(gev_cdf(x, {0.1, 1.3, xi}), oracle::gev_F(x, 0.1, 1.3, xi), 1e-14);
    }
  }
}

TEST(GevQuantile, KnownValues) {
  EXPECT_NEAR(gev_quantile(0.99, {0, 1, 0}), 4.60015, 1e-5);
  EXPECT_NEAR(gev_quantile(0.99, {-5.0, std::exp(2.0), 0.35}), 11.89, 0.005);
  EXPECT_NEAR(gev_quantile(0.99, {-5.0, std::exp(2.0), -0.35}), 79.51, 0.005);
}

TEST(GevQuantile, RejectsBadProbability) {
  EXPECT_THROW(gev_quantile(0.0, {}), DomainError);
  EXPECT_THROW(gev_quantile(1.0, {}), DomainError);
  EXPECT_THROW(gev_quantile(0.5, {0, -1, 0}), DomainError);
}

TEST(GevQuantile, ContinuousAcrossGumbelBand) {
  for (double q : {0.01, 0.5, 0.99, 0.9999}) {
    const double g = gev_quantile(q, {0, 1, 0});
    for (double xi : {-2e-7, -5e-8, 5e-8, 2e-7}) EXPECT_NEAR(gev_quantile(q, {0, 1, xi}), g, 1e-5) << xi << " " << q;
    // Just inside the band the expansion agrees with the exact form.
    const double ly = std::log(-std::log(q));
    const double xi = 0.99e-7;
    EXPECT_NEAR(gev_quantile(q, {0, 1, xi}), -std::expm1(xi * ly) / xi, 1e-11);
  }
}

TEST(GevRand, ReproducibleAndValidated) {
  EXPECT_THROW(gev_rand(0, {}, 1), DomainError);
  EXPECT_EQ(gev_rand(1, {}, 5), gev_rand(1, {}, 5));
  EXPECT_NE(gev_rand(1, {}, 5), gev_rand(1, {}, 6));
}

TEST(GevRand, GumbelMeanAndBoundedTail) {
  auto x = gev_rand(1000000, {0, 1, 0}, 11);
  EXPECT_NEAR(std::accumulate(x.begin(), x.end(), 0.0) / x.size(), kEulerGamma, 0.01);
  auto y = gev_rand(1000000, {0, 1, 0.5}, 12);
  EXPECT_LE(*std::max_element(y.begin(), y.end()), 2.0);
}

TEST(GumbelTransform, Examples) {
  for (double xi : {-0.3, 0.0, 0.2}) EXPECT_NEAR(gumbel_transform(2.0, {2.0, 1.5, xi}), 0.0, 1e-15);
  EXPECT_NEAR(gumbel_transform(4.0, {1.0, 3.0, 0.0}), 1.0, 1e-15);
  const GevParams p{-5.0, std::exp(2.0), -0.35};
  EXPECT_NEAR(gumbel_transform(gev_quantile(0.99, p), p), 4.60015, 1e-5);
}

TEST(GumbelTransform, SupportViolationCarriesIndex) {
  try {
    gumbel_transform(3.0, {0, 1, 0.5});
    FAIL();
  } catch (const SupportError& e) {
    EXPECT_EQ(e.index(), 0u);
  }
  EXPECT_FALSE(try_gumbel_transform(3.0, {0, 1, 0.5}).has_value());
}

TEST(GumbelTransform, BackTransformRoundTrip) {
  CounterRng r(77);
  for (int i = 0; i < 1000; ++i) {
    const GevParams p{10 * (r.uniform() - 0.5), 0.1 + 5 * r.uniform(), 0.9 * (r.uniform() - 0.5)};
    const double zt = -std::log(-std::log(r.uniform()));
    const double z = gumbel_back_transform(zt, p);
    EXPECT_NEAR(gumbel_transform(z, p), zt, 1e-10 * (1 + std::abs(zt)));
  }
  EXPECT_NEAR(gumbel_back_transform(0.0, {1.5, 2.0, -0.2}), 1.5, 1e-15);
}

TEST(GevMeanStd, TemporalMomentLimits) {
  EXPECT_NEAR(gev_mean_offset(1e-6), kEulerGamma, 1e-5);
  EXPECT_NEAR(gev_scale_per_std(1e-6), std::sqrt(6.0) / kPi, 1e-5);
  EXPECT_NEAR(gev_mean_offset(0.0), kEulerGamma, 1e-15);
  EXPECT_THROW(gev_mean_std({0, 1, -0.5}), DomainError);
  EXPECT_THROW(gev_mean_offset(-1.0), DomainError);
}

TEST(GevMeanStd, MatchesQuadratureOfQuantile) {
  for (double xi : {-0.3, -0.1, 0.15, 0.5}) {
    const double mu = 2.0, s = 1.7;
    const double m = oracle::integrate_y([&](double y) { return oracle::gev_q(y, mu, s, xi); });
    const double m2 = oracle::integrate_y([&](double y) { return std::pow(oracle::gev_q(y, mu, s, xi) - m, 2); });
    const auto ms = gev_mean_std({mu, s, xi});
    EXPECT_NEAR(ms.mean, m, 1e-9) << xi;
    EXPECT_NEAR(ms.std, std::sqrt(m2), 1e-6) << xi;
  }
  // xi = 0.5 closed form against Monte Carlo.
  const auto draws = gev_rand(400000, {0, 1, 0.5}, 3);
  const double mc = std::accumulate(draws.begin(), draws.end(), 0.0) / draws.size();
  EXPECT_NEAR(gev_mean_std({0, 1, 0.5}).mean, (1 - std::tgamma(1.5)) / 0.5, 1e-12);
  EXPECT_NEAR(mc, (1 - std::tgamma(1.5)) / 0.5, 0.005);
}
