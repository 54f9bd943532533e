#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "nsgev/distributions.hpp"
#include "nsgev/error.hpp"
#include "nsgev/lmoments.hpp"
#include "nsgev/rng.hpp"
#include "nsgev/special.hpp"
#include "oracles.hpp"

using namespace nsgev;

TEST(SampleLmoments, SmallExample) {
  const std::vector<double> x{1, 2, 3, 4};
  const auto lm = sample_lmoments(x);
  EXPECT_DOUBLE_EQ(lm.l1, 2.5);
  EXPECT_NEAR(lm.l2, 10.0 / 12.0, 1e-15);
  EXPECT_EQ(lm.kind, LMomentKind::sample);
  EXPECT_EQ(lm.n, 4u);
}

TEST(SampleLmoments, Errors) {
  EXPECT_THROW(sample_lmoments(std::vector<double>{1, 2, 3}), InsufficientDataError);
  EXPECT_THROW(sample_lmoments(std::vector<double>(6, 2.0)), DegenerateSampleError);
  EXPECT_THROW(sample_lmoments(std::vector<double>{1, 2, NAN, 4}), DomainError);
}

TEST(SampleLmoments, EqualsBruteForceDefinition) {
  CounterRng r(2024);
  for (int c = 0; c < 50; ++c) {
    const std::size_t n = 4 + c % 5;
    std::vector<double> x(n);
    for (auto& v : x) v = gumbel_back_transform(-std::log(-std::log(r.uniform())), {0, 1, 0.4 * (r.uniform() - 0.5)});
    const auto lm = sample_lmoments(x);
    const double b2 = oracle::brute_lmoment(x, 2);
    EXPECT_NEAR(lm.l1, oracle::brute_lmoment(x, 1), 1e-12);
    EXPECT_NEAR(lm.l2, b2, 1e-12);
    EXPECT_NEAR(lm.t3, oracle::brute_lmoment(x, 3) / b2, 1e-12);
    EXPECT_NEAR(lm.t4, oracle::brute_lmoment(x, 4) / b2, 1e-12);
  }
}

TEST(SampleLmoments, OrderInvariant) {
  std::vector<double> x = gev_rand(30, {0, 1, -0.1}, 4);
  const auto a = sample_lmoments(x);
  std::reverse(x.begin(), x.end());
  const auto b = sample_lmoments(x);
  EXPECT_EQ(a.as_vector(), b.as_vector());
}

TEST(GumbelLmoments, TargetsAndQuadrature) {
  const auto g = gumbel_population_lmoments();
  EXPECT_NEAR(g.l1, 0.5772157, 1e-7);
  EXPECT_NEAR(g.l2, 0.6931472, 1e-7);
  EXPECT_NEAR(g.t3, 0.169925, 1e-6);
  EXPECT_NEAR(g.t4, 16 - 10 * std::log2(3.0), 1e-12);
  auto q = [](double y) { return -std::log(y); };
  const double l2 = oracle::population_lmoment(q, 2);
  EXPECT_NEAR(l2, g.l2, 1e-10);
  EXPECT_NEAR(oracle::population_lmoment(q, 3) / l2, g.t3, 1e-10);
  EXPECT_NEAR(oracle::population_lmoment(q, 4) / l2, g.t4, 1e-10);
}

TEST(GumbelLmoments, MillionDraws) {
  const auto x = gev_rand(1000000, {0, 1, 0}, 99);
  const auto lm = sample_lmoments(x);
  EXPECT_NEAR(lm.l1, kEulerGamma, 0.005);
  EXPECT_NEAR(lm.l2, kLn2, 0.005);
  EXPECT_NEAR(lm.t3, 0.169925, 0.005);
}

TEST(GevLmoments, MatchQuadrature) {
  for (double xi : {-0.45, -0.2, -0.05, 1e-9, 0.1, 0.35, 0.8}) {
    const GevParams p{1.0, 2.0, xi};
    auto q = [&](double y) { return oracle::gev_q(y, p.mu, p.sigma, xi); };
    const auto lm = gev_lmoments_from_params(p);
    const double l2 = oracle::population_lmoment(q, 2);
    EXPECT_NEAR(lm.l1, oracle::population_lmoment(q, 1), 1e-8) << xi;
    EXPECT_NEAR(lm.l2, l2, 1e-8) << xi;
    EXPECT_NEAR(lm.t3, oracle::population_lmoment(q, 3) / l2, 1e-8) << xi;
    EXPECT_NEAR(lm.t4, oracle::population_lmoment(q, 4) / l2, 1e-7) << xi;
  }
  EXPECT_THROW(gev_lmoments_from_params({0, 1, -1.0}), DomainError);
}

TEST(GevLmoments, ShiftInvariantL2AndIdentityAtGumbel) {
  EXPECT_DOUBLE_EQ(gev_lmoments_from_params({0, 1, 0.2}).l2, gev_lmoments_from_params({50, 1, 0.2}).l2);
  const auto g = gev_lmoments_from_params({0, 1, 0});
  EXPECT_NEAR(g.l1, kEulerGamma, 1e-15);
  EXPECT_NEAR(g.l2, kLn2, 1e-15);
}

TEST(GevLmoments, Tau3MonteCarlo) {
  const auto x = gev_rand(2000000, {0, 1, 0.1}, 8);
  EXPECT_NEAR(sample_lmoments(x).t3, gev_tau3(0.1), 0.002);
}

TEST(ShapeFromTau3, InvertsTau3) {
  for (double xi = -0.95; xi < 0.96; xi += 0.05) EXPECT_NEAR(gev_shape_from_tau3(gev_tau3(xi)), xi, 1e-9) << xi;
  EXPECT_NEAR(gev_shape_from_tau3(gumbel_population_lmoments().t3), 0.0, 1e-8);
  EXPECT_THROW(gev_shape_from_tau3(1.2), Error);
}

TEST(StationaryLme, RecoversParameters) {
  const GevParams truth{110.9, 30.57, 0.015};
  const auto x = gev_rand(200000, truth, 5);
  const auto fit = stationary_lme_gev(x);
  EXPECT_NEAR(fit.mu, truth.mu, 0.3);
  EXPECT_NEAR(fit.sigma, truth.sigma, 0.3);
  EXPECT_NEAR(fit.xi, truth.xi, 0.01);
  const auto g = stationary_lme_gumbel(gev_rand(200000, {5, 2, 0}, 6));
  EXPECT_NEAR(g.mu, 5.0, 0.02);
  EXPECT_NEAR(g.sigma, 2.0, 0.02);
  EXPECT_EQ(g.xi, 0.0);
}

TEST(StationaryLme, GumbelTargetsGiveStandardGumbel) {
  const auto p = stationary_lme_gev(gumbel_population_lmoments());
  EXPECT_NEAR(p.mu, 0.0, 1e-8);
  EXPECT_NEAR(p.sigma, 1.0, 1e-8);
  EXPECT_NEAR(p.xi, 0.0, 1e-8);
}

TEST(LmomentCovariance, MeanVarianceAndInvariances) {
  const auto x = gev_rand(10000, {0, 1, 0}, 9);
  const auto cov = lmoment_covariance(x, 500, 1);
  const double pop_var = kPi * kPi / 6.0;
  EXPECT_NEAR(cov.v(0, 0) / (pop_var / 10000.0), 1.0, 0.2);
  EXPECT_FALSE(cov.warning.has_value());
  EXPECT_TRUE(cov.v.isApprox(cov.v.transpose()));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(cov.v);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-15);

  auto small = gev_rand(40, {0, 1, 0}, 10);
  const auto a = lmoment_covariance(small, 200, 3);
  auto doubled = small;
  for (auto& v : doubled) v *= 2;
  const auto d = lmoment_covariance(doubled, 200, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(d.v(i, j), 4 * a.v(i, j), 1e-12 * (1 + std::abs(a.v(i, j))));
  for (int i = 2; i < 4; ++i)
    for (int j = 2; j < 4; ++j) EXPECT_NEAR(d.v(i, j), a.v(i, j), 1e-12);

  std::vector<double> perm = small;
  std::sort(perm.begin(), perm.end());
  // Bootstrap indices point at different values after sorting, so only the
  // distribution is preserved; check agreement to bootstrap noise.
  const auto p = lmoment_covariance(perm, 2000, 3);
  const auto a2 = lmoment_covariance(small, 2000, 4);
  EXPECT_NEAR(p.v(1, 1) / a2.v(1, 1), 1.0, 0.15);
  EXPECT_TRUE(lmoment_covariance(small, 20, 3).warning.has_value());
}
