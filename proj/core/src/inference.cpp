#include "nsgev/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "nsgev/distributions.hpp"
#include "nsgev/error.hpp"
#include "nsgev/fitters.hpp"
#include "nsgev/rng.hpp"
#include "parallel.hpp"

namespace nsgev {
namespace {

// Type-7 quantile of sorted data.
double quantile_sorted(const std::vector<double>& s, double p) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = p * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (h - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

}  // namespace

std::vector<std::string> parameter_names(const ModelSpec& spec) {
  std::vector<std::string> names{"mu0"};
  for (const auto& t : spec.location_terms) names.push_back("mu_" + t);
  if (spec.constant_scale()) {
    names.emplace_back("sigma");
  } else {
    names.emplace_back("sigma0");
    for (const auto& t : spec.logscale_terms) names.push_back("sigma_" + t);
  }
  names.emplace_back("xi");
  return names;
}

std::vector<double> parameter_vector(const FitResult& fit) {
  const auto& p = fit.params;
  std::vector<double> v = p.mu_coef;
  if (fit.spec.constant_scale()) {
    v.push_back(std::exp(p.logsigma_coef.at(0)));
  } else {
    v.insert(v.end(), p.logsigma_coef.begin(), p.logsigma_coef.end());
  }
  v.push_back(p.xi);
  return v;
}

BootstrapReport bootstrap_se(const FitResult& fit, const AnnualSeries& series, std::size_t B, std::uint64_t seed,
                             std::size_t threads) {
  if (B < 2) throw DomainError("bootstrap needs at least 2 replicates");
  if (!fit.diagnostics.converged) throw DomainError("bootstrap requires a converged fit");
  const ModelDesign design(series, fit.spec);
  const auto per_obs = evaluate_all(fit.params, design);
  for (const auto& p : per_obs) {
    if (!(p.sigma > 1e-10 * (1.0 + std::abs(p.mu))) || !std::isfinite(p.mu) || !std::isfinite(p.sigma))
      throw DomainError("bootstrap: fitted scale is degenerate");
  }

  BootstrapReport rep;
  rep.B = B;
  rep.method = fit.method;
  rep.spec = fit.spec;
  rep.seed = seed;
  rep.names = parameter_names(fit.spec);
  rep.estimate = parameter_vector(fit);
  const std::size_t k = rep.names.size();

  std::vector<std::optional<std::vector<double>>> draws(B);
  detail::parallel_for(B, threads, [&](std::size_t b) {
    CounterRng rng(seed, derive_stream({seed, 0xB007ULL, b}));
    std::vector<double> z(series.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double zt = -std::log(-std::log(rng.uniform()));
      z[i] = gumbel_back_transform(zt, per_obs[i]);
    }
    try {
      const FitResult r = refit(fit, series.with_values(std::move(z)));
      if (!r.diagnostics.converged) return;
      auto v = parameter_vector(r);
      if (std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) draws[b] = std::move(v);
    } catch (const Error&) {
    }
  });

  std::vector<std::vector<double>> cols(k);
  for (const auto& d : draws) {
    if (!d) {
      ++rep.failure_count;
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) cols[j].push_back((*d)[j]);
  }
  rep.flagged = static_cast<double>(rep.failure_count) >= 0.05 * static_cast<double>(B);
  for (std::size_t j = 0; j < k; ++j) {
    auto& c = cols[j];
    const double m = c.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
    double ss = 0.0;
    for (double x : c) ss += (x - m) * (x - m);
    rep.mean.push_back(m);
    rep.se.push_back(c.size() > 1 ? std::sqrt(ss / static_cast<double>(c.size() - 1))
                                  : std::numeric_limits<double>::quiet_NaN());
    std::sort(c.begin(), c.end());
    rep.q025.push_back(quantile_sorted(c, 0.025));
    rep.q975.push_back(quantile_sorted(c, 0.975));
  }
  return rep;
}

double gld(std::span<const double> ztilde, const Eigen::Matrix4d& v_inverse) {
  const Eigen::Vector4d d = gumbel_population_lmoments().as_vector() - sample_lmoments(ztilde).as_vector();
  return d.dot(v_inverse * d);
}

double gld(std::span<const double> ztilde, const LMomentCovariance& cov) {
  return gld(ztilde, regularized_inverse(cov));
}

std::vector<std::size_t> stratified_folds(std::size_t n, std::size_t folds, std::uint64_t seed, std::size_t repeat) {
  if (folds < 2) throw DomainError("cross-validation needs at least 2 folds");
  CounterRng rng(seed, derive_stream({seed, 0xCF01DULL, repeat}));
  std::vector<std::size_t> label(n);
  for (std::size_t start = 0; start < n; start += folds) {
    const auto perm = random_permutation(folds, rng);
    for (std::size_t j = 0; j < folds && start + j < n; ++j) label[start + j] = perm[j];
  }
  return label;
}

CvGldReport cv_gld(const AnnualSeries& series, std::span<const ModelSpec> specs, Method method, std::uint64_t seed,
                   const CvGldOptions& opt) {
  if (specs.empty()) throw DomainError("cv_gld needs at least one candidate model");
  const std::size_t n = series.size();
  std::size_t max_params = 0;
  for (const auto& s : specs) max_params = std::max(max_params, s.parameter_count());
  if (n < opt.folds * (max_params + 2))
    throw InsufficientDataError("cv_gld: need at least folds * (parameters + 2) observations");
  if (n / opt.folds < 8) throw InsufficientDataError("cv_gld: test folds would hold fewer than 8 observations");
  if (opt.repeats == 0) throw DomainError("cv_gld needs at least one repeat");

  CvGldReport rep;
  rep.method = method;
  rep.repeats = opt.repeats;
  rep.folds = opt.folds;
  rep.seed = seed;

  // Pooled full-data residuals for the frozen covariance.
  std::vector<double> pooled;
  for (const auto& s : specs) {
    const FitResult full = fit(method, series, s, opt.covariate_variant);
    for (double z : full.std_residuals)
      if (std::isfinite(z)) pooled.push_back(z);
  }
  rep.covariance = lmoment_covariance(pooled, opt.covariance_reps, seed, n);
  const Eigen::Matrix4d vinv = regularized_inverse(rep.covariance);

  const std::size_t tasks = opt.repeats * opt.folds;
  std::vector<std::vector<std::size_t>> labels(opt.repeats);
  for (std::size_t r = 0; r < opt.repeats; ++r) labels[r] = stratified_folds(n, opt.folds, seed, r);

  for (const auto& s : specs) {
    std::vector<double> value(tasks, std::numeric_limits<double>::quiet_NaN());
    detail::parallel_for(tasks, opt.threads, [&](std::size_t task) {
      const std::size_t r = task / opt.folds, f = task % opt.folds;
      std::vector<std::size_t> train, test;
      for (std::size_t i = 0; i < n; ++i) (labels[r][i] == f ? test : train).push_back(i);
      try {
        const FitResult trained = fit(method, series.subset(train), s, opt.covariate_variant);
        std::size_t outside = 0;
        const auto zt = standardized_residuals(series.subset(test), trained.spec, trained.params, &outside);
        if (outside > 0) return;
        value[task] = gld(zt, vinv);
      } catch (const Error&) {
      }
    });
    CvGldEntry e;
    e.spec = s;
    double sum = 0.0;
    for (double v : value) {
      if (std::isfinite(v)) {
        sum += v;
        ++e.evaluated_folds;
      } else {
        ++e.skipped_folds;
      }
    }
    e.cv_gld = e.evaluated_folds > 0 ? sum / static_cast<double>(e.evaluated_folds)
                                     : std::numeric_limits<double>::quiet_NaN();
    e.flagged = static_cast<double>(e.skipped_folds) > 0.1 * static_cast<double>(tasks);
    rep.models.push_back(std::move(e));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < rep.models.size(); ++m) {
    if (rep.models[m].cv_gld < best) {
      best = rep.models[m].cv_gld;
      rep.best = m;
    }
  }
  return rep;
}

}  // namespace nsgev
