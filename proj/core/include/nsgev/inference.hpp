#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nsgev/fit_result.hpp"
#include "nsgev/lmoments.hpp"
#include "nsgev/model.hpp"
#include "nsgev/series.hpp"

namespace nsgev {

struct BootstrapReport {
  std::size_t B = 0;
  Method method = Method::prop;
  ModelSpec spec;
  std::uint64_t seed = 0;
  std::vector<std::string> names;  // see parameter_names()
  std::vector<double> estimate;    // the original fit
  std::vector<double> se;
  std::vector<double> mean;
  std::vector<double> q025;
  std::vector<double> q975;
  std::size_t failure_count = 0;
  bool flagged = false;  // failure_count / B >= 0.05
};

/// mu0, mu_<term>..., then "sigma" for a constant scale or sigma0,
/// sigma_<term>... (log-scale coefficients), then xi.
std::vector<std::string> parameter_names(const ModelSpec& spec);
std::vector<double> parameter_vector(const FitResult& fit);

/// Parametric bootstrap: standard-Gumbel draws mapped back through the fitted
/// parameters at the observed covariates, refitted with the same method.
/// threads = 0 reads NSGEV_THREADS.
BootstrapReport bootstrap_se(const FitResult& fit, const AnnualSeries& series, std::size_t B = 300,
                             std::uint64_t seed = 0, std::size_t threads = 0);

/// (lambda - l)' V^-1 (lambda - l) with lambda the standard-Gumbel L-moments
/// and l the sample L-moments of ztilde.
double gld(std::span<const double> ztilde, const LMomentCovariance& cov);
double gld(std::span<const double> ztilde, const Eigen::Matrix4d& v_inverse);

struct CvGldEntry {
  ModelSpec spec;
  double cv_gld = 0.0;
  std::size_t evaluated_folds = 0;
  std::size_t skipped_folds = 0;
  bool flagged = false;  // more than 10% of folds skipped
};

struct CvGldReport {
  Method method = Method::prop;
  std::vector<CvGldEntry> models;
  std::size_t repeats = 0;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  LMomentCovariance covariance;
  std::size_t best = 0;  // index of the smallest CV GLD
};

struct CvGldOptions {
  std::size_t repeats = 20;
  std::size_t folds = 5;
  std::size_t covariance_reps = kDefaultCovarianceReps;
  std::size_t threads = 0;
  bool covariate_variant = false;  // PROP via fit_prop_covariate for every spec
};

/// Repeated k-fold CV of the generalized L-moment distance. V is estimated
/// once from the pooled full-data residuals of every candidate and frozen.
CvGldReport cv_gld(const AnnualSeries& series, std::span<const ModelSpec> specs, Method method,
                   std::uint64_t seed = 0, const CvGldOptions& opt = {});

/// Fold label of every observation for one repeat: consecutive blocks of
/// `folds` observations each get a random permutation of the labels.
std::vector<std::size_t> stratified_folds(std::size_t n, std::size_t folds, std::uint64_t seed, std::size_t repeat);

}  // namespace nsgev
