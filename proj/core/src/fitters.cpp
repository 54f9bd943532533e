#include "nsgev/fitters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nsgev/error.hpp"
#include "nsgev/lmoments.hpp"
#include "nsgev/regression.hpp"
#include "nsgev/returns.hpp"
#include "nsgev/special.hpp"

namespace nsgev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> column(const DesignMatrix& d, Eigen::Index j) {
  std::vector<double> v(d.rows());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = d.x(static_cast<Eigen::Index>(i), j);
  return v;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

void require_time_family(const ModelSpec& spec, const char* method) {
  if (spec.family == Family::covariate)
    throw DomainError(std::string(method) + " supports the gev10/gev11/gev20 families only");
}

void check_size(const AnnualSeries& series, const ModelSpec& spec) {
  if (series.size() < std::max<std::size_t>(spec.parameter_count() + 2, 4))
    throw InsufficientDataError("too few observations for model " + spec.to_string());
}

// Trend part: location trend, pseudo-residuals, exponential scale trend of
// |eps - mean(eps)| (intercept-only when the scale is constant).
struct TrendParts {
  RegressionFit loc;
  std::vector<double> eps;
  double eps_mean = 0.0;
  RegressionFit scale;
  std::vector<double> sd;
};

RegressionFit location_regression(const ModelDesign& d, std::span<const double> y, bool robust) {
  if (d.spec().family == Family::gev10) return sen_fit(column(d.location_design(), 1), y);
  if (robust || d.spec().family == Family::gev20) return mm_robust_fit(d.location_design(), y);
  return ols_fit(d.location_design(), y);
}

TrendParts trend_steps(const AnnualSeries& series, const ModelDesign& d, bool robust) {
  TrendParts p;
  const auto& y = series.values();
  p.loc = location_regression(d, y, robust);
  p.eps = to_std(p.loc.residuals);
  p.eps_mean = std::accumulate(p.eps.begin(), p.eps.end(), 0.0) / static_cast<double>(p.eps.size());
  std::vector<double> dev(p.eps.size());
  for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = std::abs(p.eps[i] - p.eps_mean);
  p.scale = log_linear_fit(d.logscale_design(), dev, robust);
  const Eigen::VectorXd log_sd = d.logscale_design().x * p.scale.coef;
  p.sd.resize(dev.size());
  for (std::size_t i = 0; i < dev.size(); ++i) p.sd[i] = std::exp(log_sd(static_cast<Eigen::Index>(i)));
  return p;
}

// GN16 pseudo-residuals, shape and temporal-moment parameters from the trend parts.
struct Gn16Estimate {
  NsGevParams params;
  bool zero_scale_slope = false;
};

NsGevParams temporal_moment_params(const TrendParts& parts, const ModelSpec& spec, double xi) {
  const double b = gev_mean_offset(xi);
  const double c = gev_scale_per_std(xi);
  NsGevParams p;
  p.xi = xi;
  p.mu_coef = to_std(parts.loc.coef);
  if (!spec.constant_scale()) {
    p.logsigma_coef = to_std(parts.scale.coef);
    p.logsigma_coef[0] += std::log(c);
    p.loc_scale_coupling = -b;
  } else {
    const double sigma = c * std::exp(parts.scale.coef(0));
    p.mu_coef[0] -= b * sigma;
    p.logsigma_coef = {std::log(sigma)};
  }
  return p;
}

Gn16Estimate gn16_from_parts(TrendParts parts, const ModelSpec& spec) {
  Gn16Estimate est;
  // exp of the log-linear fit tracks the spread only up to a constant factor;
  // b(xi) and c(xi) need the standard deviation, so rescale to unit variance
  // of the standardized residuals (the sample SD when the scale is constant).
  double ss = 0.0;
  for (std::size_t i = 0; i < parts.eps.size(); ++i) ss += std::pow((parts.eps[i] - parts.eps_mean) / parts.sd[i], 2);
  const double k = std::sqrt(ss / static_cast<double>(parts.eps.size()));
  for (auto& v : parts.sd) v *= k;
  parts.scale.coef(0) += std::log(k);
  std::vector<double> q = parts.eps;
  if (!spec.constant_scale()) {
    const double slope = parts.scale.coef(1);
    est.zero_scale_slope = slope == 0.0;
    const double sign = slope > 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < q.size(); ++i)
      q[i] = parts.eps[i] >= parts.eps_mean ? parts.eps[i] - sign * parts.sd[i] : parts.eps[i] + sign * parts.sd[i];
  }
  const GevParams st = stationary_lme_gev(q);
  est.params = temporal_moment_params(parts, spec, st.xi);
  return est;
}

void finalize(FitResult& r, const AnnualSeries& series) {
  r.std_residuals = standardized_residuals(series, r.spec, r.params, &r.diagnostics.support_violations);
  r.diagnostics.n = series.size();
  if (r.diagnostics.support_violations > 0)
    r.diagnostics.notes.push_back(std::to_string(r.diagnostics.support_violations) +
                                  " observation(s) outside the fitted support");
  if (std::isnan(r.diagnostics.chi)) {
    const ModelDesign design(series, r.spec);
    r.diagnostics.chi = chi_distance(series.values(), evaluate_all(r.params, design));
  }
}

// Sums of the frozen slope terms per observation.
struct FrozenTerms {
  std::vector<double> loc;
  std::vector<double> logscale;
};

FrozenTerms frozen_terms(const ModelDesign& d, const NsGevParams& p) {
  FrozenTerms f;
  f.loc.resize(d.size());
  f.logscale.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto& row = d.row(i);
    double a = 0.0, s = 0.0;
    for (std::size_t j = 0; j < row.loc.size(); ++j) a += p.mu_coef.at(j + 1) * row.loc[j];
    for (std::size_t j = 0; j < row.logscale.size(); ++j) s += p.logsigma_coef.at(j + 1) * row.logscale[j];
    f.loc[i] = a;
    f.logscale[i] = s;
  }
  return f;
}

std::vector<Eigen::VectorXd> prop_starts(double mu0, double sigma0, double xi, double sigma_scale) {
  std::vector<Eigen::VectorXd> s;
  s.emplace_back(Eigen::Vector3d(mu0, sigma0, xi));
  for (double k : {0.5, 1.0, 2.0}) {
    s.emplace_back(Eigen::Vector3d(mu0 + k * sigma_scale, sigma0, xi));
    s.emplace_back(Eigen::Vector3d(mu0 - k * sigma_scale, sigma0, xi));
  }
  for (double k : {0.1, 0.3, 0.5}) {
    s.emplace_back(Eigen::Vector3d(mu0, sigma0 + k, xi));
    s.emplace_back(Eigen::Vector3d(mu0, sigma0 - k, xi));
  }
  for (double g : {-0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3}) s.emplace_back(Eigen::Vector3d(mu0, sigma0, g));
  return s;
}

NsGevParams with_intercepts(NsGevParams frozen, const Eigen::VectorXd& x) {
  frozen.mu_coef[0] = x(0);
  frozen.logsigma_coef[0] = x(1);
  frozen.xi = x(2);
  frozen.loc_scale_coupling = 0.0;
  return frozen;
}

// Three-equation solve shared by the time and covariate variants. `fallback` is returned
// (flagged) when no start converges.
FitResult solve_gumbel_system(const AnnualSeries& series, const ModelSpec& spec, const NsGevParams& frozen,
                              const Eigen::Vector3d& base, double sigma_scale, const NsGevParams& fallback,
                              const PropOptions& opt, FitDiagnostics diag) {
  const auto f = gumbel_lmoment_residual(series, spec, frozen);
  const auto starts = prop_starts(base(0), base(1), base(2), sigma_scale);
  const auto roots = multistart_solve(f, starts, opt.newton);

  FitResult r;
  r.method = Method::prop;
  r.spec = spec;
  r.diagnostics = std::move(diag);
  r.diagnostics.candidate_roots = roots.size();
  if (roots.empty()) {
    r.params = fallback;
    r.diagnostics.fallback = true;
    r.diagnostics.converged = false;
    r.diagnostics.status = "fallback";
    r.diagnostics.notes.push_back("no start solved the L-moment system; previous-step estimates kept");
    finalize(r, series);
    return r;
  }
  const ModelDesign design(series, spec);
  std::size_t best = 0;
  double best_chi = kInf;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto per_obs = evaluate_all(with_intercepts(frozen, roots[k].root), design);
    const double chi = chi_distance(series.values(), per_obs, opt.chi_periods);
    if (chi < best_chi) {
      best_chi = chi;
      best = k;
    }
  }
  r.params = with_intercepts(frozen, roots[best].root);
  r.diagnostics.chi = best_chi;
  r.diagnostics.residual_norm = roots[best].residual_norm;
  r.diagnostics.iterations = roots[best].iterations;
  r.diagnostics.status = "converged";
  r.diagnostics.converged = true;
  finalize(r, series);
  return r;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> standardized_residuals(const AnnualSeries& series, const ModelSpec& spec,
                                           const NsGevParams& params, std::size_t* violations) {
  const ModelDesign design(series, spec);
  std::vector<double> out(series.size());
  std::size_t bad = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto z = try_gumbel_transform(series.values()[i], evaluate(params, design.row(i)));
    if (z) {
      out[i] = *z;
    } else {
      out[i] = std::numeric_limits<double>::quiet_NaN();
      ++bad;
    }
  }
  if (violations) *violations = bad;
  return out;
}

ResidualFn gumbel_lmoment_residual(const AnnualSeries& series, const ModelSpec& spec, const NsGevParams& frozen) {
  const ModelDesign design(series, spec);
  auto terms = frozen_terms(design, frozen);
  const auto target = gumbel_population_lmoments();
  return [values = series.values(), terms = std::move(terms), target](
             const Eigen::VectorXd& x) -> std::optional<Eigen::VectorXd> {
    std::vector<double> zt(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const GevParams p{x(0) + terms.loc[i], std::exp(x(1) + terms.logscale[i]), x(2)};
      auto z = try_gumbel_transform(values[i], p);
      if (!z) return std::nullopt;
      zt[i] = *z;
    }
    try {
      const auto lm = sample_lmoments(zt);
      return Eigen::Vector3d(lm.l1 - target.l1, lm.l2 - target.l2, lm.t3 - target.t3);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
}

std::vector<double> linearized_location(const AnnualSeries& series, const ModelSpec& spec,
                                        const NsGevParams& params) {
  const ModelDesign design(series, spec);
  std::vector<double> mu(series.size());
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = evaluate(params, design.row(i)).mu;
  const auto X = DesignMatrix::with_intercept(series.size(), {{"t", series.time_index()}});
  return to_std(ols_fit(X, mu).coef);
}

FitResult fit_stationary(const AnnualSeries& series, bool gumbel) {
  const auto& x = series.values();
  const GevParams p = gumbel ? stationary_lme_gumbel(x) : stationary_lme_gev(x);
  FitResult r;
  r.method = gumbel ? Method::lme_sta_gum : Method::lme_sta_gev;
  r.spec = ModelSpec::stationary();
  r.params.mu_coef = {p.mu};
  r.params.logsigma_coef = {std::log(p.sigma)};
  r.params.xi = p.xi;
  finalize(r, series);
  return r;
}

FitResult fit_mle(const AnnualSeries& series, const ModelSpec& spec) {
  check_size(series, spec);
  const ModelDesign design(series, spec);
  const std::size_t n = series.size();
  const std::size_t kl = spec.location_terms.size(), ks = spec.logscale_terms.size();

  // Optimise over centred/scaled covariates, then map back.
  auto standardise = [&](const DesignMatrix& d, std::vector<double>& m, std::vector<double>& s) {
    Eigen::MatrixXd z = d.x;
    for (Eigen::Index j = 1; j < z.cols(); ++j) {
      const double mean = z.col(j).mean();
      const double sd = std::sqrt((z.col(j).array() - mean).square().sum() / static_cast<double>(n));
      if (!(sd > 0.0)) throw SingularDesignError("MLE: covariate '" + d.names[static_cast<std::size_t>(j)] + "' is constant");
      z.col(j) = (z.col(j).array() - mean) / sd;
      m.push_back(mean);
      s.push_back(sd);
    }
    return z;
  };
  std::vector<double> lm, ls, sm, ss;
  const Eigen::MatrixXd zl = standardise(design.location_design(), lm, ls);
  const Eigen::MatrixXd zs = standardise(design.logscale_design(), sm, ss);
  const auto& y = series.values();

  auto nll = [&](const Eigen::VectorXd& th) {
    const double xi = th(static_cast<Eigen::Index>(kl + ks + 2));
    const Eigen::VectorXd mu = zl * th.head(static_cast<Eigen::Index>(kl + 1));
    const Eigen::VectorXd ls_ = zs * th.segment(static_cast<Eigen::Index>(kl + 1), static_cast<Eigen::Index>(ks + 1));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      auto z = try_gumbel_transform(y[i], {mu(idx), std::exp(ls_(idx)), xi});
      if (!z || !std::isfinite(ls_(idx))) return kInf;
      total += ls_(idx) + (1.0 - xi) * *z + std::exp(-*z);
    }
    return std::isfinite(total) ? total : kInf;
  };

  GevParams st;
  try {
    st = stationary_lme_gev(y);
  } catch (const Error&) {
    st = stationary_lme_gumbel(y);
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(kl + ks + 3);
  Eigen::VectorXd th = Eigen::VectorXd::Zero(dim);
  th(0) = st.mu;
  th(static_cast<Eigen::Index>(kl + 1)) = std::log(st.sigma);
  th(dim - 1) = st.xi;
  if (!std::isfinite(nll(th))) th(dim - 1) = 0.0;
  if (!std::isfinite(nll(th))) throw NumericalError("MLE: no feasible starting point");

  Eigen::VectorXd scale(dim);
  for (Eigen::Index j = 0; j <= static_cast<Eigen::Index>(kl); ++j) scale(j) = 0.1 * st.sigma;
  for (Eigen::Index j = static_cast<Eigen::Index>(kl + 1); j < dim - 1; ++j) scale(j) = 0.1;
  scale(dim - 1) = 0.05;

  FitResult r;
  r.method = Method::mle;
  r.spec = spec;
  double prev = nll(th);
  NelderMeadResult nm;
  int total_iter = 0;
  bool converged = false;
  for (int restart = 0; restart < 20; ++restart) {
    nm = nelder_mead(nll, th, scale, 1e-11, 20000);
    total_iter += nm.iterations;
    th = nm.x;
    if (nm.converged && prev - nm.value < 1e-9) {
      converged = true;
      break;
    }
    prev = nm.value;
    scale *= 0.5;
  }
  NsGevParams p;
  p.mu_coef.assign(kl + 1, 0.0);
  p.logsigma_coef.assign(ks + 1, 0.0);
  p.mu_coef[0] = th(0);
  for (std::size_t j = 0; j < kl; ++j) {
    const double a = th(static_cast<Eigen::Index>(j + 1));
    p.mu_coef[j + 1] = a / ls[j];
    p.mu_coef[0] -= a * lm[j] / ls[j];
  }
  const auto off = static_cast<Eigen::Index>(kl + 1);
  p.logsigma_coef[0] = th(off);
  for (std::size_t j = 0; j < ks; ++j) {
    const double b = th(off + static_cast<Eigen::Index>(j + 1));
    p.logsigma_coef[j + 1] = b / ss[j];
    p.logsigma_coef[0] -= b * sm[j] / ss[j];
  }
  p.xi = th(dim - 1);
  r.params = p;
  r.diagnostics.iterations = total_iter;
  r.diagnostics.converged = converged;
  r.diagnostics.status = converged ? "converged" : "max-iter";
  r.diagnostics.residual_norm = nm.value;  // negative log-likelihood at the optimum
  r.diagnostics.notes.push_back("residual_norm holds the negative log-likelihood");
  finalize(r, series);
  return r;
}

FitResult fit_wls(const AnnualSeries& series, const ModelSpec& spec) {
  check_size(series, spec);
  const ModelDesign design(series, spec);
  const auto& y = series.values();
  const TrendParts parts = trend_steps(series, design, false);

  std::vector<double> beta = to_std(parts.loc.coef);
  if (!spec.constant_scale()) {
    std::vector<double> w(parts.sd.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (parts.sd[i] * parts.sd[i]);
    beta = to_std(wls_fit(design.location_design(), y, w).coef);
  }
  const Eigen::Map<const Eigen::VectorXd> bv(beta.data(), static_cast<Eigen::Index>(beta.size()));
  const Eigen::VectorXd fitted = design.location_design().x * bv;
  std::vector<double> zp(y.size());
  for (std::size_t i = 0; i < zp.size(); ++i) zp[i] = (y[i] - fitted(static_cast<Eigen::Index>(i))) / parts.sd[i];
  const GevParams st = stationary_lme_gev(zp);

  FitResult r;
  r.method = Method::wls;
  r.spec = spec;
  r.params.xi = st.xi;
  r.params.mu_coef = beta;
  if (!spec.constant_scale()) {
    r.params.logsigma_coef = to_std(parts.scale.coef);
    r.params.logsigma_coef[0] += std::log(st.sigma);
    r.params.loc_scale_coupling = st.mu / st.sigma;
  } else {
    const double sd = parts.sd.front();
    r.params.mu_coef[0] += st.mu * sd;
    r.params.logsigma_coef = {std::log(sd * st.sigma)};
  }
  if (r.params.loc_scale_coupling != 0.0 && spec.time_only())
    r.summary_mu_coef = linearized_location(series, spec, r.params);
  finalize(r, series);
  return r;
}

FitResult fit_gn16(const AnnualSeries& series, const ModelSpec& spec) {
  require_time_family(spec, "GN16");
  check_size(series, spec);
  const ModelDesign design(series, spec);
  const TrendParts parts = trend_steps(series, design, false);
  const Gn16Estimate est = gn16_from_parts(parts, spec);
  FitResult r;
  r.method = Method::gn16;
  r.spec = spec;
  r.params = est.params;
  r.diagnostics.zero_scale_slope = est.zero_scale_slope;
  if (est.zero_scale_slope) r.diagnostics.notes.push_back("scale slope is exactly zero; sign taken as -1");
  if (r.params.loc_scale_coupling != 0.0) r.summary_mu_coef = linearized_location(series, spec, r.params);
  finalize(r, series);
  return r;
}

FitResult fit_prop(const AnnualSeries& series, const ModelSpec& spec, const PropOptions& opt) {
  if (spec.family == Family::covariate) return fit_prop_covariate(series, spec, opt);
  check_size(series, spec);
  const ModelDesign design(series, spec);
  const TrendParts parts = trend_steps(series, design, true);

  FitDiagnostics diag;
  NsGevParams step1;
  try {
    const Gn16Estimate est = gn16_from_parts(parts, spec);
    step1 = est.params;
    diag.zero_scale_slope = est.zero_scale_slope;
  } catch (const Error& e) {
    step1 = temporal_moment_params(parts, spec, 0.0);
    diag.notes.push_back(std::string("robust GN16 step failed (") + e.what() + "); Gumbel shape used to start");
  }

  NsGevParams frozen = step1;
  frozen.loc_scale_coupling = 0.0;
  const FrozenTerms terms = frozen_terms(design, step1);
  const double sigma_bar = std::exp(step1.logsigma_coef[0] + mean_of(terms.logscale));
  const Eigen::Vector3d base(step1.mu_coef[0] + step1.loc_scale_coupling * sigma_bar, step1.logsigma_coef[0],
                             step1.xi);
  return solve_gumbel_system(series, spec, frozen, base, sigma_bar, step1, opt, std::move(diag));
}

FitResult fit_prop_covariate(const AnnualSeries& series, const ModelSpec& spec, const PropOptions& opt) {
  if (spec.location_terms.empty() && spec.logscale_terms.empty()) {
    FitResult r = fit_stationary(series, false);
    r.diagnostics.notes.push_back("no covariates: stationary GEV L-moment fit");
    return r;
  }
  check_size(series, spec);
  const ModelDesign design(series, spec);
  const auto& y = series.values();

  const RegressionFit loc = mm_robust_fit(design.location_design(), y);
  std::vector<double> abs_eps(y.size());
  for (std::size_t i = 0; i < abs_eps.size(); ++i) abs_eps[i] = std::abs(loc.residuals(static_cast<Eigen::Index>(i)));
  const RegressionFit sc = log_linear_fit(design.logscale_design(), abs_eps, false);

  NsGevParams frozen;
  frozen.mu_coef = to_std(loc.coef);
  frozen.logsigma_coef = to_std(sc.coef);
  const FrozenTerms terms = frozen_terms(design, frozen);

  FitDiagnostics diag;
  Eigen::Vector3d base;
  std::vector<double> u(y.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (y[i] - terms.loc[i]) / std::exp(terms.logscale[i]);
  try {
    const GevParams st = stationary_lme_gev(u);
    base = Eigen::Vector3d(st.mu, std::log(st.sigma), st.xi);
  } catch (const Error& e) {
    base = Eigen::Vector3d(frozen.mu_coef[0] - kEulerGamma * std::exp(sc.coef(0)), sc.coef(0), 0.0);
    diag.notes.push_back(std::string("detrended LME start failed (") + e.what() + ")");
  }
  const NsGevParams fallback = with_intercepts(frozen, base);
  const double sigma_bar = std::exp(base(1) + mean_of(terms.logscale));
  FitResult r = solve_gumbel_system(series, spec, frozen, base, sigma_bar, fallback, opt, std::move(diag));
  r.covariate_variant = true;
  return r;
}

FitResult fit(Method method, const AnnualSeries& series, const ModelSpec& spec, bool covariate_variant) {
  if (method == Method::prop && covariate_variant) return fit_prop_covariate(series, spec);
  switch (method) {
    case Method::lme_sta_gum: return fit_stationary(series, true);
    case Method::lme_sta_gev: return fit_stationary(series, false);
    case Method::mle: return fit_mle(series, spec);
    case Method::wls: return fit_wls(series, spec);
    case Method::gn16: return fit_gn16(series, spec);
    case Method::prop: return fit_prop(series, spec);
  }
  throw DomainError("unknown method");
}

FitResult refit(const FitResult& like, const AnnualSeries& series) {
  return fit(like.method, series, like.spec, like.covariate_variant);
}

}  // namespace nsgev
