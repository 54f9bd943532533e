#include "nsgev/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "nsgev/error.hpp"
#include "nsgev/rng.hpp"

namespace nsgev {
namespace {

Eigen::Map<const Eigen::VectorXd> as_vec(std::span<const double> y) {
  return {y.data(), static_cast<Eigen::Index>(y.size())};
}

void check_shape(const DesignMatrix& X, std::span<const double> y) {
  if (X.rows() != y.size()) throw DomainError("regression: design rows and response length differ");
  if (X.rows() <= X.cols()) throw InsufficientDataError("regression: need more observations than coefficients");
}

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < A.cols()) throw SingularDesignError("regression: design matrix is rank deficient");
  return qr.solve(b);
}

}  // namespace

DesignMatrix DesignMatrix::with_intercept(
    std::size_t n, const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
  DesignMatrix d;
  d.x.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns.size() + 1));
  d.x.col(0).setOnes();
  d.names.push_back("(intercept)");
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto& [name, values] = columns[j];
    if (values.size() != n) throw DomainError("design column '" + name + "' has the wrong length");
    for (std::size_t i = 0; i < n; ++i) d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) = values[i];
    d.names.push_back(name);
  }
  return d;
}

RegressionFit ols_fit(const DesignMatrix& X, std::span<const double> y) {
  check_shape(X, y);
  RegressionFit fit;
  fit.coef = solve_least_squares(X.x, as_vec(y));
  fit.residuals = as_vec(y) - X.x * fit.coef;
  fit.method = RegressionMethod::ols;
  return fit;
}

RegressionFit wls_fit(const DesignMatrix& X, std::span<const double> y, std::span<const double> w) {
  check_shape(X, y);
  if (w.size() != y.size()) throw DomainError("wls_fit: weight length differs from response length");
  Eigen::VectorXd sw(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw DomainError("wls_fit: weights must be positive and finite");
    sw(static_cast<Eigen::Index>(i)) = std::sqrt(w[i]);
  }
  RegressionFit fit;
  fit.coef = solve_least_squares(sw.asDiagonal() * X.x, sw.cwiseProduct(as_vec(y)));
  fit.residuals = as_vec(y) - X.x * fit.coef;
  fit.method = RegressionMethod::wls;
  return fit;
}

double tukey_psi(double u, double c) noexcept {
  if (std::abs(u) >= c) return 0.0;
  const double v = 1.0 - (u / c) * (u / c);
  return u * v * v;
}

double tukey_weight(double u, double c) noexcept {
  if (std::abs(u) >= c) return 0.0;
  const double v = 1.0 - (u / c) * (u / c);
  return v * v;
}

double median(std::vector<double> v) {
  if (v.empty()) throw InsufficientDataError("median of an empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

namespace {

// S-estimate: biweight rho with c = 1.54764 and b = 0.5 for 50% breakdown.
constexpr double kSc = 1.54764;
constexpr double kSb = 0.5;

double rho_s(double u) {
  const double v = u / kSc;
  if (std::abs(v) >= 1.0) return 1.0;
  const double v2 = v * v;
  return v2 * (3.0 - 3.0 * v2 + v2 * v2);
}

double mean_rho(const Eigen::VectorXd& r, double s, double dof) {
  double t = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) t += rho_s(r(i) / s);
  return t / dof;
}

double mad_scale(const Eigen::VectorXd& r) {
  std::vector<double> a(static_cast<std::size_t>(r.size()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(r(static_cast<Eigen::Index>(i)));
  return median(std::move(a)) / 0.6745;
}

// M-scale: mean rho(r / s) = b by the fixed-point iteration.
double m_scale(const Eigen::VectorXd& r, double s, double dof) {
  if (!(s > 0.0)) s = mad_scale(r);
  if (!(s > 0.0)) return 0.0;
  for (int it = 0; it < 200; ++it) {
    const double next = s * std::sqrt(mean_rho(r, s, dof) / kSb);
    if (std::abs(next - s) <= 1e-10 * s) return next;
    s = next;
  }
  return s;
}

std::optional<Eigen::VectorXd> weighted_step(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                             const Eigen::VectorXd& r, double s) {
  Eigen::VectorXd sw(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) sw(i) = std::sqrt(tukey_weight(r(i) / s, kSc));
  try {
    return solve_least_squares(sw.asDiagonal() * X, sw.cwiseProduct(y));
  } catch (const SingularDesignError&) {
    return std::nullopt;
  }
}

struct SCandidate {
  Eigen::VectorXd beta;
  double scale = 0.0;
};

// I-steps (one scale update, one reweighted fit) from beta. Returns the
// final residuals and the last one-step scale.
struct IStepResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd r;
  double s = 0.0;
};

IStepResult i_steps(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Eigen::VectorXd beta, double s, double dof,
                    int steps, bool until_converged) {
  Eigen::VectorXd r = y - X * beta;
  for (int k = 0; k < steps; ++k) {
    s = s * std::sqrt(mean_rho(r, s, dof) / kSb);
    if (!(s > 0.0)) break;
    auto next = weighted_step(X, y, r, s);
    if (!next) break;
    const double change = (*next - beta).norm();
    beta = *next;
    r = y - X * beta;
    if (until_converged && change <= 1e-7 * beta.norm()) break;
  }
  return {beta, r, s};
}

// Fast-S (Salibian-Barrera and Yohai): elemental subsets, two I-steps each,
// the best two refined to convergence.
SCandidate s_estimate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const MmOptions& opt) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  const double dof = static_cast<double>(n - p);
  CounterRng rng(opt.seed, n);
  std::vector<SCandidate> best;  // at most two, ascending scale
  std::vector<std::size_t> idx(p);
  for (std::size_t k = 0; k < opt.subsamples; ++k) {
    for (std::size_t j = 0; j < p; ++j) {
      bool fresh = false;
      while (!fresh) {
        idx[j] = static_cast<std::size_t>(rng.below(n));
        fresh = std::find(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(j), idx[j]) ==
                idx.begin() + static_cast<std::ptrdiff_t>(j);
      }
    }
    Eigen::MatrixXd A(p, p);
    Eigen::VectorXd b(p);
    for (std::size_t j = 0; j < p; ++j) {
      A.row(static_cast<Eigen::Index>(j)) = X.row(static_cast<Eigen::Index>(idx[j]));
      b(static_cast<Eigen::Index>(j)) = y(static_cast<Eigen::Index>(idx[j]));
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd beta = lu.solve(b);
    const Eigen::VectorXd r = y - X * beta;
    const double s0 = mad_scale(r);
    if (!(s0 > 0.0)) return {beta, 0.0};  // half the points lie exactly on this fit
    const IStepResult it = i_steps(X, y, beta, s0, dof, 2, false);
    // mean rho falls as the scale grows: a candidate whose mean rho at the
    // current second-best scale is already >= b cannot improve on it.
    if (best.size() == 2 && mean_rho(it.r, best.back().scale, dof) >= kSb) continue;
    SCandidate c{it.beta, m_scale(it.r, it.s, dof)};
    if (!(c.scale > 0.0) || !std::isfinite(c.scale)) continue;
    if (best.size() == 2 && c.scale >= best.back().scale) continue;
    best.push_back(c);
    std::sort(best.begin(), best.end(), [](const SCandidate& u, const SCandidate& v) { return u.scale < v.scale; });
    if (best.size() > 2) best.pop_back();
  }
  if (best.empty()) throw SingularDesignError("mm_robust_fit: no nonsingular elemental subset");
  SCandidate out{};
  out.scale = std::numeric_limits<double>::infinity();
  for (const auto& c : best) {
    const IStepResult it = i_steps(X, y, c.beta, c.scale, dof, 500, true);
    const double scale = m_scale(it.r, it.s, dof);
    if (scale < out.scale) out = {it.beta, scale};
  }
  return out;
}

}  // namespace

RegressionFit mm_robust_fit(const DesignMatrix& X, std::span<const double> y, const MmOptions& opt) {
  RegressionFit fit = ols_fit(X, y);
  fit.method = RegressionMethod::mm;
  const auto yv = as_vec(y);
  double tau = 0.0;
  if (opt.start == MmStart::ols_mad) {
    const double n = static_cast<double>(X.rows());
    const double p = static_cast<double>(X.cols() - 1);  // regressors excluding the intercept
    std::vector<double> abs_r(X.rows());
    for (std::size_t i = 0; i < abs_r.size(); ++i) abs_r[i] = std::abs(fit.residuals(static_cast<Eigen::Index>(i)));
    tau = 1.4826 * (1.0 + 5.0 / (n - p)) * median(abs_r);
  } else {
    const auto s = s_estimate(X.x, yv, opt);
    tau = s.scale;
    fit.coef = s.beta;
    fit.residuals = yv - X.x * fit.coef;
  }
  fit.scale_tau = tau;
  if (!(tau > 0.0)) return fit;  // exact fit

  Eigen::VectorXd w(X.x.rows());
  fit.converged = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    fit.iterations = it;
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = tukey_weight(fit.residuals(i) / tau, opt.tuning);
    Eigen::VectorXd sw = w.cwiseSqrt();
    Eigen::VectorXd next;
    try {
      next = solve_least_squares(sw.asDiagonal() * X.x, sw.cwiseProduct(yv));
    } catch (const SingularDesignError&) {
      break;  // too few points keep positive weight; last iterate flagged
    }
    const double change = (next - fit.coef).cwiseAbs().maxCoeff();
    fit.coef = next;
    fit.residuals = yv - X.x * fit.coef;
    if (change < opt.tol * (1.0 + fit.coef.cwiseAbs().maxCoeff())) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

RegressionFit sen_fit(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size()) throw DomainError("sen_fit: t and y lengths differ");
  if (t.size() < 2) throw InsufficientDataError("sen_fit: need at least 2 points");
  std::vector<double> slopes;
  slopes.reserve(t.size() * (t.size() - 1) / 2);
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[j] != t[i]) slopes.push_back((y[j] - y[i]) / (t[j] - t[i]));
  if (slopes.empty()) throw SingularDesignError("sen_fit: all time indices are equal");
  const double slope = median(std::move(slopes));
  std::vector<double> inter(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) inter[i] = y[i] - slope * t[i];
  RegressionFit fit;
  fit.coef = Eigen::Vector2d(median(inter), slope);
  fit.residuals.resize(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i)
    fit.residuals(static_cast<Eigen::Index>(i)) = y[i] - fit.coef(0) - slope * t[i];
  fit.method = RegressionMethod::sen;
  return fit;
}

RegressionFit log_linear_fit(const DesignMatrix& X, std::span<const double> e, bool robust) {
  std::vector<double> le(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i] >= 0.0)) throw DomainError("log_linear_fit: values must be non-negative");
    le[i] = std::log(e[i] + kLogGuard);
  }
  return robust ? mm_robust_fit(X, le) : ols_fit(X, le);
}

}  // namespace nsgev
