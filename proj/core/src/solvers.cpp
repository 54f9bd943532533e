#include "nsgev/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nsgev/error.hpp"

namespace nsgev {

const char* to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::domain_violation: return "domain-violation";
  }
  return "unknown";
}

namespace {

std::optional<Eigen::MatrixXd> fd_jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& fx) {
  const Eigen::Index d = x.size();
  Eigen::MatrixXd J(fx.size(), d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x(j)));
    Eigen::VectorXd xp = x;
    xp(j) += h;
    if (auto fp = f(xp)) {
      J.col(j) = (*fp - fx) / h;
      continue;
    }
    xp(j) = x(j) - h;  // forward point infeasible: backward difference
    auto fm = f(xp);
    if (!fm) return std::nullopt;
    J.col(j) = (fx - *fm) / h;
  }
  return J;
}

}  // namespace

SolveOutcome newton_system(const ResidualFn& f, const Eigen::VectorXd& x0, const NewtonOptions& opt) {
  SolveOutcome out;
  out.root = x0;
  auto fx = f(x0);
  if (!fx) {
    out.status = SolveStatus::domain_violation;
    out.residual_norm = std::numeric_limits<double>::infinity();
    return out;
  }
  Eigen::VectorXd x = x0;
  out.residual_norm = fx->cwiseAbs().maxCoeff();
  for (int it = 0; it < opt.max_iter; ++it) {
    if (out.residual_norm < opt.tol) {
      out.status = SolveStatus::converged;
      return out;
    }
    out.iterations = it + 1;
    auto J = fd_jacobian(f, x, *fx);
    if (!J) {
      out.status = SolveStatus::domain_violation;
      return out;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(*J);
    if (!lu.isInvertible()) {
      lu.compute(*J + 1e-8 * Eigen::MatrixXd::Identity(J->rows(), J->cols()));
      if (!lu.isInvertible()) {
        out.status = SolveStatus::diverged;
        return out;
      }
    }
    const Eigen::VectorXd step = lu.solve(-*fx);
    if (!step.allFinite()) {
      out.status = SolveStatus::diverged;
      return out;
    }
    const double norm0 = fx->norm();
    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k <= opt.max_halvings; ++k, lambda *= 0.5) {
      const Eigen::VectorXd trial = x + lambda * step;
      auto ft = f(trial);
      if (ft && ft->allFinite() && ft->norm() < norm0) {
        x = trial;
        fx = std::move(ft);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.status = SolveStatus::diverged;
      return out;
    }
    out.root = x;
    out.residual_norm = fx->cwiseAbs().maxCoeff();
  }
  out.status = out.residual_norm < opt.tol ? SolveStatus::converged : SolveStatus::max_iter;
  return out;
}

std::vector<SolveOutcome> multistart_solve(const ResidualFn& f, std::span<const Eigen::VectorXd> starts,
                                           const NewtonOptions& opt, double dedupe_tol) {
  std::vector<SolveOutcome> roots;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    SolveOutcome o = newton_system(f, starts[s], opt);
    o.start_index = s;
    if (o.status != SolveStatus::converged) continue;
    const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](const SolveOutcome& r) {
      return (r.root - o.root).cwiseAbs().maxCoeff() < dedupe_tol;
    });
    if (!duplicate) roots.push_back(std::move(o));
  }
  return roots;
}

double brent_root(const std::function<double(double)>& g, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double fa = g(a), fb = g(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0.0) == (fb > 0.0))
    throw NumericalError("brent_root: no sign change on the bracket");
  if (std::abs(fa) < std::abs(fb)) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = a, fc = fa, d = b - a;
  bool bisected = true;
  for (int it = 0; it < 500; ++it) {
    if (fb == 0.0 || std::abs(b - a) < tol) return b;
    double s = 0.0;
    if (fa != fc && fb != fc) {
      s = a * fb * fc / ((fa - fb) * (fa - fc)) + b * fa * fc / ((fb - fa) * (fb - fc)) +
          c * fa * fb / ((fc - fa) * (fc - fb));
    } else {
      s = b - fb * (b - a) / (fb - fa);
    }
    const double m = (3.0 * a + b) / 4.0;
    const bool outside = !((s > std::min(m, b) && s < std::max(m, b)));
    if (outside || (bisected && std::abs(s - b) >= std::abs(b - c) / 2.0) ||
        (!bisected && std::abs(s - b) >= std::abs(c - d) / 2.0) || (bisected && std::abs(b - c) < tol) ||
        (!bisected && std::abs(c - d) < tol)) {
      s = 0.5 * (a + b);
      bisected = true;
    } else {
      bisected = false;
    }
    const double fs = g(s);
    d = c;
    c = b;
    fc = fb;
    if ((fa > 0.0) != (fs > 0.0)) {
      b = s;
      fb = fs;
    } else {
      a = s;
      fa = fs;
    }
    if (std::abs(fa) < std::abs(fb)) {
      std::swap(a, b);
      std::swap(fa, fb);
    }
  }
  return b;
}

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& h, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& scale, double tol, int max_iter) {
  const Eigen::Index d = x0.size();
  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(d + 1), x0);
  std::vector<double> val(pts.size());
  for (Eigen::Index j = 0; j < d; ++j) pts[static_cast<std::size_t>(j + 1)](j) += scale(j);
  for (std::size_t i = 0; i < pts.size(); ++i) val[i] = h(pts[i]);

  std::vector<std::size_t> order(pts.size());
  NelderMeadResult res;
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    if (std::isfinite(val[worst]) && val[worst] - val[best] < tol) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t k = 0; k + 1 < order.size(); ++k) centroid += pts[order[k]];
    centroid /= static_cast<double>(d);

    const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    const double fr = h(xr);
    if (fr < val[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = h(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = h(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k < order.size(); ++k) {
      auto& p = pts[order[k]];
      p = pts[best] + 0.5 * (p - pts[best]);
      val[order[k]] = h(p);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
  res.x = pts[best];
  res.value = val[best];
  return res;
}

}  // namespace nsgev
