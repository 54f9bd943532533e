#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nsgev {

enum class SolveStatus { converged, max_iter, diverged, domain_violation };

const char* to_string(SolveStatus s) noexcept;

struct SolveOutcome {
  Eigen::VectorXd root;
  double residual_norm = 0.0;  // infinity norm of f(root)
  SolveStatus status = SolveStatus::diverged;
  std::size_t start_index = 0;
  int iterations = 0;
};

/// Residual function; std::nullopt marks a point outside the domain.
using ResidualFn = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>;

struct NewtonOptions {
  double tol = 1e-9;
  int max_iter = 100;
  int max_halvings = 20;
};

/// Damped Newton with a forward-difference Jacobian and step halving on ||f||.
SolveOutcome newton_system(const ResidualFn& f, const Eigen::VectorXd& x0, const NewtonOptions& opt = {});

/// newton_system from every start; converged outcomes only, duplicates within
/// `dedupe_tol` (max-norm) collapsed onto the lowest start index.
std::vector<SolveOutcome> multistart_solve(const ResidualFn& f, std::span<const Eigen::VectorXd> starts,
                                           const NewtonOptions& opt = {}, double dedupe_tol = 1e-6);

/// Brent's method on [lo, hi] with g(lo) g(hi) <= 0; throws NumericalError otherwise.
double brent_root(const std::function<double(double)>& g, double lo, double hi, double tol = 1e-12);

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Simplex minimiser. h may return +inf for infeasible points; terminates when
/// the spread of vertex values drops below tol.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& h, const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& scale, double tol = 1e-10, int max_iter = 5000);

}  // namespace nsgev
