#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nsgev/fit_result.hpp"
#include "nsgev/model.hpp"

namespace nsgev {

enum class SimTarget { conventional, parey };
const char* to_string(SimTarget t) noexcept;

struct SimDesign {
  ModelSpec spec = ModelSpec::gev11();
  std::vector<double> mu_coef{0.0, -0.1};
  std::vector<double> logsigma_coef{1.0, 0.02};  // constant scale: {log sigma}
  std::vector<double> xi_grid{-0.35, -0.25, -0.15, -0.05, 0.0, 0.05, 0.15, 0.25, 0.35};
  std::vector<std::size_t> n_values{50};
  std::size_t replicates = 1000;
  double conventional_period = 100.0;  // evaluated at t = n
  int parey_period = 50;
  std::size_t threads = 0;  // 0 = NSGEV_THREADS or hardware concurrency
  bool keep_replicates = false;

  static SimDesign gev11();
  static SimDesign gev10();
  static SimDesign gev20();
  [[nodiscard]] NsGevParams true_params(double xi) const;
  void validate() const;
};

struct SimCell {
  std::string measure;  // bias | se | rmse
  Method method = Method::prop;
  double xi = 0.0;
  std::size_t n = 0;
  SimTarget target = SimTarget::conventional;
  double value = 0.0;
  std::size_t failures = 0;
  double true_rl = 0.0;
};

struct SimReplicate {
  Method method = Method::prop;
  double xi = 0.0;
  std::size_t n = 0;
  std::size_t rep = 0;
  double conventional = 0.0;  // NaN on failure
  double parey = 0.0;
  bool fallback = false;
};

struct TrueRl {
  double xi = 0.0;
  std::size_t n = 0;
  double conventional = 0.0;
  double parey = 0.0;
};

struct SimReport {
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::vector<TrueRl> true_rl;
  std::vector<SimCell> cells;
  std::vector<SimReplicate> replicate_rows;  // only with keep_replicates
};

/// The five compared estimators.
std::vector<Method> default_sim_methods();

/// Closed-form conventional level at t = n and root-solved Parey level.
std::vector<TrueRl> true_rl_table(const SimDesign& design);

/// Replicate streams are keyed by (seed, xi index, n, replicate) so every
/// method sees the same data; results do not depend on the thread count.
SimReport run_simulation(const SimDesign& design, const std::vector<Method>& methods, std::uint64_t seed = 0);

/// measure,method,xi,n,target,value,failures,true_rl
std::string sim_report_csv(const SimReport& report);
std::string sim_replicates_csv(const SimReport& report);

/// Shortest decimal form that round-trips.
std::string format_double(double v);

}  // namespace nsgev
