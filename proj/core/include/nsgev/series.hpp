#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nsgev {

/// Annual-maximum observations keyed by calendar year. Years are strictly
/// increasing; missing years are simply absent and keep their true time
/// index t = year - t0 + 1.
class AnnualSeries {
 public:
  AnnualSeries() = default;
  AnnualSeries(std::vector<int> years, std::vector<double> values, std::optional<int> t0 = std::nullopt);

  /// Series observed at t = 1..n (year = t).
  static AnnualSeries from_values(std::span<const double> values);

  void add_covariate(std::string name, std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] const std::vector<int>& years() const noexcept { return years_; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] int t0() const noexcept { return t0_; }
  [[nodiscard]] double t(std::size_t i) const { return static_cast<double>(years_.at(i) - t0_ + 1); }
  [[nodiscard]] std::vector<double> time_index() const;

  [[nodiscard]] bool has_covariate(std::string_view name) const noexcept;
  [[nodiscard]] const std::vector<double>& covariate(std::string_view name) const;
  [[nodiscard]] const std::vector<std::string>& covariate_names() const noexcept { return cov_names_; }

  /// Same years and covariates, new values (bootstrap / simulation).
  [[nodiscard]] AnnualSeries with_values(std::vector<double> values) const;
  /// Rows at the given positions, keeping t0.
  [[nodiscard]] AnnualSeries subset(std::span<const std::size_t> rows) const;

  std::string name;
  std::string units;

 private:
  void validate() const;

  std::vector<int> years_;
  std::vector<double> values_;
  int t0_ = 1;
  std::vector<std::string> cov_names_;
  std::vector<std::vector<double>> cov_values_;
};

struct CsvIngestReport {
  std::size_t skipped_empty = 0;  // rows whose value field was empty
};

/// Parse "year,value[,covariate...]" CSV (header required).
AnnualSeries parse_series_csv(std::string_view text, CsvIngestReport* report = nullptr);
AnnualSeries ingest_csv(const std::filesystem::path& path, CsvIngestReport* report = nullptr);

}  // namespace nsgev
