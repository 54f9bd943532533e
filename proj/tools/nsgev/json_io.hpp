#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nsgev/fit_result.hpp"
#include "nsgev/inference.hpp"
#include "nsgev/model.hpp"
#include "nsgev/series.hpp"

namespace nsgev::cli {

using nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

/// NaN and infinities become null.
ordered_json number(double v);

ordered_json to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const ordered_json& j);
ordered_json to_json(const NsGevParams& p);
NsGevParams params_from_json(const ordered_json& j);
ordered_json to_json(const FitDiagnostics& d);
ordered_json to_json(const AnnualSeries& s);
AnnualSeries series_from_json(const ordered_json& j);

/// method, model, params, summary_mu_coef, diagnostics, std_residuals.
ordered_json to_json(const FitResult& fit);
/// Inverse of to_json(FitResult); std_residuals are restored as written.
FitResult fit_from_json(const ordered_json& j);

ordered_json to_json(const BootstrapReport& r);
ordered_json to_json(const CvGldReport& r);

/// Write via a temporary file in the same directory, then rename.
/// "-" writes to stdout.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace nsgev::cli
