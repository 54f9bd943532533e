#include "nsgev/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "nsgev/error.hpp"

namespace nsgev::cli {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

namespace {

double number_from(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

ordered_json numbers(const std::vector<double>& v) {
  auto a = ordered_json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

std::vector<double> numbers_from(const ordered_json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number_from(x));
  return v;
}

}  // namespace

ordered_json to_json(const ModelSpec& spec) {
  return {{"family", spec.family_name()},
          {"location_terms", spec.location_terms},
          {"logscale_terms", spec.logscale_terms}};
}

ModelSpec spec_from_json(const ordered_json& j) {
  const auto fam = j.at("family").get<std::string>();
  auto loc = j.at("location_terms").get<std::vector<std::string>>();
  auto sc = j.at("logscale_terms").get<std::vector<std::string>>();
  ModelSpec s = ModelSpec::covariate(loc, sc);
  if (s.family_name() != fam && !(fam == "stationary" && loc.empty() && sc.empty()))
    throw ParseError("model family '" + fam + "' does not match its terms", 0);
  return s;
}

ordered_json to_json(const NsGevParams& p) {
  return {{"mu_coef", numbers(p.mu_coef)},
          {"logsigma_coef", numbers(p.logsigma_coef)},
          {"xi", number(p.xi)},
          {"loc_scale_coupling", number(p.loc_scale_coupling)}};
}

NsGevParams params_from_json(const ordered_json& j) {
  NsGevParams p;
  p.mu_coef = numbers_from(j.at("mu_coef"));
  p.logsigma_coef = numbers_from(j.at("logsigma_coef"));
  p.xi = number_from(j.at("xi"));
  if (j.contains("loc_scale_coupling")) p.loc_scale_coupling = number_from(j.at("loc_scale_coupling"));
  return p;
}

ordered_json to_json(const FitDiagnostics& d) {
  return {{"status", d.status},
          {"converged", d.converged},
          {"chi", number(d.chi)},
          {"fallback", d.fallback},
          {"n", d.n},
          {"candidate_roots", d.candidate_roots},
          {"zero_scale_slope", d.zero_scale_slope},
          {"support_violations", d.support_violations},
          {"iterations", d.iterations},
          {"residual_norm", number(d.residual_norm)},
          {"notes", d.notes}};
}

namespace {

FitDiagnostics diagnostics_from_json(const ordered_json& j) {
  FitDiagnostics d;
  d.status = j.at("status").get<std::string>();
  d.chi = number_from(j.at("chi"));
  d.fallback = j.at("fallback").get<bool>();
  d.n = j.at("n").get<std::size_t>();
  d.converged = j.value("converged", true);
  d.candidate_roots = j.value("candidate_roots", std::size_t{0});
  d.zero_scale_slope = j.value("zero_scale_slope", false);
  d.support_violations = j.value("support_violations", std::size_t{0});
  d.iterations = j.value("iterations", 0);
  if (j.contains("residual_norm")) d.residual_norm = number_from(j.at("residual_norm"));
  if (j.contains("notes")) d.notes = j.at("notes").get<std::vector<std::string>>();
  return d;
}

}  // namespace

ordered_json to_json(const AnnualSeries& s) {
  ordered_json cov = ordered_json::object();
  for (const auto& name : s.covariate_names()) cov[name] = numbers(s.covariate(name));
  return {{"name", s.name}, {"t0", s.t0()}, {"years", s.years()}, {"values", numbers(s.values())}, {"covariates", cov}};
}

AnnualSeries series_from_json(const ordered_json& j) {
  AnnualSeries s(j.at("years").get<std::vector<int>>(), numbers_from(j.at("values")), j.at("t0").get<int>());
  for (const auto& [name, vals] : j.at("covariates").items()) s.add_covariate(name, numbers_from(vals));
  s.name = j.value("name", std::string{});
  return s;
}

ordered_json to_json(const FitResult& fit) {
  ordered_json j;
  j["method"] = to_string(fit.method);
  j["model"] = to_json(fit.spec);
  j["params"] = to_json(fit.params);
  if (fit.covariate_variant) j["algorithm"] = "covariate";
  if (!fit.summary_mu_coef.empty()) j["summary_mu_coef"] = numbers(fit.summary_mu_coef);
  j["diagnostics"] = to_json(fit.diagnostics);
  j["std_residuals"] = numbers(fit.std_residuals);
  return j;
}

FitResult fit_from_json(const ordered_json& j) {
  FitResult r;
  r.method = parse_method(j.at("method").get<std::string>());
  r.spec = spec_from_json(j.at("model"));
  r.params = params_from_json(j.at("params"));
  r.covariate_variant = j.value("algorithm", std::string{}) == "covariate";
  if (j.contains("summary_mu_coef")) r.summary_mu_coef = numbers_from(j.at("summary_mu_coef"));
  r.diagnostics = diagnostics_from_json(j.at("diagnostics"));
  if (j.contains("std_residuals")) r.std_residuals = numbers_from(j.at("std_residuals"));
  return r;
}

ordered_json to_json(const BootstrapReport& r) {
  ordered_json params = ordered_json::array();
  for (std::size_t k = 0; k < r.names.size(); ++k) {
    params.push_back({{"name", r.names[k]},
                      {"estimate", number(r.estimate[k])},
                      {"se", number(r.se[k])},
                      {"mean", number(r.mean[k])},
                      {"q025", number(r.q025[k])},
                      {"q975", number(r.q975[k])}});
  }
  return {{"method", to_string(r.method)}, {"model", to_json(r.spec)}, {"B", r.B},
          {"seed", r.seed}, {"failure_count", r.failure_count}, {"flagged", r.flagged},
          {"parameters", params}};
}

ordered_json to_json(const CvGldReport& r) {
  ordered_json models = ordered_json::array();
  for (const auto& m : r.models) {
    models.push_back({{"model", to_json(m.spec)},
                      {"spec", m.spec.to_string()},
                      {"cv_gld", number(m.cv_gld)},
                      {"evaluated_folds", m.evaluated_folds},
                      {"skipped_folds", m.skipped_folds},
                      {"flagged", m.flagged}});
  }
  ordered_json v = ordered_json::array();
  for (int a = 0; a < 4; ++a) {
    ordered_json row = ordered_json::array();
    for (int b = 0; b < 4; ++b) row.push_back(number(r.covariance.v(a, b)));
    v.push_back(row);
  }
  ordered_json cov = {{"v", v}, {"n", r.covariance.n}, {"source", "bootstrap"}};
  if (r.covariance.warning) cov["warning"] = *r.covariance.warning;
  return {{"method", to_string(r.method)}, {"repeats", r.repeats}, {"folds", r.folds},
          {"seed", r.seed}, {"models", models}, {"best", r.best}, {"covariance", cov}};
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace nsgev::cli
