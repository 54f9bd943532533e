#include "nsgev/model.hpp"

#include <cmath>

#include "nsgev/error.hpp"

namespace nsgev {
namespace {

bool is_time_term(std::string_view term) { return term == "t" || term == "t2"; }

std::string canonical_term(std::string_view term) {
  if (term == "t^2" || term == "t**2") return "t2";
  return std::string(term);
}

double time_term_value(std::string_view term, double t) { return term == "t" ? t : t * t; }

std::vector<std::string> split_terms(std::string_view s) {
  std::vector<std::string> out;
  if (s.find_first_not_of(' ') == std::string_view::npos) return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto pos = s.find('+', start);
    if (pos == std::string_view::npos) pos = s.size();
    auto term = s.substr(start, pos - start);
    while (!term.empty() && term.front() == ' ') term.remove_prefix(1);
    while (!term.empty() && term.back() == ' ') term.remove_suffix(1);
    if (term.empty()) throw DomainError("model spec: empty term");
    if (term != "1") out.push_back(canonical_term(term));
    start = pos + 1;
  }
  return out;
}

std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? "+" : "") + terms[i];
  return s;
}

}  // namespace

ModelSpec ModelSpec::gev10() { return {Family::gev10, {"t"}, {}}; }
ModelSpec ModelSpec::gev11() { return {Family::gev11, {"t"}, {"t"}}; }
ModelSpec ModelSpec::gev20() { return {Family::gev20, {"t", "t2"}, {}}; }
ModelSpec ModelSpec::stationary() { return {Family::covariate, {}, {}}; }
ModelSpec ModelSpec::covariate(std::vector<std::string> location, std::vector<std::string> logscale) {
  for (auto& t : location) t = canonical_term(t);
  for (auto& t : logscale) t = canonical_term(t);
  ModelSpec s{Family::covariate, std::move(location), std::move(logscale)};
  // Time-trend layouts are reported under their family names.
  if (s == ModelSpec{Family::covariate, {"t"}, {}}) return gev10();
  if (s == ModelSpec{Family::covariate, {"t"}, {"t"}}) return gev11();
  if (s == ModelSpec{Family::covariate, {"t", "t2"}, {}}) return gev20();
  return s;
}

ModelSpec ModelSpec::parse(std::string_view text) {
  if (text == "gev10") return gev10();
  if (text == "gev11") return gev11();
  if (text == "gev20") return gev20();
  if (text == "stationary" || text == "gev00" || text.empty()) return stationary();
  std::vector<std::string> loc, logscale;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(';', start);
    if (pos == std::string_view::npos) pos = text.size();
    const auto part = text.substr(start, pos - start);
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw DomainError("model spec: expected key=terms, got '" + std::string(part) + "'");
    const auto key = part.substr(0, eq);
    const auto terms = split_terms(part.substr(eq + 1));
    if (key == "loc" || key == "location") loc = terms;
    else if (key == "logscale" || key == "scale") logscale = terms;
    else throw DomainError("model spec: unknown key '" + std::string(key) + "'");
    start = pos + 1;
  }
  return covariate(std::move(loc), std::move(logscale));
}

std::string ModelSpec::family_name() const {
  switch (family) {
    case Family::gev10: return "gev10";
    case Family::gev11: return "gev11";
    case Family::gev20: return "gev20";
    case Family::covariate: return location_terms.empty() && logscale_terms.empty() ? "stationary" : "covariate";
  }
  return "covariate";
}

std::string ModelSpec::to_string() const {
  if (family != Family::covariate) return family_name();
  if (location_terms.empty() && logscale_terms.empty()) return "stationary";
  if (logscale_terms.empty()) return "loc=" + join_terms(location_terms);
  if (location_terms.empty()) return "logscale=" + join_terms(logscale_terms);
  return "loc=" + join_terms(location_terms) + ";logscale=" + join_terms(logscale_terms);
}

bool ModelSpec::time_only() const {
  for (const auto& t : location_terms)
    if (!is_time_term(t)) return false;
  for (const auto& t : logscale_terms)
    if (!is_time_term(t)) return false;
  return true;
}

CovariateRow time_row(const ModelSpec& spec, double t) {
  if (!spec.time_only()) throw DomainError("model '" + spec.to_string() + "' depends on non-time covariates");
  CovariateRow r;
  for (const auto& term : spec.location_terms) r.loc.push_back(time_term_value(term, t));
  for (const auto& term : spec.logscale_terms) r.logscale.push_back(time_term_value(term, t));
  return r;
}

GevParams evaluate(const NsGevParams& p, const CovariateRow& row) {
  if (p.mu_coef.size() != row.loc.size() + 1 || p.logsigma_coef.size() != row.logscale.size() + 1)
    throw DomainError("coefficient count does not match the model terms");
  double log_sigma = p.logsigma_coef[0];
  for (std::size_t j = 0; j < row.logscale.size(); ++j) log_sigma += p.logsigma_coef[j + 1] * row.logscale[j];
  const double sigma = std::exp(log_sigma);
  double mu = p.mu_coef[0];
  for (std::size_t j = 0; j < row.loc.size(); ++j) mu += p.mu_coef[j + 1] * row.loc[j];
  mu += p.loc_scale_coupling * sigma;
  return {mu, sigma, p.xi};
}

ModelDesign::ModelDesign(const AnnualSeries& series, const ModelSpec& spec) : spec_(spec) {
  const std::size_t n = series.size();
  auto column = [&](const std::string& term) {
    std::vector<double> v(n);
    if (is_time_term(term)) {
      for (std::size_t i = 0; i < n; ++i) v[i] = time_term_value(term, series.t(i));
    } else {
      v = series.covariate(term);
    }
    return v;
  };
  std::vector<std::pair<std::string, std::vector<double>>> loc_cols, scale_cols;
  for (const auto& term : spec.location_terms) loc_cols.emplace_back(term, column(term));
  for (const auto& term : spec.logscale_terms) scale_cols.emplace_back(term, column(term));
  loc_ = DesignMatrix::with_intercept(n, loc_cols);
  logscale_ = DesignMatrix::with_intercept(n, scale_cols);
  rows_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [name, v] : loc_cols) rows_[i].loc.push_back(v[i]);
    for (const auto& [name, v] : scale_cols) rows_[i].logscale.push_back(v[i]);
  }
}

std::vector<GevParams> evaluate_all(const NsGevParams& p, const ModelDesign& design) {
  std::vector<GevParams> out;
  out.reserve(design.size());
  for (const auto& r : design.rows()) out.push_back(evaluate(p, r));
  return out;
}

}  // namespace nsgev
