#include "nsgev/series.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <string>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nsgev/error.hpp"

namespace nsgev {

AnnualSeries::AnnualSeries(std::vector<int> years, std::vector<double> values, std::optional<int> t0)
    : years_(std::move(years)), values_(std::move(values)) {
  if (years_.size() != values_.size()) throw DomainError("AnnualSeries: years and values differ in length");
  if (years_.empty()) throw InsufficientDataError("AnnualSeries: at least one observation is required");
  t0_ = t0.value_or(years_.front());
  validate();
}

AnnualSeries AnnualSeries::from_values(std::span<const double> values) {
  std::vector<int> years(values.size());
  for (std::size_t i = 0; i < years.size(); ++i) years[i] = static_cast<int>(i + 1);
  return AnnualSeries(std::move(years), {values.begin(), values.end()}, 1);
}

void AnnualSeries::validate() const {
  for (std::size_t i = 1; i < years_.size(); ++i)
    if (years_[i] <= years_[i - 1]) throw DomainError("AnnualSeries: years must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("AnnualSeries: values must be finite");
  if (years_.front() < t0_) throw DomainError("AnnualSeries: first year precedes t0");
}

std::vector<double> AnnualSeries::time_index() const {
  std::vector<double> t(size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = this->t(i);
  return t;
}

void AnnualSeries::add_covariate(std::string name, std::vector<double> values) {
  if (values.size() != size()) throw DomainError("covariate '" + name + "' has the wrong length");
  if (has_covariate(name)) throw DomainError("duplicate covariate '" + name + "'");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("covariate '" + name + "' has a non-finite value");
  cov_names_.push_back(std::move(name));
  cov_values_.push_back(std::move(values));
}

bool AnnualSeries::has_covariate(std::string_view name) const noexcept {
  return std::find(cov_names_.begin(), cov_names_.end(), name) != cov_names_.end();
}

const std::vector<double>& AnnualSeries::covariate(std::string_view name) const {
  const auto it = std::find(cov_names_.begin(), cov_names_.end(), name);
  if (it == cov_names_.end()) throw DomainError("unknown covariate '" + std::string(name) + "'");
  return cov_values_[static_cast<std::size_t>(it - cov_names_.begin())];
}

AnnualSeries AnnualSeries::with_values(std::vector<double> values) const {
  if (values.size() != size()) throw DomainError("with_values: length mismatch");
  AnnualSeries s = *this;
  s.values_ = std::move(values);
  s.validate();
  return s;
}

AnnualSeries AnnualSeries::subset(std::span<const std::size_t> rows) const {
  std::vector<std::size_t> r(rows.begin(), rows.end());
  std::sort(r.begin(), r.end());
  std::vector<int> y;
  std::vector<double> v;
  for (auto i : r) {
    y.push_back(years_.at(i));
    v.push_back(values_.at(i));
  }
  AnnualSeries s(std::move(y), std::move(v), t0_);
  s.name = name;
  s.units = units;
  for (std::size_t c = 0; c < cov_names_.size(); ++c) {
    std::vector<double> cv;
    for (auto i : r) cv.push_back(cov_values_[c][i]);
    s.add_covariate(cov_names_[c], std::move(cv));
  }
  return s;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(std::string_view s, std::size_t line, std::string_view what) {
  // strtod accepts forms from_chars on older libstdc++ rejects for doubles; keep locale-free "C" parsing.
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v))
    throw ParseError("line " + std::to_string(line) + ": non-numeric " + std::string(what) + " '" + buf + "'", line);
  return v;
}

int parse_year(std::string_view s, std::size_t line) {
  int y = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), y);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ParseError("line " + std::to_string(line) + ": invalid year '" + std::string(s) + "'", line);
  return y;
}

}  // namespace

AnnualSeries parse_series_csv(std::string_view text, CsvIngestReport* report) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    lines.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw ParseError("missing header line", 1);

  const auto header = split(lines[header_line]);
  std::string lower_first(header[0]), lower_second(header.size() > 1 ? header[1] : "");
  for (auto& c : lower_first) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (auto& c : lower_second) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (header.size() < 2 || lower_first != "year" || lower_second != "value")
    throw ParseError("header must start with 'year,value'", header_line + 1);
  for (std::size_t j = 2; j < header.size(); ++j)
    if (header[j].empty()) throw ParseError("empty covariate column name", header_line + 1);

  std::vector<int> years;
  std::vector<double> values;
  std::vector<std::vector<double>> covs(header.size() - 2);
  std::size_t skipped = 0;
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    const std::size_t lineno = li + 1;
    if (trim(lines[li]).empty()) continue;
    const auto f = split(lines[li]);
    if (f.size() != header.size())
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(f.size()),
                       lineno);
    const int year = parse_year(f[0], lineno);
    if (f[1].empty()) {
      ++skipped;
      continue;
    }
    if (!years.empty() && year == years.back())
      throw ParseError("line " + std::to_string(lineno) + ": duplicate year " + std::to_string(year), lineno);
    if (std::find(years.begin(), years.end(), year) != years.end())
      throw ParseError("line " + std::to_string(lineno) + ": duplicate year " + std::to_string(year), lineno);
    if (!years.empty() && year < years.back())
      throw ParseError("line " + std::to_string(lineno) + ": years must be increasing", lineno);
    years.push_back(year);
    values.push_back(parse_real(f[1], lineno, "value"));
    for (std::size_t j = 2; j < f.size(); ++j) covs[j - 2].push_back(parse_real(f[j], lineno, header[j]));
  }
  if (years.empty()) throw ParseError("no observations", header_line + 1);
  AnnualSeries s(std::move(years), std::move(values));
  for (std::size_t j = 2; j < header.size(); ++j) s.add_covariate(std::string(header[j]), std::move(covs[j - 2]));
  if (report) report->skipped_empty = skipped;
  return s;
}

AnnualSeries ingest_csv(const std::filesystem::path& path, CsvIngestReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::stringstream ss;
  ss << in.rdbuf();
  AnnualSeries s = parse_series_csv(ss.str(), report);
  s.name = path.stem().string();
  return s;
}

}  // namespace nsgev
