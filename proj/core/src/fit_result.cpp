#include "nsgev/fit_result.hpp"

#include <cctype>
#include <string>

#include "nsgev/error.hpp"

namespace nsgev {

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::lme_sta_gum: return "LME-STA-GUM";
    case Method::lme_sta_gev: return "LME-STA-GEV";
    case Method::mle: return "MLE";
    case Method::wls: return "WLS";
    case Method::gn16: return "GN16";
    case Method::prop: return "PROP";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "LME-STA-GUM" || s == "GUM" || s == "GUMBEL" || s == "GUM.LME.STA") return Method::lme_sta_gum;
  if (s == "LME-STA-GEV" || s == "LME" || s == "GEV.LME.STA" || s == "STA") return Method::lme_sta_gev;
  if (s == "MLE") return Method::mle;
  if (s == "WLS") return Method::wls;
  if (s == "GN16") return Method::gn16;
  if (s == "PROP") return Method::prop;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

}  // namespace nsgev
