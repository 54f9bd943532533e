#include "nsgev/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nsgev/error.hpp"
#include "nsgev/fitters.hpp"
#include "nsgev/inference.hpp"
#include "nsgev/json_io.hpp"
#include "nsgev/returns.hpp"
#include "nsgev/series.hpp"
#include "nsgev/simulation.hpp"

namespace nsgev::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

struct Input {
  std::string path;
  AnnualSeries series;
  std::string hash;
  std::size_t skipped_empty = 0;
};

Input load(const std::string& path) {
  Input in;
  in.path = path;
  const std::string text = read_file(path);
  in.hash = hex64(fnv1a64(text));
  CsvIngestReport rep;
  in.series = parse_series_csv(text, &rep);
  in.series.name = std::filesystem::path(path).stem().string();
  in.skipped_empty = rep.skipped_empty;
  return in;
}

ordered_json input_json(const Input& in) {
  return {{"file", std::filesystem::path(in.path).filename().string()},
          {"fnv1a64", in.hash},
          {"n", in.series.size()},
          {"skipped_empty", in.skipped_empty}};
}

ordered_json envelope(const std::string& command, std::uint64_t seed, const ordered_json& config) {
  return {{"nsgev_version", kVersion}, {"command", command}, {"seed", seed}, {"config", config}};
}

std::string csv_header(std::uint64_t seed, const std::string& hash) {
  return "# nsgev " + std::string(kVersion) + " seed=" + std::to_string(seed) + " input_fnv1a64=" + hash + "\n";
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

template <class T>
ordered_json list_json(const std::vector<T>& v) {
  return ordered_json(v);
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------- fit
struct FitConfig {
  std::string data;
  std::string method = "prop";
  std::string model = "gev11";
  std::string algorithm = "auto";
  std::string out = "-";
  std::string qq_out;
  std::uint64_t seed = 0;
  std::string config;

  [[nodiscard]] ordered_json json() const {
    return {{"data", std::filesystem::path(data).filename().string()}, {"method", method}, {"model", model},
            {"algorithm", algorithm}, {"seed", seed}};
  }
};

bool covariate_algorithm(const std::string& a) {
  if (a == "auto" || a == "time") return false;
  if (a == "covariate") return true;
  throw DomainError("--algorithm must be auto, time or covariate");
}

FitResult do_fit(const Input& in, const std::string& method, const std::string& model, const std::string& algorithm) {
  const Method m = parse_method(method);
  const ModelSpec spec = ModelSpec::parse(model);
  return fit(m, in.series, spec, covariate_algorithm(algorithm));
}

std::string qq_csv(const FitResult& r, std::uint64_t seed, const std::string& hash) {
  std::string s = csv_header(seed, hash) + "gumbel_quantile,std_residual\n";
  for (const auto& p : qq_plot_data(r)) s += fmt(p.x) + "," + fmt(p.y) + "\n";
  return s;
}

int cmd_fit(const FitConfig& c) {
  const Input in = load(c.data);
  ordered_json j = envelope("fit", c.seed, c.json());
  j["input"] = input_json(in);
  FitResult r;
  try {
    r = do_fit(in, c.method, c.model, c.algorithm);
  } catch (const NumericalError& e) {
    j["diagnostics"] = {{"status", "failed"}, {"error", e.what()}};
    write_atomic(c.out, dump(j));
    throw;
  }
  const ordered_json body = to_json(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  j["data"] = to_json(in.series);
  write_atomic(c.out, dump(j));
  if (!c.qq_out.empty()) write_atomic(c.qq_out, qq_csv(r, c.seed, in.hash));
  return kOk;
}

// ---------------------------------------------------------------- rl
struct RlConfig {
  std::string data;
  std::string fit_json;
  std::string method = "prop";
  std::string model = "gev11";
  std::string algorithm = "auto";
  std::vector<double> periods{2, 10, 20, 50, 100, 200};
  bool conventional = false;
  bool parey = false;
  std::string curve_out;
  std::string parey_out;
  std::string plot_out;
  std::uint64_t seed = 0;
  std::string config;

  [[nodiscard]] ordered_json json() const {
    ordered_json j = {{"method", method}, {"model", model}, {"algorithm", algorithm}, {"T", periods},
                      {"conventional", conventional}, {"parey", parey}, {"seed", seed}};
    if (!fit_json.empty()) j["fit"] = std::filesystem::path(fit_json).filename().string();
    if (!data.empty()) j["data"] = std::filesystem::path(data).filename().string();
    return j;
  }
};

int cmd_rl(const RlConfig& c) {
  FitResult r;
  AnnualSeries series;
  std::string hash;
  if (!c.fit_json.empty()) {
    const auto j = ordered_json::parse(read_file(c.fit_json));
    r = fit_from_json(j);
    series = series_from_json(j.at("data"));
    hash = j.at("input").at("fnv1a64").get<std::string>();
  } else {
    if (c.data.empty()) throw DomainError("rl needs --data or --fit");
    const Input in = load(c.data);
    r = do_fit(in, c.method, c.model, c.algorithm);
    series = in.series;
    hash = in.hash;
  }
  const bool want_conv = c.conventional || !c.parey;
  const bool want_parey = c.parey || !c.conventional;
  for (double T : c.periods)
    if (!(T > 1.0)) throw DomainError("return periods must exceed 1");

  if (want_conv) {
    if (!r.spec.time_only())
      throw DomainError("conventional levels over t need a time-only model; use the library for covariate paths");
    std::string s = csv_header(c.seed, hash) + "T,t,year,r\n";
    const auto t = series.time_index();
    for (double T : c.periods) {
      const auto curve = conventional_rl(r.params, r.spec, T, t);
      for (std::size_t i = 0; i < t.size(); ++i)
        s += fmt(T) + "," + fmt(t[i]) + "," + std::to_string(series.years()[i]) + "," + fmt(curve.values[i]) + "\n";
    }
    write_atomic(c.curve_out.empty() ? "-" : c.curve_out, s);
  }
  if (want_parey) {
    if (!r.spec.time_only()) throw DomainError("Parey levels need a time-only model");
    std::vector<int> ip;
    for (double T : c.periods) {
      if (T != std::floor(T)) throw DomainError("Parey return periods must be whole years");
      ip.push_back(static_cast<int>(T));
    }
    std::string s = csv_header(c.seed, hash) + "T,r\n";
    for (int T : ip) s += std::to_string(T) + "," + fmt(parey_rl(r.params, r.spec, T)) + "\n";
    write_atomic(c.parey_out.empty() ? "-" : c.parey_out, s);
    if (!c.plot_out.empty()) {
      const auto plot = modified_rl_plot_data(r, series, ip);
      std::string p = csv_header(c.seed, hash) + "kind,T,r\n";
      for (const auto& q : plot.curve) p += "curve," + fmt(q.x) + "," + fmt(q.y) + "\n";
      for (const auto& q : plot.observations) p += "observation," + fmt(q.x) + "," + fmt(q.y) + "\n";
      write_atomic(c.plot_out, p);
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- select
struct SelectConfig {
  std::string data;
  std::string method = "prop";
  std::vector<std::string> models;
  std::string algorithm = "auto";
  std::size_t repeats = 20;
  std::size_t folds = 5;
  std::size_t covariance_reps = kDefaultCovarianceReps;
  std::string out = "-";
  std::uint64_t seed = 0;
  std::string config;

  [[nodiscard]] ordered_json json() const {
    return {{"data", std::filesystem::path(data).filename().string()}, {"method", method}, {"models", models},
            {"algorithm", algorithm}, {"repeats", repeats}, {"folds", folds},
            {"covariance_reps", covariance_reps}, {"seed", seed}};
  }
};

int cmd_select(const SelectConfig& c) {
  const Input in = load(c.data);
  std::vector<ModelSpec> specs;
  for (const auto& m : c.models) specs.push_back(ModelSpec::parse(m));
  CvGldOptions opt;
  opt.repeats = c.repeats;
  opt.folds = c.folds;
  opt.covariance_reps = c.covariance_reps;
  opt.covariate_variant = covariate_algorithm(c.algorithm);
  const auto rep = cv_gld(in.series, specs, parse_method(c.method), c.seed, opt);
  ordered_json j = envelope("select", c.seed, c.json());
  j["input"] = input_json(in);
  j["report"] = to_json(rep);
  write_atomic(c.out, dump(j));
  return kOk;
}

// ---------------------------------------------------------------- bootstrap
struct BootstrapConfig {
  std::string data;
  std::string method = "prop";
  std::string model = "gev11";
  std::string algorithm = "auto";
  std::size_t B = 300;
  std::string out = "-";
  std::uint64_t seed = 0;
  std::string config;

  [[nodiscard]] ordered_json json() const {
    return {{"data", std::filesystem::path(data).filename().string()}, {"method", method}, {"model", model},
            {"algorithm", algorithm}, {"B", B}, {"seed", seed}};
  }
};

int cmd_bootstrap(const BootstrapConfig& c) {
  const Input in = load(c.data);
  const FitResult r = do_fit(in, c.method, c.model, c.algorithm);
  const auto rep = bootstrap_se(r, in.series, c.B, c.seed);
  ordered_json j = envelope("bootstrap", c.seed, c.json());
  j["input"] = input_json(in);
  j["fit"] = to_json(r);
  j["report"] = to_json(rep);
  write_atomic(c.out, dump(j));
  return kOk;
}

// ---------------------------------------------------------------- simulate
struct SimulateConfig {
  std::string design = "gev11";
  std::vector<std::size_t> n{50};
  std::size_t replicates = 1000;
  std::vector<double> xi{-0.35, -0.25, -0.15, -0.05, 0.0, 0.05, 0.15, 0.25, 0.35};
  std::vector<std::string> methods{"LME-STA-GEV", "MLE", "WLS", "GN16", "PROP"};
  std::string target = "both";
  std::string out = "-";
  std::string replicates_out;
  std::uint64_t seed = 0;
  std::string config;

  [[nodiscard]] ordered_json json() const {
    return {{"design", design}, {"n", n}, {"N", replicates}, {"xi", xi}, {"methods", methods},
            {"target", target}, {"seed", seed}};
  }
};

int cmd_simulate(const SimulateConfig& c) {
  SimDesign d;
  if (c.design == "gev11") d = SimDesign::gev11();
  else if (c.design == "gev10") d = SimDesign::gev10();
  else if (c.design == "gev20") d = SimDesign::gev20();
  else throw DomainError("--design must be gev10, gev11 or gev20");
  d.n_values = c.n;
  d.replicates = c.replicates;
  d.xi_grid = c.xi;
  d.keep_replicates = !c.replicates_out.empty();
  std::vector<Method> methods;
  for (const auto& m : c.methods) methods.push_back(parse_method(m));
  if (c.target != "both" && c.target != "conventional" && c.target != "parey")
    throw DomainError("--target must be conventional, parey or both");

  SimReport rep = run_simulation(d, methods, c.seed);
  if (c.target != "both") {
    const SimTarget keep = c.target == "parey" ? SimTarget::parey : SimTarget::conventional;
    std::erase_if(rep.cells, [keep](const SimCell& cell) { return cell.target != keep; });
  }
  const std::string hash = hex64(fnv1a64(c.json().dump()));
  write_atomic(c.out, csv_header(c.seed, hash) + sim_report_csv(rep));
  if (!c.replicates_out.empty()) write_atomic(c.replicates_out, csv_header(c.seed, hash) + sim_replicates_csv(rep));
  return kOk;
}

// ---------------------------------------------------------------- wiring
void add_common(CLI::App* sub, std::uint64_t& seed, std::string& config) {
  sub->add_option("--seed", seed, "Random seed")->capture_default_str();
  sub->add_option("--config", config, "key=value file; command-line flags take precedence");
}

void add_fit_selection(CLI::App* sub, std::string& method, std::string& algorithm) {
  sub->add_option("--method", method, "gum | lme | mle | wls | gn16 | prop")->capture_default_str();
  sub->add_option("--algorithm", algorithm, "PROP variant: auto | time | covariate")->capture_default_str();
}

std::string option_key(const std::string& arg) {
  if (arg.rfind("--", 0) != 0) return {};
  const auto eq = arg.find('=');
  return arg.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> config_arguments(const std::string& text, const std::vector<std::string>& cli_args) {
  std::vector<std::string> given;
  for (const auto& a : cli_args)
    if (auto k = option_key(a); !k.empty()) given.push_back(k);
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config: expected key=value", lineno);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty() || key == "config") throw ParseError("config: invalid key '" + key + "'", lineno);
    if (std::find(given.begin(), given.end(), key) != given.end()) continue;
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

int run(const std::vector<std::string>& raw) {
  CLI::App app{"Nonstationary GEV estimation: L-moment, robust and likelihood fits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  FitConfig fc;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model and write FitResult JSON");
  fit_cmd->add_option("--data", fc.data, "Input CSV (year,value[,covariates])")->required();
  add_fit_selection(fit_cmd, fc.method, fc.algorithm);
  fit_cmd->add_option("--model", fc.model, "gev10 | gev11 | gev20 | stationary | loc=t+soi;logscale=t")
      ->capture_default_str();
  fit_cmd->add_option("--out", fc.out, "FitResult JSON path ('-' = stdout)")->capture_default_str();
  fit_cmd->add_option("--qq-out", fc.qq_out, "Q-Q plot CSV path");
  add_common(fit_cmd, fc.seed, fc.config);

  RlConfig rc;
  auto* rl_cmd = app.add_subcommand("rl", "Conventional and Parey return levels");
  rl_cmd->add_option("--data", rc.data, "Input CSV (fit on the fly)");
  rl_cmd->add_option("--fit", rc.fit_json, "FitResult JSON written by 'fit'");
  add_fit_selection(rl_cmd, rc.method, rc.algorithm);
  rl_cmd->add_option("--model", rc.model)->capture_default_str();
  rl_cmd->add_option("--T", rc.periods, "Return periods")->delimiter(',')->capture_default_str();
  rl_cmd->add_flag("--conventional", rc.conventional, "Per-t levels (default: both kinds)");
  rl_cmd->add_flag("--parey", rc.parey, "Parey levels (default: both kinds)");
  rl_cmd->add_option("--curve-out", rc.curve_out, "Conventional curve CSV (T,t,year,r)");
  rl_cmd->add_option("--parey-out", rc.parey_out, "Parey table CSV (T,r)");
  rl_cmd->add_option("--plot-out", rc.plot_out, "Modified return-level plot CSV");
  add_common(rl_cmd, rc.seed, rc.config);

  SelectConfig sc;
  auto* sel_cmd = app.add_subcommand("select", "Cross-validated generalized L-moment distance");
  sel_cmd->add_option("--data", sc.data)->required();
  add_fit_selection(sel_cmd, sc.method, sc.algorithm);
  sel_cmd->add_option("--model", sc.models, "Candidate model (repeatable)")->required();
  sel_cmd->add_option("--repeats", sc.repeats)->capture_default_str();
  sel_cmd->add_option("--folds", sc.folds)->capture_default_str();
  sel_cmd->add_option("--covariance-reps", sc.covariance_reps)->capture_default_str();
  sel_cmd->add_option("--out", sc.out)->capture_default_str();
  add_common(sel_cmd, sc.seed, sc.config);

  BootstrapConfig bc;
  auto* boot_cmd = app.add_subcommand("bootstrap", "Parametric-bootstrap standard errors");
  boot_cmd->add_option("--data", bc.data)->required();
  add_fit_selection(boot_cmd, bc.method, bc.algorithm);
  boot_cmd->add_option("--model", bc.model)->capture_default_str();
  boot_cmd->add_option("--B", bc.B, "Bootstrap replicates")->capture_default_str();
  boot_cmd->add_option("--out", bc.out)->capture_default_str();
  add_common(boot_cmd, bc.seed, bc.config);

  SimulateConfig mc;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo comparison of the estimators");
  sim_cmd->add_option("--design", mc.design, "gev10 | gev11 | gev20")->capture_default_str();
  sim_cmd->add_option("--n", mc.n, "Sample sizes")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--N", mc.replicates, "Replicates per cell")->capture_default_str();
  sim_cmd->add_option("--xi", mc.xi, "Shape grid")->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--methods", mc.methods)->delimiter(',')->capture_default_str();
  sim_cmd->add_option("--target", mc.target, "conventional | parey | both")->capture_default_str();
  sim_cmd->add_option("--out", mc.out)->capture_default_str();
  sim_cmd->add_option("--replicates-out", mc.replicates_out, "Per-replicate estimates CSV");
  add_common(sim_cmd, mc.seed, mc.config);

  std::vector<std::string> args(raw.begin() + (raw.empty() ? 0 : 1), raw.end());
  try {
    // Config file: find it, validate its keys against the subcommand's options.
    for (std::size_t i = 0; i < args.size(); ++i) {
      std::string path;
      if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
      if (path.empty()) continue;
      if (args.empty()) break;
      CLI::App* sub = app.get_subcommand_no_throw(args[0]);
      if (sub == nullptr) break;
      auto extra = config_arguments(read_file(path), args);
      for (const auto& e : extra) {
        const auto key = option_key(e);
        if (sub->get_option_no_throw("--" + key) == nullptr) {
          std::cerr << "config: unknown key '" << key << "' for '" << args[0] << "'\n";
          return kUsage;
        }
      }
      args.insert(args.begin() + 1, extra.begin(), extra.end());
      break;
    }
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*fit_cmd) return cmd_fit(fc);
    if (*rl_cmd) return cmd_rl(rc);
    if (*sel_cmd) return cmd_select(sc);
    if (*boot_cmd) return cmd_bootstrap(bc);
    if (*sim_cmd) return cmd_simulate(mc);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InsufficientDataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DegenerateSampleError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const SingularDesignError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const SupportError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "data error: malformed JSON: " << e.what() << '\n';
    return kData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args);
}

}  // namespace nsgev::cli
