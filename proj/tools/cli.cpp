#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "subbs/checks.hpp"
#include "subbs/subbs.hpp"

namespace pricer {
namespace {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- logging

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level_from_env() {
  const char* v = std::getenv("PRICER_LOG");
  if (!v) return LogLevel::warn;
  const std::string_view s(v);
  if (s == "error") return LogLevel::error;
  if (s == "info") return LogLevel::info;
  if (s == "debug") return LogLevel::debug;
  return LogLevel::warn;
}

class Logger {
 public:
  Logger(std::ostream& err, LogLevel level) : err_(err), level_(level) {}
  void log(LogLevel at, std::string_view tag, const std::string& msg) const {
    if (at <= level_) err_ << '[' << tag << "] " << msg << '\n';
  }
  void diagnostics(const std::vector<subbs::Diagnostic>& ds) const {
    for (const auto& d : ds) {
      const bool warning = d.severity == subbs::Severity::warning;
      log(warning ? LogLevel::warn : LogLevel::info, warning ? "warn" : "info",
          d.code + ": " + d.message);
    }
  }

 private:
  std::ostream& err_;
  LogLevel level_;
};

class StageTimer {
 public:
  StageTimer(const Logger& log, std::string name)
      : log_(log), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    log_.log(LogLevel::debug, "debug", name_ + " took " + subbs::fmt(sec) + " s");
  }

 private:
  const Logger& log_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------- output

std::string format_number(double x, int digits) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

// nlohmann's own number output is shortest round-trip; documents use a fixed
// 17 significant digits, so the tree is written here.
void write_json(std::ostream& os, const Json& j, int indent) {
  const std::string pad(indent * 2, ' ');
  const std::string inner((indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(key).dump() << ": ";
        write_json(os, value, indent + 1);
      }
      os << '\n' << pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) os << ",\n";
        first = false;
        os << inner;
        write_json(os, value, indent + 1);
      }
      os << '\n' << pad << ']';
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>(), 17);
      return;
    default:
      os << j.dump();
  }
}

std::string csv_field(const Json& v) {
  switch (v.type()) {
    case Json::value_t::null:
      return "";
    case Json::value_t::number_float:
      return std::isfinite(v.get<double>()) ? format_number(v.get<double>(), 12) : "";
    case Json::value_t::string: {
      const auto s = v.get<std::string>();
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + '"';
    }
    default:
      return v.dump();
  }
}

void write_csv(std::ostream& os, const std::vector<std::string>& columns, const Json& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      os << (i ? "," : "") << csv_field(row.at(columns[i]));
    }
    os << '\n';
  }
}

struct Document {
  std::string command;
  Json config_echo;
  std::string body_key;  // "rows" or "report"
  Json body;
  Json diagnostics = Json::array();
  std::vector<std::string> csv_columns;
  Json csv_rows;  // rows written in CSV mode
};

void emit(const Document& doc, const RunConfig& cfg, std::ostream& out) {
  std::ostringstream text;
  if (cfg.format == "csv") {
    write_csv(text, doc.csv_columns, doc.csv_rows);
  } else {
    Json root;
    root["schema_version"] = schema_version;
    root["command"] = doc.command;
    root["config_echo"] = doc.config_echo;
    root[doc.body_key] = doc.body;
    root["diagnostics"] = doc.diagnostics;
    write_json(text, root, 0);
    text << '\n';
  }
  if (cfg.output.empty()) {
    out << text.str();
    out.flush();
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw subbs::IoError(subbs::codes::io_failure, "cannot open output file " + cfg.output);
  file << text.str();
  file.close();
  if (!file) throw subbs::IoError(subbs::codes::io_failure, "cannot write output file " + cfg.output);
}

Json diagnostics_json(const std::vector<subbs::Diagnostic>& ds) {
  Json arr = Json::array();
  for (const auto& d : ds) {
    arr.push_back({{"severity", d.severity == subbs::Severity::warning ? "warning" : "info"},
                   {"code", d.code},
                   {"message", d.message}});
  }
  return arr;
}

// ---------------------------------------------------------------- setup

struct Setup {
  subbs::PowerVarianceModel model;
  subbs::GammaPayoff payoff;
  std::vector<double> s_points;
  subbs::spectral::SpectralOptions spectral;
  subbs::oracles::FdConfig fd;
  subbs::oracles::McConfig mc;
};

void require_choice(const std::string& value, std::initializer_list<const char*> allowed,
                    const char* flag) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  throw subbs::ParameterError(subbs::codes::invalid_config,
                              std::string("invalid value '") + value + "' for --" + flag);
}

Setup make_setup(const RunConfig& cfg) {
  Setup s{subbs::PowerVarianceModel(cfg.r, cfg.sigma, cfg.k),
          subbs::GammaPayoff(cfg.notional, cfg.decay_rate, cfg.shape),
          cfg.s,
          {},
          {},
          {}};
  if (!std::isfinite(cfg.maturity) || cfg.maturity < 0.0) {
    throw subbs::ParameterError(subbs::codes::negative_tau, "T must be finite and >= 0");
  }
  require_choice(cfg.method, {"spectral", "crank_nicolson", "monte_carlo"}, "method");
  require_choice(cfg.quad_rule, {"graded", "gauss"}, "quad-rule");
  require_choice(cfg.fd_far_field, {"asymptotic", "zero"}, "fd-far-field");
  require_choice(cfg.mc_scheme, {"cir", "asset"}, "mc-scheme");
  require_choice(cfg.format, {"json", "csv"}, "format");
  if (cfg.t.empty()) throw subbs::ParameterError(subbs::codes::invalid_grid, "--t list is empty");
  for (double t : cfg.t) {
    if (!std::isfinite(t)) throw subbs::ParameterError(subbs::codes::domain_error, "t must be finite");
    if (t > cfg.maturity) {
      throw subbs::ParameterError(subbs::codes::t_after_maturity,
                                  "t = " + subbs::fmt(t) + " is after T = " + subbs::fmt(cfg.maturity));
    }
  }
  if (s.s_points.empty()) {
    const double peak = s.payoff.peak();
    s.s_points = {0.5 * peak, peak, 1.5 * peak};
  }
  for (double x : s.s_points) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw subbs::ParameterError(subbs::codes::domain_error, "S values must be > 0");
    }
  }
  s.spectral.n_terms = cfg.terms;
  s.spectral.rule = cfg.quad_rule == "gauss" ? subbs::spectral::RuleKind::gauss
                                             : subbs::spectral::RuleKind::graded;
  s.spectral.gauss_nodes = cfg.quad_nodes;
  if (cfg.terms < 1) {
    throw subbs::ParameterError(subbs::codes::invalid_terms, "--terms must be >= 1");
  }
  s.fd.s_max = cfg.fd_smax > 0.0 ? cfg.fd_smax : 5.0 * s.payoff.peak();
  s.fd.n_space = cfg.fd_nspace;
  s.fd.n_time = cfg.fd_ntime;
  s.fd.far_field = cfg.fd_far_field == "zero" ? subbs::oracles::FarField::zero
                                              : subbs::oracles::FarField::asymptotic;
  s.fd.validate();
  s.mc.n_paths = cfg.mc_paths;
  s.mc.n_steps = cfg.mc_steps;
  s.mc.seed = cfg.mc_seed;
  s.mc.scheme = cfg.mc_scheme == "asset" ? subbs::oracles::McScheme::asset_state
                                         : subbs::oracles::McScheme::cir_state;
  s.mc.n_workers = cfg.mc_workers;
  s.mc.validate();
  return s;
}

Json config_echo(const RunConfig& cfg, const Setup& s) {
  Json j;
  j["k"] = cfg.k;
  j["r"] = cfg.r;
  j["sigma"] = cfg.sigma;
  j["A"] = cfg.notional;
  j["alpha"] = cfg.decay_rate;
  j["p"] = cfg.shape;
  j["T"] = cfg.maturity;
  j["t"] = cfg.t;
  j["s"] = s.s_points;
  j["method"] = cfg.method;
  j["terms"] = cfg.terms;
  j["quad_rule"] = cfg.quad_rule;
  j["quad_nodes"] = cfg.quad_nodes;
  j["fd_smax"] = s.fd.s_max;
  j["fd_nspace"] = cfg.fd_nspace;
  j["fd_ntime"] = cfg.fd_ntime;
  j["fd_far_field"] = cfg.fd_far_field;
  j["mc_paths"] = cfg.mc_paths;
  j["mc_steps"] = cfg.mc_steps;
  j["mc_seed"] = cfg.mc_seed;
  j["mc_scheme"] = cfg.mc_scheme;
  j["n_list"] = cfg.n_list;
  return j;
}

// ---------------------------------------------------------------- commands

Document cmd_price(const RunConfig& cfg, const Setup& s, const Logger& log) {
  Document doc;
  doc.command = "price";
  doc.body_key = "rows";
  doc.body = Json::array();
  doc.csv_columns = {"t", "S", "value", "method", "n_terms", "tail_ratio", "std_error"};
  std::vector<subbs::Diagnostic> diags;
  auto add_row = [&](double t, double spot, double value, const char* method, Json n_terms,
                     Json tail, Json se) {
    doc.body.push_back({{"t", t},
                        {"S", spot},
                        {"value", value},
                        {"method", method},
                        {"n_terms", n_terms},
                        {"tail_ratio", tail},
                        {"std_error", se}});
  };
  if (cfg.method == "spectral") {
    StageTimer timer(log, "spectral projection");
    const auto sol = subbs::spectral::build_solution(s.model, s.payoff, cfg.maturity, s.spectral);
    const auto surf = subbs::spectral::price_surface(sol, cfg.t, s.s_points);
    diags = sol.diagnostics;
    for (std::size_t i = 0; i < cfg.t.size(); ++i) {
      for (std::size_t j = 0; j < s.s_points.size(); ++j) {
        add_row(cfg.t[i], s.s_points[j], surf.at(i, j), "spectral", sol.n_terms(), sol.tail_ratio,
                nullptr);
      }
    }
  } else if (cfg.method == "crank_nicolson") {
    StageTimer timer(log, "crank-nicolson solve");
    auto fd = s.fd;
    fd.snapshot_times = cfg.t;
    const auto surf = subbs::oracles::crank_nicolson_solve(s.model, s.payoff, cfg.maturity, fd);
    diags = surf.diagnostics;
    for (std::size_t i = 0; i < cfg.t.size(); ++i) {
      for (double spot : s.s_points) {
        add_row(cfg.t[i], spot, subbs::oracles::value_at(surf, i, spot), "crank_nicolson",
                nullptr, nullptr, nullptr);
      }
    }
  } else {
    StageTimer timer(log, "monte carlo");
    long long blowups = 0;
    for (double t : cfg.t) {
      for (double spot : s.s_points) {
        const auto res =
            subbs::oracles::monte_carlo_price(s.model, s.payoff, t, spot, cfg.maturity, s.mc);
        blowups += res.blowups;
        add_row(t, spot, res.mean, "monte_carlo", nullptr, nullptr, res.std_error);
      }
    }
    if (blowups > 0) {
      diags.push_back({subbs::Severity::warning, "MC_BLOWUPS",
                       std::to_string(blowups) + " paths became non-finite"});
    }
  }
  doc.csv_rows = doc.body;
  doc.diagnostics = diagnostics_json(diags);
  log.diagnostics(diags);
  return doc;
}

Document cmd_coeffs(const RunConfig& cfg, const Setup& s, const Logger& log) {
  Document doc;
  doc.command = "coeffs";
  doc.body_key = "rows";
  doc.body = Json::array();
  doc.csv_columns = {"n", "raw_coeff", "discounted_coeff", "decay_rate"};
  const auto sol = subbs::spectral::build_solution(s.model, s.payoff, cfg.maturity, s.spectral);
  for (int n = 0; n < sol.n_terms(); ++n) {
    const double rate = subbs::decay_rate(s.model, n);
    doc.body.push_back({{"n", n},
                        {"raw_coeff", sol.raw_coeffs[n]},
                        {"discounted_coeff", sol.raw_coeffs[n] * std::exp(-rate * cfg.maturity)},
                        {"decay_rate", rate}});
  }
  doc.csv_rows = doc.body;
  doc.diagnostics = diagnostics_json(sol.diagnostics);
  log.diagnostics(sol.diagnostics);
  return doc;
}

Document cmd_validate(const RunConfig& cfg, const Setup& s, const Logger& log, bool& all_passed) {
  namespace ck = subbs::checks;
  std::vector<ck::CheckResult> checks;
  std::vector<subbs::Diagnostic> diags;
  const subbs::specfun::LaguerreOrder order(s.model.laguerre_order());
  {
    StageTimer timer(log, "property checks");
    checks.push_back(ck::make_check("orthogonality", ck::orthogonality_error(order), 1e-8,
                                    "n, m <= 10, 200-node Gauss rule"));
    checks.push_back(ck::make_check("eigenfunction_residual", ck::eigenfunction_residual(s.model),
                                    1e-4, "modes 0..8, S in [0.1, 100]"));
    checks.push_back(ck::make_check("payoff_integral", ck::payoff_integral_error(s.payoff), 1e-8,
                                    "adaptive S-integral vs A(p+1)/alpha"));
  }
  const auto sol = subbs::spectral::build_solution(s.model, s.payoff, cfg.maturity, s.spectral);
  diags = sol.diagnostics;
  {
    StageTimer timer(log, "reconstruction checks");
    const auto rule = subbs::spectral::make_rule(s.model, s.spectral);
    const double err = subbs::spectral::reconstruction_error(sol, rule);
    checks.push_back(ck::make_check("maturity_reconstruction", err, 1e-3,
                                    "weighted relative L2 error at N = " + std::to_string(cfg.terms)));
    double increase = 0.0;
    double prev = INFINITY;
    for (int div : {8, 4, 2, 1}) {
      auto opt = s.spectral;
      opt.n_terms = std::max(1, cfg.terms / div);
      opt.self_check = false;
      const auto sub = subbs::spectral::build_solution(s.model, s.payoff, cfg.maturity, opt);
      const double e = subbs::spectral::reconstruction_error(sub, rule);
      if (std::isfinite(prev)) increase = std::max(increase, e - prev);
      prev = e;
    }
    checks.push_back(ck::make_check("reconstruction_monotone", increase, 1e-12,
                                    "largest increase over N/8, N/4, N/2, N"));
    checks.push_back(ck::make_check("coefficient_routes",
                                    ck::coefficient_route_error(s.model, s.payoff, sol), 1e-6,
                                    "u-space rule vs adaptive S-integral, m <= 8"));
  }
  {
    StageTimer timer(log, "three-way agreement");
    const auto tw = ck::three_way_agreement(s.model, s.payoff, cfg.maturity, cfg.t.front(),
                                            s.s_points, sol, s.fd, s.mc);
    diags.insert(diags.end(), tw.diagnostics.begin(), tw.diagnostics.end());
    std::string detail = "max over probes of pairwise |diff| / max(1%, 3 stderr);";
    for (const auto& p : tw.probes) {
      detail += " S=" + subbs::fmt(p.s) + ": spectral " + format_number(p.spectral, 8) + ", fd " +
                format_number(p.crank_nicolson, 8) + ", mc " + format_number(p.monte_carlo, 8) +
                " +- " + format_number(p.mc_std_error, 3) + ";";
    }
    auto c = ck::make_check("three_way_agreement", tw.worst_excess, 1.0, detail);
    c.passed = tw.worst_excess <= 1.0;
    checks.push_back(c);
  }

  Document doc;
  doc.command = "validate";
  doc.body_key = "report";
  all_passed = true;
  Json list = Json::array();
  doc.csv_rows = Json::array();
  for (const auto& c : checks) {
    all_passed = all_passed && c.passed;
    list.push_back({{"check", c.name},
                    {"passed", c.passed},
                    {"measured", c.measured},
                    {"tolerance", c.tolerance},
                    {"detail", c.detail}});
    doc.csv_rows.push_back(list.back());
    log.log(LogLevel::info, "info",
            c.name + (c.passed ? " PASS " : " FAIL ") + subbs::fmt(c.measured) + " (tol " +
                subbs::fmt(c.tolerance) + ")");
  }
  doc.body = {{"passed", all_passed}, {"checks", list}};
  doc.csv_columns = {"check", "passed", "measured", "tolerance"};
  doc.diagnostics = diagnostics_json(diags);
  log.diagnostics(diags);
  return doc;
}

Document cmd_converge(const RunConfig& cfg, const Setup& s, const Logger& log) {
  if (cfg.n_list.empty()) {
    throw subbs::ParameterError(subbs::codes::invalid_config, "--n-list is empty");
  }
  std::vector<int> ns = cfg.n_list;
  for (int n : ns) {
    if (n < 1) throw subbs::ParameterError(subbs::codes::invalid_terms, "--n-list entries must be >= 1");
  }
  const int n_max = *std::max_element(ns.begin(), ns.end());
  const double t = cfg.t.front();
  auto opt_for = [&](int n) {
    auto opt = s.spectral;
    opt.n_terms = n;
    opt.self_check = false;
    return opt;
  };
  // Reconstruction errors are measured with the rule of the largest N.
  const auto rule = subbs::spectral::make_rule(s.model, opt_for(n_max));
  const auto ref = subbs::spectral::build_solution(s.model, s.payoff, cfg.maturity, opt_for(n_max));
  std::vector<double> ref_prices;
  for (double spot : s.s_points) ref_prices.push_back(subbs::spectral::evaluate(ref, t, spot));

  Document doc;
  doc.command = "converge";
  doc.body_key = "rows";
  doc.body = Json::array();
  doc.csv_rows = Json::array();
  doc.csv_columns = {"n_terms", "reconstruction_error", "S", "value", "delta"};
  for (int n : ns) {
    StageTimer timer(log, "converge N=" + std::to_string(n));
    const auto sol = subbs::spectral::build_solution(s.model, s.payoff, cfg.maturity, opt_for(n));
    const double err = subbs::spectral::reconstruction_error(sol, rule);
    Json prices = Json::array();
    for (std::size_t j = 0; j < s.s_points.size(); ++j) {
      const double v = subbs::spectral::evaluate(sol, t, s.s_points[j]);
      const double delta = v - ref_prices[j];
      prices.push_back({{"S", s.s_points[j]}, {"value", v}, {"delta", delta}});
      doc.csv_rows.push_back({{"n_terms", n},
                              {"reconstruction_error", err},
                              {"S", s.s_points[j]},
                              {"value", v},
                              {"delta", delta}});
    }
    doc.body.push_back({{"n_terms", n}, {"reconstruction_error", err}, {"prices", prices}});
  }
  return doc;
}

// ---------------------------------------------------------------- errors

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  Json j = {{"error", {{"code", code}, {"message", message}}}};
  err << j.dump() << '\n';
}

int exit_code_for(const subbs::Error& e) {
  switch (e.kind()) {
    case subbs::ErrorKind::invalid_parameter:
      return exit_invalid;
    case subbs::ErrorKind::numerical:
      return exit_numerical;
    case subbs::ErrorKind::io:
      return exit_io;
  }
  return exit_numerical;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{
      "Prices the gamma-shaped payoff under the power-variance model by Laguerre spectral "
      "series and cross-checks it with finite differences and Monte Carlo.\n"
      "Precedence: command-line flags override --config file values, which override the "
      "built-in defaults (the reference configuration).",
      "pricer"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; keys are the long flag names");

  app.add_option("--k", cfg.k, "elasticity exponent, > 2")->capture_default_str();
  app.add_option("--r", cfg.r, "risk-free rate, > 0")->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "volatility scale, > 0")->capture_default_str();
  app.add_option("--A", cfg.notional, "payoff notional, > 0")->capture_default_str();
  app.add_option("--alpha", cfg.decay_rate, "payoff decay rate, > 0")->capture_default_str();
  app.add_option("--p", cfg.shape, "payoff shape, > -1")->capture_default_str();
  app.add_option("--T", cfg.maturity, "maturity")->capture_default_str();
  app.add_option("--t", cfg.t, "evaluation times (comma list)")->delimiter(',')->capture_default_str();
  app.add_option("--s", cfg.s, "spot values (comma list); default 0.5, 1, 1.5 x payoff peak")
      ->delimiter(',');
  app.add_option("--method", cfg.method, "spectral | crank_nicolson | monte_carlo")
      ->capture_default_str();
  app.add_option("--terms", cfg.terms, "series terms N")->capture_default_str();
  app.add_option("--quad-rule", cfg.quad_rule, "graded | gauss")->capture_default_str();
  app.add_option("--quad-nodes", cfg.quad_nodes, "nodes of the gauss rule (1..512)")
      ->capture_default_str();
  app.add_option("--fd-smax", cfg.fd_smax, "finite-difference grid cap; 0 = 5 x payoff peak")
      ->capture_default_str();
  app.add_option("--fd-nspace", cfg.fd_nspace, "space intervals")->capture_default_str();
  app.add_option("--fd-ntime", cfg.fd_ntime, "time steps")->capture_default_str();
  app.add_option("--fd-far-field", cfg.fd_far_field, "asymptotic | zero")->capture_default_str();
  app.add_option("--mc-paths", cfg.mc_paths, "Monte Carlo paths")->capture_default_str();
  app.add_option("--mc-steps", cfg.mc_steps, "Euler steps per path")->capture_default_str();
  app.add_option("--mc-seed", cfg.mc_seed, "64-bit seed")->capture_default_str();
  app.add_option("--mc-scheme", cfg.mc_scheme, "cir | asset")->capture_default_str();
  app.add_option("--mc-workers", cfg.mc_workers, "threads; 0 = all cores (result unchanged)")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "json | csv")->capture_default_str();
  app.add_option("--output", cfg.output, "write the document here instead of stdout");
  app.add_option("--n-list", cfg.n_list, "term counts for converge (comma list)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--probe", cfg.s, "alias of --s")->delimiter(',');

  // A repeated scalar flag keeps its last value.
  for (auto* opt : app.get_options()) {
    if (opt->get_expected_max() == 1) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  auto* price = app.add_subcommand("price", "price on the (t, S) grid");
  auto* coeffs = app.add_subcommand("coeffs", "dump the projection coefficients");
  auto* validate = app.add_subcommand("validate", "run the cross-validation report");
  auto* converge = app.add_subcommand("converge", "truncation study over --n-list");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::FileError& e) {
    report_error(err, subbs::codes::io_failure, e.what());
    return exit_io;
  } catch (const CLI::ParseError& e) {
    report_error(err, subbs::codes::invalid_argument, e.what());
    return exit_invalid;
  }

  const Logger log(err, log_level_from_env());
  try {
    const Setup setup = make_setup(cfg);
    Document doc;
    int code = exit_ok;
    if (price->parsed()) {
      doc = cmd_price(cfg, setup, log);
    } else if (coeffs->parsed()) {
      doc = cmd_coeffs(cfg, setup, log);
    } else if (validate->parsed()) {
      bool passed = false;
      doc = cmd_validate(cfg, setup, log, passed);
      if (!passed) code = exit_validation;
    } else if (converge->parsed()) {
      doc = cmd_converge(cfg, setup, log);
    }
    doc.config_echo = config_echo(cfg, setup);
    emit(doc, cfg, out);
    return code;
  } catch (const subbs::Error& e) {
    report_error(err, e.code(), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    report_error(err, "INTERNAL", e.what());
    return exit_numerical;
  }
}

}  // namespace pricer
