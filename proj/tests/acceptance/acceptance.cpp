// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "golden.hpp"
#include "subbs/checks.hpp"
#include "subbs/subbs.hpp"

using namespace subbs;

namespace {

struct Outcome {
  bool passed = false;
  std::string measured;
  std::string tolerance;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

const PowerVarianceModel reference_model(0.05, 0.2, 3.0);
const GammaPayoff reference_payoff(1.0, 0.05, 2.0);
constexpr double reference_maturity = 1.0;

Outcome orthogonality() {
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    worst = std::max(worst, checks::orthogonality_error(specfun::LaguerreOrder(a), 10, 200));
  }
  return {worst < 1e-8, "max rel " + num(worst), "1e-8"};
}

Outcome eigenfunction_residual() {
  const double r = checks::eigenfunction_residual(reference_model, 8, 0.1, 100.0);
  return {r < 1e-4, "max rel " + num(r), "1e-4"};
}

Outcome maturity_reconstruction() {
  const specfun::LaguerreOrder order(reference_model.laguerre_order());
  double prev = INFINITY;
  bool monotone = true;
  double at_64 = 0.0;
  std::string series;
  // Each error is measured on the N = 64 rule so the norms are identical.
  const auto rule = quadrature::build_graded_rule(order, 64);
  for (int n : {8, 16, 32, 64}) {
    const auto sol = spectral::project_coefficients(reference_model, reference_payoff, reference_maturity,
                                                    n, rule);
    const double e = spectral::reconstruction_error(sol, rule);
    monotone = monotone && e <= prev;
    prev = e;
    at_64 = e;
    series += (series.empty() ? "" : ", ") + std::to_string(n) + ":" + num(e);
  }
  return {at_64 < 1e-3 && monotone,
          "N=64 error " + num(at_64) + (monotone ? ", nonincreasing" : ", NOT nonincreasing") + " [" +
              series + "]",
          "1e-3"};
}

Outcome coefficient_routes() {
  const auto sol = spectral::build_solution(reference_model, reference_payoff, reference_maturity);
  const double e = checks::coefficient_route_error(reference_model, reference_payoff, sol, 8);
  return {e < 1e-6, "max rel " + num(e), "1e-6"};
}

Outcome three_way() {
  const auto sol = spectral::build_solution(reference_model, reference_payoff, reference_maturity);
  oracles::FdConfig fd;
  fd.s_max = 300.0;
  fd.n_space = 3000;
  fd.n_time = 2000;
  oracles::McConfig mc;
  mc.n_paths = 200000;
  mc.n_steps = 500;
  const auto tw = checks::three_way_agreement(reference_model, reference_payoff, reference_maturity, 0.0,
                                              {30.0, 60.0, 90.0}, sol, fd, mc, 0.01);
  std::string detail = "worst |diff|/allowed " + num(tw.worst_excess);
  for (const auto& p : tw.probes) {
    detail += "; S=" + num(p.s) + " spectral " + num(p.spectral) + " fd " + num(p.crank_nicolson) + " mc " +
              num(p.monte_carlo) + "+-" + num(p.mc_std_error);
  }
  return {tw.worst_excess <= 1.0, detail, "max(1%, 3 stderr)"};
}

Outcome classical_oracles() {
  using oracles::bs_call;
  using oracles::bs_put;
  const double atm = bs_call(100.0, 100.0, 0.05, 0.2, 1.0);
  const double atm_err = std::abs(atm - golden::bs_call_atm);
  double parity = 0.0;
  for (double s : {50.0, 80.0, 100.0, 125.0, 200.0}) {
    for (double tau : {0.01, 0.25, 1.0, 2.5, 10.0}) {
      for (double sigma : {0.05, 0.2, 0.8}) {
        const double lhs = bs_call(s, 100.0, 0.05, sigma, tau) - bs_put(s, 100.0, 0.05, sigma, tau);
        parity = std::max(parity, std::abs(lhs - (s - 100.0 * std::exp(-0.05 * tau))));
      }
    }
  }
  bool expiry_exact = true;
  for (double s : {50.0, 99.5, 100.0, 100.5, 150.0}) {
    expiry_exact = expiry_exact && bs_call(s, 100.0, 0.05, 0.2, 0.0) == std::max(s - 100.0, 0.0) &&
                   bs_put(s, 100.0, 0.05, 0.2, 0.0) == std::max(100.0 - s, 0.0);
  }
  return {atm_err <= 5e-5 && parity <= 1e-12 && expiry_exact,
          "atm call " + num(atm) + " (err " + num(atm_err) + "), parity " + num(parity) + ", tau=0 " +
              (expiry_exact ? "exact" : "NOT exact"),
          "5e-5, 1e-12, exact"};
}

Outcome scheme_order() {
  // Crank-Nicolson: change under mesh halving must contract by >= 3.
  std::vector<std::vector<double>> values;
  for (int level = 0; level < 3; ++level) {
    oracles::FdConfig fd;
    fd.s_max = 300.0;
    fd.n_space = 750 << level;
    fd.n_time = 500 << level;
    const auto surf = oracles::crank_nicolson_solve(reference_model, reference_payoff, reference_maturity, fd);
    values.push_back({});
    for (double s : {30.0, 60.0, 90.0}) values.back().push_back(oracles::value_at(surf, 0, s));
  }
  double contraction = INFINITY;
  for (std::size_t j = 0; j < 3; ++j) {
    const double coarse = std::abs(values[1][j] - values[0][j]);
    const double fine = std::abs(values[2][j] - values[1][j]);
    contraction = std::min(contraction, fine > 0.0 ? coarse / fine : INFINITY);
  }

  // Monte Carlo: stderr ratio under path tripling, determinism.
  oracles::McConfig mc;
  mc.n_paths = 20000;
  mc.n_steps = 500;
  const auto small = oracles::monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, reference_maturity, mc);
  const auto again = oracles::monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, reference_maturity, mc);
  mc.n_paths = 60000;
  mc.n_workers = 1;
  const auto one = oracles::monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, reference_maturity, mc);
  mc.n_workers = 4;
  const auto four = oracles::monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, reference_maturity, mc);
  const double ratio = small.std_error / one.std_error;
  const bool ratio_ok = std::abs(ratio / std::sqrt(3.0) - 1.0) <= 0.1;
  const bool deterministic = small.mean == again.mean && small.std_error == again.std_error &&
                             one.mean == four.mean && one.std_error == four.std_error;
  return {contraction >= 3.0 && ratio_ok && deterministic,
          "CN contraction " + num(contraction) + ", MC stderr ratio " + num(ratio) + ", " +
              (deterministic ? "bit-identical" : "NOT bit-identical"),
          ">= 3, sqrt(3) +- 10%, bit-identical"};
}

Outcome cli_contract() {
  struct Run {
    int code;
    std::string out;
    std::string err;
  };
  auto run = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = pricer::run_cli(args, out, err);
    return Run{code, out.str(), err.str()};
  };
  std::vector<std::string> failures;
  const std::vector<std::string> small_mc{"--mc-paths", "20000", "--mc-steps", "200"};
  const std::vector<std::vector<std::string>> commands{
      {"price", "--t", "0,0.5", "--s", "30,60,90"},
      {"coeffs", "--terms", "16"},
      {"validate", "--alpha", "8", "--mc-paths", "20000", "--mc-steps", "200"},
      {"converge", "--n-list", "8,16,32,64"}};
  const std::vector<std::string> body_keys{"rows", "rows", "report", "rows"};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    for (const char* format : {"json", "csv"}) {
      auto args = commands[i];
      args.insert(args.end(), {"--format", format});
      const auto a = run(args);
      const auto b = run(args);
      if (a.code != 0) failures.push_back(commands[i][0] + " exit " + std::to_string(a.code));
      if (a.out != b.out) failures.push_back(commands[i][0] + " " + format + " not byte-identical");
      if (std::string(format) == "json") {
        const auto doc = nlohmann::ordered_json::parse(a.out, nullptr, false);
        std::vector<std::string> keys;
        if (!doc.is_discarded()) {
          for (const auto& item : doc.items()) keys.push_back(item.key());
        }
        const std::vector<std::string> expected{"schema_version", "command", "config_echo", body_keys[i],
                                                "diagnostics"};
        if (keys != expected || doc["schema_version"] != pricer::schema_version) {
          failures.push_back(commands[i][0] + " json layout");
        }
      }
    }
  }
  const auto k2 = run({"price", "--k", "2"});
  if (k2.code != 2 || k2.err.find("K_OUT_OF_RANGE") == std::string::npos) failures.push_back("k=2 rejection");
  if (run({"price", "--no-such-flag"}).code != 2) failures.push_back("usage error exit");
  if (run({"price", "--output", "/nonexistent/dir/x.json"}).code != 1) failures.push_back("io exit");
  if (run({"price", "--s", "1e-9"}).code != 3) failures.push_back("numerical exit");
  if (run({"validate", "--terms", "2", "--mc-paths", "2000", "--mc-steps", "50"}).code != 4) {
    failures.push_back("validation exit");
  }
  std::string detail = failures.empty() ? "all contract checks hold" : "";
  for (const auto& f : failures) detail += (detail.empty() ? "" : "; ") + f;
  return {failures.empty(), detail, "schema, determinism, exit codes 0-4"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "orthogonality", orthogonality},
      {2, "eigenfunction residual", eigenfunction_residual},
      {3, "maturity reconstruction", maturity_reconstruction},
      {4, "coefficient route equivalence", coefficient_routes},
      {5, "three-way price agreement", three_way},
      {6, "classical oracle checks", classical_oracles},
      {7, "scheme-order checks", scheme_order},
      {8, "CLI contract", cli_contract},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::stoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }
  int failed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what(), "-"};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d %s: %s (tol %s) [%.2fs]\n", o.passed ? "PASS" : "FAIL", c.id, c.name,
                o.measured.c_str(), o.tolerance.c_str(), secs);
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
