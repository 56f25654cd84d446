// Prices the reference gamma payoff three ways and prints the results.

#include <cstdio>

#include "subbs/subbs.hpp"

int main() {
  const subbs::PowerVarianceModel model(0.05, 0.2, 3.0);
  const subbs::GammaPayoff payoff(1.0, 0.05, 2.0);
  const double maturity = 1.0;

  const auto sol = subbs::spectral::build_solution(model, payoff, maturity);
  const auto fd = subbs::oracles::crank_nicolson_solve(model, payoff, maturity, {});
  subbs::oracles::McConfig mc;
  mc.n_paths = 50000;

  std::printf("%6s %12s %12s %12s %10s\n", "S", "spectral", "fd", "mc", "mc_se");
  for (double s : {30.0, 60.0, 90.0}) {
    const auto m = subbs::oracles::monte_carlo_price(model, payoff, 0.0, s, maturity, mc);
    std::printf("%6.1f %12.6f %12.6f %12.6f %10.2e\n", s, subbs::spectral::evaluate(sol, 0.0, s),
                subbs::oracles::value_at(fd, 0, s), m.mean, m.std_error);
  }
  for (const auto& d : sol.diagnostics) std::printf("note: %s %s\n", d.code.c_str(), d.message.c_str());
  return 0;
}
