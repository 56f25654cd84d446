#pragma once

// Property checks shared by the validation command and the acceptance suite.
// Each returns a measured error; the caller compares it with a tolerance.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "subbs/model.hpp"
#include "subbs/oracles/crank_nicolson.hpp"
#include "subbs/oracles/monte_carlo.hpp"
#include "subbs/quadrature.hpp"
#include "subbs/specfun.hpp"
#include "subbs/spectral.hpp"

namespace subbs::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

inline CheckResult make_check(std::string name, double measured, double tolerance,
                              std::string detail = {}) {
  return {std::move(name), measured < tolerance, measured, tolerance, std::move(detail)};
}

/// max over n, m <= max_degree of |int L_n L_m - delta_nm h_n| / sqrt(h_n h_m),
/// h_n = Gamma(n+a+1)/n!, with an n_nodes-point Gauss rule.
inline double orthogonality_error(specfun::LaguerreOrder order, int max_degree = 10,
                                  int n_nodes = 200) {
  const auto rule = quadrature::build_rule(order, n_nodes);
  const int n = max_degree + 1;
  std::vector<double> gram(n * n, 0.0);
  std::vector<double> basis(n);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    specfun::scaled_laguerre_sequence(order, rule.nodes[i], 0.5 * rule.log_weights[i], basis);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) gram[a * n + b] += basis[a] * basis[b];
    }
  }
  const auto h = spectral::detail::laguerre_norms(order.value(), n);
  double worst = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double expected = a == b ? h[a] : 0.0;
      worst = std::max(worst, std::abs(gram[a * n + b] - expected) / std::sqrt(h[a] * h[b]));
    }
  }
  return worst;
}

/// Relative residual of the separated spatial equation
///   r S F' + 1/2 sigma^2 S^k F'' - r F - lambda_n F = 0
/// for F_n(S) = L_n^{(a)}(u(S)), derivatives by central differences with
/// step 1e-4 S, normalized by max(|lambda F|, |r S F'|). Maximum over modes
/// 0..max_mode and log-spaced S in [s_lo, s_hi].
inline double eigenfunction_residual(const PowerVarianceModel& model, int max_mode = 8,
                                     double s_lo = 0.1, double s_hi = 100.0, int samples = 400) {
  const specfun::LaguerreOrder order(model.laguerre_order());
  const double r = model.r();
  const double half_var = 0.5 * model.sigma() * model.sigma();
  double worst = 0.0;
  for (int n = 0; n <= max_mode; ++n) {
    const double lambda = eigenvalue(model, EigenIndex(n));
    auto f = [&](double s) { return specfun::laguerre(n, order, u_of_s(model, s)); };
    for (int i = 0; i < samples; ++i) {
      const double s = s_lo * std::pow(s_hi / s_lo, static_cast<double>(i) / (samples - 1));
      const double h = 1e-4 * s;
      const double f0 = f(s);
      const double fp = f(s + h);
      const double fm = f(s - h);
      const double d1 = (fp - fm) / (2.0 * h);
      const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
      const double residual =
          r * s * d1 + half_var * std::pow(s, model.k()) * d2 - r * f0 - lambda * f0;
      const double scale = std::max(std::abs(lambda * f0), std::abs(r * s * d1));
      if (scale > 0.0) worst = std::max(worst, std::abs(residual) / scale);
    }
  }
  return worst;
}

/// Relative error of the adaptive S-integral of the payoff against A(p+1)/alpha.
inline double payoff_integral_error(const GammaPayoff& payoff) {
  const double v = quadrature::adaptive_integrate_s(payoff, 0.0, INFINITY, 1e-12);
  return std::abs(v / payoff.integral() - 1.0);
}

/// Coefficient m by the projection integral written directly in S:
///   c_m = m!/Gamma(m+a+1) int_0^inf g(S) L_m(u(S)) u(S)^a e^{-u(S)} |du/dS| dS,
/// where u^a |du/dS| = u_scale^{a+1} (k-2) S^{-k}.
inline double coefficient_by_s_integral(const PowerVarianceModel& model, const GammaPayoff& payoff,
                                        int m, double rel_tol = 1e-11) {
  const specfun::LaguerreOrder order(model.laguerre_order());
  const double a = order.value();
  const double c = model.u_scale();
  const double log_jac = (a + 1.0) * std::log(c) + std::log(model.k() - 2.0);
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double g = payoff(s);
    if (g == 0.0) return 0.0;
    const double u = u_of_s(model, s);
    return g * specfun::laguerre(m, order, u) * std::exp(log_jac - model.k() * std::log(s) - u);
  };
  const double integral = quadrature::adaptive_integrate_s(integrand, 0.0, INFINITY, rel_tol);
  return integral / spectral::detail::laguerre_norms(a, m + 1)[m];
}

/// max_m<=max_mode |c_m(u-space) - c_m(S-integral)| / |c_m(S-integral)|.
inline double coefficient_route_error(const PowerVarianceModel& model, const GammaPayoff& payoff,
                                      const spectral::SpectralSolution& sol, int max_mode = 8) {
  double worst = 0.0;
  const int top = std::min(max_mode, sol.n_terms() - 1);
  for (int m = 0; m <= top; ++m) {
    const double ref = coefficient_by_s_integral(model, payoff, m);
    worst = std::max(worst, std::abs(sol.raw_coeffs[m] - ref) / std::abs(ref));
  }
  return worst;
}

struct ProbeComparison {
  double s = 0.0;
  double spectral = 0.0;
  double crank_nicolson = 0.0;
  double monte_carlo = 0.0;
  double mc_std_error = 0.0;
  double worst_excess = 0.0;  // max over pairs of |diff| / allowed, passes when <= 1
};

struct ThreeWayResult {
  std::vector<ProbeComparison> probes;
  double worst_excess = 0.0;
  long long mc_blowups = 0;
  std::vector<Diagnostic> diagnostics;
};

/// Spectral, Crank-Nicolson and Monte Carlo prices at (t, S) for each probe.
/// A pair agrees when |x - y| <= max(rel_tol * max(|x|, |y|), 3 stderr).
inline ThreeWayResult three_way_agreement(const PowerVarianceModel& model,
                                          const GammaPayoff& payoff, double maturity, double t,
                                          const std::vector<double>& probes,
                                          const spectral::SpectralSolution& sol,
                                          oracles::FdConfig fd, const oracles::McConfig& mc,
                                          double rel_tol = 0.01) {
  ThreeWayResult out;
  fd.snapshot_times = {t};
  const auto surface = oracles::crank_nicolson_solve(model, payoff, maturity, fd);
  out.diagnostics = surface.diagnostics;
  for (double s : probes) {
    ProbeComparison p;
    p.s = s;
    p.spectral = spectral::evaluate(sol, t, s);
    p.crank_nicolson = oracles::value_at(surface, 0, s);
    const auto m = oracles::monte_carlo_price(model, payoff, t, s, maturity, mc);
    p.monte_carlo = m.mean;
    p.mc_std_error = m.std_error;
    out.mc_blowups += m.blowups;
    const double vals[3] = {p.spectral, p.crank_nicolson, p.monte_carlo};
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        const double se = (i == 2 || j == 2) ? p.mc_std_error : 0.0;
        const double allowed =
            std::max(rel_tol * std::max(std::abs(vals[i]), std::abs(vals[j])), 3.0 * se);
        const double diff = std::abs(vals[i] - vals[j]);
        const double excess = allowed > 0.0 ? diff / allowed : (diff > 0.0 ? INFINITY : 0.0);
        p.worst_excess = std::max(p.worst_excess, excess);
      }
    }
    out.worst_excess = std::max(out.worst_excess, p.worst_excess);
    out.probes.push_back(p);
  }
  return out;
}

}  // namespace subbs::checks
