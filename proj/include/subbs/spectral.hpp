#pragma once

// Laguerre eigen-expansion of the pricing problem.
//
// With u = u_scale S^{2-k} and a = 1/(k-2), the functions L_n^{(a)}(u(S))
// solve the spatial problem with eigenvalue -r(n(k-2)+1), so
//
//   V(t, S) = sum_n c_n L_n^{(a)}(u) exp(-r (n(k-2)+1) (T-t)).
//
// The c_n are projections of the maturity payoff in the weighted space
// L2(u^a e^{-u} du). They are stored without the maturity discount.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subbs/error.hpp"
#include "subbs/model.hpp"
#include "subbs/quadrature.hpp"
#include "subbs/specfun.hpp"
#include "subbs/surface.hpp"

namespace subbs::spectral {

struct SpectralSolution {
  PowerVarianceModel model;
  std::optional<GammaPayoff> payoff;  // empty when a generic function was projected
  double maturity = 0.0;
  std::vector<double> raw_coeffs;
  double tail_ratio = 0.0;  // |c_{N-1}| / max_j |c_j|
  std::vector<Diagnostic> diagnostics;

  int n_terms() const noexcept { return static_cast<int>(raw_coeffs.size()); }
};

namespace detail {

inline void check_maturity(double maturity) {
  if (!std::isfinite(maturity) || maturity < 0.0) {
    throw ParameterError(codes::negative_tau, "maturity T must be finite and >= 0");
  }
}

template <quadrature::LaguerreMeasureRule Rule>
void check_rule(const PowerVarianceModel& model, int n_terms, const Rule& rule) {
  if (n_terms < 1) {
    throw ParameterError(codes::invalid_terms,
                         "number of terms must be >= 1, got " + std::to_string(n_terms));
  }
  const double a = model.laguerre_order();
  if (std::abs(rule.alpha - a) > 1e-12 * std::max(1.0, a)) {
    throw ParameterError(codes::rule_order_mismatch,
                         "rule order " + fmt(rule.alpha) +
                             " does not match 1/(k-2) = " + fmt(a));
  }
  if (!rule.supports_terms(n_terms)) {
    throw ParameterError(codes::quad_too_small, "quadrature rule with " +
                                                    std::to_string(rule.size()) +
                                                    " nodes cannot project " +
                                                    std::to_string(n_terms) + " terms");
  }
}

// h_m = Gamma(m+a+1)/m!, the squared norm of L_m^{(a)}.
inline std::vector<double> laguerre_norms(double a, int n) {
  std::vector<double> h(n);
  double log_h = specfun::log_gamma(a + 1.0);
  for (int m = 0; m < n; ++m) {
    if (m > 0) log_h += std::log1p(a / m);
    h[m] = std::exp(log_h);
  }
  return h;
}

inline double tail_ratio(const std::vector<double>& c) {
  double mx = 0.0;
  for (double v : c) mx = std::max(mx, std::abs(v));
  return mx > 0.0 ? std::abs(c.back()) / mx : 0.0;
}

}  // namespace detail

/// Projects an arbitrary function g(S) onto the first n_terms modes.
template <quadrature::LaguerreMeasureRule Rule, class G>
SpectralSolution project_function(const PowerVarianceModel& model, G&& g, double maturity,
                                  int n_terms, const Rule& rule) {
  detail::check_maturity(maturity);
  detail::check_rule(model, n_terms, rule);
  const specfun::LaguerreOrder order(model.laguerre_order());
  std::vector<double> acc(n_terms, 0.0);
  std::vector<double> basis(n_terms);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const double gv = g(s_of_u(model, u));
    if (!std::isfinite(gv)) {
      throw NumericalError(codes::integrand_failure,
                           "payoff is not finite at quadrature node " + std::to_string(i) +
                               " (u=" + fmt(u) + ")");
    }
    if (gv == 0.0) continue;
    specfun::scaled_laguerre_sequence(order, u, rule.log_weights[i], basis);
    for (int m = 0; m < n_terms; ++m) acc[m] += basis[m] * gv;
  }
  const auto h = detail::laguerre_norms(order.value(), n_terms);
  SpectralSolution sol{model, std::nullopt, maturity, {}, 0.0, {}};
  sol.raw_coeffs.resize(n_terms);
  for (int m = 0; m < n_terms; ++m) {
    sol.raw_coeffs[m] = acc[m] / h[m];
    if (!std::isfinite(sol.raw_coeffs[m])) {
      throw NumericalError(codes::nonfinite_coefficient,
                           "coefficient of mode " + std::to_string(m) + " is not finite");
    }
  }
  sol.tail_ratio = detail::tail_ratio(sol.raw_coeffs);
  return sol;
}

/// c_m = m!/Gamma(m+a+1) sum_i w_i payoff(S(u_i)) L_m^{(a)}(u_i).
template <quadrature::LaguerreMeasureRule Rule>
SpectralSolution project_coefficients(const PowerVarianceModel& model, const GammaPayoff& payoff,
                                      double maturity, int n_terms, const Rule& rule) {
  auto sol = project_function(model, payoff, maturity, n_terms, rule);
  sol.payoff = payoff;
  return sol;
}

/// V(t, S). t == T gives the plain reconstruction of the payoff.
inline double evaluate(const SpectralSolution& sol, double t, double s) {
  if (!std::isfinite(t)) throw ParameterError(codes::domain_error, "t must be finite");
  if (t > sol.maturity) {
    throw ParameterError(codes::t_after_maturity, "t = " + fmt(t) +
                                                      " is after maturity T = " +
                                                      fmt(sol.maturity));
  }
  const auto& m = sol.model;
  const double u = u_of_s(m, s);
  const double a = m.laguerre_order();
  const double tau = sol.maturity - t;
  const double step = std::exp(-m.r() * (m.k() - 2.0) * tau);
  double discount = std::exp(-m.r() * tau);
  double prev = 1.0;
  double cur = 1.0 + a - u;
  double sum = 0.0;
  const int n = sol.n_terms();
  for (int j = 0; j < n; ++j) {
    const double basis = j == 0 ? 1.0 : cur;
    sum += sol.raw_coeffs[j] * basis * discount;
    discount *= step;
    if (j >= 1) {
      const double next = ((2.0 * j + 1.0 + a - u) * cur - (j + a) * prev) / (j + 1.0);
      prev = cur;
      cur = next;
    }
  }
  if (!std::isfinite(sum)) {
    throw NumericalError(codes::series_overflow,
                         "series overflows at S = " + fmt(s) +
                             " (u = " + fmt(u) + ")");
  }
  return sum;
}

inline PriceSurface price_surface(const SpectralSolution& sol, const std::vector<double>& t_grid,
                                  const std::vector<double>& s_grid) {
  validate_grid(t_grid, "t");
  validate_grid(s_grid, "S");
  PriceSurface out{t_grid, s_grid, std::vector<double>(t_grid.size() * s_grid.size()),
                   Method::spectral, sol.diagnostics};
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
      try {
        out.at(i, j) = evaluate(sol, t_grid[i], s_grid[j]);
      } catch (const Error& e) {
        rethrow_with_context(e, "at grid point (t index " + std::to_string(i) + ", S index " +
                                    std::to_string(j) + ")");
      }
    }
  }
  return out;
}

struct TailReport {
  std::vector<double> mode_magnitude;  // |c_n| L_n^{(a)}(0)
  std::vector<double> tail_ratio;      // [N'-1]: max_{n >= N'} magnitude / max magnitude
  int suggested_terms = 0;             // smallest N' with tail ratio < threshold
  bool resolved = false;               // the computed modes reach the threshold
  double threshold = 1e-6;
};

/// Truncation advisory. L_n^{(a)}(0) = Gamma(n+a+1)/(n! Gamma(a+1)) bounds
/// |L_n^{(a)}(u)| e^{-u/2} for a >= 0, so |c_n| L_n(0) bounds the size of
/// mode n at large S.
inline TailReport tail_report(const SpectralSolution& sol, double threshold = 1e-6) {
  TailReport rep;
  rep.threshold = threshold;
  const int n = sol.n_terms();
  const double a = sol.model.laguerre_order();
  const auto h = detail::laguerre_norms(a, n);
  const double h0 = h.empty() ? 1.0 : h[0];
  rep.mode_magnitude.resize(n);
  double mx = 0.0;
  for (int j = 0; j < n; ++j) {
    rep.mode_magnitude[j] = std::abs(sol.raw_coeffs[j]) * h[j] / h0;
    mx = std::max(mx, rep.mode_magnitude[j]);
  }
  rep.tail_ratio.assign(n, 0.0);
  double suffix = 0.0;
  for (int j = n; j-- > 0;) {
    rep.tail_ratio[j] = mx > 0.0 ? suffix / mx : 0.0;
    suffix = std::max(suffix, rep.mode_magnitude[j]);
  }
  rep.suggested_terms = n;
  for (int j = 0; j < n; ++j) {
    if (rep.tail_ratio[j] < threshold) {
      rep.suggested_terms = j + 1;
      break;
    }
  }
  rep.resolved = rep.suggested_terms < n || mx == 0.0 ||
                 (n > 0 && rep.mode_magnitude[n - 1] < threshold * mx);
  return rep;
}

/// Weighted relative L2 error of V(T, .) against the payoff, measured on the
/// rule's nodes mapped to S.
template <quadrature::LaguerreMeasureRule Rule>
double reconstruction_error(const SpectralSolution& sol, const Rule& rule) {
  if (!sol.payoff) {
    throw ParameterError(codes::invalid_argument, "reconstruction_error needs a payoff solution");
  }
  const specfun::LaguerreOrder order(sol.model.laguerre_order());
  const int n = sol.n_terms();
  std::vector<double> basis(n);
  double err2 = 0.0;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const double gv = (*sol.payoff)(s_of_u(sol.model, u));
    specfun::scaled_laguerre_sequence(order, u, 0.5 * rule.log_weights[i], basis);
    double v = 0.0;
    for (int m = 0; m < n; ++m) v += sol.raw_coeffs[m] * basis[m];
    const double root_w = std::exp(0.5 * rule.log_weights[i]);
    const double d = v - root_w * gv;
    err2 += d * d;
    norm2 += root_w * gv * root_w * gv;
  }
  if (!(norm2 > 0.0)) return 0.0;
  return std::sqrt(err2 / norm2);
}

enum class RuleKind { graded, gauss };

struct SpectralOptions {
  int n_terms = 64;
  RuleKind rule = RuleKind::graded;
  int gauss_nodes = 200;
  bool self_check = true;
  double self_check_tol = 1e-9;
};

using ProjectionRule = std::variant<quadrature::GaussLaguerreRule, quadrature::CompositeLaguerreRule>;

/// The rule build_solution uses for the given options.
inline ProjectionRule make_rule(const PowerVarianceModel& model, const SpectralOptions& opt) {
  const specfun::LaguerreOrder order(model.laguerre_order());
  if (opt.rule == RuleKind::gauss) return quadrature::build_rule(order, opt.gauss_nodes);
  return quadrature::build_graded_rule(order, opt.n_terms);
}

inline double reconstruction_error(const SpectralSolution& sol, const ProjectionRule& rule) {
  return std::visit([&](const auto& r) { return reconstruction_error(sol, r); }, rule);
}

namespace detail {

inline double max_relative_change(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

inline std::size_t nodes_in_payoff_support(const PowerVarianceModel& model,
                                           const GammaPayoff& payoff,
                                           const std::vector<double>& nodes) {
  const double peak_value = payoff(payoff.peak());
  std::size_t count = 0;
  for (double u : nodes) {
    if (payoff(s_of_u(model, u)) >= 1e-3 * peak_value) ++count;
  }
  return count;
}

}  // namespace detail

/// Projection with diagnostics: a refinement self-check of the rule and a
/// warning when the payoff falls between too few quadrature nodes.
inline SpectralSolution build_solution(const PowerVarianceModel& model, const GammaPayoff& payoff,
                                       double maturity, const SpectralOptions& opt = {}) {
  const auto rule = make_rule(model, opt);
  auto sol = std::visit(
      [&](const auto& r) { return project_coefficients(model, payoff, maturity, opt.n_terms, r); },
      rule);

  if (opt.self_check) {
    const specfun::LaguerreOrder order(model.laguerre_order());
    std::optional<SpectralSolution> refined;
    if (opt.rule == RuleKind::gauss) {
      if (2 * opt.gauss_nodes <= 512) {
        refined = project_coefficients(model, payoff, maturity, opt.n_terms,
                                       quadrature::build_rule(order, 2 * opt.gauss_nodes));
      } else {
        sol.diagnostics.push_back({Severity::info, "QUAD_SELF_CHECK_SKIPPED",
                                   "refined Gauss rule would exceed 512 nodes"});
      }
    } else {
      quadrature::GradedRuleOptions fine;
      fine.panel_points *= 2;
      fine.tail_points *= 2;
      refined = project_coefficients(model, payoff, maturity, opt.n_terms,
                                     quadrature::build_graded_rule(order, opt.n_terms, fine));
    }
    if (refined) {
      const double change = detail::max_relative_change(sol.raw_coeffs, refined->raw_coeffs);
      if (change > opt.self_check_tol) {
        sol.diagnostics.push_back(
            {Severity::warning, "QUAD_SELF_CHECK",
             "coefficients change by " + fmt(change) +
                 " (relative to max) under quadrature refinement, target " +
                 fmt(opt.self_check_tol)});
      }
    }
  }

  const auto& nodes = std::visit([](const auto& r) -> const std::vector<double>& { return r.nodes; }, rule);
  const std::size_t inside = detail::nodes_in_payoff_support(model, payoff, nodes);
  if (inside < 8) {
    sol.diagnostics.push_back(
        {Severity::warning, "PAYOFF_UNDER_RESOLVED",
         "only " + std::to_string(inside) +
             " quadrature nodes fall where the payoff exceeds 1e-3 of its peak"});
  }
  return sol;
}

}  // namespace subbs::spectral
