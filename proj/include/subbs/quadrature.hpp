#pragma once

// Quadrature for the generalized Laguerre measure u^alpha e^{-u} du on
// (0, inf), plus an adaptive Gauss-Kronrod integrator used as an
// independent oracle in the original asset variable.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "subbs/error.hpp"
#include "subbs/specfun.hpp"
#include "subbs/tridiagonal.hpp"

namespace subbs::quadrature {

using specfun::LaguerreOrder;

/// Gauss rule for u^alpha e^{-u} on (0, inf). Exact for polynomials of
/// degree <= 2n-1. `log_weights` stays finite where `weights` underflows.
struct GaussLaguerreRule {
  double alpha = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;

  std::size_t size() const noexcept { return nodes.size(); }
  int exact_degree() const noexcept { return 2 * static_cast<int>(nodes.size()) - 1; }
  /// Projection onto N modes needs at least 2N nodes.
  bool supports_terms(int n_terms) const noexcept {
    return static_cast<int>(nodes.size()) >= 2 * n_terms;
  }
};

/// Composite Gauss rule for the same measure: a Gauss-Jacobi panel at the
/// origin, geometrically graded then uniform Gauss-Legendre panels, and a
/// shifted Gauss-Laguerre tail. Resolves integrands concentrated near u = 0
/// that a single Gauss-Laguerre rule cannot see.
struct CompositeLaguerreRule {
  double alpha = 0.0;
  int max_terms = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> log_weights;

  std::size_t size() const noexcept { return nodes.size(); }
  bool supports_terms(int n_terms) const noexcept { return n_terms <= max_terms; }
};

template <class R>
concept LaguerreMeasureRule = requires(const R& rule, int n) {
  { rule.alpha } -> std::convertible_to<double>;
  { rule.nodes } -> std::convertible_to<const std::vector<double>&>;
  { rule.weights } -> std::convertible_to<const std::vector<double>&>;
  { rule.log_weights } -> std::convertible_to<const std::vector<double>&>;
  { rule.supports_terms(n) } -> std::convertible_to<bool>;
};

struct NodesWeights {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix, weights are
/// mu0 times the squared first components of the normalized eigenvectors.
inline NodesWeights golub_welsch(std::span<const double> diag, std::span<const double> offdiag,
                                 double mu0) {
  auto eig = linalg::symmetric_tridiagonal_eigen(diag, offdiag);
  NodesWeights out;
  out.nodes = std::move(eig.values);
  out.weights.reserve(out.nodes.size());
  for (double v : eig.first_components) out.weights.push_back(mu0 * v * v);
  return out;
}

/// Gauss-Legendre on [-1, 1].
inline NodesWeights gauss_legendre(int n) {
  if (n < 1) throw ParameterError(codes::quad_nodes_out_of_range, "gauss_legendre: n >= 1");
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n - 1);
  for (int i = 1; i < n; ++i) off[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
  return golub_welsch(diag, off, 2.0);
}

/// Gauss-Jacobi for weight x^alpha on [0, 1] (Jacobi (0, alpha) mapped from [-1, 1]).
inline NodesWeights gauss_jacobi_unit(LaguerreOrder order, int n) {
  if (n < 1) throw ParameterError(codes::quad_nodes_out_of_range, "gauss_jacobi: n >= 1");
  const double a = 0.0;
  const double b = order.value();
  std::vector<double> diag(n);
  std::vector<double> off(n > 1 ? n - 1 : 0);
  diag[0] = (b - a) / (a + b + 2.0);
  for (int i = 1; i < n; ++i) {
    const double s = 2.0 * i + a + b;
    diag[i] = (b * b - a * a) / (s * (s + 2.0));
    off[i - 1] = 2.0 / s * std::sqrt(i * (i + a) * (i + b) * (i + a + b) / ((s - 1.0) * (s + 1.0)));
  }
  auto nw = golub_welsch(diag, off, 1.0 / (b + 1.0));
  for (double& x : nw.nodes) x = 0.5 * (1.0 + x);
  return nw;
}

namespace detail {

struct ScaledPair {
  long double ln;       // L_n mantissa
  long double ln_prev;  // L_{n-1} mantissa
  double log_scale;
};

// L_n and L_{n-1} at x with a shared exponent, safe for n up to 512 and x ~ 2000.
// Extended precision keeps the smallest nodes accurate for alpha < 0.
inline ScaledPair laguerre_pair(int n, double alpha, long double x) {
  constexpr long double big = 1e150L;
  long double prev = 1.0L;
  long double cur = 1.0L + alpha - x;
  double lg = 0.0;
  if (n == 0) return {1.0L, 0.0L, 0.0};
  for (int m = 1; m < n; ++m) {
    const long double next = ((2.0L * m + 1.0L + alpha - x) * cur - (m + alpha) * prev) / (m + 1.0L);
    prev = cur;
    cur = next;
    if (std::fabs(cur) > big) {
      cur /= big;
      prev /= big;
      lg += std::log(1e150);
    }
  }
  return {cur, prev, lg};
}

}  // namespace detail

/// Weights of the n-point rule by the eigenvector route alone.
inline std::vector<double> gauss_laguerre_eigen_weights(LaguerreOrder order, int n) {
  const double a = order.value();
  std::vector<double> diag(n);
  std::vector<double> off(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + a + 1.0;
  for (int i = 1; i < n; ++i) off[i - 1] = std::sqrt(i * (i + a));
  return golub_welsch(diag, off, std::exp(specfun::log_gamma(a + 1.0))).weights;
}

/// n-point generalized Gauss-Laguerre rule, 1 <= n <= 512.
///
/// Nodes come from the Jacobi matrix (diagonal 2i+alpha+1, off-diagonal
/// sqrt(i(i+alpha))) and are polished by Newton steps on L_n. Weights use
/// the closed form Gamma(n+alpha+1) / (n! x L_n'(x)^2), evaluated in log
/// space so tail weights keep full relative accuracy.
inline GaussLaguerreRule build_rule(LaguerreOrder order, int n) {
  if (n < 1 || n > 512) {
    throw ParameterError(codes::quad_nodes_out_of_range,
                         "build_rule: n must be in [1, 512], got " + std::to_string(n));
  }
  const double a = order.value();
  std::vector<double> diag(n);
  std::vector<double> off(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + a + 1.0;
  for (int i = 1; i < n; ++i) off[i - 1] = std::sqrt(i * (i + a));

  linalg::TridiagonalEigen eig;
  try {
    eig = linalg::symmetric_tridiagonal_eigen(diag, off);
  } catch (const NumericalError& e) {
    throw NumericalError(codes::eigensolver_no_convergence,
                         std::string(e.what()) + " (alpha=" + fmt(a) +
                             ", n=" + std::to_string(n) + ")");
  }

  GaussLaguerreRule rule;
  rule.alpha = a;
  rule.nodes = std::move(eig.values);
  // ln(Gamma(n+a+1)/n!) as lnGamma(a+1) + sum ln(1 + a/j): no cancellation of large logs.
  double log_ratio = specfun::log_gamma(a + 1.0);
  for (int j = 1; j <= n; ++j) log_ratio += std::log1p(a / j);
  const double log_const = log_ratio;
  std::vector<long double> polished(rule.nodes.begin(), rule.nodes.end());
  for (long double& x : polished) {
    for (int it = 0; it < 4; ++it) {
      const auto p = detail::laguerre_pair(n, a, x);
      const long double deriv = (n * p.ln - (n + a) * p.ln_prev) / x;
      if (deriv == 0.0L) break;
      const long double dx = p.ln / deriv;
      if (!std::isfinite(static_cast<double>(dx)) || std::fabs(dx) > 1e-6L * x) break;
      x -= dx;
      if (std::fabs(dx) <= 4.0L * std::numeric_limits<long double>::epsilon() * x) break;
    }
  }
  for (int i = 0; i < n; ++i) rule.nodes[i] = static_cast<double>(polished[i]);
  const double upper = 4.0 * n + 2.0 * a + 4.0;
  rule.weights.reserve(n);
  rule.log_weights.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double x = rule.nodes[i];
    if (!(x > 0.0) || !(x < upper) || (i > 0 && !(x > rule.nodes[i - 1]))) {
      throw NumericalError(codes::node_out_of_bounds,
                           "build_rule: node " + std::to_string(i) + " = " + fmt(x) +
                               " violates ordering or (0, 4n+2alpha+4) (alpha=" +
                               fmt(a) + ", n=" + std::to_string(n) + ")");
    }
    const long double xl = polished[i];
    const auto p = detail::laguerre_pair(n, a, xl);
    // x L_n'(x) = n L_n - (n+a) L_{n-1}; keeping the L_n term makes the
    // weight insensitive to the last-ulp error of the node.
    const long double x_deriv = n * p.ln - (n + a) * p.ln_prev;
    const double lw = static_cast<double>(log_const + std::log(xl) -
                                          2.0L * (std::log(std::fabs(x_deriv)) + p.log_scale));
    rule.log_weights.push_back(lw);
    rule.weights.push_back(std::exp(lw));
  }
  return rule;
}

struct GradedRuleOptions {
  double u_min = 1e-8;     // end of the Gauss-Jacobi panel at the origin
  double ratio = 2.0;      // geometric growth of panel ends
  double max_width = 0.5;  // panel width cap
  int panel_points = 20;
  int tail_points = 64;
  double margin = 40.0;  // extra u beyond the last Laguerre zero before the tail
};

/// Composite rule accurate for integrands L_m L_n (m, n < max_terms) and for
/// smooth functions times L_m, including ones concentrated near u = 0.
inline CompositeLaguerreRule build_graded_rule(LaguerreOrder order, int max_terms,
                                               const GradedRuleOptions& opt = {}) {
  if (max_terms < 1) {
    throw ParameterError(codes::invalid_terms, "build_graded_rule: max_terms must be >= 1");
  }
  if (!(opt.u_min > 0.0) || !(opt.ratio > 1.0) || !(opt.max_width > 0.0) ||
      opt.panel_points < 2 || opt.tail_points < 2 || opt.tail_points > 512) {
    throw ParameterError(codes::invalid_config, "build_graded_rule: invalid options");
  }
  const double a = order.value();
  CompositeLaguerreRule rule;
  rule.alpha = a;
  rule.max_terms = max_terms;
  auto push = [&](double u, double log_w) {
    rule.nodes.push_back(u);
    rule.log_weights.push_back(log_w);
    rule.weights.push_back(std::exp(log_w));
  };

  const auto jac = gauss_jacobi_unit(order, opt.panel_points);
  for (std::size_t j = 0; j < jac.nodes.size(); ++j) {
    const double u = opt.u_min * jac.nodes[j];
    push(u, std::log(jac.weights[j]) + (a + 1.0) * std::log(opt.u_min) - u);
  }

  const double extent = 4.0 * max_terms + 2.0 * a + 2.0;
  const double u_cap = extent + 20.0 * std::cbrt(extent) + opt.margin;
  const auto leg = gauss_legendre(opt.panel_points);
  double lo = opt.u_min;
  while (lo < u_cap) {
    const double width = std::min(lo * (opt.ratio - 1.0), opt.max_width);
    const double half = 0.5 * width;
    const double mid = lo + half;
    for (std::size_t j = 0; j < leg.nodes.size(); ++j) {
      const double u = mid + half * leg.nodes[j];
      push(u, std::log(leg.weights[j] * half) + a * std::log(u) - u);
    }
    lo += width;
  }

  const auto tail = build_rule(LaguerreOrder(0.0), opt.tail_points);
  for (std::size_t j = 0; j < tail.nodes.size(); ++j) {
    const double u = lo + tail.nodes[j];
    push(u, tail.log_weights[j] - lo + a * std::log(u));
  }
  return rule;
}

/// sum_i w_i f(x_i), approximating int_0^inf f(u) u^alpha e^{-u} du.
/// Nodes whose weight underflows to zero are skipped.
template <LaguerreMeasureRule Rule, class F>
double integrate(const Rule& rule, F&& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (rule.weights[i] == 0.0) continue;
    const double fx = f(rule.nodes[i]);
    if (!std::isfinite(fx)) {
      throw NumericalError(codes::integrand_failure,
                           "integrate: non-finite integrand at node " + std::to_string(i) +
                               " (u=" + fmt(rule.nodes[i]) + ")");
    }
    sum += rule.weights[i] * fx;
  }
  return sum;
}

namespace detail {

// QUADPACK 15-point Kronrod / 7-point Gauss pair.
inline constexpr std::array<double, 8> kronrod_x{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kronrod_w{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss7_w{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class G>
Segment kronrod15(G& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = g(center);
  double res_k = fc * kronrod_w[7];
  double res_g = fc * gauss7_w[3];
  double res_abs = std::abs(res_k);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kronrod_x[j];
    f1[j] = g(center - dx);
    f2[j] = g(center + dx);
    res_k += kronrod_w[j] * (f1[j] + f2[j]);
    res_abs += kronrod_w[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += gauss7_w[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = 0.5 * res_k;
  double res_asc = kronrod_w[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kronrod_w[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  res_asc *= std::abs(half);
  res_abs *= std::abs(half);
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  const double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * res_abs, err);
  }
  return {a, b, res_k * half, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [s_lo, s_hi],
/// s_hi may be +inf (mapped by S = s_lo + v/(1-v)). Bisects the interval with
/// the largest error estimate until the total estimate is within rel_tol of
/// the integral.
template <class F>
double adaptive_integrate_s(F&& f, double s_lo, double s_hi, double rel_tol,
                            int max_subdivisions = 20000) {
  if (!(rel_tol >= 1e-12)) {
    throw ParameterError(codes::invalid_argument, "adaptive_integrate_s: rel_tol must be >= 1e-12");
  }
  if (!(s_lo >= 0.0) || !(s_hi > s_lo)) {
    throw ParameterError(codes::invalid_argument, "adaptive_integrate_s: need 0 <= s_lo < s_hi");
  }
  const bool infinite = std::isinf(s_hi);
  auto g = [&](double x) -> double {
    double v;
    if (infinite) {
      const double one_minus = 1.0 - x;
      v = f(s_lo + x / one_minus) / (one_minus * one_minus);
    } else {
      v = f(x);
    }
    if (!std::isfinite(v)) {
      throw NumericalError(codes::integrand_failure,
                           "adaptive_integrate_s: non-finite integrand at " + fmt(x));
    }
    return v;
  };
  const double a = infinite ? 0.0 : s_lo;
  const double b = infinite ? 1.0 : s_hi;

  std::priority_queue<detail::Segment> heap;
  auto first = detail::kronrod15(g, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int splits = 0;
  while (total_err > rel_tol * std::abs(total)) {
    if (splits >= max_subdivisions) {
      throw NumericalError(codes::adaptive_no_convergence,
                           "adaptive_integrate_s: no convergence after " +
                               std::to_string(splits) + " subdivisions, error estimate " +
                               fmt(total_err) + " vs value " + fmt(total));
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::kronrod15(g, worst.a, mid);
    const auto right = detail::kronrod15(g, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum to shed the drift of the running updates.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

}  // namespace subbs::quadrature
