#pragma once

// Special-function kernel: generalized Laguerre polynomials, log-gamma,
// the error function and Whittaker M. No dependency beyond <cmath>
// elementary functions.

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>

#include "subbs/error.hpp"

namespace subbs::specfun {

/// Order of a generalized Laguerre polynomial, > -1 (the weight x^alpha e^-x
/// is integrable at the origin).
class LaguerreOrder {
 public:
  explicit LaguerreOrder(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha <= -1.0) {
      throw ParameterError(codes::order_out_of_range,
                           "Laguerre order must be finite and > -1, got " +
                               fmt(alpha));
    }
  }
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

/// L_n^{(alpha)}(x) by the upward three-term recurrence.
inline double laguerre(int n, LaguerreOrder order, double x) {
  if (n < 0) throw ParameterError(codes::negative_index, "laguerre: n must be >= 0");
  const double a = order.value();
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + a - x;
  for (int m = 1; m < n; ++m) {
    const double next = ((2.0 * m + 1.0 + a - x) * cur - (m + a) * prev) / (m + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Fills out[m] = L_m^{(alpha)}(x) for m = 0 .. out.size()-1.
inline void laguerre_sequence(LaguerreOrder order, double x, std::span<double> out) {
  if (out.empty()) return;
  const double a = order.value();
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = 1.0 + a - x;
  for (std::size_t m = 1; m + 1 < out.size(); ++m) {
    const double md = static_cast<double>(m);
    out[m + 1] = ((2.0 * md + 1.0 + a - x) * out[m] - (md + a) * out[m - 1]) / (md + 1.0);
  }
}

/// Fills out[m] = exp(log_scale) * L_m^{(alpha)}(x) without intermediate
/// overflow; used where x is large and the scale is tiny (quadrature weights).
inline void scaled_laguerre_sequence(LaguerreOrder order, double x, double log_scale,
                                     std::span<double> out) {
  if (out.empty()) return;
  constexpr double big = 1e150;
  const double log_big = std::log(big);
  const double a = order.value();
  double lg = log_scale;
  double factor = std::exp(lg);
  double prev = 1.0;
  out[0] = factor * prev;
  if (out.size() == 1) return;
  double cur = 1.0 + a - x;
  out[1] = factor * cur;
  for (std::size_t m = 1; m + 1 < out.size(); ++m) {
    const double md = static_cast<double>(m);
    const double next = ((2.0 * md + 1.0 + a - x) * cur - (md + a) * prev) / (md + 1.0);
    prev = cur;
    cur = next;
    if (std::abs(cur) > big) {
      cur /= big;
      prev /= big;
      lg += log_big;
      factor = std::exp(lg);
    }
    out[m + 1] = factor * cur;
  }
}

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine coefficients).
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ParameterError(codes::domain_error,
                         "log_gamma requires finite x > 0, got " + fmt(x));
  }
  static constexpr std::array<double, 9> coef{
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  const double z = x - 1.0;
  double series = coef[0];
  for (std::size_t i = 1; i < coef.size(); ++i) series += coef[i] / (z + static_cast<double>(i));
  const double t = z + g + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

namespace detail {

// Positive-term series erf(x) = 2x/sqrt(pi) e^{-x^2} sum (2x^2)^n / (2n+1)!!
inline double erf_series(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < 500; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 3.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return 2.0 * x / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

// Continued fraction (modified Lentz) for erfc, x >= 2.5:
// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
inline double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int j = 1; j < 5000; ++j) {
    const double aj = 0.5 * j;
    d = x + aj * d;
    if (d == 0.0) d = tiny;
    c = x + aj / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

inline constexpr double erf_switch = 2.5;

}  // namespace detail

/// Error function; absolute accuracy ~1e-16.
inline double erf(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return -erf(-x);
  if (x < detail::erf_switch) return detail::erf_series(x);
  return 1.0 - detail::erfc_continued_fraction(x);
}

/// Complementary error function, relative accuracy kept in the right tail.
inline double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < detail::erf_switch) return 1.0 - detail::erf_series(x);
  return detail::erfc_continued_fraction(x);
}

/// Kummer's confluent hypergeometric M(a, b, x) by its power series.
/// Stops once three consecutive terms fall below 1e-16 of the partial sum;
/// throws after 10 000 terms or on overflow.
inline double hyp1f1(double a, double b, double x) {
  if (b <= 0.0 && std::nearbyint(b) == b) {
    throw ParameterError(codes::hypergeometric_parameter,
                         "hyp1f1: b must not be a non-positive integer, got " +
                             fmt(b));
  }
  double term = 1.0;
  double sum = 1.0;
  int small_run = 0;
  for (int n = 0; n < 10000; ++n) {
    term *= (a + n) / (b + n) * x / (n + 1.0);
    sum += term;
    if (!std::isfinite(sum) || !std::isfinite(term)) {
      throw NumericalError(codes::series_overflow, "hyp1f1: series overflow at term " +
                                                       std::to_string(n + 1));
    }
    if (std::abs(term) <= 1e-16 * std::abs(sum)) {
      if (++small_run == 3) return sum;
    } else {
      small_run = 0;
    }
  }
  throw NumericalError(codes::series_no_convergence,
                       "hyp1f1: no convergence within 10000 terms");
}

/// Whittaker M_{kappa,mu}(x) = e^{-x/2} x^{mu+1/2} M(mu - kappa + 1/2, 1 + 2 mu, x).
inline double whittaker_m(double kappa, double mu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ParameterError(codes::domain_error, "whittaker_m requires x > 0");
  }
  const double b = 1.0 + 2.0 * mu;
  if (b <= 0.0 && std::nearbyint(b) == b) {
    throw ParameterError(codes::hypergeometric_parameter,
                         "whittaker_m: 1 + 2 mu is a non-positive integer");
  }
  const double m = hyp1f1(mu - kappa + 0.5, b, x);
  const double value = std::exp(-0.5 * x + (mu + 0.5) * std::log(x)) * m;
  if (!std::isfinite(value)) {
    throw NumericalError(codes::series_overflow, "whittaker_m: result overflows");
  }
  return value;
}

}  // namespace subbs::specfun
