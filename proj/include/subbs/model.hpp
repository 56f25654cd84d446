#pragma once

#include <cmath>
#include <string>

#include "subbs/error.hpp"
#include "subbs/specfun.hpp"

namespace subbs {

/// Power-variance ("sub-Black-Scholes") pricing model
///
///   V_t + r S V_S + 1/2 sigma^2 S^k V_SS - r V = 0,
///
/// i.e. local volatility sigma S^{k/2}. Only k > 2 is supported: for k = 2
/// the Laguerre change of variable is singular and for k < 2 it leaves the
/// positive half-line.
class PowerVarianceModel {
 public:
  PowerVarianceModel(double r, double sigma, double k) : r_(r), sigma_(sigma), k_(k) {
    if (!std::isfinite(r) || r <= 0.0) {
      throw ParameterError(codes::nonpositive_r, "r must be > 0, got " + fmt(r));
    }
    if (!std::isfinite(sigma) || sigma <= 0.0) {
      throw ParameterError(codes::nonpositive_sigma,
                           "sigma must be > 0, got " + fmt(sigma));
    }
    if (!std::isfinite(k) || k <= 2.0) {
      throw ParameterError(codes::k_out_of_range,
                           "k must be > 2, got " + fmt(k));
    }
  }

  double r() const noexcept { return r_; }
  double sigma() const noexcept { return sigma_; }
  double k() const noexcept { return k_; }

  /// Laguerre order 1/(k-2) of the spatial eigenfunctions.
  double laguerre_order() const noexcept { return 1.0 / (k_ - 2.0); }

  /// u = u_scale * S^{2-k}.
  double u_scale() const noexcept { return 2.0 * r_ / ((k_ - 2.0) * sigma_ * sigma_); }

 private:
  double r_;
  double sigma_;
  double k_;
};

/// Gamma-density shaped maturity payoff A S^{p+1} e^{-alpha S} alpha^{p+1} / Gamma(p+1).
class GammaPayoff {
 public:
  GammaPayoff(double notional, double decay_rate, double shape)
      : notional_(notional), rate_(decay_rate), shape_(shape) {
    if (!std::isfinite(notional) || notional <= 0.0) {
      throw ParameterError(codes::nonpositive_notional,
                           "A must be > 0, got " + fmt(notional));
    }
    if (!std::isfinite(decay_rate) || decay_rate <= 0.0) {
      throw ParameterError(codes::nonpositive_decay_rate,
                           "alpha must be > 0, got " + fmt(decay_rate));
    }
    if (!std::isfinite(shape) || shape <= -1.0) {
      throw ParameterError(codes::p_out_of_range,
                           "p must be > -1, got " + fmt(shape));
    }
    log_norm_ = -specfun::log_gamma(shape_ + 1.0);
  }

  double notional() const noexcept { return notional_; }
  double decay_rate() const noexcept { return rate_; }
  double shape() const noexcept { return shape_; }

  /// Location of the single interior maximum, (p+1)/alpha.
  double peak() const noexcept { return (shape_ + 1.0) / rate_; }
  /// Closed form of the integral over (0, inf): A (p+1)/alpha.
  double integral() const noexcept { return notional_ * (shape_ + 1.0) / rate_; }

  double operator()(double s) const {
    if (!(s >= 0.0)) {
      throw ParameterError(codes::domain_error,
                           "payoff requires S >= 0, got " + fmt(s));
    }
    if (s == 0.0) return 0.0;
    if (std::isinf(s)) return 0.0;
    const double x = rate_ * s;
    return notional_ * std::exp(log_norm_ + (shape_ + 1.0) * std::log(x) - x);
  }

 private:
  double notional_;
  double rate_;
  double shape_;
  double log_norm_ = 0.0;
};

/// Mode number of the eigen-expansion.
struct EigenIndex {
  explicit EigenIndex(int mode) : n(mode) {
    if (mode < 0) throw ParameterError(codes::negative_index, "eigen index must be >= 0");
  }
  int n;
};

inline double payoff_value(const GammaPayoff& payoff, double s) { return payoff(s); }

inline double u_of_s(const PowerVarianceModel& m, double s) {
  if (!(s > 0.0)) {
    throw ParameterError(codes::domain_error, "u_of_s requires S > 0, got " + fmt(s));
  }
  return m.u_scale() * std::pow(s, 2.0 - m.k());
}

inline double s_of_u(const PowerVarianceModel& m, double u) {
  if (!(u > 0.0)) {
    throw ParameterError(codes::domain_error, "s_of_u requires u > 0, got " + fmt(u));
  }
  return std::exp(std::log(u / m.u_scale()) / (2.0 - m.k()));
}

/// lambda_n = -n (k-2) r - r.
inline double eigenvalue(const PowerVarianceModel& m, EigenIndex idx) {
  return -idx.n * (m.k() - 2.0) * m.r() - m.r();
}

/// Backward decay rate of mode n, r (n (k-2) + 1) = -lambda_n.
inline double decay_rate(const PowerVarianceModel& m, int n) {
  return m.r() * (n * (m.k() - 2.0) + 1.0);
}

}  // namespace subbs
