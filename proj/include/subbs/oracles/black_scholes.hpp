#pragma once

// Classical lognormal (k = 2) closed forms.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subbs/error.hpp"
#include "subbs/specfun.hpp"

namespace subbs::oracles {

namespace detail {

inline void check_vanilla_inputs(double s, double strike, double sigma, double tau) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw ParameterError(codes::domain_error, "S must be finite and > 0, got " + fmt(s));
  }
  if (!(strike > 0.0) || !std::isfinite(strike)) {
    throw ParameterError(codes::nonpositive_strike, "K must be > 0, got " + fmt(strike));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParameterError(codes::nonpositive_sigma, "sigma must be > 0, got " + fmt(sigma));
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ParameterError(codes::negative_tau, "tau must be >= 0, got " + fmt(tau));
  }
}

// Standard normal CDF via erfc, accurate in both tails.
inline double norm_cdf(double x) { return 0.5 * specfun::erfc(-x / std::numbers::sqrt2); }

}  // namespace detail

inline double bs_call(double s, double strike, double r, double sigma, double tau) {
  detail::check_vanilla_inputs(s, strike, sigma, tau);
  if (tau == 0.0) return std::max(s - strike, 0.0);
  const double vol = sigma * std::sqrt(tau);
  const double d1 = (std::log(s / strike) + (r + 0.5 * sigma * sigma) * tau) / vol;
  const double d2 = d1 - vol;
  return s * detail::norm_cdf(d1) - strike * std::exp(-r * tau) * detail::norm_cdf(d2);
}

inline double bs_put(double s, double strike, double r, double sigma, double tau) {
  detail::check_vanilla_inputs(s, strike, sigma, tau);
  if (tau == 0.0) return std::max(strike - s, 0.0);
  const double vol = sigma * std::sqrt(tau);
  const double d1 = (std::log(s / strike) + (r + 0.5 * sigma * sigma) * tau) / vol;
  const double d2 = d1 - vol;
  return strike * std::exp(-r * tau) * detail::norm_cdf(-d2) - s * detail::norm_cdf(-d1);
}

enum class OptionKind { call, put };

struct VanillaContract {
  VanillaContract(double strike_, double maturity_, OptionKind kind_)
      : strike(strike_), maturity(maturity_), kind(kind_) {
    if (!(strike_ > 0.0) || !std::isfinite(strike_)) {
      throw ParameterError(codes::nonpositive_strike, "K must be > 0, got " + fmt(strike_));
    }
    if (!std::isfinite(maturity_)) {
      throw ParameterError(codes::domain_error, "maturity must be finite");
    }
  }
  double strike;
  double maturity;
  OptionKind kind;
};

/// Price at time t <= maturity.
inline double price(const VanillaContract& c, double s, double r, double sigma, double t) {
  const double tau = c.maturity - t;
  return c.kind == OptionKind::call ? bs_call(s, c.strike, r, sigma, tau)
                                    : bs_put(s, c.strike, r, sigma, tau);
}

}  // namespace subbs::oracles
