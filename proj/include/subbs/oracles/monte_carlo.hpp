#pragma once

// Monte Carlo pricer: discounted mean of the payoff at maturity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "subbs/error.hpp"
#include "subbs/model.hpp"
#include "subbs/oracles/random.hpp"

namespace subbs::oracles {

/// Discretization of the state.
///  cir_state:   full-truncation Euler on u = u_scale S^{2-k}, which is the
///               square-root process du = (k-2) r ((k-1)/(k-2) - u) dt
///               - sqrt(2 r (k-2) u) dW. u <= 0 at maturity means S = inf.
///  asset_state: full-truncation Euler on S itself,
///               S += r S dt + sigma max(S, 0)^{k/2} sqrt(dt) Z.
enum class McScheme { cir_state, asset_state };

struct McConfig {
  int n_paths = 200000;
  int n_steps = 500;
  std::uint64_t seed = 20240611;
  McScheme scheme = McScheme::cir_state;
  int n_workers = 0;  // 0: hardware concurrency

  void validate() const {
    if (n_paths < 1) throw ParameterError(codes::invalid_config, "n_paths must be >= 1");
    if (n_steps < 1) throw ParameterError(codes::invalid_config, "n_steps must be >= 1");
    if (n_workers < 0) throw ParameterError(codes::invalid_config, "n_workers must be >= 0");
  }
};

struct McResult {
  double mean = 0.0;
  double std_error = 0.0;
  long long blowups = 0;  // paths whose state became non-finite; counted as payoff 0
};

namespace detail {

struct PathOutcome {
  double payoff;
  bool blown_up;
};

inline PathOutcome simulate_path(const PowerVarianceModel& model, const GammaPayoff& payoff,
                                 double s0, double tau, const McConfig& cfg, std::uint64_t path) {
  PathNormals normals(cfg.seed, path);
  const double dt = tau / cfg.n_steps;
  const double sqdt = std::sqrt(dt);
  const double r = model.r();
  const double k = model.k();
  if (cfg.scheme == McScheme::asset_state) {
    const double sig = model.sigma();
    double s = s0;
    for (int i = 0; i < cfg.n_steps; ++i) {
      const double z = normals.next();
      s += r * s * dt + sig * std::pow(std::max(s, 0.0), 0.5 * k) * sqdt * z;
      if (!std::isfinite(s)) return {0.0, true};
    }
    return {payoff(std::max(s, 0.0)), false};
  }
  const double kappa = (k - 2.0) * r;
  const double theta = (k - 1.0) / (k - 2.0);
  const double vol = std::sqrt(2.0 * r * (k - 2.0));
  double u = u_of_s(model, s0);
  for (int i = 0; i < cfg.n_steps; ++i) {
    const double z = normals.next();
    const double up = std::max(u, 0.0);
    u += kappa * (theta - up) * dt - vol * std::sqrt(up) * sqdt * z;
    if (!std::isfinite(u)) return {0.0, true};
  }
  if (!(u > 0.0)) return {0.0, false};
  return {payoff(s_of_u(model, u)), false};
}

}  // namespace detail

/// Price at (t, S0) for maturity T. Path i always uses the same normals, and
/// the sum runs over paths in index order, so the result does not depend on
/// the number of workers.
inline McResult monte_carlo_price(const PowerVarianceModel& model, const GammaPayoff& payoff,
                                  double t, double s0, double maturity, const McConfig& cfg) {
  cfg.validate();
  if (!(s0 > 0.0) || !std::isfinite(s0)) {
    throw ParameterError(codes::domain_error, "S0 must be > 0, got " + fmt(s0));
  }
  if (!std::isfinite(t) || !std::isfinite(maturity)) {
    throw ParameterError(codes::domain_error, "t and T must be finite");
  }
  if (t > maturity) {
    throw ParameterError(codes::t_after_maturity,
                         "t = " + fmt(t) + " is after maturity T = " + fmt(maturity));
  }
  const double tau = maturity - t;
  if (tau == 0.0) return {payoff(s0), 0.0, 0};

  const std::size_t n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> values(n);
  std::vector<unsigned char> blown(n, 0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto o = detail::simulate_path(model, payoff, s0, tau, cfg, p);
      values[p] = o.payoff;
      blown[p] = o.blown_up ? 1 : 0;
    }
  };
  unsigned workers = cfg.n_workers > 0 ? static_cast<unsigned>(cfg.n_workers)
                                       : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0.0;
  long long blowups = 0;
  for (std::size_t p = 0; p < n; ++p) {
    sum += values[p];
    blowups += blown[p];
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  const double disc = std::exp(-model.r() * tau);
  return {disc * mean, disc * std::sqrt(var / static_cast<double>(n)), blowups};
}

}  // namespace subbs::oracles
