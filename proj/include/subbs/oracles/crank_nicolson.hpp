#pragma once

// Crank-Nicolson solver for V_t + r S V_S + 1/2 sigma^2 S^k V_SS - r V = 0
// on a uniform grid [0, s_max], marching backward from the maturity payoff.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "subbs/error.hpp"
#include "subbs/model.hpp"
#include "subbs/surface.hpp"
#include "subbs/tridiagonal.hpp"

namespace subbs::oracles {

/// Condition at s_max.
///  asymptotic: V ~ a + b/S (S V_SS + 2 V_S = 0). For k > 2 the price tends
///              to a nonzero constant as S -> inf, so this is the default.
///  zero:       V(s_max) = 0.
enum class FarField { asymptotic, zero };

struct FdConfig {
  double s_max = 300.0;
  int n_space = 3000;  // intervals; the grid has n_space + 1 nodes
  int n_time = 2000;
  FarField far_field = FarField::asymptotic;
  std::vector<double> snapshot_times;  // t values to record; empty means {0, T}

  void validate() const {
    if (!(s_max > 0.0) || !std::isfinite(s_max)) {
      throw ParameterError(codes::invalid_grid, "s_max must be > 0");
    }
    if (n_space < 3) throw ParameterError(codes::invalid_grid, "n_space must be >= 3");
    if (n_time < 1) throw ParameterError(codes::invalid_grid, "n_time must be >= 1");
  }
};

/// Solves with an arbitrary terminal function. The S = 0 row follows
/// V_t = r V, i.e. terminal(0) e^{-r (T-t)}.
template <class Terminal>
PriceSurface crank_nicolson_solve(const PowerVarianceModel& model, Terminal&& terminal,
                                  double maturity, const FdConfig& cfg) {
  cfg.validate();
  if (!(maturity >= 0.0) || !std::isfinite(maturity)) {
    throw ParameterError(codes::negative_tau, "maturity must be >= 0");
  }
  const int m = cfg.n_space;
  const double h = cfg.s_max / m;
  const double dt = maturity / cfg.n_time;
  const double r = model.r();

  std::vector<double> t_grid = cfg.snapshot_times;
  if (t_grid.empty()) t_grid = maturity > 0.0 ? std::vector<double>{0.0, maturity}
                                              : std::vector<double>{0.0};
  validate_grid(t_grid, "snapshot t");
  // Steps from maturity at which each snapshot is taken.
  std::vector<int> snapshot_step(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double tau = maturity - t_grid[i];
    const double steps = dt > 0.0 ? tau / dt : 0.0;
    const double rounded = std::round(steps);
    if (tau < -1e-12 * std::max(1.0, maturity) || std::abs(steps - rounded) > 1e-6) {
      throw ParameterError(codes::invalid_grid, "snapshot time " + fmt(t_grid[i]) +
                                                    " is not on the time grid");
    }
    snapshot_step[i] = static_cast<int>(rounded);
  }

  PriceSurface out;
  out.method = Method::crank_nicolson;
  out.t_grid = t_grid;
  out.s_grid.resize(m + 1);
  for (int j = 0; j <= m; ++j) out.s_grid[j] = j * h;
  out.values.assign(t_grid.size() * (m + 1), 0.0);

  std::vector<double> v(m + 1);
  double peak = 0.0;
  for (int j = 0; j <= m; ++j) {
    v[j] = terminal(out.s_grid[j]);
    if (!std::isfinite(v[j])) {
      throw NumericalError(codes::nonfinite_value, "terminal value not finite at S index " +
                                                       std::to_string(j));
    }
    peak = std::max(peak, std::abs(v[j]));
  }
  const double v0_terminal = v[0];
  if (std::abs(v[m]) > 1e-12 * peak) {
    out.diagnostics.push_back({Severity::warning, "FD_GRID_TOO_SMALL",
                               "payoff at s_max is " + fmt(std::abs(v[m]) / peak) +
                                   " of its maximum (threshold 1e-12)"});
  }

  // Spatial operator rows: lo V_{j-1} + di V_j + up V_{j+1}, j = 1..m.
  const bool zero_far = cfg.far_field == FarField::zero;
  const int n_unknown = zero_far ? m - 1 : m;
  std::vector<double> lo(n_unknown), di(n_unknown), up(n_unknown);
  const double half_var = 0.5 * model.sigma() * model.sigma();
  for (int j = 1; j <= n_unknown; ++j) {
    const double s = j * h;
    const double a = half_var * std::pow(s, model.k()) / (h * h);
    const double b = r * s / (2.0 * h);
    lo[j - 1] = a - b;
    di[j - 1] = -2.0 * a - r;
    up[j - 1] = a + b;
  }
  if (!zero_far) {
    // Ghost node from S V_SS + 2 V_S = 0: V_{m+1} = (2 V_m - (1-q) V_{m-1}) / (1+q).
    const double q = h / cfg.s_max;
    const int last = m - 1;
    lo[last] -= up[last] * (1.0 - q) / (1.0 + q);
    di[last] += up[last] * 2.0 / (1.0 + q);
    up[last] = 0.0;
  }

  std::vector<double> il(n_unknown), id(n_unknown), iu(n_unknown);
  int non_dominant = 0;
  for (int i = 0; i < n_unknown; ++i) {
    il[i] = -0.5 * dt * lo[i];
    id[i] = 1.0 - 0.5 * dt * di[i];
    iu[i] = -0.5 * dt * up[i];
    if (std::abs(id[i]) < std::abs(il[i]) + std::abs(iu[i]) || lo[i] < 0.0) ++non_dominant;
  }
  if (non_dominant > 0) {
    out.diagnostics.push_back({Severity::info, "FD_NOT_DIAGONALLY_DOMINANT",
                               std::to_string(non_dominant) +
                                   " rows lose diagonal dominance or have a negative "
                                   "sub-diagonal coefficient (convection-dominated near S = 0)"});
  }
  const linalg::ThomasSolver implicit(il, id, iu);

  auto record = [&](int step) {
    for (std::size_t i = 0; i < snapshot_step.size(); ++i) {
      if (snapshot_step[i] == step) std::copy(v.begin(), v.end(), out.values.begin() + i * (m + 1));
    }
  };
  record(0);

  std::vector<double> rhs(n_unknown);
  for (int step = 1; step <= cfg.n_time; ++step) {
    const double v0_new = v0_terminal * std::exp(-r * step * dt);
    for (int i = 0; i < n_unknown; ++i) {
      const int j = i + 1;
      const double right = j < m ? v[j + 1] : 0.0;  // up is 0 on an asymptotic last row
      rhs[i] = v[j] + 0.5 * dt * (lo[i] * v[j - 1] + di[i] * v[j] + up[i] * right);
    }
    rhs[0] += 0.5 * dt * lo[0] * v0_new;
    implicit.solve(rhs);
    v[0] = v0_new;
    for (int i = 0; i < n_unknown; ++i) v[i + 1] = rhs[i];
    if (zero_far) v[m] = 0.0;
    record(step);
  }
  for (double x : out.values) {
    if (!std::isfinite(x)) throw NumericalError(codes::nonfinite_value, "solution is not finite");
  }
  return out;
}

inline PriceSurface crank_nicolson_solve(const PowerVarianceModel& model, const GammaPayoff& payoff,
                                         double maturity, const FdConfig& cfg) {
  return crank_nicolson_solve(model, [&](double s) { return payoff(s); }, maturity, cfg);
}

/// Value at S on snapshot row ti, linear between grid nodes.
inline double value_at(const PriceSurface& surf, std::size_t ti, double s) {
  const auto& g = surf.s_grid;
  if (!(s >= g.front()) || !(s <= g.back())) {
    throw ParameterError(codes::domain_error, "S = " + fmt(s) + " outside the grid");
  }
  const double h = g[1] - g[0];
  std::size_t j = static_cast<std::size_t>(std::floor((s - g.front()) / h));
  if (j >= g.size() - 1) j = g.size() - 2;
  const double w = (s - g[j]) / h;
  if (std::abs(w) < 1e-9) return surf.at(ti, j);
  if (std::abs(1.0 - w) < 1e-9) return surf.at(ti, j + 1);
  return (1.0 - w) * surf.at(ti, j) + w * surf.at(ti, j + 1);
}

}  // namespace subbs::oracles
