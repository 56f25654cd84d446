#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "subbs/error.hpp"

namespace subbs {

enum class Method { spectral, crank_nicolson, monte_carlo };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::spectral:
      return "spectral";
    case Method::crank_nicolson:
      return "crank_nicolson";
    case Method::monte_carlo:
      return "monte_carlo";
  }
  return "unknown";
}

enum class Severity { info, warning };

/// Non-fatal finding attached to a result (e.g. an under-resolved quadrature).
struct Diagnostic {
  Severity severity = Severity::warning;
  std::string code;
  std::string message;
};

/// Prices on a rectangular (t, S) grid, row-major in t.
struct PriceSurface {
  std::vector<double> t_grid;
  std::vector<double> s_grid;
  std::vector<double> values;
  Method method = Method::spectral;
  std::vector<Diagnostic> diagnostics;

  double at(std::size_t ti, std::size_t si) const { return values[ti * s_grid.size() + si]; }
  double& at(std::size_t ti, std::size_t si) { return values[ti * s_grid.size() + si]; }
};

/// Non-empty, strictly increasing, finite.
inline void validate_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw ParameterError(codes::invalid_grid, std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ParameterError(codes::invalid_grid, std::string(name) +
                                                    " grid must be finite and strictly increasing (index " +
                                                    std::to_string(i) + ")");
    }
  }
}

}  // namespace subbs
