#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "subbs/error.hpp"

namespace subbs::linalg {

struct TridiagonalEigen {
  std::vector<double> values;            // ascending
  std::vector<double> first_components;  // e_0 . v_j for normalized eigenvector j
};

/// Eigen-decomposition of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson-type shifts. Only the first row of the eigenvector matrix is
/// accumulated (all that Golub-Welsch needs), so the cost is O(n^2).
inline TridiagonalEigen symmetric_tridiagonal_eigen(std::span<const double> diag,
                                                    std::span<const double> offdiag,
                                                    int max_iterations = 60) {
  const std::size_t n = diag.size();
  if (n == 0 || offdiag.size() + 1 != n) {
    throw ParameterError(codes::invalid_argument, "tridiagonal eigen: size mismatch");
  }
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  constexpr double eps = 2.220446049250313e-16;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    while (true) {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == max_iterations) {
        throw NumericalError(codes::eigensolver_no_convergence,
                             "tridiagonal eigen: no convergence for eigenvalue " +
                                 std::to_string(l) + " of " + std::to_string(n));
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      bool deflated = false;
      for (std::size_t ii = m; ii-- > l;) {
        double f = s * e[ii];
        const double b = c * e[ii];
        r = std::hypot(f, g);
        e[ii + 1] = r;
        if (r == 0.0) {
          d[ii + 1] -= p;
          e[m] = 0.0;
          deflated = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[ii + 1] - p;
        r = (d[ii] - g) * s + 2.0 * c * b;
        p = s * r;
        d[ii + 1] = g + p;
        g = c * r - b;
        f = z[ii + 1];
        z[ii + 1] = s * z[ii] + c * f;
        z[ii] = c * z[ii] - s * f;
      }
      if (deflated) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagonalEigen out;
  out.values.reserve(n);
  out.first_components.reserve(n);
  for (std::size_t i : order) {
    out.values.push_back(d[i]);
    out.first_components.push_back(z[i]);
  }
  return out;
}

/// Precomputed Thomas factorization of a (non-symmetric) tridiagonal system
/// lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored.
class ThomasSolver {
 public:
  ThomasSolver(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)), inv_pivot_(diag.size()),
        c_prime_(diag.size()) {
    const std::size_t n = diag.size();
    if (n == 0 || lower_.size() != n || upper_.size() != n) {
      throw ParameterError(codes::invalid_argument, "thomas: size mismatch");
    }
    double pivot = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) pivot = diag[i] - lower_[i] * c_prime_[i - 1];
      if (pivot == 0.0 || !std::isfinite(pivot)) {
        throw NumericalError(codes::nonfinite_value, "thomas: zero pivot at row " + std::to_string(i));
      }
      inv_pivot_[i] = 1.0 / pivot;
      c_prime_[i] = (i + 1 < n) ? upper_[i] * inv_pivot_[i] : 0.0;
    }
  }

  /// Solves in place: `x` holds the right-hand side on entry.
  void solve(std::span<double> x) const {
    const std::size_t n = inv_pivot_.size();
    x[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) x[i] = (x[i] - lower_[i] * x[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime_[i] * x[i + 1];
  }

  std::size_t size() const noexcept { return inv_pivot_.size(); }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> inv_pivot_;
  std::vector<double> c_prime_;
};

}  // namespace subbs::linalg
