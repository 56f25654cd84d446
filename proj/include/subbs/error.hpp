#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <utility>

namespace subbs {

/// Shortest round-trip text of a double, for messages.
inline std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

enum class ErrorKind { invalid_parameter, numerical, io };

/// Base of every error the library throws. `code()` is a stable,
/// machine-readable identifier (e.g. "K_OUT_OF_RANGE") used by the CLI.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

class ParameterError : public Error {
 public:
  ParameterError(std::string code, const std::string& message)
      : Error(ErrorKind::invalid_parameter, std::move(code), message) {}
};

class NumericalError : public Error {
 public:
  NumericalError(std::string code, const std::string& message)
      : Error(ErrorKind::numerical, std::move(code), message) {}
};

class IoError : public Error {
 public:
  IoError(std::string code, const std::string& message)
      : Error(ErrorKind::io, std::move(code), message) {}
};

/// Re-throws `e` as the same error class with `context` appended.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string message = std::string(e.what()) + " " + context;
  switch (e.kind()) {
    case ErrorKind::invalid_parameter:
      throw ParameterError(e.code(), message);
    case ErrorKind::numerical:
      throw NumericalError(e.code(), message);
    case ErrorKind::io:
      break;
  }
  throw IoError(e.code(), message);
}

namespace codes {
inline constexpr const char* k_out_of_range = "K_OUT_OF_RANGE";
inline constexpr const char* nonpositive_r = "NONPOSITIVE_R";
inline constexpr const char* nonpositive_sigma = "NONPOSITIVE_SIGMA";
inline constexpr const char* nonpositive_notional = "NONPOSITIVE_NOTIONAL";
inline constexpr const char* nonpositive_decay_rate = "NONPOSITIVE_DECAY_RATE";
inline constexpr const char* p_out_of_range = "P_OUT_OF_RANGE";
inline constexpr const char* nonpositive_strike = "NONPOSITIVE_STRIKE";
inline constexpr const char* negative_tau = "NEGATIVE_TAU";
inline constexpr const char* domain_error = "DOMAIN_ERROR";
inline constexpr const char* order_out_of_range = "LAGUERRE_ORDER_OUT_OF_RANGE";
inline constexpr const char* negative_index = "NEGATIVE_INDEX";
inline constexpr const char* t_after_maturity = "T_AFTER_MATURITY";
inline constexpr const char* quad_nodes_out_of_range = "QUAD_NODES_OUT_OF_RANGE";
inline constexpr const char* quad_too_small = "QUAD_TOO_SMALL";
inline constexpr const char* rule_order_mismatch = "RULE_ORDER_MISMATCH";
inline constexpr const char* invalid_terms = "INVALID_TERMS";
inline constexpr const char* invalid_grid = "INVALID_GRID";
inline constexpr const char* invalid_config = "INVALID_CONFIG";
inline constexpr const char* invalid_argument = "INVALID_ARGUMENT";
inline constexpr const char* hypergeometric_parameter = "HYPERGEOMETRIC_PARAMETER";

inline constexpr const char* eigensolver_no_convergence = "EIGENSOLVER_NO_CONVERGENCE";
inline constexpr const char* node_out_of_bounds = "NODE_OUT_OF_BOUNDS";
inline constexpr const char* integrand_failure = "INTEGRAND_FAILURE";
inline constexpr const char* adaptive_no_convergence = "ADAPTIVE_NO_CONVERGENCE";
inline constexpr const char* series_overflow = "SERIES_OVERFLOW";
inline constexpr const char* series_no_convergence = "SERIES_NO_CONVERGENCE";
inline constexpr const char* nonfinite_coefficient = "NONFINITE_COEFFICIENT";
inline constexpr const char* nonfinite_value = "NONFINITE_VALUE";

inline constexpr const char* io_failure = "IO_FAILURE";
}  // namespace codes

}  // namespace subbs
