#pragma once

// Counter-based uniforms (Philox4x64-10) and Acklam's inverse normal CDF.
// A draw is a pure function of (key, counter), so any path can be
// regenerated independently of how work is split across threads.

#include <array>
#include <cmath>
#include <cstdint>

namespace subbs::oracles {

class Philox4x64 {
 public:
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit Philox4x64(Key key) : key_(key) {}

  Block operator()(Block ctr) const {
    Key k = key_;
    ctr = round(ctr, k);
    for (int i = 1; i < 10; ++i) {
      k[0] += kW0;
      k[1] += kW1;
      ctr = round(ctr, k);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

  static Block round(const Block& x, const Key& k) {
    const unsigned __int128 p0 = static_cast<unsigned __int128>(kM0) * x[0];
    const unsigned __int128 p1 = static_cast<unsigned __int128>(kM1) * x[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
  }

  Key key_;
};

/// Uniform in the open interval (0, 1) from the top 52 bits; the largest
/// value is 1 - 2^-53, which is representable.
inline double to_open_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 12) + 0.5) * 0x1.0p-52;
}

/// Acklam's rational approximation of the standard normal quantile
/// (relative error below 1.15e-9, no refinement step).
inline double inverse_normal_cdf(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/// Normals for one Monte Carlo path: draw i comes from counter
/// {i / 4, path, 0, 0}, lane i % 4, under key {seed, salt}.
class PathNormals {
 public:
  PathNormals(std::uint64_t seed, std::uint64_t path)
      : gen_({seed, kSalt}), path_(path) {}

  double next() {
    if (lane_ == 4) {
      block_ = gen_({counter_++, path_, 0, 0});
      lane_ = 0;
    }
    return inverse_normal_cdf(to_open_unit(block_[lane_++]));
  }

 private:
  static constexpr std::uint64_t kSalt = 0x6A09E667F3BCC908ULL;
  Philox4x64 gen_;
  std::uint64_t path_;
  std::uint64_t counter_ = 0;
  Philox4x64::Block block_{};
  int lane_ = 4;
};

}  // namespace subbs::oracles
