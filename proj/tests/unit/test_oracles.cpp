#include <gtest/gtest.h>

#include <cmath>

#include "golden.hpp"
#include "subbs/oracles/black_scholes.hpp"
#include "subbs/oracles/crank_nicolson.hpp"
#include "subbs/oracles/monte_carlo.hpp"
#include "subbs/oracles/random.hpp"

using namespace subbs;
using namespace subbs::oracles;

namespace {
const PowerVarianceModel reference_model(0.05, 0.2, 3.0);
const GammaPayoff reference_payoff(1.0, 0.05, 2.0);

template <class F>
std::string error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}
}  // namespace

TEST(BlackScholes, IntrinsicAtExpiry) {
  EXPECT_EQ(bs_call(120.0, 100.0, 0.05, 0.2, 0.0), 20.0);
  EXPECT_EQ(bs_put(80.0, 100.0, 0.05, 0.2, 0.0), 20.0);
  EXPECT_EQ(bs_call(80.0, 100.0, 0.05, 0.2, 0.0), 0.0);
  EXPECT_EQ(bs_put(120.0, 100.0, 0.05, 0.2, 0.0), 0.0);
}

TEST(BlackScholes, AtTheMoneyGolden) {
  EXPECT_NEAR(bs_call(100.0, 100.0, 0.05, 0.2, 1.0), golden::bs_call_atm, 5e-5);
  EXPECT_NEAR(bs_call(100.0, 100.0, 0.05, 0.2, 1.0), golden::bs_call_atm, 1e-12);
}

TEST(BlackScholes, Limits) {
  EXPECT_NEAR(bs_call(10000.0, 100.0, 0.05, 0.2, 1.0), 10000.0 - 100.0 * std::exp(-0.05), 1e-9);
  EXPECT_NEAR(bs_put(1e-12, 100.0, 0.05, 0.2, 1.0), 100.0 * std::exp(-0.05), 1e-9);
}

TEST(BlackScholes, PutCallParityGrid) {
  EXPECT_NEAR(bs_call(100.0, 100.0, 0.05, 0.2, 1.0) - bs_put(100.0, 100.0, 0.05, 0.2, 1.0),
              100.0 - 100.0 * std::exp(-0.05), 1e-12);
  for (double s : {50.0, 80.0, 100.0, 125.0, 200.0}) {
    for (double tau : {0.01, 0.25, 1.0, 2.5, 10.0}) {
      for (double sigma : {0.05, 0.2, 0.8}) {
        const double lhs = bs_call(s, 100.0, 0.05, sigma, tau) - bs_put(s, 100.0, 0.05, sigma, tau);
        EXPECT_NEAR(lhs, s - 100.0 * std::exp(-0.05 * tau), 1e-12) << s << " " << tau << " " << sigma;
      }
    }
  }
}

TEST(BlackScholes, NoArbitrageMonotonicity) {
  for (double tau : {0.1, 1.0}) {
    double prev = -1.0;
    for (double s = 1.0; s <= 300.0; s += 1.0) {
      const double v = bs_call(s, 100.0, 0.05, 0.3, tau);
      EXPECT_GE(v, prev);
      prev = v;
    }
    prev = INFINITY;
    for (double strike = 1.0; strike <= 300.0; strike += 1.0) {
      const double v = bs_call(100.0, strike, 0.05, 0.3, tau);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(BlackScholes, Errors) {
  EXPECT_EQ(error_code([] { bs_call(0.0, 100.0, 0.05, 0.2, 1.0); }), "DOMAIN_ERROR");
  EXPECT_EQ(error_code([] { bs_call(100.0, 0.0, 0.05, 0.2, 1.0); }), "NONPOSITIVE_STRIKE");
  EXPECT_EQ(error_code([] { bs_put(100.0, 100.0, 0.05, 0.0, 1.0); }), "NONPOSITIVE_SIGMA");
  EXPECT_EQ(error_code([] { bs_put(100.0, 100.0, 0.05, 0.2, -1.0); }), "NEGATIVE_TAU");
  EXPECT_EQ(error_code([] { VanillaContract(-5.0, 1.0, OptionKind::call); }), "NONPOSITIVE_STRIKE");
}

TEST(BlackScholes, ContractPricing) {
  const VanillaContract call(100.0, 1.0, OptionKind::call);
  const VanillaContract put(100.0, 1.0, OptionKind::put);
  EXPECT_EQ(price(call, 100.0, 0.05, 0.2, 0.0), bs_call(100.0, 100.0, 0.05, 0.2, 1.0));
  EXPECT_EQ(price(put, 90.0, 0.05, 0.2, 1.0), 10.0);
}

TEST(CrankNicolson, ZeroPayoffGivesZeroSurface) {
  FdConfig cfg;
  cfg.n_space = 300;
  cfg.n_time = 200;
  const auto surf = crank_nicolson_solve(reference_model, [](double) { return 0.0; }, 1.0, cfg);
  for (double v : surf.values) EXPECT_EQ(v, 0.0);
}

TEST(CrankNicolson, TerminalRowIsThePayoff) {
  FdConfig cfg;
  cfg.n_space = 600;
  cfg.n_time = 100;
  const auto surf = crank_nicolson_solve(reference_model, reference_payoff, 1.0, cfg);
  ASSERT_EQ(surf.t_grid.back(), 1.0);
  for (std::size_t j = 0; j < surf.s_grid.size(); ++j) {
    EXPECT_EQ(surf.at(1, j), reference_payoff(surf.s_grid[j]));
  }
  EXPECT_EQ(surf.method, Method::crank_nicolson);
}

TEST(CrankNicolson, ReferenceValueAgainstRefinedGrid) {
  const auto surf = crank_nicolson_solve(reference_model, reference_payoff, 1.0, FdConfig{});
  for (std::size_t i = 0; i < golden::probe_s.size(); ++i) {
    const double v = value_at(surf, 0, golden::probe_s[i]);
    EXPECT_NEAR(v / golden::fd_fine[i], 1.0, 1e-4) << golden::probe_s[i];
  }
}

TEST(CrankNicolson, Diagnostics) {
  const auto surf = crank_nicolson_solve(reference_model, reference_payoff, 1.0, FdConfig{});
  bool grid_warning = false;
  for (const auto& d : surf.diagnostics) grid_warning = grid_warning || d.code == "FD_GRID_TOO_SMALL";
  // The payoff at S = 300 is still 7.7e-4 of its maximum.
  EXPECT_TRUE(grid_warning);
  FdConfig wide;
  wide.s_max = 1500.0;
  wide.n_space = 1500;
  wide.n_time = 50;
  const auto w = crank_nicolson_solve(reference_model, reference_payoff, 1.0, wide);
  for (const auto& d : w.diagnostics) EXPECT_NE(d.code, "FD_GRID_TOO_SMALL");
}

TEST(CrankNicolson, SnapshotsAndErrors) {
  FdConfig cfg;
  cfg.n_space = 300;
  cfg.n_time = 100;
  cfg.snapshot_times = {0.0, 0.5, 1.0};
  const auto surf = crank_nicolson_solve(reference_model, reference_payoff, 1.0, cfg);
  EXPECT_EQ(surf.t_grid.size(), 3u);
  EXPECT_LT(value_at(surf, 0, 60.0), value_at(surf, 1, 60.0));
  cfg.snapshot_times = {0.123456};
  EXPECT_EQ(error_code([&] { crank_nicolson_solve(reference_model, reference_payoff, 1.0, cfg); }), "INVALID_GRID");
  cfg.snapshot_times = {};
  cfg.n_space = 2;
  EXPECT_EQ(error_code([&] { crank_nicolson_solve(reference_model, reference_payoff, 1.0, cfg); }), "INVALID_GRID");
  EXPECT_EQ(error_code([&] { value_at(surf, 0, 400.0); }), "DOMAIN_ERROR");
}

TEST(Philox, KnownAnswerVectors) {
  const Philox4x64 zero({0, 0});
  const auto z = zero({0, 0, 0, 0});
  EXPECT_EQ(z[0], 0x16554d9eca36314cULL);
  EXPECT_EQ(z[1], 0xdb20fe9d672d0fdcULL);
  EXPECT_EQ(z[2], 0xd7e772cee186176bULL);
  EXPECT_EQ(z[3], 0x7e68b68aec7ba23bULL);
  const Philox4x64 pi({0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL});
  const auto p = pi({0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
                     0x082efa98ec4e6c89ULL});
  EXPECT_EQ(p[0], 0xa528f45403e61d95ULL);
  EXPECT_EQ(p[1], 0x38c72dbd566e9788ULL);
  EXPECT_EQ(p[2], 0xa5a1610e72fd18b5ULL);
  EXPECT_EQ(p[3], 0x57bd43b5e52b7fe6ULL);
}

TEST(InverseNormal, AgainstReferenceQuantiles) {
  EXPECT_NEAR(inverse_normal_cdf(0.975) / 1.959963984540054, 1.0, 1.15e-9);
  EXPECT_NEAR(inverse_normal_cdf(1e-10) / -6.361340902404056, 1.0, 1.15e-9);
  EXPECT_NEAR(inverse_normal_cdf(0.3) / -0.5244005127080409, 1.0, 1.15e-9);
  EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
  EXPECT_NEAR(inverse_normal_cdf(0.2), -inverse_normal_cdf(0.8), 1e-9);
}

TEST(InverseNormal, UniformsStayInsideTheOpenInterval) {
  EXPECT_GT(to_open_unit(0), 0.0);
  EXPECT_LT(to_open_unit(~0ULL), 1.0);
  EXPECT_TRUE(std::isfinite(inverse_normal_cdf(to_open_unit(0))));
}

TEST(MonteCarlo, DeterministicLimit) {
  const PowerVarianceModel quiet(0.05, 1e-12, 3.0);
  McConfig cfg;
  cfg.n_paths = 1000;
  cfg.n_steps = 500;
  for (auto scheme : {McScheme::cir_state, McScheme::asset_state}) {
    cfg.scheme = scheme;
    const auto res = monte_carlo_price(quiet, reference_payoff, 0.0, 60.0, 1.0, cfg);
    const double expected = std::exp(-0.05) * reference_payoff(60.0 * std::exp(0.05));
    // Euler drift error is O(r^2 dt T) relative on S_T.
    const double allowed = std::max(3.0 * res.std_error, 1e-4 * expected);
    EXPECT_NEAR(res.mean, expected, allowed);
  }
}

TEST(MonteCarlo, BitIdenticalReruns) {
  McConfig cfg;
  cfg.n_paths = 5000;
  cfg.n_steps = 100;
  const auto a = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
  const auto b = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MonteCarlo, IndependentOfWorkerCount) {
  McConfig cfg;
  cfg.n_paths = 5001;
  cfg.n_steps = 50;
  cfg.n_workers = 1;
  const auto one = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
  for (int w : {2, 3, 7}) {
    cfg.n_workers = w;
    const auto many = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
    EXPECT_EQ(one.mean, many.mean) << w;
    EXPECT_EQ(one.std_error, many.std_error) << w;
  }
}

TEST(MonteCarlo, SeedChangesTheEstimate) {
  McConfig cfg;
  cfg.n_paths = 2000;
  cfg.n_steps = 50;
  const auto a = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
  cfg.seed += 1;
  const auto b = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
  EXPECT_NE(a.mean, b.mean);
  EXPECT_NEAR(a.mean, b.mean, 5.0 * std::hypot(a.std_error, b.std_error));
}

TEST(MonteCarlo, SchemesAgreeWithinNoise) {
  McConfig cfg;
  cfg.n_paths = 20000;
  cfg.n_steps = 200;
  const auto cir = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
  cfg.scheme = McScheme::asset_state;
  const auto asset = monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg);
  EXPECT_NEAR(cir.mean, asset.mean, 4.0 * std::hypot(cir.std_error, asset.std_error));
}

TEST(MonteCarlo, BlowupsAreCountedAsZeroPayoff) {
  const PowerVarianceModel wild(0.05, 3.0, 8.0);
  McConfig cfg;
  cfg.n_paths = 2000;
  cfg.n_steps = 20;
  cfg.scheme = McScheme::asset_state;
  const auto res = monte_carlo_price(wild, reference_payoff, 0.0, 60.0, 1.0, cfg);
  EXPECT_GT(res.blowups, 0);
  EXPECT_TRUE(std::isfinite(res.mean));
  EXPECT_TRUE(std::isfinite(res.std_error));
}

TEST(MonteCarlo, AtMaturityReturnsThePayoff) {
  const auto res = monte_carlo_price(reference_model, reference_payoff, 1.0, 60.0, 1.0, McConfig{});
  EXPECT_EQ(res.mean, reference_payoff(60.0));
  EXPECT_EQ(res.std_error, 0.0);
}

TEST(MonteCarlo, Errors) {
  McConfig cfg;
  EXPECT_EQ(error_code([&] { monte_carlo_price(reference_model, reference_payoff, 0.0, -1.0, 1.0, cfg); }),
            "DOMAIN_ERROR");
  EXPECT_EQ(error_code([&] { monte_carlo_price(reference_model, reference_payoff, 2.0, 60.0, 1.0, cfg); }),
            "T_AFTER_MATURITY");
  cfg.n_paths = 0;
  EXPECT_EQ(error_code([&] { monte_carlo_price(reference_model, reference_payoff, 0.0, 60.0, 1.0, cfg); }),
            "INVALID_CONFIG");
}
