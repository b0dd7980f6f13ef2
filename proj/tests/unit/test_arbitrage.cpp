#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zll/arbitrage.hpp"
#include "zll/engine.hpp"
#include "zll/pricing.hpp"

using namespace zll;
using namespace zll::arbitrage;

namespace {

MarketParams params_with(double alpha, double s_bid = 0.0, double s_ask = 0.0) {
  MarketParams p;
  p.alpha = alpha;
  p.sigma = 1.0;
  p.s_bid = s_bid;
  p.s_ask = s_ask;
  p.term_years = 1.0;
  return p;
}

PoolState example_pool() { return PoolState::create(30.0, 100000.0); }

}  // namespace

TEST(Signals, ExampleMarketAtMarginalStrike) {
  const auto pool = example_pool();
  const auto params = params_with(0.5);
  const Signal b = borrower_arb_signal(pool, params, 4000.0, 1.0);
  const double strike = 3e6 / 900.0;
  const double call = oracle::call_by_quadrature(4000.0, strike, 1.0, 1.0);
  const double lhs = call - 4000.0 + strike;
  EXPECT_NEAR(b.strike, strike, 1e-9);
  EXPECT_NEAR(b.lhs, lhs, 1e-6 * 4000.0);
  EXPECT_NEAR(b.lhs, 1092.05, 0.01);
  EXPECT_EQ(b.threshold, 800.0);
  EXPECT_EQ(b.active, lhs > 800.0);
  EXPECT_TRUE(b.active);
  EXPECT_NEAR(b.edge, lhs - 800.0, 1e-6 * 4000.0);
  EXPECT_FALSE(lender_arb_signal(pool, params, 4000.0, 1.0).active);
}

TEST(Signals, LargePutDisablesBorrower) {
  auto params = params_with(1.0);
  params.sigma = 100.0;  // X = 160000 > any put on K = 3333
  EXPECT_FALSE(borrower_arb_signal(example_pool(), params, 4000.0, 1.0).active);
}

TEST(Signals, ZeroStrikeLimitDisablesBorrower) {
  const auto pool = PoolState::create(1e6, 1e-3);  // marginal strike 1e-9
  const Signal s = borrower_arb_signal(pool, params_with(0.5), 4000.0, 1.0);
  EXPECT_NEAR(s.lhs, 0.0, 1e-9);
  EXPECT_FALSE(s.active);
}

TEST(Signals, FullBidSpreadDisablesLender) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto pool = PoolState::create(1.0 + 100.0 * u(rng), 1e3 + 1e6 * u(rng));
    const double spot = pool.marginal_strike() * (0.2 + 4.0 * u(rng));
    EXPECT_FALSE(lender_arb_signal(pool, params_with(u(rng), 1.0), spot, u(rng)).active);
  }
}

TEST(Signals, EqualityIsInactiveOnBothSides) {
  // sigma = 0 gives X = 0 and, with K < S, a put worth exactly 0.
  auto params = params_with(0.5);
  params.sigma = 0.0;
  const auto pool = example_pool();
  const Signal b = borrower_arb_signal(pool, params, 4000.0, 1.0);
  const Signal l = lender_arb_signal(pool, params, 4000.0, 1.0);
  EXPECT_EQ(b.lhs, b.threshold);
  EXPECT_FALSE(b.active);
  EXPECT_FALSE(l.active);
}

TEST(Signals, NeverBothActive) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const auto pool = PoolState::create(1.0 + 100.0 * u(rng), 1e3 + 1e6 * u(rng));
    const double spot = pool.marginal_strike() * (0.2 + 4.0 * u(rng));
    const auto params = params_with(u(rng), u(rng), u(rng));
    const double tau = u(rng);
    EXPECT_FALSE(borrower_arb_signal(pool, params, spot, tau).active &&
                 lender_arb_signal(pool, params, spot, tau).active);
  }
}

TEST(Equilibrium, InactiveSignalThrows) {
  try {
    find_equilibrium_trade(example_pool(), params_with(0.5), 4000.0, 1.0, Side::lend);
    FAIL() << "expected signal_inactive";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::signal_inactive);
  }
}

TEST(Equilibrium, BorrowSizeMatchesGridSearch) {
  const auto pool = example_pool();
  const auto params = params_with(0.5);
  const auto trade = find_equilibrium_trade(pool, params, 4000.0, 1.0, Side::borrow);
  EXPECT_FALSE(trade.constrained);
  const double h = 1e-6 * pool.q_c();
  const double grid = oracle::first_inactive_on_grid(
      [&](double d) {
        const double q = 30.0 + d;
        return oracle::put_closed_form(4000.0, 3e6 / (q * q), 1.0, 1.0) > 800.0;
      },
      h, 100.0);
  ASSERT_GT(grid, 0.0);
  EXPECT_LE(std::abs(trade.delta_q_c - grid), h);
}

TEST(Equilibrium, LendSizeMatchesGridSearch) {
  const auto pool = example_pool();
  const auto params = params_with(0.5);
  const double spot = 6000.0;
  ASSERT_TRUE(lender_arb_signal(pool, params, spot, 1.0).active);
  const auto trade = find_equilibrium_trade(pool, params, spot, 1.0, Side::lend);
  EXPECT_FALSE(trade.constrained);
  const double x = pricing::oblivious_put_price(spot, params, 1.0);
  const double h = 1e-6 * pool.q_c();
  const double grid = oracle::first_inactive_on_grid(
      [&](double d) {
        const double q = 30.0 - d;
        return oracle::put_closed_form(spot, 3e6 / (q * q), 1.0, 1.0) < x;
      },
      h, 30.0);
  ASSERT_GT(grid, 0.0);
  EXPECT_LE(std::abs(trade.delta_q_c - grid), h);
}

TEST(Equilibrium, PostTradeStateIsAtTheBoundary) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const auto params = params_with(0.2 + 0.8 * u(rng), 0.5 * u(rng) + 1e-3, 0.5 * u(rng));
    auto pool = PoolState::create(5.0 + 50.0 * u(rng), 1e4 + 1e6 * u(rng));
    const double spot = pool.marginal_strike() * (0.5 + 1.5 * u(rng));
    const double tau = 0.05 + u(rng);
    for (const Side side : {Side::borrow, Side::lend}) {
      if (!arb_signal(pool, params, spot, tau, side).active) continue;
      const auto trade = find_equilibrium_trade(pool, params, spot, tau, side);
      ASSERT_TRUE(engine::is_feasible(pool, params, side, trade.delta_q_c, spot));
      const double rate_before = pricing::oblivious_put_price(spot, params, tau) /
                                 pool.marginal_strike();
      auto after = pool;
      engine::execute(after, engine::quote(after, params, side, trade.delta_q_c, spot));
      const double rate_after = pricing::oblivious_put_price(spot, params, tau) /
                                after.marginal_strike();
      if (side == Side::borrow) {
        EXPECT_GT(rate_after, rate_before);
      } else {
        EXPECT_LT(rate_after, rate_before);
      }
      if (trade.constrained) continue;
      ++checked;
      const Signal post = arb_signal(after, params, spot, tau, side);
      EXPECT_FALSE(post.active);
      EXPECT_LE(std::abs(post.edge), 1e-6 * spot);
      const Side other = side == Side::borrow ? Side::lend : Side::borrow;
      EXPECT_FALSE(arb_signal(after, params, spot, tau, other).active);
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Walkthroughs, FlashBorrowAndLender) {
  EXPECT_EQ(flash_borrow_arb_profit(4140.0, 1900.0, 2450.0), 210.0);
  EXPECT_EQ(flash_borrow_arb_profit(4000.0, 0.0, 0.0), -4000.0);
  EXPECT_EQ(lender_arb_profit(1920.0, 1900.0, 10.0), 10.0);
  EXPECT_EQ(lender_arb_profit(1900.0, 1900.0, 0.0), 0.0);
  EXPECT_EQ(lender_arb_profit(1920.0, 1900.0, 30.0), -10.0);
  EXPECT_THROW(lender_arb_profit(-1.0, 0.0, 0.0), Error);
  EXPECT_THROW(flash_borrow_arb_profit(1.0, -1.0, 0.0), Error);
}

TEST(Walkthroughs, ParityBreakEven) {
  // Upfront cash K - X with C - S + K = X leaves no profit.
  const double s = 4000.0, k = 3000.0;
  const double c = pricing::bs_call(s, k, 1.0, 1.0);
  const double x = c - s + k;
  EXPECT_NEAR(flash_borrow_arb_profit(s, k - x, c), 0.0, 1e-9);
}
