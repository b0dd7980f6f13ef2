#pragma once

#include "zll/core.hpp"

namespace zll::arbitrage {

/// Arbitrage inequality evaluated at the marginal strike K = k / q_c^2 against
/// a zero-rate Black-Scholes option market:
///   lhs = C(K) - spot + K        (the put value implied by parity)
///   borrower threshold = X * (1 + s_ask), active iff lhs > threshold
///   lender threshold   = X * (1 - s_bid), active iff lhs < threshold
/// edge is lhs - threshold for both sides.
struct Signal {
  bool active = false;
  double edge = 0.0;
  double strike = 0.0;
  double lhs = 0.0;
  double threshold = 0.0;
};

Signal borrower_arb_signal(const PoolState& pool, const MarketParams& params, double spot,
                           double tau_years);
Signal lender_arb_signal(const PoolState& pool, const MarketParams& params, double spot,
                         double tau_years);
Signal arb_signal(const PoolState& pool, const MarketParams& params, double spot,
                  double tau_years, Side side);

struct EquilibriumTrade {
  Side side = Side::borrow;
  double delta_q_c = 0.0;
  bool constrained = false;  // a liquidity / economics / no-shortfall cap bound the size
  double residual_edge = 0.0;  // post-trade marginal edge of the same side
  int iterations = 0;
};

inline constexpr int kMaxBisectionIterations = 200;
inline constexpr double kSizeTolerance = 1e-9;  // relative to q_c

/// Sizes the trade that pushes the marginal edge of `side` back to zero.
///
/// The post-trade edge is monotone in the trade size (borrowing lowers the
/// marginal strike and the implied put, lending raises both), so the size is
/// found by bisection. The returned size always sits on the side where the
/// signal is no longer active, unless a feasibility cap binds first, in which
/// case the largest feasible size is returned with constrained = true.
///
/// Throws signal_inactive if the signal is not active at the current state.
EquilibriumTrade find_equilibrium_trade(const PoolState& pool, const MarketParams& params,
                                        double spot, double tau_years, Side side);

/// Upfront cash plus call premium received, minus the spot paid for the collateral.
double flash_borrow_arb_profit(double spot, double upfront_cash, double market_call_price);

/// Amount borrowed elsewhere, minus the amount lent to the pool and the put premium.
double lender_arb_profit(double borrowed, double lent, double put_premium);

}  // namespace zll::arbitrage
