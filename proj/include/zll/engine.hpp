#pragma once

#include <vector>

#include "zll/core.hpp"

// The pool state machine: quoting, execution, solvency and expiry settlement.
namespace zll::engine {

/// Time to maturity left in the market, clamped at zero.
double remaining_tau(const PoolState& pool, const MarketParams& params);

/// Borrower pledges delta_q_c collateral. The pool gives up
/// delta_q_b = q_b - k / (q_c + delta_q_c) of virtual liquidity, the strike is
/// delta_q_b / delta_q_c, and the borrower is paid delta_q_b minus the
/// ask-adjusted oblivious put on every pledged unit.
///
/// Throws insufficient_liquidity if delta_q_b would exhaust q_b and
/// uneconomic_trade if the cash leg is not positive.
Quote quote_borrow(const PoolState& pool, const MarketParams& params, double delta_q_c,
                   double spot);

/// Lender takes delta_q_c collateral units of exposure out of the pool. The
/// pool promises delta_q_b = k / (q_c - delta_q_c) - q_b at expiry and the
/// lender pays delta_q_b minus the bid-adjusted oblivious put per unit.
///
/// Throws drains_collateral if delta_q_c >= q_c and uneconomic_trade if the
/// cash leg is not positive.
Quote quote_lend(const PoolState& pool, const MarketParams& params, double delta_q_c,
                 double spot);

/// Inverts quote_lend for a target cash payment by bisection on delta_q_c.
Quote solve_lend_for_cash(const PoolState& pool, const MarketParams& params, double cash_paid,
                          double spot);

/// Side-dispatching wrapper over quote_borrow / quote_lend.
Quote quote(const PoolState& pool, const MarketParams& params, Side side, double delta_q_c,
            double spot);

struct ShortfallCheck {
  bool holds = true;
  double margin = 0.0;  // available liquidity minus worst-case payout
};

/// Solvency test: sum over lends of delta_q_c * x_effective must stay strictly
/// below q_b_initial minus the sum of borrow repayment amounts.
ShortfallCheck check_no_shortfall(const PoolState& pool);

/// Applies a quote. Rejects stale quotes (pool revision moved) and trades
/// that would violate the no-shortfall condition (ShortfallError).
Position execute(PoolState& pool, const Quote& quote);

/// Non-throwing feasibility probe used by the arbitrage sizing: true iff a
/// quote for this size exists and executing it keeps no-shortfall.
bool is_feasible(const PoolState& pool, const MarketParams& params, Side side,
                 double delta_q_c, double spot);

/// Physical holdings of the pool, as opposed to the virtual q_c / q_b that
/// drive pricing. Cash starts at q_b_initial and moves by the cash legs;
/// collateral starts at the initial q_c and grows with pledged collateral.
/// Lend positions are cash-for-claim and do not move collateral until expiry.
double cash_reserve(const PoolState& pool);
double collateral_reserve(const PoolState& pool);

struct SettlementFlow {
  Side side = Side::borrow;
  std::size_t index = 0;   // position index within its list
  double strike = 0.0;
  double delta_q_c = 0.0;
  double delta_q_b = 0.0;
  bool exercised = false;  // borrow: repaid; lend: pool paid cash
  // Flows to the position holder; the pool receives exactly the negation.
  double holder_cash = 0.0;
  double holder_collateral = 0.0;

  bool operator==(const SettlementFlow&) const = default;
};

struct SettlementReport {
  double spot_at_expiry = 0.0;
  std::vector<SettlementFlow> flows;
  double cash_before = 0.0;
  double collateral_before = 0.0;
  double final_cash = 0.0;
  double final_collateral = 0.0;
  double final_value = 0.0;  // final_cash + final_collateral * spot_at_expiry

  bool operator==(const SettlementReport&) const = default;
};

/// Settles every open position at spot_at_expiry. A borrower repays only when
/// spot_at_expiry > strike; the pool pays a lender cash only in that case too.
/// At spot == strike collateral changes hands. Requires now >= term.
SettlementReport settle_expiry(const PoolState& pool, const MarketParams& params,
                               double spot_at_expiry);

}  // namespace zll::engine
