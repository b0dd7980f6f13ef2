#pragma once

#include <cstddef>

#include "zll/core.hpp"

// Closed-form payoffs at expiry, per collateral unit unless noted.
namespace zll::payoffs {

/// PnL of a zero-liquidation borrower who pledged one unit worth s_0, received
/// cash_received, and may reclaim the unit for strike:
///   max(s_t, strike) - strike - (s_0 - cash_received)
double borrower_pnl(double s_t, double strike, double cash_received, double s_0);

/// Pro-rata PnL of a liquidity provider holding `share` of a pool that paid
/// cash_out_per_unit on delta_q_c units and is repaid min(s_t, strike).
double lp_pnl(double s_t, double strike, double cash_out_per_unit, double share,
              double delta_q_c);

/// min(s_t, strike): what the lender side receives per unit at expiry.
double repayment_value(double s_t, double strike);

struct LiquidationOutcome {
  double final_collateral = 0.0;
  double fees_paid = 0.0;
  double payoff = 0.0;          // collateral * final price + surplus cash - remaining loan
  double remaining_loan = 0.0;
  double surplus_cash = 0.0;    // proceeds beyond the outstanding loan
  std::size_t liquidations = 0;
};

/// Stylized liquidating loan, monitored at the path's sample points only.
/// Whenever loan / (collateral * price) >= ltv_threshold, the fraction
/// liquidation_fraction of the remaining collateral is sold at that price and
/// the proceeds net of penalty * proceeds pay down the loan. The check repeats
/// at the same point until the position is healthy again or a further
/// liquidation would not lower the LTV.
LiquidationOutcome liquidating_loan_path_payoff(const PriceSeries& path, double loan,
                                                double ltv_threshold, double penalty,
                                                double liquidation_fraction,
                                                double collateral = 1.0);

}  // namespace zll::payoffs
