#include "zll/payoffs.hpp"

#include <algorithm>
#include <cmath>

namespace zll::payoffs {
namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw_domain(std::string(name) + " must be >= 0");
}

}  // namespace

double borrower_pnl(double s_t, double strike, double cash_received, double s_0) {
  require_nonnegative(s_t, "s_t");
  require_nonnegative(strike, "strike");
  require_nonnegative(cash_received, "cash_received");
  require_nonnegative(s_0, "s_0");
  return std::max(s_t, strike) - strike - (s_0 - cash_received);
}

double lp_pnl(double s_t, double strike, double cash_out_per_unit, double share,
              double delta_q_c) {
  require_nonnegative(s_t, "s_t");
  require_nonnegative(strike, "strike");
  require_nonnegative(cash_out_per_unit, "cash_out_per_unit");
  require_nonnegative(delta_q_c, "delta_q_c");
  if (!(share >= 0.0 && share <= 1.0)) throw_domain("share must lie in [0, 1]");
  return share * delta_q_c * (std::min(s_t, strike) - cash_out_per_unit);
}

double repayment_value(double s_t, double strike) {
  require_nonnegative(s_t, "s_t");
  require_nonnegative(strike, "strike");
  return std::min(s_t, strike);
}

LiquidationOutcome liquidating_loan_path_payoff(const PriceSeries& path, double loan,
                                                double ltv_threshold, double penalty,
                                                double liquidation_fraction,
                                                double collateral) {
  if (path.empty()) throw_domain("price path is empty");
  require_nonnegative(loan, "loan");
  require_nonnegative(penalty, "penalty");
  require_nonnegative(collateral, "collateral");
  if (!(ltv_threshold > 0.0 && ltv_threshold <= 1.0)) {
    throw_domain("ltv_threshold must lie in (0, 1]");
  }
  if (!(liquidation_fraction >= 0.0 && liquidation_fraction <= 1.0)) {
    throw_domain("liquidation_fraction must lie in [0, 1]");
  }

  LiquidationOutcome out;
  out.final_collateral = collateral;
  out.remaining_loan = loan;
  if (liquidation_fraction == 0.0) {
    out.payoff = collateral * path.back().price - loan;
    return out;
  }

  for (const auto& point : path) {
    const double price = point.price;
    if (!(price > 0.0)) throw_domain("path prices must be > 0");
    while (out.remaining_loan > 0.0 && out.final_collateral > 0.0) {
      const double ltv = out.remaining_loan / (out.final_collateral * price);
      if (ltv < ltv_threshold) break;

      const double sold = liquidation_fraction * out.final_collateral;
      const double proceeds = sold * price;
      const double fee = penalty * proceeds;
      const double net = proceeds - fee;
      const double loan_after = std::max(out.remaining_loan - net, 0.0);
      const double collateral_after = out.final_collateral - sold;
      const bool improves = collateral_after <= 0.0 || loan_after <= 0.0 ||
                            loan_after / (collateral_after * price) < ltv;

      out.surplus_cash += std::max(net - out.remaining_loan, 0.0);
      out.remaining_loan = loan_after;
      out.final_collateral = collateral_after;
      out.fees_paid += fee;
      ++out.liquidations;
      if (!improves) break;
    }
  }
  out.payoff = out.final_collateral * path.back().price + out.surplus_cash - out.remaining_loan;
  return out;
}

}  // namespace zll::payoffs
