#pragma once

#include "zll/core.hpp"

// Option pricing kernel. All prices are per collateral unit in borrow
// currency; the risk-free rate is zero throughout.
namespace zll::pricing {

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// The oblivious put X = alpha * 0.4 * spot * sigma * sqrt(tau): a fraction
/// alpha of the closed-form ATM put approximation.
double oblivious_put_price(double spot, double alpha, double sigma, double tau_years);
double oblivious_put_price(double spot, const MarketParams& params, double tau_years);

/// Zero-rate Black-Scholes. At tau == 0 or sigma == 0 these return intrinsic
/// value; at strike == 0 the call is worth spot and the put nothing.
double bs_call(double spot, double strike, double sigma, double tau_years);
double bs_put(double spot, double strike, double sigma, double tau_years);

OptionQuote bs_quote(double spot, double strike, double sigma, double tau_years);

/// R = x / (strike - x), the maximum borrowing rate implied by paying x on a
/// loan of strike - x. Requires 0 <= x < strike.
double implied_rate_eq(double x, double strike);

/// x / strike, the rate convention used when tabulating loan terms.
double implied_rate_table(double x, double strike);

/// strike / spot.
double implied_ltv(double strike, double spot);

}  // namespace zll::pricing
