#include "zll/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace zll::pricing {
namespace {

constexpr double kAtmPutFactor = 0.4;  // ~ 1/sqrt(2*pi)

void check_bs_inputs(double spot, double strike, double sigma, double tau) {
  if (!(spot > 0.0) || !std::isfinite(spot)) throw_domain("spot must be > 0");
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw_domain("strike must be >= 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw_domain("sigma must be >= 0");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw_domain("tau must be >= 0");
}

struct D12 {
  double d1;
  double d2;
};

D12 d_terms(double spot, double strike, double vol_sqrt_t) {
  const double d1 = (std::log(spot / strike) + 0.5 * vol_sqrt_t * vol_sqrt_t) / vol_sqrt_t;
  return {d1, d1 - vol_sqrt_t};
}

}  // namespace

double normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double oblivious_put_price(double spot, double alpha, double sigma, double tau_years) {
  if (!(spot > 0.0) || !std::isfinite(spot)) throw_domain("spot must be > 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw_domain("alpha must be >= 0");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw_domain("sigma must be >= 0");
  if (!(tau_years >= 0.0) || !std::isfinite(tau_years)) throw_domain("tau must be >= 0");
  return alpha * kAtmPutFactor * spot * sigma * std::sqrt(tau_years);
}

double oblivious_put_price(double spot, const MarketParams& params, double tau_years) {
  return oblivious_put_price(spot, params.alpha, params.sigma, tau_years);
}

double bs_call(double spot, double strike, double sigma, double tau_years) {
  check_bs_inputs(spot, strike, sigma, tau_years);
  if (strike == 0.0) return spot;
  const double vol_sqrt_t = sigma * std::sqrt(tau_years);
  if (vol_sqrt_t == 0.0) return std::max(spot - strike, 0.0);
  const auto [d1, d2] = d_terms(spot, strike, vol_sqrt_t);
  const double call = spot * normal_cdf(d1) - strike * normal_cdf(d2);
  return std::clamp(call, std::max(spot - strike, 0.0), spot);
}

double bs_put(double spot, double strike, double sigma, double tau_years) {
  check_bs_inputs(spot, strike, sigma, tau_years);
  if (strike == 0.0) return 0.0;
  const double vol_sqrt_t = sigma * std::sqrt(tau_years);
  if (vol_sqrt_t == 0.0) return std::max(strike - spot, 0.0);
  const auto [d1, d2] = d_terms(spot, strike, vol_sqrt_t);
  const double put = strike * normal_cdf(-d2) - spot * normal_cdf(-d1);
  return std::clamp(put, std::max(strike - spot, 0.0), strike);
}

OptionQuote bs_quote(double spot, double strike, double sigma, double tau_years) {
  return {bs_call(spot, strike, sigma, tau_years), bs_put(spot, strike, sigma, tau_years),
          spot, strike, tau_years};
}

double implied_rate_eq(double x, double strike) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw_domain("x must be >= 0");
  if (!(x < strike) || !std::isfinite(strike)) {
    throw_domain("implied rate undefined for x >= strike");
  }
  return x / (strike - x);
}

double implied_rate_table(double x, double strike) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw_domain("x must be >= 0");
  if (!(strike > 0.0) || !std::isfinite(strike)) throw_domain("strike must be > 0");
  return x / strike;
}

double implied_ltv(double strike, double spot) {
  if (!(spot > 0.0) || !std::isfinite(spot)) throw_domain("spot must be > 0");
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw_domain("strike must be >= 0");
  return strike / spot;
}

}  // namespace zll::pricing
