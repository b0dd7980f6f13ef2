#include "zll/arbitrage.hpp"

#include <cmath>

#include "zll/engine.hpp"
#include "zll/pricing.hpp"

namespace zll::arbitrage {
namespace {

// C(K) - S + K. Evaluated as the parity-equivalent zero-rate put, which avoids
// the cancellation in C - S + K when K << S.
double implied_put(double spot, double strike, const MarketParams& params, double tau) {
  return pricing::bs_put(spot, strike, params.sigma, tau);
}

double threshold(const MarketParams& params, double x, Side side) {
  return side == Side::borrow ? x * (1.0 + params.s_ask) : x * (1.0 - params.s_bid);
}

}  // namespace

Signal arb_signal(const PoolState& pool, const MarketParams& params, double spot,
                  double tau_years, Side side) {
  const double x = pricing::oblivious_put_price(spot, params, tau_years);
  Signal s;
  s.strike = pool.marginal_strike();
  s.lhs = implied_put(spot, s.strike, params, tau_years);
  s.threshold = threshold(params, x, side);
  s.edge = s.lhs - s.threshold;
  s.active = side == Side::borrow ? s.lhs > s.threshold : s.lhs < s.threshold;
  return s;
}

Signal borrower_arb_signal(const PoolState& pool, const MarketParams& params, double spot,
                           double tau_years) {
  return arb_signal(pool, params, spot, tau_years, Side::borrow);
}

Signal lender_arb_signal(const PoolState& pool, const MarketParams& params, double spot,
                         double tau_years) {
  return arb_signal(pool, params, spot, tau_years, Side::lend);
}

EquilibriumTrade find_equilibrium_trade(const PoolState& pool, const MarketParams& params,
                                        double spot, double tau_years, Side side) {
  const Signal signal = arb_signal(pool, params, spot, tau_years, side);
  if (!signal.active) {
    throw Error(ErrorKind::signal_inactive,
                std::string(to_string(side)) + " arbitrage signal is not active");
  }

  const bool borrow = side == Side::borrow;
  const double q_c = pool.q_c();
  const double k = pool.k();
  const double thr = signal.threshold;
  const double tol = kSizeTolerance * q_c;

  auto edge_after = [&](double d) {
    const double q = borrow ? q_c + d : q_c - d;
    return implied_put(spot, k / (q * q), params, tau_years) - thr;
  };
  // Positive while the signal would still be active after trading d.
  auto still_active = [&](double d) { return borrow ? edge_after(d) > 0.0 : edge_after(d) < 0.0; };
  auto feasible = [&](double d) { return engine::is_feasible(pool, params, side, d, spot); };

  EquilibriumTrade out;
  out.side = side;
  auto finish = [&](double d, bool constrained) {
    out.delta_q_c = d;
    out.constrained = constrained;
    out.residual_edge = d > 0.0 ? edge_after(d) : signal.edge;
    return out;
  };

  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  if (borrow) {
    // Borrow sizes are unbounded in principle; expand until the edge flips
    // or a cap is hit.
    hi = q_c;
    for (int i = 0; i < kMaxBisectionIterations; ++i) {
      ++out.iterations;
      if (!feasible(hi)) break;
      if (!still_active(hi)) {
        bracketed = true;
        break;
      }
      lo = hi;
      hi *= 2.0;
    }
    if (!bracketed && feasible(hi)) return finish(hi, true);
  } else {
    hi = q_c * (1.0 - 1e-12);
    bracketed = feasible(hi) && !still_active(hi);
  }

  if (!bracketed) {
    // hi is infeasible: find the largest feasible size above lo.
    double good = lo;
    double bad = hi;
    for (int i = 0; i < kMaxBisectionIterations && bad - good > tol; ++i) {
      ++out.iterations;
      const double mid = 0.5 * (good + bad);
      (feasible(mid) ? good : bad) = mid;
    }
    if (good <= 0.0 || still_active(good)) return finish(good, true);
    hi = good;
  }

  for (int i = 0; i < kMaxBisectionIterations && hi - lo > tol; ++i) {
    ++out.iterations;
    const double mid = 0.5 * (lo + hi);
    (still_active(mid) ? lo : hi) = mid;
  }
  return finish(hi, false);
}

double flash_borrow_arb_profit(double spot, double upfront_cash, double market_call_price) {
  if (!(spot >= 0.0) || !(upfront_cash >= 0.0) || !(market_call_price >= 0.0)) {
    throw_domain("arbitrage inputs must be >= 0");
  }
  return upfront_cash + market_call_price - spot;
}

double lender_arb_profit(double borrowed, double lent, double put_premium) {
  if (!(borrowed >= 0.0) || !(lent >= 0.0) || !(put_premium >= 0.0)) {
    throw_domain("arbitrage inputs must be >= 0");
  }
  return borrowed - lent - put_premium;
}

}  // namespace zll::arbitrage
