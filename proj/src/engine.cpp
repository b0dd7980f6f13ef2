#include "zll/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "zll/pricing.hpp"

namespace zll::engine {
namespace {

struct QuoteFailure {
  ErrorKind kind;
  std::string message;
};

using QuoteResult = std::variant<Quote, QuoteFailure>;

void check_spot(double spot) {
  if (!(spot > 0.0) || !std::isfinite(spot)) throw_domain("spot must be > 0");
}

void fill_terms(Quote& q, double x_effective) {
  q.strike = q.delta_q_b / q.delta_q_c;
  q.cash_leg = q.delta_q_b - q.delta_q_c * x_effective;
  q.oblivious_put = x_effective;
  q.implied_ltv = pricing::implied_ltv(q.strike, q.spot);
  q.implied_rate_table = pricing::implied_rate_table(x_effective, q.strike);
  q.implied_rate_eq = x_effective < q.strike ? pricing::implied_rate_eq(x_effective, q.strike)
                                             : INFINITY;
}

// Non-throwing core shared by the public quote functions and the feasibility
// probe. Input validation errors still throw.
QuoteResult compute_quote(const PoolState& pool, const MarketParams& params, Side side,
                          double delta_q_c, double spot) {
  check_spot(spot);
  if (!(delta_q_c > 0.0) || !std::isfinite(delta_q_c)) throw_domain("delta_q_c must be > 0");

  Quote q;
  q.side = side;
  q.delta_q_c = delta_q_c;
  q.spot = spot;
  q.tau_years = remaining_tau(pool, params);
  q.pool_revision = pool.revision();
  const double x = pricing::oblivious_put_price(spot, params, q.tau_years);

  if (side == Side::borrow) {
    const double q_b_after = pool.k() / (pool.q_c() + delta_q_c);
    q.delta_q_b = pool.q_b() - q_b_after;
    if (!(q.delta_q_b > 0.0) || !(q.delta_q_b < pool.q_b())) {
      return QuoteFailure{ErrorKind::insufficient_liquidity,
                          "borrow exhausts pool liquidity"};
    }
    fill_terms(q, x * (1.0 + params.s_ask));
  } else {
    if (!(delta_q_c < pool.q_c())) {
      return QuoteFailure{ErrorKind::drains_collateral, "lend drains pool collateral"};
    }
    const double q_b_after = pool.k() / (pool.q_c() - delta_q_c);
    q.delta_q_b = q_b_after - pool.q_b();
    if (!(q.delta_q_b > 0.0) || !std::isfinite(q.delta_q_b)) {
      return QuoteFailure{ErrorKind::drains_collateral, "lend drains pool collateral"};
    }
    fill_terms(q, x * (1.0 - params.s_bid));
  }
  if (!(q.cash_leg > 0.0)) {
    return QuoteFailure{ErrorKind::uneconomic_trade,
                        std::string("uneconomic trade: cash leg ") + std::to_string(q.cash_leg) +
                            " is not positive"};
  }
  return q;
}

Quote unwrap(QuoteResult r) {
  if (auto* f = std::get_if<QuoteFailure>(&r)) throw Error(f->kind, f->message);
  return std::get<Quote>(std::move(r));
}

double post_trade_margin(const PoolState& pool, const Quote& q) {
  const double margin = check_no_shortfall(pool).margin;
  return q.side == Side::borrow ? margin - q.delta_q_b : margin - q.delta_q_c * q.oblivious_put;
}

}  // namespace

double remaining_tau(const PoolState& pool, const MarketParams& params) {
  return std::max(params.term_years - pool.now_years(), 0.0);
}

Quote quote_borrow(const PoolState& pool, const MarketParams& params, double delta_q_c,
                   double spot) {
  return unwrap(compute_quote(pool, params, Side::borrow, delta_q_c, spot));
}

Quote quote_lend(const PoolState& pool, const MarketParams& params, double delta_q_c,
                 double spot) {
  return unwrap(compute_quote(pool, params, Side::lend, delta_q_c, spot));
}

Quote quote(const PoolState& pool, const MarketParams& params, Side side, double delta_q_c,
            double spot) {
  return unwrap(compute_quote(pool, params, side, delta_q_c, spot));
}

Quote solve_lend_for_cash(const PoolState& pool, const MarketParams& params, double cash_paid,
                          double spot) {
  check_spot(spot);
  if (!(cash_paid > 0.0) || !std::isfinite(cash_paid)) throw_domain("cash_paid must be > 0");

  const double x_bid =
      pricing::oblivious_put_price(spot, params, remaining_tau(pool, params)) *
      (1.0 - params.s_bid);
  // Raw cash leg without the economic check, so the bracket can start at 0.
  auto cash_at = [&](double d) { return pool.k() / (pool.q_c() - d) - pool.q_b() - d * x_bid; };

  constexpr double kCashTolerance = 1e-6;
  double lo = 0.0;
  double hi = pool.q_c();
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 400; ++i) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double residual = cash_at(mid) - cash_paid;
    if (std::abs(residual) <= kCashTolerance) break;
    (residual < 0.0 ? lo : hi) = mid;
  }
  if (!(mid > 0.0 && mid < pool.q_c()) || std::abs(cash_at(mid) - cash_paid) > kCashTolerance) {
    throw Error(ErrorKind::no_solution,
                "no lend size pays " + std::to_string(cash_paid) + " in cash");
  }
  return quote_lend(pool, params, mid, spot);
}

ShortfallCheck check_no_shortfall(const PoolState& pool) {
  double worst_case_payout = 0.0;
  for (const auto& p : pool.lend_positions()) worst_case_payout += p.delta_q_c * p.x_effective;
  double available = pool.q_b_initial();
  for (const auto& p : pool.borrow_positions()) available -= p.delta_q_b;
  return {worst_case_payout < available, available - worst_case_payout};
}

Position execute(PoolState& pool, const Quote& quote) {
  if (!(quote.delta_q_c > 0.0) || !std::isfinite(quote.delta_q_c)) {
    throw_domain("cannot execute a quote with delta_q_c <= 0");
  }
  if (quote.pool_revision != pool.revision()) {
    throw Error(ErrorKind::stale_quote, "quote was priced against an older pool state");
  }

  const bool borrow = quote.side == Side::borrow;
  const double q_c_after = borrow ? pool.q_c_ + quote.delta_q_c : pool.q_c_ - quote.delta_q_c;
  if (!(q_c_after > 0.0)) throw Error(ErrorKind::drains_collateral, "lend drains pool collateral");
  const double q_b_after = pool.k_ / q_c_after;
  const double expected_delta_b = borrow ? pool.q_b_ - q_b_after : q_b_after - pool.q_b_;
  if (std::abs(expected_delta_b - quote.delta_q_b) >
      kInvariantTolerance * std::max(std::abs(expected_delta_b), 1.0)) {
    throw Error(ErrorKind::stale_quote, "quote does not match the current pool curve");
  }

  const double margin = post_trade_margin(pool, quote);
  if (!(margin > 0.0)) {
    throw ShortfallError("trade violates the no-shortfall condition (margin " +
                             std::to_string(margin) + ")",
                         margin);
  }

  Position pos{quote.side,    quote.delta_q_c,     quote.delta_q_b, quote.strike,
               quote.cash_leg, quote.oblivious_put, pool.now_years_};
  pool.q_c_ = q_c_after;
  pool.q_b_ = q_b_after;
  (borrow ? pool.borrows_ : pool.lends_).push_back(pos);
  ++pool.revision_;
  return pos;
}

bool is_feasible(const PoolState& pool, const MarketParams& params, Side side,
                 double delta_q_c, double spot) {
  if (!(delta_q_c > 0.0)) return false;
  const QuoteResult r = compute_quote(pool, params, side, delta_q_c, spot);
  const auto* q = std::get_if<Quote>(&r);
  return q != nullptr && post_trade_margin(pool, *q) > 0.0;
}

double cash_reserve(const PoolState& pool) {
  double cash = pool.q_b_initial();
  for (const auto& p : pool.borrow_positions()) cash -= p.cash_leg;
  for (const auto& p : pool.lend_positions()) cash += p.cash_leg;
  return cash;
}

double collateral_reserve(const PoolState& pool) {
  double collateral = pool.q_c_initial();
  for (const auto& p : pool.borrow_positions()) collateral += p.delta_q_c;
  return collateral;
}

SettlementReport settle_expiry(const PoolState& pool, const MarketParams& params,
                               double spot_at_expiry) {
  check_spot(spot_at_expiry);
  if (pool.now_years() < params.term_years) {
    throw Error(ErrorKind::not_expired, "market has not reached expiry yet");
  }

  SettlementReport report;
  report.spot_at_expiry = spot_at_expiry;
  report.cash_before = cash_reserve(pool);
  report.collateral_before = collateral_reserve(pool);
  report.final_cash = report.cash_before;
  report.final_collateral = report.collateral_before;

  auto settle = [&](const Position& p, std::size_t index) {
    SettlementFlow f{p.side, index, p.strike, p.delta_q_c, p.delta_q_b};
    // Ties go to collateral delivery.
    f.exercised = spot_at_expiry > p.strike;
    if (p.side == Side::borrow) {
      if (f.exercised) {
        f.holder_cash = -p.delta_q_b;
        f.holder_collateral = p.delta_q_c;
      }
    } else if (f.exercised) {
      f.holder_cash = p.delta_q_b;
    } else {
      f.holder_collateral = p.delta_q_c;
    }
    report.final_cash -= f.holder_cash;
    report.final_collateral -= f.holder_collateral;
    report.flows.push_back(f);
  };
  for (std::size_t i = 0; i < pool.borrow_positions().size(); ++i) {
    settle(pool.borrow_positions()[i], i);
  }
  for (std::size_t i = 0; i < pool.lend_positions().size(); ++i) {
    settle(pool.lend_positions()[i], i);
  }
  report.final_value = report.final_cash + report.final_collateral * spot_at_expiry;
  return report;
}

}  // namespace zll::engine
