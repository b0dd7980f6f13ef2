#include "zll/core.hpp"

#include <cmath>
#include <utility>

namespace zll {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::uneconomic_trade: return "uneconomic_trade";
    case ErrorKind::insufficient_liquidity: return "insufficient_liquidity";
    case ErrorKind::drains_collateral: return "drains_collateral";
    case ErrorKind::no_solution: return "no_solution";
    case ErrorKind::stale_quote: return "stale_quote";
    case ErrorKind::shortfall: return "shortfall";
    case ErrorKind::not_expired: return "not_expired";
    case ErrorKind::signal_inactive: return "signal_inactive";
    case ErrorKind::parse: return "parse";
    case ErrorKind::coverage: return "coverage";
  }
  return "unknown";
}

const char* to_string(Side side) noexcept {
  return side == Side::borrow ? "borrow" : "lend";
}

void MarketParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(alpha) || alpha < 0.0 || alpha > 1.0) throw_domain("alpha must lie in [0, 1]");
  if (!finite(sigma) || sigma < 0.0) throw_domain("sigma must be >= 0");
  if (!finite(s_bid) || s_bid < 0.0) throw_domain("s_bid must be >= 0");
  if (!finite(s_ask) || s_ask < 0.0) throw_domain("s_ask must be >= 0");
  if (!finite(term_years) || term_years <= 0.0) throw_domain("term_years must be > 0");
}

PoolState PoolState::create(double q_c, double q_b) {
  if (!std::isfinite(q_c) || q_c <= 0.0) throw_domain("q_c must be > 0");
  if (!std::isfinite(q_b) || q_b <= 0.0) throw_domain("q_b must be > 0");
  PoolState pool;
  pool.q_c_ = q_c;
  pool.q_b_ = q_b;
  pool.k_ = q_c * q_b;
  pool.q_b_initial_ = q_b;
  return pool;
}

PoolState PoolState::restore(double q_c, double q_b, double k, double q_b_initial,
                             double now_years, std::vector<Position> borrow_positions,
                             std::vector<Position> lend_positions, std::uint64_t revision) {
  if (!std::isfinite(q_c) || q_c <= 0.0) throw_domain("q_c must be > 0");
  if (!std::isfinite(q_b) || q_b <= 0.0) throw_domain("q_b must be > 0");
  if (!std::isfinite(k) || k <= 0.0) throw_domain("k must be > 0");
  if (!std::isfinite(q_b_initial) || q_b_initial <= 0.0) throw_domain("q_b_initial must be > 0");
  if (!std::isfinite(now_years) || now_years < 0.0) throw_domain("now_years must be >= 0");
  if (std::abs(q_c * q_b - k) > kInvariantTolerance * k) {
    throw_domain("snapshot violates q_c * q_b == k");
  }
  for (const auto& p : borrow_positions) {
    if (p.side != Side::borrow) throw_domain("lend position in borrow list");
  }
  for (const auto& p : lend_positions) {
    if (p.side != Side::lend) throw_domain("borrow position in lend list");
  }
  PoolState pool;
  pool.q_c_ = q_c;
  pool.q_b_ = q_b;
  pool.k_ = k;
  pool.q_b_initial_ = q_b_initial;
  pool.now_years_ = now_years;
  pool.revision_ = revision;
  pool.borrows_ = std::move(borrow_positions);
  pool.lends_ = std::move(lend_positions);
  return pool;
}

void PoolState::advance_to(double now_years) {
  if (!std::isfinite(now_years) || now_years < now_years_) {
    throw_domain("pool clock cannot move backwards");
  }
  if (now_years != now_years_) {
    now_years_ = now_years;
    ++revision_;
  }
}

}  // namespace zll
