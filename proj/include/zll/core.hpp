#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zll/error.hpp"

namespace zll {

enum class Side { borrow, lend };

const char* to_string(Side side) noexcept;

inline constexpr double kDaysPerYear = 365.0;
inline constexpr double kSecondsPerYear = kDaysPerYear * 86400.0;

// Relative tolerance for the constant-product invariant q_c * q_b == k.
inline constexpr double kInvariantTolerance = 1e-9;

/// Immutable configuration of one loan market.
///
/// alpha scales the oblivious put, sigma is annualized volatility, the two
/// spreads are applied to the oblivious put on the ask (borrow) and bid (lend)
/// side, and term_years is the market's maturity measured from inception.
struct MarketParams {
  double alpha = 0.0;
  double sigma = 0.0;
  double s_bid = 0.0;
  double s_ask = 0.0;
  double term_years = 1.0;
  std::string collateral_symbol = "ETH";
  std::string borrow_symbol = "USDC";

  /// Throws Error(domain) when any invariant is violated.
  void validate() const;

  bool operator==(const MarketParams&) const = default;
};

/// An open leg. For a borrow, delta_q_b is what the borrower repays to reclaim
/// delta_q_c collateral; for a lend, it is what the pool pays the lender
/// (otherwise the lender receives the collateral).
struct Position {
  Side side = Side::borrow;
  double delta_q_c = 0.0;
  double delta_q_b = 0.0;
  double strike = 0.0;
  double cash_leg = 0.0;
  double x_effective = 0.0;
  double opened_at = 0.0;

  bool operator==(const Position&) const = default;
};

/// One priced trade. Quotes are stateless; pool_revision pins the pool state
/// the quote was computed against so execution can detect staleness.
struct Quote {
  Side side = Side::borrow;
  double delta_q_c = 0.0;
  double delta_q_b = 0.0;
  double strike = 0.0;
  double cash_leg = 0.0;
  double oblivious_put = 0.0;  // spread-adjusted, per collateral unit
  double implied_ltv = 0.0;
  double implied_rate_eq = 0.0;
  double implied_rate_table = 0.0;
  double spot = 0.0;
  double tau_years = 0.0;
  std::uint64_t pool_revision = 0;

  bool operator==(const Quote&) const = default;
};

struct OptionQuote {
  double call = 0.0;
  double put = 0.0;
  double spot = 0.0;
  double strike = 0.0;
  double tau_years = 0.0;

  bool operator==(const OptionQuote&) const = default;
};

struct PricePoint {
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  double price = 0.0;

  bool operator==(const PricePoint&) const = default;
};

using PriceSeries = std::vector<PricePoint>;

class PoolState;

namespace engine {
Position execute(PoolState& pool, const Quote& quote);
}  // namespace engine

/// Constant-product inventories plus the book of open positions.
///
/// k and q_b_initial are fixed at inception. The only way to move the
/// inventories is engine::execute, which keeps q_c * q_b == k.
class PoolState {
 public:
  /// Bootstraps a pool at inception (now = 0, no positions).
  static PoolState create(double q_c, double q_b);

  /// Rebuilds a pool from a snapshot. The snapshot must satisfy the
  /// constant-product invariant against its own k.
  static PoolState restore(double q_c, double q_b, double k, double q_b_initial,
                           double now_years, std::vector<Position> borrow_positions,
                           std::vector<Position> lend_positions,
                           std::uint64_t revision = 0);

  double q_c() const noexcept { return q_c_; }
  double q_b() const noexcept { return q_b_; }
  double k() const noexcept { return k_; }
  double q_b_initial() const noexcept { return q_b_initial_; }
  double q_c_initial() const noexcept { return k_ / q_b_initial_; }
  double now_years() const noexcept { return now_years_; }
  std::uint64_t revision() const noexcept { return revision_; }
  const std::vector<Position>& borrow_positions() const noexcept { return borrows_; }
  const std::vector<Position>& lend_positions() const noexcept { return lends_; }

  /// Strike of an infinitesimal trade, k / q_c^2.
  double marginal_strike() const noexcept { return k_ / (q_c_ * q_c_); }

  /// Moves the clock forward. Invalidates outstanding quotes.
  void advance_to(double now_years);

  bool operator==(const PoolState&) const = default;

 private:
  PoolState() = default;

  friend Position engine::execute(PoolState& pool, const Quote& quote);

  double q_c_ = 0.0;
  double q_b_ = 0.0;
  double k_ = 0.0;
  double q_b_initial_ = 0.0;
  double now_years_ = 0.0;
  std::uint64_t revision_ = 0;
  std::vector<Position> borrows_;
  std::vector<Position> lends_;
};

}  // namespace zll
