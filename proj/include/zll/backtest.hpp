#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "zll/core.hpp"
#include "zll/engine.hpp"

namespace zll::backtest {

struct BacktestConfig {
  MarketParams params;
  double initial_q_c = 0.0;
  double initial_q_b = 0.0;
  std::string price_file;
  std::int64_t start = 0;               // seconds since epoch
  int term_days = 90;
  std::int64_t sample_interval = 86400; // seconds

  void validate() const;
};

struct SeriesRow {
  std::int64_t t = 0;
  double spot = 0.0;
  double marginal_strike = 0.0;
  double borrow_rate = 0.0;   // X * (1 + s_ask) / K
  double deposit_rate = 0.0;  // X * (1 - s_bid) / K
  double q_c = 0.0;
  double q_b = 0.0;
  double cumulative_borrow_flow = 0.0;  // collateral units pledged by borrowers
  double cumulative_lend_flow = 0.0;    // collateral units taken on by lenders
  double shortfall_margin = 0.0;

  bool operator==(const SeriesRow&) const = default;
};

/// Aggregated counterparty book. Balances start at zero and go negative when
/// the agent funds a trade; only flows with the pool are recorded.
struct AgentBook {
  double cash = 0.0;
  double collateral = 0.0;

  bool operator==(const AgentBook&) const = default;
};

struct BacktestEvent {
  std::int64_t t = 0;
  Side side = Side::borrow;
  std::string message;

  bool operator==(const BacktestEvent&) const = default;
};

struct BacktestSummary {
  double initial_spot = 0.0;
  double final_spot = 0.0;
  double initial_value = 0.0;
  double amm_final_value = 0.0;
  double hold_final_value = 0.0;
  double amm_roi = 0.0;
  double hold_roi = 0.0;
  double outperformance = 0.0;
  std::size_t borrow_trades = 0;
  std::size_t lend_trades = 0;
  AgentBook borrower_agent;
  AgentBook lender_agent;
  engine::SettlementReport settlement;

  bool operator==(const BacktestSummary&) const = default;
};

struct BacktestReport {
  std::vector<SeriesRow> series;
  BacktestSummary summary;
  std::vector<BacktestEvent> events;
  PoolState final_pool = PoolState::create(1.0, 1.0);

  bool operator==(const BacktestReport&) const = default;
};

/// Parses "YYYY-MM-DD[THH:MM[:SS]][Z]" as UTC.
std::int64_t parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t t);

/// Parses "86400", "1d", "6h", "15m" or "30s" into seconds.
std::int64_t parse_duration(const std::string& text);

/// Reads a `timestamp,price` CSV. Rows are returned sorted by timestamp.
PriceSeries read_prices(std::istream& in);
PriceSeries load_prices(const std::filesystem::path& path);

/// Last observed price at or before t. Requires t >= series.front().timestamp.
double price_at(const PriceSeries& series, std::int64_t t);

/// Runs one market from inception to expiry against a price series.
/// params.term_years is taken from term_days.
BacktestReport run_backtest(const BacktestConfig& config, const PriceSeries& prices);
BacktestReport run_backtest(const BacktestConfig& config);

/// Writes report.json and series.csv into dir.
void write_report(const BacktestReport& report, const std::filesystem::path& dir);
void write_series_csv(const BacktestReport& report, std::ostream& out);

}  // namespace zll::backtest
