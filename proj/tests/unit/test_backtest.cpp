#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "zll/backtest.hpp"
#include "zll/serialization.hpp"

using namespace zll;
using namespace zll::backtest;

namespace {

const std::int64_t kStart = 1609459200;  // 2021-01-01T00:00:00Z

PriceSeries gbm_series(std::uint64_t seed, double s0, double sigma, std::int64_t step,
                       int days) {
  const std::size_t steps = static_cast<std::size_t>(days) * 86400 / step;
  const auto path = oracle::gbm_path(seed, s0, sigma, step / kSecondsPerYear, steps);
  PriceSeries out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    out.push_back({kStart + static_cast<std::int64_t>(i) * step, path[i]});
  }
  return out;
}

BacktestConfig base_config(int days = 90) {
  BacktestConfig c;
  c.params.alpha = 0.5;
  c.params.sigma = 1.0;
  c.params.s_bid = 0.5;
  c.params.s_ask = 0.1;
  c.initial_q_c = 100.0;
  c.initial_q_b = 100.0 * 2000.0 / 1.5;
  c.start = kStart;
  c.term_days = days;
  return c;
}

}  // namespace

TEST(Timestamps, ParseAndFormat) {
  EXPECT_EQ(parse_timestamp("2021-01-01T00:00:00Z"), kStart);
  EXPECT_EQ(parse_timestamp("2021-01-01"), kStart);
  EXPECT_EQ(parse_timestamp("2021-01-01T06:30Z"), kStart + 6 * 3600 + 1800);
  EXPECT_EQ(parse_timestamp("2021-01-01T00:00:10+00:00"), kStart + 10);
  EXPECT_EQ(format_timestamp(kStart + 61), "2021-01-01T00:01:01Z");
  EXPECT_THROW(parse_timestamp("yesterday"), Error);
  EXPECT_THROW(parse_timestamp("2021-02-30"), Error);
}

TEST(Durations, Units) {
  EXPECT_EQ(parse_duration("86400"), 86400);
  EXPECT_EQ(parse_duration("1d"), 86400);
  EXPECT_EQ(parse_duration("6h"), 21600);
  EXPECT_EQ(parse_duration("15m"), 900);
  EXPECT_EQ(parse_duration("30s"), 30);
  EXPECT_THROW(parse_duration("0"), Error);
  EXPECT_THROW(parse_duration("1w"), Error);
}

TEST(ReadPrices, ValidSortedAndRejected) {
  std::istringstream two("timestamp,price\n2021-03-02T00:00:00Z,1500\n2021-03-01T00:00:00Z,1400.5\n");
  const auto s = read_prices(two);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_LT(s[0].timestamp, s[1].timestamp);
  EXPECT_EQ(s[0].price, 1400.5);

  std::istringstream negative("timestamp,price\n2021-03-01T00:00:00Z,-5\n");
  EXPECT_THROW(read_prices(negative), Error);

  std::istringstream malformed("timestamp,price\n2021-03-01T00:00:00Z,1\nnot-a-row\n");
  try {
    read_prices(malformed);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ReadPrices, MissingFile) {
  EXPECT_THROW(load_prices("/nonexistent/prices.csv"), Error);
}

TEST(PriceAt, AsOfLookup) {
  const PriceSeries s{{100, 1.0}, {200, 2.0}, {300, 3.0}};
  EXPECT_EQ(price_at(s, 100), 1.0);
  EXPECT_EQ(price_at(s, 250), 2.0);
  EXPECT_EQ(price_at(s, 1000), 3.0);
  EXPECT_THROW(price_at(s, 50), Error);
}

TEST(RunBacktest, RequiresCoverage) {
  const auto prices = gbm_series(1, 2000.0, 1.0, 86400, 30);
  try {
    run_backtest(base_config(90), prices);
    FAIL() << "expected coverage error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::coverage);
  }
}

TEST(RunBacktest, ConfigValidation) {
  auto c = base_config();
  c.term_days = 0;
  EXPECT_THROW(c.validate(), Error);
  c = base_config();
  c.initial_q_c = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(RunBacktest, SeriesAndSummaryInvariants) {
  const auto prices = gbm_series(7, 2000.0, 1.0, 86400, 90);
  const auto config = base_config();
  const auto r = run_backtest(config, prices);
  ASSERT_EQ(r.series.size(), 91u);
  for (std::size_t i = 1; i < r.series.size(); ++i) {
    EXPECT_LT(r.series[i - 1].t, r.series[i].t);
    EXPECT_GE(r.series[i].shortfall_margin, 0.0);
    const auto& a = r.series[i - 1];
    const auto& b = r.series[i];
    if (b.cumulative_borrow_flow > a.cumulative_borrow_flow &&
        b.cumulative_lend_flow == a.cumulative_lend_flow) {
      EXPECT_LT(b.marginal_strike, a.marginal_strike);
    }
    if (b.cumulative_lend_flow > a.cumulative_lend_flow &&
        b.cumulative_borrow_flow == a.cumulative_borrow_flow) {
      EXPECT_GT(b.marginal_strike, a.marginal_strike);
    }
  }
  const auto& s = r.summary;
  EXPECT_EQ(s.outperformance, s.amm_roi - s.hold_roi);
  EXPECT_DOUBLE_EQ(s.initial_value, config.initial_q_b + config.initial_q_c * 2000.0);
  EXPECT_GT(s.borrow_trades + s.lend_trades, 0u);
}

TEST(RunBacktest, ConservesCashAndCollateral) {
  const auto prices = gbm_series(11, 2000.0, 1.0, 86400, 90);
  const auto config = base_config();
  const auto r = run_backtest(config, prices);
  const auto& s = r.summary;
  EXPECT_NEAR(s.settlement.final_cash + s.borrower_agent.cash + s.lender_agent.cash,
              config.initial_q_b, 1e-6);
  EXPECT_NEAR(s.settlement.final_collateral + s.borrower_agent.collateral +
                  s.lender_agent.collateral,
              config.initial_q_c, 1e-9);
}

TEST(RunBacktest, PoolPnlMatchesPerPositionOracle) {
  const auto prices = gbm_series(13, 2000.0, 1.0, 86400, 90);
  const auto r = run_backtest(base_config(), prices);
  const double s_t = r.summary.final_spot;
  double pnl = 0.0;
  for (const auto& p : r.final_pool.borrow_positions()) {
    pnl += p.delta_q_c * (p.x_effective - std::max(p.strike - s_t, 0.0));
  }
  for (const auto& p : r.final_pool.lend_positions()) {
    pnl += p.delta_q_c * (std::max(p.strike - s_t, 0.0) - p.x_effective);
  }
  EXPECT_NEAR(r.summary.amm_final_value - r.summary.hold_final_value, pnl, 1e-6);
}

TEST(RunBacktest, ZeroAlphaHasZeroRates) {
  auto config = base_config(30);
  config.params.alpha = 0.0;
  const auto r = run_backtest(config, gbm_series(17, 2000.0, 1.0, 86400, 30));
  for (const auto& row : r.series) {
    EXPECT_EQ(row.borrow_rate, 0.0);
    EXPECT_EQ(row.deposit_rate, 0.0);
  }
}

TEST(RunBacktest, FlatSeriesEquilibratesThenStops) {
  PriceSeries flat{{kStart, 2000.0}, {kStart + 91 * 86400, 2000.0}};
  auto config = base_config();
  config.sample_interval = 900;
  const auto r = run_backtest(config, flat);
  // The opening trade moves the pool to the boundary; afterwards only the
  // shrinking time value moves it.
  EXPECT_GT(r.series.front().cumulative_borrow_flow + r.series.front().cumulative_lend_flow, 0.0);
  EXPECT_LE(std::abs(r.summary.final_spot - r.series.back().marginal_strike), 0.01 * 2000.0);
}

TEST(RunBacktest, Deterministic) {
  const auto prices = gbm_series(19, 2000.0, 1.0, 86400, 90);
  const auto a = run_backtest(base_config(), prices);
  const auto b = run_backtest(base_config(), prices);
  EXPECT_EQ(a, b);
  EXPECT_EQ(nlohmann::json(a).dump(), nlohmann::json(b).dump());
}

TEST(RunBacktest, RateSpreadVanishesAtExpiry) {
  const auto r = run_backtest(base_config(), gbm_series(23, 2000.0, 1.0, 86400, 90));
  const auto& first = r.series.front();
  const auto& last = r.series.back();
  EXPECT_GT(first.borrow_rate - first.deposit_rate, 0.0);
  EXPECT_EQ(last.borrow_rate - last.deposit_rate, 0.0);
}

TEST(RunBacktest, StrikeConvergesWithSubDailySampling) {
  auto config = base_config();
  config.sample_interval = 900;
  const auto r = run_backtest(config, gbm_series(29, 2000.0, 1.0, 900, 90));
  EXPECT_LE(std::abs(r.series.back().marginal_strike - r.summary.final_spot),
            0.01 * r.summary.final_spot);
}

TEST(WriteReport, FilesAndColumns) {
  const auto r = run_backtest(base_config(10), gbm_series(31, 2000.0, 1.0, 86400, 10));
  const auto dir = std::filesystem::temp_directory_path() / "zll_write_report_test";
  std::filesystem::remove_all(dir);
  write_report(r, dir);
  std::ifstream csv(dir / "series.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header,
            "t,spot,marginal_strike,borrow_rate,deposit_rate,q_c,q_b,cumulative_borrow_flow,"
            "cumulative_lend_flow");
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, r.series.size());
  std::ifstream js(dir / "report.json");
  const auto parsed = nlohmann::json::parse(js).get<BacktestReport>();
  EXPECT_EQ(parsed, r);
  std::filesystem::remove_all(dir);
}
