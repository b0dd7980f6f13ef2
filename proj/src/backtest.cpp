#include "zll/backtest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "zll/arbitrage.hpp"
#include "zll/pricing.hpp"
#include "zll/serialization.hpp"

namespace zll::backtest {
namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_int(std::string_view s, int& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

void BacktestConfig::validate() const {
  params.validate();
  if (term_days <= 0) throw_domain("term_days must be > 0");
  if (!(initial_q_c > 0.0) || !std::isfinite(initial_q_c)) throw_domain("initial_q_c must be > 0");
  if (!(initial_q_b > 0.0) || !std::isfinite(initial_q_b)) throw_domain("initial_q_b must be > 0");
  if (sample_interval <= 0) throw_domain("sample_interval must be > 0");
}

std::int64_t parse_timestamp(const std::string& raw) {
  const std::string text = trim(raw);
  // YYYY-MM-DD is the minimum.
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
    throw_domain("malformed timestamp '" + text + "'");
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  std::string_view v(text);
  if (!parse_int(v.substr(0, 4), y) || !parse_int(v.substr(5, 2), mo) ||
      !parse_int(v.substr(8, 2), d)) {
    throw_domain("malformed timestamp '" + text + "'");
  }
  std::string_view rest = v.substr(10);
  if (!rest.empty() && (rest.front() == 'T' || rest.front() == ' ')) {
    rest.remove_prefix(1);
    if (rest.size() < 5 || rest[2] != ':' || !parse_int(rest.substr(0, 2), h) ||
        !parse_int(rest.substr(3, 2), mi)) {
      throw_domain("malformed timestamp '" + text + "'");
    }
    rest.remove_prefix(5);
    if (!rest.empty() && rest.front() == ':') {
      if (rest.size() < 3 || !parse_int(rest.substr(1, 2), s)) {
        throw_domain("malformed timestamp '" + text + "'");
      }
      rest.remove_prefix(3);
    }
  }
  if (rest == "Z" || rest == "+00:00") rest = {};
  if (!rest.empty()) throw_domain("timestamp must be UTC: '" + text + "'");

  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw_domain("invalid date '" + text + "'");
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * kSecondsPerDay + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(std::int64_t t) {
  using namespace std::chrono;
  const auto day_count = static_cast<int>(std::floor(static_cast<double>(t) / kSecondsPerDay));
  const year_month_day ymd{sys_days{days{day_count}}};
  const std::int64_t sod = t - static_cast<std::int64_t>(day_count) * kSecondsPerDay;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                static_cast<int>(sod % 60));
  return buf;
}

std::int64_t parse_duration(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw_domain("empty duration");
  std::int64_t unit = 1;
  std::string_view digits(text);
  switch (text.back()) {
    case 'd': unit = kSecondsPerDay; digits.remove_suffix(1); break;
    case 'h': unit = 3600; digits.remove_suffix(1); break;
    case 'm': unit = 60; digits.remove_suffix(1); break;
    case 's': digits.remove_suffix(1); break;
    default: break;
  }
  std::int64_t n = 0;
  const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || p != digits.data() + digits.size() || n <= 0) {
    throw_domain("malformed duration '" + text + "'");
  }
  return n * unit;
}

PriceSeries read_prices(std::istream& in) {
  PriceSeries series;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (row == "timestamp,price") continue;
      throw ParseError("line 1: expected header 'timestamp,price'", line_no);
    }
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two columns", line_no);
    }
    PricePoint p;
    try {
      p.timestamp = parse_timestamp(row.substr(0, comma));
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    const std::string price_text = trim(row.substr(comma + 1));
    const auto [ptr, ec] =
        std::from_chars(price_text.data(), price_text.data() + price_text.size(), p.price);
    if (ec != std::errc{} || ptr != price_text.data() + price_text.size() ||
        !std::isfinite(p.price)) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed price '" + price_text + "'",
                       line_no);
    }
    if (!(p.price > 0.0)) {
      throw ParseError("line " + std::to_string(line_no) + ": price must be > 0", line_no);
    }
    series.push_back(p);
  }
  if (!header_seen) throw ParseError("empty price file", line_no);
  std::stable_sort(series.begin(), series.end(),
                   [](const PricePoint& a, const PricePoint& b) { return a.timestamp < b.timestamp; });
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].timestamp == series[i - 1].timestamp) {
      throw ParseError("duplicate timestamp " + format_timestamp(series[i].timestamp), 0);
    }
  }
  return series;
}

PriceSeries load_prices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open price file " + path.string());
  return read_prices(in);
}

double price_at(const PriceSeries& series, std::int64_t t) {
  auto it = std::upper_bound(series.begin(), series.end(), t,
                             [](std::int64_t v, const PricePoint& p) { return v < p.timestamp; });
  if (it == series.begin()) throw Error(ErrorKind::coverage, "no price at or before " + format_timestamp(t));
  return std::prev(it)->price;
}

BacktestReport run_backtest(const BacktestConfig& config, const PriceSeries& prices) {
  config.validate();
  MarketParams params = config.params;
  params.term_years = config.term_days / kDaysPerYear;

  const std::int64_t end = config.start + config.term_days * kSecondsPerDay;
  if (prices.empty() || prices.front().timestamp > config.start || prices.back().timestamp < end) {
    throw Error(ErrorKind::coverage, "price series does not cover [" +
                                         format_timestamp(config.start) + ", " +
                                         format_timestamp(end) + "]");
  }

  std::vector<std::int64_t> samples;
  for (std::int64_t t = config.start; t < end; t += config.sample_interval) samples.push_back(t);
  samples.push_back(end);

  BacktestReport report;
  PoolState pool = PoolState::create(config.initial_q_c, config.initial_q_b);
  BacktestSummary& summary = report.summary;
  double borrow_flow = 0.0;
  double lend_flow = 0.0;

  for (const std::int64_t t : samples) {
    const double now = t == end ? params.term_years
                                : static_cast<double>(t - config.start) / kSecondsPerYear;
    pool.advance_to(now);
    const double spot = price_at(prices, t);
    const double tau = engine::remaining_tau(pool, params);
    // Edges inside this band are treated as equilibrium; it matches the
    // sizing tolerance of find_equilibrium_trade.
    const double deadband = 1e-6 * spot;

    for (const Side side : {Side::borrow, Side::lend}) {
      const auto signal = arbitrage::arb_signal(pool, params, spot, tau, side);
      if (!signal.active || std::abs(signal.edge) <= deadband) continue;

      const auto trade = arbitrage::find_equilibrium_trade(pool, params, spot, tau, side);
      if (trade.constrained) {
        report.events.push_back({t, side,
                                 "trade truncated at feasibility cap (size " +
                                     std::to_string(trade.delta_q_c) + ", residual edge " +
                                     std::to_string(trade.residual_edge) + ")"});
      }
      if (!(trade.delta_q_c > 0.0)) continue;

      const Quote q = engine::quote(pool, params, side, trade.delta_q_c, spot);
      const Position pos = engine::execute(pool, q);
      if (side == Side::borrow) {
        summary.borrower_agent.cash += pos.cash_leg;
        summary.borrower_agent.collateral -= pos.delta_q_c;
        borrow_flow += pos.delta_q_c;
        ++summary.borrow_trades;
      } else {
        summary.lender_agent.cash -= pos.cash_leg;
        lend_flow += pos.delta_q_c;
        ++summary.lend_trades;
      }
    }

    const double x = pricing::oblivious_put_price(spot, params, tau);
    SeriesRow row;
    row.t = t;
    row.spot = spot;
    row.marginal_strike = pool.marginal_strike();
    row.borrow_rate = pricing::implied_rate_table(x * (1.0 + params.s_ask), row.marginal_strike);
    row.deposit_rate = pricing::implied_rate_table(x * (1.0 - params.s_bid), row.marginal_strike);
    row.q_c = pool.q_c();
    row.q_b = pool.q_b();
    row.cumulative_borrow_flow = borrow_flow;
    row.cumulative_lend_flow = lend_flow;
    row.shortfall_margin = engine::check_no_shortfall(pool).margin;
    report.series.push_back(row);
  }

  const double s0 = report.series.front().spot;
  const double s_t = report.series.back().spot;
  summary.settlement = engine::settle_expiry(pool, params, s_t);
  for (const auto& f : summary.settlement.flows) {
    AgentBook& agent = f.side == Side::borrow ? summary.borrower_agent : summary.lender_agent;
    agent.cash += f.holder_cash;
    agent.collateral += f.holder_collateral;
  }

  summary.initial_spot = s0;
  summary.final_spot = s_t;
  summary.initial_value = config.initial_q_b + config.initial_q_c * s0;
  summary.amm_final_value = summary.settlement.final_value;
  summary.hold_final_value = config.initial_q_b + config.initial_q_c * s_t;
  summary.amm_roi = (summary.amm_final_value - summary.initial_value) / summary.initial_value;
  summary.hold_roi = (summary.hold_final_value - summary.initial_value) / summary.initial_value;
  summary.outperformance = summary.amm_roi - summary.hold_roi;
  report.final_pool = pool;
  return report;
}

BacktestReport run_backtest(const BacktestConfig& config) {
  return run_backtest(config, load_prices(config.price_file));
}

void write_series_csv(const BacktestReport& report, std::ostream& out) {
  out << "t,spot,marginal_strike,borrow_rate,deposit_rate,q_c,q_b,cumulative_borrow_flow,"
         "cumulative_lend_flow\n";
  char buf[512];
  for (const auto& r : report.series) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  format_timestamp(r.t).c_str(), r.spot, r.marginal_strike, r.borrow_rate,
                  r.deposit_rate, r.q_c, r.q_b, r.cumulative_borrow_flow, r.cumulative_lend_flow);
    out << buf;
  }
}

void write_report(const BacktestReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream json_out(dir / "report.json");
    if (!json_out) throw Error(ErrorKind::parse, "cannot write " + (dir / "report.json").string());
    json_out << nlohmann::json(report).dump(2) << '\n';
  }
  std::ofstream csv_out(dir / "series.csv");
  if (!csv_out) throw Error(ErrorKind::parse, "cannot write " + (dir / "series.csv").string());
  write_series_csv(report, csv_out);
}

}  // namespace zll::backtest
