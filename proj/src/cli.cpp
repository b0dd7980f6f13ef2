#include "zll/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fixture_data.hpp"
#include "zll/backtest.hpp"
#include "zll/engine.hpp"
#include "zll/payoffs.hpp"
#include "zll/serialization.hpp"

namespace zll::cli {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorKind::parse, path + " is empty");
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, path + ": " + e.what());
  }
}

// A params file may hold bare MarketParams or an object with a "params" key.
MarketParams params_from_file(const std::string& path) {
  const json j = read_json_file(path);
  return (j.contains("params") ? j.at("params") : j).get<MarketParams>();
}

MarketParams resolve_params(const std::string& flag, const Fixture& fixture) {
  if (!flag.empty()) return params_from_file(flag);
  if (const char* env = std::getenv("ZLL_CONFIG"); env != nullptr && *env != '\0') {
    return params_from_file(env);
  }
  return fixture.params;
}

PoolState resolve_pool(const std::string& flag, const Fixture& fixture) {
  if (flag.empty()) return fixture.pool;
  const json j = read_json_file(flag);
  return (j.contains("pool") ? j.at("pool") : j).get<PoolState>();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void print_quote(std::ostream& out, const Quote& q) {
  out << "side               " << to_string(q.side) << '\n'
      << "delta_q_c          " << fmt("%.6f", q.delta_q_c) << '\n'
      << "cash_leg           " << fmt("%.2f", q.cash_leg) << '\n'
      << "repayment          " << fmt("%.2f", q.delta_q_b) << '\n'
      << "strike             " << fmt("%.2f", q.strike) << '\n'
      << "implied_ltv        " << fmt("%.2f%%", 100.0 * q.implied_ltv) << '\n'
      << "implied_rate_table " << fmt("%.2f%%", 100.0 * q.implied_rate_table) << '\n'
      << "implied_rate_eq    " << fmt("%.2f%%", 100.0 * q.implied_rate_eq) << '\n'
      << "oblivious_put      " << fmt("%.4f", q.oblivious_put) << '\n';
}

void print_table(std::ostream& out, const std::vector<Quote>& rows, bool borrow) {
  out << (borrow ? "delta_q_c  cash_received  repayment      strike  ltv   max_apr\n"
                 : "delta_q_c  cash_paid      amm_repayment  strike  ltv   max_apy\n");
  char buf[160];
  for (const auto& q : rows) {
    std::snprintf(buf, sizeof buf, "%-9.3f  %-13.0f  %-13.0f  %-6.0f  %3.0f%%  %3.0f%%\n",
                  q.delta_q_c, q.cash_leg, q.delta_q_b, q.strike, 100.0 * q.implied_ltv,
                  100.0 * q.implied_rate_table);
    out << buf;
  }
}

struct QuoteArgs {
  std::string side;
  std::optional<double> qc;
  std::optional<double> cash;
  double spot = 0.0;
  std::string pool;
  std::string params;
  bool json = false;
};

struct TablesArgs {
  std::string fixture;
  bool json = false;
};

struct PayoffArgs {
  std::string figure = "borrower";
  double strike = 2000.0;
  double cash = 1850.0;
  double spot0 = 4000.0;
  double share = 0.5;
  double qty = 1.0;
  double min = 0.0;
  double max = 7000.0;
  double step = 50.0;
};

struct SettleArgs {
  std::string pool;
  std::string params;
  double spot = 0.0;
  bool json = false;
};

struct BacktestArgs {
  std::string config;
  std::string out = ".";
  bool json = false;
};

int cmd_quote(const QuoteArgs& a, std::ostream& out, std::ostream& err) {
  if (a.qc.has_value() == a.cash.has_value()) {
    err << "quote: exactly one of --qc or --cash is required\n";
    return kUsageError;
  }
  if (a.cash && a.side != "lend") {
    err << "quote: --cash is only valid with --side lend\n";
    return kUsageError;
  }
  const Fixture fixture = default_fixture();
  const MarketParams params = resolve_params(a.params, fixture);
  const PoolState pool = resolve_pool(a.pool, fixture);
  const Side side = a.side == "borrow" ? Side::borrow : Side::lend;
  const Quote q = a.cash ? engine::solve_lend_for_cash(pool, params, *a.cash, a.spot)
                         : engine::quote(pool, params, side, *a.qc, a.spot);
  if (a.json) {
    out << json(q).dump(2) << '\n';
  } else {
    print_quote(out, q);
  }
  return kOk;
}

int cmd_tables(const TablesArgs& a, std::ostream& out) {
  const Fixture fixture =
      a.fixture.empty() ? default_fixture() : fixture_from_json(read_json_file(a.fixture));
  const TermTables tables = make_tables(fixture);
  if (a.json) {
    out << json{{"spot", fixture.spot}, {"borrow", tables.borrow}, {"lend", tables.lend}}.dump(2)
        << '\n';
    return kOk;
  }
  out << "Borrower terms (spot " << fmt("%.0f", fixture.spot) << ")\n";
  print_table(out, tables.borrow, true);
  out << "\nLender terms (spot " << fmt("%.0f", fixture.spot) << ")\n";
  print_table(out, tables.lend, false);
  return kOk;
}

int cmd_payoff(const PayoffArgs& a, std::ostream& out) {
  if (!(a.step > 0.0) || !(a.max >= a.min)) throw_domain("payoff grid needs step > 0 and max >= min");
  out << "s_t,pnl\n";
  const auto n = static_cast<long>(std::floor((a.max - a.min) / a.step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double s = a.min + static_cast<double>(i) * a.step;
    double pnl = 0.0;
    if (a.figure == "borrower") {
      pnl = a.qty * payoffs::borrower_pnl(s, a.strike, a.cash, a.spot0);
    } else if (a.figure == "lp") {
      pnl = payoffs::lp_pnl(s, a.strike, a.cash, a.share, a.qty);
    } else {
      pnl = a.qty * payoffs::repayment_value(s, a.strike);
    }
    out << fmt("%.10g", s) << ',' << fmt("%.10g", pnl) << '\n';
  }
  return kOk;
}

int cmd_settle(const SettleArgs& a, std::ostream& out) {
  const Fixture fixture = default_fixture();
  const MarketParams params = resolve_params(a.params, fixture);
  const PoolState pool = resolve_pool(a.pool, fixture);
  const auto report = engine::settle_expiry(pool, params, a.spot);
  if (a.json) {
    out << json(report).dump(2) << '\n';
    return kOk;
  }
  out << "spot_at_expiry   " << fmt("%.2f", report.spot_at_expiry) << '\n';
  for (const auto& f : report.flows) {
    out << to_string(f.side) << '[' << f.index << "] strike " << fmt("%.2f", f.strike)
        << (f.exercised ? " exercised" : " collateral delivered") << " holder_cash "
        << fmt("%.2f", f.holder_cash) << " holder_collateral " << fmt("%.6f", f.holder_collateral)
        << '\n';
  }
  out << "final_cash       " << fmt("%.2f", report.final_cash) << '\n'
      << "final_collateral " << fmt("%.6f", report.final_collateral) << '\n'
      << "final_value      " << fmt("%.2f", report.final_value) << '\n';
  return kOk;
}

int cmd_backtest(const BacktestArgs& a, std::ostream& out) {
  const json j = read_json_file(a.config);
  auto config = j.get<backtest::BacktestConfig>();
  // Relative price paths resolve against the config file's directory.
  std::filesystem::path price_path(config.price_file);
  if (price_path.is_relative()) {
    price_path = std::filesystem::path(a.config).parent_path() / price_path;
  }
  config.price_file = price_path.string();
  const auto report = backtest::run_backtest(config);
  backtest::write_report(report, a.out);
  const auto& s = report.summary;
  if (a.json) {
    out << json(s).dump(2) << '\n';
    return kOk;
  }
  out << "samples        " << report.series.size() << '\n'
      << "borrow_trades  " << s.borrow_trades << '\n'
      << "lend_trades    " << s.lend_trades << '\n'
      << "amm_roi        " << fmt("%.4f%%", 100.0 * s.amm_roi) << '\n'
      << "hold_roi       " << fmt("%.4f%%", 100.0 * s.hold_roi) << '\n'
      << "outperformance " << fmt("%.4f%%", 100.0 * s.outperformance) << '\n'
      << "wrote " << (std::filesystem::path(a.out) / "report.json").string() << " and "
      << (std::filesystem::path(a.out) / "series.csv").string() << '\n';
  return kOk;
}

}  // namespace

Fixture fixture_from_json(const json& j) {
  if (j.is_null() || (j.is_object() && j.empty())) throw Error(ErrorKind::parse, "fixture is empty");
  Fixture f;
  f.params = j.at("params").get<MarketParams>();
  f.pool = j.at("pool").get<PoolState>();
  f.spot = j.at("spot").get<double>();
  f.borrow_sizes = j.value("borrow_sizes", std::vector<double>{});
  f.lend_cash = j.value("lend_cash", std::vector<double>{});
  if (f.borrow_sizes.empty() && f.lend_cash.empty()) {
    throw Error(ErrorKind::parse, "fixture has no table rows");
  }
  return f;
}

Fixture default_fixture() { return fixture_from_json(json::parse(detail::kBundledFixture)); }

TermTables make_tables(const Fixture& fixture) {
  TermTables t;
  for (double size : fixture.borrow_sizes) {
    t.borrow.push_back(engine::quote_borrow(fixture.pool, fixture.params, size, fixture.spot));
  }
  for (double cash : fixture.lend_cash) {
    t.lend.push_back(engine::solve_lend_for_cash(fixture.pool, fixture.params, cash, fixture.spot));
  }
  return t;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-liquidation loan AMM toolkit", "zll"};
  app.require_subcommand(1);

  QuoteArgs qa;
  auto* quote = app.add_subcommand("quote", "Price a borrow or lend trade against a pool");
  quote->add_option("--side", qa.side, "borrow or lend")
      ->required()
      ->check(CLI::IsMember({"borrow", "lend"}));
  auto* qc_opt = quote->add_option("--qc", qa.qc, "Collateral quantity");
  auto* cash_opt = quote->add_option("--cash", qa.cash, "Cash paid by the lender (lend only)");
  qc_opt->excludes(cash_opt);
  quote->add_option("--spot", qa.spot, "Collateral spot price")->required();
  quote->add_option("--pool", qa.pool, "Pool snapshot JSON (defaults to the bundled fixture)");
  quote->add_option("--params", qa.params, "Market params JSON (defaults to $ZLL_CONFIG)");
  quote->add_flag("--json", qa.json, "Emit the quote as JSON");

  TablesArgs ta;
  auto* tables = app.add_subcommand("tables", "Regenerate the borrower and lender term tables");
  tables->add_option("--fixture", ta.fixture, "Fixture JSON (defaults to the bundled one)");
  tables->add_flag("--json", ta.json, "Emit rows as JSON");

  PayoffArgs pa;
  auto* payoff = app.add_subcommand("payoff", "Emit an (s_t, pnl) grid as CSV");
  payoff->add_option("--figure", pa.figure, "borrower, lp or repayment")
      ->check(CLI::IsMember({"borrower", "lp", "repayment"}));
  payoff->add_option("--strike", pa.strike, "Strike / repayment per unit");
  payoff->add_option("--cash", pa.cash, "Cash received by the borrower (paid out by the LP)");
  payoff->add_option("--spot0", pa.spot0, "Spot at inception");
  payoff->add_option("--share", pa.share, "LP pool share");
  payoff->add_option("--qty", pa.qty, "Collateral units");
  payoff->add_option("--min", pa.min, "Grid start");
  payoff->add_option("--max", pa.max, "Grid end");
  payoff->add_option("--step", pa.step, "Grid step");

  SettleArgs sa;
  auto* settle = app.add_subcommand("settle", "Settle all positions of a pool snapshot at expiry");
  settle->add_option("--pool", sa.pool, "Pool snapshot JSON")->required();
  settle->add_option("--spot", sa.spot, "Spot at expiry")->required();
  settle->add_option("--params", sa.params, "Market params JSON (defaults to $ZLL_CONFIG)");
  settle->add_flag("--json", sa.json, "Emit the settlement report as JSON");

  BacktestArgs ba;
  auto* bt = app.add_subcommand("backtest", "Run a market backtest over a price CSV");
  bt->add_option("--config", ba.config, "Backtest config JSON")->required();
  bt->add_option("--out", ba.out, "Output directory for report.json and series.csv");
  bt->add_flag("--json", ba.json, "Print the summary as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (*quote) return cmd_quote(qa, out, err);
    if (*tables) return cmd_tables(ta, out);
    if (*payoff) return cmd_payoff(pa, out);
    if (*settle) return cmd_settle(sa, out);
    if (*bt) return cmd_backtest(ba, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kDomainError;
  } catch (const nlohmann::json::exception& e) {
    err << "error (parse): " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace zll::cli
