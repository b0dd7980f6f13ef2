#include "zll/serialization.hpp"

#include <string>

namespace zll {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  j.at(key).get_to(out);
}

template <typename T>
void read_optional(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

}  // namespace

void to_json(json& j, Side side) { j = to_string(side); }

void from_json(const json& j, Side& side) {
  const auto s = j.get<std::string>();
  if (s == "borrow") {
    side = Side::borrow;
  } else if (s == "lend") {
    side = Side::lend;
  } else {
    throw Error(ErrorKind::parse, "side must be 'borrow' or 'lend', got '" + s + "'");
  }
}

void to_json(json& j, const MarketParams& p) {
  j = json{{"alpha", p.alpha},           {"sigma", p.sigma},
           {"s_bid", p.s_bid},           {"s_ask", p.s_ask},
           {"term_years", p.term_years}, {"collateral_symbol", p.collateral_symbol},
           {"borrow_symbol", p.borrow_symbol}};
}

void from_json(const json& j, MarketParams& p) {
  read(j, "alpha", p.alpha);
  read(j, "sigma", p.sigma);
  read_optional(j, "s_bid", p.s_bid);
  read_optional(j, "s_ask", p.s_ask);
  read_optional(j, "term_years", p.term_years);
  read_optional(j, "collateral_symbol", p.collateral_symbol);
  read_optional(j, "borrow_symbol", p.borrow_symbol);
  p.validate();
}

void to_json(json& j, const Position& p) {
  j = json{{"side", p.side},         {"delta_q_c", p.delta_q_c}, {"delta_q_b", p.delta_q_b},
           {"strike", p.strike},     {"cash_leg", p.cash_leg},   {"x_effective", p.x_effective},
           {"opened_at", p.opened_at}};
}

void from_json(const json& j, Position& p) {
  read(j, "side", p.side);
  read(j, "delta_q_c", p.delta_q_c);
  read(j, "delta_q_b", p.delta_q_b);
  read(j, "strike", p.strike);
  read(j, "cash_leg", p.cash_leg);
  read(j, "x_effective", p.x_effective);
  read(j, "opened_at", p.opened_at);
}

void to_json(json& j, const Quote& q) {
  j = json{{"side", q.side},
           {"delta_q_c", q.delta_q_c},
           {"delta_q_b", q.delta_q_b},
           {"strike", q.strike},
           {"cash_leg", q.cash_leg},
           {"oblivious_put", q.oblivious_put},
           {"implied_ltv", q.implied_ltv},
           {"implied_rate_eq", q.implied_rate_eq},
           {"implied_rate_table", q.implied_rate_table},
           {"spot", q.spot},
           {"tau_years", q.tau_years},
           {"pool_revision", q.pool_revision}};
}

void from_json(const json& j, Quote& q) {
  read(j, "side", q.side);
  read(j, "delta_q_c", q.delta_q_c);
  read(j, "delta_q_b", q.delta_q_b);
  read(j, "strike", q.strike);
  read(j, "cash_leg", q.cash_leg);
  read(j, "oblivious_put", q.oblivious_put);
  read(j, "implied_ltv", q.implied_ltv);
  read(j, "implied_rate_eq", q.implied_rate_eq);
  read(j, "implied_rate_table", q.implied_rate_table);
  read_optional(j, "spot", q.spot);
  read_optional(j, "tau_years", q.tau_years);
  read_optional(j, "pool_revision", q.pool_revision);
}

void to_json(json& j, const OptionQuote& q) {
  j = json{{"call", q.call},
           {"put", q.put},
           {"spot", q.spot},
           {"strike", q.strike},
           {"tau_years", q.tau_years}};
}

void from_json(const json& j, OptionQuote& q) {
  read(j, "call", q.call);
  read(j, "put", q.put);
  read(j, "spot", q.spot);
  read(j, "strike", q.strike);
  read(j, "tau_years", q.tau_years);
}

void to_json(json& j, const PricePoint& p) {
  j = json{{"timestamp", p.timestamp}, {"price", p.price}};
}

void from_json(const json& j, PricePoint& p) {
  read(j, "timestamp", p.timestamp);
  read(j, "price", p.price);
}

void to_json(json& j, const PoolState& pool) {
  j = json{{"q_c", pool.q_c()},
           {"q_b", pool.q_b()},
           {"k", pool.k()},
           {"q_b_initial", pool.q_b_initial()},
           {"now_years", pool.now_years()},
           {"revision", pool.revision()},
           {"borrow_positions", pool.borrow_positions()},
           {"lend_positions", pool.lend_positions()}};
}

PoolState pool_from_json(const json& j) {
  const double q_c = j.at("q_c").get<double>();
  const double q_b = j.at("q_b").get<double>();
  if (!j.contains("k")) {
    PoolState pool = PoolState::create(q_c, q_b);
    if (auto it = j.find("now_years"); it != j.end()) pool.advance_to(it->get<double>());
    return pool;
  }
  return PoolState::restore(q_c, q_b, j.at("k").get<double>(), j.at("q_b_initial").get<double>(),
                            j.value("now_years", 0.0),
                            j.value("borrow_positions", std::vector<Position>{}),
                            j.value("lend_positions", std::vector<Position>{}),
                            j.value("revision", std::uint64_t{0}));
}

namespace engine {

void to_json(json& j, const ShortfallCheck& c) {
  j = json{{"holds", c.holds}, {"margin", c.margin}};
}

void to_json(json& j, const SettlementFlow& f) {
  j = json{{"side", f.side},
           {"index", f.index},
           {"strike", f.strike},
           {"delta_q_c", f.delta_q_c},
           {"delta_q_b", f.delta_q_b},
           {"exercised", f.exercised},
           {"holder_cash", f.holder_cash},
           {"holder_collateral", f.holder_collateral}};
}

void from_json(const json& j, SettlementFlow& f) {
  read(j, "side", f.side);
  read(j, "index", f.index);
  read(j, "strike", f.strike);
  read(j, "delta_q_c", f.delta_q_c);
  read(j, "delta_q_b", f.delta_q_b);
  read(j, "exercised", f.exercised);
  read(j, "holder_cash", f.holder_cash);
  read(j, "holder_collateral", f.holder_collateral);
}

void to_json(json& j, const SettlementReport& r) {
  j = json{{"spot_at_expiry", r.spot_at_expiry},
           {"flows", r.flows},
           {"cash_before", r.cash_before},
           {"collateral_before", r.collateral_before},
           {"final_cash", r.final_cash},
           {"final_collateral", r.final_collateral},
           {"final_value", r.final_value}};
}

void from_json(const json& j, SettlementReport& r) {
  read(j, "spot_at_expiry", r.spot_at_expiry);
  read(j, "flows", r.flows);
  read(j, "cash_before", r.cash_before);
  read(j, "collateral_before", r.collateral_before);
  read(j, "final_cash", r.final_cash);
  read(j, "final_collateral", r.final_collateral);
  read(j, "final_value", r.final_value);
}

}  // namespace engine

namespace backtest {

void to_json(json& j, const BacktestConfig& c) {
  j = json{{"params", c.params},
           {"initial_q_c", c.initial_q_c},
           {"initial_q_b", c.initial_q_b},
           {"price_file", c.price_file},
           {"start", format_timestamp(c.start)},
           {"term_days", c.term_days},
           {"sample_interval", c.sample_interval}};
}

void from_json(const json& j, BacktestConfig& c) {
  read(j, "params", c.params);
  read(j, "initial_q_c", c.initial_q_c);
  read(j, "initial_q_b", c.initial_q_b);
  read(j, "price_file", c.price_file);
  const auto& start = j.at("start");
  c.start = start.is_string() ? parse_timestamp(start.get<std::string>())
                              : start.get<std::int64_t>();
  read(j, "term_days", c.term_days);
  if (auto it = j.find("sample_interval"); it != j.end()) {
    c.sample_interval =
        it->is_string() ? parse_duration(it->get<std::string>()) : it->get<std::int64_t>();
  }
  c.validate();
}

void to_json(json& j, const SeriesRow& r) {
  j = json{{"t", r.t},
           {"spot", r.spot},
           {"marginal_strike", r.marginal_strike},
           {"borrow_rate", r.borrow_rate},
           {"deposit_rate", r.deposit_rate},
           {"q_c", r.q_c},
           {"q_b", r.q_b},
           {"cumulative_borrow_flow", r.cumulative_borrow_flow},
           {"cumulative_lend_flow", r.cumulative_lend_flow},
           {"shortfall_margin", r.shortfall_margin}};
}

void from_json(const json& j, SeriesRow& r) {
  read(j, "t", r.t);
  read(j, "spot", r.spot);
  read(j, "marginal_strike", r.marginal_strike);
  read(j, "borrow_rate", r.borrow_rate);
  read(j, "deposit_rate", r.deposit_rate);
  read(j, "q_c", r.q_c);
  read(j, "q_b", r.q_b);
  read(j, "cumulative_borrow_flow", r.cumulative_borrow_flow);
  read(j, "cumulative_lend_flow", r.cumulative_lend_flow);
  read_optional(j, "shortfall_margin", r.shortfall_margin);
}

void to_json(json& j, const AgentBook& a) {
  j = json{{"cash", a.cash}, {"collateral", a.collateral}};
}

void from_json(const json& j, AgentBook& a) {
  read(j, "cash", a.cash);
  read(j, "collateral", a.collateral);
}

void to_json(json& j, const BacktestEvent& e) {
  j = json{{"t", e.t}, {"side", e.side}, {"message", e.message}};
}

void from_json(const json& j, BacktestEvent& e) {
  read(j, "t", e.t);
  read(j, "side", e.side);
  read(j, "message", e.message);
}

void to_json(json& j, const BacktestSummary& s) {
  j = json{{"initial_spot", s.initial_spot},
           {"final_spot", s.final_spot},
           {"initial_value", s.initial_value},
           {"amm_final_value", s.amm_final_value},
           {"hold_final_value", s.hold_final_value},
           {"amm_roi", s.amm_roi},
           {"hold_roi", s.hold_roi},
           {"outperformance", s.outperformance},
           {"borrow_trades", s.borrow_trades},
           {"lend_trades", s.lend_trades},
           {"borrower_agent", s.borrower_agent},
           {"lender_agent", s.lender_agent},
           {"settlement", s.settlement}};
}

void from_json(const json& j, BacktestSummary& s) {
  read(j, "initial_spot", s.initial_spot);
  read(j, "final_spot", s.final_spot);
  read(j, "initial_value", s.initial_value);
  read(j, "amm_final_value", s.amm_final_value);
  read(j, "hold_final_value", s.hold_final_value);
  read(j, "amm_roi", s.amm_roi);
  read(j, "hold_roi", s.hold_roi);
  read(j, "outperformance", s.outperformance);
  read(j, "borrow_trades", s.borrow_trades);
  read(j, "lend_trades", s.lend_trades);
  read(j, "borrower_agent", s.borrower_agent);
  read(j, "lender_agent", s.lender_agent);
  read(j, "settlement", s.settlement);
}

void to_json(json& j, const BacktestReport& r) {
  j = json{{"series", r.series},
           {"summary", r.summary},
           {"events", r.events},
           {"final_pool", r.final_pool}};
}

void from_json(const json& j, BacktestReport& r) {
  read(j, "series", r.series);
  read(j, "summary", r.summary);
  read_optional(j, "events", r.events);
  r.final_pool = j.at("final_pool").get<PoolState>();
}

}  // namespace backtest
}  // namespace zll
