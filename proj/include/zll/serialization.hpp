#pragma once

// JSON mapping for the public types. Field names are lower_snake_case and
// mirror the C++ members; doubles round-trip exactly.

#include "json.hpp"
#include "zll/backtest.hpp"
#include "zll/core.hpp"
#include "zll/engine.hpp"

namespace zll {

void to_json(nlohmann::json& j, Side side);
void from_json(const nlohmann::json& j, Side& side);

void to_json(nlohmann::json& j, const MarketParams& p);
void from_json(const nlohmann::json& j, MarketParams& p);

void to_json(nlohmann::json& j, const Position& p);
void from_json(const nlohmann::json& j, Position& p);

void to_json(nlohmann::json& j, const Quote& q);
void from_json(const nlohmann::json& j, Quote& q);

void to_json(nlohmann::json& j, const OptionQuote& q);
void from_json(const nlohmann::json& j, OptionQuote& q);

void to_json(nlohmann::json& j, const PricePoint& p);
void from_json(const nlohmann::json& j, PricePoint& p);

void to_json(nlohmann::json& j, const PoolState& pool);
/// Accepts a full snapshot or a bootstrap object with just q_c and q_b.
PoolState pool_from_json(const nlohmann::json& j);

namespace engine {
void to_json(nlohmann::json& j, const ShortfallCheck& c);
void to_json(nlohmann::json& j, const SettlementFlow& f);
void from_json(const nlohmann::json& j, SettlementFlow& f);
void to_json(nlohmann::json& j, const SettlementReport& r);
void from_json(const nlohmann::json& j, SettlementReport& r);
}  // namespace engine

namespace backtest {
void to_json(nlohmann::json& j, const BacktestConfig& c);
/// start may be an ISO-8601 string or epoch seconds; sample_interval may be
/// seconds or a duration string such as "1d" or "15m".
void from_json(const nlohmann::json& j, BacktestConfig& c);
void to_json(nlohmann::json& j, const SeriesRow& r);
void from_json(const nlohmann::json& j, SeriesRow& r);
void to_json(nlohmann::json& j, const AgentBook& a);
void from_json(const nlohmann::json& j, AgentBook& a);
void to_json(nlohmann::json& j, const BacktestEvent& e);
void from_json(const nlohmann::json& j, BacktestEvent& e);
void to_json(nlohmann::json& j, const BacktestSummary& s);
void from_json(const nlohmann::json& j, BacktestSummary& s);
void to_json(nlohmann::json& j, const BacktestReport& r);
void from_json(const nlohmann::json& j, BacktestReport& r);
}  // namespace backtest

}  // namespace zll

namespace nlohmann {
template <>
struct adl_serializer<zll::PoolState> {
  static zll::PoolState from_json(const json& j) { return zll::pool_from_json(j); }
  static void to_json(json& j, const zll::PoolState& pool) { zll::to_json(j, pool); }
};
}  // namespace nlohmann
