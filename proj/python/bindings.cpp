#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zll/arbitrage.hpp"
#include "zll/backtest.hpp"
#include "zll/engine.hpp"
#include "zll/payoffs.hpp"
#include "zll/pricing.hpp"
#include "zll/serialization.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_python(const py::object& obj) {
  return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_zll, m) {
  m.doc() = "Zero-liquidation loan AMM: quoting, arbitrage sizing, settlement and backtests.";

  py::register_exception<zll::Error>(m, "ZllError");

  py::enum_<zll::Side>(m, "Side")
      .value("borrow", zll::Side::borrow)
      .value("lend", zll::Side::lend);

  py::class_<zll::MarketParams>(m, "MarketParams")
      .def(py::init([](double alpha, double sigma, double s_bid, double s_ask, double term_years) {
             zll::MarketParams p;
             p.alpha = alpha;
             p.sigma = sigma;
             p.s_bid = s_bid;
             p.s_ask = s_ask;
             p.term_years = term_years;
             p.validate();
             return p;
           }),
           py::arg("alpha"), py::arg("sigma"), py::arg("s_bid") = 0.0, py::arg("s_ask") = 0.0,
           py::arg("term_years") = 1.0)
      .def_readwrite("alpha", &zll::MarketParams::alpha)
      .def_readwrite("sigma", &zll::MarketParams::sigma)
      .def_readwrite("s_bid", &zll::MarketParams::s_bid)
      .def_readwrite("s_ask", &zll::MarketParams::s_ask)
      .def_readwrite("term_years", &zll::MarketParams::term_years)
      .def("validate", &zll::MarketParams::validate);

  py::class_<zll::Quote>(m, "Quote")
      .def_readonly("side", &zll::Quote::side)
      .def_readonly("delta_q_c", &zll::Quote::delta_q_c)
      .def_readonly("delta_q_b", &zll::Quote::delta_q_b)
      .def_readonly("strike", &zll::Quote::strike)
      .def_readonly("cash_leg", &zll::Quote::cash_leg)
      .def_readonly("oblivious_put", &zll::Quote::oblivious_put)
      .def_readonly("implied_ltv", &zll::Quote::implied_ltv)
      .def_readonly("implied_rate_eq", &zll::Quote::implied_rate_eq)
      .def_readonly("implied_rate_table", &zll::Quote::implied_rate_table)
      .def("to_dict", [](const zll::Quote& q) { return to_python(q); });

  py::class_<zll::Position>(m, "Position")
      .def_readonly("side", &zll::Position::side)
      .def_readonly("delta_q_c", &zll::Position::delta_q_c)
      .def_readonly("delta_q_b", &zll::Position::delta_q_b)
      .def_readonly("strike", &zll::Position::strike)
      .def_readonly("cash_leg", &zll::Position::cash_leg);

  py::class_<zll::PoolState>(m, "PoolState")
      .def(py::init(&zll::PoolState::create), py::arg("q_c"), py::arg("q_b"))
      .def_static("from_dict", [](const py::object& d) { return zll::pool_from_json(from_python(d)); })
      .def("to_dict", [](const zll::PoolState& p) { return to_python(p); })
      .def_property_readonly("q_c", &zll::PoolState::q_c)
      .def_property_readonly("q_b", &zll::PoolState::q_b)
      .def_property_readonly("k", &zll::PoolState::k)
      .def_property_readonly("now_years", &zll::PoolState::now_years)
      .def_property_readonly("marginal_strike", &zll::PoolState::marginal_strike)
      .def_property_readonly("borrow_positions", &zll::PoolState::borrow_positions)
      .def_property_readonly("lend_positions", &zll::PoolState::lend_positions)
      .def("advance_to", &zll::PoolState::advance_to);

  m.def("oblivious_put_price",
        py::overload_cast<double, double, double, double>(&zll::pricing::oblivious_put_price),
        py::arg("spot"), py::arg("alpha"), py::arg("sigma"), py::arg("tau"));
  m.def("bs_call", &zll::pricing::bs_call, py::arg("spot"), py::arg("strike"), py::arg("sigma"),
        py::arg("tau"));
  m.def("bs_put", &zll::pricing::bs_put, py::arg("spot"), py::arg("strike"), py::arg("sigma"),
        py::arg("tau"));

  m.def("quote_borrow", &zll::engine::quote_borrow, py::arg("pool"), py::arg("params"),
        py::arg("delta_q_c"), py::arg("spot"));
  m.def("quote_lend", &zll::engine::quote_lend, py::arg("pool"), py::arg("params"),
        py::arg("delta_q_c"), py::arg("spot"));
  m.def("solve_lend_for_cash", &zll::engine::solve_lend_for_cash, py::arg("pool"),
        py::arg("params"), py::arg("cash"), py::arg("spot"));
  m.def("execute", &zll::engine::execute, py::arg("pool"), py::arg("quote"));
  m.def("shortfall_margin",
        [](const zll::PoolState& p) { return zll::engine::check_no_shortfall(p).margin; });
  m.def(
      "settle_expiry",
      [](const zll::PoolState& p, const zll::MarketParams& params, double spot) {
        return to_python(zll::engine::settle_expiry(p, params, spot));
      },
      py::arg("pool"), py::arg("params"), py::arg("spot"));

  m.def(
      "arb_signal",
      [](const zll::PoolState& p, const zll::MarketParams& params, double spot, double tau,
         zll::Side side) {
        const auto s = zll::arbitrage::arb_signal(p, params, spot, tau, side);
        py::dict d;
        d["active"] = s.active;
        d["edge"] = s.edge;
        d["strike"] = s.strike;
        return d;
      },
      py::arg("pool"), py::arg("params"), py::arg("spot"), py::arg("tau"), py::arg("side"));
  m.def(
      "find_equilibrium_trade",
      [](const zll::PoolState& p, const zll::MarketParams& params, double spot, double tau,
         zll::Side side) {
        const auto t = zll::arbitrage::find_equilibrium_trade(p, params, spot, tau, side);
        return py::make_tuple(t.delta_q_c, t.constrained);
      },
      py::arg("pool"), py::arg("params"), py::arg("spot"), py::arg("tau"), py::arg("side"));

  m.def("borrower_pnl", &zll::payoffs::borrower_pnl, py::arg("s_t"), py::arg("strike"),
        py::arg("cash_received"), py::arg("s_0"));
  m.def("lp_pnl", &zll::payoffs::lp_pnl, py::arg("s_t"), py::arg("strike"),
        py::arg("cash_out_per_unit"), py::arg("share"), py::arg("delta_q_c"));

  m.def(
      "run_backtest",
      [](const py::object& config) {
        auto c = from_python(config).get<zll::backtest::BacktestConfig>();
        return to_python(zll::backtest::run_backtest(c));
      },
      py::arg("config"), "Runs a backtest from a config dict and returns the report as a dict.");
}
