#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "zll/core.hpp"

namespace zll::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// The bundled numerical-example market: pool, params, spot and the trade
/// sizes used to regenerate the borrower and lender term tables.
struct Fixture {
  MarketParams params;
  PoolState pool = PoolState::create(1.0, 1.0);
  double spot = 0.0;
  std::vector<double> borrow_sizes;  // collateral units
  std::vector<double> lend_cash;     // cash paid by the lender
};

Fixture default_fixture();
Fixture fixture_from_json(const nlohmann::json& j);

struct TermTables {
  std::vector<Quote> borrow;
  std::vector<Quote> lend;
};

/// Borrow rows come from quote_borrow at each size; lend rows from
/// solve_lend_for_cash at each cash amount.
TermTables make_tables(const Fixture& fixture);

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Returns 0 on success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zll::cli
