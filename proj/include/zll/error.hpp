#pragma once

#include <stdexcept>
#include <string>

namespace zll {

enum class ErrorKind {
  domain,
  uneconomic_trade,
  insufficient_liquidity,
  drains_collateral,
  no_solution,
  stale_quote,
  shortfall,
  not_expired,
  signal_inactive,
  parse,
  coverage,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for every failure raised by the library. The kind lets callers
/// (the CLI, the Python module) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an executed trade would break the no-shortfall condition.
/// margin is the post-trade (available liquidity - worst-case payout); it is <= 0.
class ShortfallError : public Error {
 public:
  ShortfallError(const std::string& what, double margin)
      : Error(ErrorKind::shortfall, what), margin_(margin) {}

  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// Parse failure with the 1-based line number of the offending input line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::parse, what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void throw_domain(const std::string& what) {
  throw Error(ErrorKind::domain, what);
}

}  // namespace zll
