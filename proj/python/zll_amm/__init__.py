from ._zll import (
    MarketParams,
    PoolState,
    Position,
    Quote,
    Side,
    ZllError,
    arb_signal,
    borrower_pnl,
    bs_call,
    bs_put,
    execute,
    find_equilibrium_trade,
    lp_pnl,
    oblivious_put_price,
    quote_borrow,
    quote_lend,
    run_backtest,
    settle_expiry,
    shortfall_margin,
    solve_lend_for_cash,
)

__all__ = [
    "MarketParams",
    "PoolState",
    "Position",
    "Quote",
    "Side",
    "ZllError",
    "arb_signal",
    "borrower_pnl",
    "bs_call",
    "bs_put",
    "execute",
    "find_equilibrium_trade",
    "lp_pnl",
    "oblivious_put_price",
    "quote_borrow",
    "quote_lend",
    "run_backtest",
    "settle_expiry",
    "shortfall_margin",
    "solve_lend_for_cash",
]
