"""
Judging trading strategies by what chance could do
==================================================

A stock rises on 60% of days.  Strategy A buys on coin flips and wins 300
of 500 trades.  Strategy B only sells, wins 250 of 500 against a 40%
baseline, and ends flat.  Profit says A; chance says B.
"""

from chancecheck.strategy import (
    Direction,
    Outcome,
    TradeRecord,
    baseline_win_prob,
    equity_uncertainty,
    load_synthetic_prices,
    make_trend_series,
    perfect_foresight_equity,
    random_equity_line,
    replay_control,
    st_petersburg_curve,
    track_record_uncertainty,
)


def record(wins, losses, direction):
    outcomes = [Outcome.WIN] * wins + [Outcome.LOSS] * losses
    return [TradeRecord(i, i + 1, direction, o) for i, o in enumerate(outcomes)]


stock = make_trend_series(1000, 600, seed=1, start=500)
p_long = baseline_win_prob(stock, Direction.LONG)
p_short = baseline_win_prob(stock, Direction.SHORT)
a = track_record_uncertainty(record(300, 200, Direction.LONG), p_long)
b = track_record_uncertainty(record(250, 250, Direction.SHORT), p_short)
print(f"A: chance beats it with probability {a:.1%}")
print(f"B: chance beats it with probability {b:.2g}")

# Gate a live strategy on its last 10 trades.
script = ["win"] * 8 + ["loss"] * 2 + ["loss", "win", "loss", "loss"]
for i, s in enumerate(replay_control(script, window=10, threshold=0.1, p0=0.5), start=1):
    print(f"  trade {i:2d} {script[i - 1]:4s} p={s.probability:.4f} {s.mode.value}")

# Doubling after each loss versus flat random bets of the same average size.
for row in st_petersburg_curve(200, 50):
    print(f"L={row.L:3d} EV={row.ev:5.1f} AB={row.ab:6.2f} random beats it: {row.beat_prob:.3f}")

# Coin-toss equity lines on the bundled 400-day series.
prices = load_synthetic_prices()
line = random_equity_line(prices, seed=11)
print(f"one random line ends at {line[-1]:+.0f}")
est = equity_uncertainty(line[-1], prices, replicates=10_000, master=11)
print(f"  share of random lines doing as well: {est.point:.3f}")
best = perfect_foresight_equity(prices)
print(f"perfect foresight ends at {best:+.0f}, share: {equity_uncertainty(best, prices, 10_000, 11).point}")
