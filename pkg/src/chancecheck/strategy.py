"""Evaluation of trading strategies against random baselines.

Covers trade-log and price ingestion, the market baseline win rate, the
track-record uncertainty, the rolling LIVE/VIRTUAL control gate, the
St. Petersburg doubling-strategy comparison and the coin-toss random
equity line.

Comparison conventions differ on purpose.  Track records count random
records with strictly more wins (``>``, switchable to ``>=``), the control
gate uses the equal-or-better tail over its window, the equity experiment
counts lines ending at or above the target, and the St. Petersburg
comparison counts strictly better outcomes.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import DomainError, ParseError
from .montecarlo import (
    McEstimate,
    SplitMix64,
    StreamBlock,
    derive_replicate_seeds,
    estimate_from_count,
    map_blocks,
)
from .probability import best_of_m, binom_sf


class Direction(enum.Enum):
    LONG = "long"
    SHORT = "short"


class Outcome(enum.Enum):
    WIN = "win"
    LOSS = "loss"


class Mode(enum.Enum):
    LIVE = "LIVE"
    VIRTUAL = "VIRTUAL"


@dataclass(frozen=True)
class TradeRecord:
    open_index: int
    close_index: int
    direction: Direction
    outcome: Outcome
    size: float | None = None

    def __post_init__(self):
        if self.open_index >= self.close_index:
            raise DomainError(
                f"open index {self.open_index} must be before close index {self.close_index}"
            )


TRADE_COLUMNS = ("open", "close", "direction", "outcome")
PRICE_COLUMNS = ("time", "close")


def _reader(stream: TextIO | str, delimiter: str):
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    return csv.reader(stream, delimiter=delimiter)


def ingest_trades(stream: TextIO | str, delimiter: str = ",") -> list[TradeRecord]:
    """Parse a trade log with header ``open,close,direction,outcome[,size]``.

    Errors carry the 1-based line number of the offending row.
    """
    rows = _reader(stream, delimiter)
    header = next(rows, None)
    if header is None:
        raise ParseError("missing header", 1)
    header = [h.strip().lower() for h in header]
    if tuple(header) not in (TRADE_COLUMNS, TRADE_COLUMNS + ("size",)):
        raise ParseError(
            f"header must be {','.join(TRADE_COLUMNS)}[,size], got {','.join(header)}", 1
        )
    has_size = len(header) == 5
    trades = []
    for row in rows:
        line = rows.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line)
        cells = [c.strip() for c in row]
        try:
            open_i, close_i = int(cells[0]), int(cells[1])
            direction = Direction(cells[2].lower())
            outcome = Outcome(cells[3].lower())
            size = float(cells[4]) if has_size and cells[4] else None
        except ValueError as exc:
            raise ParseError(f"malformed row: {exc}", line) from None
        try:
            trades.append(TradeRecord(open_i, close_i, direction, outcome, size))
        except DomainError as exc:
            raise DomainError(f"line {line}: {exc}") from None
    return trades


@dataclass(frozen=True)
class PriceSeries:
    times: tuple[str, ...]
    closes: np.ndarray = field(repr=False)

    def __post_init__(self):
        closes = np.asarray(self.closes, dtype=float)
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "times", tuple(str(t) for t in self.times))
        if closes.ndim != 1 or len(closes) != len(self.times):
            raise DomainError("times and closes must have the same length")
        if len(closes) < 2:
            raise DomainError("a price series needs at least 2 points")
        if not np.all(np.isfinite(closes)) or np.any(closes <= 0):
            raise DomainError("close prices must be positive")
        if not _strictly_increasing(self.times):
            raise DomainError("times must be strictly increasing")

    @classmethod
    def from_closes(cls, closes: Sequence[float]) -> "PriceSeries":
        return cls(tuple(str(i) for i in range(len(closes))), np.asarray(closes, float))

    def __len__(self):
        return len(self.closes)

    @property
    def moves(self) -> np.ndarray:
        return np.diff(self.closes)


def _strictly_increasing(labels: Sequence[str]) -> bool:
    # Numeric labels compare as numbers, anything else (ISO dates) as text.
    try:
        keys = [float(t) for t in labels]
    except ValueError:
        keys = list(labels)
    return all(a < b for a, b in zip(keys, keys[1:]))


def load_prices(stream: TextIO | str, delimiter: str = ",") -> PriceSeries:
    """Parse a price file with header ``time,close``."""
    rows = _reader(stream, delimiter)
    header = next(rows, None)
    if header is None or tuple(h.strip().lower() for h in header) != PRICE_COLUMNS:
        raise ParseError("header must be time,close", 1)
    times, closes = [], []
    for row in rows:
        line = rows.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", line)
        try:
            close = float(row[1])
        except ValueError:
            raise ParseError(f"bad close price {row[1]!r}", line) from None
        if not math.isfinite(close) or close <= 0:
            raise ParseError(f"close price must be positive, got {row[1]!r}", line)
        times.append(row[0].strip())
        closes.append(close)
    try:
        return PriceSeries(tuple(times), np.array(closes))
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def load_synthetic_prices() -> PriceSeries:
    """The bundled 400-day synthetic trending series."""
    text = resources.files("chancecheck").joinpath("data/synthetic_400.csv").read_text()
    return load_prices(text)


def make_trend_series(
    intervals: int, up_moves: int, seed: int, start: float = 100.0
) -> PriceSeries:
    """Unit-step series with exactly ``up_moves`` rises among ``intervals``
    moves, in an order shuffled by the seeded generator."""
    if not 0 <= up_moves <= intervals:
        raise DomainError("up_moves must lie in 0..intervals")
    if start - (intervals - up_moves) <= 0:
        raise DomainError("start price too low for the number of down moves")
    steps = [1.0] * up_moves + [-1.0] * (intervals - up_moves)
    rng = SplitMix64(seed)
    for i in range(len(steps) - 1, 0, -1):  # Fisher-Yates
        j = int(rng.random() * (i + 1))
        steps[i], steps[j] = steps[j], steps[i]
    closes = start + np.concatenate([[0.0], np.cumsum(steps)])
    return PriceSeries.from_closes(closes)


def baseline_win_prob(prices: PriceSeries, direction: Direction | str) -> float:
    """Fraction of consecutive intervals that move in the trade's favour.

    Flat intervals count against both directions.
    """
    direction = Direction(direction)
    moves = prices.moves
    favourable = moves > 0 if direction is Direction.LONG else moves < 0
    return float(np.count_nonzero(favourable)) / len(moves)


def win_count(trades: Iterable[TradeRecord]) -> tuple[int, int]:
    trades = list(trades)
    return sum(t.outcome is Outcome.WIN for t in trades), len(trades)


def track_record_uncertainty(
    trades: Sequence[TradeRecord], p0: float, attempts: int = 1, strict: bool = True
) -> float:
    """Probability that random trading at win rate ``p0`` beats this record,
    over ``attempts`` tried strategies.

    By default a random record must win strictly more trades; with
    ``strict=False`` an equal win count also counts.  Each trade is one
    Bernoulli trial regardless of its size.
    """
    wins, n = win_count(trades)
    if n == 0:
        raise DomainError("need at least one trade")
    if strict:
        if attempts < 1:
            raise DomainError("attempts must be at least 1")
        if wins == n:
            return 0.0
        wins += 1
    return best_of_m(wins, n, p0, attempts)


@dataclass(frozen=True)
class ControlState:
    window: int
    threshold: float
    p0: float
    recent: tuple[Outcome, ...] = ()
    mode: Mode = Mode.LIVE
    probability: float | None = None

    def __post_init__(self):
        if self.window < 1:
            raise DomainError("window must be at least 1")
        if not 0.0 < self.threshold < 1.0:
            raise DomainError("threshold must lie in (0, 1)")
        if not 0.0 <= self.p0 <= 1.0:
            raise DomainError("p0 must lie in [0, 1]")
        if len(self.recent) > self.window:
            raise DomainError("more recent outcomes than the window holds")


def control_step(state: ControlState, outcome: Outcome | str) -> ControlState:
    """Record one trade outcome and re-evaluate the gate.

    Trading stays LIVE while the equal-or-better probability of the last
    ``window`` outcomes is at most ``threshold`` and switches to VIRTUAL
    above it.  Outcomes are recorded in both modes.
    """
    outcome = Outcome(outcome)
    recent = (state.recent + (outcome,))[-state.window :]
    wins = sum(o is Outcome.WIN for o in recent)
    prob = binom_sf(wins, len(recent), state.p0)
    mode = Mode.VIRTUAL if prob > state.threshold else Mode.LIVE
    return replace(state, recent=recent, mode=mode, probability=prob)


def replay_control(
    outcomes: Iterable[Outcome | str], window: int, threshold: float, p0: float
) -> list[ControlState]:
    state = ControlState(window, threshold, p0)
    states = []
    for outcome in outcomes:
        state = control_step(state, outcome)
        states.append(state)
    return states


def _check_tosses(L: int) -> None:
    if isinstance(L, bool) or not isinstance(L, int) or L < 1:
        raise DomainError(f"L must be a positive integer, got {L!r}")


def st_petersburg_ev(L: int) -> float:
    """Expected gain of doubling after each loss over ``L`` fair tosses."""
    if L < 0:
        raise DomainError("L must be non-negative")
    return L / 2


def st_petersburg_ab(L: int) -> float:
    """Average bet of the doubling strategy, starting from a unit bet."""
    _check_tosses(L)
    return (L - 1) / 4 + 1


def st_petersburg_beat_prob(L: int) -> float:
    """Chance that ``L`` random fair bets of constant size AB earn strictly
    more than the doubling strategy's expected gain.

    With ``k`` wins the profit is ``(2k - L) * AB``; in integers the
    condition ``(2k - L)(L + 3)/4 > L/2`` reads ``(2k - L)(L + 3) > 2L``.
    """
    _check_tosses(L)
    k_min = next(k for k in range(L + 2) if k > L or (2 * k - L) * (L + 3) > 2 * L)
    if k_min > L:
        return 0.0
    return binom_sf(k_min, L, 0.5)


@dataclass(frozen=True)
class StPetersburgReport:
    L: int
    ev: float
    ab: float
    beat_prob: float
    boundary: bool  # single toss: the random strategy ties the 50% ceiling


def st_petersburg_report(L: int) -> StPetersburgReport:
    return StPetersburgReport(
        L=L,
        ev=st_petersburg_ev(L),
        ab=st_petersburg_ab(L),
        beat_prob=st_petersburg_beat_prob(L),
        boundary=L == 1,
    )


def st_petersburg_curve(l_max: int = 200, step: int = 10, l_min: int | None = None):
    """Reports for L = l_min, l_min + step, ..., up to l_max."""
    if step < 1:
        raise DomainError("step must be positive")
    start = step if l_min is None else l_min
    return [st_petersburg_report(L) for L in range(start, l_max + 1, step)]


def random_equity_line(prices: PriceSeries, seed: int) -> np.ndarray:
    """Equity of the coin-toss strategy, long only, one unit.

    Each day one coin is tossed (uniform < 1/2 is heads).  When flat,
    heads opens a position at that day's close; when holding, heads
    closes it.  ``equity[i]`` is the price change captured up to day i.
    """
    rng = SplitMix64(seed)
    moves = prices.moves
    equity = np.zeros(len(prices))
    holding = False
    total = 0.0
    for i, move in enumerate(moves):
        heads = rng.random() < 0.5
        holding = not heads if holding else heads
        if holding:
            total += move
        equity[i + 1] = total
    return equity


def _final_equities(moves: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    streams = StreamBlock(seeds)
    holding = np.zeros(len(seeds), dtype=bool)
    total = np.zeros(len(seeds))
    for move in moves:
        heads = streams.random() < 0.5
        holding = np.where(holding, ~heads, heads)
        total += np.where(holding, move, 0.0)
    return total


def random_final_equities(
    prices: PriceSeries, replicates: int, master: int, workers: int = 1
) -> np.ndarray:
    """Final equity of replicate ``i`` equals
    ``random_equity_line(prices, derive_replicate_seed(master, i))[-1]``."""
    moves = prices.moves
    parts = map_blocks(
        lambda a, b: _final_equities(moves, derive_replicate_seeds(master, a, b)),
        replicates,
        workers,
    )
    return np.concatenate(parts)


def equity_uncertainty(
    final_equity: float,
    prices: PriceSeries,
    replicates: int,
    master: int,
    confidence: float = 0.95,
    workers: int = 1,
) -> McEstimate:
    """Share of coin-toss equity lines ending at or above ``final_equity``."""
    if replicates < 100:
        raise DomainError("equity_uncertainty needs at least 100 replicates")
    finals = random_final_equities(prices, replicates, master, workers)
    hits = int(np.count_nonzero(finals >= final_equity))
    return estimate_from_count(hits, replicates, master, confidence)


def perfect_foresight_equity(prices: PriceSeries) -> float:
    """Equity of a long-only strategy that holds exactly on rising days."""
    moves = prices.moves
    return float(moves[moves > 0].sum())
