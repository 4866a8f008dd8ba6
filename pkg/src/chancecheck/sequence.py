"""Forecasts on a non-stationary system described by a state sequence.

A trace pairs state values ``F`` (1..C) with a strictly increasing clock
``T``.  A prediction event bets that the state equals ``predicted_value``
somewhere in an inclusive window of positions ``[a, b]`` (1-based).  A
random bettor placing the same bet at a uniformly random position of the
window wins with probability (matching positions) / (window length).

A winning forecast only counts as evidence when that probability is below
one: if the state never moved inside the window, any placement would have
won, so the event is fully dependent on its predecessor and contributes
a factor of 1 to the compound probability.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import errata
from .errors import DomainError, ParseError


@dataclass(frozen=True)
class SystemTrace:
    F: tuple[int, ...]
    T: tuple[int, ...]
    C: int | None = None

    def __post_init__(self):
        F = tuple(int(v) for v in self.F)
        T = tuple(int(v) for v in self.T)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "T", T)
        if not F:
            raise DomainError("trace must have at least one value")
        if len(F) != len(T):
            raise DomainError(f"F has {len(F)} values but T has {len(T)}")
        if any(t <= 0 for t in T):
            raise DomainError("times must be positive")
        if any(b <= a for a, b in zip(T, T[1:])):
            raise DomainError("times must be strictly increasing")
        c = self.C if self.C is not None else max(F)
        if any(not 1 <= v <= c for v in F):
            raise DomainError(f"state values must lie in 1..{c}")
        object.__setattr__(self, "C", c)

    @classmethod
    def from_states(cls, F: Sequence[int], C: int | None = None) -> "SystemTrace":
        """Trace on the unit clock T = 1, 2, ..."""
        return cls(tuple(F), tuple(range(1, len(F) + 1)), C)

    def __len__(self):
        return len(self.F)


@dataclass(frozen=True)
class PredictionEvent:
    a: int
    b: int
    predicted_value: int

    @property
    def window(self) -> tuple[int, int]:
        return self.a, self.b


class Dependence(enum.Enum):
    DEPENDENT = "dependent"
    INDEPENDENT = "independent"


def _check_event(trace: SystemTrace, event: PredictionEvent) -> None:
    if not 1 <= event.a <= event.b <= len(trace):
        raise DomainError(
            f"window [{event.a}, {event.b}] outside positions 1..{len(trace)}"
        )
    if not 1 <= event.predicted_value <= trace.C:
        raise DomainError(f"predicted value must lie in 1..{trace.C}")


def change_points(trace: SystemTrace) -> list[int]:
    """Clock times at which the state differs from the previous one."""
    F, T = trace.F, trace.T
    return [T[i] for i in range(1, len(F)) if F[i] != F[i - 1]]


def event_fraction(trace: SystemTrace, event: PredictionEvent) -> Fraction:
    _check_event(trace, event)
    window = trace.F[event.a - 1 : event.b]
    hits = sum(1 for v in window if v == event.predicted_value)
    return Fraction(hits, len(window))


def event_random_prob(trace: SystemTrace, event: PredictionEvent) -> float:
    """Chance that a bet placed at a random position of the window wins."""
    return float(event_fraction(trace, event))


def classify_pair(
    trace: SystemTrace, e1: PredictionEvent, e2: PredictionEvent
) -> Dependence:
    if e2.a < e1.a:
        raise DomainError("e2 must not start before e1")
    _check_event(trace, e1)
    if event_fraction(trace, e2) == 1:
        return Dependence.DEPENDENT
    return Dependence.INDEPENDENT


@dataclass(frozen=True)
class EventAssessment:
    event: PredictionEvent
    probability: float
    dependence: Dependence
    factor: float


@dataclass(frozen=True)
class CompoundReport:
    change_points: list[int]
    events: list[EventAssessment]
    compound: float
    warnings: list[str]


def assess_events(trace: SystemTrace, events: Sequence[PredictionEvent]) -> CompoundReport:
    """Per-event probabilities, dependence classes and the compound probability.

    Events must be realised wins, ordered by window start.
    """
    events = list(events)
    assessed = []
    warnings = []
    compound = Fraction(1)
    for i, ev in enumerate(events):
        frac = event_fraction(trace, ev)
        if i == 0:
            dep = Dependence.INDEPENDENT
        else:
            prev = events[i - 1]
            dep = classify_pair(trace, prev, ev)
            if ev.a <= prev.b and dep is Dependence.INDEPENDENT:
                warnings.append(
                    f"event {i + 1} window [{ev.a}, {ev.b}] overlaps the previous "
                    f"window [{prev.a}, {prev.b}]; counted as independent"
                )
        if frac == 0:
            warnings.append(
                f"event {i + 1} cannot have been a win: value {ev.predicted_value} "
                f"never occurs in [{ev.a}, {ev.b}]"
            )
        factor = Fraction(1) if dep is Dependence.DEPENDENT else frac
        compound *= factor
        warnings += errata.window_warnings(trace.F, ev.a, ev.b, ev.predicted_value, frac)
        assessed.append(EventAssessment(ev, float(frac), dep, float(factor)))
    return CompoundReport(change_points(trace), assessed, float(compound), warnings)


def compound_prob(trace: SystemTrace, events: Sequence[PredictionEvent]) -> float:
    """Probability that a random bettor matches all the winning forecasts."""
    if not events:
        raise DomainError("need at least one event")
    return assess_events(trace, events).compound


def coin_game_prob(flip_times: Sequence[float], bet_times: Sequence[float], sides: int = 2) -> float:
    """Compound probability of a run of winning bets on a coin that is only
    re-flipped at ``flip_times``.

    A bet is fresh evidence (factor ``1/sides``) only if a flip happened
    since the previous bet; otherwise it bets on an already-known state
    and its conditional probability is 1.  The first bet must follow a flip.
    """
    flips = sorted(flip_times)
    bets = sorted(bet_times)
    if not bets:
        raise DomainError("need at least one bet")
    if not flips or flips[0] > bets[0]:
        raise DomainError("the first bet must come after a flip")
    prob = Fraction(1)
    last_bet = None
    for bet in bets:
        fresh = last_bet is None or any(last_bet < f <= bet for f in flips)
        if fresh:
            prob *= Fraction(1, sides)
        last_bet = bet
    return float(prob)


def parse_trace(text: str) -> SystemTrace:
    """Parse ``F: v1 v2 ...`` and ``T: t1 t2 ...`` lines."""
    rows = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        label, sep, rest = line.partition(":")
        label = label.strip()
        if not sep or label not in ("F", "T"):
            raise ParseError("expected a line starting with 'F:' or 'T:'", lineno)
        if label in rows:
            raise ParseError(f"duplicate {label} line", lineno)
        try:
            rows[label] = (lineno, [int(tok) for tok in rest.split()])
        except ValueError:
            raise ParseError(f"non-integer value in {label} line", lineno) from None
    if set(rows) != {"F", "T"}:
        raise ParseError("trace needs both an F line and a T line")
    try:
        return SystemTrace(tuple(rows["F"][1]), tuple(rows["T"][1]))
    except DomainError as exc:
        raise ParseError(str(exc), rows["F"][0]) from None


def parse_events(text: str) -> list[PredictionEvent]:
    """Parse one ``a b value`` event per line."""
    events = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected 'a b value'", lineno)
        try:
            a, b, v = (int(x) for x in parts)
        except ValueError:
            raise ParseError("event fields must be integers", lineno) from None
        events.append(PredictionEvent(a, b, v))
    for prev, cur in zip(events, events[1:]):
        if cur.a < prev.a:
            raise ParseError("events must be ordered by window start")
    return events
