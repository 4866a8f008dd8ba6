"""Hypotheses as predictors over an enumerable sequence space.

An experiment observes ``N`` values of a variable with ``C`` symbols, so
there are ``C**N`` possible sequences.  A hypothesis accepts a subset of
them.  What matters for judging the latest hypothesis is not only how
many sequences it predicts (NPH) but how many the whole history of
hypotheses tried so far predicts between them (NTPH, the union): the
chance that the history fits uniformly random data is ``NTPH / C**N``.

All counts are exact, by enumerating the space as a boolean mask indexed
by the base-``C`` value of each sequence (first symbol most significant).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BudgetExceededError, DomainError, ParseError

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class SequenceSpace:
    C: int
    N: int
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.C < 2:
            raise DomainError("C must be at least 2")
        if self.N < 1:
            raise DomainError("N must be at least 1")

    @property
    def size(self) -> int:
        return self.C**self.N

    def check_budget(self) -> None:
        if self.size > self.budget:
            raise BudgetExceededError(
                f"C**N = {self.C}**{self.N} = {self.size} exceeds budget {self.budget}"
            )

    def sequences(self) -> np.ndarray:
        """All sequences as a (C**N, N) array, row i being i in base C."""
        self.check_budget()
        idx = np.arange(self.size, dtype=np.int64)
        powers = self.C ** np.arange(self.N - 1, -1, -1, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % self.C

    def index_of(self, seq: Sequence[int]) -> int:
        if len(seq) != self.N:
            raise DomainError(f"sequence length {len(seq)} != N={self.N}")
        index = 0
        for symbol in seq:
            if not 0 <= symbol < self.C:
                raise DomainError(f"symbol {symbol} outside 0..{self.C - 1}")
            index = index * self.C + int(symbol)
        return index


class Hypothesis:
    """A predictor developed at time ``t``.

    Give exactly one of ``accepted`` (explicit sequences), ``predicate``
    (called on each sequence as a tuple) or ``vectorized`` (called once on
    the full ``(C**N, N)`` array, returning a boolean mask).
    """

    def __init__(
        self,
        t: int,
        accepted: Iterable[Sequence[int]] | None = None,
        predicate: Callable[[tuple], bool] | None = None,
        vectorized: Callable[[np.ndarray], np.ndarray] | None = None,
        name: str | None = None,
    ):
        given = [x is not None for x in (accepted, predicate, vectorized)]
        if sum(given) != 1:
            raise DomainError("give exactly one of accepted, predicate, vectorized")
        self.t = t
        self.name = name or f"H({t})"
        self._accepted = None if accepted is None else [tuple(s) for s in accepted]
        self._predicate = predicate
        self._vectorized = vectorized

    def __repr__(self):
        return f"Hypothesis(t={self.t}, name={self.name!r})"

    def mask(self, space: SequenceSpace) -> np.ndarray:
        space.check_budget()
        if self._accepted is not None:
            out = np.zeros(space.size, dtype=bool)
            for seq in self._accepted:
                out[space.index_of(seq)] = True
            return out
        if self._vectorized is not None:
            out = np.asarray(self._vectorized(space.sequences()), dtype=bool)
            if out.shape != (space.size,):
                raise DomainError("vectorized predicate must return one flag per sequence")
            return out
        rows = space.sequences()
        return np.fromiter(
            (bool(self._predicate(tuple(int(v) for v in row))) for row in rows),
            dtype=bool,
            count=space.size,
        )


def _ordered(history: Sequence[Hypothesis]) -> list[Hypothesis]:
    hs = list(history)
    for prev, cur in zip(hs, hs[1:]):
        if not prev.t < cur.t:
            raise DomainError("hypothesis times must be strictly increasing")
    return hs


def nph(h: Hypothesis, space: SequenceSpace) -> int:
    """Number of sequences the hypothesis predicts."""
    return int(np.count_nonzero(h.mask(space)))


def union_mask(history: Sequence[Hypothesis], space: SequenceSpace) -> np.ndarray:
    out = np.zeros(space.size, dtype=bool)
    for h in _ordered(history):
        out |= h.mask(space)
    return out


def ntph(history: Sequence[Hypothesis], space: SequenceSpace) -> int:
    """Number of sequences predicted by at least one hypothesis in the history."""
    space.check_budget()
    return int(np.count_nonzero(union_mask(history, space)))


def random_predict_fraction(history: Sequence[Hypothesis], space: SequenceSpace) -> Fraction:
    return Fraction(ntph(history, space), space.size)


def random_predict_prob(history: Sequence[Hypothesis], space: SequenceSpace) -> float:
    """Chance that the history fits a uniformly random sequence: NTPH / C**N."""
    return float(random_predict_fraction(history, space))


def prob_true(history: Sequence[Hypothesis], space: SequenceSpace) -> float:
    """1 - NTPH / C**N, computed exactly before rounding."""
    return float(1 - random_predict_fraction(history, space))


class Case(enum.Enum):
    """Sign pattern of (NPH1 - NPH2, NTPH1 - NTPH2)."""

    MORE_NPH_MORE_NTPH = 1
    MORE_NPH_LESS_NTPH = 2
    LESS_NPH_LESS_NTPH = 3
    LESS_NPH_MORE_NTPH = 4
    TIE_NPH = "tie-nph"
    TIE_NTPH = "tie-ntph"
    TIE_BOTH = "tie-both"


@dataclass(frozen=True)
class Comparison:
    nph1: int
    nph2: int
    ntph1: int
    ntph2: int
    case: Case
    preferred: str  # "H1", "H2" or "tie"
    prob_true1: float
    prob_true2: float


def _case(nph1, nph2, ntph1, ntph2) -> Case:
    if nph1 == nph2 and ntph1 == ntph2:
        return Case.TIE_BOTH
    if nph1 == nph2:
        return Case.TIE_NPH
    if ntph1 == ntph2:
        return Case.TIE_NTPH
    if nph1 > nph2:
        return Case.MORE_NPH_MORE_NTPH if ntph1 > ntph2 else Case.MORE_NPH_LESS_NTPH
    return Case.LESS_NPH_LESS_NTPH if ntph1 < ntph2 else Case.LESS_NPH_MORE_NTPH


def compare(
    h1: Sequence[Hypothesis], h2: Sequence[Hypothesis], space: SequenceSpace
) -> Comparison:
    """Compare the latest hypotheses of two histories.

    The history that predicts fewer sequences overall is preferred; with
    equal unions, the simpler latest hypothesis (smaller NPH) wins.
    """
    h1, h2 = _ordered(h1), _ordered(h2)
    if not h1 or not h2:
        raise DomainError("both histories must be non-empty")
    n1, n2 = nph(h1[-1], space), nph(h2[-1], space)
    t1, t2 = ntph(h1, space), ntph(h2, space)
    if t1 != t2:
        preferred = "H1" if t1 < t2 else "H2"
    elif n1 != n2:
        preferred = "H1" if n1 < n2 else "H2"
    else:
        preferred = "tie"
    return Comparison(
        nph1=n1,
        nph2=n2,
        ntph1=t1,
        ntph2=t2,
        case=_case(n1, n2, t1, t2),
        preferred=preferred,
        prob_true1=float(1 - Fraction(t1, space.size)),
        prob_true2=float(1 - Fraction(t2, space.size)),
    )


def parse_rule_table(text: str, t: int = 0, name: str | None = None):
    """Parse a rule table: ``C=<c> N=<n>`` header, then one accepted
    sequence per line as space-separated symbols.  Returns (space, hypothesis)."""
    lines = text.splitlines()
    header_at = None
    for i, line in enumerate(lines):
        if line.strip():
            header_at = i
            break
    if header_at is None:
        raise ParseError("missing 'C=<c> N=<n>' header", 1)
    params = {}
    for token in lines[header_at].split():
        key, sep, value = token.partition("=")
        if not sep or key not in ("C", "N"):
            raise ParseError(f"bad header token {token!r}", header_at + 1)
        try:
            params[key] = int(value)
        except ValueError:
            raise ParseError(f"bad header value {token!r}", header_at + 1) from None
    if set(params) != {"C", "N"}:
        raise ParseError("header must define both C and N", header_at + 1)
    try:
        space = SequenceSpace(params["C"], params["N"])
    except DomainError as exc:
        raise ParseError(str(exc), header_at + 1) from None
    accepted = []
    for lineno, line in enumerate(lines[header_at + 1 :], start=header_at + 2):
        if not line.strip():
            continue
        try:
            seq = tuple(int(tok) for tok in line.split())
            space.index_of(seq)
        except (ValueError, DomainError) as exc:
            raise ParseError(f"bad sequence {line.strip()!r}: {exc}", lineno) from None
        accepted.append(seq)
    return space, Hypothesis(t, accepted=accepted, name=name)


def load_history(paths: Sequence) -> tuple[SequenceSpace, list[Hypothesis]]:
    """Load rule-table files as a history, ``t`` following list order."""
    space = None
    history = []
    for t, path in enumerate(paths):
        path = Path(path)
        sp, h = parse_rule_table(path.read_text(encoding="utf-8"), t=t, name=path.name)
        if space is None:
            space = sp
        elif (sp.C, sp.N) != (space.C, space.N):
            raise ParseError(f"{path}: space C={sp.C} N={sp.N} differs from first file")
        history.append(h)
    if space is None:
        raise DomainError("no rule-table files given")
    return space, history
