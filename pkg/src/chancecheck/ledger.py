"""Append-only registry of tested hypotheses.

Every attempt at a result counts against it: the uncertainty of a result
is the probability that at least one of the ``m`` attempts known in a
given knowledge scope reaches it by chance.  Scopes model who knows what:
a researcher sees only their own attempts, a reviewer sees everyone's.

On disk the ledger is JSON lines, one record per line::

    {"id": "a1", "agent": "ann", "ts": 1700000000, "n": 100, "k": 65, "p0": 0.5, "note": ""}
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass, field
from numbers import Integral, Real
from pathlib import Path
from typing import Iterable

from . import errata
from .errors import ConflictError, DomainError, NotFoundError, ParseError
from .probability import DEFAULT_INFORMATIVE_CUTOFF, best_of_m, combine_results

JSON_KEYS = ("id", "agent", "ts", "n", "k", "p0", "note")


class _AllAgents:
    def __repr__(self):
        return "ALL"


ALL = _AllAgents()
"""Knowledge scope covering every agent in the ledger."""


@dataclass(frozen=True)
class AttemptRecord:
    id: str
    agent: str
    timestamp: int
    n_predictions: int
    n_successes: int
    p0: float
    note: str = ""

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise DomainError("id must be a non-empty string")
        if not isinstance(self.agent, str) or not self.agent:
            raise DomainError("agent must be a non-empty string")
        for name in ("timestamp", "n_predictions", "n_successes"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, Integral):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.n_predictions < 0 or self.n_successes < 0:
            raise DomainError("counts must be non-negative")
        if self.n_successes > self.n_predictions:
            raise DomainError(
                f"n_successes={self.n_successes} exceeds n_predictions={self.n_predictions}"
            )
        if isinstance(self.p0, bool) or not isinstance(self.p0, Real):
            raise DomainError(f"p0 must be a real number, got {self.p0!r}")
        if not 0.0 <= float(self.p0) <= 1.0:
            raise DomainError(f"p0 must lie in [0, 1], got {self.p0}")
        if not isinstance(self.note, str):
            raise DomainError("note must be a string")

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "agent": self.agent,
            "ts": self.timestamp,
            "n": self.n_predictions,
            "k": self.n_successes,
            "p0": self.p0,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AttemptRecord":
        if not isinstance(obj, dict):
            raise DomainError("record must be a JSON object")
        keys = set(obj)
        unknown = keys - set(JSON_KEYS)
        if unknown:
            raise DomainError(f"unknown keys: {sorted(unknown)}")
        missing = set(JSON_KEYS) - keys
        if missing:
            raise DomainError(f"missing keys: {sorted(missing)}")
        return cls(
            id=obj["id"],
            agent=obj["agent"],
            timestamp=obj["ts"],
            n_predictions=obj["n"],
            n_successes=obj["k"],
            p0=obj["p0"],
            note=obj["note"],
        )


@dataclass(frozen=True)
class UncertaintyReport:
    result_id: str
    value: float
    attempts: int
    single_attempt: float
    warnings: list[str] = field(default_factory=list)


def _sort_key(rec: AttemptRecord):
    return (rec.timestamp, rec.id)


class Ledger:
    """In-memory ledger, optionally bound to a JSON-lines file.

    When bound, every :meth:`register` rewrites the file atomically before
    returning.  Reads work on an immutable snapshot, so concurrent readers
    always see a consistent ledger while a single writer appends.
    """

    def __init__(self, records: Iterable[AttemptRecord] = (), path=None):
        self._lock = threading.Lock()
        self._by_id: dict[str, AttemptRecord] = {}
        for rec in records:
            if rec.id in self._by_id:
                raise ConflictError(f"duplicate id {rec.id!r}")
            self._by_id[rec.id] = rec
        self._snapshot = tuple(sorted(self._by_id.values(), key=_sort_key))
        self.path = Path(path) if path is not None else None

    def __len__(self):
        return len(self._snapshot)

    def __iter__(self):
        return iter(self._snapshot)

    def __eq__(self, other):
        if not isinstance(other, Ledger):
            return NotImplemented
        return self._snapshot == other._snapshot

    @property
    def records(self) -> tuple[AttemptRecord, ...]:
        """Records ordered by (timestamp, id)."""
        return self._snapshot

    @property
    def agents(self) -> frozenset[str]:
        return frozenset(rec.agent for rec in self._snapshot)

    def get(self, record_id: str) -> AttemptRecord:
        try:
            return self._by_id[record_id]
        except KeyError:
            raise NotFoundError(f"unknown record id {record_id!r}") from None

    def register(self, record: AttemptRecord) -> str:
        with self._lock:
            if record.id in self._by_id:
                raise ConflictError(f"duplicate id {record.id!r}")
            by_id = dict(self._by_id)
            by_id[record.id] = record
            snapshot = tuple(sorted(by_id.values(), key=_sort_key))
            if self.path is not None:
                _write_atomic(snapshot, self.path)
            self._by_id = by_id
            self._snapshot = snapshot
        return record.id

    def _resolve_scope(self, scope) -> frozenset[str] | None:
        if scope is ALL:
            return None
        if isinstance(scope, str):
            scope = [scope]
        agents = frozenset(scope)
        if not agents:
            raise DomainError("an explicit scope needs at least one agent")
        unknown = agents - self.agents
        if unknown:
            raise NotFoundError(f"unknown agents in scope: {sorted(unknown)}")
        return agents

    def attempts_in_scope(
        self, result_id: str, scope=ALL, exclude: Iterable[str] = ()
    ) -> list[AttemptRecord]:
        """Attempts counted against ``result_id``: records by in-scope agents
        up to the result's timestamp, always including the result itself."""
        result = self.get(result_id)
        agents = self._resolve_scope(scope)
        skip = set(exclude) - {result_id}
        chosen = []
        for rec in self._snapshot:
            if rec.id in skip or rec.timestamp > result.timestamp:
                continue
            if rec.id == result_id or agents is None or rec.agent in agents:
                chosen.append(rec)
        return chosen

    def assess(
        self, result_id: str, scope=ALL, exclude: Iterable[str] = ()
    ) -> UncertaintyReport:
        result = self.get(result_id)
        attempts = self.attempts_in_scope(result_id, scope, exclude)
        m = len(attempts)
        k, n, p0 = result.n_successes, result.n_predictions, result.p0
        value = best_of_m(k, n, p0, m)
        warnings = []
        shapes = {(rec.n_predictions, rec.p0) for rec in attempts}
        if len(shapes) > 1:
            warnings.append(
                "attempts differ in size or baseline; each is treated as a "
                f"random attempt at {k}/{n} with p0={p0} (approximation)"
            )
        warnings += errata.best_of_m_warnings(k, n, p0, m, value)
        return UncertaintyReport(
            result_id=result_id,
            value=value,
            attempts=m,
            single_attempt=best_of_m(k, n, p0, 1),
            warnings=warnings,
        )

    def uncertainty(self, result_id: str, scope=ALL) -> float:
        """Probability that one of the attempts known in ``scope`` reaches the
        result's success count by chance."""
        return self.assess(result_id, scope).value

    def reviewer_combine(
        self, result_ids: Iterable[str], cutoff: float = DEFAULT_INFORMATIVE_CUTOFF
    ) -> float:
        """Uncertainty of the joint result formed from several results.

        Each component is assessed with full knowledge of the ledger; the
        other components are not counted as rival attempts, since they are
        parts of the same joint result.
        """
        ids = list(result_ids)
        if not ids:
            raise DomainError("reviewer_combine needs at least one result id")
        values = [self.assess(rid, ALL, exclude=ids).value for rid in ids]
        return combine_results(values, cutoff)


def _write_atomic(records: Iterable[AttemptRecord], path: Path) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def save(ledger: Ledger, path) -> None:
    _write_atomic(ledger.records, Path(path))


def load(path, bind: bool = False) -> Ledger:
    """Read a JSON-lines ledger. Blank lines are ignored."""
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = AttemptRecord.from_json(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
            except DomainError as exc:
                raise ParseError(str(exc), lineno) from None
            if rec.id in seen:
                raise ParseError(f"duplicate id {rec.id!r}", lineno)
            seen.add(rec.id)
            records.append(rec)
    return Ledger(records, path=path if bind else None)
