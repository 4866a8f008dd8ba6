"""
Every attempt counts
====================

A ten-person team tests ideas against 100 fair predictions each.  Only the
best result (65/100) gets written up.  The ledger keeps all attempts, so
the reported uncertainty depends on whose attempts the reader knows about.
"""

import tempfile
from pathlib import Path

from chancecheck import ALL, AttemptRecord, Ledger
from chancecheck.ledger import load

workdir = Path(tempfile.mkdtemp())
ledger = Ledger(path=workdir / "team.jsonl")

for i, hits in enumerate([48, 52, 55, 50, 47, 58, 51, 53, 49]):
    ledger.register(AttemptRecord(f"idea-{i}", f"member{i}", i, 100, hits, 0.5))
ledger.register(AttemptRecord("idea-9", "member9", 9, 100, 65, 0.5, note="the one in the report"))

own = ledger.uncertainty("idea-9", scope={"member9"})
print(f"author's own view (1 attempt): {own:.2%}")

team = ledger.assess("idea-9", ALL)
print(f"team view ({team.attempts} attempts): {team.value:.2%}")
for w in team.warnings:
    print("  note:", w)

# The file on disk is the same ledger.
print("reloaded equal:", load(workdir / "team.jsonl") == ledger)
