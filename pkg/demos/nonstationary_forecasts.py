"""
Wins that do not count twice
============================

A system sits in state 1 or 2 and switches now and then.  Predicting
"state 2 inside this window" is easy once the system has already switched,
so a second win inside an unchanged stretch adds no evidence.
"""

from chancecheck.sequence import (
    PredictionEvent,
    SystemTrace,
    assess_events,
    change_points,
    coin_game_prob,
)

trace = SystemTrace.from_states([1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 2])
print("switches at T =", change_points(trace))

spot_the_switch = PredictionEvent(1, 8, 2)
stay_in_two = PredictionEvent(9, 12, 2)
later_two = PredictionEvent(9, 20, 2)

for events in ([spot_the_switch], [spot_the_switch, stay_in_two], [spot_the_switch, later_two]):
    report = assess_events(trace, events)
    parts = ", ".join(f"[{e.event.a},{e.event.b}] p={e.probability:.4f} {e.dependence.value}" for e in report.events)
    print(f"{parts}\n  compound = {report.compound:.4f}")
    for w in report.warnings:
        print("  note:", w)

# A coin flipped once and bet on twice is one bet, not two.
print("one flip, two bets:", coin_game_prob([0], [1, 2]))
print("two flips, two bets:", coin_game_prob([0, 1.5], [1, 2]))
