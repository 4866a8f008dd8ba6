"""
Simulating the random strategy
==============================

The closed-form tail probability can be checked by brute force: simulate
many random strategies and count how often they match the result.  The
seed derivation is stateless, so the count does not depend on threads.
"""

from chancecheck import ReplicateModel, binom_sf, estimate_equal_or_better, run_replicates

model = ReplicateModel(trial_count=10, p=0.5, success_threshold=8)
est = estimate_equal_or_better(model, replicates=100_000, master=2024, confidence=0.99)
print(f"simulated: {est.point:.5f}  99% interval [{est.lower:.5f}, {est.upper:.5f}]")
print(f"exact:     {binom_sf(8, 10, 0.5):.5f}")

for workers in (1, 4, 8):
    print(f"{workers} worker(s):", run_replicates(model, 100_000, master=2024, workers=workers))

# Twice the replicates, roughly 1/sqrt(2) the interval width.
for n in (25_000, 50_000, 100_000, 200_000):
    e = estimate_equal_or_better(model, n, master=7)
    print(f"{n:7d} replicates: width {e.upper - e.lower:.5f}")
