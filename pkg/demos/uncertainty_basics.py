"""
How likely is a result to be luck?
==================================

A forecaster calls 8 of 10 coin tosses.  The question is not how good 8/10
looks but how often pure guessing would do at least as well.
"""

from chancecheck import best_of_m, binom_pmf, binom_sf, combine_results

single = binom_sf(8, 10, 0.5)
print(f"8/10 by guessing: {single:.4f} ({single:.1%})")

# The same forecaster had one earlier, unreported attempt.
print(f"best of 2 attempts: {best_of_m(8, 10, 0.5, 2):.1%}")

# More data shrinks the luck explanation fast.
print(f"600/1000 by guessing: {binom_sf(600, 1000, 0.5):.3g}")
print(f"65/100 by guessing: {binom_sf(65, 100, 0.5):.4%}")

# Ten people each try once; the best of them reports 65/100.
for m in (1, 10, 100):
    print(f"  65/100 as the best of {m:3d} tries: {best_of_m(65, 100, 0.5, m):.2%}")

# Rare events: 50 hits in a million trials at p = 5e-5 ...
print(f"exactly 50 in 1e6: {binom_pmf(50, 10**6, 5e-5):.2%}")
print(f"more than 50 in 1e6: {binom_sf(51, 10**6, 5e-5):.1%}")
# ... versus 5 hits in only 10 trials at the same rate.
print(f"exactly 5 in 10: {binom_pmf(5, 10, 5e-5):.2g}")

# Two independent 1% results support each other; a useless one dilutes.
print(f"two 1% results: {combine_results([0.01, 0.01]):.2%}")
print(f"1% result plus a 100% one: {combine_results([0.01, 1.0]):.2%}")
