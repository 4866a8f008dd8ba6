"""Published worked examples whose printed figures disagree with the formulas.

Reports surface these as warnings whenever a computation hits one of the
scenarios, so the computed value and the printed one are both visible.
"""

from __future__ import annotations

# Ten-participant project: best of 10 attempts at 65/100 with p=1/2.
# 1-(1-0.00176)**10 = 0.0175; the printed 16% corresponds to m = 100.
_BEST_OF_M_PRINTED = {(65, 100, 0.5, 10): 0.16}

# Reference trace for the non-stationary sequence examples.
REFERENCE_TRACE_F = (1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 2)

# Window [9, 20] predicting 2 holds five 2s in twelve positions; printed as 5/7.
_WINDOW_PRINTED = {(9, 20, 2): "5/7"}


def best_of_m_warnings(k: int, n: int, p: float, m: int, computed: float) -> list[str]:
    printed = _BEST_OF_M_PRINTED.get((k, n, p, m))
    if printed is None:
        return []
    return [
        f"the published worked example for {k}/{n} at p={p} over {m} attempts "
        f"quotes {printed:.0%}; the best-of-m formula gives {computed:.4%} "
        f"({printed:.0%} corresponds to about 100 attempts)"
    ]


def window_warnings(f_values, a: int, b: int, value: int, computed) -> list[str]:
    if tuple(f_values) != REFERENCE_TRACE_F:
        return []
    printed = _WINDOW_PRINTED.get((a, b, value))
    if printed is None:
        return []
    return [
        f"the published worked example prints P = {printed} for window [{a}, {b}] "
        f"-> {value}; counting positions gives {computed} "
        f"(favourable / total positions in the window)"
    ]
