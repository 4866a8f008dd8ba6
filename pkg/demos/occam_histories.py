"""
Counting what a hypothesis history predicts
===========================================

Binary sequences of length 3.  Each hypothesis picks out the sequences it
predicts; a history is judged by the union of everything it has predicted,
because a random guesser gets credit for all of it.
"""

from chancecheck.occam import Hypothesis, SequenceSpace, compare, nph, ntph, prob_true

space = SequenceSpace(C=2, N=3)

first_zero = Hypothesis(0, predicate=lambda s: s[0] == 0, name="first=0")
last_zero = Hypothesis(1, predicate=lambda s: s[-1] == 0, name="last=0")

print("NPH(first=0) =", nph(first_zero, space), "of", space.size)
history = [first_zero, last_zero]
print("NTPH(first=0, last=0) =", ntph(history, space))
print("P(not just luck) =", prob_true(history, space))

# A sharp final hypothesis does not rescue a history that tried everything.
sharp = Hypothesis(2, accepted=[(1, 1, 1)], name="all ones")
focused = [Hypothesis(0, predicate=lambda s: s[0] == 1 and s[1] == 1, name="starts 11")]
result = compare(history + [sharp], focused, space)
print(result.case, "->", result.preferred)
print(f"  NPH {result.nph1} vs {result.nph2}, NTPH {result.ntph1} vs {result.ntph2}")
