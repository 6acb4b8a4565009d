#!/usr/bin/env python3
"""Exact z-score arithmetic for the three-document Delta fixture.

Function words: the, of. Docs d1 and d2 form the accepted corpus; d3 is the
candidate. Statistics pool all three documents (population std); the centroid
is the mean of d1 and d2.
"""
from fractions import Fraction as F
import sympy

docs = {
    "d1": "The theory of the firm",                     # the 2/5, of 1/5
    "d2": "A model of growth and of trade in the west",  # the 1/10, of 2/10
    "d3": "The cat sat on the mat by the door",          # the 3/9, of 0
}
words = ["the", "of"]


def freqs(text):
    toks = text.lower().split()
    return [F(toks.count(w), len(toks)) for w in words]


f = {k: freqs(v) for k, v in docs.items()}
pooled = [f["d1"], f["d2"], f["d3"]]
centre = [(f["d1"][i] + f["d2"][i]) / 2 for i in range(2)]
total = 0
for i in range(2):
    mean = sum(d[i] for d in pooled) / 3
    var = sum((d[i] - mean) ** 2 for d in pooled) / 3
    sd = sympy.sqrt(sympy.Rational(var.numerator, var.denominator))
    total += abs((sympy.Rational(f["d3"][i].numerator, f["d3"][i].denominator) -
                  sympy.Rational(centre[i].numerator, centre[i].denominator)) / sd)
delta = sympy.nsimplify(total / 2)
print("delta exact:", sympy.simplify(delta))
print("delta: %.17g" % float(sympy.N(delta, 30)))
print("score: %.17g" % float(sympy.N(1 / (1 + delta), 30)))
