"""
Terms, canonical forms and reduction
"""
import random

import numpy as np

from steinerq import builtin_model, canonicalize, equiv, is_reduced, parse, reduce

## Parsing is left-associative and printing fully parenthesizes
t = parse("x1 * x2 * x2")
print("parsed:   ", t)
print("canonical:", canonicalize(parse("x3*(x2*x1)")))
print("x1*x2 ~ x2*x1:", equiv(parse("x1*x2"), parse("x2*x1")))

## Reduction removes every x*x and x*(x*y) pattern
for text in ["(x1*x2)*x2", "x2*(x1*x2)", "((x1*x2)*x2)*x3", "(x1*x3)*(x2*x3)"]:
    s = parse(text)
    print(f"{text:>18} reduced={is_reduced(s)!s:5} -> {reduce(s)}")

## A reduced term takes the same value as the original in any model
fano = builtin_model(7)
rng = random.Random(0)
s = parse("((x1*x3)*x2)*((x1*x3)*x1)")
r = reduce(s)
print(s, "->", r)
print("agree on all 343 Fano assignments:", np.array_equal(fano.evaluate_all(s, 3), fano.evaluate_all(r, 3)))
