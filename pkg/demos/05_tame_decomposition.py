"""
Decomposing automorphisms into elementary ones
"""
import random

from steinerq import FreeModel, elementary, tame_decompose, verify_tame
from steinerq.automorph import compose, is_irreducible
from steinerq.terms import count_var, enumerate_reduced

m = FreeModel(3)

## Swapping two generators takes three elementary steps
dec = tame_decompose(m, ["x2", "x1", "x3"])
print([str(f) for f in dec.factors])

## A random product of elementary automorphisms
rng = random.Random(1)
shifts = enumerate_reduced(3, 2)
factors = []
for _ in range(4):
    i = rng.randint(1, 3)
    factors.append(elementary(m, i, rng.choice([s for s in shifts if not count_var(s, i)])))
spec = compose(m, factors)
print("images:", [str(t) for t in spec.images])
print("first witness:", is_irreducible(m, spec.images))

dec = tame_decompose(m, spec)
print("total image length per step:", dec.lengths)
print("factors:", [str(f) for f in dec.factors])
print("verified:", verify_tame(m, dec, spec))
