"""
Levels of the free model on three generators
"""
from steinerq import FreeModel, reduced_by_rank
from steinerq.cli import report_levels

## Reduced terms grouped by rank
groups = reduced_by_rank(3, 4)
print("reduced classes by rank:", [len(g) for g in groups])
print("rank 2:", [str(t) for t in groups[2]])

## Three independent constructions of S_0..S_3
m = FreeModel(3)
for method in ("enumerate", "closure", "construction"):
    print(f"{method:>12}:", [len(s) for s in m.levels(3, method)])

## The tabular report used by the command line
for key, value in report_levels(3, 3):
    print(f"{key}: {value}")

## Products in the free model
a, b = m.element("x1"), m.element("x1*x2")
print(a, "*", b, "=", m.mul(a, b))
