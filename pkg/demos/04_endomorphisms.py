"""
Replacing one generator: automorphism, embedding, or collapse
"""
from steinerq import FreeModel, classify_endo, invert_single, occurrences, parse
from steinerq.morphisms import injectivity_condition, verify_endo_class

m = FreeModel(3)
base, b = [m.element("x1"), m.element("x2")], m.element("x3")

for text in ["(x1*x3)*x2", "(x1*x3)*(x2*x3)", "x1*x2"]:
    t = parse(text)
    occ = occurrences(t, 3)
    cls = classify_endo(m, base, b, t)
    print(f"{text:>16}: y occurs {occ.count}x -> {cls}")
    print(" " * 18, "certificate verified:", verify_endo_class(m, base, b, cls, rank=2))

## Inverting a single occurrence
t = parse("(x3*x1)*x2")
print(t, "= x4  <=>  x3 =", invert_single(t, 3, 4))

## Two occurrences: distinct inputs still give distinct outputs
print(injectivity_condition(parse("(x1*x3)*(x2*x3)"), 3))
