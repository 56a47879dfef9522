"""
Predimension and HF-orderings of partial Steiner triple systems
"""
from steinerq import FreeModel, psts
from steinerq.formats import fixture_path

fano = psts.load(fixture_path("fano.psts"))
sts9 = psts.load(fixture_path("sts9.psts"))
print("delta(Fano) =", psts.delta(fano))
print("delta(STS(9)) =", psts.delta(sts9))

## The Fano plane is confined, so no HF-ordering exists
print(psts.hf_order(fano))

## Removing a point leaves the Pasch configuration, still confined
pasch = fano.induced(range(1, 7))
print("Pasch:", pasch.sorted_blocks(), psts.hf_order(pasch))

## A level of the free model is an HF system whose base is the generators
m = FreeModel(3)
p = psts.from_free_levels(m, 2)
order = psts.hf_order(p).order
print("points:", len(p.points), "blocks:", len(p.blocks), "delta:", psts.delta(p))
print("prefix deltas:", psts.prefix_deltas(p, order))
print("base of the construction order:", sorted(psts.hf_base(p, psts.construction_order(m, 2))))
