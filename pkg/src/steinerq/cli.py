"""``steinerq`` command line front end.

Every subcommand prints ``key: value`` lines (or bare values with
``--format plain``).  Exit status is 0 on success, 1 on a domain error and 2
on a usage error.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import automorph, morphisms, psts
from .formats import fixture_path
from .models import Dependent, FiniteModel, FreeModel, ModelError, builtin_model
from .terms import (
    CapExceeded,
    ParseError,
    canonicalize,
    equiv,
    is_reduced,
    parse,
    reduce,
    reduced_by_rank,
)

GRAMMAR = """\
term grammar:
  term     := factor { '*' factor }     (left-associative)
  factor   := variable | '(' term ')'
  variable := 'x' digits                (index >= 1)
  whitespace is ignored; output is fully parenthesized.
lists of terms (--images) are comma-separated, e.g. "x2,x1,x3".
partial STS files: 'points: p1 p2 ...' and 'block: a b c' lines, '#' comments.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{GRAMMAR}")
        raise UsageError(message)


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _terms(text: str):
    return [parse(part) for part in text.split(",") if part.strip()]


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def _target(spec: str):
    if spec in ("fano", "7"):
        return builtin_model(7)
    if spec in ("sts9", "9"):
        return builtin_model(9)
    if spec.startswith("free:"):
        return FreeModel(int(spec[5:]))
    return FiniteModel.load(spec)


def _point(token: str):
    return int(token) if token.isdigit() else token


# -- handlers: each returns a list of (key, value) pairs ---------------------

def cmd_parse(a):
    return [("term", parse(a.term).text)]


def cmd_canon(a):
    return [("canonical", canonicalize(parse(a.term)).text)]


def cmd_equiv(a):
    return [("equiv", _bool(equiv(parse(a.left), parse(a.right))))]


def cmd_rank(a):
    t = parse(a.term)
    return [("rank", t.rank), ("length", t.length)]


def cmd_reduced(a):
    return [("is_reduced", _bool(is_reduced(parse(a.term))))]


def cmd_reduce(a):
    return [("reduced", reduce(parse(a.term)).text)]


def cmd_enumerate(a):
    bound = a.max_rank if a.max_rank is not None else a.rank_bound
    if bound is None:
        raise UsageError("enumerate needs --max-rank (or --rank-bound)")
    groups = reduced_by_rank(a.vars, bound)
    out = [(f"rank_{k}", len(g)) for k, g in enumerate(groups)]
    terms = [t for g in groups for t in g]
    out.append(("count", len(terms)))
    if a.sample is not None:
        terms = sorted(random.Random(a.seed).sample(terms, min(a.sample, len(terms))))
    if a.list or a.sample is not None:
        out.extend(("term", t.text) for t in terms)
    return out


def cmd_mul(a):
    m = FreeModel(a.gens)
    return [("product", m.mul(m.element(a.left), m.element(a.right)).text)]


def report_levels(n: int, k: int) -> list[tuple[str, object]]:
    """Per-rank class counts and cumulative level sizes by two constructions."""
    m = FreeModel(n)
    groups = reduced_by_rank(n, k)
    by_enum = m.levels(k, "enumerate")
    by_closure = m.levels(k, "closure")
    return [
        ("ranks", " ".join(str(i) for i in range(k + 1))),
        ("rank_counts", " ".join(str(len(g)) for g in groups)),
        ("cumulative", " ".join(str(len(s)) for s in by_enum)),
        ("closure_cumulative", " ".join(str(len(s)) for s in by_closure)),
        ("agree", "yes" if by_enum == by_closure else "no"),
    ]


def cmd_levels(a):
    return report_levels(a.gens, a.k)


def cmd_level_of(a):
    m = FreeModel(a.gens)
    e = parse(a.element)
    if reduce(e) != canonicalize(e):
        raise ModelError(f"{e} is not a reduced term")
    return [("level", m.level_of(m.element(e)))]


def cmd_closure(a):
    m = FreeModel(a.gens)
    gens = [m.element(t) for t in a.elements]
    c = m.closure(gens, a.length_cap)
    out = [("size", len(c)), ("saturated", _bool(c.saturated)), ("length_cap", c.length_cap)]
    for q in a.query or []:
        out.append(("contains", f"{m.element(q).text} {_bool(m.element(q) in c)}"))
    if a.list:
        out.extend(("element", e.text) for e in sorted(c.elements))
    return out


def cmd_independent(a):
    m = FreeModel(a.gens)
    bound = a.rank_bound if a.rank_bound is not None else 3
    res = m.independence_refute([m.element(t) for t in a.elements], bound)
    if isinstance(res, Dependent):
        return [("result", "dependent"), ("witness", f"{res.left.text} {res.right.text}"),
                ("value", res.value.text)]
    return [("result", "no-witness"), ("bound", res.bound)]


def cmd_hom(a):
    m = FreeModel(a.gens)
    target = _target(a.target)
    if isinstance(target, FreeModel):
        images = [target.element(t) for t in _terms(a.images)]
    else:
        images = [_point(p) for p in a.images.split(",")]
    h = m.extend_hom(images, target)
    value = h(m.element(a.element))
    return [("image", getattr(value, "text", value))]


def _load_psts(a):
    path = Path(a.file)
    if not path.exists() and fixture_path(path.name).exists():
        path = fixture_path(path.name)
    return psts.load(path)


def cmd_validate(a):
    p = _load_psts(a)
    return [("valid", "true"), ("points", len(p.points)), ("blocks", len(p.blocks))]


def cmd_delta(a):
    return [("delta", psts.delta(_load_psts(a)))]


def cmd_hf_order(a):
    p = _load_psts(a)
    res = psts.hf_order(p)
    if isinstance(res, psts.HFOrdering):
        return [("hf_ordering", " ".join(map(str, res.order))),
                ("prefix_deltas", " ".join(map(str, psts.prefix_deltas(p, res.order))))]
    return [("confined", " ".join(sorted(map(str, res.points))))]


def cmd_hf_base(a):
    p = _load_psts(a)
    if a.order:
        order = [_point(tok) for tok in a.order.split()]
    else:
        res = psts.hf_order(p)
        if not isinstance(res, psts.HFOrdering):
            raise ModelError("system is confined; no HF-ordering exists")
        order = res.order
    return [("base", " ".join(sorted(map(str, psts.hf_base(p, order)))))]


def cmd_export_levels(a):
    p = psts.from_free_levels(FreeModel(a.gens), a.k)
    text = p.dumps()
    if a.out:
        Path(a.out).write_text(text, encoding="utf-8")
        return [("written", a.out), ("points", len(p.points)), ("blocks", len(p.blocks))]
    return [("psts", line) for line in text.splitlines()]


def cmd_occ(a):
    r = morphisms.occurrences(parse(a.term), a.var)
    return [("variable", f"x{r.variable}"), ("count", r.count),
            ("single_path", _bool(r.single_path_exists))]


def cmd_invert(a):
    return [("inverse", morphisms.invert_single(parse(a.term), a.var, a.z).text)]


def cmd_classify(a):
    m = FreeModel(a.gens)
    base = list(m.generators())
    b = base.pop()
    cls = morphisms.classify_endo(m, base, b, parse(a.term))
    out = [("class", type(cls).__name__), ("image", cls.image.text)]
    if isinstance(cls, morphisms.Automorphism):
        out.append(("inverse", cls.inverse.text))
    elif isinstance(cls, morphisms.EmbeddingNotSurjective):
        out.append(("excluded", cls.excluded.text))
    else:
        out.append(("pair", " ".join(e.text for e in cls.pair)))
    if a.verify:
        ok = morphisms.verify_endo_class(m, base, b, cls, length_cap=a.length_cap)
        out.append(("verified", _bool(ok)))
    return out


def cmd_apply(a):
    m = FreeModel(a.gens)
    spec = morphisms.EndoSpec(m, tuple(_terms(a.images)))
    return [("image", morphisms.apply_endo(spec, m.element(a.element)).text)]


def cmd_inject_check(a):
    bound = a.rank_bound if a.rank_bound is not None else 3
    res = morphisms.injectivity_condition(parse(a.term), bound, a.var)
    if isinstance(res, morphisms.HoldsUpTo):
        return [("holds_up_to", res.bound)]
    return [("counterexample", f"{res.first.text} {res.second.text}")]


def cmd_elementary(a):
    m = FreeModel(a.gens)
    e = automorph.elementary(m, a.pivot, parse(a.shift))
    return [("images", ",".join(t.text for t in e.spec.images))]


def cmd_irreducible(a):
    m = FreeModel(a.gens)
    res = automorph.is_irreducible(m, _terms(a.images), length_cap=a.length_cap)
    if isinstance(res, automorph.Irreducible):
        return [("irreducible", "true")]
    if isinstance(res, automorph.Witness):
        return [("irreducible", "false"), ("witness", f"{res.i} {res.r.text} {res.s.text}")]
    return [("irreducible", "unknown"), ("length_cap", res.length_cap)]


def cmd_preserves(a):
    m = FreeModel(a.gens)
    bound = a.rank_bound if a.rank_bound is not None else 3
    ok, bad = automorph.preserves_reduced(m, _terms(a.images), bound)
    out = [("preserves", _bool(ok)), ("bound", bound)]
    if bad is not None:
        out.append(("violation", bad.text))
    return out


def _factor_lines(dec):
    return [("factor", f"{f.pivot} {f.shift.text}") for f in dec.factors]


def cmd_tame(a):
    m = FreeModel(a.gens)
    dec = automorph.tame_decompose(m, _terms(a.images), length_cap=a.length_cap)
    return [("factors", len(dec))] + _factor_lines(dec)


def cmd_verify_tame(a):
    m = FreeModel(a.gens)
    factors = []
    for item in a.factors.split(";"):
        if item.strip():
            pivot, _, shift = item.partition(":")
            factors.append(automorph.elementary(m, int(pivot), parse(shift)))
    ok = automorph.verify_tame(m, factors, _terms(a.images))
    return [("verified", _bool(ok))]


# -- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--rank-bound", type=_nonneg, help="rank bound for searches")
    g.add_argument("--length-cap", type=_positive, help="length cap for closures")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    g.add_argument("--format", choices=("plain", "lines"), default="lines")

    parser = _Parser(
        prog="steinerq",
        description="Term calculus of free Steiner quasigroups.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, *args):
        p = sub.add_parser(name, help=help_text, parents=[common], epilog=GRAMMAR,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        for spec in args:
            flags, kw = spec
            p.add_argument(*flags, **kw)
        p.set_defaults(func=func)
        return p

    term = (("term",), {})
    gens = (("--gens",), dict(type=_positive, required=True, help="number of generators"))
    file_ = (("--file",), dict(required=True, help="partial STS file"))
    images = (("--images",), dict(required=True, help="comma-separated image terms"))
    var = (("--var",), dict(type=_positive, help="distinguished variable index (default: highest)"))

    add("parse", cmd_parse, "parse and print a term", term)
    add("canon", cmd_canon, "canonical representative", term)
    add("equiv", cmd_equiv, "equivalence up to commutativity", (("left",), {}), (("right",), {}))
    add("rank", cmd_rank, "rank and length", term)
    add("reduced", cmd_reduced, "reducedness test", term)
    add("reduce", cmd_reduce, "reduced canonical form", term)
    add("enumerate", cmd_enumerate, "enumerate reduced classes",
        (("--vars",), dict(type=_positive, required=True)),
        (("--max-rank",), dict(type=_nonneg)),
        (("--list",), dict(action="store_true")),
        (("--sample",), dict(type=_positive, help="list a random sample (uses --seed)")))
    add("mul", cmd_mul, "product in the free model", gens, (("left",), {}), (("right",), {}))
    add("levels", cmd_levels, "level sizes by two constructions", gens,
        (("--k",), dict(type=_nonneg, required=True)))
    add("level-of", cmd_level_of, "level of an element", gens, (("element",), {}))
    add("closure", cmd_closure, "bounded subalgebra closure", gens,
        (("elements",), dict(nargs="+")),
        (("--query",), dict(action="append", help="report membership of this element")),
        (("--list",), dict(action="store_true")))
    add("independent", cmd_independent, "bounded dependence search", gens,
        (("elements",), dict(nargs="+")))
    add("hom", cmd_hom, "apply the homomorphism extending a generator map", gens,
        (("--images",), dict(required=True, help="comma-separated points or terms")),
        (("--target",), dict(default="fano", help="fano, sts9, free:N or a file")),
        (("element",), {}))
    add("validate", cmd_validate, "validate a partial STS file", file_)
    add("delta", cmd_delta, "predimension", file_)
    add("hf-order", cmd_hf_order, "HF-ordering or confined witness", file_)
    add("hf-base", cmd_hf_base, "points not generated by earlier ones", file_,
        (("--order",), dict(help="space-separated HF-ordering (default: greedy)")))
    add("export-levels", cmd_export_levels, "level truncation as a partial STS", gens,
        (("--k",), dict(type=_nonneg, required=True)), (("--out",), {}))
    add("occ", cmd_occ, "occurrence analysis", term, var)
    add("invert", cmd_invert, "invert a single-occurrence term", term, var,
        (("--z",), dict(type=_positive, help="index of the fresh variable")))
    add("classify", cmd_classify, "classify b -> t(a, b); y is the last generator", gens, term,
        (("--verify",), dict(action="store_true")))
    add("apply", cmd_apply, "apply an endomorphism", gens, images, (("element",), {}))
    add("inject-check", cmd_inject_check, "bounded injectivity search", term, var)
    add("elementary", cmd_elementary, "elementary automorphism images", gens,
        (("--pivot",), dict(type=_positive, required=True)),
        (("--shift",), dict(required=True)))
    add("irreducible", cmd_irreducible, "irreducibility of an image tuple", gens, images)
    add("preserves", cmd_preserves, "does substitution preserve reducedness", gens, images)
    add("tame", cmd_tame, "decompose an automorphism into elementary ones", gens, images)
    add("verify-tame", cmd_verify_tame, "check a decomposition", gens, images,
        (("--factors",), dict(required=True, help='"pivot:shift;..." left to right')))
    return parser


def dispatch(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        pairs = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"steinerq: error: {exc}\n\n{GRAMMAR}")
        return 2
    except (ParseError, ModelError, psts.PSTSError, CapExceeded, ValueError,
            automorph.NotAnAutomorphism, OSError) as exc:
        sys.stderr.write(f"steinerq: {exc}\n")
        out.write(f"error: {exc}\n")
        return 1
    for key, value in pairs:
        out.write(f"{value}\n" if args.format == "plain" else f"{key}: {value}\n")
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
