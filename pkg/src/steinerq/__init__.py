"""Free Steiner quasigroups: terms, reduction, levels, partial triple systems
and automorphisms."""
from .terms import (
    CapExceeded,
    ParseError,
    Prod,
    Term,
    Var,
    canonicalize,
    enumerate_reduced,
    equiv,
    format_term,
    is_reduced,
    parse,
    rank,
    reduce,
    reduced_by_rank,
    substitute,
)
from .models import FiniteModel, FreeModel, ModelError, builtin_model, evaluate
from .psts import PartialSTS, PSTSError, delta, hf_order
from .morphisms import EndoSpec, classify_endo, invert_single, occurrences
from .automorph import ElementaryAuto, elementary, is_irreducible, tame_decompose, verify_tame

__all__ = [
    "CapExceeded",
    "ParseError",
    "Prod",
    "Term",
    "Var",
    "canonicalize",
    "enumerate_reduced",
    "equiv",
    "format_term",
    "is_reduced",
    "parse",
    "rank",
    "reduce",
    "reduced_by_rank",
    "substitute",
    "FiniteModel",
    "FreeModel",
    "ModelError",
    "builtin_model",
    "evaluate",
    "PartialSTS",
    "PSTSError",
    "delta",
    "hf_order",
    "EndoSpec",
    "classify_endo",
    "invert_single",
    "occurrences",
    "ElementaryAuto",
    "elementary",
    "is_irreducible",
    "tame_decompose",
    "verify_tame",
]
__version__ = "0.1.0"
