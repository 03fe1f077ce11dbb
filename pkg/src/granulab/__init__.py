"""Linguistic uncertainty calculi: T-norms, fuzzy numbers, term sets and closure experiments."""

from granulab.calculi import (
    STANDARD_NEGATION,
    Calculus,
    Negation,
    TConorm,
    TNorm,
    check_axioms,
    dual_of,
    parse_selector,
)
from granulab.closure import closure_table, diff_count, equivalence_classes, run_experiment
from granulab.errors import DomainError, GranulabError, UnknownTermError, ValidationError
from granulab.fuzznum import (
    DiscretizedFuzzy,
    FuzzyNumber,
    UnitFuzzyNumber,
    brute_force_extend,
    extend_binary,
    features,
)
from granulab.lingapprox import ApproxConfig, approximate
from granulab.termset import Term, TermSet, builtin

__version__ = "0.1.0"

__all__ = [
    "STANDARD_NEGATION",
    "ApproxConfig",
    "Calculus",
    "DiscretizedFuzzy",
    "DomainError",
    "FuzzyNumber",
    "GranulabError",
    "Negation",
    "TConorm",
    "TNorm",
    "Term",
    "TermSet",
    "UnitFuzzyNumber",
    "UnknownTermError",
    "ValidationError",
    "approximate",
    "brute_force_extend",
    "builtin",
    "check_axioms",
    "closure_table",
    "diff_count",
    "dual_of",
    "equivalence_classes",
    "extend_binary",
    "features",
    "parse_selector",
    "run_experiment",
]
