"""Triangular norms, conorms and negations.

Every operator is a small immutable selector object that evaluates on
scalars or numpy arrays::

    >>> t = parse_selector("Tsc(p=-0.5)")
    >>> float(t(0.3, 0.8))
    0.16...

Boundary values are enforced exactly, not just up to rounding: whenever an
argument is 0 or 1 the result is produced by the boundary axioms rather than
by the family formula. Arguments are also put in canonical (min, max) order
before a formula is applied, which makes commutativity bitwise exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Sequence

import numpy as np

from granulab.errors import DomainError

__all__ = [
    "TNorm",
    "TConorm",
    "Negation",
    "STANDARD_NEGATION",
    "Calculus",
    "AxiomReport",
    "tnorm_eval",
    "tconorm_eval",
    "negation_eval",
    "dual_of",
    "generated_dual",
    "check_axioms",
    "nary_tnorm",
    "nary_tconorm",
    "parse_selector",
    "T0",
    "T1",
    "T1_5",
    "T2",
    "T2_5",
    "T3",
    "S0",
    "S1",
    "S1_5",
    "S2",
    "S2_5",
    "S3",
    "TNORM_LADDER",
    "TCONORM_LADDER",
]

FIXED_KINDS = ("0", "1", "1.5", "2", "2.5", "3")

# family name -> (parameter name, short symbol)
FAMILIES = {
    "yager": ("q", "y"),
    "dubois": ("alpha", "d"),
    "hamacher": ("gamma", "h"),
    "schweizer": ("p", "sc"),
    "frank": ("theta", "f"),
    "sugeno": ("lambda", "su"),
}

FRANK_EXCLUSION = 1e-6
_DOMAIN_SLACK = 1e-12


def _check_param(family: str, value: float) -> None:
    if math.isnan(value):
        raise DomainError(f"{family} parameter is NaN")
    if family == "yager":
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"Yager q must be a finite value > 0, got {value}")
    elif family == "dubois":
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"Dubois alpha must lie in [0, 1], got {value}")
    elif family == "hamacher":
        if not (value >= 0 and math.isfinite(value)):
            raise DomainError(f"Hamacher gamma must be a finite value >= 0, got {value}")
    elif family == "schweizer":
        if value == 0:
            raise DomainError("Schweizer p = 0 is excluded; use T2 for the limit")
    elif family == "frank":
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"Frank theta must be a finite value > 0, got {value}")
        if abs(value - 1.0) <= FRANK_EXCLUSION:
            raise DomainError("Frank theta too close to 1; use T2 for the limit")
    elif family == "sugeno":
        if not (value >= -1 and math.isfinite(value)):
            raise DomainError(f"Sugeno lambda must be a finite value >= -1, got {value}")


def _fmt(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:g}"


@dataclass(frozen=True)
class _Selector:
    kind: str
    param: float | None = None

    _prefix = "?"

    def __post_init__(self) -> None:
        kind = str(self.kind).lower()
        if kind in FAMILIES:
            if self.param is None:
                raise DomainError(f"{kind} requires a parameter")
            value = float(self.param)
            _check_param(kind, value)
            object.__setattr__(self, "param", value)
        elif kind in FIXED_KINDS:
            if self.param is not None:
                raise DomainError(f"{self._prefix}{kind} takes no parameter")
        else:
            raise DomainError(f"unknown operator kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @property
    def is_family(self) -> bool:
        return self.kind in FAMILIES

    @property
    def is_continuous(self) -> bool:
        """False for the drastic operator and its Schweizer limit."""
        if self.kind == "0":
            return False
        if self.kind == "schweizer" and self.param == -math.inf:
            return False
        return True

    def __str__(self) -> str:
        if self.kind in FIXED_KINDS:
            return f"{self._prefix}{self.kind}"
        pname, sym = FAMILIES[self.kind]
        return f"{self._prefix}{sym}({pname}={_fmt(self.param)})"


@dataclass(frozen=True)
class TNorm(_Selector):
    """A T-norm: a fixed member of the T0..T3 ladder or a family member."""

    _prefix = "T"

    def __call__(self, a, b):
        return tnorm_eval(self, a, b)


@dataclass(frozen=True)
class TConorm(_Selector):
    """A T-conorm: a fixed member of the S0..S3 ladder or a family member."""

    _prefix = "S"

    def __call__(self, a, b):
        return tconorm_eval(self, a, b)


@dataclass(frozen=True)
class Negation:
    """Negation operator. Only the involutive ``1 - x`` is provided."""

    kind: str = "standard"

    def __post_init__(self) -> None:
        if self.kind != "standard":
            raise DomainError(f"unknown negation {self.kind!r}")

    def __call__(self, x):
        return negation_eval(self, x)

    def __str__(self) -> str:
        return "N(x)=1-x"


STANDARD_NEGATION = Negation()

T0, T1, T1_5, T2, T2_5, T3 = (TNorm(k) for k in FIXED_KINDS)
S0, S1, S1_5, S2, S2_5, S3 = (TConorm(k) for k in FIXED_KINDS)
TNORM_LADDER = (T0, T1, T1_5, T2, T2_5, T3)
TCONORM_LADDER = (S0, S1, S1_5, S2, S2_5, S3)


# ---------------------------------------------------------------------------
# formulas; all receive lo <= hi elementwise, arrays of equal shape


def _yager_norm(u, v, q):
    # (u^q + v^q)^(1/q), scaled by max(u, v) to keep extreme q finite
    m = np.maximum(u, v)
    safe = np.where(m > 0, m, 1.0)
    s = (u / safe) ** q + (v / safe) ** q
    return np.where(m > 0, m * s ** (1.0 / q), 0.0)


def _schweizer_t(lo, hi, p):
    if p == math.inf:
        return lo.copy()
    if p == -math.inf:
        return np.zeros_like(lo)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x1 = -p * np.log(lo)
        x2 = -p * np.log(hi)
        if p > 0:
            # x1 >= x2 >= 0; switch to a log-sum-exp form once expm1 would overflow
            big = x1 > 30.0
            small_log = np.log1p(np.expm1(np.where(big, 0.0, x1)) + np.expm1(np.where(big, 0.0, x2)))
            big_log = x1 + np.log1p(np.exp(x2 - x1) - np.exp(-x1))
            log_base = np.where(big, big_log, small_log)
            out = np.exp(-log_base / p)
            return np.where(lo > 0, out, 0.0)
        s = np.expm1(x1) + np.expm1(x2)
        out = np.exp(np.log1p(np.maximum(s, -1.0)) / (-p))
        return np.where(s > -1.0, out, 0.0)


def _frank_t(lo, hi, theta):
    L = math.log(theta)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
        if theta > 1:
            ln_p = np.log(np.expm1(lo * L)) + np.log(np.expm1(hi * L))
            ln_q = math.log(math.expm1(L))
            out = np.log1p(np.exp(ln_p - ln_q)) / L
        else:
            # 1 + (u-1)(v-1)/(theta-1) == [u(1-v) + (v - theta)] / (1 - theta)
            u = np.exp(lo * L)
            v = np.exp(hi * L)
            num = u * (-np.expm1(hi * L)) + v * (-np.expm1((1.0 - hi) * L))
            out = np.log(num / -math.expm1(L)) / L
    return np.where(lo > 0, out, 0.0)


def _t_formula(kind: str, p, lo, hi):
    if kind == "0":
        return np.zeros_like(lo)
    if kind == "1":
        return np.maximum(0.0, lo + hi - 1.0)
    if kind == "1.5":
        return lo * hi / (2.0 - (lo + hi - lo * hi))
    if kind == "2":
        return lo * hi
    if kind == "2.5":
        return lo * hi / (lo + hi - lo * hi)
    if kind == "3":
        return lo.copy()
    if kind == "yager":
        return 1.0 - np.minimum(1.0, _yager_norm(1.0 - lo, 1.0 - hi, p))
    if kind == "dubois":
        return lo * hi / np.maximum(hi, p)
    if kind == "hamacher":
        return lo * hi / (p + (1.0 - p) * (lo + hi - lo * hi))
    if kind == "schweizer":
        return _schweizer_t(lo, hi, p)
    if kind == "frank":
        return _frank_t(lo, hi, p)
    if kind == "sugeno":
        return np.maximum(0.0, (p + 1.0) * (lo + hi - 1.0) - p * lo * hi)
    raise DomainError(kind)


def _s_formula(kind: str, p, lo, hi):
    if kind == "0":
        return np.ones_like(lo)
    if kind == "1":
        return np.minimum(1.0, lo + hi)
    if kind == "1.5":
        return (lo + hi) / (1.0 + lo * hi)
    if kind == "2":
        return lo + hi - lo * hi
    if kind == "2.5":
        return (lo + hi - 2.0 * lo * hi) / (1.0 - lo * hi)
    if kind == "3":
        return hi.copy()
    if kind == "yager":
        return np.minimum(1.0, _yager_norm(lo, hi, p))
    if kind == "dubois":
        return (lo + hi - lo * hi - np.minimum(lo, 1.0 - p)) / np.maximum(1.0 - lo, p)
    if kind == "hamacher":
        return (lo + hi + (p - 2.0) * lo * hi) / (1.0 + (p - 1.0) * lo * hi)
    if kind == "schweizer":
        return 1.0 - _schweizer_t(1.0 - hi, 1.0 - lo, p)
    if kind == "frank":
        return 1.0 - _frank_t(1.0 - hi, 1.0 - lo, p)
    if kind == "sugeno":
        # dual of the Sugeno T-norm under 1 - x; the sign of the ab term is +lambda
        return np.minimum(1.0, lo + hi + p * lo * hi)
    raise DomainError(kind)


def _unit_args(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scalar = a.ndim == 0 and b.ndim == 0
    a, b = np.broadcast_arrays(a, b)
    for name, arr in (("a", a), ("b", b)):
        if arr.size and (
            np.isnan(arr).any() or arr.min() < -_DOMAIN_SLACK or arr.max() > 1 + _DOMAIN_SLACK
        ):
            raise DomainError(f"argument {name} must lie in [0, 1]")
    a = np.clip(a, 0.0, 1.0)
    b = np.clip(b, 0.0, 1.0)
    return np.minimum(a, b), np.maximum(a, b), scalar


def _finish(out, scalar):
    return float(out) if scalar else out


def tnorm_eval(sel: TNorm, a, b):
    """Evaluate a T-norm on scalars or broadcastable arrays in [0, 1]."""
    lo, hi, scalar = _unit_args(a, b)
    with np.errstate(all="ignore"):
        raw = _t_formula(sel.kind, sel.param, lo, hi)
        out = np.clip(np.nan_to_num(raw, nan=0.0), 0.0, lo)
    out = np.where(hi == 1.0, lo, out)
    out = np.where(lo == 0.0, 0.0, out)
    return _finish(out, scalar)


def tconorm_eval(sel: TConorm, a, b):
    """Evaluate a T-conorm on scalars or broadcastable arrays in [0, 1]."""
    lo, hi, scalar = _unit_args(a, b)
    with np.errstate(all="ignore"):
        raw = _s_formula(sel.kind, sel.param, lo, hi)
        out = np.clip(np.nan_to_num(raw, nan=1.0), hi, 1.0)
    out = np.where(lo == 0.0, hi, out)
    out = np.where(hi == 1.0, 1.0, out)
    return _finish(out, scalar)


def negation_eval(sel: Negation, x):
    x = np.asarray(x, dtype=float)
    if x.size and (np.isnan(x).any() or x.min() < -_DOMAIN_SLACK or x.max() > 1 + _DOMAIN_SLACK):
        raise DomainError("negation argument must lie in [0, 1]")
    out = 1.0 - np.clip(x, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def dual_of(sel: TNorm | TConorm, negation: Negation = STANDARD_NEGATION) -> TNorm | TConorm:
    """Return the same-family dual operator under ``negation``.

    T-norms map to T-conorms and back, e.g. ``dual_of(T2) == S2``.
    """
    if not isinstance(negation, Negation) or negation.kind != "standard":
        raise DomainError("closed-form duals are only known for N(x) = 1 - x")
    if isinstance(sel, TNorm):
        return TConorm(sel.kind, sel.param)
    if isinstance(sel, TConorm):
        return TNorm(sel.kind, sel.param)
    raise TypeError(f"not an operator selector: {sel!r}")


def generated_dual(sel: TNorm | TConorm, negation: Negation = STANDARD_NEGATION) -> Callable:
    """The DeMorgan dual computed literally as ``N(op(N(a), N(b)))``."""

    def dual(a, b):
        return negation(sel(negation(a), negation(b)))

    dual.__name__ = f"dual[{sel}]"
    return dual


@dataclass(frozen=True)
class Calculus:
    """A DeMorgan triple (conjunction, disjunction, negation)."""

    tnorm: TNorm
    tconorm: TConorm
    negation: Negation = STANDARD_NEGATION

    @classmethod
    def from_tnorm(cls, tnorm: TNorm, negation: Negation = STANDARD_NEGATION) -> "Calculus":
        return cls(tnorm, dual_of(tnorm, negation), negation)

    @property
    def is_demorgan(self) -> bool:
        return self.tconorm == dual_of(self.tnorm, self.negation)

    def conj(self, *xs: float) -> float:
        return nary_tnorm(self.tnorm, xs)

    def disj(self, *xs: float) -> float:
        return nary_tconorm(self.tconorm, xs)

    def neg(self, x: float) -> float:
        return self.negation(x)

    def __str__(self) -> str:
        return f"({self.tnorm}, {self.tconorm}, {self.negation})"


def _fold(sel, xs: Iterable[float]) -> float:
    xs = list(xs)
    if not xs:
        raise DomainError("n-ary evaluation needs at least one argument")
    for x in xs:
        if not -_DOMAIN_SLACK <= float(x) <= 1 + _DOMAIN_SLACK:
            raise DomainError("arguments must lie in [0, 1]")
    if len(xs) == 1:
        return float(xs[0])
    return float(reduce(lambda acc, x: sel(acc, x), xs[1:], float(xs[0])))


def nary_tnorm(sel: TNorm, xs: Sequence[float]) -> float:
    """Left fold ``T(T(x1, x2), x3)...`` of a T-norm."""
    return _fold(sel, xs)


def nary_tconorm(sel: TConorm, xs: Sequence[float]) -> float:
    """Left fold of a T-conorm."""
    return _fold(sel, xs)


@dataclass(frozen=True)
class AxiomReport:
    """Maximum axiom violations of one operator over a uniform grid."""

    selector: str
    grid: int
    boundary: float
    commutativity: float
    monotonicity: float
    associativity: float
    equivalent_to: tuple[str, ...] = field(default=())

    def passed(self, tol: float = 1e-9) -> bool:
        return (
            self.boundary == 0.0
            and self.commutativity == 0.0
            and self.monotonicity <= tol
            and self.associativity <= tol
        )

    def as_dict(self) -> dict:
        return {
            "selector": self.selector,
            "grid": self.grid,
            "boundary": self.boundary,
            "commutativity": self.commutativity,
            "monotonicity": self.monotonicity,
            "associativity": self.associativity,
            "equivalent_to": list(self.equivalent_to),
        }


def check_axioms(sel: TNorm | TConorm, grid_resolution: int = 21, tol: float = 1e-9) -> AxiomReport:
    """Measure boundary, symmetry, monotonicity and associativity on a grid.

    Also lists which members of the fixed ladder coincide with ``sel`` on
    the grid to within ``tol``.
    """
    if grid_resolution < 3:
        raise DomainError("grid_resolution must be at least 3")
    g = np.linspace(0.0, 1.0, grid_resolution)
    A, B = np.meshgrid(g, g, indexing="ij")
    V = sel(A, B)

    if isinstance(sel, TNorm):
        # T(a,1) = T(1,a) = a, T(0,0) = 0
        bnd = max(
            np.max(np.abs(sel(g, 1.0) - g)),
            np.max(np.abs(sel(1.0, g) - g)),
            abs(sel(0.0, 0.0)),
        )
        ladder = TNORM_LADDER
    else:
        bnd = max(
            np.max(np.abs(sel(g, 0.0) - g)),
            np.max(np.abs(sel(0.0, g) - g)),
            abs(sel(1.0, 1.0) - 1.0),
        )
        ladder = TCONORM_LADDER

    comm = float(np.max(np.abs(V - V.T)))
    mono = max(0.0, -float(np.min(np.diff(V, axis=0))), -float(np.min(np.diff(V, axis=1))))

    A3, B3, C3 = np.meshgrid(g, g, g, indexing="ij")
    left = sel(A3, sel(B3, C3))
    right = sel(sel(A3, B3), C3)
    assoc = float(np.max(np.abs(left - right)))

    same = tuple(str(op) for op in ladder if op != sel and np.max(np.abs(op(A, B) - V)) <= tol)
    return AxiomReport(str(sel), grid_resolution, float(bnd), comm, mono, assoc, same)


# ---------------------------------------------------------------------------
# parsing

_ALIASES: dict[str, tuple[type, str]] = {}
for _k in FIXED_KINDS:
    for _cls, _pfx in ((TNorm, "t"), (TConorm, "s")):
        _ALIASES[_pfx + _k] = (_cls, _k)
        _ALIASES[_pfx + _k.replace(".", "_")] = (_cls, _k)
_ALIASES.update(
    {
        "min": (TNorm, "3"),
        "max": (TConorm, "3"),
        "product": (TNorm, "2"),
        "lukasiewicz": (TNorm, "1"),
        "drastic": (TNorm, "0"),
    }
)
for _fam, (_pname, _sym) in FAMILIES.items():
    for _name in (_fam, "t" + _sym, "t_" + _sym):
        _ALIASES[_name] = (TNorm, _fam)
    for _name in (_fam + "-s", _fam + "_s", "s" + _sym, "s_" + _sym):
        _ALIASES[_name] = (TConorm, _fam)

_PARAM_ALIASES = {
    "q": "q",
    "alpha": "alpha",
    "a": "alpha",
    "gamma": "gamma",
    "g": "gamma",
    "p": "p",
    "theta": "theta",
    "lambda": "lambda",
    "lam": "lambda",
    "l": "lambda",
}

_SELECTOR_RE = re.compile(
    r"^\s*(?P<name>[A-Za-z][A-Za-z0-9_.\-]*?)\s*"
    r"(?:\(\s*(?:(?P<pname>[A-Za-z]+)\s*=\s*)?(?P<value>[^)]*?)\s*\))?\s*$"
)


def parse_selector(text: str) -> TNorm | TConorm:
    """Parse forms such as ``T2``, ``t1.5``, ``Tsc(p=-0.5)``, ``Yager(q=2)``, ``Sh(gamma=1)``.

    Matching is case-insensitive.
    """
    m = _SELECTOR_RE.match(text or "")
    if not m:
        raise DomainError(f"cannot parse operator {text!r}")
    name = m.group("name").lower()
    if name not in _ALIASES:
        raise DomainError(f"unknown operator {m.group('name')!r}")
    cls, kind = _ALIASES[name]
    value_text = m.group("value")
    if kind in FIXED_KINDS:
        if value_text:
            raise DomainError(f"{text!r}: {name} takes no parameter")
        return cls(kind)
    if value_text is None or value_text == "":
        raise DomainError(f"{text!r}: the {kind} family needs a parameter")
    pname = m.group("pname")
    if pname is not None:
        expected = FAMILIES[kind][0]
        if _PARAM_ALIASES.get(pname.lower()) != expected:
            raise DomainError(f"{text!r}: {kind} takes parameter {expected!r}, not {pname!r}")
    try:
        value = float(value_text)
    except ValueError:
        raise DomainError(f"{text!r}: bad parameter value {value_text!r}") from None
    return cls(kind, value)
