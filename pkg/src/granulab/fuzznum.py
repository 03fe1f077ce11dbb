"""Trapezoidal fuzzy numbers and extension-principle evaluation.

A fuzzy number is the 4-tuple ``(a, b, alpha, beta)``: membership is 1 on the
core ``[a, b]`` and falls linearly to 0 over ``alpha`` to the left and
``beta`` to the right.

Two evaluation routes are provided for lifting a crisp binary function to
fuzzy arguments:

* :func:`extend_binary` works level by level on alpha-cuts and is exact for
  continuous functions that are nondecreasing in each argument.
* :func:`brute_force_extend` evaluates the sup-min definition literally on a
  grid. It is slow and only meant as an independent check.

The closed-form arithmetic (:func:`add`, :func:`mul`, ...) propagates the
core and support endpoints exactly and joins them with straight sides.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from granulab.errors import DomainError, ValidationError

__all__ = [
    "FuzzyNumber",
    "UnitFuzzyNumber",
    "DiscretizedFuzzy",
    "SampledMembership",
    "crisp",
    "membership",
    "alpha_cut",
    "features",
    "negate",
    "clip_unit",
    "add",
    "sub",
    "mul",
    "div",
    "pow",
    "extend_binary",
    "brute_force_extend",
    "DEFAULT_RESOLUTION",
    "DEFAULT_ORACLE_GRID",
]

DEFAULT_RESOLUTION = 101
DEFAULT_ORACLE_GRID = 1001
_UNIT_SLACK = 1e-12


@dataclass(frozen=True)
class FuzzyNumber:
    """Trapezoidal fuzzy number on the real line."""

    a: float
    b: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        vals = []
        for name in ("a", "b", "alpha", "beta"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
            vals.append(v)
        a, b, alpha, beta = vals
        if a > b:
            raise ValidationError(f"core is reversed: a={a} > b={b}")
        if alpha < 0 or beta < 0:
            raise ValidationError(f"spreads must be nonnegative, got alpha={alpha}, beta={beta}")

    @property
    def core(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a - self.alpha, self.b + self.beta)

    @property
    def is_crisp(self) -> bool:
        return self.a == self.b and self.alpha == 0 and self.beta == 0

    @property
    def is_unit(self) -> bool:
        lo, hi = self.support
        return lo >= -_UNIT_SLACK and hi <= 1 + _UNIT_SLACK

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.alpha, self.beta)

    def membership(self, x):
        return membership(self, x)

    def alpha_cut(self, level: float) -> tuple[float, float]:
        return alpha_cut(self, level)

    def features(self) -> tuple[float, float]:
        return features(self)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "alpha": self.alpha, "beta": self.beta}

    @classmethod
    def from_dict(cls, d: dict) -> "FuzzyNumber":
        try:
            return cls(d["a"], d["b"], d["alpha"], d["beta"])
        except KeyError as exc:
            raise ValidationError(f"fuzzy number is missing field {exc}") from None

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __pow__(self, other):
        return pow(self, other)

    def __str__(self) -> str:
        return f"({self.a:g}, {self.b:g}, {self.alpha:g}, {self.beta:g})"


class UnitFuzzyNumber(FuzzyNumber):
    """A fuzzy number whose support lies inside [0, 1]."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.is_unit:
            raise ValidationError(f"support {self.support} leaves [0, 1]")

    @classmethod
    def of(cls, n: FuzzyNumber) -> "UnitFuzzyNumber":
        if isinstance(n, UnitFuzzyNumber):
            return n
        return cls(n.a, n.b, n.alpha, n.beta)


Fuzzy = Union[FuzzyNumber, "DiscretizedFuzzy"]


def crisp(x: float) -> FuzzyNumber:
    return FuzzyNumber(x, x, 0.0, 0.0)


def _as_fuzzy(x) -> FuzzyNumber:
    if isinstance(x, FuzzyNumber):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return crisp(float(x))
    raise TypeError(f"expected a FuzzyNumber or a real, got {type(x).__name__}")


def membership(n: FuzzyNumber, x):
    """Membership degree of ``x``; zero spreads give step sides closed at the core."""
    xs = np.asarray(x, dtype=float)
    a, b, alpha, beta = n.as_tuple()
    mu = np.where((xs >= a) & (xs <= b), 1.0, 0.0)
    if alpha > 0:
        left = (xs >= a - alpha) & (xs < a)
        mu = np.where(left, (xs - a + alpha) / alpha, mu)
    if beta > 0:
        right = (xs > b) & (xs <= b + beta)
        mu = np.where(right, (b + beta - xs) / beta, mu)
    mu = np.clip(mu, 0.0, 1.0)
    return float(mu) if mu.ndim == 0 else mu


def _cuts(n: FuzzyNumber, levels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # level 0 yields the closed support
    return n.a - n.alpha * (1.0 - levels), n.b + n.beta * (1.0 - levels)


def alpha_cut(n: FuzzyNumber, level: float) -> tuple[float, float]:
    """The interval ``{x : mu(x) >= level}`` for ``level`` in (0, 1]."""
    if not 0.0 < level <= 1.0:
        raise DomainError(f"alpha level must lie in (0, 1], got {level}")
    lo, hi = _cuts(n, np.float64(level))
    return float(lo), float(hi)


def features(n: Fuzzy) -> tuple[float, float]:
    """Return ``(centroid, area)`` of the membership function.

    A crisp point has area 0 and its centroid is the point itself.
    """
    if isinstance(n, DiscretizedFuzzy):
        return n.features()
    a, b, alpha, beta = n.as_tuple()
    area = (b - a) + 0.5 * (alpha + beta)
    if area <= 0.0:
        return a, 0.0
    # core rectangle plus the two side triangles, each at its own centroid
    moment = 0.5 * (b * b - a * a) + 0.5 * alpha * (a - alpha / 3.0) + 0.5 * beta * (b + beta / 3.0)
    return moment / area, area


def negate(n: FuzzyNumber) -> UnitFuzzyNumber:
    """Apply ``N(x) = 1 - x`` to a fuzzy number on [0, 1]."""
    if not n.is_unit:
        raise DomainError(f"negate needs a fuzzy number on [0, 1], got {n}")
    return UnitFuzzyNumber(1.0 - n.b, 1.0 - n.a, n.beta, n.alpha)


def clip_unit(n: FuzzyNumber) -> UnitFuzzyNumber:
    """Clamp core and support into [0, 1]."""
    lo, hi = (min(max(v, 0.0), 1.0) for v in n.support)
    a, b = (min(max(v, 0.0), 1.0) for v in n.core)
    return UnitFuzzyNumber(a, b, a - lo, hi - b)


def _from_endpoints(core: tuple[float, float], support: tuple[float, float]) -> FuzzyNumber:
    a, b = core
    lo, hi = support
    # rounding can push a support endpoint a hair inside the core
    return FuzzyNumber(a, b, max(a - lo, 0.0), max(hi - b, 0.0))


def _interval_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return min(p), max(p)


def add(x, y) -> FuzzyNumber:
    x, y = _as_fuzzy(x), _as_fuzzy(y)
    return FuzzyNumber(x.a + y.a, x.b + y.b, x.alpha + y.alpha, x.beta + y.beta)


def sub(x, y) -> FuzzyNumber:
    x, y = _as_fuzzy(x), _as_fuzzy(y)
    return FuzzyNumber(x.a - y.b, x.b - y.a, x.alpha + y.beta, x.beta + y.alpha)


def mul(x, y) -> FuzzyNumber:
    x, y = _as_fuzzy(x), _as_fuzzy(y)
    return _from_endpoints(_interval_mul(x.core, y.core), _interval_mul(x.support, y.support))


def _reciprocal(y: FuzzyNumber) -> FuzzyNumber:
    lo, hi = y.support
    if lo <= 0.0 <= hi:
        raise DomainError(f"division by a fuzzy number whose support {y.support} contains 0")
    return _from_endpoints((1.0 / y.b, 1.0 / y.a), (1.0 / hi, 1.0 / lo))


def div(x, y) -> FuzzyNumber:
    x, y = _as_fuzzy(x), _as_fuzzy(y)
    return mul(x, _reciprocal(y))


def pow(x, y) -> FuzzyNumber:
    """``x ** y`` for nonnegative supports.

    ``u ** v`` is monotone in each argument on a nonnegative box, so both
    the core and the support come from the corner values.
    """
    x, y = _as_fuzzy(x), _as_fuzzy(y)
    if x.support[0] < 0 or y.support[0] < 0:
        raise DomainError("pow needs nonnegative supports")

    def corners(u, v):
        vals = [u[i] ** v[j] for i in (0, 1) for j in (0, 1)]
        return min(vals), max(vals)

    return _from_endpoints(corners(x.core, y.core), corners(x.support, y.support))


# ---------------------------------------------------------------------------
# level-set representation


@dataclass(frozen=True, eq=False)
class DiscretizedFuzzy:
    """A fuzzy quantity stored as nested intervals on equally spaced levels.

    ``levels[0]`` is 0 and its interval is the closed support (the limit of
    the cuts as the level falls to 0); ``levels[-1]`` is 1, the core.
    """

    levels: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        levels = np.asarray(self.levels, dtype=float)
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        if levels.ndim != 1 or levels.size < 2 or lo.shape != levels.shape or hi.shape != levels.shape:
            raise ValidationError("levels, lo and hi must be 1-d arrays of equal length >= 2")
        if levels[0] != 0.0 or levels[-1] != 1.0 or np.any(np.diff(levels) <= 0):
            raise ValidationError("levels must increase strictly from 0 to 1")
        tol = 1e-9 * max(1.0, float(np.max(np.abs(hi))), float(np.max(np.abs(lo))))
        if np.any(lo > hi + tol):
            raise ValidationError("every interval needs lo <= hi")
        if np.any(np.diff(lo) < -tol) or np.any(np.diff(hi) > tol):
            raise ValidationError("intervals must be nested")
        for name, arr in (("levels", levels), ("lo", lo), ("hi", hi)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_fuzzy(cls, n: FuzzyNumber, resolution: int = DEFAULT_RESOLUTION) -> "DiscretizedFuzzy":
        levels = _levels(resolution)
        lo, hi = _cuts(n, levels)
        return cls(levels, lo, hi)

    @property
    def resolution(self) -> int:
        return int(self.levels.size)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.lo[0]), float(self.hi[0])

    @property
    def core(self) -> tuple[float, float]:
        return float(self.lo[-1]), float(self.hi[-1])

    def cuts(self):
        """``(level, lo, hi)`` triples for the positive levels."""
        return [(float(l), float(a), float(b)) for l, a, b in zip(self.levels[1:], self.lo[1:], self.hi[1:])]

    def features(self) -> tuple[float, float]:
        """Centroid and area, integrating the level sets exactly between levels.

        Cut endpoints are interpolated linearly between stored levels, so the
        result is exact for trapezoids.
        """
        h = np.diff(self.levels)
        width = self.hi - self.lo
        area = float(np.sum(h * 0.5 * (width[:-1] + width[1:])))

        def sq_int(e):
            return h * (e[:-1] ** 2 + e[:-1] * e[1:] + e[1:] ** 2) / 3.0

        moment = float(np.sum(0.5 * (sq_int(self.hi) - sq_int(self.lo))))
        if area <= 1e-15:
            return float(np.mean(0.5 * (self.lo + self.hi))), 0.0
        return moment / area, area

    def to_fuzzy(self) -> FuzzyNumber:
        """Fit a trapezoid through the stored core and support."""
        return _from_endpoints(self.core, self.support)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "lo", "hi"])
        for l, a, b in zip(self.levels, self.lo, self.hi):
            w.writerow([f"{l:.6g}", f"{a:.6g}", f"{b:.6g}"])
        return buf.getvalue()

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscretizedFuzzy):
            return NotImplemented
        return (
            np.array_equal(self.levels, other.levels)
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
        )

    __hash__ = None


def _levels(resolution: int) -> np.ndarray:
    if int(resolution) < 2:
        raise DomainError("resolution must be at least 2")
    return np.linspace(0.0, 1.0, int(resolution))


def _level_arrays(x: Fuzzy, levels: np.ndarray):
    if isinstance(x, DiscretizedFuzzy):
        if x.levels.shape != levels.shape or not np.allclose(x.levels, levels):
            raise DomainError("discretized argument uses a different resolution")
        return x.lo, x.hi
    return _cuts(_as_fuzzy(x), levels)


def extend_binary(
    f: Callable, x: Fuzzy, y: Fuzzy, resolution: int = DEFAULT_RESOLUTION
) -> DiscretizedFuzzy:
    """Lift a monotone crisp function to fuzzy arguments, cut by cut.

    ``f`` must be continuous and nondecreasing in both arguments and accept
    numpy arrays. At each level the result is ``[f(lo_x, lo_y), f(hi_x, hi_y)]``.
    """
    levels = _levels(resolution)
    xlo, xhi = _level_arrays(x, levels)
    ylo, yhi = _level_arrays(y, levels)
    lo = np.asarray(f(xlo, ylo), dtype=float)
    hi = np.asarray(f(xhi, yhi), dtype=float)
    return DiscretizedFuzzy(levels, np.broadcast_to(lo, levels.shape).copy(), np.broadcast_to(hi, levels.shape).copy())


@dataclass(frozen=True, eq=False)
class SampledMembership:
    """Output of :func:`brute_force_extend`: membership per output bin.

    ``edges`` has one more entry than ``mu``.
    """

    edges: np.ndarray
    mu: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def cut(self, level: float) -> tuple[float, float]:
        """Hull of the bins whose membership reaches ``level``; level 0 gives the support."""
        mask = self.mu > 0 if level <= 0 else self.mu >= level - 1e-12
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            raise DomainError(f"no bin reaches level {level}")
        return float(self.edges[idx[0]]), float(self.edges[idx[-1] + 1])


def _arg_grid(n: FuzzyNumber, grid: int) -> np.ndarray:
    lo, hi = n.support
    if hi - lo <= 0:
        return np.array([lo])
    return np.linspace(lo, hi, grid)


def brute_force_extend(f: Callable, x: FuzzyNumber, y: FuzzyNumber, grid: int = DEFAULT_ORACLE_GRID) -> SampledMembership:
    """Evaluate ``sup min(mu_x(u), mu_y(v))`` over ``f(u, v)`` in each output bin.

    Each argument's support is sampled with ``grid`` points and the observed
    range of ``f`` is split into ``grid`` equal bins. No monotonicity is
    assumed of ``f``.
    """
    if grid < 10:
        raise DomainError("oracle grid must have at least 10 points")
    u = _arg_grid(x, grid)
    v = _arg_grid(y, grid)
    mu_u = np.asarray(membership(x, u), dtype=float).reshape(-1)
    mu_v = np.asarray(membership(y, v), dtype=float).reshape(-1)
    U, V = np.meshgrid(u, v, indexing="ij")
    F = np.asarray(f(U, V), dtype=float).reshape(-1)
    W = np.minimum.outer(mu_u, mu_v).reshape(-1)
    fmin, fmax = float(F.min()), float(F.max())
    if fmax - fmin <= 1e-15 * max(1.0, abs(fmin)):
        edges = np.array([fmin, fmax])
        return SampledMembership(edges, np.array([float(W.max())]))
    edges = np.linspace(fmin, fmax, grid + 1)
    idx = np.clip(((F - fmin) / (fmax - fmin) * grid).astype(int), 0, grid - 1)
    mu = np.zeros(grid)
    np.maximum.at(mu, idx, W)
    return SampledMembership(edges, mu)
