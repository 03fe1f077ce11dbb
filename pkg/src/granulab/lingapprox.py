"""Linguistic approximation: pick the term whose meaning is nearest a result.

Results and terms are compared on two features, the centroid (first moment
over area) and the area under the membership curve, with a weighted
Euclidean distance.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Union

from granulab.errors import ValidationError
from granulab.fuzznum import DiscretizedFuzzy, FuzzyNumber, features
from granulab.termset import Term, TermSet

__all__ = ["ApproxConfig", "DEFAULT_CONFIG", "distance", "approximate", "nearest", "load_config"]

TIE_BREAKS = ("pessimistic", "optimistic")


@dataclass(frozen=True)
class ApproxConfig:
    weight_centroid: float = 0.8
    weight_area: float = 0.2
    tie_break: str = "pessimistic"

    def __post_init__(self) -> None:
        wc, wa = float(self.weight_centroid), float(self.weight_area)
        if not (math.isfinite(wc) and math.isfinite(wa)) or wc < 0 or wa < 0:
            raise ValidationError("weights must be finite and nonnegative")
        if wc == 0 and wa == 0:
            raise ValidationError("weights cannot both be zero")
        if self.tie_break not in TIE_BREAKS:
            raise ValidationError(f"tie_break must be one of {TIE_BREAKS}")
        object.__setattr__(self, "weight_centroid", wc)
        object.__setattr__(self, "weight_area", wa)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ApproxConfig":
        known = {k: d[k] for k in ("weight_centroid", "weight_area", "tie_break") if k in d}
        return cls(**known)


DEFAULT_CONFIG = ApproxConfig()


def load_config(path: Union[str, os.PathLike]) -> ApproxConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return ApproxConfig.from_dict(data)


def distance(f1: tuple[float, float], f2: tuple[float, float], cfg: ApproxConfig = DEFAULT_CONFIG) -> float:
    dc = f1[0] - f2[0]
    da = f1[1] - f2[1]
    return math.sqrt(cfg.weight_centroid * dc * dc + cfg.weight_area * da * da)


def nearest(
    result: Union[FuzzyNumber, DiscretizedFuzzy], ts: TermSet, cfg: ApproxConfig = DEFAULT_CONFIG
) -> tuple[int, float]:
    """Index of the closest term and its distance.

    Distances within a relative 1e-9 of the minimum count as ties; ties go
    to the lowest index (pessimistic) or the highest (optimistic).
    """
    f = features(result)
    dists = [distance(f, features(t.semantics), cfg) for t in ts.terms]
    best = min(dists)
    tied = [i for i, d in enumerate(dists) if d <= best * (1 + 1e-9) + 1e-15]
    i = tied[0] if cfg.tie_break == "pessimistic" else tied[-1]
    return i, dists[i]


def approximate(
    result: Union[FuzzyNumber, DiscretizedFuzzy], ts: TermSet, cfg: ApproxConfig = DEFAULT_CONFIG
) -> Term:
    """The term of ``ts`` whose meaning is closest to ``result``."""
    return ts.terms[nearest(result, ts, cfg)[0]]
