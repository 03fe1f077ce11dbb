"""Closure tables of fuzzified T-norms and the equivalence-class experiment.

A closure table holds, for every pair of terms, the label nearest to the
fuzzified T-norm of their meanings. Comparing the tables of neighbouring
T-norms shows how many of them a given granularity can tell apart.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from granulab.calculi import TNorm, parse_selector
from granulab.errors import DomainError, ValidationError
from granulab.fuzznum import DEFAULT_RESOLUTION, extend_binary
from granulab.lingapprox import DEFAULT_CONFIG, ApproxConfig, nearest
from granulab.termset import TermSet, builtin

__all__ = [
    "ClosureTable",
    "DiffReport",
    "EquivalencePartition",
    "ExperimentReport",
    "PRESET_SELECTORS",
    "PRESET_THRESHOLDS",
    "closure_table",
    "diff_count",
    "chain_partition",
    "equivalence_classes",
    "pairwise_percent",
    "run_experiment",
]

PRESET_SELECTORS = (
    "T1",
    "Tsc(p=-0.8)",
    "Tsc(p=-0.5)",
    "Tsc(p=-0.3)",
    "T2",
    "Tsc(p=0.5)",
    "Tsc(p=1)",
    "Tsc(p=2)",
    "T3",
)
# The published thresholds (6.5%, 15.5%, 12%) are the printed, rounded-down
# percentages of 3/45, 7/45 and 11/91 differences; classes stated at those
# thresholds contain pairs at exactly these counts, so the ratios are used.
PRESET_THRESHOLDS = {"L1": (0.0,), "L2": (3 / 45, 7 / 45), "L3": (11 / 91,)}

# percentages are ratios of small integers; this only absorbs float rounding
_THRESHOLD_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ClosureTable:
    termset: str
    selector: str
    labels: tuple[str, ...]
    indices: np.ndarray

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=int)
        n = len(self.labels)
        if idx.shape != (n, n):
            raise ValidationError(f"closure table must be {n}x{n}, got {idx.shape}")
        if not np.array_equal(idx, idx.T):
            raise ValidationError("closure table is not symmetric")
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def cells(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(self.labels[k] for k in row) for row in self.indices)

    def cell(self, a: str, b: str) -> str:
        i, j = self.labels.index(a), self.labels.index(b)
        return self.labels[self.indices[i, j]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClosureTable):
            return NotImplemented
        return (
            self.termset == other.termset
            and self.selector == other.selector
            and self.labels == other.labels
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.selector, *self.labels])
        for lbl, row in zip(self.labels, self.cells):
            w.writerow([lbl, *row])
        return buf.getvalue()

    def to_markdown(self) -> str:
        head = f"| {self.selector} | " + " | ".join(self.labels) + " |"
        rule = "|" + "---|" * (self.n + 1)
        rows = [f"| **{lbl}** | " + " | ".join(row) + " |" for lbl, row in zip(self.labels, self.cells)]
        return "\n".join([head, rule, *rows]) + "\n"

    def to_dict(self) -> dict:
        return {
            "termset": self.termset,
            "selector": self.selector,
            "labels": list(self.labels),
            "cells": [list(r) for r in self.cells],
        }

    @classmethod
    def from_csv(cls, text: str, termset: str = "custom") -> "ClosureTable":
        rows = list(csv.reader(io.StringIO(text)))
        if len(rows) < 3:
            raise ValidationError("closure CSV needs a header and at least two rows")
        selector, labels = rows[0][0], tuple(rows[0][1:])
        pos = {lbl: k for k, lbl in enumerate(labels)}
        try:
            idx = [[pos[c] for c in r[1:]] for r in rows[1:]]
        except KeyError as exc:
            raise ValidationError(f"closure CSV cell {exc} is not a column label") from None
        return cls(termset, selector, labels, np.array(idx))


@dataclass(frozen=True)
class DiffReport:
    pair: tuple[str, str]
    count: int
    total: int

    @property
    def percent(self) -> float:
        return self.count / self.total

    def to_dict(self) -> dict:
        return {"pair": list(self.pair), "count": self.count, "percent": self.percent}


@dataclass(frozen=True)
class EquivalencePartition:
    threshold: float
    classes: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.classes)

    def to_dict(self) -> dict:
        return {"threshold": self.threshold, "classes": [list(c) for c in self.classes]}


def _as_tnorm(sel) -> TNorm:
    if isinstance(sel, str):
        sel = parse_selector(sel)
    if not isinstance(sel, TNorm):
        raise DomainError(f"closure tables are built from T-norms, got {sel}")
    return sel


def closure_table(
    sel: TNorm | str,
    ts: TermSet,
    cfg: ApproxConfig = DEFAULT_CONFIG,
    resolution: int = DEFAULT_RESOLUTION,
) -> ClosureTable:
    """Approximate ``sel(E_i, E_j)`` for every pair of terms of ``ts``.

    Only the upper triangle is evaluated; commutativity fills the rest.
    """
    sel = _as_tnorm(sel)
    if not sel.is_continuous:
        raise DomainError(f"{sel} is discontinuous and cannot be fuzzified")
    n = len(ts)
    idx = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i, n):
            r = extend_binary(sel, ts[i].semantics, ts[j].semantics, resolution)
            idx[i, j] = idx[j, i] = nearest(r, ts, cfg)[0]
    return ClosureTable(ts.name, str(sel), ts.labels, idx)


def diff_count(ta: ClosureTable, tb: ClosureTable) -> DiffReport:
    """Count differing cells in the upper triangle, diagonal included."""
    if ta.labels != tb.labels:
        raise ValidationError(f"tables use different term sets ({ta.termset} vs {tb.termset})")
    iu = np.triu_indices(ta.n)
    count = int(np.count_nonzero(ta.indices[iu] != tb.indices[iu]))
    return DiffReport((ta.selector, tb.selector), count, ta.n * (ta.n + 1) // 2)


def pairwise_percent(tables: Sequence[ClosureTable]) -> np.ndarray:
    k = len(tables)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = diff_count(tables[i], tables[j]).percent
    return out


def chain_partition(tables: Sequence[ClosureTable], threshold: float) -> EquivalencePartition:
    """Group tables, taken in order, into runs of mutually close operators.

    A table joins the current class when its difference from every member
    is at most ``threshold``; otherwise it opens a new class.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValidationError(f"threshold must lie in [0, 1], got {threshold}")
    pct = pairwise_percent(tables)
    classes: list[list[int]] = []
    for k in range(len(tables)):
        if classes and all(pct[k, m] <= threshold + _THRESHOLD_EPS for m in classes[-1]):
            classes[-1].append(k)
        else:
            classes.append([k])
    return EquivalencePartition(threshold, tuple(tuple(tables[k].selector for k in c) for c in classes))


def equivalence_classes(
    sels: Sequence[TNorm | str],
    ts: TermSet,
    cfg: ApproxConfig = DEFAULT_CONFIG,
    threshold: float = 0.0,
    resolution: int = DEFAULT_RESOLUTION,
) -> EquivalencePartition:
    """Partition ``sels`` (given weakest first) by closure differences on ``ts``."""
    tables = [closure_table(s, ts, cfg, resolution) for s in sels]
    return chain_partition(tables, threshold)


@dataclass
class ExperimentReport:
    selectors: tuple[str, ...]
    config: ApproxConfig
    resolution: int
    termsets: dict[str, TermSet] = field(default_factory=dict)
    tables: dict[str, list[ClosureTable]] = field(default_factory=dict)
    partitions: dict[str, list[EquivalencePartition]] = field(default_factory=dict)

    def adjacent_diffs(self, termset: str) -> list[DiffReport]:
        t = self.tables[termset]
        return [diff_count(t[k], t[k + 1]) for k in range(len(t) - 1)]

    def intra_class_diffs(self, termset: str) -> list[DiffReport]:
        by_sel = {t.selector: t for t in self.tables[termset]}
        out = []
        for part in self.partitions.get(termset, []):
            for cls in part.classes:
                for i, a in enumerate(cls):
                    for b in cls[i + 1 :]:
                        out.append(diff_count(by_sel[a], by_sel[b]))
        return out

    def pairwise(self, termset: str) -> np.ndarray:
        return pairwise_percent(self.tables[termset])

    def summary(self) -> dict:
        return {
            "selectors": list(self.selectors),
            "config": self.config.to_dict(),
            "resolution": self.resolution,
            "termsets": {
                name: {
                    "adjacent": [d.to_dict() for d in self.adjacent_diffs(name)],
                    "intra_class": [d.to_dict() for d in self.intra_class_diffs(name)],
                    "pairwise_percent": np.round(self.pairwise(name), 6).tolist(),
                    "partitions": [p.to_dict() for p in self.partitions.get(name, [])],
                }
                for name in self.tables
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2) + "\n"


def run_experiment(
    preset: str = "paper",
    cfg: ApproxConfig = DEFAULT_CONFIG,
    resolution: int = DEFAULT_RESOLUTION,
    thresholds: dict[str, Iterable[float]] | None = None,
    termsets: Sequence[TermSet] | None = None,
    selectors: Sequence[str] | None = None,
    workers: int = 1,
) -> ExperimentReport:
    """Build every closure table of the preset and partition each term set.

    With ``workers > 1`` tables are computed on a thread pool; results are
    collected in submission order, so the report does not depend on it.
    """
    if preset != "paper":
        raise ValidationError(f"unknown preset {preset!r}")
    sels = tuple(str(_as_tnorm(s)) for s in (selectors or PRESET_SELECTORS))
    tsets = list(termsets) if termsets is not None else [builtin(n) for n in ("L1", "L2", "L3")]
    thr = dict(PRESET_THRESHOLDS)
    if thresholds:
        thr.update({k: tuple(v) for k, v in thresholds.items()})

    jobs = [(ts, s) for ts in tsets for s in sels]

    def work(job):
        ts, s = job
        return closure_table(s, ts, cfg, resolution)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(work, jobs))
    else:
        done = [work(j) for j in jobs]

    report = ExperimentReport(sels, cfg, resolution)
    for k, ts in enumerate(tsets):
        tabs = done[k * len(sels) : (k + 1) * len(sels)]
        report.termsets[ts.name] = ts
        report.tables[ts.name] = tabs
        report.partitions[ts.name] = [chain_partition(tabs, t) for t in thr.get(ts.name, (0.0,))]
    return report
