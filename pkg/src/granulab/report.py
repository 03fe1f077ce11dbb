"""File output for experiments: delimited tables, JSON summaries and SVG figures.

Figures are drawn with matplotlib's object-oriented API (no pyplot state)
and saved with fixed metadata so repeated runs produce identical bytes.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from granulab.closure import ClosureTable, ExperimentReport
from granulab.fuzznum import DiscretizedFuzzy, FuzzyNumber
from granulab.termset import TermSet

matplotlib.rcParams["svg.hashsalt"] = "granulab"
matplotlib.rcParams["svg.fonttype"] = "none"

_SVG_META = {"Date": None, "Creator": "granulab"}

__all__ = [
    "slug",
    "termset_csv",
    "termset_markdown",
    "plot_termset",
    "plot_result",
    "plot_closure",
    "plot_differences",
    "markdown_summary",
    "write_experiment",
]


def slug(text: str) -> str:
    """File-name-safe form of a selector string, e.g. ``Tsc(p=-0.8)`` -> ``Tsc_p=-0.8``."""
    return re.sub(r"[^A-Za-z0-9.=\-]+", "_", text).strip("_")


def _g(x: float) -> str:
    return f"{x:.6g}"


def termset_csv(ts: TermSet) -> str:
    lines = ["label,a,b,alpha,beta"]
    for t in ts:
        lines.append(",".join([t.label, *(_g(v) for v in t.semantics.as_tuple())]))
    return "\n".join(lines) + "\n"


def termset_markdown(ts: TermSet) -> str:
    lines = [f"| {ts.name} | a | b | alpha | beta |", "|---|---|---|---|---|"]
    for t in ts:
        lines.append(f"| {t.label} | " + " | ".join(_g(v) for v in t.semantics.as_tuple()) + " |")
    return "\n".join(lines) + "\n"


def _trapezoid_xy(n: FuzzyNumber) -> tuple[list[float], list[float]]:
    a, b, alpha, beta = n.as_tuple()
    return [a - alpha, a, b, b + beta], [0.0, 1.0, 1.0, 0.0]


def _save(fig: Figure, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata=_SVG_META)
    return path


def plot_termset(ts: TermSet, path: Path) -> Path:
    """Membership trapezoids of every term on [0, 1], labelled at their cores."""
    fig = Figure(figsize=(8, 3.2))
    ax = fig.add_subplot()
    for k, t in enumerate(ts):
        xs, ys = _trapezoid_xy(t.semantics)
        line = ax.plot(xs, ys, lw=1.2)[0]
        a, b = t.semantics.core
        # stagger labels so neighbouring terms stay readable
        ax.text(0.5 * (a + b), 1.04 + 0.07 * (k % 3), t.label, ha="center", fontsize=7, color=line.get_color())
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(0, 1.3)
    ax.set_xlabel("likelihood")
    ax.set_ylabel("membership")
    ax.set_title(f"Term set {ts.name} ({len(ts)} terms)")
    fig.tight_layout()
    return _save(fig, path)


def plot_result(result: DiscretizedFuzzy, ts: TermSet, chosen: str, path: Path, title: str = "") -> Path:
    """An extension result drawn over the term it was approximated by."""
    fig = Figure(figsize=(6, 3))
    ax = fig.add_subplot()
    xs = np.concatenate([result.lo, result.hi[::-1]])
    ys = np.concatenate([result.levels, result.levels[::-1]])
    ax.plot(xs, ys, color="k", lw=1.5, label="result")
    txs, tys = _trapezoid_xy(ts.lookup(chosen).semantics)
    ax.plot(txs, tys, ls="--", lw=1.2, label=chosen)
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(0, 1.05)
    ax.set_xlabel("likelihood")
    ax.set_ylabel("membership")
    ax.legend(fontsize=8, frameon=False)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_closure(table: ClosureTable, path: Path) -> Path:
    """Closure table as a heat map of result term positions."""
    n = table.n
    fig = Figure(figsize=(1.2 + 0.45 * n, 1.0 + 0.4 * n))
    ax = fig.add_subplot()
    ax.imshow(table.indices, cmap="viridis", vmin=0, vmax=n - 1, origin="upper")
    for i in range(n):
        for j in range(n):
            ax.text(j, i, str(table.indices[i, j]), ha="center", va="center", fontsize=7, color="w")
    ax.set_xticks(range(n), table.labels, rotation=60, ha="right", fontsize=7)
    ax.set_yticks(range(n), table.labels, fontsize=7)
    ax.set_title(f"{table.selector} on {table.termset}", fontsize=9)
    fig.tight_layout()
    return _save(fig, path)


def plot_differences(report: ExperimentReport, termset: str, path: Path) -> Path:
    """Adjacent difference percentages along the selector chain, with thresholds."""
    diffs = report.adjacent_diffs(termset)
    fig = Figure(figsize=(7, 3))
    ax = fig.add_subplot()
    x = np.arange(len(diffs))
    ax.bar(x, [100 * d.percent for d in diffs], color="0.5")
    for p in report.partitions.get(termset, []):
        ax.axhline(100 * p.threshold, ls=":", lw=1, color="C3")
    ax.set_xticks(x, [f"{a}\n{b}" for a, b in (d.pair for d in diffs)], fontsize=6)
    ax.set_ylabel("% of cells changed")
    ax.set_title(f"Differences between neighbouring T-norms on {termset}", fontsize=9)
    fig.tight_layout()
    return _save(fig, path)


def markdown_summary(report: ExperimentReport) -> str:
    out = ["# Closure experiment", ""]
    cfg = report.config
    out.append(
        f"weights: centroid {_g(cfg.weight_centroid)}, area {_g(cfg.weight_area)}; "
        f"tie break {cfg.tie_break}; resolution {report.resolution}"
    )
    for name in report.tables:
        out += ["", f"## {name}", "", "| from | to | count | percent |", "|---|---|---|---|"]
        for d in report.adjacent_diffs(name):
            out.append(f"| {d.pair[0]} | {d.pair[1]} | {d.count} | {_g(100 * d.percent)}% |")
        for p in report.partitions.get(name, []):
            classes = ", ".join("{" + ", ".join(c) + "}" for c in p.classes)
            out += ["", f"threshold {_g(100 * p.threshold)}%: {len(p)} classes: {classes}"]
    return "\n".join(out) + "\n"


def write_experiment(report: ExperimentReport, outdir: Path, figures: bool = True) -> list[Path]:
    """Write every table (CSV and Markdown), the JSON summaries and the figures."""
    outdir = Path(outdir)
    written: list[Path] = []

    def put(rel: str, text: str) -> None:
        p = outdir / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
        written.append(p)

    for name, tables in report.tables.items():
        for t in tables:
            base = f"tables/{name}_{slug(t.selector)}"
            put(base + ".csv", t.to_csv())
            put(base + ".md", t.to_markdown())
        diffs = {
            "adjacent": [d.to_dict() for d in report.adjacent_diffs(name)],
            "intra_class": [d.to_dict() for d in report.intra_class_diffs(name)],
        }
        put(f"diffs_{name}.json", json.dumps(diffs, indent=2) + "\n")
        put(
            f"partitions_{name}.json",
            json.dumps([p.to_dict() for p in report.partitions.get(name, [])], indent=2) + "\n",
        )
    put("summary.json", report.to_json())
    put("report.md", markdown_summary(report))

    if figures:
        for name, tables in report.tables.items():
            written.append(plot_termset(report.termsets[name], outdir / f"figures/termset_{name}.svg"))
            written.append(plot_differences(report, name, outdir / f"figures/diffs_{name}.svg"))
            for t in tables:
                written.append(plot_closure(t, outdir / f"figures/closure_{name}_{slug(t.selector)}.svg"))
    return written
