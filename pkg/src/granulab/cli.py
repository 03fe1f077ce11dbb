"""Command-line front end.

Exit status: 0 success, 2 usage error, 3 validation error, 4 I/O error,
5 axiom violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from granulab import calculi, closure, lingapprox, report, termset
from granulab.errors import DomainError, GranulabError
from granulab.fuzznum import DEFAULT_RESOLUTION, FuzzyNumber, extend_binary, features

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_IO = 4
EXIT_AXIOM = 5

CONFIG_ENV = "GRANULAB_CONFIG"


class UsageError(Exception):
    pass


def _g(x: float) -> str:
    return f"{x:.6g}"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# configuration


def _load_base_config(path: str | None) -> dict:
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GranulabError(f"config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise GranulabError(f"config {path}: expected a JSON object")
    return data


def _approx_config(args) -> lingapprox.ApproxConfig:
    base = _load_base_config(getattr(args, "config", None))
    cfg = lingapprox.ApproxConfig.from_dict(base)
    if getattr(args, "weights", None):
        try:
            wc, wa = (float(v) for v in args.weights.split(","))
        except ValueError:
            raise UsageError(f"--weights expects 'wc,wa', got {args.weights!r}") from None
        cfg = lingapprox.ApproxConfig(wc, wa, cfg.tie_break)
    if getattr(args, "tie_break", None):
        cfg = lingapprox.ApproxConfig(cfg.weight_centroid, cfg.weight_area, args.tie_break)
    return cfg


def _resolution(args) -> int:
    if getattr(args, "resolution", None) is not None:
        res = args.resolution
    else:
        res = int(_load_base_config(getattr(args, "config", None)).get("resolution", DEFAULT_RESOLUTION))
    if res < 2:
        raise UsageError("--resolution must be at least 2")
    return res


def _threshold(text: str) -> float:
    t = text.strip()
    try:
        value = float(t[:-1]) / 100.0 if t.endswith("%") else float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad threshold {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold {text!r} outside [0, 1]")
    return value


def _fuzzy_arg(text: str, ts: termset.TermSet) -> FuzzyNumber:
    if "," in text:
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError:
            raise UsageError(f"bad 4-tuple {text!r}") from None
        if len(vals) != 4:
            raise UsageError(f"a fuzzy number needs 4 values, got {text!r}")
        return FuzzyNumber(*vals)
    return ts.lookup(text).semantics


# ---------------------------------------------------------------------------
# commands


def cmd_termset(args) -> int:
    if args.action == "list":
        for name in termset.builtin_names():
            ts = termset.builtin(name)
            print(f"{name}\t{len(ts)} terms")
        return EXIT_OK
    if not args.name:
        raise UsageError("termset show needs a term set name or path")
    ts = termset.resolve(args.name)
    fmt = args.format or "md"
    if fmt == "svg":
        if not args.out:
            raise UsageError("--format svg needs --out")
        report.plot_termset(ts, Path(args.out))
    elif fmt == "csv":
        _emit(report.termset_csv(ts), args.out)
    elif fmt == "json":
        _emit(termset.dumps(ts), args.out)
    else:
        _emit(report.termset_markdown(ts), args.out)
    if args.plot:
        report.plot_termset(ts, Path(args.plot))
    return EXIT_OK


def cmd_eval(args) -> int:
    sel = calculi.parse_selector(args.selector)
    if args.scalar is not None:
        a, b = args.scalar
        print(_g(sel(a, b)))
        return EXIT_OK
    if args.a is None or args.b is None:
        raise UsageError("eval needs two arguments (labels or a,b,alpha,beta) or --scalar A B")
    if not sel.is_continuous:
        raise DomainError(f"{sel} is discontinuous; use --scalar")
    ts = termset.resolve(args.termset)
    cfg = _approx_config(args)
    x = _fuzzy_arg(args.a, ts)
    y = _fuzzy_arg(args.b, ts)
    result = extend_binary(sel, x, y, _resolution(args))
    idx, dist = lingapprox.nearest(result, ts, cfg)
    label = ts[idx].label
    centroid, area = features(result)
    fmt = args.format or "text"
    if fmt == "json":
        payload = {
            "selector": str(sel),
            "termset": ts.name,
            "label": label,
            "distance": dist,
            "centroid": centroid,
            "area": area,
            "support": list(result.support),
            "core": list(result.core),
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    elif fmt == "csv":
        _emit(result.to_csv(), args.out)
    elif fmt == "svg":
        if not args.out:
            raise UsageError("--format svg needs --out")
        report.plot_result(result, ts, label, Path(args.out), title=f"{sel}({args.a}, {args.b})")
    else:
        lines = [
            f"label: {label}",
            f"distance: {_g(dist)}",
            f"centroid: {_g(centroid)}",
            f"area: {_g(area)}",
            f"support: [{_g(result.support[0])}, {_g(result.support[1])}]",
            f"core: [{_g(result.core[0])}, {_g(result.core[1])}]",
        ]
        _emit("\n".join(lines) + "\n", None)
        if args.out:
            _emit(result.to_csv(), args.out)
    return EXIT_OK


def _render_table(t: closure.ClosureTable, fmt: str, out: str | None) -> None:
    if fmt == "svg":
        if not out:
            raise UsageError("--format svg needs --out")
        report.plot_closure(t, Path(out))
    elif fmt == "json":
        _emit(json.dumps(t.to_dict(), indent=2) + "\n", out)
    elif fmt == "md":
        _emit(t.to_markdown(), out)
    else:
        _emit(t.to_csv(), out)


def cmd_closure(args) -> int:
    ts = termset.resolve(args.termset)
    t = closure.closure_table(args.tnorm, ts, _approx_config(args), _resolution(args))
    _render_table(t, args.format or "csv", args.out)
    return EXIT_OK


def _table_from(spec: str, ts: termset.TermSet, args) -> closure.ClosureTable:
    path = Path(spec)
    if path.suffix.lower() == ".csv" and path.exists():
        return closure.ClosureTable.from_csv(path.read_text(encoding="utf-8"), ts.name)
    return closure.closure_table(spec, ts, _approx_config(args), _resolution(args))


def cmd_compare(args) -> int:
    ts = termset.resolve(args.termset)
    d = closure.diff_count(_table_from(args.first, ts, args), _table_from(args.second, ts, args))
    fmt = args.format or "json"
    if fmt == "json":
        _emit(json.dumps(d.to_dict(), indent=2) + "\n", args.out)
    elif fmt == "csv":
        _emit(f"first,second,count,percent\n{d.pair[0]},{d.pair[1]},{d.count},{_g(d.percent)}\n", args.out)
    else:
        _emit(f"{d.pair[0]} vs {d.pair[1]}: {d.count} of {d.total} cells ({_g(100 * d.percent)}%)\n", args.out)
    return EXIT_OK


def cmd_classes(args) -> int:
    ts = termset.resolve(args.termset)
    sels = args.tnorm or list(closure.PRESET_SELECTORS)
    part = closure.equivalence_classes(sels, ts, _approx_config(args), args.threshold, _resolution(args))
    fmt = args.format or "json"
    if fmt == "json":
        _emit(json.dumps(part.to_dict(), indent=2) + "\n", args.out)
    else:
        lines = [f"threshold {_g(100 * part.threshold)}%: {len(part)} classes"]
        lines += ["  {" + ", ".join(c) + "}" for c in part.classes]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _threshold_overrides(items: Sequence[str] | None) -> dict[str, list[float]]:
    out: dict[str, list[float]] = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--threshold for experiment expects NAME=P, got {item!r}")
        name, val = item.split("=", 1)
        try:
            out.setdefault(name.strip().upper(), []).append(_threshold(val))
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc)) from None
    return out


def cmd_experiment(args) -> int:
    rep = closure.run_experiment(
        args.preset,
        _approx_config(args),
        _resolution(args),
        thresholds=_threshold_overrides(args.threshold),
        workers=args.workers,
    )
    outdir = Path(args.out)
    files = report.write_experiment(rep, outdir, figures=not args.no_figures)
    sys.stdout.write(report.markdown_summary(rep))
    print(f"\nwrote {len(files)} files to {outdir}")
    return EXIT_OK


def cmd_axioms(args) -> int:
    if args.grid < 3:
        raise UsageError("--grid must be at least 3")
    sel = calculi.parse_selector(args.selector)
    rep = calculi.check_axioms(sel, args.grid, args.tol)
    ok = rep.passed(args.tol)
    if args.format == "json":
        _emit(json.dumps({**rep.as_dict(), "passed": ok}, indent=2) + "\n", args.out)
    else:
        lines = [
            f"{rep.selector} on a {rep.grid}-point grid: {'pass' if ok else 'FAIL'}",
            f"  boundary       {_g(rep.boundary)}",
            f"  commutativity  {_g(rep.commutativity)}",
            f"  monotonicity   {_g(rep.monotonicity)}",
            f"  associativity  {_g(rep.associativity)}",
        ]
        if rep.equivalent_to:
            lines.append("  equal to " + ", ".join(rep.equivalent_to) + " on the grid")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_AXIOM


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="granulab", description="Linguistic uncertainty calculi and granularity.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats, approx=True):
        if formats:
            sp.add_argument("--format", choices=formats)
        sp.add_argument("--out", help="output path (stdout when omitted)")
        if approx:
            sp.add_argument("--termset", default="L1", help="built-in name (L1, L2, L3) or JSON path")
            sp.add_argument("--weights", help="centroid,area weights, e.g. 0.8,0.2")
            sp.add_argument("--tie-break", choices=lingapprox.TIE_BREAKS)
            sp.add_argument("--resolution", type=int, help=f"alpha levels (default {DEFAULT_RESOLUTION})")
            sp.add_argument("--config", help=f"JSON config file (default ${CONFIG_ENV})")

    sp = sub.add_parser("termset", help="list or show term sets")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--plot", help="also write an SVG of the membership functions")
    common(sp, ["csv", "md", "json", "svg"], approx=False)
    sp.set_defaults(func=cmd_termset)

    sp = sub.add_parser("eval", help="evaluate an operator on labels, 4-tuples or scalars")
    sp.add_argument("selector")
    sp.add_argument("a", nargs="?")
    sp.add_argument("b", nargs="?")
    sp.add_argument("--scalar", nargs=2, type=float, metavar=("A", "B"))
    common(sp, ["text", "csv", "json", "svg"])
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("closure", help="closure table of one T-norm")
    sp.add_argument("--tnorm", required=True)
    common(sp, ["csv", "md", "json", "svg"])
    sp.set_defaults(func=cmd_closure)

    sp = sub.add_parser("compare", help="count differing cells of two closure tables")
    sp.add_argument("first", help="selector or closure CSV")
    sp.add_argument("second", help="selector or closure CSV")
    common(sp, ["json", "csv", "text"])
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("classes", help="equivalence classes of T-norms at a threshold")
    sp.add_argument("--threshold", type=_threshold, default=0.0, help="fraction or percent, e.g. 0.12 or 12%%")
    sp.add_argument("--tnorm", action="append", help="repeat, weakest first (default: the nine-operator preset)")
    common(sp, ["json", "text"])
    sp.set_defaults(func=cmd_classes)

    sp = sub.add_parser("experiment", help="run the full closure experiment and write a report")
    sp.add_argument("--preset", default="paper")
    sp.add_argument("--threshold", action="append", help="NAME=P, e.g. L2=6.5%%; replaces that term set's defaults")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--no-figures", action="store_true")
    common(sp, None)
    sp.set_defaults(func=cmd_experiment, out_required=True)

    sp = sub.add_parser("axioms", help="check T-norm / T-conorm axioms on a grid")
    sp.add_argument("selector")
    sp.add_argument("--grid", type=int, default=21)
    sp.add_argument("--tol", type=float, default=1e-9)
    common(sp, ["text", "json"], approx=False)
    sp.set_defaults(func=cmd_axioms)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "out_required", False) and not args.out:
            raise UsageError("--out DIR is required")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"granulab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"granulab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (GranulabError, ValueError, LookupError) as exc:
        print(f"granulab: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
