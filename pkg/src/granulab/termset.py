"""Linguistic term sets: ordered labels with fuzzy-number meanings on [0, 1]."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator, Union

from granulab.errors import UnknownTermError, ValidationError
from granulab.fuzznum import UnitFuzzyNumber, features

__all__ = ["Term", "TermSet", "builtin", "builtin_names", "load", "loads", "save", "dumps", "resolve"]


@dataclass(frozen=True)
class Term:
    label: str
    semantics: UnitFuzzyNumber

    def __post_init__(self) -> None:
        if not isinstance(self.label, str) or not self.label.strip():
            raise ValidationError("term label must be a nonempty string")
        if not isinstance(self.semantics, UnitFuzzyNumber):
            try:
                object.__setattr__(self, "semantics", UnitFuzzyNumber.of(self.semantics))
            except ValidationError as exc:
                raise ValidationError(f"term {self.label!r}: {exc}") from None

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class TermSet:
    """An ordered vocabulary; its length is the granularity."""

    name: str
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if len(terms) < 2:
            raise ValidationError(f"term set {self.name!r} needs at least 2 terms")
        seen = set()
        for t in terms:
            if t.label in seen:
                raise ValidationError(f"term set {self.name!r}: duplicate label {t.label!r}")
            seen.add(t.label)
        prev = None
        for t in terms:
            c, _ = features(t.semantics)
            if prev is not None and c < prev[1] - 1e-12:
                raise ValidationError(
                    f"term set {self.name!r}: centroid of {t.label!r} ({c:.6g}) "
                    f"is below that of {prev[0]!r} ({prev[1]:.6g})"
                )
            prev = (t.label, c)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __getitem__(self, i: int) -> Term:
        return self.terms[i]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)

    def lookup(self, label: str) -> Term:
        return self.terms[self.index_of(label)]

    def index_of(self, label: str) -> int:
        for i, t in enumerate(self.terms):
            if t.label == label:
                return i
        raise UnknownTermError(f"no term {label!r} in {self.name}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "terms": [{"label": t.label, **t.semantics.to_dict()} for t in self.terms],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TermSet":
        if not isinstance(d, dict) or "terms" not in d:
            raise ValidationError("term set JSON needs a 'terms' list")
        name = str(d.get("name", "custom"))
        terms = []
        for i, raw in enumerate(d["terms"]):
            label = raw.get("label") if isinstance(raw, dict) else None
            where = repr(label) if label else f"#{i}"
            try:
                sem = UnitFuzzyNumber(raw["a"], raw["b"], raw["alpha"], raw["beta"])
            except KeyError as exc:
                raise ValidationError(f"term {where}: missing field {exc}") from None
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"term {where}: {exc}") from None
            terms.append(Term(label, sem))
        return cls(name, tuple(terms))


def _ts(name: str, rows) -> TermSet:
    return TermSet(name, tuple(Term(lbl, UnitFuzzyNumber(*sem)) for lbl, sem in rows))


_BUILTIN_ROWS = {
    "L1": [
        ("impossible", (0, 0, 0, 0)),
        ("unlikely", (0, 0.25, 0, 0.1)),
        ("maybe", (0.4, 0.6, 0.1, 0.1)),
        ("likely", (0.75, 1, 0.1, 0)),
        ("certain", (1, 1, 0, 0)),
    ],
    "L2": [
        ("impossible", (0, 0, 0, 0)),
        ("extremely_unlikely", (0, 0.02, 0, 0.05)),
        ("very_low_chance", (0.1, 0.18, 0.06, 0.05)),
        ("small_chance", (0.22, 0.36, 0.05, 0.06)),
        ("it_may", (0.41, 0.58, 0.09, 0.07)),
        ("meaningful_chance", (0.63, 0.80, 0.05, 0.06)),
        ("most_likely", (0.78, 0.92, 0.06, 0.05)),
        ("extremely_likely", (0.98, 1, 0.05, 0)),
        ("certain", (1, 1, 0, 0)),
    ],
    "L3": [
        ("impossible", (0, 0, 0, 0)),
        ("extremely_unlikely", (0, 0.02, 0, 0.05)),
        ("not_likely", (0.05, 0.15, 0.03, 0.03)),
        ("very_low_chance", (0.1, 0.18, 0.06, 0.05)),
        ("small_chance", (0.22, 0.36, 0.05, 0.06)),
        ("it_may", (0.41, 0.58, 0.09, 0.07)),
        ("likely", (0.53, 0.69, 0.09, 0.12)),
        ("meaningful_chance", (0.63, 0.80, 0.05, 0.06)),
        ("high_chance", (0.75, 0.87, 0.04, 0.04)),
        ("most_likely", (0.78, 0.92, 0.06, 0.05)),
        ("very_high_chance", (0.87, 0.96, 0.04, 0.03)),
        ("extremely_likely", (0.98, 1, 0.05, 0)),
        ("certain", (1, 1, 0, 0)),
    ],
}

_BUILTINS = {name: _ts(name, rows) for name, rows in _BUILTIN_ROWS.items()}


def builtin_names() -> tuple[str, ...]:
    return tuple(_BUILTINS)


def builtin(name: str) -> TermSet:
    """One of the reference term sets ``L1`` (5 terms), ``L2`` (9) or ``L3`` (13)."""
    key = name.strip().upper()
    if key not in _BUILTINS:
        raise UnknownTermError(f"unknown term set {name!r}; built-ins are {', '.join(_BUILTINS)}")
    return _BUILTINS[key]


def loads(text: str) -> TermSet:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"term set is not valid JSON: {exc}") from None
    return TermSet.from_dict(data)


def load(source: Union[str, os.PathLike, IO[str]]) -> TermSet:
    """Read a term set from a JSON path or an open text stream."""
    if hasattr(source, "read"):
        return loads(source.read())
    return loads(Path(source).read_text(encoding="utf-8"))


def dumps(ts: TermSet) -> str:
    return json.dumps(ts.to_dict(), indent=2) + "\n"


def save(ts: TermSet, target: Union[str, os.PathLike, IO[str]]) -> None:
    text = dumps(ts)
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def resolve(spec: str) -> TermSet:
    """A built-in name, or else a path to a JSON term set."""
    if spec.strip().upper() in _BUILTINS:
        return builtin(spec)
    path = Path(spec)
    if not path.exists():
        raise UnknownTermError(f"{spec!r} is neither a built-in term set nor a file")
    return load(path)
