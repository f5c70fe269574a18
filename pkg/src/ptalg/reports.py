"""Structured verification reports shared by the extension and embedding verifiers."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .freegroup import GNormalForm, Word


def jsonable(x):
    if isinstance(x, (Word, Fraction)):
        return str(x)
    if isinstance(x, GNormalForm):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [jsonable(v) for v in sorted(x, key=_order)]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def _order(v):
    if isinstance(v, int):
        return (0, v, ())
    if isinstance(v, Word):
        return (1, 0, v.sort_key())
    return (2, 0, (str(v),))


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool | None  # None: inconclusive
    witness: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return {True: "pass", False: "fail", None: "inconclusive"}[self.passed]

    def to_json(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "status": self.status, "witness": jsonable(self.witness)}


@dataclass
class ExtensionReport:
    """Outcome of one verifier run.

    ``timing`` is kept out of :meth:`dumps` unless asked for, so identical runs
    serialise to identical bytes.
    """

    case: str
    params: dict
    seed: int | None = None
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)

    def add(self, name: str, anchor: str, passed: bool | None, **witness) -> Check:
        c = Check(name, anchor, None if passed is None else bool(passed), witness)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed is True for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.passed is not True), None)

    def extend(self, other: "ExtensionReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.anchor, c.passed, c.witness))
        self.notes.extend(other.notes)
        self.tables.update(other.tables)
        for k, v in other.timing.items():
            self.timing[prefix + k] = v

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "case": self.case,
            "params": jsonable(self.params),
            "checks": [c.to_json() for c in self.checks],
            "seed": self.seed,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        if self.tables:
            out["tables"] = jsonable(self.tables)
        if timing:
            out["timing"] = {k: round(v, 6) for k, v in self.timing.items()}
        return out

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True)

    def summary(self) -> str:
        return "\n".join(f"{c.status.upper():<13} {self.case}/{c.name}" for c in self.checks)
