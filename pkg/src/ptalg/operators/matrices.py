"""Exact truncation of operators to finite windows.

Boundary convention: basis vectors whose image leaves the window are dropped,
never reflected.  Two evaluation modes exist:

* ``"pointwise"`` follows each word on the whole space and drops only the final
  image, giving the compression P_W T P_W exactly.
* ``"product"`` drops a vector as soon as any intermediate step leaves the
  window; this is the product of the truncated generator matrices.

The modes agree on the safe core (points at distance <= R - k from the
basepoint, k the propagation of the word), and every correctness claim made by
the verifiers is confined to it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from ..spaces import Window, build_window
from . import linalg
from .expr import Environment, OperatorExpr, OpWord


@dataclass
class WindowMatrix:
    """Sparse exact matrix; entries keyed by (row point, column point)."""

    window: Window
    entries: dict = field(default_factory=dict)
    boundary_loss: int = 0

    def __post_init__(self):
        self.entries = {k: Fraction(v) for k, v in self.entries.items() if v}

    def __getitem__(self, key):
        return self.entries.get(key, Fraction(0))

    def _combine(self, other: "WindowMatrix", sign: int) -> "WindowMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + sign * v
        return WindowMatrix(self.window, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rmul__(self, c):
        return WindowMatrix(self.window, {k: c * v for k, v in self.entries.items()})

    def __matmul__(self, other: "WindowMatrix") -> "WindowMatrix":
        by_row: dict = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict = {}
        for (r, m), v in self.entries.items():
            for c, w in by_row.get(m, ()):
                out[r, c] = out.get((r, c), 0) + v * w
        return WindowMatrix(self.window, out)

    def transpose(self) -> "WindowMatrix":
        return WindowMatrix(self.window, {(c, r): v for (r, c), v in self.entries.items()})

    def restrict_columns(self, cols: Iterable) -> "WindowMatrix":
        keep = set(cols)
        return WindowMatrix(self.window, {k: v for k, v in self.entries.items() if k[1] in keep})

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.entries.values()), default=Fraction(0))

    def rank(self) -> int:
        return rank(self)

    def column_images(self) -> dict:
        out: dict = {}
        for (r, c), v in self.entries.items():
            out.setdefault(c, {})[r] = v
        return out

    def dense(self) -> list[list[Fraction]]:
        idx = self.window.index
        n = len(self.window)
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (r, c), v in self.entries.items():
            rows[idx[r]][idx[c]] = v
        return rows

    def _sorted(self):
        idx = self.window.index
        return sorted(self.entries.items(), key=lambda kv: (idx[kv[0][1]], idx[kv[0][0]]))

    def to_matrix_market(self) -> str:
        """Matrix Market coordinate text; integer field when every entry is integral."""
        idx = self.window.index
        integral = all(v.denominator == 1 for v in self.entries.values())
        n = len(self.window)
        lines = [
            f"%%MatrixMarket matrix coordinate {'integer' if integral else 'real'} general",
            f"% window {self.window.space} radius {self.window.radius}",
            f"{n} {n} {len(self.entries)}",
        ]
        for (r, c), v in self._sorted():
            val = str(v.numerator) if integral else repr(float(v))
            lines.append(f"{idx[r] + 1} {idx[c] + 1} {val}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        sp = self.window.space
        return {
            "window": self.window.to_json(),
            "triplets": [
                [sp.point_str(r), sp.point_str(c), str(v)] for (r, c), v in self._sorted()
            ],
            "boundary_loss": self.boundary_loss,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _run_word(word: OpWord, p, env: Environment, window: Window | None):
    for sym in reversed(word):
        p = env.translation(sym).apply(p)
        if p is None:
            return None
        if window is not None and p not in window.index:
            return None
    return p


def truncate(expr: OperatorExpr, window: Window, env: Environment, mode: str = "pointwise") -> WindowMatrix:
    """Matrix of ``expr`` on span{delta_p : p in window}."""
    if mode not in ("pointwise", "product"):
        raise ValueError(f"unknown truncation mode {mode!r}")
    if env.space != window.space:
        raise ValueError(f"environment lives on {env.space}, window on {window.space}")
    step_window = window if mode == "product" else None
    entries: dict = {}
    lost = 0
    for word, coeff in expr.terms.items():
        for p in window.points:
            q = _run_word(word, p, env, step_window)
            if q is None:
                continue
            if q not in window.index:
                lost += 1
                continue
            entries[q, p] = entries.get((q, p), 0) + coeff
    return WindowMatrix(window, entries, lost)


def safe_core(window: Window, k: int) -> Window:
    """Sub-window of points at distance <= R - k from the basepoint."""
    if k > window.radius:
        raise ValueError(f"propagation {k} exceeds window radius {window.radius}")
    if k < 0:
        raise ValueError("propagation must be non-negative")
    norm = window.space.norm
    keep = tuple(p for p in window.points if norm(p) <= window.radius - k)
    return Window(window.space, window.radius - k, keep)


def check_relation(
    lhs: OperatorExpr,
    rhs: OperatorExpr,
    window: Window,
    env: Environment,
    mode: str = "product",
    margin: int | None = None,
) -> Fraction:
    """Largest entry of lhs - rhs over columns in the safe core; 0 means the relation holds."""
    if margin is None:
        margin = max(env.propagation(lhs), env.propagation(rhs))
    core = safe_core(window, margin)
    diff = truncate(lhs, window, env, mode) - truncate(rhs, window, env, mode)
    return diff.restrict_columns(core.points).max_abs()


def rank(m: WindowMatrix) -> int:
    rows: dict = {}
    for (r, c), v in m.entries.items():
        rows.setdefault(r, {})[c] = v
    return linalg.rank(rows.values())


@dataclass
class RankProfile:
    ranks: list  # of (radius, rank)
    stable_run: int = 3

    @property
    def stabilized(self) -> bool:
        vals = [r for _, r in self.ranks]
        m = self.stable_run
        return len(vals) >= m and len(set(vals[-m:])) == 1

    def to_json(self) -> dict:
        return {"ranks": [list(x) for x in self.ranks], "stabilized": self.stabilized}


def rank_profile(
    expr: OperatorExpr,
    env: Environment,
    radii: Sequence[int],
    stable_run: int = 3,
    mode: str = "pointwise",
) -> RankProfile:
    """Rank of the truncation at each radius, columns limited to the safe core.

    A stable tail is evidence of finite rank, nothing more.
    """
    if list(radii) != sorted(radii):
        raise ValueError("radii must be increasing")
    k = env.propagation(expr)
    out = []
    for R in radii:
        w = build_window(env.space, R)
        core = safe_core(w, min(k, R))
        out.append((R, rank(truncate(expr, w, env, mode).restrict_columns(core.points))))
    return RankProfile(out, stable_run)


def independence_gram(words: Sequence, window: Window, env: Environment) -> bool:
    """Exact linear independence of the truncated operators, columns on the safe core."""
    exprs = [w if isinstance(w, OperatorExpr) else OperatorExpr({tuple(w): 1}) for w in words]
    k = max((env.propagation(e) for e in exprs), default=0)
    core = safe_core(window, k)
    vecs = [truncate(e, window, env).restrict_columns(core.points).entries for e in exprs]
    return linalg.rank(vecs) == len(vecs)


def annihilated_below(word: OpWord, window: Window, env: Environment, length: int) -> bool:
    """Whether the word kills every basis vector at distance < length from the basepoint."""
    norm = window.space.norm
    return all(_run_word(word, p, env, None) is None for p in window.points if norm(p) < length)
