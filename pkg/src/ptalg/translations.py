"""Partial translations: injective partial maps with bounded displacement.

``apply`` returns ``None`` off the domain; being undefined is a normal outcome,
not an error (the induced operator sends that basis vector to zero).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from .freegroup import Word
from .spaces import (
    FreeGroup,
    IntegerLine,
    NotInSpaceError,
    Point,
    PuncturedIntegers,
    Space,
    Window,
)


class OverlapError(ValueError):
    """Two summands of a piecewise translation are defined at the same point."""


class PartialTranslation:
    space: Space

    @property
    def displacement(self) -> int:
        raise NotImplementedError

    def apply(self, p: Point) -> Point | None:
        self.space.check_kind(p)
        if not self.space._contains(p):
            return None
        return self._apply(p)

    __call__ = apply

    def inverse(self) -> "PartialTranslation":
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return f"{self.text()}|{self.space}"


@dataclass(frozen=True)
class Shift(PartialTranslation):
    """Translation j -> j + n of Z, restricted and corestricted to ``space``."""

    space: Space
    n: int

    @property
    def displacement(self):
        return abs(self.n)

    def _apply(self, p):
        q = p + self.n
        return q if self.space._contains(q) else None

    def inverse(self):
        return Shift(self.space, -self.n)

    def text(self):
        return f"shift({self.n:+d})"


@dataclass(frozen=True)
class RightMult(PartialTranslation):
    """Right multiplication by a reduced word, restricted to ``space``."""

    space: Space
    word: Word

    @property
    def displacement(self):
        return len(self.word)

    def _apply(self, p):
        q = p * self.word
        return q if self.space._contains(q) else None

    def inverse(self):
        return RightMult(self.space, self.word.inverse())

    def text(self):
        return f"rmul({self.word})"


@dataclass(frozen=True)
class FiniteMap(PartialTranslation):
    space: Space
    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))
        src = [p for p, _ in self.pairs]
        dst = [q for _, q in self.pairs]
        if len(set(src)) != len(src) or len(set(dst)) != len(dst):
            raise ValueError("finite map must be injective")
        for x in src + dst:
            if not self.space.contains(x):
                raise NotInSpaceError(f"{x} is not in {self.space}")

    @cached_property
    def _table(self):
        return dict(self.pairs)

    @property
    def displacement(self):
        return max((self.space.metric(p, q) for p, q in self.pairs), default=0)

    def _apply(self, p):
        return self._table.get(p)

    def inverse(self):
        return FiniteMap(self.space, tuple((q, p) for p, q in self.pairs))

    def text(self):
        return "map{" + ",".join(f"{p}->{q}" for p, q in self.pairs) + "}"


@dataclass(frozen=True)
class IdentityOn(PartialTranslation):
    """Identity on a subspace; its operator is the projection onto that subspace."""

    space: Space
    subspace: Space

    @property
    def displacement(self):
        return 0

    def _apply(self, p):
        return p if self.subspace.contains(p) else None

    def inverse(self):
        return self

    def text(self):
        return f"id[{self.subspace}]"


@dataclass(frozen=True)
class Piecewise(PartialTranslation):
    """Union of partial translations with pairwise disjoint domains and ranges.

    At most one summand may be defined at any point; overlap raises
    :class:`OverlapError` when it is met.
    """

    space: Space
    pieces: tuple  # of (label, PartialTranslation)

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple((str(k), t) for k, t in self.pieces))

    @property
    def displacement(self):
        return max((t.displacement for _, t in self.pieces), default=0)

    def applicable(self, p) -> list[str]:
        return [label for label, t in self.pieces if t.apply(p) is not None]

    def _apply(self, p):
        hit = None
        for label, t in self.pieces:
            q = t.apply(p)
            if q is not None:
                if hit is not None:
                    raise OverlapError(f"summands {hit[0]!r} and {label!r} both defined at {p}")
                hit = (label, q)
        return None if hit is None else hit[1]

    def inverse(self):
        return Piecewise(self.space, tuple((f"{k}^-1", t.inverse()) for k, t in self.pieces))

    def check_unique(self, window: Window) -> None:
        """Eagerly verify injectivity and single applicability on a probe window."""
        seen = {}
        for p in window.points:
            labels = self.applicable(p)
            if len(labels) > 1:
                raise OverlapError(f"summands {labels} all defined at {p}")
            if labels:
                q = self.apply(p)
                if q in seen:
                    raise OverlapError(f"{seen[q]} and {p} both map to {q}")
                seen[q] = p

    def text(self):
        return "(" + " + ".join(t.text() for _, t in self.pieces) + ")"


@dataclass(frozen=True)
class Compose(PartialTranslation):
    """``factors[0] o factors[1] o ...``; the last factor is applied first."""

    space: Space
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if f.space != self.space:
                raise ValueError("composed translations must share their space")

    @property
    def displacement(self):
        return sum(f.displacement for f in self.factors)

    def _apply(self, p):
        for f in reversed(self.factors):
            p = f.apply(p)
            if p is None:
                return None
        return p

    def inverse(self):
        return Compose(self.space, tuple(f.inverse() for f in reversed(self.factors)))

    def text(self):
        return "∘".join(f.text() for f in self.factors) or "id"


def identity(space: Space) -> Shift | RightMult:
    return RightMult(space, Word()) if space.is_group_space else Shift(space, 0)


def apply(t: PartialTranslation, p: Point) -> Point | None:
    return t.apply(p)


def compose(outer: PartialTranslation, inner: PartialTranslation) -> Compose:
    parts = []
    for t in (outer, inner):
        parts.extend(t.factors if isinstance(t, Compose) else (t,))
    return Compose(outer.space, tuple(parts))


def invert(t: PartialTranslation) -> PartialTranslation:
    return t.inverse()


def restrict(t: PartialTranslation, sub: Space) -> PartialTranslation:
    """Restrict and corestrict a translation of the ambient group to ``sub``."""
    if isinstance(t, Shift):
        if not isinstance(t.space, IntegerLine) and t.space != sub:
            raise ValueError("restrict expects a translation of Z")
        return Shift(sub, t.n)
    if isinstance(t, RightMult):
        if not isinstance(t.space, FreeGroup) and t.space != sub:
            raise ValueError("restrict expects a translation of a free group")
        return RightMult(sub, t.word)
    raise TypeError(f"cannot restrict {t}")


# --- domain bookkeeping ---------------------------------------------------------


@dataclass
class DomainReport:
    radius: int
    domain: list
    image: list
    excluded: list = field(default_factory=list)  # (point, reason)

    def __post_init__(self):
        if len(self.domain) != len(self.image) or len(set(self.image)) != len(self.image):
            raise AssertionError("translation is not injective on this window")

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "domain": [str(p) for p in self.domain],
            "image": [str(q) for q in self.image],
            "excluded": [{"point": str(p), "reason": r} for p, r in self.excluded],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _failure_reason(t: PartialTranslation, p) -> str:
    if isinstance(t, Compose):
        for k, f in enumerate(reversed(t.factors)):
            q = f.apply(p)
            if q is None:
                return f"undefined at step {k + 1}: {f.text()}"
            p = q
    return "image outside subspace"


def domain_in_window(t: PartialTranslation, w: Window) -> DomainReport:
    """Exact domain of t inside w; a point counts only when its image also lies in w."""
    if t.space != w.space:
        raise ValueError(f"translation on {t.space} cannot act on a window of {w.space}")
    dom, img, excl = [], [], []
    for p in w.points:
        q = t.apply(p)
        if q is None:
            excl.append((p, _failure_reason(t, p)))
        elif q not in w.index:
            excl.append((p, "image outside window"))
        else:
            dom.append(p)
            img.append(q)
    return DomainReport(w.radius, dom, img, excl)


def is_subtranslation(s: PartialTranslation, t: PartialTranslation, w: Window) -> tuple[bool, set]:
    """Whether s is a restriction of t on w, and the points where only t is defined."""
    ok = True
    diff = set()
    for p in w.points:
        sp, tp = s.apply(p), t.apply(p)
        if sp is not None and sp != tp:
            ok = False
        if tp is not None and sp is None:
            diff.add(p)
    return ok, diff


# --- the punctured line ---------------------------------------------------------


def puncture_shift(n: int) -> Shift:
    return Shift(PuncturedIntegers(), n)


def build_puncture_fix() -> Piecewise:
    """Extend the shift by one on Z\\{0} to a bijection by sending -1 to 1."""
    X = PuncturedIntegers()
    return Piecewise(X, (("s_1", Shift(X, 1)), ("-1->1", FiniteMap(X, ((-1, 1),)))))


@dataclass(frozen=True)
class ConjugatingBijection:
    """phi: Z\\{0} -> Z closing the gap at zero."""

    def apply(self, j: int) -> int:
        if j == 0:
            raise NotInSpaceError("0 is not in Z\\{0}")
        return j if j > 0 else j + 1

    __call__ = apply

    def inverse_apply(self, k: int) -> int:
        return k if k > 0 else k - 1


def conjugating_bijection() -> ConjugatingBijection:
    return ConjugatingBijection()

