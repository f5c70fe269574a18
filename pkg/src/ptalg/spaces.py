"""Discrete metric spaces (subspaces of Z and of free groups) and finite windows of them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from .freegroup import IDENTITY, Word, in_augmented_tree


Point = Union[int, Word]


class SpaceError(TypeError):
    """A point of the wrong kind was offered to a space."""


class NotInSpaceError(ValueError):
    pass


class Space:
    """Base class; concrete spaces are frozen dataclasses."""

    kind: str = "space"
    is_group_space = False

    @property
    def basepoint(self) -> Point:
        return IDENTITY if self.is_group_space else 0

    def check_kind(self, p) -> None:
        if self.is_group_space:
            if not isinstance(p, Word):
                raise SpaceError(f"{self} holds words, got {p!r}")
            if p.letters and max(abs(x) for x in p.letters) > self.rank:
                raise SpaceError(f"{p} uses generators outside rank {self.rank}")
        elif isinstance(p, bool) or not isinstance(p, int):
            raise SpaceError(f"{self} holds integers, got {p!r}")

    def contains(self, p: Point) -> bool:
        self.check_kind(p)
        return self._contains(p)

    def __contains__(self, p) -> bool:
        try:
            return self.contains(p)
        except SpaceError:
            return False

    def metric(self, p: Point, q: Point) -> int:
        for x in (p, q):
            if not self.contains(x):
                raise NotInSpaceError(f"{x} is not in {self}")
        if self.is_group_space:
            return len(p.inverse() * q)
        return abs(p - q)

    def norm(self, p: Point) -> int:
        """Distance from the basepoint (the basepoint itself need not lie in the space)."""
        return len(p) if self.is_group_space else abs(p)

    def window(self, radius: int) -> "Window":
        return build_window(self, radius)

    def point_key(self, p: Point):
        return p.sort_key() if self.is_group_space else p

    def point_str(self, p: Point) -> str:
        return str(p)

    def parse_point(self, text: str) -> Point:
        return Word.parse(text) if self.is_group_space else int(text)


@dataclass(frozen=True)
class IntegerLine(Space):
    kind = "integers"

    def _contains(self, p):
        return True

    def _enumerate(self, R):
        return list(range(-R, R + 1))

    def __str__(self):
        return "Z"


@dataclass(frozen=True)
class Naturals(Space):
    """{0, 1, 2, ...}; zero is included."""

    kind = "naturals"

    def _contains(self, p):
        return p >= 0

    def _enumerate(self, R):
        return list(range(0, R + 1))

    def __str__(self):
        return "N"


@dataclass(frozen=True)
class PuncturedIntegers(Space):
    kind = "punctured"

    def _contains(self, p):
        return p != 0

    def _enumerate(self, R):
        return [j for j in range(-R, R + 1) if j != 0]

    def __str__(self):
        return "Z\\{0}"


@dataclass(frozen=True)
class GappedSet(Space):
    """A coarsely disconnected subset of Z, stored as a sorted list up to a bound.

    ``rule`` names the generator so that membership beyond the stored bound can
    still be decided ("squares"); with ``rule=None`` only the stored points count.
    """

    points: tuple[int, ...]
    rule: str | None = None
    kind = "gapped"

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("gapped set points must be strictly increasing")

    @classmethod
    def squares(cls, bound: int) -> "GappedSet":
        return cls(tuple(i * i for i in range(math.isqrt(bound) + 1)), "squares")

    @cached_property
    def _members(self):
        return frozenset(self.points)

    def _contains(self, p):
        if self.rule == "squares":
            return p >= 0 and math.isqrt(p) ** 2 == p
        return p in self._members

    def _enumerate(self, R):
        if self.rule == "squares":
            return [i * i for i in range(math.isqrt(R) + 1)]
        return [p for p in self.points if abs(p) <= R]

    def __str__(self):
        return self.rule or f"gapped[{len(self.points)}]"


def _sieve(n: int) -> bytearray:
    flags = bytearray([1]) * (n + 1)
    flags[: min(2, n + 1)] = b"\x00" * min(2, n + 1)
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, n + 1, i)))
    return flags


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    flags = _sieve(n)
    return [i for i in range(2, n + 1) if flags[i]]


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Primes(Space):
    """The primes; a window of radius N holds the primes <= N."""

    kind = "primes"

    def _contains(self, p):
        return is_prime(p)

    def _enumerate(self, R):
        return primes_up_to(R)

    def __str__(self):
        return "primes"


@dataclass(frozen=True)
class _TreeSpace(Space):
    rank: int = 2
    is_group_space = True

    def __post_init__(self):
        if not 1 <= self.rank <= 25:
            raise ValueError("rank must be between 1 and 25")

    def _enumerate(self, R):
        # all three tree spaces are prefix closed, so grow a BFS by appending letters
        gens = [g + 1 for g in range(self.rank)]
        letters = sorted(gens + [-g for g in gens], key=lambda x: 2 * (abs(x) - 1) + (x < 0))
        out = [IDENTITY]
        layer = [IDENTITY]
        for _ in range(R):
            nxt = []
            for w in layer:
                for x in letters:
                    if w.letters and w.letters[-1] == -x:
                        continue
                    v = Word(w.letters + (x,))
                    if self._contains(v):
                        nxt.append(v)
            out.extend(nxt)
            layer = nxt
        return out

    def point_str(self, p):
        return str(p)


@dataclass(frozen=True)
class FreeGroup(_TreeSpace):
    kind = "free"

    def _contains(self, p):
        return True

    def __str__(self):
        return f"F{self.rank}"


@dataclass(frozen=True)
class PositiveCone(_TreeSpace):
    """The identity together with every positive word."""

    kind = "positive"

    def _contains(self, p):
        return p.is_positive

    def __str__(self):
        return f"X{self.rank}"


@dataclass(frozen=True)
class AugmentedTree(_TreeSpace):
    """Reduced words a^m w with w positive; the regular (rank+1)-valent tree."""

    kind = "augmented"

    def _contains(self, p):
        if self.rank == 2:
            return in_augmented_tree(p)
        seen_other = False
        for c in p.letters:
            if c == -1:
                if seen_other:
                    return False
            elif c > 0:
                seen_other = seen_other or c != 1
            else:
                return False
        return True

    def __str__(self):
        return f"Y{self.rank}"


SpaceDescriptor = Space

SPACE_NAMES = {
    "integers": IntegerLine,
    "naturals": Naturals,
    "punctured": PuncturedIntegers,
    "primes": Primes,
    "free": FreeGroup,
    "positive": PositiveCone,
    "augmented": AugmentedTree,
}


def space_from_name(name: str, rank: int = 2, bound: int | None = None) -> Space:
    if name == "squares":
        return GappedSet.squares(bound if bound is not None else 10_000)
    cls = SPACE_NAMES.get(name)
    if cls is None:
        raise ValueError(f"unknown space {name!r}; choose from {sorted(SPACE_NAMES) + ['squares']}")
    return cls(rank) if issubclass(cls, _TreeSpace) else cls()


@dataclass(frozen=True)
class Window:
    """All points of ``space`` within ``radius`` of the basepoint, canonically ordered."""

    space: Space
    radius: int
    points: tuple = field(repr=False)

    @cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self.index

    def to_json(self) -> dict:
        return {
            "space": str(self.space),
            "radius": self.radius,
            "points": [self.space.point_str(p) for p in self.points],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def contains(space: Space, p: Point) -> bool:
    return space.contains(p)


def metric(space: Space, p: Point, q: Point) -> int:
    return space.metric(p, q)


def build_window(space: Space, radius: int) -> Window:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    pts = sorted(space._enumerate(radius), key=space.point_key)
    return Window(space, radius, tuple(pts))
