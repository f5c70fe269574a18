"""Rewriting of operator words by the isometry relations.

For isometries with orthogonal ranges, ``x* x -> 1`` and ``x* y -> 0`` when
x != y.  Rewriting is leftmost-first and every step shortens the word, so it
terminates; what the test-suite checks is soundness against the
representation, not confluence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .expr import GenSymbol, OperatorExpr, OpWord


@dataclass(frozen=True)
class QuasiReducedForm:
    """Sum of terms ``coeff * w(a,b) w'(a*,b*)``; no terms means Zero."""

    terms: tuple = field(default=())  # ((positive word, starred word, coeff), ...)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def to_expr(self) -> OperatorExpr:
        return OperatorExpr([(w + ws, c) for w, ws, c in self.terms])

    def __str__(self):
        return str(self.to_expr())


def word_type(word: OpWord) -> int:
    """Length of the starred tail of a quasi-reduced word."""
    n = 0
    for s in reversed(word):
        if not s.starred:
            break
        n += 1
    return n


def is_quasi_reduced(word: OpWord) -> bool:
    return all(not (x.starred and not y.starred) for x, y in zip(word, word[1:]))


def _reduce_word(word: OpWord, alphabet) -> OpWord | None:
    w = list(word)
    for s in w:
        if alphabet is not None and s.base not in alphabet:
            raise ValueError(f"symbol {s} is outside the alphabet {sorted(alphabet)}")
    i = 0
    while i < len(w) - 1:
        x, y = w[i], w[i + 1]
        if x.starred and not y.starred:
            if x.base != y.base:
                return None
            del w[i : i + 2]
            i = max(i - 1, 0)
        else:
            i += 1
    return tuple(w)


def quasi_reduce(word, alphabet=None) -> QuasiReducedForm:
    """Normal form of a word (or expression) under the relations x*x = 1, x*y = 0."""
    if isinstance(word, OperatorExpr):
        acc: dict = {}
        for w, c in word.terms.items():
            r = _reduce_word(w, alphabet)
            if r is not None:
                acc[r] = acc.get(r, 0) + c
        items = [(w, c) for w, c in acc.items() if c]
    else:
        r = _reduce_word(tuple(word), alphabet)
        items = [] if r is None else [(r, Fraction(1))]
    terms = []
    for w, c in items:
        k = len(w) - word_type(w)
        terms.append((w[:k], w[k:], Fraction(c)))
    return QuasiReducedForm(tuple(terms))


def nat_reduce(word: OpWord) -> tuple[int, int]:
    """Cancel every tau* tau pair; returns (i, j) with the word equal to tau^i (tau*)^j."""
    bases = {s.base for s in word}
    if len(bases) > 1:
        raise ValueError(f"expected a word in one generator, got {sorted(bases)}")
    stack: list[GenSymbol] = []
    for s in word:
        # leftmost cancellation: a starred symbol followed by an unstarred one
        if not s.starred and stack and stack[-1].starred:
            stack.pop()
        else:
            stack.append(s)
    i = sum(1 for s in stack if not s.starred)
    return i, len(stack) - i


def quasi_reduced_words(gens: list[str], max_size: int) -> list[OpWord]:
    """All w(gens) w'(gens*) with |w| + |w'| <= max_size."""
    out = []
    for total in range(max_size + 1):
        for k in range(total + 1):
            for pos in itertools.product(gens, repeat=k):
                for neg in itertools.product(gens, repeat=total - k):
                    out.append(tuple(GenSymbol(g) for g in pos) + tuple(GenSymbol(g, True) for g in neg))
    return out
