"""Formal *-polynomials over generator symbols, with a small parser.

Operator words are written the way operators compose: the rightmost symbol
acts first.  ``a^*`` (or ``a*``) is the adjoint, induced by the inverse
partial translation.

Grammar::

    expr    := ['-'] term (('+' | '-') term)*
    term    := [number ['/' number]] factor*
    factor  := atom ('^*' | '*' | '^' int | '^{' int '}' | '^{*}')*
    atom    := symbol | '(' expr ')'
    symbol  := letter ['_' (alnum | '{' ... '}')]

A lone number is that multiple of the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from ..freegroup import ALPHABET, Word
from ..spaces import Naturals, PositiveCone, Space
from ..translations import FiniteMap, IdentityOn, PartialTranslation, RightMult, Shift


class ParseError(ValueError):
    pass


class GenSymbol(NamedTuple):
    base: str
    starred: bool = False

    def star(self) -> "GenSymbol":
        return GenSymbol(self.base, not self.starred)

    def __str__(self):
        return self.base + ("*" if self.starred else "")


OpWord = tuple  # tuple[GenSymbol, ...]


def word_str(word: OpWord) -> str:
    return " ".join(map(str, word)) if word else "1"


def adjoint_word(word: OpWord) -> OpWord:
    return tuple(s.star() for s in reversed(word))


class OperatorExpr:
    """Finite rational combination of operator words; immutable by convention."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[OpWord, Fraction] | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            c = Fraction(c)
            if c:
                w = tuple(w)
                acc[w] = acc.get(w, 0) + c
                if not acc[w]:
                    del acc[w]
        self.terms = acc

    @classmethod
    def identity(cls) -> "OperatorExpr":
        return cls({(): 1})

    @classmethod
    def word(cls, *symbols, coeff=1) -> "OperatorExpr":
        syms = []
        for s in symbols:
            if isinstance(s, str):
                s = GenSymbol(s[:-1], True) if s.endswith("*") else GenSymbol(s)
            syms.append(s)
        return cls({tuple(syms): coeff})

    @classmethod
    def parse(cls, text: str) -> "OperatorExpr":
        return _Parser(text).parse()

    def __add__(self, other):
        other = _coerce(other)
        return OperatorExpr(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return OperatorExpr({w: c * other for w, c in self.terms.items()})
        other = _coerce(other)
        out = []
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out.append((w1 + w2, c1 * c2))
        return OperatorExpr(out)

    def __rmul__(self, other):
        return _coerce(other) * self

    def __pow__(self, k: int):
        out = OperatorExpr.identity()
        for _ in range(k):
            out = out * self
        return out

    def star(self) -> "OperatorExpr":
        return OperatorExpr({adjoint_word(w): c for w, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, OperatorExpr) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def symbols(self) -> set:
        return {s.base for w in self.terms for s in w}

    def max_word_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.terms.items():
            body = word_tex(w)
            if c == 1:
                parts.append(body or "1")
            elif c == -1:
                parts.append("-" + (body or "1"))
            else:
                parts.append(f"{c}{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def word_tex(word: OpWord) -> str:
    """Compact text of a word: ``aba^*`` for single letters, spaced otherwise."""
    toks = [s.base + ("^*" if s.starred else "") for s in word]
    sep = "" if all(len(s.base) == 1 for s in word) else " "
    return sep.join(toks)


def word_operator(w: Word, names: Sequence[str] | None = None) -> OpWord:
    """Operator word realising right multiplication by the group word ``w``.

    Right multiplication by x_1 x_2 ... x_k applies x_1 first, so the operator
    word is written in the reverse order; inverse letters become adjoints.
    This is the only place where that reversal happens.
    """
    names = names or ALPHABET
    return tuple(GenSymbol(names[abs(x) - 1], x < 0) for x in reversed(w.letters))


def _coerce(x) -> OperatorExpr:
    if isinstance(x, OperatorExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return OperatorExpr({(): x})
    raise TypeError(f"cannot use {x!r} as an operator expression")


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<sym>[A-Za-z](?:_(?:\{[^}]*\}|[A-Za-z0-9]))?)"
    r"|(?P<op>\^\{\*\}|\^\*|\^\{-?\d+\}|\^-?\d+|[()+\-*/]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected input at {text[pos:]!r}")
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> OperatorExpr:
        e = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return e

    def expr(self) -> OperatorExpr:
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        out = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> OperatorExpr:
        coeff = Fraction(1)
        saw_number = False
        if self.peek()[0] == "num":
            coeff = Fraction(int(self.take()[1]))
            saw_number = True
            if self.peek() == ("op", "/"):
                self.take()
                kind, val = self.take()
                if kind != "num":
                    raise ParseError("expected denominator")
                coeff /= int(val)
        out = OperatorExpr.identity() * coeff
        nfactors = 0
        while self.peek()[0] == "sym" or self.peek() == ("op", "("):
            out = out * self.factor()
            nfactors += 1
        if not nfactors and not saw_number:
            raise ParseError(f"expected a term in {self.text!r}")
        return out

    def factor(self) -> OperatorExpr:
        kind, val = self.take()
        if kind == "sym":
            base = val.replace("{", "").replace("}", "")
            atom = OperatorExpr.word(GenSymbol(base))
        else:
            atom = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("missing ')'")
        while True:
            kind, val = self.peek()
            if kind != "op":
                break
            if val in ("^*", "^{*}", "*"):
                # '*' directly after a factor is the adjoint, as in a*b
                self.take()
                atom = atom.star()
            elif val.startswith("^"):
                self.take()
                k = int(val.strip("^{}"))
                if k < 0:
                    raise ParseError("negative powers are not operators; use ^*")
                atom = atom**k
            else:
                break
        return atom


# --- environments -----------------------------------------------------------------


@dataclass
class Environment:
    """Binds symbol names to partial translations on one space."""

    space: Space
    bindings: dict
    resolver: Callable[[str], PartialTranslation | None] | None = None

    def translation(self, sym: GenSymbol | str) -> PartialTranslation:
        if isinstance(sym, str):
            sym = GenSymbol(sym)
        t = self.bindings.get(sym.base)
        if t is None and self.resolver is not None:
            t = self.resolver(sym.base)
            if t is not None:
                self.bindings[sym.base] = t
        if t is None:
            raise KeyError(f"symbol {sym.base!r} is not bound on {self.space}")
        if t.space != self.space:
            raise ValueError(f"{sym.base} acts on {t.space}, not {self.space}")
        return t.inverse() if sym.starred else t

    def bind(self, name: str, t: PartialTranslation) -> "Environment":
        return Environment(self.space, {**self.bindings, name: t}, self.resolver)

    def propagation(self, expr: OperatorExpr) -> int:
        """Static bound on how far any term can move a point, step by step."""
        return max(
            (sum(self.translation(s).displacement for s in w) for w in expr.terms),
            default=0,
        )


_SHIFT_NAME = re.compile(r"^[ts]_(-?\d+)$")
_PROJ_NAME = re.compile(r"^p_(-?\d+)$")


def integer_environment(space: Space) -> Environment:
    """``t_n``/``s_n`` are shifts by n on the subspace, ``p_k`` the projection onto k."""

    def resolve(name):
        m = _SHIFT_NAME.match(name)
        if m:
            return Shift(space, int(m.group(1)))
        m = _PROJ_NAME.match(name)
        if m:
            return FiniteMap(space, ((int(m.group(1)),) * 2,))
        return None

    return Environment(space, {}, resolve)


def tree_environment(space: Space) -> Environment:
    """Generator letters act by right multiplication; ``p_e`` projects onto the identity
    and ``P`` onto the positive cone."""
    binds = {ALPHABET[g]: RightMult(space, Word.gen(g)) for g in range(space.rank)}
    binds["p_e"] = FiniteMap(space, ((Word(), Word()),))
    binds["P"] = IdentityOn(space, PositiveCone(space.rank))
    return Environment(space, binds)


def naturals_environment() -> Environment:
    return integer_environment(Naturals())


def default_environment(space: Space) -> Environment:
    return tree_environment(space) if space.is_group_space else integer_environment(space)


def generators(rank: int) -> list[str]:
    return [ALPHABET[g] for g in range(rank)]
