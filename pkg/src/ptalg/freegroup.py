"""Reduced-word arithmetic in free groups and the turn normal form for G = <alpha> x| F_2.

Letters are stored as signed integers: generator ``g`` (0-based) is ``g + 1``
and its inverse is ``-(g + 1)``.  String forms use lowercase letters for
generators and uppercase for inverses (``"Ab"`` is a^-1 b); the identity is
``"e"``, which is why ``e`` is skipped in the generator alphabet.

For rank two, ``a`` points East, ``b`` North, ``a^-1`` West and ``b^-1``
South.  The automorphism ``alpha`` (a -> b, b -> a^-1) rotates every heading a
quarter turn anticlockwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

ALPHABET = "abcdfghijklmnopqrstuvwxyz"


class WordError(ValueError):
    pass


class NotInTreeError(ValueError):
    """Raised when a word is offered to a map defined only on the augmented tree."""


def _letter_str(letter: int) -> str:
    ch = ALPHABET[abs(letter) - 1]
    return ch if letter > 0 else ch.upper()


def _free_reduce(letters: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True, order=False)
class Word:
    """A freely reduced word; immutable and hashable."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for i, x in enumerate(self.letters):
            if x == 0 or abs(x) > len(ALPHABET):
                raise WordError(f"bad letter code {x}")
            if i and self.letters[i - 1] == -x:
                raise WordError(f"word {self.letters} is not reduced")

    @classmethod
    def reduce(cls, letters: Sequence[int]) -> "Word":
        return cls(_free_reduce(letters))

    @classmethod
    def gen(cls, g: int, power: int = 1) -> "Word":
        x = g + 1 if power > 0 else -(g + 1)
        return cls((x,) * abs(power))

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.strip()
        if text in ("", "e", "1"):
            return cls()
        letters = []
        for ch in text:
            if ch.isspace():
                continue
            idx = ALPHABET.find(ch.lower())
            if idx < 0:
                raise WordError(f"unknown generator {ch!r} in {text!r}")
            letters.append(idx + 1 if ch.islower() else -(idx + 1))
        return cls.reduce(letters)

    def __str__(self) -> str:
        return "".join(map(_letter_str, self.letters)) or "e"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        a, b = self.letters, other.letters
        k = 0
        while k < len(a) and k < len(b) and a[len(a) - 1 - k] == -b[k]:
            k += 1
        return Word(a[: len(a) - k] + b[k:])

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        out = Word()
        for _ in range(abs(n)):
            out = out * base
        return out

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for x in self.letters)

    def sort_key(self) -> tuple:
        """Length-lexicographic key with a < A < b < B < ..."""
        return (len(self.letters), tuple(2 * (abs(x) - 1) + (x < 0) for x in self.letters))


IDENTITY = Word()
A, B = Word.gen(0), Word.gen(1)


def multiply(u: Word, v: Word) -> Word:
    return u * v


def invert(u: Word) -> Word:
    return u.inverse()


def word_length(u: Word) -> int:
    return len(u)


def reduced_words(rank: int, max_length: int) -> Iterator[Word]:
    """All reduced words of length <= max_length, in length-lex order."""
    letters = sorted(
        [g + 1 for g in range(rank)] + [-(g + 1) for g in range(rank)],
        key=lambda x: 2 * (abs(x) - 1) + (x < 0),
    )
    layer = [()]
    yield Word()
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        for w in nxt:
            yield Word(w)
        layer = nxt


# --- the rank-2 group G = H x| F_2 ---------------------------------------------

# heading direction of each F_2 letter: a East, b North, a^-1 West, b^-1 South
_DIRECTION = {1: 0, 2: 1, -1: 2, -2: 3}
_LETTER_OF = {v: k for k, v in _DIRECTION.items()}


def _rotate(w: Word, r: int) -> Word:
    """Image of w under alpha^r."""
    r %= 4
    if r == 0:
        return w
    return Word(tuple(_LETTER_OF[(_DIRECTION[x] + r) % 4] for x in w.letters))


def _canon_terminal(t: int) -> int:
    return (0, 1, 2, -1)[t % 4]


def _canon_turn(t: int) -> int:
    t %= 4
    if t == 2:
        raise WordError("a turn of alpha^2 is not allowed before the last letter")
    return (0, 1, None, -1)[t]


@dataclass(frozen=True)
class GElement:
    """Element ``word * alpha^rot`` of G; every element has exactly one such form."""

    word: Word = IDENTITY
    rot: int = 0

    def __post_init__(self):
        if self.word.letters and max(abs(x) for x in self.word.letters) > 2:
            raise WordError("G is built over F_2 only")
        object.__setattr__(self, "rot", self.rot % 4)

    def __mul__(self, other: "GElement") -> "GElement":
        return GElement(self.word * _rotate(other.word, self.rot), self.rot + other.rot)

    def inverse(self) -> "GElement":
        return GElement(_rotate(self.word.inverse(), -self.rot), -self.rot)

    @property
    def in_free_group(self) -> bool:
        return self.rot == 0


ALPHA = GElement(IDENTITY, 1)


def as_element(x) -> GElement:
    if isinstance(x, GElement):
        return x
    if isinstance(x, Word):
        return GElement(x, 0)
    if isinstance(x, str):
        return {"alpha": ALPHA, "alpha^-1": GElement(IDENTITY, 3)}.get(x) or GElement(Word.parse(x))
    raise TypeError(f"cannot interpret {x!r} as an element of G")


@dataclass(frozen=True)
class GNormalForm:
    """``a^-n alpha^{i_0} a alpha^{i_1} a ... a alpha^{i_d}`` with turns i_0..i_{d-1}.

    ``turns`` has length d and entries in {-1, 0, 1}; ``terminal`` is i_d,
    canonicalised to {-1, 0, 1, 2}.  When d > 0 and n > 0 the first turn must
    be nonzero (otherwise a^-1 a would cancel).
    """

    n: int = 0
    turns: tuple[int, ...] = ()
    terminal: int = 0

    def __post_init__(self):
        object.__setattr__(self, "turns", tuple(self.turns))
        if self.n < 0:
            raise WordError("n must be non-negative")
        if any(t not in (-1, 0, 1) for t in self.turns):
            raise WordError(f"turns must lie in {{-1,0,1}}: {self.turns}")
        if self.terminal not in (-1, 0, 1, 2):
            raise WordError(f"terminal exponent must lie in {{-1,0,1,2}}: {self.terminal}")
        if self.n > 0 and self.turns and self.turns[0] == 0:
            raise WordError("first turn must be nonzero after a backwards run")

    @property
    def d(self) -> int:
        return len(self.turns)

    @property
    def exponent_sum(self) -> int:
        return (sum(self.turns) + self.terminal) % 4

    @property
    def in_free_group(self) -> bool:
        return self.exponent_sum == 0

    def to_json(self) -> dict:
        return {"n": self.n, "turns": list(self.turns), "terminal": self.terminal}

    @classmethod
    def from_json(cls, data: dict) -> "GNormalForm":
        return cls(data["n"], tuple(data["turns"]), data["terminal"])

    def __str__(self) -> str:
        parts = [f"a^-{self.n}"] if self.n else []
        for t in self.turns:
            parts.append(f"α^{t}a")
        parts.append(f"α^{self.terminal}")
        return "".join(parts)


def to_normal_form(x: Word) -> GNormalForm:
    """Transcribe a reduced word of F_2 as a sequence of turns."""
    letters = x.letters
    if letters and max(abs(c) for c in letters) > 2:
        raise WordError("normal form is defined on F_2 only")
    n = 0
    while n < len(letters) and letters[n] == -1:
        n += 1
    dirs = [_DIRECTION[c] for c in letters[n:]]
    if not dirs:
        return GNormalForm(n, (), 0)
    turns = [_canon_turn(dirs[0])]
    turns += [_canon_turn(k1 - k0) for k0, k1 in zip(dirs, dirs[1:])]
    return GNormalForm(n, tuple(turns), _canon_terminal(-dirs[-1]))


def element_normal_form(g: GElement) -> GNormalForm:
    nf = to_normal_form(g.word)
    return GNormalForm(nf.n, nf.turns, _canon_terminal(nf.terminal + g.rot))


def to_element(g: GNormalForm) -> GElement:
    """Evaluate the normal form inside G."""
    letters = [-1] * g.n
    heading = 0
    for t in g.turns:
        heading += t
        letters.append(_LETTER_OF[heading % 4])
    return GElement(Word.reduce(letters), heading + g.terminal)


def from_normal_form(g: GNormalForm) -> Word | GElement:
    """The F_2 word when the exponent sum vanishes mod 4, else the G element."""
    el = to_element(g)
    return el.word if el.in_free_group else el


def heading(x: GNormalForm | Word) -> int:
    if isinstance(x, Word):
        x = to_normal_form(x)
    return (-x.terminal) % 4


def right_multiply_G(g: GNormalForm, s: str) -> GNormalForm:
    """Renormalise g*s for s in {a, b, A, B, alpha, alpha^-1} by the turn rules."""
    n, turns, t = g.n, g.turns, g.terminal
    if s == "alpha":
        return GNormalForm(n, turns, _canon_terminal(t + 1))
    if s == "alpha^-1":
        return GNormalForm(n, turns, _canon_terminal(t - 1))
    if s == "A":  # a^-1 = alpha^2 a alpha^-2
        g = right_multiply_G(right_multiply_G(g, "alpha"), "alpha")
        g = right_multiply_G(g, "a")
        return right_multiply_G(right_multiply_G(g, "alpha^-1"), "alpha^-1")
    if s == "B":  # b^-1 = alpha^-1 a alpha
        return right_multiply_G(right_multiply_G(right_multiply_G(g, "alpha^-1"), "a"), "alpha")
    if s == "a":
        step, after = t, 0
    elif s == "b":
        step, after = t + 1, -1
    else:
        raise WordError(f"unknown generator {s!r}")
    step %= 4
    if step == 2:
        # ... alpha^2 a = ... a^-1 alpha^2
        if turns:
            return GNormalForm(n, turns[:-1], _canon_terminal(turns[-1] + 2 + after))
        return GNormalForm(n + 1, (), _canon_terminal(2 + after))
    if step == 0 and n > 0 and not turns:
        return GNormalForm(n - 1, (), _canon_terminal(after))
    return GNormalForm(n, turns + (_canon_turn(step),), _canon_terminal(after))


# --- embedding into the augmented 3-regular tree ------------------------------

U_WORDS = {0: Word.parse("a"), 1: Word.parse("bb"), -1: Word.parse("ab")}
V_WORDS = {0: Word.parse("aa"), 1: Word.parse("bb"), 2: Word.parse("ab"), 3: Word.parse("ba")}


def code_words() -> dict:
    return {"u": dict(U_WORDS), "v": dict(V_WORDS)}


def v_word(i: int) -> Word:
    return V_WORDS[i % 4]


def Phi(g: GNormalForm) -> Word:
    letters = [-1] * g.n
    for t in g.turns:
        letters.extend(U_WORDS[t].letters)
    letters.extend(v_word(heading(g)).letters)
    return Word.reduce(letters)


def phi0(x: Word) -> Word:
    return Phi(to_normal_form(x))


def in_augmented_tree(y: Word) -> bool:
    seen_other = False
    for c in y.letters:
        if c == -1:
            if seen_other:
                return False
        elif c == 2 or c == 1:
            seen_other = True
        else:
            return False
    return True


def _decode_positive(s: tuple[int, ...]):
    """Split a positive a,b-string into u-code turns and a v-code heading, reading from the right."""
    if len(s) < 2:
        return None
    v = {V_WORDS[i].letters: i for i in range(4)}[s[-2:]]
    turns: list[int] = []
    rest = list(s[:-2])
    while rest:
        if rest[-1] == 1:
            turns.append(0)
            rest.pop()
        elif len(rest) >= 2 and rest[-2] == 2:
            turns.append(1)
            del rest[-2:]
        elif len(rest) >= 2 and rest[-2] == 1:
            turns.append(-1)
            del rest[-2:]
        else:
            return None
    turns.reverse()
    return tuple(turns), _canon_terminal(-v)


def Phi_inverse(y: Word) -> GNormalForm:
    """Read the normal form off a point of the augmented tree, right to left."""
    if not in_augmented_tree(y):
        raise NotInTreeError(f"{y} is not in the augmented tree")
    n0 = 0
    while n0 < len(y.letters) and y.letters[n0] == -1:
        n0 += 1
    positive = y.letters[n0:]
    found = []
    # the a^-n prefix can absorb at most two leading a's of the code string
    for extra in range(3):
        s = (1,) * extra + positive
        decoded = _decode_positive(s)
        if decoded is None:
            continue
        turns, terminal = decoded
        try:
            g = GNormalForm(n0 + extra, turns, terminal)
        except WordError:
            continue
        if Phi(g) == y:
            found.append(g)
    if len(found) != 1:
        raise NotInTreeError(f"{y} has {len(found)} preimages under Phi")
    return found[0]


def orbit_label(y: Word) -> int:
    return Phi_inverse(y).exponent_sum


def normal_forms(max_size: int) -> Iterator[GNormalForm]:
    """Every normal form of G with n + d <= max_size."""
    for n in range(max_size + 1):
        for d in range(max_size - n + 1):
            for turns in itertools.product((-1, 0, 1), repeat=d):
                if n > 0 and d > 0 and turns[0] == 0:
                    continue
                for t in (-1, 0, 1, 2):
                    yield GNormalForm(n, turns, t)
