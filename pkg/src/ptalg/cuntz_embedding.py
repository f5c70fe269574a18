"""The unitaries t_a, t_b, t_alpha on the augmented tree Y and their identification
with the right action of G = <alpha> x| F_2 through Phi.

The formulas are data (``data/cuntz_terms.json``); this module only parses,
assembles and checks them.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .freegroup import (
    ALPHA,
    GElement,
    GNormalForm,
    U_WORDS,
    V_WORDS,
    Phi,
    Phi_inverse,
    Word,
    element_normal_form,
    normal_forms,
    orbit_label,
    reduced_words,
    right_multiply_G,
    to_element,
)
from .operators import OperatorExpr, tree_environment, word_type
from .reports import ExtensionReport
from .spaces import AugmentedTree, Window, build_window
from .translations import Compose, PartialTranslation, Piecewise

NAMES = ("t_a", "t_b", "t_alpha")
Y2 = AugmentedTree(2)
MIN_RADIUS = 5  # the longest table ending has length 4


@lru_cache(maxsize=None)
def load_terms() -> dict:
    text = resources.files("ptalg").joinpath("data/cuntz_terms.json").read_text()
    return json.loads(text)


def term_words(name: str) -> list:
    """Operator words of the named unitary, in the printed order."""
    expr = OperatorExpr.parse(load_terms()["formulas"][name])
    if any(c != 1 for c in expr.terms.values()):
        raise ValueError(f"{name} has a coefficient other than 1")
    return list(expr.terms)


def group_word(op_word) -> Word:
    """Group word whose right multiplication the operator word performs (leftmost symbol acts last)."""
    letters = []
    for s in reversed(op_word):
        g = "ab".index(s.base) + 1
        letters.append(-g if s.starred else g)
    return Word.reduce(letters)


@dataclass(frozen=True)
class PiecewiseIsometry:
    name: str
    terms: tuple  # operator words
    translation: Piecewise

    def __call__(self, y: Word) -> Word | None:
        return self.translation.apply(y)

    def inverse(self) -> PartialTranslation:
        return self.translation.inverse()

    @property
    def displacement(self) -> int:
        return self.translation.displacement


def _term_translation(word, env) -> Compose:
    # factors[0] is outermost, matching the written operator order
    return Compose(Y2, tuple(env.translation(s) for s in word))


def build(name: str, probe_radius: int = MIN_RADIUS) -> PiecewiseIsometry:
    """Assemble the named unitary and check that one term applies at each probe point."""
    if name not in NAMES:
        raise ValueError(f"unknown unitary {name!r}; choose from {NAMES}")
    env = tree_environment(Y2)
    words = term_words(name)
    pieces = tuple((word_str_compact(w), _term_translation(w, env)) for w in words)
    pw = Piecewise(Y2, pieces)
    probe = build_window(Y2, probe_radius)
    pw.check_unique(probe)
    gaps = [y for y in probe.points if not pw.applicable(y)]
    if gaps:
        raise ValueError(f"{name}: no term applies at {gaps[0]}")
    return PiecewiseIsometry(name, tuple(words), pw)


def word_str_compact(word) -> str:
    return "".join(s.base + ("*" if s.starred else "") for s in word)


@lru_cache(maxsize=None)
def unitaries() -> dict:
    return {n: build(n) for n in NAMES}


# right action by a generator of G, as a point map on Y
@lru_cache(maxsize=None)
def generator_map(s: str):
    u = unitaries()
    table = {"a": u["t_a"].translation, "b": u["t_b"].translation, "alpha": u["t_alpha"].translation}
    if s in table:
        return table[s]
    if s in ("A", "B", "alpha^-1"):
        return table[{"A": "a", "B": "b", "alpha^-1": "alpha"}[s]].inverse()
    raise ValueError(f"unknown generator {s!r}")


@lru_cache(maxsize=1 << 16)
def _step(y: Word, s: str) -> Word | None:
    return generator_map(s).apply(y)


def act(y: Word, letters) -> Word | None:
    """Right action of a sequence of G generators, first letter first."""
    for s in letters:
        y = _step(y, s)
        if y is None:
            return None
    return y


def element_letters(g: GElement) -> list[str]:
    out = ["a" if x == 1 else "A" if x == -1 else "b" if x == 2 else "B" for x in g.word.letters]
    r = g.rot % 4
    return out + (["alpha"] * r if r <= 2 else ["alpha^-1"])


def right_action_via_phi(y: Word, g: GElement) -> Word:
    """Phi(Phi^-1(y) g), computed in G itself rather than by the turn rules."""
    return Phi(element_normal_form(to_element(Phi_inverse(y)) * g))


def _decode_code(code: str) -> Word:
    letters = []
    for tok in code.split():
        table = U_WORDS if tok[0] == "u" else V_WORDS
        letters.extend(table[int(tok[1:])].letters)
    return Word.reduce(letters)


def _check_radius(R: int):
    if R < MIN_RADIUS:
        raise ValueError(f"radius {R} is below {MIN_RADIUS}, the longest table ending does not fit")


# --- verifiers ------------------------------------------------------------------------


def verify_tables(R: int = 6, report: ExtensionReport | None = None) -> ExtensionReport:
    _check_radius(R)
    rep = report or ExtensionReport("embedding-tables", {"radius": R}, 0)
    w = build_window(Y2, R)
    u = unitaries()
    for name in ("t_a", "t_b"):
        rows = load_terms()["tables"][name]
        pw = u[name]
        parsed = []
        transcription = []
        for i, row in enumerate(rows):
            word = OperatorExpr.parse(row["term"])
            (op_word,) = word.terms
            k = len(op_word) - word_type(op_word)
            ending = Word.parse(row["ending"])
            repl = Word.parse(row["replacement"])
            ok = (
                group_word(op_word[k:]).inverse() == ending
                and group_word(op_word[:k]) == repl
                and op_word == pw.terms[i]
                and _decode_code(row["ending_code"]) == ending
                and _decode_code(row["replacement_code"]) == repl
            )
            transcription.append({"row": i + 1, "ending": row["ending"], "consistent": ok})
            parsed.append((op_word, ending, repl))
        rep.add(
            f"{name}-transcription",
            f"embedding:{name}-table-matches-formula",
            all(r["consistent"] for r in transcription),
            rows=transcription,
        )

        hits = [0] * len(rows)
        literal = [0] * len(rows)
        bad = []
        for y in w.points:
            app = [i for i, (op_word, _, _) in enumerate(parsed) if pw.translation.pieces[i][1].apply(y) is not None]
            if len(app) != 1:
                bad.append((str(y), "applicable rows", app))
                continue
            i = app[0]
            _, ending, repl = parsed[i]
            hits[i] += 1
            if y * ending.inverse() * repl != pw(y):
                bad.append((str(y), "rewritten ending", i + 1))
            # when the reduced word visibly ends in some row's ending, that row must apply
            ends = [j for j, (_, e, _) in enumerate(parsed) if y.letters[-len(e) :] == e.letters]
            if ends:
                if ends != [i]:
                    bad.append((str(y), "visible ending", [j + 1 for j in ends]))
                else:
                    literal[i] += 1
        rep.add(
            f"{name}-table",
            f"embedding:{name}-action-table",
            not bad and all(hits),
            row_hits=hits,
            visible_ending_hits=literal,
            failures=bad[:10],
        )
    return rep


def verify_unitary(name: str, R: int = 6, report: ExtensionReport | None = None) -> ExtensionReport:
    """Exact pointwise compression of t*t and tt*, injectivity, and t_alpha^4 = 1.

    Each column is the true image of a basis vector (nothing is truncated midway),
    so every window point is in scope.
    """
    _check_radius(R)
    rep = report or ExtensionReport(f"embedding-unitary-{name}", {"radius": R}, 0)
    w = build_window(Y2, R)
    t = unitaries()[name].translation
    ti = t.inverse()
    images = {}
    bad = []
    for y in w.points:
        z = t.apply(y)
        if z is None or ti.apply(z) != y:
            bad.append(("t*t", str(y)))
            continue
        images.setdefault(z, []).append(y)
        z2 = ti.apply(y)
        if z2 is None or t.apply(z2) != y:
            bad.append(("tt*", str(y)))
    collisions = [str(z) for z, ys in images.items() if len(ys) > 1]
    rep.add(f"{name}-unitary", f"embedding:{name}-is-unitary", not bad, failures=bad[:10], points=len(w))
    rep.add(f"{name}-injective", f"embedding:{name}-is-bijection", not collisions, collisions=collisions)
    if name == "t_alpha":
        fixed = all(act(y, ["alpha"] * 4) == y for y in w.points)
        rep.add("t_alpha-order-4", "embedding:alpha-order-four", fixed)
    return rep


def verify_equivariance(R: int = 6, L: int = 4, seed: int = 0, samples: int = 50, report=None) -> ExtensionReport:
    _check_radius(R)
    if L < 1:
        raise ValueError("word budget must be at least 1")
    rng = random.Random(seed)
    rep = report or ExtensionReport("embedding-equivariance", {"radius": R, "words": L}, seed)
    w = build_window(Y2, R)

    bad = []
    for y in w.points:
        nf = Phi_inverse(y)
        for s in ("a", "b", "alpha", "A", "B", "alpha^-1"):
            via_rules = Phi(right_multiply_G(nf, s))
            if via_rules != generator_map(s).apply(y) or via_rules != right_action_via_phi(y, _gen_element(s)):
                bad.append((str(y), s))
    rep.add("generators", "embedding:t-is-right-action", not bad, failures=bad[:10], points=len(w))

    sample = rng.sample(w.points, min(samples, len(w)))
    bad = []
    nwords = 0
    for word in reduced_words(2, L):
        nwords += 1
        g = GElement(word, 0)
        letters = element_letters(g)
        for y in sample:
            if act(y, letters) != right_action_via_phi(y, g):
                bad.append((str(word), str(y)))
    rep.add("words", "embedding:composition-order", not bad, words=nwords, sampled_points=len(sample), failures=bad[:10])

    bad = []
    nforms = 0
    for nf in normal_forms(L):
        nforms += 1
        g = to_element(nf)
        for y in sample[:10]:
            if act(y, element_letters(g)) != right_action_via_phi(y, g):
                bad.append((str(nf), str(y)))
    rep.add("normal-forms", "embedding:generates-right-regular-G", not bad, forms=nforms, failures=bad[:10])

    bad = []
    for y in w.points:
        lab = orbit_label(y)
        if orbit_label(act(y, ["a"])) != lab or orbit_label(act(y, ["b"])) != lab:
            bad.append((str(y), "F2 moved orbit"))
        if orbit_label(act(y, ["alpha"])) != (lab + 1) % 4:
            bad.append((str(y), "alpha shift"))
    rep.add("orbits", "embedding:four-orbits", not bad, failures=bad[:10])

    # alpha a alpha^-1 = b and alpha b alpha^-1 = a^-1
    a, b = _gen_element("a"), _gen_element("b")
    in_group = ALPHA * a * ALPHA.inverse() == b and ALPHA * b * ALPHA.inverse() == a.inverse()
    bad = [
        str(y)
        for y in w.points
        if act(y, ["alpha", "a", "alpha^-1"]) != act(y, ["b"]) or act(y, ["alpha", "b", "alpha^-1"]) != act(y, ["A"])
    ]
    rep.add("semidirect", "embedding:alpha-conjugation", in_group and not bad, failures=bad[:10])

    fixed = []
    for word in reduced_words(2, L):
        if len(word) and all(act(y, element_letters(GElement(word, 0))) == y for y in sample):
            fixed.append(str(word))
    rep.add("free-action", "embedding:free-action", not fixed, identity_words=fixed)

    y = Word.parse("aba")
    ex_a, ex_b = act(y, ["a"]), act(y, ["b"])

    ok = (
        y == Phi(GNormalForm(0, (0,), 1))
        and ex_a == Word.parse("abbaa") == Phi(GNormalForm(0, (0, 1), 0))
        and ex_b == Word.parse("ba") == Phi(element_normal_form(ALPHA))
    )
    rep.add("worked-example", "embedding:worked-example", ok, y=str(y), t_a_y=str(ex_a), t_b_y=str(ex_b))
    return rep


def _gen_element(s: str) -> GElement:
    return {
        "a": GElement(Word.parse("a"), 0),
        "b": GElement(Word.parse("b"), 0),
        "A": GElement(Word.parse("A"), 0),
        "B": GElement(Word.parse("B"), 0),
        "alpha": ALPHA,
        "alpha^-1": ALPHA.inverse(),
    }[s]


def verify_embedding(R: int = 6, L: int = 4, seed: int = 0) -> ExtensionReport:
    """Tables, unitarity and equivariance in one report."""
    _check_radius(R)
    rep = ExtensionReport("embedding", {"radius": R, "words": L}, seed)
    t0 = time.perf_counter()
    verify_tables(R, rep)
    for name in NAMES:
        verify_unitary(name, R, rep)
    verify_equivariance(R, L, seed, report=rep)
    rep.timing["total"] = time.perf_counter() - t0
    return rep


def window_dot(window: Window, name: str = "t_a") -> str:
    """Graphviz text of the window with an edge y -> t(y) whenever both ends are inside."""
    t = unitaries()[name].translation
    lines = [f'digraph "{name}" {{', "  node [shape=box];"]
    for y in window.points:
        lines.append(f'  "{y}" [label="{y}\\norbit {orbit_label(y)}"];')
    for y in window.points:
        z = t.apply(y)
        if z in window.index:
            lines.append(f'  "{y}" -> "{z}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
