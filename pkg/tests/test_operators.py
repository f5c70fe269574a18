from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ptalg.freegroup import Word
from ptalg.operators import (
    GenSymbol,
    OperatorExpr,
    ParseError,
    WindowMatrix,
    check_relation,
    independence_gram,
    integer_environment,
    is_quasi_reduced,
    nat_reduce,
    quasi_reduce,
    quasi_reduced_words,
    rank,
    rank_profile,
    safe_core,
    tree_environment,
    truncate,
    word_operator,
    word_type,
)
from ptalg.operators import linalg
from ptalg.spaces import AugmentedTree, Naturals, PositiveCone, build_window

W = OperatorExpr.word
ONE = OperatorExpr.identity()
N = Naturals()
X2 = PositiveCone(2)


def sympy_rank(rows, ncols):
    return sympy.Matrix([[r.get(c, 0) for c in range(ncols)] for r in rows]).rank() if rows else 0


# --- expressions and parsing ------------------------------------------------------


def test_parse_formulas():
    e = OperatorExpr.parse("a^3(a^*)^2 + ba(a^*)^2b^*")
    assert len(e.terms) == 2
    assert str(OperatorExpr.parse("a a*")) == "aa^*"
    assert OperatorExpr.parse("(a + b)^*") == W("a*") + W("b*")
    assert OperatorExpr.parse("1/2 a - 2") == W("a", coeff=Fraction(1, 2)) - 2
    assert OperatorExpr.parse("t_{-2} t_1^*").symbols() == {"t_-2", "t_1"}
    for bad in ("a +", "a^-1", "(a", "a $"):
        with pytest.raises(ParseError):
            OperatorExpr.parse(bad)


def test_star_is_an_anti_involution():
    e = W("a", "b*") + 3 * W("b")
    assert e.star().star() == e
    assert (e * W("a")).star() == W("a*") * e.star()


def test_word_operator_reverses_group_order():
    # right multiplication by ab applies a first, so the operator is b a
    assert word_operator(Word.parse("ab")) == (GenSymbol("b"), GenSymbol("a"))
    env = tree_environment(X2)
    w = build_window(X2, 4)
    m = truncate(OperatorExpr({word_operator(Word.parse("ab")): 1}), w, env)
    assert m[Word.parse("bab"), Word.parse("b")] == 1


# --- exact rank -------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.randoms(use_true_random=False))
def test_rank_matches_sympy(nr, nc, r):
    rows = []
    for _ in range(nr):
        rows.append({c: Fraction(r.randint(-3, 3), r.randint(1, 3)) for c in range(nc) if r.random() < 0.6})
    assert linalg.rank(rows) == sympy_rank(rows, nc)


def test_rank_of_dependent_rows():
    rows = [{0: 1, 1: 2}, {0: 2, 1: 4}, {"x": Fraction(1, 3)}]
    assert linalg.rank(rows) == 2
    assert linalg.rank([]) == 0


# --- truncation and relations ---------------------------------------------------------


@pytest.mark.parametrize("R", [5, 10, 20])
def test_toeplitz_relations(R):
    env, w = integer_environment(N), build_window(N, R)
    assert check_relation(W("t_1*", "t_1"), ONE, w, env) == 0
    assert check_relation(W("t_1*", "t_1") - W("t_1", "t_1*"), W("p_0"), w, env) == 0
    # t t* is not the identity
    assert check_relation(W("t_1", "t_1*"), ONE, w, env) == 1


def test_product_and_pointwise_agree_on_safe_core():
    env = tree_environment(X2)
    w = build_window(X2, 5)
    e = W("a", "b*", "a*") + W("b", "a")
    k = env.propagation(e)
    core = safe_core(w, k)
    p1 = truncate(e, w, env, "pointwise").restrict_columns(core.points)
    p2 = truncate(e, w, env, "product").restrict_columns(core.points)
    assert (p1 - p2).max_abs() == 0


def test_product_mode_equals_matrix_product():
    env = integer_environment(N)
    w = build_window(N, 6)
    t, ts = truncate(W("t_1"), w, env), truncate(W("t_1*"), w, env)
    prod = truncate(W("t_1", "t_1*", "t_1"), w, env, "product")
    assert ((t @ ts @ t) - prod).max_abs() == 0


def test_pointwise_is_the_compression():
    # P t* P t P differs from P t*t P at the last point; the pointwise mode gives the latter
    env = integer_environment(N)
    w = build_window(N, 4)
    m = truncate(W("t_1*", "t_1"), w, env, "pointwise")
    assert m.entries == {(p, p): 1 for p in w.points}
    prod = truncate(W("t_1*", "t_1"), w, env, "product")
    assert (4, 4) not in prod.entries
    assert m.boundary_loss == 0


def test_safe_core_bounds():
    w = build_window(N, 5)
    assert safe_core(w, 2).points == (0, 1, 2, 3)
    with pytest.raises(ValueError):
        safe_core(w, 6)


def test_cone_relations():
    env, w = tree_environment(X2), build_window(X2, 4)
    assert check_relation(W("a*", "a"), ONE, w, env) == 0
    assert check_relation(W("a*", "b"), OperatorExpr(), w, env) == 0
    assert check_relation(W("a", "a*") + W("b", "b*") + W("p_e"), ONE, w, env) == 0
    Y = AugmentedTree(2)
    assert check_relation(W("a", "a*") + W("b", "b*"), ONE, build_window(Y, 5), tree_environment(Y)) == 0


def test_rank_profile_identity():
    prof = rank_profile(ONE, integer_environment(N), [5, 10, 15])
    assert [r for _, r in prof.ranks] == [6, 11, 16]
    assert not prof.stabilized
    with pytest.raises(ValueError):
        rank_profile(ONE, integer_environment(N), [5, 3])


def test_window_matrix_exports():
    env, w = integer_environment(N), build_window(N, 2)
    m = truncate(W("t_1"), w, env)
    mm = m.to_matrix_market().splitlines()
    assert mm[0].endswith("integer general") and mm[2] == "3 3 2"
    assert m.to_json()["triplets"] == [["1", "0", "1"], ["2", "1", "1"]]
    half = WindowMatrix(w, {(0, 0): Fraction(1, 2)})
    assert "real" in half.to_matrix_market().splitlines()[0]
    assert rank(m) == 2


# --- rewriting ----------------------------------------------------------------------------


def test_quasi_reduce_examples():
    assert quasi_reduce(W("a", "b*", "b", "a*")).to_expr() == W("a", "a*")
    assert quasi_reduce(W("a*", "b")).is_zero
    r = quasi_reduce(OperatorExpr.parse("a b* a b*"))
    assert r.is_zero
    assert quasi_reduce(W("a", "a*", "a", "b")).to_expr() == W("a", "b")


def test_nat_reduce():
    word = tuple(W("t_1", "t_1", "t_1*", "t_1*", "t_1*", "t_1").terms)[0]
    assert nat_reduce(word) == (2, 2)
    with pytest.raises(ValueError):
        nat_reduce((GenSymbol("a"), GenSymbol("b")))


SYMS = [GenSymbol("a"), GenSymbol("a", True), GenSymbol("b"), GenSymbol("b", True)]


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(SYMS), max_size=6))
def test_quasi_reduce_is_sound(word):
    env, w = tree_environment(X2), build_window(X2, 7)
    e = OperatorExpr({tuple(word): 1})
    red = quasi_reduce(tuple(word))
    assert all(is_quasi_reduced(t[0] + t[1]) for t in red.terms)
    core = safe_core(w, len(word))
    lhs = truncate(e, w, env, "product").restrict_columns(core.points)
    rhs = truncate(red.to_expr(), w, env, "product").restrict_columns(core.points)
    assert (lhs - rhs).max_abs() == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.booleans(), max_size=8))
def test_nat_reduce_is_sound(stars):
    env, w = integer_environment(N), build_window(N, 12)
    word = tuple(GenSymbol("t_1", s) for s in stars)
    i, j = nat_reduce(word)
    core = safe_core(w, len(word))
    lhs = truncate(OperatorExpr({word: 1}), w, env, "product").restrict_columns(core.points)
    red = W(*(["t_1"] * i + ["t_1*"] * j))
    rhs = truncate(red, w, env, "product").restrict_columns(core.points)
    assert (lhs - rhs).max_abs() == 0


def test_quasi_reduced_words_independent():
    env, w = tree_environment(X2), build_window(X2, 6)
    ws = quasi_reduced_words(["a", "b"], 3)
    assert len(ws) == sum((k + 1) * 2**k for k in range(4))
    assert independence_gram(ws, w, env)
    assert max(map(word_type, ws)) == 3


def test_dependent_family_detected():
    env, w = tree_environment(X2), build_window(X2, 5)
    fam = [W("a", "a*"), W("b", "b*"), W("p_e"), ONE]
    assert not independence_gram(fam, w, env)
