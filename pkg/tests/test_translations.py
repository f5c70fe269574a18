import pytest
from hypothesis import given, strategies as st

from conftest import words
from ptalg.freegroup import Word
from ptalg.spaces import (
    AugmentedTree,
    FreeGroup,
    IntegerLine,
    Naturals,
    PositiveCone,
    PuncturedIntegers,
    SpaceError,
    build_window,
)
from ptalg.translations import (
    Compose,
    FiniteMap,
    IdentityOn,
    OverlapError,
    Piecewise,
    RightMult,
    Shift,
    build_puncture_fix,
    compose,
    conjugating_bijection,
    domain_in_window,
    identity,
    invert,
    is_subtranslation,
    puncture_shift,
    restrict,
)

X = PuncturedIntegers()
N = Naturals()


def test_shift_restricted_to_subspace():
    t = Shift(N, 1)
    assert t.apply(0) == 1
    assert invert(t).apply(0) is None
    assert invert(t).apply(5) == 4
    # inverse on N is undefined on {0, ..., i-1}
    r = domain_in_window(Shift(N, -3), build_window(N, 10))
    assert r.domain == list(range(3, 11))


def test_wrong_kind_is_an_error_not_undefined():
    with pytest.raises(SpaceError):
        Shift(N, 1).apply(Word.parse("a"))
    assert Shift(N, 1).apply(-4) is None


def test_double_shift_on_punctured_line():
    t = compose(puncture_shift(1), puncture_shift(1))
    w = build_window(X, 6)
    r = domain_in_window(t, w)
    missing = {p for p, _ in r.excluded if p + 2 <= 6}
    assert missing == {-1, -2}
    assert all(t.apply(p) == p + 2 for p in r.domain)


def test_excluded_reasons():
    t = Compose(X, (Shift(X, 1), Shift(X, 1)))
    r = domain_in_window(t, build_window(X, 4))
    reasons = dict(r.excluded)
    assert reasons[-1].startswith("undefined at step 1")
    assert reasons[-2].startswith("undefined at step 2")
    assert reasons[4] == "image outside window"


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_composition_is_subtranslation_of_sum(shifts):
    comp = Compose(X, tuple(Shift(X, i) for i in shifts))
    ok, diff = is_subtranslation(comp, Shift(X, sum(shifts)), build_window(X, 12))
    assert ok
    assert len(diff) <= len(shifts)


def test_right_multiplication_on_cone_and_tree():
    a, A = Word.parse("a"), Word.parse("A")
    X2, Y2 = PositiveCone(2), AugmentedTree(2)
    assert RightMult(X2, A).apply(Word()) is None
    assert RightMult(Y2, A).apply(Word()) == A
    assert RightMult(Y2, A).apply(Word.parse("b")) is None
    assert RightMult(X2, a).inverse().apply(Word.parse("ba")) == Word.parse("b")


@given(words(), words())
def test_right_mult_on_free_group(u, v):
    F = FreeGroup(2)
    assert RightMult(F, v).apply(u) == u * v
    assert RightMult(F, v).inverse().apply(u * v) == u


def test_restrict():
    t = restrict(Shift(IntegerLine(), 2), N)
    assert t == Shift(N, 2)
    r = restrict(RightMult(FreeGroup(2), Word.parse("b")), PositiveCone(2))
    assert r.apply(Word.parse("a")) == Word.parse("ab")
    with pytest.raises(TypeError):
        restrict(FiniteMap(N, ((1, 2),)), N)


def test_finite_map_must_be_injective():
    with pytest.raises(ValueError):
        FiniteMap(N, ((1, 3), (2, 3)))
    m = FiniteMap(N, ((1, 3), (2, 4)))
    assert m.inverse().apply(4) == 2 and m.apply(7) is None


def test_piecewise_overlap_is_detected():
    p = Piecewise(N, (("s", Shift(N, 1)), ("f", FiniteMap(N, ((0, 7),)))))
    with pytest.raises(OverlapError):
        p.apply(0)
    with pytest.raises(OverlapError):
        p.check_unique(build_window(N, 3))


def test_puncture_fix_is_a_bijection():
    t = build_puncture_fix()
    w = build_window(X, 10)
    imgs = [t.apply(p) for p in w.points]
    assert None not in imgs and len(set(imgs)) == len(imgs)
    assert t.apply(-1) == 1 and t.apply(-2) == -1 and t.apply(3) == 4
    assert t.inverse().apply(1) == -1


def test_conjugation_to_shift():
    phi, t = conjugating_bijection(), build_puncture_fix()
    for k in range(-50, 51):
        assert phi(t.apply(phi.inverse_apply(k))) == k + 1


def test_identity_and_identity_on():
    assert identity(N).apply(3) == 3
    assert identity(FreeGroup(2)).apply(Word.parse("ab")) == Word.parse("ab")
    P = IdentityOn(AugmentedTree(2), PositiveCone(2))
    assert P.apply(Word.parse("ab")) == Word.parse("ab")
    assert P.apply(Word.parse("Ab")) is None


def test_domain_report_json():
    r = domain_in_window(Shift(N, 2), build_window(N, 3))
    assert r.to_json()["domain"] == ["0", "1"]
    assert "image outside window" in r.dumps()
