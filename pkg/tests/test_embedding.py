import json

import pytest

from ptalg.cuntz_embedding import (
    NAMES,
    act,
    build,
    group_word,
    load_terms,
    right_action_via_phi,
    term_words,
    verify_embedding,
    verify_equivariance,
    verify_tables,
    verify_unitary,
    window_dot,
)
from ptalg.freegroup import ALPHA, GElement, GNormalForm, Phi, Word, element_normal_form, orbit_label
from ptalg.operators import OperatorExpr, word_tex
from ptalg.spaces import AugmentedTree, build_window

Y = AugmentedTree(2)


def test_term_counts_and_first_terms():
    assert [len(term_words(n)) for n in NAMES] == [6, 6, 4]
    assert word_tex(term_words("t_b")[0]) == "bbab^*b^*"
    assert term_words("t_b")[0] == tuple(OperatorExpr.parse("b^2a(b^*)^2").terms)[0]


def test_group_word_reverses():
    (w,) = OperatorExpr.parse("ba(a^*)^2b^*").terms
    assert group_word(w) == Word.parse("BAAab")
    assert group_word(w[:2]) == Word.parse("ab")


def test_table_rows_listed():
    tables = load_terms()["tables"]
    assert len(tables["t_a"]) == len(tables["t_b"]) == 6
    row = tables["t_a"][1]
    assert (row["ending"], row["term"], row["replacement"]) == ("aab", "ba(a^*)^2b^*", "ab")


def test_tables_reproduced():
    rep = verify_tables(6)
    assert rep.passed, rep.summary()
    for c in rep.checks:
        if c.name.endswith("-table"):
            assert all(c.witness["row_hits"])


@pytest.mark.parametrize("name", NAMES)
def test_unitary(name):
    rep = verify_unitary(name, 6)
    assert rep.passed, rep.summary()


def test_alpha_on_bb():
    t = build("t_alpha").translation
    assert t.applicable(Word.parse("abb")) == ["aab*b*"]
    assert t.apply(Word.parse("abb")) == Word.parse("aaa")


def test_worked_example():
    y = Phi(GNormalForm(0, (0,), 1))
    assert y == Word.parse("aba")
    assert act(y, ["a"]) == Phi(GNormalForm(0, (0, 1), 0)) == Word.parse("abbaa")
    assert act(y, ["b"]) == Phi(element_normal_form(ALPHA)) == Word.parse("ba")


def test_composition_order():
    # acting by a then b is the right action of ab, not of ba
    w = build_window(Y, 5)
    ab = GElement(Word.parse("ab"))
    ba = GElement(Word.parse("ba"))
    assert all(act(y, ["a", "b"]) == right_action_via_phi(y, ab) for y in w.points)
    assert any(act(y, ["a", "b"]) != right_action_via_phi(y, ba) for y in w.points)


def test_orbit_invariance():
    for y in build_window(Y, 5).points:
        assert orbit_label(act(y, ["a"])) == orbit_label(y)
        assert orbit_label(act(y, ["alpha"])) == (orbit_label(y) + 1) % 4


def test_equivariance_small():
    rep = verify_equivariance(5, 3)
    assert rep.passed, rep.summary()


def test_full_embedding_report_is_deterministic():
    a = verify_embedding(6, 4, seed=3).dumps()
    b = verify_embedding(6, 4, seed=3).dumps()
    assert a == b
    assert json.loads(a)["case"] == "embedding"


def test_radius_validation():
    with pytest.raises(ValueError):
        verify_tables(4)
    with pytest.raises(ValueError):
        build("t_c")


def test_dot_export():
    dot = window_dot(build_window(Y, 2))
    assert dot.startswith('digraph "t_a"')
    assert '"e" -> "a";' in dot
