from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidmon.bands import PunctureConfig, band
from braidmon.braid import ArtinWord
from braidmon.dataset import head_factorization, hv2_relations
from braidmon.dsl import parse, resolve_braid
from braidmon.factorization import Factor, Factorization, StubFactor
from braidmon.fp_group import FpPresentation, todd_coxeter
from braidmon.vankampen import (
    GPresentation,
    RelationKind,
    conjugate_generators,
    cusp_relation,
    generator_images,
    involutive_reduce,
    invariance_orbit,
    loops_from_factor,
    pair_twist_images,
    parse_loop,
    presentation_from_factorization,
    relation_from_factor,
    same_loops_mod_squares,
    square_relation,
)
from braidmon.words import GWord, act
from tests.conftest import braid_words

CFG12 = PunctureConfig.from_name("12p")
W = GWord.parse


def _hv2_factors(atom: str) -> list[Factor]:
    f = head_factorization(2)
    return [x for x in f.factors if not isinstance(x, StubFactor) and x.origin.atom == atom]


def test_branch_point_loops_exact():
    (fac,) = _hv2_factors("Z^1_{5,5'}")
    a, b = loops_from_factor(fac)
    assert a == W("1 1' 2 2' 5").inverse() * W("5") * W("1 1' 2 2' 5")
    assert b == parse_loop("5'^{6 6'}")
    (rel,) = relation_from_factor(fac)
    assert rel.kind is RelationKind.BRANCH_POINT
    assert str(rel.left) == "5^-1 2'^-1 2^-1 1'^-1 1^-1 5 1 1' 2 2' 5"


def test_cusp_loops_mod_squares():
    loops = [loops_from_factor(x) for x in _hv2_factors("uZ^3_{22',4}")]
    printed = [(W("2'"), W("4")), (W("2"), W("4")), (parse_loop("2'^{2}"), W("4"))]
    assert len(loops) == 3
    for got, want in zip(loops, printed):
        assert same_loops_mod_squares(got, want, ordered=True)
    # the first two agree letter for letter
    assert loops[:2] == printed[:2]


def test_node_loops_mod_squares():
    loops = [loops_from_factor(x) for x in _hv2_factors("uZ^2_{22',5}")]
    printed = [(parse_loop("2^{1' 1}"), W("5")), (parse_loop("2'^{1' 1}"), W("5"))]
    for want in printed:
        assert any(same_loops_mod_squares(got, want) for got in loops)


def test_relation_shapes():
    a, b = W("1"), W("2")
    assert str(relation_from_factor(Factor(band(CFG12, "1", "1'"), 2, ArtinWord(12)))[0]) == "1 1' = 1' 1"
    braid = cusp_relation(a, b)
    assert (str(braid.left), str(braid.right)) == ("1 2 1", "2 1 2")
    inv = cusp_relation(a, b, form="involutive")
    assert str(inv.relator()) == "1 2 1 2 1 2"
    assert str(square_relation("3'").relator()) == "3' 3'"
    with pytest.raises(ValueError):
        cusp_relation(a, b, form="other")


def test_stub_and_bad_exponent_rejected():
    with pytest.raises(ValueError, match="stub"):
        relation_from_factor(StubFactor("F1hat", 24))
    with pytest.raises(ValueError):
        relation_from_factor(Factor(band(CFG12, "1", "1'"), 4, ArtinWord(12)))


def test_empty_factorization_gives_free_group():
    p = presentation_from_factorization(Factorization(12), CFG12)
    assert p.generators == CFG12.labels and p.relations == ()


def test_quotient_mode_adds_squares():
    cfg = PunctureConfig.from_name("54p")
    p = presentation_from_factorization(Factorization(54), cfg, mode="quotient")
    assert len(p.relations) == 54
    assert all(r.kind is RelationKind.SQUARE for r in p.relations)


def test_presentation_text_round_trip():
    f = head_factorization(2)
    f = Factorization(12, tuple(x for x in f.factors if not isinstance(x, StubFactor)))
    p = presentation_from_factorization(f, CFG12)
    q = GPresentation.from_text(p.to_text())
    assert q.generators == p.generators
    assert [r.relator() for r in q.relations] == p.relators()


def test_undeclared_generator_rejected():
    with pytest.raises(ValueError):
        GPresentation(("1",), (square_relation("2"),))


def test_pair_twist_powers():
    assert pair_twist_images(CFG12, "3", 0) == {"3": W("3"), "3'": W("3'")}
    one = pair_twist_images(CFG12, "3", 1)
    assert one == {"3": W("3'"), "3'": W("3'^-1 3 3'")}
    twice = {k: v.substitute(one) for k, v in one.items()}
    assert twice == pair_twist_images(CFG12, "3", 2)
    back = {k: v.substitute(pair_twist_images(CFG12, "3", -1)) for k, v in one.items()}
    assert back == {"3": W("3"), "3'": W("3'")}


def test_orbit_starts_with_original_relations():
    rels = hv2_relations()[:5]
    orbit = invariance_orbit(rels, CFG12, bound=1)
    assert orbit[:len(rels)] == rels
    used = {p for r in rels for p in r.labels()}
    pairs = {CFG12.pair_of(x)[0] for x in used}
    assert len(orbit) == len(rels) * 3 ** len(pairs)


def test_conjugate_generators_identity():
    rels = hv2_relations()[:3]
    same = conjugate_generators(rels, ArtinWord(12), CFG12)
    assert [r.relator() for r in same] == [r.relator() for r in rels]


def test_bar_generators():
    c = resolve_braid(parse("uZ^{-2}_{5,66'} Z^2_{33',4}"), CFG12)
    im = generator_images(CFG12, c)
    for j in ("1", "1'", "2", "2'", "4'"):
        assert im[j] == W(j)
    assert im["3"] == parse_loop("3^{4}")
    assert im["3'"] == parse_loop("3'^{4}")
    assert im["4"] == parse_loop("4^{3 3' 4}")
    printed = {"5": "5^{6' 6 5}", "5'": "5'^{6 6' 5 6' 6 5}", "6": "6^{5}", "6'": "6'^{5}"}
    for j, text in printed.items():
        assert involutive_reduce(im[j]) == involutive_reduce(parse_loop(text))


@settings(max_examples=50, deadline=None)
@given(braid_words(5, 8), braid_words(5, 8), st.sampled_from(["1", "2", "3", "4", "5"]))
def test_action_is_a_group_action(b1, b2, g):
    labels = ("1", "2", "3", "4", "5")
    x = GWord.gen(g)
    assert act(x, b1.letters + b2.letters, labels) == act(act(x, b1.letters, labels), b2.letters, labels)
    assert act(act(x, b1.letters, labels), b1.inverse().letters, labels) == x


@settings(max_examples=30, deadline=None)
@given(braid_words(4, 10))
def test_action_preserves_boundary_word(b):
    labels = ("1", "2", "3", "4")
    images = [act(GWord.gen(x), b.letters, labels) for x in labels]
    prod = GWord()
    for w in images:
        prod = prod * w
    assert prod == W("1 2 3 4")


def test_cusp_forms_agree_in_quotient():
    a, b = W("a"), W("b")
    for form in ("braid", "involutive"):
        r = cusp_relation(a, b, form=form)
        p = FpPresentation(("a", "b"), (r.relator(), W("a a"), W("b b")))
        assert todd_coxeter(p).index == 6


def test_adjacent_factors():
    (node,) = relation_from_factor(Factor(band(CFG12, "2", "2'"), 2, ArtinWord(12)))
    assert str(node.relator()) == "2 2' 2^-1 2'^-1"
    (branch,) = relation_from_factor(Factor(band(CFG12, "3'", "4"), 1, ArtinWord(12)))
    assert (branch.left, branch.right) == (GWord.gen("3'"), GWord.gen("4"))


@pytest.mark.parametrize("j", ["1", "3", "6"])
@pytest.mark.parametrize("m", [1, -1, 2])
def test_generator_images_match_pair_twist(j, m):
    from braidmon.bands import rho_twist

    full = generator_images(CFG12, rho_twist(j, m, CFG12))
    pair = pair_twist_images(CFG12, j, m)
    for lab in CFG12.labels:
        assert full[lab] == pair.get(lab, GWord.gen(lab))


def test_relation_key_ignores_simultaneous_conjugation():
    from braidmon.vankampen import node_relation, relation_key

    a, b, c = parse_loop("1"), parse_loop("4^{2' 2}"), W("2 2' 3")
    r = node_relation(a, b)
    moved = node_relation(a.conj(c), b.conj(c))
    assert relation_key(r) == relation_key(moved)
    assert relation_key(r) == relation_key(node_relation(b, a))
    assert relation_key(r) != relation_key(node_relation(a, W("4")))
    assert relation_key(node_relation(W("1 2"), W("3"))) is None


def test_fixture_list_against_orbit():
    """How much of the 62-relation printed list our H_V2 relations reach.

    Frozen from a run: counts are modulo squares and simultaneous conjugation.
    """
    from braidmon.vankampen import relation_key

    f = head_factorization(2)
    f = Factorization(12, tuple(x for x in f.factors if not isinstance(x, StubFactor)))
    rels = list(presentation_from_factorization(f, CFG12).relations)
    fixture = [r for r in hv2_relations() if r.kind is not RelationKind.SQUARE]
    reached = {}
    for bound in (0, 1):
        keys = {relation_key(r) for r in invariance_orbit(rels, CFG12, bound=bound)}
        reached[bound] = [r.origin for r in fixture if relation_key(r) in keys]
    assert len(fixture) == 62
    assert [len(reached[b]) for b in (0, 1)] == [25, 56]
    missing = [r.origin for r in fixture if r.origin not in reached[1]]
    assert missing == ["23", "24", "25", "26", "35", "36"]
