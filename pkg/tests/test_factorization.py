from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidmon.bands import PunctureConfig, Side, band, rho_twist
from braidmon.braid import ArtinWord, equals, full_twist, normal_form
from braidmon.factorization import (
    Factor,
    Factorization,
    StubError,
    StubFactor,
    check_full_twist,
    degree_report,
    hurwitz_move,
    invariance_check,
    letter_factorization,
    line_arrangement_factorization,
    permutation_product,
    product_word,
    residual_degree,
)
from tests.conftest import braid_words


def test_letter_factorization_of_delta_squared():
    f = letter_factorization(full_twist(4))
    assert f.degree == 12
    r = check_full_twist(f)
    assert r.ok and r.degree_delta == 0


def test_dropping_a_factor_reports_delta():
    f = letter_factorization(full_twist(4))
    for i in range(len(f)):
        r = check_full_twist(f.without(i))
        assert not r.ok
        assert r.degree_delta == -1
        assert r.first_divergence is not None


def test_stub_blocks_product():
    cfg = PunctureConfig.plain(3)
    f = Factorization(3, (Factor(band(cfg, "1", "2"), 2, ArtinWord(3)), StubFactor("X", 4)))
    assert f.degree == 6
    r = check_full_twist(f)
    assert not r.ok and "stub" in r.message
    with pytest.raises(StubError):
        product_word(f)


def test_empty_factorization():
    f = Factorization(3)
    assert f.degree == 0
    assert residual_degree(f, 3) == 6
    assert not check_full_twist(f).ok


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_line_arrangement_is_full_twist(n):
    f = line_arrangement_factorization(n)
    assert len(f) == n * (n - 1) // 2
    assert check_full_twist(f).ok


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_complex_conjugate_still_full_twist(n):
    assert check_full_twist(line_arrangement_factorization(n).mirrored()).ok
    assert check_full_twist(letter_factorization(full_twist(n)).mirrored()).ok


@pytest.mark.parametrize("n", [3, 4, 5])
def test_permutation_product_is_identity(n):
    assert permutation_product(line_arrangement_factorization(n)).is_identity()
    assert permutation_product(letter_factorization(full_twist(n))).is_identity()


def test_conjugation_by_c_conjugates_product():
    f = line_arrangement_factorization(4)
    c = ArtinWord.parse("s1 s3^-1 s2", 4)
    g = f.conjugated(c)
    assert equals(product_word(g), c.inverse() * product_word(f) * c)
    # Delta^2 is central, so the conjugate still verifies
    assert check_full_twist(g).ok


def test_hurwitz_moves_preserve_product():
    f = line_arrangement_factorization(4)
    p = product_word(f)
    for i in range(len(f) - 1):
        for inverse in (False, True):
            g = hurwitz_move(f, i, inverse)
            assert equals(product_word(g), p)
    g = hurwitz_move(hurwitz_move(f, 2), 2, inverse=True)
    assert all(equals(a.word(), b.word()) for a, b in zip(f.factors, g.factors))


def test_invariance_positive_and_negative():
    cfg = PunctureConfig.from_name("12p")
    # the full twist of a pair commutes with its own half-twist
    pair = Factorization(12, (Factor(band(cfg, "3", "3'"), 2, ArtinWord(12)),))
    assert invariance_check(pair, rho_twist("3", 1, cfg))
    # a band from 3' to 4 does not
    other = Factorization(12, (Factor(band(cfg, "3'", "4"), 2, ArtinWord(12)),))
    assert not invariance_check(other, rho_twist("3", 1, cfg))


def test_degree_report_groups():
    cfg = PunctureConfig.plain(4)
    f = letter_factorization(full_twist(4))
    extra = Factorization(4, (Factor(band(cfg, "1", "3", Side.ABOVE), 3, ArtinWord(4)), StubFactor("F", 24)))
    rep = degree_report([("a", f), ("b", extra)])
    assert rep.total == 12 + 3 + 24
    assert rep.group("b").count(3) == 1
    assert rep.group("b").stub_degree == 24
    assert rep.counts() == {1: 12, 3: 1}
    assert "total" in rep.to_text()
    assert rep.to_records()[-1]["degree"] == 39


def _random_factorization(n: int):
    cfg = PunctureConfig.plain(n)
    pair = st.tuples(st.integers(1, n), st.integers(1, n)).filter(lambda t: t[0] < t[1])
    fac = st.builds(
        lambda ij, side, r, c: Factor(band(cfg, str(ij[0]), str(ij[1]), side), r, c),
        pair, st.sampled_from([Side.ABOVE, Side.BELOW]), st.integers(1, 3), braid_words(n, 6),
    )
    return st.lists(fac, max_size=6).map(lambda xs: Factorization(n, tuple(xs)))


@settings(max_examples=60, deadline=None)
@given(_random_factorization(5))
def test_product_degree_is_sum_of_exponents(f):
    assert product_word(f).degree == f.degree == sum(x.exponent for x in f.factors)
    assert normal_form(product_word(f)).strand_count == 5


@settings(max_examples=40, deadline=None)
@given(_random_factorization(4), braid_words(4, 8))
def test_conjugation_telescopes(f, c):
    assert equals(product_word(f.conjugated(c)), c.inverse() * product_word(f) * c)


@settings(max_examples=40, deadline=None)
@given(_random_factorization(4))
def test_mirrored_product_is_inverse_mirror(f):
    assert equals(product_word(f.mirrored()), product_word(f).mirror().inverse())
