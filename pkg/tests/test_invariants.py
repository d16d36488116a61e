from __future__ import annotations

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from braidmon.dataset import head_factorization
from braidmon.invariants import (
    BranchData,
    NonIntegralError,
    all_invariants,
    c2_coefficient,
    chern_c1_sq,
    chern_c2,
    index_tau,
    singularity_counts,
)

REFERENCE_DATA = BranchData(18, 54, 1080, 216, 54)


def test_reference_data():
    c1, c2, tau = all_invariants(REFERENCE_DATA)
    f18 = factorial(18)
    assert c1.value == 576 * f18 and c1.factored() == "576 * 18!"
    assert c2.value == 282 * f18 and c2.factored() == "282 * 18!"
    assert tau.value == 4 * f18 and tau.factored() == "4 * 18!"
    assert tau.sign == 1


def test_c2_bracket_terms():
    # 1458 - 81 + 3 - 810 - 288
    assert c2_coefficient(REFERENCE_DATA) == Fraction(282)


def test_small_cases():
    assert chern_c1_sq(BranchData(5, 6, 0, 0)).value == 0
    assert chern_c1_sq(BranchData(4, 8, 0, 0)).value == 24
    assert chern_c2(BranchData(5, 2, 0, 0)).value == 2 * factorial(5)


def test_zero_index():
    b = BranchData(4, 8, 30, 0)
    assert chern_c1_sq(b).value == 2 * chern_c2(b).value
    assert index_tau(b).value == 0 and index_tau(b).sign == 0


def test_non_integral_is_an_error():
    with pytest.raises(NonIntegralError):
        chern_c1_sq(BranchData(1, 7, 0, 0))
    with pytest.raises(NonIntegralError):
        chern_c2(BranchData(2, 6, 1, 0))


def test_validation():
    with pytest.raises(ValueError):
        BranchData(0, 6, 0, 0)
    with pytest.raises(ValueError):
        BranchData(3, -1, 0, 0)


@given(st.integers(4, 30), st.integers(0, 200), st.integers(0, 400), st.integers(0, 200))
def test_expanded_matches_factored(n, m, d4, r3):
    # choose d, rho so that every bracket is integral after multiplying by n!
    b = BranchData(n, m, 4 * d4, 3 * r3)
    c1, c2, tau = all_invariants(b)
    f = factorial(n)
    assert c1.value == c1.coefficient * f
    assert c2.value == c2.coefficient * f
    assert 3 * tau.value == c1.value - 2 * c2.value


def test_singularity_counts_cross_check():
    assert singularity_counts(head_factorization(2)) == {1: 2, 2: 20, 3: 12}
