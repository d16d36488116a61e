from __future__ import annotations

import pytest
from hypothesis import strategies as st

from braidmon import bands
from braidmon.braid import ArtinWord


@pytest.fixture(autouse=True)
def _default_side_convention():
    bands.set_side_convention("above")
    yield
    bands.set_side_convention("above")


def braid_words(n: int, max_len: int = 20):
    letters = st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i)))
    return st.lists(letters, max_size=max_len).map(lambda xs: ArtinWord(n, tuple(xs)))
