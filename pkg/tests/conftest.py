from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import hypothesis.strategies as st
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("kptau", max_examples=40, deadline=None)
settings.load_profile("kptau")

small_rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)
nonzero_rationals = small_rationals.filter(lambda q: q != 0)


def symmetric_from(values: list[Fraction], k: int) -> list[list[Fraction]]:
    """Fill the upper triangle row by row and mirror it."""
    M = [[Fraction(0)] * k for _ in range(k)]
    it = iter(values)
    for i in range(k):
        for j in range(i, k):
            M[i][j] = M[j][i] = next(it)
    return M


@st.composite
def symmetric_matrices(draw, k: int):
    values = draw(st.lists(small_rationals, min_size=k * (k + 1) // 2, max_size=k * (k + 1) // 2))
    return symmetric_from(values, k)


@st.composite
def matrices(draw, rows: int, cols: int):
    return [draw(st.lists(small_rationals, min_size=cols, max_size=cols)) for _ in range(rows)]
