"""Hypothesis strategies for exact simplex objects."""

from fractions import Fraction

from hypothesis import strategies as st


@st.composite
def prob_vectors(draw, n=None, max_den=12):
    n = n if n is not None else draw(st.integers(1, 4))
    den = draw(st.integers(1, max_den))
    cuts = sorted(draw(st.lists(st.integers(0, den), min_size=n - 1, max_size=n - 1)))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return tuple(Fraction(p, den) for p in parts)


@st.composite
def stochastic_matrices(draw, n=None, max_den=8):
    n = n if n is not None else draw(st.integers(1, 3))
    cols = [draw(prob_vectors(n=n, max_den=max_den)) for _ in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


weights = st.fractions(min_value=0, max_value=1, max_denominator=12)
