from fractions import Fraction

from hypothesis import strategies as st

from archzeta.algebra import Polynomial, default_names

small_frac = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def polynomials(draw, nvars=None, max_terms=5, max_exp=5, complex_coeffs=True):
    n = draw(st.integers(1, 4)) if nvars is None else nvars
    exps = draw(st.lists(st.tuples(*[st.integers(0, max_exp)] * n), min_size=1, max_size=max_terms, unique=True))
    terms = {}
    for e in exps:
        re = draw(small_frac)
        im = draw(small_frac) if complex_coeffs and draw(st.booleans()) else Fraction(0)
        terms[e] = (re, im)
    return Polynomial(n, terms, default_names(n))


@st.composite
def supports(draw, max_n=4, max_points=6, max_exp=6):
    n = draw(st.integers(1, max_n))
    pts = draw(st.lists(st.tuples(*[st.integers(0, max_exp)] * n), min_size=1, max_size=max_points, unique=True))
    pts = [p for p in pts if any(p)]
    if not pts:
        pts = [tuple([1] + [0] * (n - 1))]
    return pts
