from fractions import Fraction

from hypothesis import strategies as st

from e6painleve.scalars import QuadExt

small_ints = st.integers(min_value=-60, max_value=60)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=40))
quads = st.builds(QuadExt, rationals, rationals)
nonzero_quads = quads.filter(lambda q: not q.is_zero())
