from __future__ import annotations

from hypothesis import strategies as st

from sysf_bbc import lambda_core as lc


@st.composite
def lam_terms(draw, max_size: int = 10, free: int = 3, depth: int = 0):
    """Lambda terms of at most ``max_size`` nodes; indices may escape up to ``free``."""
    n = draw(st.integers(1, max_size))
    return draw(_sized(n, depth, free))


def _sized(n: int, depth: int, free: int):
    if n <= 1:
        return st.integers(0, depth + free - 1 if depth + free > 0 else 0).map(lc.Var)
    if n == 2:
        return _sized(1, depth + 1, free).map(lc.Abs)

    @st.composite
    def node(draw):
        if draw(st.booleans()):
            return lc.Abs(draw(_sized(n - 1, depth + 1, free)))
        m = draw(st.integers(1, n - 2))
        return lc.App(draw(_sized(m, depth, free)), draw(_sized(n - 1 - m, depth, free)))

    return node()


def lam_lists(max_len: int = 3, max_size: int = 6):
    return st.lists(lam_terms(max_size=max_size), max_size=max_len).map(tuple)
