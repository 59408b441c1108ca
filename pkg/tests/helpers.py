"""Shared test utilities: basis changes and random invertible matrices."""

from fractions import Fraction

from hypothesis import strategies as st

from codimlab.exactla import rank, solve
from codimlab.liecore import LieAlgebra


def change_basis(L: LieAlgebra, p) -> LieAlgebra:
    """Same algebra written in the basis given by the columns of ``p``."""
    d = L.dim
    cols = [[Fraction(p[r][i]) for r in range(d)] for i in range(d)]
    c = [[solve(p, L.bracket(cols[i], cols[j])) for j in range(d)] for i in range(d)]
    return LieAlgebra(c, [f"f{i}" for i in range(d)], L.name + "'")


def conj(p, m):
    """p^-1 m p, the matrix of the same operator in the new basis."""
    d = len(p)
    pm = [[sum(Fraction(m[i][k]) * p[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
    cols = [solve(p, [pm[i][j] for i in range(d)]) for j in range(d)]
    return tuple(zip(*cols))


def invertible(d: int):
    """Strategy for invertible integer d x d matrices with small entries."""
    return (
        st.lists(st.lists(st.integers(-2, 2), min_size=d, max_size=d), min_size=d, max_size=d)
        .map(lambda m: [[x + 3 * int(i == j) for j, x in enumerate(r)] for i, r in enumerate(m)])
        .filter(lambda m: rank(m) == d)
    )
