from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from codimlab.exactla import Subspace, subspace_sum
from codimlab.liecore import (
    LieAlgebra,
    NotNested,
    annihilator,
    derived_series,
    direct_sum,
    levi_decomposition,
    lower_central_series,
    nilradical,
    solvable_radical,
    summand_subspaces,
    validate,
)
from helpers import change_basis, invertible


def test_fixtures_are_lie_algebras(fx):
    for name, f in fx.items():
        assert validate(f.algebra) == [], name


def test_validate_reports_broken_jacobi():
    # [x, y] = y, [y, z] = x, [x, z] = 0 fails Jacobi on (x, y, z)
    bad = LieAlgebra.from_brackets(3, {(0, 1): {1: 1}, (1, 2): {0: 1}})
    assert ("jacobi", 0, 1, 2) in validate(bad)


def test_validate_reports_alternation():
    c = [[[Fraction(0)] * 2 for _ in range(2)] for _ in range(2)]
    c[0][1][1] = Fraction(1)
    c[1][0][1] = Fraction(1)
    assert validate(LieAlgebra(c)) == [("alternation", 0, 1)]


def test_killing_matches_trace_oracle(fx):
    for name in ("sl2", "gl2", "sl2_semidirect_q2"):
        L = fx[name].algebra
        ads = [sympy.Matrix(L.ad(L.basis_vector(i))) for i in range(L.dim)]
        want = [[(a * b).trace() for b in ads] for a in ads]
        assert [[sympy.Rational(x) for x in r] for r in L.killing_matrix] == want


def test_sl2_killing_form_values(sl2):
    km = sl2.killing_matrix
    assert km[0][1] == 4 and km[2][2] == 8 and km[0][0] == 0


def test_semisimplicity(fx):
    assert fx["sl2"].algebra.is_semisimple()
    assert fx["sl2sl2_swap"].algebra.is_semisimple()
    assert not fx["gl2"].algebra.is_semisimple()
    assert not fx["heisenberg_h3"].algebra.is_semisimple()


def test_radicals(fx, sl2, gl2):
    assert solvable_radical(sl2).is_zero()
    s2 = fx["solvable2"].algebra
    assert solvable_radical(s2).dim == 2
    assert solvable_radical(gl2) == gl2.center() == Subspace.span([[1, 0, 0, 1]], 4)
    n, _ = nilradical(s2)
    assert n == Subspace.span([[0, 1]], 2)


def test_nilpotency_index(fx, sl2, gl2, h3):
    assert nilradical(h3) == (h3.full(), 3)
    assert nilradical(gl2)[1] == 2
    assert nilradical(fx["abelian2"].algebra)[1] == 2
    assert nilradical(sl2) == (sl2.zero(), 1)
    n, p = nilradical(fx["sl2_semidirect_q2"].algebra)
    assert n.dim == 2 and p == 2


def test_series(h3, sl2):
    assert [s.dim for s in lower_central_series(h3)] == [3, 1, 0]
    assert [s.dim for s in derived_series(h3)] == [3, 1, 0]
    assert [s.dim for s in derived_series(sl2)] == [3]


@pytest.mark.parametrize("name", ["sl2", "gl2", "heisenberg_h3", "sl2_semidirect_q2", "2gl2_s3graded", "solvable2"])
def test_levi_postconditions(fx, name):
    L = fx[name].algebra
    b, s = levi_decomposition(L)
    r = solvable_radical(L)
    n, _ = nilradical(L)
    assert L.is_subalgebra(b) and b.dim + r.dim == L.dim
    assert subspace_sum(b, r).dim == L.dim
    assert subspace_sum(s, n) == r
    assert all(not any(L.bracket(x, y)) for x in b.basis for y in s.basis)


def test_annihilator_examples(sl2, h3):
    assert annihilator(sl2, sl2.full(), sl2.zero()).is_zero()
    assert annihilator(h3, h3.full(), h3.zero()) == h3.center()
    assert annihilator(h3, h3.center(), h3.zero()) == h3.full()
    with pytest.raises(NotNested):
        annihilator(h3, h3.center(), h3.full())


def test_direct_sum_blocks(sl2, h3):
    s = direct_sum(sl2, h3)
    assert s.dim == 6 and validate(s) == []
    a, b = summand_subspaces([sl2, h3])
    assert s.is_ideal(a) and s.is_ideal(b)
    assert all(not any(s.bracket(x, y)) for x in a.basis for y in b.basis)
    assert nilradical(s)[0] == b


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(["sl2", "gl2", "heisenberg_h3", "solvable2"]), st.data())
def test_structure_invariant_under_basis_change(fx, name, data):
    L = fx[name].algebra
    p = data.draw(invertible(L.dim))
    M = change_basis(L, p)
    assert validate(M) == []
    assert M.is_semisimple() == L.is_semisimple()
    assert solvable_radical(M).dim == solvable_radical(L).dim
    assert nilradical(M)[0].dim == nilradical(L)[0].dim
    assert nilradical(M)[1] == nilradical(L)[1]
    assert M.center().dim == L.center().dim
