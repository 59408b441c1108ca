import random
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from codimlab.polyid import (
    MultilinearHPolynomial,
    eval_monomial,
    eval_polynomial,
    is_identity,
    regev_matrix_unit_values,
    regev_polynomial,
)


def direct_eval(L, ops, perm, labels):
    """Oracle: loop over all substitutions and bracket Fraction vectors."""
    d, n = L.dim, len(perm)
    out = []

    def rec(prefix):
        if len(prefix) == n:
            vecs = []
            for t in range(n):
                e = [Fraction(int(k == prefix[perm[t] - 1])) for k in range(d)]
                if ops is not None:
                    m = ops[labels[t]]
                    e = [sum((m[r][c] * e[c] for c in range(d)), Fraction(0)) for r in range(d)]
                vecs.append(e)
            acc = vecs[0]
            for v in vecs[1:]:
                acc = L.bracket(acc, v)
            out.extend(acc)
            return
        for i in range(d):
            rec(prefix + [i])

    rec([])
    return tuple(out)


perms = st.integers(1, 4).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["sl2", "gl2", "heisenberg_h3", "sl2_semidirect_q2"]), perms)
def test_monomial_matches_direct_recursion(fx, name, perm):
    L = fx[name].algebra
    assert eval_monomial(L, None, perm) == direct_eval(L, None, perm, None)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["gl2_z2graded", "gl2_psi_action", "gl2_e0e1_action"]), perms, st.data())
def test_labelled_monomial_matches_direct_recursion(fx, name, perm, data):
    f = fx[name]
    a = f.action_spec()
    labels = data.draw(st.lists(st.integers(0, a.h_dim - 1), min_size=len(perm), max_size=len(perm)))
    assert eval_monomial(f.algebra, a, perm, labels) == direct_eval(f.algebra, a.operators, perm, labels)


def test_anticommutativity_and_jacobi(fx):
    for f in fx.values():
        L = f.algebra
        anti = MultilinearHPolynomial.make(2, [(1, (1, 2), (0, 0)), (1, (2, 1), (0, 0))])
        assert is_identity(L, None, anti)
        jac = MultilinearHPolynomial.make(3, [(1, (1, 2, 3), (0,) * 3), (1, (2, 3, 1), (0,) * 3), (1, (3, 1, 2), (0,) * 3)])
        assert is_identity(L, None, jac)


def test_identity_examples(sl2, h3, fx):
    x1x2 = MultilinearHPolynomial.monomial((1, 2))
    assert is_identity(fx["abelian2"].algebra, None, x1x2)
    assert is_identity(h3, None, MultilinearHPolynomial.monomial((1, 2, 3)))
    res = is_identity(sl2, None, x1x2)
    assert not res.holds and res.witness is not None
    e = [sl2.basis_vector(i) for i in range(3)]
    assert res.value == sl2.bracket(e[res.witness[0]], e[res.witness[1]])


def test_graded_identity_by_component_names(fx):
    f = fx["gl2_z2graded"]
    a = f.action_spec()
    # [x^(0)_1, x^(0)_2] vanishes only on the diagonal part, which is abelian
    even = MultilinearHPolynomial.make(2, [(1, (1, 2), ("0", "0"))])
    odd = MultilinearHPolynomial.make(2, [(1, (1, 2), ("1", "1"))])
    assert is_identity(f.algebra, a, even)
    assert not is_identity(f.algebra, a, odd)


def test_polynomial_is_linear(sl2):
    rng = random.Random(3)
    for _ in range(5):
        terms = [(rng.randint(-3, 3), p, (0, 0, 0)) for p in permutations((1, 2, 3))]
        f = MultilinearHPolynomial.make(3, terms)
        want = [Fraction(0)] * 81
        for c, p, lb in f.terms:
            want = [w + c * x for w, x in zip(want, eval_monomial(sl2, None, p, lb))]
        assert eval_polynomial(sl2, None, f) == tuple(want)


def test_bad_permutation_rejected():
    with pytest.raises(ValueError):
        MultilinearHPolynomial.make(3, [(1, (1, 1, 2), (0, 0, 0))])


def test_regev_q1():
    assert regev_polynomial(1) == [(1, (("x", 1), ("y", 1)))]


def test_regev_q2_shape():
    words = regev_polynomial(2)
    assert len(words) == 576
    assert all(len(w) == 8 for _, w in words)
    assert sum(s for s, _ in words) == 0


def test_regev_values_central_and_nonzero():
    grid, values = regev_matrix_unit_values(2)
    assert values.shape == (65536, 2, 2)
    off = values[:, 0, 1] != 0
    off |= values[:, 1, 0] != 0
    assert not off.any()
    assert (values[:, 0, 0] == values[:, 1, 1]).all()
    assert np.count_nonzero(values[:, 0, 0]) > 0


def test_regev_values_against_sympy_products():
    grid, values = regev_matrix_unit_values(2)
    units = []
    for r in range(2):
        for c in range(2):
            m = sympy.zeros(2, 2)
            m[r, c] = 1
            units.append(m)
    words = regev_polynomial(2)
    nz = np.flatnonzero(values[:, 0, 0])
    picks = [int(nz[0]), int(nz[-1]), 0, 12345]
    for s in picks:
        env = {("x", i): units[grid[s][i - 1]] for i in range(1, 5)}
        env.update({("y", i): units[grid[s][3 + i]] for i in range(1, 5)})
        total = sympy.zeros(2, 2)
        for sign, w in words:
            prod = sympy.eye(2)
            for v in w:
                prod = prod * env[v]
            total += sign * prod
        assert total.tolist() == values[s].tolist()
