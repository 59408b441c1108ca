from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codimlab.action import custom_action, from_group_action, trivial_action
from codimlab.codim import codim_ordinary
from codimlab.exactla import Subspace, identity
from codimlab.exponent import (
    CertificateRejected,
    ExponentCertificate,
    NotHNiceDetected,
    check_certificate,
    condition2_check,
    d_search,
    empirical_exponent,
    exponent,
    simplicity_criterion,
    sum_rule_check,
)
from codimlab.liecore import direct_sum, nilradical, summand_subspaces

EXPECTED = {
    "sl2": (3, "semisimple"),
    "gl2": (3, "search"),
    "heisenberg_h3": (0, "search"),
    "abelian2": (0, "search"),
    "solvable2": (1, "search"),
    "gl2_z2graded": (3, "search"),
    "gl2_psi_action": (3, "search"),
    "gl2_e0e1_action": (3, "search"),
    "sl2sl2_swap": (6, "semisimple"),
    "sl2_semidirect_q2": (3, "search"),
    "gl4sub_s3graded": (3, "search"),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_exponent_values_and_certificates(fx, name):
    f = fx[name]
    a = f.action_spec()
    rep = exponent(f.algebra, a)
    assert (rep.d, rep.method) == EXPECTED[name]
    assert rep.exactness == "exact"
    if rep.d == 0:
        assert rep.certificate is None
    else:
        assert check_certificate(f.algebra, a, rep.certificate) == rep.d
    n, _ = nilradical(f.algebra)
    assert rep.d <= f.algebra.dim - n.dim


def test_swap_glues_the_two_copies(fx):
    # without the swap the two sl2 summands count separately
    L = fx["sl2sl2_swap"].algebra
    assert exponent(L).d == 3


@pytest.fixture(scope="module")
def gl2_cert(fx):
    L = fx["gl2"].algebra
    return L, exponent(L).certificate


def _vecs(rows, d=4):
    return Subspace.span(rows, d)


E11, E12, E21, E22 = ([int(i == k) for i in range(4)] for k in range(4))
CENTER = [1, 0, 0, 1]


def _rejects(L, a, cert, fragment):
    with pytest.raises(CertificateRejected) as exc:
        check_certificate(L, a, cert)
    assert fragment in exc.value.reason
    return exc.value


def test_reject_length_mismatch(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, powers=[0, 0]), "differ in length")


def test_reject_j_not_in_i(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, pairs=[(L.center(), L.full())]), "is not inside")


def test_reject_not_ideal(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, pairs=[(_vecs([E11]), L.zero())]), "is not an ideal")


def test_reject_not_h_invariant(fx):
    f = fx["sl2sl2_swap"]
    L, a = f.algebra, f.action_spec()
    first = summand_subspaces([L.subalgebra([0, 1, 2]), L.subalgebra([3, 4, 5])])[0]
    cert = ExponentCertificate([(first, L.zero())], [first], [0])
    _rejects(L, a, cert, "is not H-invariant")


def test_reject_reducible_factor(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, pairs=[(L.full(), L.zero())], complements=[L.full()]), "not irreducible")


def test_reject_not_complement(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, complements=[_vecs([E12])]), "not a complement")


def test_reject_complement_not_h_invariant(fx, gl2_cert):
    L, c = gl2_cert
    a = fx["gl2_psi_action"].action_spec()
    t = _vecs([[1, 1, 0, 0], E21, [1, 0, 0, -1]])
    _rejects(L, a, replace(c, complements=[t]), "T_1 is not H-invariant")


def test_reject_complement_not_levi_stable(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, complements=[_vecs([E11, E12, E21])]), "Levi")


def test_reject_negative_power(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, powers=[-1]), "negative")


def test_reject_vanishing_bracket(gl2_cert):
    L, c = gl2_cert
    z = L.center()
    sl = _vecs([E12, E21, [1, 0, 0, -1]])
    cert = ExponentCertificate([(L.full(), z), (z, L.zero())], [sl, z], [0, 0])
    err = _rejects(L, None, cert, "vanishes")
    assert err.witness == (0, 0)


def test_reject_bad_witness(gl2_cert):
    L, c = gl2_cert
    _rejects(L, None, replace(c, witness=(tuple(CENTER),)), "outside")
    _rejects(L, None, replace(c, witness=((0, 0, 0, 0),)), "zero")


def test_empty_certificate_gives_zero(sl2):
    assert check_certificate(sl2, None, ExponentCertificate()) == 0


def test_condition2_examples(sl2, h3, fx):
    assert condition2_check(sl2, [sl2.full()]).satisfiable
    s = fx["sl2sl2_swap"].algebra
    a, b = Subspace.coordinate(6, range(3)), Subspace.coordinate(6, range(3, 6))
    assert not condition2_check(s, [a, b]).satisfiable
    res = condition2_check(s, [a, a])
    assert res.satisfiable and res.powers == (0, 0) and len(res.witness) == 2
    z = h3.center()
    assert not condition2_check(h3, [z, z]).satisfiable
    # a single nonzero T is always fine with q = 0
    assert condition2_check(h3, [z]).powers == (0,)


def test_condition2_uses_powers(fx):
    L = fx["sl2_semidirect_q2"].algebra
    v = Subspace.coordinate(5, [3, 4])
    full = L.full()
    # [T, L^0] = V with V abelian: the pair (V, V) needs nothing from q but still dies
    assert not condition2_check(L, [v, v]).satisfiable
    assert condition2_check(L, [full, v]).satisfiable


def test_not_h_nice_detected(fx):
    L = fx["sl2_semidirect_q2"].algebra
    d = L.ad(L.basis_vector(3))
    a = custom_action(5, [identity(5), d], [{(0, 0): 1}, {(1, 0): 1, (0, 1): 1}], (1, 0))
    with pytest.raises(NotHNiceDetected):
        exponent(L, a)


def test_sum_rule(sl2, gl2, h3, fx):
    assert sum_rule_check([sl2, h3]) == []
    assert sum_rule_check([sl2, sl2]) == []
    assert sum_rule_check([gl2, h3]) == []
    assert exponent(direct_sum(sl2, sl2)).d == 3
    assert exponent(direct_sum(gl2, h3)).d == 3
    assert exponent(direct_sum(h3, fx["abelian2"].algebra)).d == 0


def test_simplicity_verdicts(fx, sl2, gl2):
    v = simplicity_criterion(sl2)
    assert v == type(v)(True, True, True)
    swap = fx["sl2sl2_swap"]
    assert simplicity_criterion(swap.algebra, swap.action_spec()) == type(v)(True, True, True)
    plain = simplicity_criterion(swap.algebra)
    assert plain == type(v)(False, True, False) and plain.consistent
    g = simplicity_criterion(gl2)
    assert not g.d_equals_dim and not g.semisimple and g.consistent


def test_empirical_exponent(sl2):
    vals = [codim_ordinary(sl2, n).value for n in range(1, 7)]
    rows = empirical_exponent(vals, 3)
    assert all(r["within_bound"] for r in rows)
    assert [r["c_n"] for r in rows] == vals
    zeros = empirical_exponent([1, 1, 0, 0], 3)
    assert zeros[-1]["root"] == "0.0000"
    with pytest.raises(ValueError):
        empirical_exponent([1], 3)


def test_search_budget(gl2):
    from codimlab.exponent import SearchBudgetExceeded

    with pytest.raises(SearchBudgetExceeded):
        d_search(gl2, trivial_action(4), budget=0)


SMALL = ["sl2", "heisenberg_h3", "abelian2", "solvable2", "gl2"]


@settings(max_examples=8, deadline=None)
@given(st.sampled_from(SMALL), st.sampled_from(SMALL))
def test_exponent_of_sum_is_max(fx, x, y):
    L, M = fx[x].algebra, fx[y].algebra
    assert exponent(direct_sum(L, M)).d == max(exponent(L).d, exponent(M).d)


def test_group_action_exponent_matches_grading(fx):
    # the psi action and the Z2-grading of gl2 have the same invariant ideals
    f = fx["gl2_psi_action"]
    a = from_group_action(f.algebra, f.action.group, f.action.matrices)
    assert exponent(f.algebra, a).d == exponent(fx["gl2_z2graded"].algebra, fx["gl2_z2graded"].action_spec()).d
