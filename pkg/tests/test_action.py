from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codimlab.action import (
    Grading,
    GroupSpec,
    NonHomogeneous,
    NotAutomorphism,
    RelationViolated,
    custom_action,
    direct_sum_action,
    from_grading,
    from_group_action,
    invariant,
    trivial_action,
    verify_module_algebra,
)
from codimlab.exactla import Subspace, identity, matmul
from codimlab.fixtures import s3_group
from codimlab.liecore import LieAlgebra

GL2_TRANSPOSE = [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]


def _sum(mats):
    d = len(mats[0])
    return tuple(tuple(sum((m[i][j] for m in mats), Fraction(0)) for j in range(d)) for i in range(d))


@pytest.mark.parametrize("name", ["gl2_z2graded", "gl4sub_s3graded", "2gl2_s3graded"])
def test_grading_projections(fx, name):
    f = fx[name]
    a = f.action_spec()
    ops = a.operators
    assert a.origin == "dual_group_algebra"
    for p in ops:
        assert matmul(p, p) == p
    assert _sum(ops) == identity(f.algebra.dim)
    assert verify_module_algebra(f.algebra, a) == []


def test_s3_component_dimensions(fx):
    g = fx["gl4sub_s3graded"].grading
    dims = {g.group.name(s): len(g.component(s)) for s in g.support()}
    assert dims == {"e": 4, "(12)": 2, "(23)": 2}


def test_s3_group_is_nonabelian():
    g = s3_group()
    assert not g.is_abelian()
    assert g.generated_subgroup([g.normalize("(12)"), g.normalize("(23)")]) == frozenset(range(6))
    assert len(g.generated_subgroup([g.normalize("(123)")])) == 3


def test_non_homogeneous_grading_rejected(gl2):
    bad = Grading.make(GroupSpec.cyclic(2, ["0", "1"]), ["0", "1", "0", "0"])
    with pytest.raises(NonHomogeneous):
        bad.check(gl2)
    with pytest.raises(NonHomogeneous):
        from_grading(gl2, bad)


def test_psi_action(fx):
    f = fx["gl2_psi_action"]
    a = f.action_spec()
    assert a.origin == "group_algebra" and a.h_dim == 2
    assert verify_module_algebra(f.algebra, a) == []
    psi = a.element_operators[1]
    assert [psi[i][i] for i in range(4)] == [1, -1, -1, 1]


def test_transpose_needs_sign_twist(gl2):
    z2 = GroupSpec.cyclic(2, ["0", "1"])
    with pytest.raises(NotAutomorphism) as exc:
        from_group_action(gl2, z2, {"1": GL2_TRANSPOSE})
    assert exc.value.args[1] is not None
    twisted = GroupSpec.from_table(z2.table, z2.names, g0=[True, False])
    a = from_group_action(gl2, twisted, {"1": GL2_TRANSPOSE})
    assert verify_module_algebra(gl2, a) == []
    m = a.element_operators[1]
    assert m[1][2] == -1 and m[0][0] == -1


def test_relation_violated(gl2):
    z2 = GroupSpec.cyclic(2, ["0", "1"])
    scale = [[2 if i == j else 0 for j in range(4)] for i in range(4)]
    with pytest.raises(RelationViolated):
        from_group_action(gl2, z2, {"1": scale})


def test_custom_e0e1_action(fx):
    f = fx["gl2_e0e1_action"]
    a = f.action_spec()
    assert a.origin == "custom" and a.h_dim == 2
    assert verify_module_algebra(f.algebra, a) == []


def test_custom_action_law_violation(gl2):
    e0 = [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]]
    e1 = [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]
    # a primitive-like coproduct is wrong for these projections
    a = custom_action(4, [e0, e1], [{(0, 0): 1}, {(1, 1): 1}], (1, 0))
    assert verify_module_algebra(gl2, a)


def test_custom_action_rejects_dependent_operators():
    with pytest.raises(ValueError):
        custom_action(2, [[[1, 0], [0, 1]], [[2, 0], [0, 2]]])


def test_invariant_subspaces(fx, gl2):
    swap = fx["sl2sl2_swap"]
    a = swap.action_spec()
    diag = Subspace.span([[int(i == j) + int(i == j + 3) for i in range(6)] for j in range(3)], 6)
    assert invariant(a, diag)
    assert not invariant(a, Subspace.coordinate(6, range(3)))
    t = trivial_action(4)
    assert invariant(t, Subspace.span([[1, 2, 3, 4]], 4))
    psi = fx["gl2_psi_action"].action_spec()
    assert invariant(psi, gl2.center())


def test_direct_sum_action_blocks():
    a = direct_sum_action([trivial_action(2), trivial_action(3)])
    assert a.dim == 5 and a.operators[0] == identity(5)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=4, max_size=4))
def test_random_z2_degree_vectors(degs):
    L = LieAlgebra.from_brackets(4, {(0, 1): {1: 1}, (0, 2): {2: -1}, (1, 2): {0: 1, 3: -1}, (1, 3): {1: 1}, (2, 3): {2: -1}})
    g = Grading.make(GroupSpec.cyclic(2, ["0", "1"]), [str(x) for x in degs])
    homogeneous = degs[0] == degs[3] == 0 and degs[1] == degs[2]
    if homogeneous:
        a = from_grading(L, g)
        assert verify_module_algebra(L, a) == []
    else:
        with pytest.raises(NonHomogeneous):
            g.check(L)
