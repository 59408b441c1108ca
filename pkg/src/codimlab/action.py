"""Gradings, group actions and Hopf actions as finite lists of operators.

Every action is reduced to :class:`ActionSpec`: a linearly independent list
of dim x dim matrices spanning the image of H in End(L), optionally with the
comultiplication written on that basis.  Matrices use the column convention
of :meth:`LieAlgebra.ad`: ``M[r][c]`` is the coefficient of e_r in M e_c.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .exactla import Subspace, as_fraction, identity, matmul, matvec, solve
from .liecore import LieAlgebra

__all__ = [
    "GroupSpec",
    "Grading",
    "ActionSpec",
    "NonHomogeneous",
    "NotAutomorphism",
    "RelationViolated",
    "MissingComultiplication",
    "trivial_action",
    "from_grading",
    "from_group_action",
    "custom_action",
    "verify_module_algebra",
    "invariant",
    "direct_sum_action",
]


class NonHomogeneous(ValueError):
    pass


class NotAutomorphism(ValueError):
    pass


class RelationViolated(ValueError):
    pass


class MissingComultiplication(ValueError):
    pass


def _mat(m) -> tuple:
    return tuple(tuple(as_fraction(x) for x in row) for row in m)


@dataclass(frozen=True)
class GroupSpec:
    """A finite group by multiplication table, or a finitely generated abelian group.

    Table elements are indices 0..order-1; abelian elements are integer
    tuples reduced modulo ``invariants`` (0 means an infinite cyclic factor).
    """

    kind: str
    table: tuple = ()
    names: tuple = ()
    g0: tuple = ()
    invariants: tuple = ()

    @classmethod
    def from_table(cls, table, names=None, g0=None) -> "GroupSpec":
        t = tuple(tuple(int(x) for x in row) for row in table)
        n = len(t)
        names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        g0 = tuple(bool(x) for x in g0) if g0 is not None else (True,) * n
        g = cls("table", t, names, g0)
        g._check()
        return g

    @classmethod
    def abelian(cls, invariants) -> "GroupSpec":
        inv = tuple(int(x) for x in invariants)
        if any(x < 0 for x in inv):
            raise ValueError("invariants must be non-negative")
        return cls("abelian", invariants=inv)

    @classmethod
    def cyclic(cls, n: int, names=None) -> "GroupSpec":
        return cls.from_table([[(i + j) % n for j in range(n)] for i in range(n)], names)

    def _check(self) -> None:
        n = len(self.table)
        if len(self.names) != n or len(self.g0) != n or len(set(self.names)) != n:
            raise ValueError("names/g0 length must equal the group order")
        if any(len(r) != n or any(not 0 <= x < n for x in r) for r in self.table):
            raise ValueError("multiplication table is not n x n over 0..n-1")
        t = self.table
        ids = [e for e in range(n) if all(t[e][a] == a and t[a][e] == a for a in range(n))]
        if len(ids) != 1:
            raise ValueError("table has no identity")
        e = ids[0]
        for a in range(n):
            if not any(t[a][b] == e for b in range(n)):
                raise ValueError(f"element {self.names[a]} has no inverse")
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValueError(f"table not associative at {a},{b},{c}")
        sub = [a for a in range(n) if self.g0[a]]
        if not self.g0[e] or any(not self.g0[t[a][b]] for a in sub for b in sub):
            raise ValueError("G0 is not a subgroup")
        if 2 * len(sub) < n:
            raise ValueError("G0 must have index at most 2")

    @property
    def is_finite(self) -> bool:
        return self.kind == "table" or all(self.invariants)

    @property
    def identity(self):
        if self.kind == "table":
            t = self.table
            return next(e for e in range(len(t)) if all(t[e][a] == a for a in range(len(t))))
        return (0,) * len(self.invariants)

    def normalize(self, g):
        if self.kind == "table":
            if isinstance(g, str):
                if g not in self.names:
                    raise ValueError(f"unknown group element {g!r}")
                return self.names.index(g)
            g = int(g)
            if not 0 <= g < len(self.table):
                raise ValueError(f"group element {g} out of range")
            return g
        g = tuple(int(x) for x in g)
        if len(g) != len(self.invariants):
            raise ValueError(f"group element {g} has wrong length")
        return tuple(x % m if m else x for x, m in zip(g, self.invariants))

    def mul(self, a, b):
        if self.kind == "table":
            return self.table[a][b]
        return self.normalize(tuple(x + y for x, y in zip(a, b)))

    def elements(self) -> list:
        if self.kind == "table":
            return list(range(len(self.table)))
        if not self.is_finite:
            raise ValueError("infinite group has no element list")
        return [tuple(t) for t in product(*(range(m) for m in self.invariants))]

    def name(self, g) -> str:
        if self.kind == "table":
            return self.names[g]
        return ",".join(str(x) for x in g)

    def in_g0(self, g) -> bool:
        return self.g0[g] if self.kind == "table" else True

    def sort_key(self, g):
        return g

    def is_abelian(self) -> bool:
        if self.kind == "abelian":
            return True
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(len(t)) for b in range(len(t)))

    def commute(self, a, b) -> bool:
        return self.mul(a, b) == self.mul(b, a)

    def generated_subgroup(self, gens) -> frozenset:
        """Subgroup generated by ``gens`` (finite groups only)."""
        e = self.identity
        seen = {e}
        queue = deque([e])
        while queue:
            x = queue.popleft()
            for s in gens:
                y = self.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)


@dataclass(frozen=True)
class Grading:
    group: GroupSpec
    degrees: tuple

    @classmethod
    def make(cls, group: GroupSpec, degrees) -> "Grading":
        return cls(group, tuple(group.normalize(g) for g in degrees))

    def support(self) -> list:
        return sorted(set(self.degrees), key=self.group.sort_key)

    def component(self, g) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == g]

    def check(self, L: LieAlgebra) -> None:
        """Raise NonHomogeneous at the first bracket leaving its component."""
        if len(self.degrees) != L.dim:
            raise NonHomogeneous(f"{len(self.degrees)} degrees for dim {L.dim}")
        for i in range(L.dim):
            for j in range(L.dim):
                target = self.group.mul(self.degrees[i], self.degrees[j])
                for k, x in enumerate(L.c[i][j]):
                    if x and self.degrees[k] != target:
                        raise NonHomogeneous(f"[{L.basis_names[i]}, {L.basis_names[j]}] has a component outside degree {self.group.name(target)}", (i, j))


@dataclass(frozen=True)
class ActionSpec:
    """Effective basis of the image of H in End(L).

    ``comultiplication[i]`` maps (j, k) to the coefficient of
    gamma_j (x) gamma_k in Delta(gamma_i).  ``named`` expresses labels (group
    elements, component names) as coefficient vectors over ``operators``.
    """

    dim: int
    operators: tuple
    comultiplication: tuple | None = None
    counit: tuple | None = None
    origin: str = "custom"
    names: tuple = ()
    named: Mapping = field(default_factory=dict, compare=False, hash=False)
    group: GroupSpec | None = None
    grading: Grading | None = None
    element_operators: tuple = field(default=(), compare=False, hash=False)

    @property
    def h_dim(self) -> int:
        return len(self.operators)

    def label_index(self, label) -> int:
        if isinstance(label, int) and not isinstance(label, bool):
            if not 0 <= label < self.h_dim:
                raise IndexError(f"label {label} out of range for {self.h_dim} operators")
            return label
        if label in self.names:
            return self.names.index(label)
        raise KeyError(f"unknown label {label!r}")

    def expand_label(self, label) -> dict[int, Fraction]:
        """Label as a combination {operator index: coefficient}."""
        if isinstance(label, str) and label in self.named:
            return {i: c for i, c in enumerate(self.named[label]) if c}
        return {self.label_index(label): Fraction(1)}


def _flat(m) -> tuple:
    return tuple(x for row in m for x in row)


def _independent(mats: Sequence) -> tuple[list[int], list[tuple]]:
    """Indices of a greedy independent subset and coordinates of every matrix in it."""
    chosen: list[int] = []
    span = None
    for i, m in enumerate(mats):
        f = _flat(m)
        if not any(f):
            continue
        if span is None or not span.contains(f):
            chosen.append(i)
            span = Subspace.span([_flat(mats[j]) for j in chosen], len(f))
    coords = []
    for m in mats:
        f = _flat(m)
        if not chosen:
            coords.append(())
            continue
        a = [tuple(_flat(mats[j])[r] for j in chosen) for r in range(len(f))]
        coords.append(solve(a, f))
    return chosen, coords


def trivial_action(dim: int) -> ActionSpec:
    return ActionSpec(
        dim=dim,
        operators=(identity(dim),),
        comultiplication=({(0, 0): Fraction(1)},),
        counit=(Fraction(1),),
        origin="trivial",
        names=("1",),
    )


def custom_action(dim: int, operators, comultiplication=None, counit=None, names=None) -> ActionSpec:
    """Action from explicit operators; they must be linearly independent."""
    ops = tuple(_mat(m) for m in operators)
    for m in ops:
        if len(m) != dim or any(len(r) != dim for r in m):
            raise ValueError("operator has wrong shape")
    chosen, _ = _independent(ops)
    if len(chosen) != len(ops):
        raise ValueError("operators are linearly dependent; supply a basis of their span")
    comul = None
    if comultiplication is not None:
        comul = tuple({(int(j), int(k)): as_fraction(x) for (j, k), x in dict(c).items() if as_fraction(x)} for c in comultiplication)
        if len(comul) != len(ops):
            raise ValueError("comultiplication needs one entry per operator")
    cu = tuple(as_fraction(x) for x in counit) if counit is not None else None
    names = tuple(names) if names is not None else tuple(f"h{i}" for i in range(len(ops)))
    return ActionSpec(dim, ops, comul, cu, "custom", names)


def from_grading(L: LieAlgebra, g: Grading) -> ActionSpec:
    """One projection per support element, with Delta(h_g) = sum over g1 g2 = g."""
    g.check(L)
    supp = g.support()
    ops = []
    for s in supp:
        ops.append(tuple(tuple(Fraction(int(r == c and g.degrees[c] == s)) for c in range(L.dim)) for r in range(L.dim)))
    comul = []
    for s in supp:
        terms = {}
        for j, a in enumerate(supp):
            for k, b in enumerate(supp):
                if g.group.mul(a, b) == s:
                    terms[j, k] = Fraction(1)
        comul.append(terms)
    e = g.group.identity
    counit = tuple(Fraction(int(s == e)) for s in supp)
    names = tuple(g.group.name(s) for s in supp)
    return ActionSpec(
        dim=L.dim,
        operators=tuple(ops),
        comultiplication=tuple(comul),
        counit=counit,
        origin="dual_group_algebra",
        names=names,
        group=g.group,
        grading=g,
    )


def _is_automorphism(L: LieAlgebra, m) -> tuple | None:
    """First basis pair (i, j) with m[e_i, e_j] != [m e_i, m e_j], else None."""
    imgs = [tuple(m[r][c] for r in range(L.dim)) for c in range(L.dim)]
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            if matvec(m, L.c[i][j]) != L.bracket(imgs[i], imgs[j]):
                return (i, j)
    return None


def from_group_action(L: LieAlgebra, group: GroupSpec, generator_matrices: Mapping) -> ActionSpec:
    """Close the generator matrices under products and twist elements outside G0 by -1.

    ``generator_matrices`` maps group elements (names or indices) to the
    matrices of their (anti-)automorphisms.  Operators are the effective
    basis of the span of all element matrices.
    """
    if not group.is_finite:
        raise ValueError("group actions need a finite group")
    d = L.dim
    gens = {}
    for k, m in generator_matrices.items():
        g = group.normalize(k)
        mm = _mat(m)
        if len(mm) != d or any(len(r) != d for r in mm):
            raise ValueError(f"matrix for {group.name(g)} has wrong shape")
        sign = 1 if group.in_g0(g) else -1
        gens[g] = tuple(tuple(sign * x for x in row) for row in mm)
    e = group.identity
    if e in gens and gens[e] != identity(d):
        raise RelationViolated("identity element must act as the identity")
    mats = {e: identity(d)}
    queue = deque([e])
    while queue:
        a = queue.popleft()
        for s, ms in gens.items():
            b = group.mul(a, s)
            mb = matmul(mats[a], ms)
            if b in mats:
                if mats[b] != mb:
                    raise RelationViolated(f"two products give different matrices for {group.name(b)}")
            else:
                mats[b] = mb
                queue.append(b)
    elems = group.elements()
    missing = [g for g in elems if g not in mats]
    if missing:
        raise RelationViolated(f"generators do not reach {group.name(missing[0])}")
    for g in elems:
        bad = _is_automorphism(L, mats[g])
        if bad is not None:
            i, j = bad
            raise NotAutomorphism(f"{group.name(g)} (after sign twist) fails on ({L.basis_names[i]}, {L.basis_names[j]})", bad)
    ordered = [mats[g] for g in elems]
    chosen, coords = _independent(ordered)
    ops = tuple(ordered[i] for i in chosen)
    comul = None
    if len(chosen) == len(elems):
        comul = tuple({(t, t): Fraction(1)} for t in range(len(ops)))
    return ActionSpec(
        dim=d,
        operators=ops,
        comultiplication=comul,
        counit=tuple(Fraction(1) for _ in ops) if comul else None,
        origin="group_algebra",
        names=tuple(group.name(elems[i]) for i in chosen),
        named={group.name(g): coords[t] for t, g in enumerate(elems)},
        group=group,
        element_operators=tuple(ordered),
    )


def verify_module_algebra(L: LieAlgebra, a: ActionSpec) -> list[tuple]:
    """Violations (operator index, i, j) of h[e_i, e_j] = sum mu [gamma_j e_i, gamma_k e_j].

    Group actions whose element matrices are dependent carry no
    comultiplication on the reduced basis; for them the check is the
    automorphism law for every element matrix.
    """
    if a.comultiplication is None:
        if a.origin == "group_algebra" and a.element_operators:
            out = []
            for t, m in enumerate(a.element_operators):
                bad = _is_automorphism(L, m)
                if bad is not None:
                    out.append((t,) + bad)
            return out
        raise MissingComultiplication("action has no comultiplication data")
    d = L.dim
    e = [L.basis_vector(i) for i in range(d)]
    imgs = [[matvec(op, e[i]) for i in range(d)] for op in a.operators]
    out = []
    for h, op in enumerate(a.operators):
        for i in range(d):
            for j in range(d):
                lhs = matvec(op, L.c[i][j])
                rhs = [Fraction(0)] * d
                for (p, q), mu in a.comultiplication[h].items():
                    br = L.bracket(imgs[p][i], imgs[q][j])
                    rhs = [x + mu * y for x, y in zip(rhs, br)]
                if tuple(rhs) != lhs:
                    out.append((h, i, j))
    return out


def invariant(a: ActionSpec, u: Subspace) -> bool:
    return all(u.contains(matvec(op, v)) for op in a.operators for v in u.basis)


def direct_sum_action(actions: Sequence[ActionSpec]) -> ActionSpec:
    """Block-diagonal action of one H on a direct sum; operators are paired by index."""
    if not actions:
        raise ValueError("no summands")
    m = actions[0].h_dim
    if any(x.h_dim != m for x in actions):
        raise ValueError("summand actions use different numbers of operators")
    dims = [x.dim for x in actions]
    d = sum(dims)
    ops = []
    for t in range(m):
        rows = [[Fraction(0)] * d for _ in range(d)]
        off = 0
        for x in actions:
            blk = x.operators[t]
            for r in range(x.dim):
                for c in range(x.dim):
                    rows[off + r][off + c] = blk[r][c]
            off += x.dim
        ops.append(tuple(tuple(r) for r in rows))
    first = actions[0]
    comul = first.comultiplication if all(x.comultiplication == first.comultiplication for x in actions) else None
    origin = first.origin if all(x.origin == first.origin for x in actions) else "custom"
    chosen, _ = _independent(ops)
    if len(chosen) != m:
        raise ValueError("summed operators are dependent")
    return ActionSpec(d, tuple(ops), comul, first.counit, origin, first.names, dict(first.named), first.group)
