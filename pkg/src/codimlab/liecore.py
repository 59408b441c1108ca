"""Lie algebras by structure constants and their structure theory."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .exactla import (
    AmbientMismatch,
    Subspace,
    as_fraction,
    identity,
    kernel,
    matmul,
    rref,
    solve,
    subspace_intersect,
    subspace_sum,
)
from . import modspin

__all__ = [
    "LieAlgebra",
    "StructureReport",
    "LeviLiftFailed",
    "NotNested",
    "validate",
    "bracket_subspaces",
    "solvable_radical",
    "nilradical",
    "levi_decomposition",
    "annihilator",
    "direct_sum",
    "structure_report",
]


class LeviLiftFailed(RuntimeError):
    pass


class NotNested(ValueError):
    pass


class LieAlgebra:
    """Finite-dimensional algebra over Q with [e_i, e_j] = sum_k c[i][j][k] e_k.

    The constructor does not check the Lie axioms; see :func:`validate`.
    """

    def __init__(self, structure_constants, basis_names: Sequence[str] | None = None, name: str = ""):
        c = tuple(tuple(tuple(as_fraction(x) for x in row) for row in plane) for plane in structure_constants)
        self.dim = len(c)
        for plane in c:
            if len(plane) != self.dim or any(len(r) != self.dim for r in plane):
                raise ValueError("structure constants must have shape dim x dim x dim")
        self.c = c
        self.basis_names = tuple(basis_names) if basis_names is not None else tuple(f"e{i}" for i in range(self.dim))
        if len(self.basis_names) != self.dim:
            raise ValueError("basis_names length differs from dim")
        self.name = name

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, basis_names=None, name: str = "") -> "LieAlgebra":
        """Build from {(i, j): {k: coeff}}; missing (j, i) entries are filled by antisymmetry."""
        c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        given = set()
        for (i, j), out in brackets.items():
            given.add((i, j))
            for k, x in out.items():
                c[i][j][k] = as_fraction(x)
        for (i, j), out in brackets.items():
            if (j, i) not in given:
                for k, x in out.items():
                    c[j][i][k] = -as_fraction(x)
        return cls(c, basis_names, name)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name or 'unnamed'}, dim={self.dim})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def bracket(self, a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
        d = self.dim
        out = [Fraction(0)] * d
        for i, x in enumerate(a):
            if not x:
                continue
            ci = self.c[i]
            for j, y in enumerate(b):
                if not y:
                    continue
                xy = x * y
                for k, z in enumerate(ci[j]):
                    if z:
                        out[k] += xy * z
        return tuple(out)

    def basis_vector(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(i == j)) for j in range(self.dim))

    def ad(self, x: Sequence) -> tuple:
        """Matrix of ad x acting on column coordinate vectors."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return tuple(tuple(cols[j][i] for j in range(self.dim)) for i in range(self.dim))

    @cached_property
    def ad_basis(self) -> tuple:
        return tuple(self.ad(self.basis_vector(i)) for i in range(self.dim))

    def killing(self, a: Sequence, b: Sequence) -> Fraction:
        m = matmul(self.ad(a), self.ad(b))
        return sum((m[i][i] for i in range(self.dim)), Fraction(0))

    @cached_property
    def killing_matrix(self) -> tuple:
        ads = self.ad_basis
        d = self.dim
        out = []
        for i in range(d):
            row = []
            for j in range(d):
                m = matmul(ads[i], ads[j])
                row.append(sum((m[t][t] for t in range(d)), Fraction(0)))
            out.append(tuple(row))
        return tuple(out)

    def is_semisimple(self) -> bool:
        if self.dim == 0:
            return True
        return rref(self.killing_matrix)[1] == self.dim

    def full(self) -> Subspace:
        return Subspace.full(self.dim)

    def zero(self) -> Subspace:
        return Subspace.zero(self.dim)

    def is_ideal(self, u: Subspace) -> bool:
        return all(u.contains(self.bracket(self.basis_vector(i), v)) for i in range(self.dim) for v in u.basis)

    def is_subalgebra(self, u: Subspace) -> bool:
        return all(u.contains(self.bracket(a, b)) for a, b in combinations(u.basis, 2))

    def center(self) -> Subspace:
        return annihilator(self, self.full(), self.zero())

    def derived(self, u: Subspace) -> Subspace:
        return bracket_subspaces(self, u, u)

    def subalgebra(self, indices: Sequence[int], name: str = "") -> "LieAlgebra":
        """Subalgebra spanned by a subset of basis vectors (must be closed)."""
        idx = list(indices)
        pos = {i: t for t, i in enumerate(idx)}
        c = [[[Fraction(0)] * len(idx) for _ in idx] for _ in idx]
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                for k, x in enumerate(self.c[i][j]):
                    if x:
                        if k not in pos:
                            raise ValueError(f"basis subset not closed: [{i},{j}] has e{k}")
                        c[a][b][pos[k]] = x
        return LieAlgebra(c, [self.basis_names[i] for i in idx], name)

    def restricted_to(self, sub: Subspace, name: str = "") -> "LieAlgebra":
        """The subalgebra ``sub`` with structure constants in its RREF basis."""
        if not self.is_subalgebra(sub):
            raise ValueError("subspace is not a subalgebra")
        b = sub.basis
        c = [[sub.coordinates(self.bracket(x, y)) for y in b] for x in b]
        return LieAlgebra(c, [f"b{i}" for i in range(len(b))], name)

    def quotient(self, ideal: Subspace, name: str = "") -> tuple["LieAlgebra", list[int]]:
        """L/ideal on the canonical non-pivot coordinate complement."""
        free = [j for j in range(self.dim) if j not in set(ideal.pivots)]
        c = []
        for i in free:
            plane = []
            for j in free:
                w = ideal.reduce(self.c[i][j])
                plane.append(tuple(w[k] for k in free))
            c.append(plane)
        return LieAlgebra(c, [self.basis_names[j] for j in free], name), free


def validate(L: LieAlgebra) -> list[tuple]:
    """Violations of alternation and Jacobi; empty list means the constants define a Lie algebra.

    Entries are ("alternation", i, j) or ("jacobi", i, j, k).
    """
    out = []
    d = L.dim
    for i in range(d):
        if any(L.c[i][i]):
            out.append(("alternation", i, i))
        for j in range(i + 1, d):
            if any(x + y for x, y in zip(L.c[i][j], L.c[j][i])):
                out.append(("alternation", i, j))
    e = [L.basis_vector(i) for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(j + 1, d):
                a = L.bracket(e[i], L.bracket(e[j], e[k]))
                b = L.bracket(e[j], L.bracket(e[k], e[i]))
                c = L.bracket(e[k], L.bracket(e[i], e[j]))
                if any(x + y + z for x, y, z in zip(a, b, c)):
                    out.append(("jacobi", i, j, k))
    return out


def bracket_subspaces(L: LieAlgebra, u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != L.dim or v.ambient_dim != L.dim:
        raise AmbientMismatch("subspace not in L")
    return Subspace.span([L.bracket(a, b) for a in u.basis for b in v.basis], L.dim)


def derived_series(L: LieAlgebra, u: Subspace | None = None) -> list[Subspace]:
    cur = L.full() if u is None else u
    out = [cur]
    while not cur.is_zero():
        nxt = L.derived(cur)
        if nxt == cur:
            break
        out.append(nxt)
        cur = nxt
    return out


def lower_central_series(L: LieAlgebra, u: Subspace | None = None) -> list[Subspace]:
    """u, [u, u], [[u, u], u], ... until it stabilises."""
    base = L.full() if u is None else u
    cur = base
    out = [cur]
    while not cur.is_zero():
        nxt = bracket_subspaces(L, cur, base)
        if nxt == cur:
            break
        out.append(nxt)
        cur = nxt
    return out


def _killing_perp(L: LieAlgebra, u: Subspace) -> Subspace:
    km = L.killing_matrix
    rows = [tuple(sum((x * km[i][j] for i, x in enumerate(v)), Fraction(0)) for j in range(L.dim)) for v in u.basis]
    if not rows:
        return L.full()
    return Subspace.span(kernel(rows, L.dim), L.dim)


def solvable_radical(L: LieAlgebra) -> Subspace:
    """Killing-orthogonal complement of [L, L]; checked to be a solvable ideal."""
    if L.dim == 0:
        return L.zero()
    r = _killing_perp(L, L.derived(L.full()))
    if not L.is_ideal(r) or not derived_series(L, r)[-1].is_zero():
        raise ArithmeticError("radical postcondition failed")
    return r


def _trace(m) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def nilradical(L: LieAlgebra) -> tuple[Subspace, int]:
    """Largest nilpotent ideal N and the least p with N^p = 0 (N^1 = N).

    N = {x in R : tr(ad x * a) = 0 for all a in the unital envelope of ad R},
    i.e. the elements of R whose adjoint lies in the radical of that envelope.
    """
    r = solvable_radical(L)
    if r.is_zero():
        return r, 1
    ads = [L.ad(v) for v in r.basis]
    env = modspin.envelope(ads, L.dim)
    rows = []
    for a in env:
        rows.append([_trace(matmul(x, a)) for x in ads])
    coeffs = kernel(rows, len(ads))
    vecs = []
    for c in coeffs:
        v = [Fraction(0)] * L.dim
        for ci, b in zip(c, r.basis):
            if ci:
                v = [x + ci * y for x, y in zip(v, b)]
        vecs.append(v)
    n = Subspace.span(vecs, L.dim)
    lcs = lower_central_series(L, n)
    if not L.is_ideal(n) or not lcs[-1].is_zero():
        raise ArithmeticError("nilradical postcondition failed")
    lr = bracket_subspaces(L, L.full(), r)
    if not n.contains_subspace(lr):
        raise ArithmeticError("[L, R] not inside N")
    p = len(lcs) if not n.is_zero() else 1
    return n, p


def _coords(v, basis):
    """Coordinates of v in an independent list of vectors."""
    a = [tuple(b[i] for b in basis) for i in range(len(v))]
    x = solve(a, v)
    if x is None:
        raise ValueError("vector not in span")
    return x


def levi_decomposition(L: LieAlgebra) -> tuple[Subspace, Subspace]:
    """(B, S): a Levi subalgebra B and S inside the centraliser of B in R with R = S + N.

    B is lifted from the canonical complement of R step by step along the
    derived series of R.
    """
    r = solvable_radical(L)
    n, _ = nilradical(L)
    d = L.dim
    if r.is_zero():
        return L.full(), L.zero()
    comp = r.complement_in(L.full())
    ys = [list(v) for v in comp.basis]
    s = len(ys)
    if s:
        ideal_plus = list(comp.basis) + list(r.basis)
        consts = {}
        for i in range(s):
            for j in range(i + 1, s):
                co = _coords(L.bracket(ys[i], ys[j]), ideal_plus)
                consts[i, j] = co[:s]
        series = derived_series(L, r)
        if not series[-1].is_zero():
            series.append(L.zero())
        for k in range(len(series) - 1):
            top, low = series[k], series[k + 1]
            w = low.complement_in(top)
            wb = list(w.basis)
            t = len(wb)
            frame = wb + list(low.basis)

            def err(i, j):
                br = L.bracket(ys[i], ys[j])
                out = list(br)
                for m, cm in enumerate(consts[i, j]):
                    if cm:
                        out = [x - cm * y for x, y in zip(out, ys[m])]
                return out

            errs = {(i, j): err(i, j) for i in range(s) for j in range(i + 1, s)}
            if all(not any(e) for e in errs.values()):
                break
            if t == 0:
                raise LeviLiftFailed("nonzero error with empty layer")
            nvar = s * t
            eqs, rhs = [], []
            for (i, j), e in errs.items():
                # [y_i, r_j] + [r_i, y_j] - sum_m c_ijm r_m = -e  (mod low)
                cols = []
                for q in range(s):
                    for a in range(t):
                        v = [Fraction(0)] * d
                        if q == j:
                            v = [x + y for x, y in zip(v, L.bracket(ys[i], wb[a]))]
                        if q == i:
                            v = [x + y for x, y in zip(v, L.bracket(wb[a], ys[j]))]
                        cq = consts[i, j][q]
                        if cq:
                            v = [x - cq * y for x, y in zip(v, wb[a])]
                        cols.append(_coords(v, frame)[:t])
                target = _coords([-x for x in e], frame)[:t]
                for row_idx in range(t):
                    eqs.append([cols[col][row_idx] for col in range(nvar)])
                    rhs.append(target[row_idx])
            z = solve(eqs, rhs)
            if z is None:
                raise LeviLiftFailed(f"layer {k} of the derived series")
            for q in range(s):
                for a in range(t):
                    c = z[q * t + a]
                    if c:
                        ys[q] = [x + c * y for x, y in zip(ys[q], wb[a])]
    b = Subspace.span(ys, d)
    if not L.is_subalgebra(b) or subspace_sum(b, r).dim != d or b.dim + r.dim != d:
        raise LeviLiftFailed("lifted complement is not a Levi subalgebra")
    if b.dim:
        km = [[L.killing(x, y) for y in b.basis] for x in b.basis]
        if rref(km)[1] != b.dim:
            raise LeviLiftFailed("Killing form degenerate on B")
    cent = _centralizer(L, b, r)
    s_sp = subspace_intersect(cent, n).complement_in(cent)
    if subspace_sum(s_sp, n) != r or subspace_intersect(s_sp, n).dim:
        raise LeviLiftFailed("R != S + N")
    if not bracket_subspaces(L, b, s_sp).is_zero():
        raise LeviLiftFailed("[B, S] != 0")
    return b, s_sp


def _centralizer(L: LieAlgebra, b: Subspace, inside: Subspace) -> Subspace:
    """{x in inside : [b, x] = 0 for b in B}."""
    if b.is_zero():
        return inside
    base = list(inside.basis)
    rows = []
    for y in b.basis:
        imgs = [L.bracket(y, x) for x in base]
        for k in range(L.dim):
            rows.append([im[k] for im in imgs])
    coeffs = kernel(rows, len(base))
    vecs = []
    for c in coeffs:
        v = [Fraction(0)] * L.dim
        for ci, x in zip(c, base):
            if ci:
                v = [a + ci * y for a, y in zip(v, x)]
        vecs.append(v)
    return Subspace.span(vecs, L.dim)


def annihilator(L: LieAlgebra, i: Subspace, j: Subspace) -> Subspace:
    """{x in L : [x, I] inside J}."""
    if not i.contains_subspace(j):
        raise NotNested("J is not contained in I")
    d = L.dim
    funcs = j.annihilator().basis
    rows = []
    for u in i.basis:
        imgs = [L.bracket(L.basis_vector(k), u) for k in range(d)]
        for f in funcs:
            rows.append([sum((a * b for a, b in zip(f, im)), Fraction(0)) for im in imgs])
    if not rows:
        return L.full()
    ann = Subspace.span(kernel(rows, d), d)
    return ann


def direct_sum(*algebras: LieAlgebra, name: str = "") -> LieAlgebra:
    dims = [a.dim for a in algebras]
    d = sum(dims)
    c = [[[Fraction(0)] * d for _ in range(d)] for _ in range(d)]
    off = 0
    names = []
    for a in algebras:
        for i in range(a.dim):
            for j in range(a.dim):
                for k, x in enumerate(a.c[i][j]):
                    if x:
                        c[off + i][off + j][off + k] = x
        names += [f"{a.name or 'L'}.{nm}" if len(algebras) > 1 else nm for nm in a.basis_names]
        off += a.dim
    if len(set(names)) != len(names):
        names = [f"e{i}" for i in range(d)]
    return LieAlgebra(c, names, name or "+".join(a.name for a in algebras))


def summand_subspaces(algebras: Sequence[LieAlgebra]) -> list[Subspace]:
    d = sum(a.dim for a in algebras)
    out, off = [], 0
    for a in algebras:
        out.append(Subspace.coordinate(d, range(off, off + a.dim)))
        off += a.dim
    return out


@dataclass
class StructureReport:
    center: Subspace
    derived_series: list
    lower_central_series: list
    solvable_radical: Subspace
    nilradical: Subspace
    nilpotency_index: int
    levi: Subspace | None = None
    complement: Subspace | None = None
    is_semisimple: bool = field(default=False)


def structure_report(L: LieAlgebra, with_levi: bool = True) -> StructureReport:
    r = solvable_radical(L)
    n, p = nilradical(L)
    b = s = None
    if with_levi:
        b, s = levi_decomposition(L)
    return StructureReport(
        center=L.center(),
        derived_series=derived_series(L),
        lower_central_series=lower_central_series(L),
        solvable_radical=r,
        nilradical=n,
        nilpotency_index=p,
        levi=b,
        complement=s,
        is_semisimple=L.is_semisimple(),
    )
