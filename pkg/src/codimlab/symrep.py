"""Partitions, characters of S_n, Young symmetrizers and cocharacters."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod

import numpy as np

from .action import ActionSpec, trivial_action
from .codim import ResourceCeiling, _guard
from .exactla import IntegerEchelon
from .liecore import LieAlgebra
from .polyid import Evaluator, MultilinearHPolynomial

__all__ = [
    "Partition",
    "partitions",
    "hook_dim",
    "syt_count",
    "irreducible_character",
    "class_size",
    "CocharacterReport",
    "NonIntegralMultiplicity",
    "cocharacter",
    "multiplicity_bound_audit",
    "standard_tableau",
    "young_symmetrizer_apply",
    "colength",
]


class NonIntegralMultiplicity(ArithmeticError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        p = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"{p} is not a partition")
        object.__setattr__(self, "parts", p)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def part(self, k: int) -> int:
        """lambda_k with 1-based k; zero past the last row."""
        return self.parts[k - 1] if 1 <= k <= len(self.parts) else 0

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for x in self.parts if x > j) for j in range(self.parts[0] if self.parts else 0)))

    def __str__(self) -> str:
        return "-".join(str(x) for x in self.parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        return cls(tuple(int(x) for x in text.split("-") if x))


def partitions(n: int) -> list[Partition]:
    """All partitions of n in decreasing lexicographic order."""
    out = []

    def rec(rest, most, acc):
        if rest == 0:
            out.append(Partition(tuple(acc)))
            return
        for k in range(min(rest, most), 0, -1):
            rec(rest - k, k, acc + [k])

    rec(n, n, [])
    return out


def hook_dim(lam: Partition) -> int:
    conj = lam.conjugate().parts
    hooks = 1
    for i, row in enumerate(lam.parts):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(lam.n) // hooks


@lru_cache(maxsize=None)
def _syt(parts: tuple) -> int:
    if sum(parts) <= 1:
        return 1
    total = 0
    for i, x in enumerate(parts):
        nxt = parts[i + 1] if i + 1 < len(parts) else 0
        if x > nxt:
            smaller = list(parts)
            smaller[i] -= 1
            total += _syt(tuple(y for y in smaller if y))
    return total


def syt_count(lam: Partition) -> int:
    """Number of standard Young tableaux, by removing corners."""
    return _syt(lam.parts)


@lru_cache(maxsize=None)
def _mn(parts: tuple, cycles: tuple) -> int:
    if not cycles:
        return 1 if not parts else 0
    k, rest = cycles[0], cycles[1:]
    s = len(parts)
    beta = [parts[i] + (s - 1 - i) for i in range(s)]
    bset = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in bset:
            continue
        height = sum(1 for x in beta if nb < x < b)
        new = sorted((bset - {b}) | {nb}, reverse=True)
        m = len(new)
        lam = tuple(x - (m - 1 - i) for i, x in enumerate(new))
        lam = tuple(x for x in lam if x > 0)
        total += (-1) ** height * _mn(lam, rest)
    return total


def irreducible_character(lam: Partition, cycle_type) -> int:
    """chi_lambda on permutations of the given cycle type (Murnaghan-Nakayama)."""
    ct = tuple(sorted((int(x) for x in cycle_type if x), reverse=True))
    if sum(ct) != lam.n:
        raise ValueError(f"cycle type of size {sum(ct)} for a partition of {lam.n}")
    return _mn(lam.parts, ct)


def class_size(mu: Partition) -> int:
    z = 1
    for k in set(mu.parts):
        c = mu.parts.count(k)
        z *= k ** c * factorial(c)
    return factorial(mu.n) // z


def _representative(mu: Partition) -> tuple:
    """A permutation (0-based images) with cycle type mu."""
    perm = []
    start = 0
    for k in mu.parts:
        perm += [start + (i + 1) % k for i in range(k)]
        start += k
    return tuple(perm)


@dataclass
class CocharacterReport:
    n: int
    multiplicities: dict
    codim: int
    algebra_dim: int
    d_used: int | None = None
    p_used: int | None = None
    characters: dict = field(default_factory=dict)

    @property
    def bound_constant(self) -> int | None:
        if self.p_used is None:
            return None
        return self.p_used * (self.algebra_dim * self.p_used + 3)

    def dimension_sum(self) -> int:
        return sum(m * hook_dim(lam) for lam, m in self.multiplicities.items())


def _cocharacter_guard(dim: int, n: int, m: int) -> None:
    if os.environ.get("CODIMLAB_CEILING"):
        return
    if n > 6:
        raise ResourceCeiling("cocharacter degree n", n, 6)
    if dim > 4:
        raise ResourceCeiling("cocharacter dim L", dim, 4)
    if m > 3:
        raise ResourceCeiling("cocharacter operator count", m, 3)


def cocharacter(L: LieAlgebra, a: ActionSpec | None, n: int, d: int | None = None, p: int | None = None) -> CocharacterReport:
    """Multiplicities of the S_n-module spanned by the monomial evaluations.

    S_n permutes the tensor slots of evaluation vectors.  The character on
    the image is read off one echelon basis: the trace of tau is the sum of
    (tau b_i)[pivot_i] over RREF rows b_i.
    """
    a = a or trivial_action(L.dim)
    if n < 1:
        raise ValueError("n must be at least 1")
    dim = L.dim
    if dim == 0:
        return CocharacterReport(n, {}, 0, 0, d, p)
    _cocharacter_guard(dim, n, a.h_dim)
    _guard(dim, n, factorial(n) * a.h_dim ** n)
    ev = Evaluator(L, a)
    acc = IntegerEchelon(dim ** (n + 1))
    perms = list(permutations(range(n)))
    batch = []
    for lab in product(range(a.h_dim), repeat=n):
        for pm in perms:
            batch.append(ev.full_vector(pm, tuple(lab[v] for v in pm)).astype(object))
        acc.add_batch(np.vstack(batch))
        batch = []
    shape = (dim,) * (n + 1)
    chars = {}
    for mu in partitions(n):
        tau = _representative(mu)
        tr = 0
        for row, piv in zip(acc.basis, acc.pivots):
            idx = np.unravel_index(piv, shape)
            src = tuple(idx[tau[t]] for t in range(n)) + (idx[n],)
            tr += int(row[np.ravel_multi_index(src, shape)])
        chars[mu] = Fraction(tr, acc.scale)
    mult = {}
    nf = factorial(n)
    for lam in partitions(n):
        s = sum(class_size(mu) * chars[mu] * irreducible_character(lam, mu.parts) for mu in chars)
        val = s / nf
        if val.denominator != 1 or val < 0:
            raise NonIntegralMultiplicity(f"m({lam}) = {val}")
        if val:
            mult[lam] = int(val)
    rep = CocharacterReport(n, mult, acc.rank, dim, d, p, {mu: int(c) if c.denominator == 1 else c for mu, c in chars.items()})
    if rep.dimension_sum() != acc.rank:
        raise NonIntegralMultiplicity("multiplicities do not add up to the codimension")
    return rep


def multiplicity_bound_audit(report: CocharacterReport, d: int, p: int) -> list[str]:
    """Nonzero multiplicities with lambda_{d+1} >= p((dim L)p + 3) or lambda_{dim L + 1} > 0."""
    dim = report.algebra_dim
    limit = p * (dim * p + 3)
    out = []
    for lam, m in sorted(report.multiplicities.items(), reverse=True):
        if not m:
            continue
        if lam.part(d + 1) >= limit:
            out.append(f"m({lam}) = {m} with lambda_{d + 1} = {lam.part(d + 1)} >= {limit}")
        if lam.part(dim + 1) > 0:
            out.append(f"m({lam}) = {m} with more than {dim} rows")
    return out


def standard_tableau(lam: Partition) -> tuple:
    """Rows filled with 1..n left to right, top to bottom."""
    rows, k = [], 1
    for r in lam.parts:
        rows.append(tuple(range(k, k + r)))
        k += r
    return tuple(rows)


def _perm_sign(images: dict) -> int:
    seen, sign = set(), 1
    for s in images:
        if s in seen:
            continue
        length, x = 0, s
        while x not in seen:
            seen.add(x)
            x = images[x]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _group_of(blocks) -> list[dict]:
    """All permutations of {1..n} preserving each block setwise, as dicts."""
    factors = [[dict(zip(b, q)) for q in permutations(b)] for b in blocks if b]
    out = []
    for combo in product(*factors):
        m = {}
        for piece in combo:
            m.update(piece)
        out.append(m)
    return out


def _act(pi: dict, f: MultilinearHPolynomial, coeff: int) -> list:
    return [(c * coeff, tuple(pi.get(x, x) for x in perm), labels) for c, perm, labels in f.terms]


def young_symmetrizer_apply(tableau, f: MultilinearHPolynomial) -> MultilinearHPolynomial:
    """e*_T f = b_T a_T f: symmetrize over rows, then alternate over columns.

    A permutation pi sends x_i to x_{pi(i)}; labels stay attached to
    commutator positions.
    """
    rows = [tuple(r) for r in tableau]
    n = sum(len(r) for r in rows)
    if n != f.n or sorted(x for r in rows for x in r) != list(range(1, n + 1)):
        raise ValueError("tableau must be filled with 1..n where n is the degree of f")
    ncols = max((len(r) for r in rows), default=0)
    cols = [tuple(r[j] for r in rows if len(r) > j) for j in range(ncols)]
    g = MultilinearHPolynomial(f.n, ())
    terms = []
    for pi in _group_of(rows):
        terms += _act(pi, f, 1)
    g = MultilinearHPolynomial.make(f.n, terms).collected()
    terms = []
    for pi in _group_of(cols):
        terms += _act(pi, g, _perm_sign(pi))
    return MultilinearHPolynomial.make(f.n, terms).collected()


def colength(report: CocharacterReport) -> int:
    return sum(report.multiplicities.values())
