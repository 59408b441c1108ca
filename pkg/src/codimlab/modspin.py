"""Modules over the associative envelope of a finite set of matrices.

A module is Q^k with a list of generator matrices acting on column vectors.
Submodules are found by spinning vectors; irreducibility is certified with
Norton's criterion (random element, irreducible factor p of its
characteristic polynomial, null space of p(theta) of dimension deg p).
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import sympy

from .exactla import Subspace, identity, kernel, matmul, matvec, solve, transpose

Matrix = tuple  # tuple of row tuples of Fraction


class IrreducibilityUndecided(RuntimeError):
    pass


def spin(vectors: Sequence[Sequence], gens: Sequence[Matrix], k: int) -> Subspace:
    """Smallest subspace of Q^k containing ``vectors`` and stable under ``gens``."""
    sub = Subspace.span([v for v in vectors if any(v)], k)
    queue = list(sub.basis)
    while queue:
        v = queue.pop()
        for g in gens:
            w = matvec(g, v)
            if not sub.contains(w):
                sub = Subspace.span(list(sub.basis) + [w], k)
                queue.append(w)
    return sub


def is_stable(sub: Subspace, gens: Sequence[Matrix]) -> bool:
    return all(sub.contains(matvec(g, v)) for g in gens for v in sub.basis)


def envelope(gens: Sequence[Matrix], k: int, unital: bool = True) -> list[Matrix]:
    """Basis (as matrices) of the associative algebra generated by ``gens``."""
    flat = lambda m: tuple(x for row in m for x in row)
    unflat = lambda v: tuple(tuple(v[i * k:(i + 1) * k]) for i in range(k))
    seeds = [identity(k)] if unital else []
    seeds += list(gens)
    space = Subspace.span([flat(m) for m in seeds if any(flat(m))], k * k)
    basis = [unflat(v) for v in space.basis]
    queue = list(basis)
    while queue:
        a = queue.pop()
        for g in gens:
            p = matmul(g, a)
            fp = flat(p)
            if not space.contains(fp):
                space = Subspace.span(list(space.basis) + [fp], k * k)
                queue.append(p)
    return [unflat(v) for v in space.basis]


def _charpoly(m: Matrix) -> list[Fraction]:
    """Coefficients (highest first) of det(xI - m) by Faddeev-LeVerrier."""
    n = len(m)
    coeffs = [Fraction(1)]
    mk = tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    ident = identity(n)
    for k in range(1, n + 1):
        mk = matmul(m, mk)
        mk = tuple(tuple(x + coeffs[-1] * ident[i][j] for j, x in enumerate(row)) for i, row in enumerate(mk))
        am = matmul(m, mk)
        c = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(c)
    return coeffs


def _poly_at(coeffs: Sequence[Fraction], m: Matrix) -> Matrix:
    n = len(m)
    acc = tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    ident = identity(n)
    for c in coeffs:
        acc = matmul(acc, m)
        acc = tuple(tuple(x + c * ident[i][j] for j, x in enumerate(row)) for i, row in enumerate(acc))
    return acc


def _rational_factors(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, _mult in factors:
        fc = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in f.all_coeffs()]
        lead = fc[0]
        out.append([c / lead for c in fc])
    out.sort(key=lambda f: (len(f), [str(c) for c in f]))
    return out


def _random_element(gens: Sequence[Matrix], k: int, rng: random.Random) -> Matrix:
    words = list(gens)
    for _ in range(2):
        a, b = rng.choice(gens), rng.choice(gens)
        words.append(matmul(a, b))
    acc = [[Fraction(0)] * k for _ in range(k)]
    for w in words:
        c = rng.randint(-3, 3)
        if c:
            for i in range(k):
                for j in range(k):
                    acc[i][j] += c * w[i][j]
    return tuple(tuple(r) for r in acc)


def find_submodule(gens: Sequence[Matrix], k: int, attempts: int = 60, seed: int = 0) -> Subspace | None:
    """A proper nonzero submodule of Q^k, or None when Q^k is irreducible."""
    if k <= 1:
        return None
    if not gens:
        return Subspace.span([[1] + [0] * (k - 1)], k)
    if len(envelope(gens, k)) == k * k:
        return None
    gts = [transpose(g) for g in gens]
    rng = random.Random(seed)
    for _ in range(attempts):
        theta = _random_element(gens, k, rng)
        for p in _rational_factors(_charpoly(theta)):
            pm = _poly_at(p, theta)
            null = kernel(pm, k)
            sub = spin(null[:1], gens, k)
            if sub.dim < k:
                return sub
            null_t = kernel(transpose(pm), k)
            dual = spin(null_t[:1], gts, k)
            if dual.dim < k:
                return dual.annihilator()
            if len(null) == len(p) - 1:
                return None
    raise IrreducibilityUndecided(f"no decision after {attempts} random elements")


def is_irreducible(gens: Sequence[Matrix], k: int) -> bool:
    return k > 0 and find_submodule(gens, k) is None


def restrict(gens: Sequence[Matrix], sub: Subspace) -> list[Matrix]:
    """Action on ``sub`` in coordinates of its RREF basis."""
    cols = [[sub.coordinates(matvec(g, v)) for v in sub.basis] for g in gens]
    return [transpose(c, sub.dim) if c else () for c in cols]


def quotient(gens: Sequence[Matrix], sub: Subspace) -> tuple[list[Matrix], list[int]]:
    """Action on Q^k / sub in the coordinates that are not pivots of ``sub``."""
    k = sub.ambient_dim
    free = [j for j in range(k) if j not in set(sub.pivots)]
    out = []
    for g in gens:
        cols = []
        for j in free:
            w = sub.reduce(tuple(g[i][j] for i in range(k)))
            cols.append(tuple(w[i] for i in free))
        out.append(transpose(cols, len(free)) if cols else ())
    return out, free


class Section:
    """The subquotient I/J of Q^n under ``gens``, with lifting back to Q^n."""

    def __init__(self, gens: Sequence[Matrix], outer: Subspace, inner: Subspace):
        self.n = outer.ambient_dim
        self.outer = outer
        self.inner = inner
        inner_c = Subspace.span([outer.coordinates(v) for v in inner.basis], outer.dim)
        on_outer = restrict(gens, outer)
        self._inner_c = inner_c
        self.gens, self._free = quotient(on_outer, inner_c)
        self.dim = outer.dim - inner.dim

    def lift(self, sub: Subspace) -> Subspace:
        """Preimage in Q^n of a subspace of the section."""
        vecs = list(self.inner.basis)
        for row in sub.basis:
            c = [Fraction(0)] * self.outer.dim
            for x, j in zip(row, self._free):
                c[j] = x
            v = [Fraction(0)] * self.n
            for ci, b in zip(c, self.outer.basis):
                if ci:
                    v = [a + ci * bb for a, bb in zip(v, b)]
            vecs.append(v)
        return Subspace.span(vecs, self.n)

    def project(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coordinates in the section of a vector of ``outer``."""
        c = self._inner_c.reduce(self.outer.coordinates(v))
        return tuple(c[j] for j in self._free)


def composition_series(gens: Sequence[Matrix], k: int) -> list[Subspace]:
    """0 = M_0 < M_1 < ... < M_t = Q^k with irreducible factors."""
    if k == 0:
        return [Subspace.zero(0)]
    sub = find_submodule(gens, k)
    if sub is None:
        return [Subspace.zero(k), Subspace.full(k)]
    lower = composition_series(restrict(gens, sub), sub.dim)
    lower = [Subspace.span([_from_coords(c, sub) for c in s.basis], k) for s in lower]
    qgens, free = quotient(gens, sub)
    upper = composition_series(qgens, len(free))
    out = list(lower)
    for s in upper[1:]:
        vecs = list(sub.basis)
        for row in s.basis:
            v = [Fraction(0)] * k
            for x, j in zip(row, free):
                v[j] = x
            vecs.append(v)
        out.append(Subspace.span(vecs, k))
    return out


def _from_coords(c, sub: Subspace):
    v = [Fraction(0)] * sub.ambient_dim
    for ci, b in zip(c, sub.basis):
        if ci:
            v = [a + ci * bb for a, bb in zip(v, b)]
    return v


def chain_between(gens: Sequence[Matrix], outer: Subspace, inner: Subspace) -> list[Subspace]:
    """Composition series of outer/inner lifted to subspaces of Q^n."""
    sec = Section(gens, outer, inner)
    series = composition_series(sec.gens, sec.dim)
    return [sec.lift(s) for s in series]


def hom_space(gens1: Sequence[Matrix], k1: int, gens2: Sequence[Matrix], k2: int) -> list[Matrix]:
    """Basis of module maps X: Q^k1 -> Q^k2 with X g1 = g2 X for paired generators."""
    nvar = k1 * k2
    eqs = []
    for g1, g2 in zip(gens1, gens2):
        # (X g1)[i][j] - (g2 X)[i][j] = 0, X[i][l] is variable i*k1 + l
        for i in range(k2):
            for j in range(k1):
                row = [Fraction(0)] * nvar
                for l in range(k1):
                    if g1[l][j]:
                        row[i * k1 + l] += g1[l][j]
                for l in range(k2):
                    if g2[i][l]:
                        row[l * k1 + j] -= g2[i][l]
                if any(row):
                    eqs.append(row)
    sols = kernel(eqs, nvar) if eqs else kernel([[0] * nvar], nvar)
    return [tuple(tuple(s[i * k1:(i + 1) * k1]) for i in range(k2)) for s in sols]


def commutant_dim(gens: Sequence[Matrix], k: int) -> int:
    return len(hom_space(gens, k, gens, k))


def equivariant_projection(gens: Sequence[Matrix], k: int, sub: Subspace) -> Matrix | None:
    """A projection P of Q^k onto ``sub`` commuting with ``gens``, or None.

    P = sum_a z_a E_a is solved for as a k x k matrix with P g = g P,
    image inside ``sub`` and P u = u on ``sub``.
    """
    nvar = k * k
    eqs, rhs = [], []
    for g in gens:
        for i in range(k):
            for j in range(k):
                row = [Fraction(0)] * nvar
                for l in range(k):
                    if g[l][j]:
                        row[i * k + l] += g[l][j]
                    if g[i][l]:
                        row[l * k + j] -= g[i][l]
                if any(row):
                    eqs.append(row)
                    rhs.append(Fraction(0))
    ann = sub.annihilator()
    for f in ann.basis:
        for j in range(k):
            row = [Fraction(0)] * nvar
            for i in range(k):
                if f[i]:
                    row[i * k + j] = f[i]
            eqs.append(row)
            rhs.append(Fraction(0))
    for u in sub.basis:
        for i in range(k):
            row = [Fraction(0)] * nvar
            for j in range(k):
                if u[j]:
                    row[i * k + j] = u[j]
            eqs.append(row)
            rhs.append(u[i])
    x = solve(eqs, rhs)
    if x is None:
        return None
    return tuple(tuple(x[i * k:(i + 1) * k]) for i in range(k))
