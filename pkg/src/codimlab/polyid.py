"""Multilinear H-polynomials evaluated as multilinear maps L^n -> L.

Evaluation vectors have length d^(n+1), indexed row-major by
(i_1, ..., i_n, out): entry [i_1, ..., i_n, c] is the e_c coordinate of
f(e_{i_1}, ..., e_{i_n}).

Internally all structure constants and operators are scaled to integers by
common denominators, so a degree-n monomial evaluates to an integer tensor
times 1 / (op_scale^n * bracket_scale^(n-1)).  The factor depends only on n,
which keeps ranks and zero tests exact without fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import lcm
from typing import Sequence

import numpy as np

from .action import ActionSpec, trivial_action
from .exactla import as_fraction
from .liecore import LieAlgebra

__all__ = [
    "MultilinearHPolynomial",
    "Evaluator",
    "IdentityResult",
    "eval_monomial",
    "eval_polynomial",
    "is_identity",
    "regev_polynomial",
    "regev_matrix_unit_values",
]

_SAFE = 1 << 62


@dataclass(frozen=True)
class MultilinearHPolynomial:
    """Sum of coeff * [x^{h_1}_{perm(1)}, ..., x^{h_n}_{perm(n)}] (left-normed).

    ``perm`` is 1-based; ``labels[t]`` is the operator index attached to
    position t of the commutator.
    """

    n: int
    terms: tuple = ()

    @classmethod
    def make(cls, n: int, terms) -> "MultilinearHPolynomial":
        out = []
        for coeff, perm, labels in terms:
            perm = tuple(int(p) for p in perm)
            labels = tuple(labels)
            if sorted(perm) != list(range(1, n + 1)):
                raise ValueError(f"{perm} is not a permutation of 1..{n}")
            if len(labels) != n:
                raise ValueError(f"term has {len(labels)} labels for degree {n}")
            c = as_fraction(coeff)
            if c:
                out.append((c, perm, labels))
        return cls(n, tuple(out))

    @classmethod
    def monomial(cls, perm, labels=None, coeff=1) -> "MultilinearHPolynomial":
        n = len(perm)
        return cls.make(n, [(coeff, perm, labels if labels is not None else (0,) * n)])

    def resolve(self, action: ActionSpec) -> "MultilinearHPolynomial":
        """Replace named labels by operator indices, expanding linear combinations."""
        out = []
        for coeff, perm, labels in self.terms:
            options = [sorted(action.expand_label(lb).items()) for lb in labels]
            for combo in product(*options):
                c = coeff
                for _, x in combo:
                    c *= x
                out.append((c, perm, tuple(i for i, _ in combo)))
        return MultilinearHPolynomial.make(self.n, out)

    def __add__(self, other: "MultilinearHPolynomial") -> "MultilinearHPolynomial":
        if other.n != self.n:
            raise ValueError("degree mismatch")
        return MultilinearHPolynomial.make(self.n, self.terms + other.terms)

    def scaled(self, c) -> "MultilinearHPolynomial":
        c = as_fraction(c)
        return MultilinearHPolynomial.make(self.n, [(c * x, p, lb) for x, p, lb in self.terms])

    def collected(self) -> "MultilinearHPolynomial":
        """Merge equal monomials and drop zero coefficients; canonical term order."""
        acc: dict = {}
        for c, p, lb in self.terms:
            acc[p, lb] = acc.get((p, lb), Fraction(0)) + c
        return MultilinearHPolynomial(self.n, tuple((c, p, lb) for (p, lb), c in sorted(acc.items()) if c))


def _int_scale(values) -> int:
    return lcm(1, *(Fraction(x).denominator for x in values))


class Evaluator:
    """Integer tensors for evaluating labelled left-normed monomials on L."""

    def __init__(self, L: LieAlgebra, action: ActionSpec | None = None):
        action = action or trivial_action(L.dim)
        if action.dim != L.dim:
            raise ValueError("action and algebra dimensions differ")
        self.L = L
        self.action = action
        d = self.d = L.dim
        flat_c = [x for plane in L.c for row in plane for x in row]
        self.c_scale = _int_scale(flat_c)
        self.C = np.array([int(x * self.c_scale) for x in flat_c], dtype=object).reshape((d, d, d)) if d else np.zeros((0, 0, 0), dtype=object)
        flat_o = [x for op in action.operators for row in op for x in row]
        self.o_scale = _int_scale(flat_o)
        self.ops = [np.array([[int(x * self.o_scale) for x in row] for row in op], dtype=object).reshape((d, d)) for op in action.operators]
        self.m = len(self.ops)
        self.cols = [tuple(int(i) for i in np.flatnonzero(np.any(g != 0, axis=0))) for g in self.ops]
        self.c_max = int(np.abs(self.C).max()) if self.C.size else 0
        self.o_max = max((int(np.abs(g).max()) for g in self.ops if g.size), default=0)
        self._q = {}
        self._cache: dict = {}

    def scale(self, n: int) -> int:
        return self.o_scale ** n * self.c_scale ** max(n - 1, 0)

    def dtype_for(self, n: int):
        d = max(self.d, 1)
        bound = d * self.o_max * (d * d * self.o_max * self.c_max) ** max(n - 1, 0)
        return np.int64 if bound < _SAFE else object

    def _qtensor(self, h: int, dtype):
        """Q_h[a, i, c] = sum_b op_h[b, i] C[a, b, c] restricted to nonzero columns i."""
        key = (h, dtype)
        if key not in self._q:
            g = self.ops[h][:, list(self.cols[h])]
            q = np.einsum("bi,abc->aic", g, self.C) if g.size else np.zeros((self.d, 0, self.d), dtype=object)
            self._q[key] = q.astype(dtype)
        return self._q[key]

    def position_tensor(self, labels: Sequence[int]):
        """Values in position order: shape (k_1, ..., k_n, d) over nonzero columns.

        Entry [j_1, ..., j_n, c] is the e_c coordinate of
        [op_{h_1} e_{cols_1[j_1]}, ..., op_{h_n} e_{cols_n[j_n]}], scaled.
        """
        labels = tuple(labels)
        n = len(labels)
        dtype = self.dtype_for(n)
        key = (labels, dtype)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if n == 1:
            h = labels[0]
            t = self.ops[h][:, list(self.cols[h])].T.astype(dtype)
        else:
            prev = self.position_tensor(labels[:-1])
            prev = prev.reshape(-1, self.d).astype(dtype)
            q = self._qtensor(labels[-1], dtype)
            k = len(self.cols[labels[-1]])
            t = (prev @ q.reshape(self.d, k * self.d)) if prev.size and q.size else np.zeros((prev.shape[0], k * self.d), dtype=dtype)
        shape = tuple(len(self.cols[h]) for h in labels) + (self.d,)
        t = t.reshape(shape)
        if len(self._cache) > 4096:
            self._cache.clear()
        self._cache[key] = t
        return t

    def variable_tensor(self, perm0: Sequence[int], pos_labels: Sequence[int]):
        """Tensor with axes in variable order; axis v uses the columns of its label.

        ``perm0[t]`` is the (0-based) variable in position t.
        """
        t = self.position_tensor(pos_labels)
        n = len(perm0)
        axes = [0] * n
        for pos, v in enumerate(perm0):
            axes[v] = pos
        return t.transpose(axes + [n])

    def full_vector(self, perm0: Sequence[int], pos_labels: Sequence[int]):
        """Scaled integer evaluation vector of length d^(n+1)."""
        n = len(perm0)
        d = self.d
        vt = self.variable_tensor(perm0, pos_labels)
        var_labels = [0] * n
        for pos, v in enumerate(perm0):
            var_labels[v] = pos_labels[pos]
        out = np.zeros((d,) * n + (d,), dtype=vt.dtype)
        index = np.ix_(*[list(self.cols[var_labels[v]]) for v in range(n)], list(range(d)))
        out[index] = vt
        return out.reshape(-1)


def _check_labels(action: ActionSpec, labels) -> None:
    for h in labels:
        if not isinstance(h, (int, np.integer)) or not 0 <= h < action.h_dim:
            raise IndexError(f"label {h!r} out of range for {action.h_dim} operators")


def _monomial_int(ev: Evaluator, perm, labels):
    n = len(perm)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{tuple(perm)} is not a permutation of 1..{n}")
    if len(labels) != n:
        raise ValueError("one label per position is required")
    _check_labels(ev.action, labels)
    return ev.full_vector([p - 1 for p in perm], labels)


def eval_monomial(L: LieAlgebra, a: ActionSpec | None, perm, labels=None) -> tuple[Fraction, ...]:
    """Exact evaluation vector of one labelled left-normed monomial (perm is 1-based)."""
    ev = Evaluator(L, a)
    labels = tuple(labels) if labels is not None else (0,) * len(perm)
    v = _monomial_int(ev, perm, labels)
    s = ev.scale(len(perm))
    return tuple(Fraction(int(x), s) for x in v)


def _poly_int(ev: Evaluator, f: MultilinearHPolynomial):
    """(integer vector, denominator) with eval = vector / denominator."""
    n = f.n
    d = ev.d
    if not f.terms:
        return np.zeros(d ** (n + 1), dtype=object), 1
    den = lcm(*(c.denominator for c, _, _ in f.terms))
    acc = np.zeros(d ** (n + 1), dtype=object)
    for c, perm, labels in f.terms:
        acc = acc + int(c * den) * _monomial_int(ev, perm, labels).astype(object)
    return acc, den * ev.scale(n)


def eval_polynomial(L: LieAlgebra, a: ActionSpec | None, f: MultilinearHPolynomial) -> tuple[Fraction, ...]:
    ev = Evaluator(L, a)
    v, den = _poly_int(ev, f.resolve(ev.action) if _has_names(f) else f)
    return tuple(Fraction(int(x), den) for x in v)


def _has_names(f: MultilinearHPolynomial) -> bool:
    return any(isinstance(h, str) for _, _, lb in f.terms for h in lb)


@dataclass(frozen=True)
class IdentityResult:
    holds: bool
    witness: tuple | None = None
    value: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def is_identity(L: LieAlgebra, a: ActionSpec | None, f: MultilinearHPolynomial) -> IdentityResult:
    """Whether f vanishes on L; otherwise a basis substitution (x_1, ..., x_n) -> e_{i} and f's value there."""
    ev = Evaluator(L, a)
    g = f.resolve(ev.action) if _has_names(f) else f
    v, den = _poly_int(ev, g)
    nz = np.flatnonzero(v != 0)
    if not nz.size:
        return IdentityResult(True)
    d, n = L.dim, f.n
    idx = np.unravel_index(int(nz[0]), (d,) * (n + 1))
    witness = tuple(int(i) for i in idx[:n])
    base = int(np.ravel_multi_index(witness + (0,), (d,) * (n + 1)))
    value = tuple(Fraction(int(x), den) for x in v[base:base + d])
    return IdentityResult(False, witness, value)


def regev_polynomial(q: int) -> list[tuple[int, tuple]]:
    """Signed words of the doubly alternating central polynomial for q x q matrices.

    Variables are ("x", i) and ("y", i), 1 <= i <= q^2.  Words interleave
    x-blocks and y-blocks of sizes 1, 3, 5, ..., 2q - 1, and the sum runs
    over pairs of permutations of the q^2 indices with sign(sigma) sign(tau).
    """
    if q < 1:
        raise ValueError("q must be positive")
    k = q * q
    perms = [(p, _sign(p)) for p in permutations(range(1, k + 1))]
    blocks = []
    start = 0
    for size in range(1, 2 * q, 2):
        blocks.append((start, start + size))
        start += size
    out = []
    for s, ss in perms:
        for t, st in perms:
            word = []
            for lo, hi in blocks:
                word += [("x", s[i]) for i in range(lo, hi)]
                word += [("y", t[i]) for i in range(lo, hi)]
            out.append((ss * st, tuple(word)))
    return out


def _sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i + 1:
            j = p[i] - 1
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def regev_matrix_unit_values(q: int = 2):
    """Values of the polynomial at every substitution of matrix units of M_q.

    Returns (assignments, values): assignments[s] lists the unit index
    (row * q + col) of x_1..x_{q^2}, y_1..y_{q^2}; values[s] is the q x q
    integer matrix.  Uses E_ij E_kl = delta_jk E_il.
    """
    k = q * q
    nvars = 2 * k
    grid = np.indices((k,) * nvars).reshape(nvars, -1).T
    rows, cols = grid // q, grid % q
    values = np.zeros((grid.shape[0], q, q), dtype=np.int64)
    slot = {("x", i): i - 1 for i in range(1, k + 1)}
    slot.update({("y", i): k + i - 1 for i in range(1, k + 1)})
    for sign, word in regev_polynomial(q):
        idx = [slot[v] for v in word]
        alive = np.ones(grid.shape[0], dtype=bool)
        for a, b in zip(idx, idx[1:]):
            alive &= cols[:, a] == rows[:, b]
        hit = np.flatnonzero(alive)
        np.add.at(values, (hit, rows[hit, idx[0]], cols[hit, idx[-1]]), sign)
    return grid, values
