"""Exact rational linear algebra: RREF, canonical subspaces, streaming rank.

Scalars are :class:`fractions.Fraction`.  Vectors are tuples of Fractions,
matrices are tuples of row tuples.  The streaming rank accumulator works on
integer rows (fraction-free elimination) because evaluation vectors are
integral after a uniform rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

Rational = Fraction

__all__ = [
    "Rational",
    "AmbientMismatch",
    "as_fraction",
    "vec",
    "mat",
    "zeros",
    "identity",
    "matmul",
    "matvec",
    "transpose",
    "rref",
    "rank",
    "kernel",
    "solve",
    "Subspace",
    "subspace_sum",
    "subspace_intersect",
    "RankAccumulator",
    "IntegerEchelon",
    "incremental_rank_accumulator",
    "integer_row",
]


class AmbientMismatch(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and "p/q" text exactly; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, float):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(vec(r) for r in rows)


def zeros(r: int, c: int):
    z = Fraction(0)
    return tuple((z,) * c for _ in range(r))


def identity(n: int):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[Fraction]], cols: int | None = None):
    if not m:
        return tuple(() for _ in range(cols or 0))
    return tuple(zip(*m))


def matmul(a, b):
    bt = transpose(b, len(b[0]) if b else 0)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def rref(m: Sequence[Sequence]) -> tuple[tuple[tuple[Fraction, ...], ...], int]:
    """Reduced row echelon form of ``m`` (same shape, zero rows last) and its rank."""
    rows = [list(vec(r)) for r in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    piv_r = 0
    for c in range(ncols):
        if piv_r == nrows:
            break
        pr = next((r for r in range(piv_r, nrows) if rows[r][c] != 0), None)
        if pr is None:
            continue
        rows[piv_r], rows[pr] = rows[pr], rows[piv_r]
        p = rows[piv_r][c]
        if p != 1:
            rows[piv_r] = [x / p for x in rows[piv_r]]
        prow = rows[piv_r]
        for r in range(nrows):
            if r != piv_r and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
        piv_r += 1
    return tuple(tuple(r) for r in rows), piv_r


def rank(m) -> int:
    return rref(m)[1] if m else 0


def _pivots(rows) -> tuple[int, ...]:
    out = []
    for r in rows:
        for j, x in enumerate(r):
            if x != 0:
                out.append(j)
                break
    return tuple(out)


def kernel(m: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space {x : m x = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if not m:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    red, r = rref(m)
    red = red[:r]
    piv = _pivots(red)
    pivset = set(piv)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [Fraction(0)] * ncols
        x[free] = Fraction(1)
        for row, pc in zip(red, piv):
            x[pc] = -row[free]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``a x = b`` (free variables set to zero), or None."""
    ncols = len(a[0]) if a else 0
    aug = [list(vec(row)) + [as_fraction(bi)] for row, bi in zip(a, b)]
    if not aug:
        return tuple(Fraction(0) for _ in range(ncols))
    red, _ = rref(aug)
    x = [Fraction(0)] * ncols
    for row in red:
        lead = next((j for j, v in enumerate(row) if v != 0), None)
        if lead is None:
            continue
        if lead == ncols:
            return None
        x[lead] = row[ncols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient_dim stored by its unique RREF basis."""

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...] = ()
    pivots: tuple[int, ...] = field(default=(), compare=False)

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vs = [vec(v) for v in vectors]
        for v in vs:
            if len(v) != ambient_dim:
                raise AmbientMismatch(f"vector of length {len(v)} in Q^{ambient_dim}")
        if not vs:
            return cls(ambient_dim)
        red, r = rref(vs)
        basis = red[:r]
        return cls(ambient_dim, basis, _pivots(basis))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity(n), tuple(range(n)))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        idx = sorted(set(indices))
        rows = tuple(tuple(Fraction(int(i == j)) for i in range(n)) for j in idx)
        return cls(n, rows, tuple(idx))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    def is_zero(self) -> bool:
        return not self.basis

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(f"Q^{self.ambient_dim} vs Q^{other.ambient_dim}")

    def reduce(self, v: Sequence) -> tuple[Fraction, ...]:
        """Remainder of v after clearing the pivot coordinates."""
        w = list(vec(v))
        for row, p in zip(self.basis, self.pivots):
            f = w[p]
            if f:
                w = [x - f * y for x, y in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(self.contains(v) for v in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of v (assumed in the subspace) w.r.t. the RREF basis."""
        w = vec(v)
        return tuple(w[p] for p in self.pivots)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_intersect(self, other)

    def annihilator(self) -> "Subspace":
        """Orthogonal complement under the standard dot product."""
        return Subspace.span(kernel(self.basis, self.ambient_dim), self.ambient_dim)

    def complement_in(self, outer: "Subspace") -> "Subspace":
        """Canonical complement of self inside ``outer``.

        Greedy over the RREF basis of ``outer`` in order, so the choice is
        deterministic.
        """
        self._check(outer)
        chosen = []
        acc = self
        for v in outer.basis:
            if not acc.contains(v):
                chosen.append(v)
                acc = Subspace.span(list(acc.basis) + [v], self.ambient_dim)
        return Subspace.span(chosen, self.ambient_dim)

    def image(self, m) -> "Subspace":
        return Subspace.span([matvec(m, v) for v in self.basis], len(m))

    def rows_text(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.basis]


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    a._check(b)
    if b.is_zero():
        return a
    if a.is_zero():
        return b
    return Subspace.span(list(a.basis) + list(b.basis), a.ambient_dim)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b as the annihilator of (a^⊥ + b^⊥)."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        return Subspace.zero(a.ambient_dim)
    duals = list(a.annihilator().basis) + list(b.annihilator().basis)
    if not duals:
        return Subspace.full(a.ambient_dim)
    return Subspace.span(kernel(duals, a.ambient_dim), a.ambient_dim)


def integer_row(v: Sequence) -> dict[int, int]:
    """Sparse primitive integer row proportional to v."""
    fr = {i: as_fraction(x) for i, x in enumerate(v) if x}
    if not fr:
        return {}
    den = lcm(*(x.denominator for x in fr.values()))
    row = {i: int(x * den) for i, x in fr.items()}
    return _primitive(row)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: x // g for k, x in row.items()}
    return row


class RankAccumulator:
    """Streaming echelon basis over Z (fraction-free) for rank computations.

    Each stored row has a distinct leading column and a positive leading
    entry.  Memory is O(rank * nnz), independent of how many vectors were
    streamed.
    """

    def __init__(self, length: int):
        self.length = length
        self.rows: dict[int, dict[int, int]] = {}
        self.streamed = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        rows = self.rows
        while row:
            lead = min(row)
            piv = rows.get(lead)
            if piv is None:
                return row
            a = piv[lead]
            b = row[lead]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                new = {k: a * x for k, x in row.items()}
            else:
                new = dict(row)
            for k, x in piv.items():
                y = new.get(k, 0) - b * x
                if y:
                    new[k] = y
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else new
        return row

    def add(self, v) -> bool:
        """Stream one vector (dense sequence or sparse {index: int}); True if rank grew."""
        self.streamed += 1
        if isinstance(v, Mapping):
            if v and (max(v) >= self.length or min(v) < 0):
                raise AmbientMismatch(f"index out of range for length {self.length}")
            if all(isinstance(x, int) for x in v.values()):
                row = {k: x for k, x in v.items() if x}
                row = _primitive(row) if row else row
            else:
                fr = {k: as_fraction(x) for k, x in v.items() if x}
                den = lcm(*(x.denominator for x in fr.values())) if fr else 1
                row = {k: int(x * den) for k, x in fr.items()}
                row = _primitive(row) if row else row
        else:
            if len(v) != self.length:
                raise AmbientMismatch(f"vector of length {len(v)} streamed into length {self.length}")
            row = integer_row(v)
        if not row:
            return False
        row = self._reduce(row)
        if not row:
            return False
        self.rows[min(row)] = row
        return True

    def merge(self, other: "RankAccumulator") -> None:
        """Stream another accumulator's echelon basis into this one."""
        if other.length != self.length:
            raise AmbientMismatch("accumulators of different length")
        for k in sorted(other.rows):
            self.add(other.rows[k])
        self.streamed += other.streamed - len(other.rows)

    def subspace(self) -> Subspace:
        dense = []
        for k in sorted(self.rows):
            r = self.rows[k]
            d = [0] * self.length
            for i, x in r.items():
                d[i] = x
            dense.append(d)
        return Subspace.span(dense, self.length)


def incremental_rank_accumulator(vectors: Iterable, length: int | None = None) -> int:
    """Rank of the span of a stream of vectors."""
    acc = None
    for v in vectors:
        if acc is None:
            acc = RankAccumulator(length if length is not None else len(v))
        acc.add(v)
    return acc.rank if acc is not None else 0


_SAFE = 1 << 62


def _absmax(a) -> int:
    return int(np.abs(a).max()) if a.size else 0


def _as_object(a):
    return a if a.dtype == object else a.astype(object)


def _row_gcds(a) -> np.ndarray:
    if a.dtype != object:
        return np.gcd.reduce(a, axis=1)
    out = np.zeros(a.shape[0], dtype=object)
    for i, row in enumerate(a):
        g = 0
        for x in row:
            if x:
                g = gcd(g, int(x))
                if g == 1:
                    break
        out[i] = g
    return out


def _shrink(a):
    """Back to int64 when every entry fits comfortably."""
    if a.dtype == object and _absmax(a) < (1 << 40):
        return a.astype(np.int64)
    return a


class IntegerEchelon:
    """Exact reduced echelon basis over Q stored as D * RREF with integer entries.

    Vectors are integer numpy rows of a fixed length.  Reduction against
    the whole basis is one matrix product, so batches of vectors are
    cheap.  Arithmetic runs in int64 while magnitudes are provably safe and
    switches to Python integers otherwise.  Memory is O(rank * length).
    """

    def __init__(self, length: int):
        self.length = length
        self.basis = np.zeros((0, length), dtype=np.int64)
        self.pivots: list[int] = []
        self.scale = 1
        self.streamed = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, v):
        if not self.pivots:
            return v
        coeff = v[:, self.pivots]
        b = self.basis
        if v.dtype == object or b.dtype == object or \
                self.scale * _absmax(v) >= _SAFE or len(self.pivots) * _absmax(coeff) * _absmax(b) >= _SAFE:
            v, coeff, b = _as_object(v), _as_object(coeff), _as_object(b)
        return self.scale * v - coeff @ b

    @staticmethod
    def _primitive_rows(v):
        g = _row_gcds(v)
        g[g == 0] = 1
        return v // g[:, None]

    def add_batch(self, vectors) -> int:
        """Stream a 2-D integer array of row vectors; returns how many pivots were added."""
        v = np.asarray(vectors)
        if v.ndim != 2 or v.shape[1] != self.length:
            raise AmbientMismatch(f"batch of shape {v.shape} for length {self.length}")
        if v.dtype != object and not np.issubdtype(v.dtype, np.integer):
            raise TypeError("IntegerEchelon takes integer arrays")
        self.streamed += v.shape[0]
        v = v[np.any(v != 0, axis=1)]
        if v.dtype != object:
            v = v.astype(np.int64)
        added = 0
        v = self._reduce(v)
        v = v[np.any(v != 0, axis=1)]
        # work on the columns some remaining vector actually uses
        active = np.flatnonzero(np.any(v != 0, axis=0))
        v = v[:, active]
        while v.shape[0]:
            v = _shrink(self._primitive_rows(v))
            w = v[0]
            q = int(np.flatnonzero(w)[0])
            full = np.zeros(self.length, dtype=w.dtype)
            full[active] = w
            self._insert(full, int(active[q]))
            added += 1
            # the rest are already clear of the old pivots; clear column q
            v = v[1:]
            if v.shape[0]:
                wq = int(w[q])
                col = v[:, q]
                if v.dtype == object or w.dtype == object or \
                        abs(wq) * _absmax(v) + _absmax(col) * _absmax(w) >= _SAFE:
                    v, w, col = _as_object(v), _as_object(w), _as_object(col)
                v = wq * v - np.outer(col, w)
                v = v[np.any(v != 0, axis=1)]
        return added

    def add(self, vector) -> bool:
        return self.add_batch(np.asarray(vector).reshape(1, -1)) > 0

    def _insert(self, w, q: int) -> None:
        wq = int(w[q])
        b = self.basis
        big = b.dtype == object or w.dtype == object or \
            (abs(wq) * _absmax(b) + _absmax(b[:, q]) * _absmax(w) >= _SAFE) or abs(self.scale) * _absmax(w) >= _SAFE
        if big:
            b, w = _as_object(b), _as_object(w)
        new_b = wq * b - np.outer(b[:, q], w)
        new_w = self.scale * w
        scale = self.scale * wq
        rows = np.vstack([new_b, new_w[None, :]])
        g = abs(int(scale))
        if rows.dtype != object:
            g = gcd(g, int(np.gcd.reduce(rows, axis=None)))
        else:
            for x in rows.ravel():
                if x:
                    g = gcd(g, int(x))
                    if g == 1:
                        break
        if g > 1:
            rows = rows // g
            scale //= g
        if scale < 0:
            rows, scale = -rows, -scale
        order = np.argsort(self.pivots + [q], kind="stable")
        self.pivots = [(self.pivots + [q])[i] for i in order]
        self.basis = _shrink(rows[order])
        self.scale = int(scale)

    def merge(self, other: "IntegerEchelon") -> None:
        if other.length != self.length:
            raise AmbientMismatch("accumulators of different length")
        streamed = self.streamed + other.streamed
        if other.rank:
            self.add_batch(other.basis)
        self.streamed = streamed

    def rows(self) -> list[tuple[Fraction, ...]]:
        """RREF basis rows as Fractions."""
        return [tuple(Fraction(int(x), self.scale) for x in row) for row in self.basis]

    def subspace(self) -> Subspace:
        return Subspace(self.length, tuple(self.rows()), tuple(self.pivots))
