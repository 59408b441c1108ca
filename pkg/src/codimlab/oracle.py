"""Brute-force codimensions: dense evaluation matrices and fraction-free elimination.

Deliberately independent of the streaming engines: commutators are
evaluated by direct recursion on Fraction vectors, the whole matrix is
materialized, and its rank comes from Bareiss elimination on integers.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import lcm
from typing import Sequence

__all__ = ["bareiss_rank", "oracle_codim", "oracle_codim_graded"]


def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by Bareiss elimination after clearing denominators."""
    m = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = lcm(*(x.denominator for x in fr)) if fr else 1
        m.append([int(x * den) for x in fr])
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            a = m[r][col]
            m[r] = [(p * m[r][c] - a * m[rank][c]) // prev for c in range(ncols)]
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def _bracket(c, u, v):
    d = len(u)
    out = [Fraction(0)] * d
    for i in range(d):
        if not u[i]:
            continue
        for j in range(d):
            if v[j]:
                s = u[i] * v[j]
                row = c[i][j]
                for k in range(d):
                    if row[k]:
                        out[k] += s * row[k]
    return out


def _apply(op, v):
    return [sum((op[r][c] * v[c] for c in range(len(v))), Fraction(0)) for r in range(len(v))]


def _left_normed(c, vectors):
    acc = vectors[0]
    for v in vectors[1:]:
        acc = _bracket(c, acc, v)
    return acc


def oracle_codim(c, n: int, operators: Sequence | None = None) -> int:
    """c_n^H from structure constants and operator matrices (identity when omitted).

    One row per labelled monomial [x^{h_1}_{s(1)}, ..., x^{h_n}_{s(n)}]; the
    columns run over all basis substitutions x_v = e_{i_v} and output
    coordinates.
    """
    d = len(c)
    ops = list(operators) if operators else [[[Fraction(int(r == k)) for k in range(d)] for r in range(d)]]
    basis = [[Fraction(int(i == k)) for k in range(d)] for i in range(d)]
    images = [[_apply(op, b) for b in basis] for op in ops]
    rows = []
    for labels in product(range(len(ops)), repeat=n):
        for perm in permutations(range(n)):
            row = []
            for subst in product(range(d), repeat=n):
                vecs = [images[labels[t]][subst[perm[t]]] for t in range(n)]
                row.extend(_left_normed(c, vecs))
            rows.append(row)
    return bareiss_rank(rows)


def oracle_codim_graded(c, degrees: Sequence, n: int) -> int:
    """c_n^gr straight from the definition: x_v^{(g)} runs over the basis of L^{(g)}.

    Multilinear graded polynomials split by the degree assigned to each
    variable, so the codimension is a sum of ranks over assignments.
    """
    d = len(c)
    support = sorted(set(degrees), key=repr)
    comp = {g: [i for i in range(d) if degrees[i] == g] for g in support}
    basis = [[Fraction(int(i == k)) for k in range(d)] for i in range(d)]
    total = 0
    for assign in product(support, repeat=n):
        rows = []
        for perm in permutations(range(n)):
            row = []
            for subst in product(*(comp[g] for g in assign)):
                vecs = [basis[subst[perm[t]]] for t in range(n)]
                row.extend(_left_normed(c, vecs))
            rows.append(row)
        total += bareiss_rank(rows)
    return total
