"""Codimension engines: ranks of spans of monomial evaluation vectors.

All four engines stream the evaluations of n! * m^n labelled left-normed
monomials into exact integer echelon accumulators.  When the operators'
nonzero column sets are pairwise equal or disjoint (always the case for
gradings), monomials split into blocks with disjoint supports and each
block is ranked on its own compressed coordinates.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import factorial, prod
from typing import Iterable, Sequence

import numpy as np

from .action import ActionSpec, Grading, GroupSpec, from_grading, from_group_action, trivial_action
from .exactla import IntegerEchelon
from .liecore import LieAlgebra
from .polyid import Evaluator

__all__ = [
    "CodimReport",
    "ResourceCeiling",
    "ceilings",
    "codim_hopf",
    "codim_ordinary",
    "codim_graded",
    "codim_gaction",
    "graded_block_rank",
    "inclusion_exclusion_graded",
    "bounds_audit",
]

DEFAULT_COORDS = 1 << 24
DEFAULT_MONOMIALS = 10 ** 7
_BATCH = 512


class ResourceCeiling(RuntimeError):
    def __init__(self, quantity: str, value: int, limit: int):
        super().__init__(f"{quantity} = {value} exceeds the ceiling {limit}")
        self.quantity = quantity
        self.value = value
        self.limit = limit


def ceilings() -> tuple[int, int]:
    """(coordinates per vector, streamed monomials), overridable by CODIMLAB_CEILING="coords[,monomials]"."""
    raw = os.environ.get("CODIMLAB_CEILING", "").strip()
    if not raw:
        return DEFAULT_COORDS, DEFAULT_MONOMIALS
    parts = [p.strip() for p in raw.split(",")]
    coords = int(parts[0]) if parts[0] else DEFAULT_COORDS
    mons = int(parts[1]) if len(parts) > 1 and parts[1] else DEFAULT_MONOMIALS
    return coords, mons


def _guard(d: int, n: int, monomials: int) -> None:
    coords, mons = ceilings()
    if d ** (n + 1) > coords:
        raise ResourceCeiling("(dim L)^(n+1) coordinates", d ** (n + 1), coords)
    if monomials > mons:
        raise ResourceCeiling("monomials", monomials, mons)


@dataclass(frozen=True)
class CodimReport:
    mode: str
    n: int
    value: int
    monomials_streamed: int
    millis: int = 0
    h_dim: int = 1
    algebra_dim: int = 0

    def row(self, timing: bool = True) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "value": self.value,
            "monomials": self.monomials_streamed,
            "millis": self.millis if timing else "",
        }


def _box_classes(ev: Evaluator) -> list[int] | None:
    """Class id per operator when nonzero column sets are pairwise equal or disjoint, else None."""
    sets = [frozenset(c) for c in ev.cols]
    ids: dict = {}
    out = []
    for s in sets:
        if s not in ids:
            for t in ids:
                if s & t:
                    return None
            ids[s] = len(ids)
        out.append(ids[s])
    return out


def _rank_assignments(ev: Evaluator, n: int, assignments: Sequence[tuple], box: bool) -> tuple[int, int]:
    """Rank of all monomials whose per-variable labels lie in ``assignments``.

    In box mode the caller guarantees that all assignments share one
    column box, so vectors are kept in compressed coordinates.
    """
    perms = list(permutations(range(n)))
    acc = None
    batch = []
    streamed = 0
    for lab in assignments:
        if box and any(not ev.cols[h] for h in lab):
            streamed += len(perms)
            continue
        for p in perms:
            pos_labels = tuple(lab[v] for v in p)
            if box:
                v = ev.variable_tensor(p, pos_labels).reshape(-1)
            else:
                v = ev.full_vector(p, pos_labels)
            if acc is None:
                acc = IntegerEchelon(v.shape[0])
            batch.append(v)
            streamed += 1
            if len(batch) >= _BATCH:
                acc.add_batch(_stack(batch))
                batch = []
    if batch:
        acc.add_batch(_stack(batch))
    return (acc.rank if acc is not None else 0), streamed


def _stack(rows):
    if any(r.dtype == object for r in rows):
        return np.vstack([r.astype(object) for r in rows])
    return np.vstack(rows)


def _run(tasks, threads: int):
    """Apply each zero-argument task, optionally on a thread pool; results keep task order."""
    if threads <= 1 or len(tasks) <= 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda t: t(), tasks))


def _hopf_value(ev: Evaluator, n: int, threads: int) -> tuple[int, int]:
    m = ev.m
    classes = _box_classes(ev)
    assignments = list(product(range(m), repeat=n))
    if classes is not None:
        groups: dict = {}
        for lab in assignments:
            groups.setdefault(tuple(classes[h] for h in lab), []).append(lab)
        tasks = [lambda g=g: _rank_assignments(ev, n, g, True) for g in groups.values()]
        results = _run(tasks, threads)
        return sum(r for r, _ in results), sum(s for _, s in results)
    # overlapping supports: private accumulators over contiguous chunks, merged in order
    k = max(1, min(threads, len(assignments)))
    size = -(-len(assignments) // k)
    chunks = [assignments[i:i + size] for i in range(0, len(assignments), size)]

    def work(chunk):
        acc = IntegerEchelon(ev.d ** (n + 1))
        perms = list(permutations(range(n)))
        batch = []
        for lab in chunk:
            for p in perms:
                batch.append(ev.full_vector(p, tuple(lab[v] for v in p)))
                if len(batch) >= _BATCH:
                    acc.add_batch(_stack(batch))
                    batch = []
        if batch:
            acc.add_batch(_stack(batch))
        return acc

    accs = _run([lambda c=c: work(c) for c in chunks], threads)
    total = accs[0]
    for other in accs[1:]:
        total.merge(other)
    return total.rank, total.streamed


def codim_hopf(L: LieAlgebra, a: ActionSpec, n: int, threads: int = 1, mode: str = "hopf") -> CodimReport:
    """c_n^H: rank of all n! * m^n labelled monomial evaluations."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if a.dim != L.dim:
        raise ValueError("action and algebra dimensions differ")
    t0 = time.perf_counter()
    m = a.h_dim
    total = factorial(n) * m ** n
    if L.dim == 0:
        return CodimReport(mode, n, 0, 0, 0, m, 0)
    _guard(L.dim, n, total)
    ev = Evaluator(L, a)
    value, streamed = _hopf_value(ev, n, threads)
    ms = int((time.perf_counter() - t0) * 1000)
    return CodimReport(mode, n, value, streamed, ms, m, L.dim)


def codim_ordinary(L: LieAlgebra, n: int, threads: int = 1) -> CodimReport:
    return codim_hopf(L, trivial_action(L.dim), n, threads, mode="ordinary")


def codim_gaction(L: LieAlgebra, group: GroupSpec, matrices, n: int, threads: int = 1) -> CodimReport:
    return codim_hopf(L, from_group_action(L, group, matrices), n, threads, mode="gaction")


def _compositions(n: int, m: int):
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, m - 1):
            yield (first,) + rest


def _multinomial(parts: Sequence[int]) -> int:
    out = factorial(sum(parts))
    for p in parts:
        out //= factorial(p)
    return out


def graded_block_rank(ev: Evaluator, parts: Sequence[int]) -> tuple[int, int]:
    """c_{n_1..n_m}: rank with the first n_1 variables in component 1, the next n_2 in component 2, ..."""
    lab = tuple(h for h, k in enumerate(parts) for _ in range(k))
    return _rank_assignments(ev, len(lab), [lab], True)


def codim_graded(L: LieAlgebra, g: Grading, n: int, threads: int = 1) -> CodimReport:
    """Sum over compositions of n of multinomial * c_{n_1..n_m}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t0 = time.perf_counter()
    a = from_grading(L, g)
    m = a.h_dim
    if L.dim == 0:
        return CodimReport("graded", n, 0, 0, 0, m, 0)
    comps = list(_compositions(n, m))
    _guard(L.dim, n, factorial(n) * len(comps))
    ev = Evaluator(L, a)
    results = _run([lambda c=c: graded_block_rank(ev, c) for c in comps], threads)
    value = sum(_multinomial(c) * r for c, (r, _) in zip(comps, results))
    streamed = sum(s for _, s in results)
    ms = int((time.perf_counter() - t0) * 1000)
    return CodimReport("graded", n, value, streamed, ms, m, L.dim)


def _graded_part(L: LieAlgebra, g: Grading, elements: frozenset) -> tuple[LieAlgebra, Grading]:
    idx = [i for i, x in enumerate(g.degrees) if x in elements]
    sub = L.subalgebra(idx, name=f"{L.name}_part")
    return sub, Grading(g.group, tuple(g.degrees[i] for i in idx))


def inclusion_exclusion_graded(L: LieAlgebra, g: Grading, n: int) -> int:
    """c_n^gr through the abelian subgroups generated by subsets of the support.

    Sums (-1)^(|F|-1) c_n^gr(L_K) over nonempty families F of those subgroups,
    K being the intersection of the family.  Values per K are memoized.
    """
    grp = g.group
    supp = g.support()
    if not grp.is_finite:
        raise ValueError("inclusion-exclusion needs a finite group")
    whole = grp.generated_subgroup(supp)
    if all(grp.commute(x, y) for x in whole for y in whole):
        subgroups = [whole]
    else:
        subgroups = []
        for k in range(1, len(supp) + 1):
            for sub in combinations(supp, k):
                h = grp.generated_subgroup(sub)
                if all(grp.commute(x, y) for x in h for y in h) and h not in subgroups:
                    subgroups.append(h)
    memo: dict = {}

    def value(k: frozenset) -> int:
        if k not in memo:
            part, pg = _graded_part(L, g, k)
            memo[k] = codim_graded(part, pg, n).value if part.dim else 0
        return memo[k]

    total = 0
    for size in range(1, len(subgroups) + 1):
        sign = 1 if size % 2 else -1
        for fam in combinations(subgroups, size):
            inter = frozenset.intersection(*fam)
            total += sign * value(inter)
    return total


def bounds_audit(reports: Iterable[CodimReport]) -> list[str]:
    """Violations of c_n <= c_n^H <= m^n c_n and c_n^H <= (dim L)^(n+1)."""
    reports = list(reports)
    ordinary = {r.n: r.value for r in reports if r.mode == "ordinary"}
    out = []
    for r in reports:
        bound = r.algebra_dim ** (r.n + 1)
        if r.value > bound:
            out.append(f"{r.mode} n={r.n}: {r.value} > (dim L)^(n+1) = {bound}")
        if r.mode == "ordinary" or r.n not in ordinary:
            continue
        c = ordinary[r.n]
        if r.value < c:
            out.append(f"{r.mode} n={r.n}: {r.value} < ordinary {c}")
        if r.value > r.h_dim ** r.n * c:
            out.append(f"{r.mode} n={r.n}: {r.value} > m^n * ordinary = {r.h_dim ** r.n * c}")
    return out
