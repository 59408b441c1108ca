"""The integer d(L): certificates, chain search, semisimple fast path, simplicity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import modspin
from .action import ActionSpec, direct_sum_action, invariant, trivial_action
from .exactla import Subspace, matvec, subspace_intersect, subspace_sum
from .liecore import (
    LieAlgebra,
    annihilator,
    bracket_subspaces,
    direct_sum,
    levi_decomposition,
    lower_central_series,
    nilradical,
    solvable_radical,
)

__all__ = [
    "ExponentCertificate",
    "ExponentReport",
    "CertificateRejected",
    "NotHNiceDetected",
    "NotSemisimple",
    "SearchBudgetExceeded",
    "ConditionSearchExhausted",
    "Condition2Result",
    "check_certificate",
    "condition2_check",
    "composition_chain",
    "d_semisimple",
    "d_search",
    "exponent",
    "simplicity_criterion",
    "SimplicityVerdict",
    "sum_rule_check",
    "empirical_exponent",
]


class CertificateRejected(ValueError):
    def __init__(self, reason: str, witness=None):
        super().__init__(reason if witness is None else f"{reason}: {witness}")
        self.reason = reason
        self.witness = witness


class NotHNiceDetected(RuntimeError):
    pass


class NotSemisimple(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


class ConditionSearchExhausted(RuntimeError):
    pass


@dataclass
class ExponentCertificate:
    pairs: list = field(default_factory=list)
    complements: list = field(default_factory=list)
    powers: list = field(default_factory=list)
    witness: tuple | None = None

    @property
    def r(self) -> int:
        return len(self.pairs)


@dataclass
class ExponentReport:
    d: int
    certificate: ExponentCertificate | None
    method: str
    exactness: str
    diagnostics: list = field(default_factory=list)
    chain: list | None = None


def _module_gens(L: LieAlgebra, a: ActionSpec) -> list:
    return list(L.ad_basis) + list(a.operators)


def _trajectory(L: LieAlgebra, t: Subspace, q_bound: int) -> tuple[list[Subspace], int]:
    """W(0) = T, W(q+1) = [W(q), L] up to the first repeat; returns (states, index where the cycle starts)."""
    full = L.full()
    seen = {t: 0}
    states = [t]
    cur = t
    for q in range(1, q_bound + 1):
        cur = bracket_subspaces(L, cur, full)
        if cur in seen:
            return states, seen[cur]
        seen[cur] = q
        states.append(cur)
    raise ConditionSearchExhausted(f"trajectory did not repeat within {q_bound} steps")


def _bracket_witness(L: LieAlgebra, spaces: Sequence[Subspace]) -> tuple | None:
    """Basis vectors u_k of spaces[k] with [u_1, ..., u_r] != 0 (left-normed), by depth-first search."""
    def rec(k, acc, chosen):
        if k == len(spaces):
            return tuple(chosen)
        for u in spaces[k].basis:
            nxt = L.bracket(acc, u)
            if any(nxt):
                got = rec(k + 1, nxt, chosen + [u])
                if got is not None:
                    return got
        return None

    for u in spaces[0].basis:
        if len(spaces) == 1:
            return (u,)
        got = rec(1, u, [u])
        if got is not None:
            return got
    return None


@dataclass
class Condition2Result:
    satisfiable: bool
    powers: tuple | None = None
    witness: tuple | None = None


def _left_normed_spaces(L: LieAlgebra, spaces: Sequence[Subspace]) -> Subspace:
    cur = spaces[0]
    for s in spaces[1:]:
        cur = bracket_subspaces(L, cur, s)
        if cur.is_zero():
            break
    return cur


def condition2_check(L: LieAlgebra, complements: Sequence[Subspace], q_bound: int | None = None) -> Condition2Result:
    """Search q_k with [[T_1, L^q_1], ..., [T_r, L^q_r]] != 0.

    Each trajectory W_k(q) is followed until it repeats, so only finitely
    many power tuples need to be tried.
    """
    if not complements:
        return Condition2Result(True, (), ())
    q_bound = q_bound if q_bound is not None else 4 * L.dim * L.dim
    trajs = [_trajectory(L, t, q_bound)[0] for t in complements]
    r = len(trajs)

    def rec(k, acc, qs):
        if k == r:
            return qs
        for q, w in enumerate(trajs[k]):
            nxt = w if acc is None else bracket_subspaces(L, acc, w)
            if nxt.is_zero():
                continue
            got = rec(k + 1, nxt, qs + (q,))
            if got is not None:
                return got
        return None

    qs = rec(0, None, ())
    if qs is None:
        return Condition2Result(False)
    spaces = [trajs[k][q] for k, q in enumerate(qs)]
    return Condition2Result(True, qs, _bracket_witness(L, spaces))


def _levi_for(L: LieAlgebra, a: ActionSpec) -> Subspace:
    """An H-invariant Levi subalgebra, or NotHNiceDetected."""
    b, _ = levi_decomposition(L)
    if invariant(a, b):
        return b
    if a.origin == "group_algebra" and a.element_operators:
        avg = _averaged_levi(L, a, b)
        if avg is not None:
            return avg
    raise NotHNiceDetected("the computed Levi subalgebra is not invariant under the action")


def _averaged_levi(L: LieAlgebra, a: ActionSpec, b: Subspace) -> Subspace | None:
    """Average the graphs of the translates g.B over R; valid when R is abelian."""
    r = solvable_radical(L)
    if not bracket_subspaces(L, r, r).is_zero():
        return None
    comp = r.complement_in(L.full())
    ops = a.element_operators
    graphs = []
    for g in ops:
        gb = Subspace.span([matvec(g, v) for v in b.basis], L.dim)
        rows = []
        for x in comp.basis:
            # the unique vector of gB congruent to x modulo R
            coords = _solve_in(gb, r, x)
            if coords is None:
                return None
            rows.append(coords)
        graphs.append(rows)
    avg = []
    for i, x in enumerate(comp.basis):
        v = [Fraction(0)] * L.dim
        for rows in graphs:
            v = [p + q for p, q in zip(v, rows[i])]
        avg.append([p / len(graphs) for p in v])
    cand = Subspace.span(avg, L.dim)
    if L.is_subalgebra(cand) and invariant(a, cand) and cand.dim == comp.dim:
        return cand
    return None


def _solve_in(gb: Subspace, r: Subspace, x) -> tuple | None:
    """The element y of gb with y - x in r."""
    from .exactla import solve

    basis = list(gb.basis) + list(r.basis)
    a = [tuple(v[i] for v in basis) for i in range(len(x))]
    c = solve(a, x)
    if c is None:
        return None
    y = [Fraction(0)] * len(x)
    for ci, v in zip(c[:gb.dim], gb.basis):
        y = [p + ci * q for p, q in zip(y, v)]
    return tuple(y)


def composition_chain(L: LieAlgebra, a: ActionSpec) -> list[Subspace]:
    """Maximal chain of H-invariant ideals refining 0 <= N <= R <= L."""
    r = solvable_radical(L)
    n, _ = nilradical(L)
    if not invariant(a, r) or not invariant(a, n):
        raise NotHNiceDetected("R or N is not invariant under the action")
    gens = _module_gens(L, a)
    chain = [L.zero()]
    for lo, hi in ((L.zero(), n), (n, r), (r, L.full())):
        if hi == lo:
            continue
        chain += modspin.chain_between(gens, hi, lo)[1:]
    return chain


def _complement(L: LieAlgebra, a: ActionSpec, b: Subspace, i: Subspace, j: Subspace) -> Subspace | None:
    """T with I = J + T, T invariant under ad B and the operators."""
    gens = [L.ad(v) for v in b.basis] + list(a.operators)
    on_i = modspin.restrict(gens, i)
    j_c = Subspace.span([i.coordinates(v) for v in j.basis], i.dim)
    p = modspin.equivariant_projection(on_i, i.dim, j_c)
    if p is None:
        return None
    from .exactla import kernel

    ker = kernel(p, i.dim) if i.dim else []
    return Subspace.span([modspin._from_coords(c, i) for c in ker], L.dim)


def _irreducible_factor(gens, i: Subspace, j: Subspace) -> bool:
    sec = modspin.Section(gens, i, j)
    return sec.dim > 0 and modspin.find_submodule(sec.gens, sec.dim) is None


def _value(L: LieAlgebra, anns: Sequence[Subspace]) -> int:
    cur = L.full()
    for x in anns:
        cur = subspace_intersect(cur, x)
    return L.dim - cur.dim


def check_certificate(L: LieAlgebra, a: ActionSpec | None, cert: ExponentCertificate) -> int:
    """Verify every condition of the certificate; returns dim L - dim of the annihilator intersection."""
    a = a or trivial_action(L.dim)
    if not (len(cert.pairs) == len(cert.complements) == len(cert.powers)):
        raise CertificateRejected("pairs, complements and powers differ in length")
    if cert.r == 0:
        return 0
    gens = _module_gens(L, a)
    b = L.full() if L.is_semisimple() else _levi_for(L, a)
    b_ads = [L.ad(v) for v in b.basis]
    anns = []
    spaces = []
    for k, ((i, j), t, q) in enumerate(zip(cert.pairs, cert.complements, cert.powers)):
        if not i.contains_subspace(j):
            raise CertificateRejected(f"J_{k + 1} is not inside I_{k + 1}")
        for name, u in ((f"I_{k + 1}", i), (f"J_{k + 1}", j)):
            if not L.is_ideal(u):
                raise CertificateRejected(f"{name} is not an ideal")
            if not invariant(a, u):
                raise CertificateRejected(f"{name} is not H-invariant")
        if not _irreducible_factor(gens, i, j):
            raise CertificateRejected(f"I_{k + 1}/J_{k + 1} is not irreducible")
        if subspace_sum(t, j) != i or subspace_intersect(t, j).dim:
            raise CertificateRejected(f"T_{k + 1} is not a complement of J_{k + 1} in I_{k + 1}")
        if not invariant(a, t):
            raise CertificateRejected(f"T_{k + 1} is not H-invariant")
        if not modspin.is_stable(t, b_ads):
            raise CertificateRejected(f"T_{k + 1} is not stable under the Levi subalgebra")
        if q < 0:
            raise CertificateRejected(f"q_{k + 1} is negative")
        w = t
        for _ in range(q):
            w = bracket_subspaces(L, w, L.full())
        spaces.append(w)
        anns.append(annihilator(L, i, j))
    if _left_normed_spaces(L, spaces).is_zero():
        raise CertificateRejected("the nested bracket vanishes", tuple(cert.powers))
    if cert.witness is not None:
        acc = None
        for u, s in zip(cert.witness, spaces):
            if not s.contains(u):
                raise CertificateRejected("witness element outside its bracket space")
            acc = tuple(u) if acc is None else L.bracket(acc, u)
        if acc is None or not any(acc):
            raise CertificateRejected("witness bracket is zero")
    return _value(L, anns)


def _split_simple(L: LieAlgebra, u: Subspace) -> list[Subspace]:
    """Simple ideals inside the ideal u of a semisimple L (Killing complements)."""
    gens = list(L.ad_basis)
    sub_gens = modspin.restrict(gens, u)
    found = modspin.find_submodule(sub_gens, u.dim)
    if found is None:
        return [u]
    i = Subspace.span([modspin._from_coords(c, u) for c in found.basis], L.dim)
    km = L.killing_matrix
    perp_rows = [[sum((v[x] * km[x][y] for x in range(L.dim)), Fraction(0)) for y in range(L.dim)] for v in i.basis]
    from .exactla import kernel

    perp = Subspace.span(kernel(perp_rows, L.dim), L.dim)
    rest = subspace_intersect(perp, u)
    return _split_simple(L, i) + _split_simple(L, rest)


def d_semisimple(L: LieAlgebra, a: ActionSpec | None = None) -> ExponentReport:
    """d = largest dimension of a minimal H-invariant ideal of a semisimple L."""
    a = a or trivial_action(L.dim)
    if not L.is_semisimple():
        raise NotSemisimple("Killing form is degenerate")
    if L.dim == 0:
        return ExponentReport(0, None, "semisimple", "exact")
    simple = sorted(_split_simple(L, L.full()), key=lambda s: s.pivots)
    k = len(simple)
    reach = [[False] * k for _ in range(k)]
    for x in range(k):
        for op in a.operators:
            img = Subspace.span([matvec(op, v) for v in simple[x].basis], L.dim)
            for y in range(k):
                others = L.zero()
                for z in range(k):
                    if z != y:
                        others = subspace_sum(others, simple[z])
                if not others.contains_subspace(img):
                    reach[x][y] = True
    closures = []
    for x in range(k):
        seen, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for z in range(k):
                if reach[y][z] and z not in seen:
                    seen.add(z)
                    stack.append(z)
        closures.append(frozenset(seen))
    minimal = sorted({c for c in closures if not any(o < c for o in closures)}, key=min)
    blocks = []
    for c in minimal:
        s = L.zero()
        for x in sorted(c):
            s = subspace_sum(s, simple[x])
        blocks.append(s)
    total = sum(bk.dim for bk in blocks)
    if total != L.dim:
        raise NotHNiceDetected("invariant simple blocks do not decompose L")
    best = max(blocks, key=lambda s: (s.dim, [-p for p in s.pivots]))
    cert = ExponentCertificate([(best, L.zero())], [best], [0], _bracket_witness(L, [best]))
    diags = []
    exactness = "exact"
    for s in simple:
        if modspin.commutant_dim(modspin.restrict(list(L.ad_basis), s), s.dim) > 1:
            exactness = "lower_bound"
            diags.append(f"simple ideal of dim {s.dim} is not absolutely simple over Q")
    return ExponentReport(best.dim, cert, "semisimple", exactness, diags)


def d_search(L: LieAlgebra, a: ActionSpec | None = None, r_bound: int | None = None, budget: int = 200000) -> ExponentReport:
    """Best value over tuples of factors of one composition chain of H-invariant ideals.

    Tuples may repeat factors and have length at most ``r_bound``
    (default 2 * number of nontrivial factors).  Bracket states
    (current left-normed bracket space, set of factors used) are explored
    breadth first with memoization.
    """
    a = a or trivial_action(L.dim)
    if L.dim == 0:
        return ExponentReport(0, None, "search", "exact")
    chain = composition_chain(L, a)
    n, _ = nilradical(L)
    b = L.full() if L.is_semisimple() else _levi_for(L, a)
    gens = _module_gens(L, a)
    factors = []
    for j, i in zip(chain, chain[1:]):
        ann = annihilator(L, i, j)
        if ann.dim == L.dim:
            continue
        t = _complement(L, a, b, i, j)
        if t is None:
            raise NotHNiceDetected("no invariant B-stable complement for a chain factor")
        factors.append({"pair": (i, j), "ann": ann, "T": t})
    diags = []
    upper = L.dim - n.dim
    if not factors:
        return ExponentReport(0, None, "search", "exact", diags)
    q_bound = 4 * L.dim * L.dim
    trajs = [_trajectory(L, f["T"], q_bound)[0] for f in factors]
    r_bound = r_bound if r_bound is not None else 2 * len(factors)
    full = L.full()
    # states: (bracket space, used factor set) -> tuple of (factor, q) realizing it
    frontier = {}
    for k, tr in enumerate(trajs):
        for q, w in enumerate(tr):
            if not w.is_zero():
                frontier.setdefault((w, frozenset([k])), ((k, q),))
    seen = dict(frontier)
    if len(seen) > budget:
        raise SearchBudgetExceeded(f"more than {budget} bracket states")
    reachable: dict = {}
    for key, word in frontier.items():
        reachable.setdefault(key[1], word)
    for _ in range(r_bound - 1):
        nxt = {}
        for (space, used), word in frontier.items():
            for k, tr in enumerate(trajs):
                for q, w in enumerate(tr):
                    s = bracket_subspaces(L, space, w)
                    if s.is_zero():
                        continue
                    key = (s, used | {k})
                    if key in seen:
                        continue
                    seen[key] = nxt[key] = word + ((k, q),)
                    if len(seen) > budget:
                        raise SearchBudgetExceeded(f"more than {budget} bracket states")
        for key, word in nxt.items():
            reachable.setdefault(key[1], word)
        frontier = nxt
        if not frontier:
            break
    best_val, best_used = -1, None
    for used in sorted(reachable, key=lambda u: (len(u), sorted(u))):
        val = _value(L, [factors[k]["ann"] for k in used])
        if val > best_val:
            best_val, best_used = val, used
    word = reachable[best_used]
    spaces = [trajs[k][q] for k, q in word]
    cert = ExponentCertificate(
        pairs=[factors[k]["pair"] for k, _ in word],
        complements=[factors[k]["T"] for k, _ in word],
        powers=[q for _, q in word],
        witness=_bracket_witness(L, spaces),
    )
    exact = L.is_semisimple() or best_val == upper
    if not exact:
        exact = all(
            not modspin.hom_space(_section(gens, f1).gens, _section(gens, f1).dim, _section(gens, f2).gens, _section(gens, f2).dim)
            for f1, f2 in combinations(factors, 2)
        )
        if not exact:
            diags.append("isomorphic chain factors repeat; ideals outside the chain were not searched")
    for f in factors:
        sec = _section(gens, f)
        if modspin.commutant_dim(sec.gens, sec.dim) > 1:
            exact = False
            diags.append("a chain factor is not absolutely irreducible over Q")
            break
    return ExponentReport(best_val, cert, "search", "exact" if exact else "lower_bound", diags, chain)


def _section(gens, f) -> modspin.Section:
    i, j = f["pair"]
    return modspin.Section(gens, i, j)


def exponent(L: LieAlgebra, a: ActionSpec | None = None, certificate: ExponentCertificate | None = None) -> ExponentReport:
    a = a or trivial_action(L.dim)
    if certificate is not None:
        d = check_certificate(L, a, certificate)
        return ExponentReport(d, certificate, "certificate", "lower_bound")
    if L.is_semisimple():
        return d_semisimple(L, a)
    return d_search(L, a)


@dataclass(frozen=True)
class SimplicityVerdict:
    d_equals_dim: bool
    semisimple: bool
    h_simple: bool

    @property
    def consistent(self) -> bool:
        return self.d_equals_dim == (self.semisimple and self.h_simple)


def simplicity_criterion(L: LieAlgebra, a: ActionSpec | None = None) -> SimplicityVerdict:
    """(d == dim L, semisimple, H-simple) computed independently of each other."""
    a = a or trivial_action(L.dim)
    rep = exponent(L, a)
    semisimple = L.dim > 0 and L.is_semisimple()
    h_simple = L.dim > 0 and modspin.find_submodule(_module_gens(L, a), L.dim) is None
    return SimplicityVerdict(rep.d == L.dim, semisimple, h_simple)


def sum_rule_check(algebras: Sequence[LieAlgebra], actions: Sequence[ActionSpec] | None = None) -> list[str]:
    """d of the direct sum against the maximum over the summands."""
    actions = list(actions) if actions is not None else [trivial_action(x.dim) for x in algebras]
    total = direct_sum(*algebras)
    ta = direct_sum_action(actions)
    whole = exponent(total, ta)
    parts = [exponent(x, y) for x, y in zip(algebras, actions)]
    out = []
    if whole.d != max(p.d for p in parts):
        out.append(f"d(sum) = {whole.d} but max over summands = {max(p.d for p in parts)}")
    flags = {p.exactness for p in parts}
    if (whole.exactness == "exact") != (flags == {"exact"}):
        out.append(f"exactness of the sum is {whole.exactness}, summands give {sorted(flags)}")
    return out


def empirical_exponent(values: Sequence[int], dim: int) -> list[dict]:
    """Rows (n, c_n, c_n^(1/n) as display text, whether c_n <= dim^(n+1)); values start at n = 1."""
    if len(values) < 2:
        raise ValueError("need at least two values")
    rows = []
    for n, c in enumerate(values, start=1):
        root = c ** (1.0 / n) if c > 0 else 0.0
        rows.append({"n": n, "c_n": c, "root": f"{root:.4f}", "within_bound": c <= dim ** (n + 1)})
    return rows
