"""Built-in verification suite over the bundled fixtures.

Every check prints one deterministic line; ``run_suite`` returns the
lines and the number of failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import codim, exponent, fixtures, oracle, polyid, symrep
from .action import Grading, GroupSpec, trivial_action
from .formats import FormatError, canonical_json, exponent_report_dict
from .liecore import LieAlgebra, nilradical

__all__ = ["Check", "CheckFailed", "SuiteContext", "CHECKS", "run_suite", "TAGS"]


class CheckFailed(AssertionError):
    pass


class MissingFixture(CheckFailed):
    pass


@dataclass
class SuiteContext:
    directory: Path | None = None
    threads: int = 1
    _cache: dict = field(default_factory=dict)

    def fixture(self, name: str):
        if name not in self._cache:
            base = self.directory if self.directory is not None else fixtures.data_dir()
            path = Path(base) / f"{name}.json"
            if not path.exists():
                raise MissingFixture(f"missing fixture {name} ({path.name})")
            try:
                self._cache[name] = fixtures.load_algebra(path)
            except FormatError as exc:
                raise CheckFailed(f"fixture {name} does not parse: {exc}") from None
        return self._cache[name]


@dataclass(frozen=True)
class Check:
    criterion: int
    tag: str
    name: str
    run: Callable[[SuiteContext], str]


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise CheckFailed(msg)


# 1 -------------------------------------------------------------------------


def _poly(n, terms):
    return polyid.MultilinearHPolynomial.make(n, terms)


def _identity_checks(ctx: SuiteContext) -> str:
    out = []
    gr = ctx.fixture("gl2_z2graded")
    a = gr.action_spec()
    _expect(polyid.is_identity(gr.algebra, a, _poly(2, [(1, (1, 2), ("0", "0"))])).holds, "[x^(0), y^(0)] fails on graded gl2")
    out.append("[x^(0),y^(0)]")
    g4 = ctx.fixture("gl4sub_s3graded")
    a4 = g4.action_spec()
    _expect(polyid.is_identity(g4.algebra, a4, _poly(2, [(1, (1, 2), ("(12)", "(23)"))])).holds, "[x^((12)), y^((23))] fails")
    _expect(polyid.is_identity(g4.algebra, a4, _poly(2, [(1, (1, 2), ("e", "e"))])).holds, "[x^(e), y^(e)] fails")
    out.append("[x^((12)),y^((23))], [x^(e),y^(e)]")
    ps = ctx.fixture("gl2_psi_action")
    ap = ps.action_spec()
    f = _poly(2, [(1, (1, 2), (g, h)) for g in ("0", "1") for h in ("0", "1")])
    _expect(polyid.is_identity(ps.algebra, ap, f).holds, "[x + x^psi, y + y^psi] fails")
    out.append("[x+x^psi,y+y^psi]")
    ee = ctx.fixture("gl2_e0e1_action")
    ae = ee.action_spec()
    _expect(polyid.is_identity(ee.algebra, ae, _poly(2, [(1, (1, 2), ("e0", "e0"))])).holds, "[x^e0, y^e0] fails")
    res = polyid.is_identity(ee.algebra, ae, _poly(2, [(1, (1, 2), ("e1", "e1"))]))
    _expect(not res.holds and res.witness is not None, "[x^e1, y^e1] should fail with a witness")
    names = ee.algebra.basis_names
    _expect(any(res.value), "witness value is zero")
    out.append(f"[x^e0,y^e0]; [x^e1,y^e1] fails at ({names[res.witness[0]]}, {names[res.witness[1]]})")
    return "; ".join(out)


# 2, 3 ------------------------------------------------------------------------


def _duality(ctx: SuiteContext) -> str:
    parts = []
    for name in ("gl2_z2graded", "gl4sub_s3graded"):
        f = ctx.fixture(name)
        vals = []
        for n in range(1, 6):
            g = codim.codim_graded(f.algebra, f.grading, n, ctx.threads).value
            h = codim.codim_hopf(f.algebra, f.action_spec(), n, ctx.threads).value
            _expect(g == h, f"{name} n={n}: graded {g} != hopf {h}")
            vals.append(g)
        parts.append(f"{name} {vals}")
    return "; ".join(parts)


def _inclusion_exclusion(ctx: SuiteContext) -> str:
    parts = []
    for name in ("gl4sub_s3graded", "2gl2_s3graded"):
        f = ctx.fixture(name)
        vals = []
        for n in range(1, 5):
            ie = codim.inclusion_exclusion_graded(f.algebra, f.grading, n)
            g = codim.codim_graded(f.algebra, f.grading, n, ctx.threads).value
            _expect(ie == g, f"{name} n={n}: inclusion-exclusion {ie} != graded {g}")
            vals.append(g)
        parts.append(f"{name} {vals}")
    return "; ".join(parts)


# 4 -------------------------------------------------------------------------


def _sandwich(ctx: SuiteContext) -> str:
    total = 0
    for name in fixtures.FIXTURE_NAMES:
        f = ctx.fixture(name)
        L = f.algebra
        reports = []
        top = 4 if L.dim <= 6 else 3
        for n in range(1, top + 1):
            reports.append(codim.codim_ordinary(L, n, ctx.threads))
            reports.append(codim.codim_hopf(L, f.action_spec(), n, ctx.threads))
            if f.grading is not None:
                reports.append(codim.codim_graded(L, f.grading, n, ctx.threads))
        bad = codim.bounds_audit(reports)
        _expect(not bad, f"{name}: {bad[0]}" if bad else "")
        total += len(reports)
    return f"{total} reports, 0 violations"


# 5 -------------------------------------------------------------------------

_EXPECTED_D = (
    ("sl2", None, 3, True),
    ("sl2sl2_swap", "trivial", 3, True),
    ("sl2sl2_swap", None, 6, True),
    ("2gl2_s3graded", None, 3, False),
    ("heisenberg_h3", None, 0, True),
    ("gl2", None, 3, False),
)


def _exponents(ctx: SuiteContext) -> str:
    out = []
    for name, mode, want, need_exact in _EXPECTED_D:
        f = ctx.fixture(name)
        a = trivial_action(f.algebra.dim) if mode == "trivial" else f.action_spec()
        rep = exponent.exponent(f.algebra, a)
        _expect(rep.d == want, f"d({name}{'' if mode is None else ', ' + mode}) = {rep.d}, expected {want}")
        if need_exact:
            _expect(rep.exactness == "exact", f"d({name}) is only a {rep.exactness}")
        out.append(f"{name}{'' if mode is None else '/' + mode}={rep.d}")
    h = ctx.fixture("heisenberg_h3").algebra
    _, p = nilradical(h)
    z1 = Grading.make(GroupSpec.cyclic(1, ["e"]), ["e"] * h.dim)
    for n in range(p, p + 3):
        v = codim.codim_graded(h, z1, n, ctx.threads).value
        _expect(v == 0, f"heisenberg c_{n}^gr = {v}")
    out.append(f"heisenberg c_n^gr = 0 for n >= p = {p}")
    return ", ".join(out)


# 6 -------------------------------------------------------------------------


def _simplicity(ctx: SuiteContext) -> str:
    rows = []
    for name in fixtures.FIXTURE_NAMES:
        f = ctx.fixture(name)
        v = exponent.simplicity_criterion(f.algebra, f.action_spec())
        _expect(v.consistent, f"{name}: d=dim {v.d_equals_dim}, semisimple {v.semisimple}, H-simple {v.h_simple}")
        rows.append(f"{name}:{int(v.d_equals_dim)}{int(v.semisimple)}{int(v.h_simple)}")
    return " ".join(rows)


# 7 -------------------------------------------------------------------------


def _cocharacters(ctx: SuiteContext) -> str:
    out = []
    for name, top in (("sl2", 5), ("gl2_z2graded", 4)):
        f = ctx.fixture(name)
        L, a = f.algebra, f.action_spec()
        d = exponent.exponent(L, a).d
        _, p = nilradical(L)
        for n in range(1, top + 1):
            rep = symrep.cocharacter(L, a, n, d, p)
            c = codim.codim_hopf(L, a, n, ctx.threads).value
            _expect(rep.dimension_sum() == c, f"{name} n={n}: sum m*dim = {rep.dimension_sum()} != c_n = {c}")
            _expect(all(isinstance(m, int) and m >= 0 for m in rep.multiplicities.values()), f"{name} n={n}: bad multiplicity")
            bad = symrep.multiplicity_bound_audit(rep, d, p)
            _expect(not bad, f"{name} n={n}: {bad[0]}" if bad else "")
        out.append(f"{name} n<={top} (d={d}, p={p})")
    return "; ".join(out)


# 8 -------------------------------------------------------------------------


def _nilpotent_modes(name: str, L: LieAlgebra):
    """(mode label, callable n -> value) for every mode available on a nilpotent fixture."""
    modes = [
        ("ordinary", lambda n: codim.codim_ordinary(L, n).value),
        ("hopf", lambda n: codim.codim_hopf(L, trivial_action(L.dim), n).value),
        ("graded/trivial", lambda n: codim.codim_graded(L, Grading.make(GroupSpec.cyclic(1, ["e"]), ["e"] * L.dim), n).value),
    ]
    if name == "heisenberg_h3":
        z2 = GroupSpec.cyclic(2, ["0", "1"])
        g = Grading.make(z2, ["1", "1", "0"])
        neg = [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]
        modes.append(("graded/z2", lambda n: codim.codim_graded(L, g, n).value))
        modes.append(("gaction/z2", lambda n: codim.codim_gaction(L, z2, {"1": neg}, n).value))
    return modes


def _nilpotency(ctx: SuiteContext) -> str:
    out = []
    for name in fixtures.FIXTURE_NAMES:
        L = ctx.fixture(name).algebra
        n_rad, p = nilradical(L)
        if n_rad.dim != L.dim:
            continue
        for label, fn in _nilpotent_modes(name, L):
            for n in range(p, p + 3):
                v = fn(n)
                _expect(v == 0, f"{name} {label}: c_{n} = {v} with p = {p}")
        out.append(f"{name} (p={p})")
    _expect(bool(out), "no nilpotent fixture found")
    return ", ".join(out)


# 9 -------------------------------------------------------------------------


def _regev(ctx: SuiteContext) -> str:
    grid, vals = polyid.regev_matrix_unit_values(2)
    scalar = (vals[:, 0, 1] == 0) & (vals[:, 1, 0] == 0) & (vals[:, 0, 0] == vals[:, 1, 1])
    _expect(bool(scalar.all()), f"{int((~scalar).sum())} values are not central")
    nz = int(np.count_nonzero(vals[:, 0, 0]))
    _expect(nz > 0, "all values vanish")
    return f"{grid.shape[0]} substitutions, {nz} nonzero central values"


# 10 ------------------------------------------------------------------------


def _oracle(ctx: SuiteContext) -> str:
    done = []
    for name in fixtures.FIXTURE_NAMES:
        f = ctx.fixture(name)
        L = f.algebra
        if L.dim > 3:
            continue
        a = f.action_spec()
        for n in range(1, 5):
            want = oracle.oracle_codim(L.c, n)
            got = codim.codim_ordinary(L, n, ctx.threads).value
            _expect(got == want, f"{name} n={n}: ordinary {got} != oracle {want}")
            if a.origin != "trivial":
                want_h = oracle.oracle_codim(L.c, n, a.operators)
                got_h = codim.codim_hopf(L, a, n, ctx.threads).value
                _expect(got_h == want_h, f"{name} n={n}: hopf {got_h} != oracle {want_h}")
            if f.grading is not None:
                want_g = oracle.oracle_codim_graded(L.c, f.grading.degrees, n)
                got_g = codim.codim_graded(L, f.grading, n, ctx.threads).value
                _expect(got_g == want_g, f"{name} n={n}: graded {got_g} != oracle {want_g}")
        done.append(name)
    return f"dim <= 3 fixtures {done}, n <= 4"


# 11 ------------------------------------------------------------------------


def deterministic_outputs(ctx: SuiteContext, threads: int) -> str:
    """Text of codim tables, an exponent report and a cocharacter table, without timing."""
    parts = []
    for name in ("gl2_z2graded", "2gl2_s3graded", "gl2_psi_action"):
        f = ctx.fixture(name)
        for n in range(1, 5):
            parts.append(str(codim.codim_hopf(f.algebra, f.action_spec(), n, threads).row(timing=False)))
            if f.grading is not None:
                parts.append(str(codim.codim_graded(f.algebra, f.grading, n, threads).row(timing=False)))
    f = ctx.fixture("2gl2_s3graded")
    parts.append(canonical_json(exponent_report_dict(exponent.exponent(f.algebra, f.action_spec()))))
    g = ctx.fixture("gl2_z2graded")
    rep = symrep.cocharacter(g.algebra, g.action_spec(), 4)
    parts += [f"{lam},{m}" for lam, m in sorted(rep.multiplicities.items(), reverse=True)]
    return "\n".join(parts)


def _determinism(ctx: SuiteContext) -> str:
    one = deterministic_outputs(ctx, 1)
    again = deterministic_outputs(ctx, 1)
    four = deterministic_outputs(ctx, 4)
    _expect(one == again, "two runs with one thread differ")
    _expect(one == four, "outputs differ between 1 and 4 threads")
    return f"{len(one.encode())} bytes identical across runs and thread counts 1, 4"


CHECKS = (
    Check(1, "identity", "identity membership", _identity_checks),
    Check(2, "duality", "graded = hopf through the dual group algebra", _duality),
    Check(3, "inclusion_exclusion", "inclusion-exclusion over abelian subgroups", _inclusion_exclusion),
    Check(4, "sandwich", "c_n <= c_n^H <= m^n c_n and c_n^H <= (dim L)^(n+1)", _sandwich),
    Check(5, "exponent", "exponent values", _exponents),
    Check(6, "simplicity", "d = dim L iff semisimple and H-simple", _simplicity),
    Check(7, "cocharacter", "cocharacter consistency", _cocharacters),
    Check(8, "nilpotency", "c_n^H = 0 for n >= p on nilpotent algebras", _nilpotency),
    Check(9, "regev", "central values of the doubly alternating polynomial on M_2", _regev),
    Check(10, "oracle", "engines against the dense brute-force oracle", _oracle),
    Check(11, "determinism", "byte-identical outputs", _determinism),
)

TAGS = tuple(c.tag for c in CHECKS)


def run_suite(directory=None, threads: int = 1, filter_tag: str | None = None, echo: Callable[[str], None] | None = None) -> tuple[list[str], int]:
    """Run the checks (optionally only those whose tag contains ``filter_tag``)."""
    ctx = SuiteContext(Path(directory) if directory is not None else None, threads)
    selected = [c for c in CHECKS if filter_tag is None or filter_tag in c.tag]
    if not selected:
        raise ValueError(f"no check matches {filter_tag!r}; tags are {', '.join(TAGS)}")
    lines, failures = [], 0
    for c in selected:
        try:
            detail = c.run(ctx)
            line = f"PASS [{c.criterion}] {c.tag}: {detail}"
        except CheckFailed as exc:
            failures += 1
            line = f"FAIL [{c.criterion}] {c.tag}: {exc}"
        lines.append(line)
        if echo is not None:
            echo(line)
    summary = f"{len(selected) - failures} passed, {failures} failed"
    lines.append(summary)
    if echo is not None:
        echo(summary)
    return lines, failures
