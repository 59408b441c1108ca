"""The bundled example algebras, built in code and shipped as canonical JSON."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .action import Grading, GroupSpec
from .formats import ActionBlock, AlgebraFile, emit_algebra, load_algebra, parse_algebra
from .liecore import LieAlgebra, direct_sum

__all__ = ["FIXTURE_NAMES", "build", "build_all", "load", "data_dir", "write_bundle", "s3_group"]

FIXTURE_NAMES = (
    "sl2",
    "gl2",
    "heisenberg_h3",
    "abelian2",
    "solvable2",
    "gl2_z2graded",
    "gl4sub_s3graded",
    "gl2_psi_action",
    "gl2_e0e1_action",
    "sl2sl2_swap",
    "2gl2_s3graded",
    "sl2_semidirect_q2",
)

_GL2_NAMES = ["E11", "E12", "E21", "E22"]


def _sl2() -> LieAlgebra:
    return LieAlgebra.from_brackets(3, {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}}, ["e", "f", "h"], "sl2")


def _gl2(names=None, name="gl2") -> LieAlgebra:
    # [Eij, Ekl] = delta_jk Eil - delta_li Ekj
    return LieAlgebra.from_brackets(
        4,
        {(0, 1): {1: 1}, (0, 2): {2: -1}, (1, 2): {0: 1, 3: -1}, (1, 3): {1: 1}, (2, 3): {2: -1}},
        names or _GL2_NAMES,
        name,
    )


def s3_group() -> GroupSpec:
    """S_3 with composition (p q)(i) = p(q(i)); elements e, (12), (23), (13), (123), (132)."""
    perms = [(0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1)]
    names = ["e", "(12)", "(23)", "(13)", "(123)", "(132)"]
    table = [[perms.index(tuple(p[q[i]] for i in range(3))) for q in perms] for p in perms]
    return GroupSpec.from_table(table, names)


def _z2() -> GroupSpec:
    return GroupSpec.cyclic(2, ["0", "1"])


def _two_gl2(name: str, names) -> LieAlgebra:
    s = direct_sum(_gl2(), _gl2(), name=name)
    return LieAlgebra(s.c, names, name)


def _s3_degrees(g: GroupSpec) -> Grading:
    return Grading.make(g, ["e", "(12)", "(12)", "e", "e", "(23)", "(23)", "e"])


def build(name: str) -> AlgebraFile:
    if name == "sl2":
        return AlgebraFile(_sl2())
    if name == "gl2":
        return AlgebraFile(_gl2())
    if name == "heisenberg_h3":
        return AlgebraFile(LieAlgebra.from_brackets(3, {(0, 1): {2: 1}}, ["x", "y", "z"], "heisenberg_h3"))
    if name == "abelian2":
        return AlgebraFile(LieAlgebra.from_brackets(2, {}, ["a", "b"], "abelian2"))
    if name == "solvable2":
        return AlgebraFile(LieAlgebra.from_brackets(2, {(0, 1): {1: 1}}, ["x", "y"], "solvable2"))
    if name == "gl2_z2graded":
        return AlgebraFile(_gl2(name=name), Grading.make(_z2(), ["0", "1", "1", "0"]))
    if name == "gl4sub_s3graded":
        g = s3_group()
        names = ["e11", "e12", "e21", "e22", "e33", "e34", "e43", "e44"]
        return AlgebraFile(_two_gl2(name, names), _s3_degrees(g))
    if name == "2gl2_s3graded":
        g = s3_group()
        names = [f"{x}_{k}" for k in (1, 2) for x in _GL2_NAMES]
        return AlgebraFile(_two_gl2(name, names), _s3_degrees(g))
    if name == "gl2_psi_action":
        psi = [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]
        g = _z2()
        return AlgebraFile(_gl2(name=name), action=ActionBlock("group", group=g, matrices={g.normalize("1"): _mat(psi)}))
    if name == "gl2_e0e1_action":
        e0 = [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]]
        e1 = [[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]
        block = ActionBlock(
            "custom",
            operators=(_mat(e0), _mat(e1)),
            names=("e0", "e1"),
            comultiplication=({(0, 0): 1, (1, 1): 1}, {(0, 1): 1, (1, 0): 1}),
            counit=(1, 0),
        )
        return AlgebraFile(_gl2(name=name), action=block)
    if name == "sl2sl2_swap":
        s = direct_sum(_sl2(), _sl2(), name=name)
        L = LieAlgebra(s.c, ["e_1", "f_1", "h_1", "e_2", "f_2", "h_2"], name)
        swap = [[int((i + 3) % 6 == j) for j in range(6)] for i in range(6)]
        g = _z2()
        return AlgebraFile(L, action=ActionBlock("group", group=g, matrices={g.normalize("1"): _mat(swap)}))
    if name == "sl2_semidirect_q2":
        # sl2 acting on its natural module span(v1, v2)
        br = {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}, (0, 4): {3: 1}, (1, 3): {4: 1}, (2, 3): {3: 1}, (2, 4): {4: -1}}
        return AlgebraFile(LieAlgebra.from_brackets(5, br, ["e", "f", "h", "v1", "v2"], name))
    raise KeyError(f"unknown fixture {name!r}")


def _mat(m):
    from fractions import Fraction

    return tuple(tuple(Fraction(x) for x in row) for row in m)


def build_all() -> dict[str, AlgebraFile]:
    return {n: build(n) for n in FIXTURE_NAMES}


def data_dir() -> Path:
    return Path(str(resources.files("codimlab") / "data"))


def load(name: str, directory=None) -> AlgebraFile:
    """Load a bundled fixture (or one from ``directory``) by name."""
    base = Path(directory) if directory is not None else data_dir()
    return load_algebra(base / f"{name}.json")


def write_bundle(directory=None) -> list[Path]:
    """Regenerate the bundled JSON files from the builders."""
    base = Path(directory) if directory is not None else data_dir()
    base.mkdir(parents=True, exist_ok=True)
    out = []
    for n in FIXTURE_NAMES:
        text = emit_algebra(build(n))
        parse_algebra(text)
        p = base / f"{n}.json"
        p.write_text(text)
        out.append(p)
    return out
