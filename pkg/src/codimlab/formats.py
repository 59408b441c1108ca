"""JSON formats for algebras, polynomials and exponent certificates.

Rationals are written as text ("3", "-1/2").  ``emit_*`` functions produce
a canonical layout so that parse followed by emit reproduces a canonical
file byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .action import (
    ActionSpec,
    Grading,
    GroupSpec,
    custom_action,
    from_grading,
    from_group_action,
    trivial_action,
    verify_module_algebra,
)
from .exactla import Subspace, as_fraction
from .exponent import ExponentCertificate
from .liecore import LieAlgebra
from .polyid import MultilinearHPolynomial

__all__ = [
    "FormatError",
    "ActionBlock",
    "AlgebraFile",
    "parse_algebra",
    "load_algebra",
    "emit_algebra",
    "algebra_to_dict",
    "parse_polynomial",
    "load_polynomial",
    "emit_polynomial",
    "parse_certificate",
    "emit_certificate",
    "canonical_json",
    "rational_text",
    "exponent_report_dict",
]


class FormatError(ValueError):
    """Malformed input; ``where`` is "line L, column C" or a JSON path."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def rational_text(x) -> str:
    return str(Fraction(x))


def _rat(x, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise FormatError(f"expected a rational as text, got {x!r}", where)
    try:
        return as_fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {x!r}: {exc}", where) from None


def _need(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError("expected an object", where)
    if key not in obj:
        raise FormatError(f"missing key {key!r}", where)
    return obj[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"expected an integer, got {x!r}", where)
    return x


def _matrix(rows, dim: int, where: str) -> tuple:
    if not isinstance(rows, list) or len(rows) != dim:
        raise FormatError(f"expected {dim} rows", where)
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise FormatError(f"expected {dim} entries", f"{where}[{r}]")
        out.append(tuple(_rat(x, f"{where}[{r}][{c}]") for c, x in enumerate(row)))
    return tuple(out)


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None


# groups -------------------------------------------------------------------


def _parse_group(obj, where: str) -> GroupSpec:
    kind = _need(obj, "kind", where)
    try:
        if kind == "table":
            names = _need(obj, "names", where)
            table = _need(obj, "table", where)
            if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
                raise FormatError("names must be a list of strings", f"{where}.names")
            idx = {x: i for i, x in enumerate(names)}
            rows = []
            for r, row in enumerate(table):
                try:
                    rows.append([idx[x] for x in row])
                except (KeyError, TypeError):
                    raise FormatError("table entries must be element names", f"{where}.table[{r}]") from None
            g0 = obj.get("g0")
            flags = None
            if g0 is not None:
                unknown = [x for x in g0 if x not in idx]
                if unknown:
                    raise FormatError(f"unknown element {unknown[0]!r}", f"{where}.g0")
                flags = [x in set(g0) for x in names]
            return GroupSpec.from_table(rows, names, flags)
        if kind == "abelian":
            inv = _need(obj, "invariants", where)
            return GroupSpec.abelian([_int(x, f"{where}.invariants") for x in inv])
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc), where) from None
    raise FormatError(f"unknown group kind {kind!r}", f"{where}.kind")


def _group_dict(g: GroupSpec) -> dict:
    if g.kind == "abelian":
        return {"kind": "abelian", "invariants": list(g.invariants)}
    out = {"kind": "table", "names": list(g.names), "table": [[g.names[x] for x in row] for row in g.table]}
    if not all(g.g0):
        out["g0"] = [x for x, f in zip(g.names, g.g0) if f]
    return out


def _element(g: GroupSpec, x, where: str):
    try:
        if g.kind == "table":
            if not isinstance(x, str):
                raise ValueError(f"expected an element name, got {x!r}")
            return g.normalize(x)
        if not isinstance(x, list):
            raise ValueError(f"expected an integer vector, got {x!r}")
        return g.normalize(x)
    except ValueError as exc:
        raise FormatError(str(exc), where) from None


def _element_json(g: GroupSpec, x):
    return g.names[x] if g.kind == "table" else list(x)


# algebras -----------------------------------------------------------------


@dataclass
class ActionBlock:
    """Action data as written in a file: a group by generator matrices, or explicit operators."""

    kind: str
    group: GroupSpec | None = None
    matrices: dict = field(default_factory=dict)
    operators: tuple = ()
    names: tuple = ()
    comultiplication: tuple | None = None
    counit: tuple | None = None


@dataclass
class AlgebraFile:
    algebra: LieAlgebra
    grading: Grading | None = None
    action: ActionBlock | None = None

    def action_spec(self) -> ActionSpec:
        """The action used for H-codimensions: the action block, else the grading, else trivial."""
        L = self.algebra
        if self.action is not None:
            b = self.action
            if b.kind == "group":
                return from_group_action(L, b.group, b.matrices)
            return custom_action(L.dim, b.operators, b.comultiplication, b.counit, b.names)
        if self.grading is not None:
            return from_grading(L, self.grading)
        return trivial_action(L.dim)

    def group_action(self) -> ActionSpec:
        if self.action is None or self.action.kind != "group":
            raise FormatError("algebra file has no group action block")
        return from_group_action(self.algebra, self.action.group, self.action.matrices)


def _parse_action(obj, dim: int, where: str) -> ActionBlock:
    kind = _need(obj, "kind", where)
    if kind == "group":
        g = _parse_group(_need(obj, "group", where), f"{where}.group")
        mats = _need(obj, "elements", where)
        if not isinstance(mats, dict):
            raise FormatError("elements must map element names to matrices", f"{where}.elements")
        out = {}
        for name, m in mats.items():
            key = _element(g, name if g.kind == "table" else [int(x) for x in name.split(",")], f"{where}.elements")
            out[key] = _matrix(m, dim, f"{where}.elements.{name}")
        return ActionBlock("group", group=g, matrices=out)
    if kind == "custom":
        ops_raw = _need(obj, "operators", where)
        if not isinstance(ops_raw, list) or not ops_raw:
            raise FormatError("operators must be a nonempty list", f"{where}.operators")
        ops = tuple(_matrix(m, dim, f"{where}.operators[{t}]") for t, m in enumerate(ops_raw))
        names = tuple(obj.get("names", [f"h{i}" for i in range(len(ops))]))
        if len(names) != len(ops):
            raise FormatError("one name per operator", f"{where}.names")
        comul = None
        if "comultiplication" in obj:
            raw = obj["comultiplication"]
            if not isinstance(raw, list) or len(raw) != len(ops):
                raise FormatError("one tensor per operator", f"{where}.comultiplication")
            comul = []
            for t, terms in enumerate(raw):
                d = {}
                for s, trip in enumerate(terms):
                    w = f"{where}.comultiplication[{t}][{s}]"
                    if not isinstance(trip, list) or len(trip) != 3:
                        raise FormatError("expected [j, k, coeff]", w)
                    j, k = _int(trip[0], w), _int(trip[1], w)
                    if not (0 <= j < len(ops) and 0 <= k < len(ops)):
                        raise FormatError("operator index out of range", w)
                    d[j, k] = _rat(trip[2], w)
                comul.append(d)
            comul = tuple(comul)
        counit = None
        if "counit" in obj:
            raw = obj["counit"]
            if not isinstance(raw, list) or len(raw) != len(ops):
                raise FormatError("one counit value per operator", f"{where}.counit")
            counit = tuple(_rat(x, f"{where}.counit") for x in raw)
        return ActionBlock("custom", operators=ops, names=names, comultiplication=comul, counit=counit)
    raise FormatError(f"unknown action kind {kind!r}", f"{where}.kind")


def parse_algebra(text: str, check: bool = True) -> AlgebraFile:
    """Parse an algebra file.  With ``check`` the grading and the action are validated too."""
    obj = _loads(text)
    name = _need(obj, "name", "$")
    dim = _int(_need(obj, "dim", "$"), "$.dim")
    if dim < 0:
        raise FormatError("dim must be non-negative", "$.dim")
    basis = obj.get("basis", [f"b{i}" for i in range(dim)])
    if not isinstance(basis, list) or len(basis) != dim:
        raise FormatError(f"expected {dim} basis names", "$.basis")
    given: dict = {}
    for t, trip in enumerate(_need(obj, "brackets", "$")):
        w = f"$.brackets[{t}]"
        if not isinstance(trip, list) or len(trip) != 4:
            raise FormatError("expected [i, j, k, coeff]", w)
        i, j, k = (_int(x, w) for x in trip[:3])
        if not all(0 <= x < dim for x in (i, j, k)):
            raise FormatError("basis index out of range", w)
        if (i, j, k) in given:
            raise FormatError("repeated triple", w)
        given[i, j, k] = _rat(trip[3], w)
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j, k), v in given.items():
        c[i][j][k] = v
        if (j, i, k) not in given and i != j:
            c[j][i][k] = -v
    L = LieAlgebra(c, basis, name)
    grading = None
    if "grading" in obj:
        gobj = obj["grading"]
        g = _parse_group(_need(gobj, "group", "$.grading"), "$.grading.group")
        degs = _need(gobj, "degrees", "$.grading")
        if not isinstance(degs, list) or len(degs) != dim:
            raise FormatError(f"expected {dim} degrees", "$.grading.degrees")
        grading = Grading.make(g, [_element(g, x, f"$.grading.degrees[{i}]") for i, x in enumerate(degs)])
    action = _parse_action(obj["action"], dim, "$.action") if "action" in obj else None
    out = AlgebraFile(L, grading, action)
    if check:
        from .liecore import validate

        bad = validate(L)
        if bad:
            raise FormatError(f"structure constants fail {bad[0][0]} at {bad[0][1:]}", "$.brackets")
        try:
            if grading is not None:
                grading.check(L)
            if action is not None:
                a = out.action_spec()
                if a.comultiplication is not None and verify_module_algebra(L, a):
                    raise FormatError("operators violate the module-algebra law", "$.action")
        except FormatError:
            raise
        except ValueError as exc:
            raise FormatError(str(exc), "$.grading" if grading is not None and action is None else "$.action") from None
    return out


def load_algebra(path, check: bool = True) -> AlgebraFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_algebra(text, check)


def _matrix_json(m) -> list:
    return [[rational_text(x) for x in row] for row in m]


def algebra_to_dict(f: AlgebraFile) -> dict:
    L = f.algebra
    out: dict[str, Any] = {"name": L.name, "dim": L.dim, "basis": list(L.basis_names)}
    trips = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            for k in range(L.dim):
                if L.c[i][j][k]:
                    trips.append([i, j, k, rational_text(L.c[i][j][k])])
    out["brackets"] = trips
    if f.grading is not None:
        g = f.grading
        out["grading"] = {"group": _group_dict(g.group), "degrees": [_element_json(g.group, x) for x in g.degrees]}
    if f.action is not None:
        b = f.action
        if b.kind == "group":
            out["action"] = {
                "kind": "group",
                "group": _group_dict(b.group),
                "elements": {b.group.name(k): _matrix_json(m) for k, m in sorted(b.matrices.items())},
            }
        else:
            act: dict[str, Any] = {"kind": "custom", "names": list(b.names), "operators": [_matrix_json(m) for m in b.operators]}
            if b.comultiplication is not None:
                act["comultiplication"] = [
                    [[j, k, rational_text(x)] for (j, k), x in sorted(t.items())] for t in b.comultiplication
                ]
            if b.counit is not None:
                act["counit"] = [rational_text(x) for x in b.counit]
            out["action"] = act
    return out


def _is_scalar(x) -> bool:
    return not isinstance(x, (list, dict))


def canonical_json(obj, indent: int = 0) -> str:
    """Insertion-ordered JSON; flat lists on one line, lists of flat lists one row per line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {canonical_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(_is_scalar(x) for x in obj):
            return "[" + ", ".join(json.dumps(x) for x in obj) + "]"
        items = [inner + canonical_json(x, indent + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def emit_algebra(f: AlgebraFile) -> str:
    return canonical_json(algebra_to_dict(f)) + "\n"


# polynomials --------------------------------------------------------------


def parse_polynomial(text: str) -> MultilinearHPolynomial:
    obj = _loads(text)
    n = _int(_need(obj, "n", "$"), "$.n")
    terms = []
    for t, term in enumerate(_need(obj, "terms", "$")):
        w = f"$.terms[{t}]"
        coeff = _rat(_need(term, "coeff", w), f"{w}.coeff")
        perm = _need(term, "perm", w)
        if not isinstance(perm, list) or sorted(perm) != list(range(1, n + 1)):
            raise FormatError(f"perm must list 1..{n} once each", f"{w}.perm")
        labels = term.get("labels", [0] * n)
        if not isinstance(labels, list) or len(labels) != n:
            raise FormatError(f"expected {n} labels", f"{w}.labels")
        for x in labels:
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise FormatError("labels are operator indices or element names", f"{w}.labels")
        terms.append((coeff, perm, tuple(labels)))
    return MultilinearHPolynomial.make(n, terms)


def load_polynomial(path) -> MultilinearHPolynomial:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_polynomial(text)


def emit_polynomial(f: MultilinearHPolynomial) -> str:
    obj = {
        "n": f.n,
        "terms": [{"coeff": rational_text(c), "perm": list(p), "labels": list(lab)} for c, p, lab in f.terms],
    }
    return canonical_json(obj) + "\n"


# certificates -------------------------------------------------------------


def _subspace_json(s: Subspace) -> list:
    return [[rational_text(x) for x in v] for v in s.basis]


def _subspace(rows, dim: int, where: str) -> Subspace:
    if not isinstance(rows, list):
        raise FormatError("expected a list of rows", where)
    vecs = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise FormatError(f"expected {dim} entries", f"{where}[{r}]")
        vecs.append([_rat(x, f"{where}[{r}]") for x in row])
    return Subspace.span(vecs, dim)


def emit_certificate(cert: ExponentCertificate, chain: list[Subspace] | None = None) -> str:
    """Certificate JSON; pairs are given as subspaces and, when ``chain`` is known, as chain indices."""
    pairs = []
    for i, j in cert.pairs:
        p: dict[str, Any] = {"I": _subspace_json(i), "J": _subspace_json(j)}
        if chain is not None and i in chain and j in chain:
            p["chain_index"] = [chain.index(i), chain.index(j)]
        pairs.append(p)
    obj: dict[str, Any] = {
        "r": cert.r,
        "pairs": pairs,
        "complements": [_subspace_json(t) for t in cert.complements],
        "powers": list(cert.powers),
    }
    if cert.witness is not None:
        obj["witness"] = [[rational_text(x) for x in v] for v in cert.witness]
    return canonical_json(obj) + "\n"


def parse_certificate(text: str, dim: int) -> ExponentCertificate:
    """Read a certificate, or the certificate inside an exponent report."""
    obj = _loads(text)
    if isinstance(obj, dict) and "certificate" in obj:
        obj = obj["certificate"]
        if obj is None:
            return ExponentCertificate()
    r = _int(_need(obj, "r", "$"), "$.r")
    pairs_raw = _need(obj, "pairs", "$")
    comps_raw = _need(obj, "complements", "$")
    powers = _need(obj, "powers", "$")
    if not (len(pairs_raw) == len(comps_raw) == len(powers) == r):
        raise FormatError("r, pairs, complements and powers disagree in length", "$")
    pairs = [
        (_subspace(_need(p, "I", f"$.pairs[{k}]"), dim, f"$.pairs[{k}].I"), _subspace(_need(p, "J", f"$.pairs[{k}]"), dim, f"$.pairs[{k}].J"))
        for k, p in enumerate(pairs_raw)
    ]
    comps = [_subspace(t, dim, f"$.complements[{k}]") for k, t in enumerate(comps_raw)]
    qs = [_int(q, "$.powers") for q in powers]
    witness = None
    if "witness" in obj:
        witness = tuple(tuple(_rat(x, "$.witness") for x in v) for v in obj["witness"])
    return ExponentCertificate(pairs, comps, qs, witness)


def exponent_report_dict(rep) -> dict:
    cert = None
    if rep.certificate is not None and rep.certificate.r:
        cert = json.loads(emit_certificate(rep.certificate, rep.chain))
    return {
        "d": rep.d,
        "method": rep.method,
        "exactness": rep.exactness,
        "diagnostics": list(rep.diagnostics),
        "certificate": cert,
    }
