"""codimlab command line.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource ceiling.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import __version__, codim, exponent, suite, symrep
from .action import MissingComultiplication, NonHomogeneous, NotAutomorphism, RelationViolated, verify_module_algebra
from .codim import ResourceCeiling
from .formats import (
    FormatError,
    canonical_json,
    exponent_report_dict,
    load_algebra,
    load_polynomial,
    parse_certificate,
    rational_text,
)
from .liecore import nilradical, validate

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CEILING = 0, 1, 2, 3

MODES = ("ord", "gr", "hopf", "gaction", "ie")


def _out(text: str) -> None:
    sys.stdout.write(text)


def _table(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        return canonical_json([{k: r[k] for k in columns} for r in rows]) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([r[k] for k in columns])
    return buf.getvalue()


def cmd_check(args) -> int:
    f = load_algebra(args.algebra, check=False)
    L = f.algebra
    lines, ok = [], True
    bad = validate(L)
    if bad:
        ok = False
        for v in bad[:10]:
            kind, idx = v[0], v[1:]
            lines.append(f"FAIL {kind} {tuple(L.basis_names[i] for i in idx)}")
    else:
        lines.append("PASS alternation and Jacobi")
    if f.grading is not None:
        try:
            f.grading.check(L)
            lines.append("PASS grading is homogeneous")
        except NonHomogeneous as exc:
            ok = False
            lines.append(f"FAIL grading: {exc}")
    if f.action is not None:
        try:
            a = f.action_spec()
            viol = verify_module_algebra(L, a)
            if viol:
                ok = False
                t, i, j = viol[0][:3]
                lines.append(f"FAIL action law for operator {a.names[t] if t < len(a.names) else t} on ({L.basis_names[i]}, {L.basis_names[j]})")
            else:
                lines.append(f"PASS action ({a.origin}, {a.h_dim} operators)")
        except MissingComultiplication:
            lines.append("SKIP action law: no comultiplication given")
        except (NotAutomorphism, RelationViolated, ValueError) as exc:
            ok = False
            lines.append(f"FAIL action: {exc}")
    _out("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_codim(args) -> int:
    f = load_algebra(args.algebra)
    L = f.algebra
    rows = []
    for n in range(1, args.n + 1):
        if args.mode == "ord":
            rep = codim.codim_ordinary(L, n, args.threads)
        elif args.mode == "hopf":
            rep = codim.codim_hopf(L, f.action_spec(), n, args.threads)
        elif args.mode == "gaction":
            a = f.group_action()
            rep = codim.codim_hopf(L, a, n, args.threads, mode="gaction")
        else:
            if f.grading is None:
                raise FormatError("mode needs a grading block", "$.grading")
            if args.mode == "gr":
                rep = codim.codim_graded(L, f.grading, n, args.threads)
            else:
                value = codim.inclusion_exclusion_graded(L, f.grading, n)
                rep = codim.CodimReport("ie", n, value, 0, 0, f.action_spec().h_dim, L.dim)
        rows.append(rep.row(timing=not args.no_timing))
    _out(_table(rows, ["mode", "n", "value", "monomials", "millis"], args.format))
    return EXIT_OK


def cmd_exponent(args) -> int:
    f = load_algebra(args.algebra)
    L, a = f.algebra, f.action_spec()
    if args.certificate:
        try:
            with open(args.certificate) as fh:
                text = fh.read()
        except OSError as exc:
            raise FormatError(f"cannot read {args.certificate}: {exc.strerror}") from None
        cert = parse_certificate(text, L.dim)
        try:
            rep = exponent.exponent(L, a, cert)
        except exponent.CertificateRejected as exc:
            _out(canonical_json({"accepted": False, "reason": exc.reason}) + "\n")
            return EXIT_FAIL
    else:
        rep = exponent.exponent(L, a)
    _out(canonical_json(exponent_report_dict(rep)) + "\n")
    return EXIT_OK


def cmd_cocharacter(args) -> int:
    f = load_algebra(args.algebra)
    L, a = f.algebra, f.action_spec()
    d = exponent.exponent(L, a).d if L.dim else 0
    _, p = nilradical(L)
    rep = symrep.cocharacter(L, a, args.n, d, p)
    rows = [
        {"n": args.n, "partition": str(lam), "multiplicity": m, "hook_dim": symrep.hook_dim(lam)}
        for lam, m in sorted(rep.multiplicities.items(), reverse=True)
    ]
    _out(_table(rows, ["n", "partition", "multiplicity", "hook_dim"], args.format))
    bad = symrep.multiplicity_bound_audit(rep, d, p)
    for line in bad:
        sys.stderr.write(f"bound audit: {line}\n")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_identity(args) -> int:
    from .polyid import is_identity

    f = load_algebra(args.algebra)
    poly = load_polynomial(args.polynomial)
    L = f.algebra
    res = is_identity(L, f.action_spec(), poly)
    if res.holds:
        _out(canonical_json({"identity": True}) + "\n")
        return EXIT_OK
    obj = {
        "identity": False,
        "witness": [L.basis_names[i] for i in res.witness],
        "value": [rational_text(x) for x in res.value],
    }
    _out(canonical_json(obj) + "\n")
    return EXIT_FAIL


def cmd_verify(args) -> int:
    def echo(line: str) -> None:
        _out(line + "\n")
        sys.stdout.flush()

    _, failures = suite.run_suite(args.fixtures, args.threads, args.filter, echo)
    return EXIT_FAIL if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="codimlab", description="Codimensions, identities, exponents and cocharacters of Lie algebras.")
    p.add_argument("--version", action="version", version=f"codimlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate an algebra file")
    c.add_argument("algebra")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("codim", help="codimension table for n = 1..N")
    c.add_argument("algebra")
    c.add_argument("--mode", choices=MODES, default="ord")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--no-timing", action="store_true", help="leave the millis column empty")
    c.set_defaults(func=cmd_codim)

    c = sub.add_parser("exponent", help="the integer d(L) with a certificate")
    c.add_argument("algebra")
    c.add_argument("--certificate")
    c.set_defaults(func=cmd_exponent)

    c = sub.add_parser("cocharacter", help="S_n multiplicities of the relatively free module")
    c.add_argument("algebra")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.set_defaults(func=cmd_cocharacter)

    c = sub.add_parser("identity", help="test whether a multilinear polynomial vanishes")
    c.add_argument("algebra")
    c.add_argument("polynomial")
    c.set_defaults(func=cmd_identity)

    c = sub.add_parser("verify", help="run the built-in checks")
    c.add_argument("--suite", choices=("builtin",), default="builtin")
    c.add_argument("--filter")
    c.add_argument("--fixtures", help="directory holding the fixture JSON files")
    c.add_argument("--threads", type=int, default=1)
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        sys.stderr.write("error: --n must be at least 1\n")
        return EXIT_INPUT
    if getattr(args, "threads", 1) < 1:
        sys.stderr.write("error: --threads must be at least 1\n")
        return EXIT_INPUT
    try:
        return args.func(args)
    except ResourceCeiling as exc:
        sys.stderr.write(f"resource ceiling: {exc}\n")
        return EXIT_CEILING
    except FormatError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (NonHomogeneous, NotAutomorphism, RelationViolated, MissingComultiplication, KeyError, IndexError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (exponent.NotHNiceDetected, exponent.SearchBudgetExceeded, exponent.ConditionSearchExhausted) as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    except ValueError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
