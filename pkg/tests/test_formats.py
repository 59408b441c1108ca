import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codimlab import fixtures
from codimlab.exponent import check_certificate, exponent
from codimlab.formats import (
    FormatError,
    emit_algebra,
    emit_certificate,
    emit_polynomial,
    exponent_report_dict,
    parse_algebra,
    parse_certificate,
    parse_polynomial,
)
from codimlab.polyid import MultilinearHPolynomial


@pytest.mark.parametrize("name", fixtures.FIXTURE_NAMES)
def test_bundled_files_round_trip(name):
    path = fixtures.data_dir() / f"{name}.json"
    text = path.read_text()
    parsed = parse_algebra(text)
    assert emit_algebra(parsed) == text
    built = fixtures.build(name)
    assert parsed.algebra.c == built.algebra.c
    assert parsed.action_spec().operators == built.action_spec().operators


def test_syntax_error_reports_line_and_column():
    with pytest.raises(FormatError) as exc:
        parse_algebra('{\n  "name": "x",\n  "dim": 2,,\n}')
    assert exc.value.where == "line 3, column 12"


def test_schema_errors_report_json_path():
    base = {"name": "t", "dim": 2, "basis": ["a", "b"], "brackets": [[0, 1, 1, "1"]]}
    cases = [
        ({**base, "brackets": [[0, 1, 5, "1"]]}, "$.brackets[0]"),
        ({**base, "brackets": [[0, 1, 1, 0.5]]}, "$.brackets[0]"),
        ({**base, "dim": "2"}, "$.dim"),
        ({k: v for k, v in base.items() if k != "brackets"}, "$"),
        ({**base, "grading": {"group": {"kind": "abelian", "invariants": [2]}, "degrees": [[0]]}}, "$.grading.degrees"),
    ]
    for obj, where in cases:
        with pytest.raises(FormatError) as exc:
            parse_algebra(json.dumps(obj))
        assert exc.value.where == where, obj


def test_jacobi_failure_is_a_format_error():
    obj = {"name": "bad", "dim": 3, "brackets": [[0, 1, 1, "1"], [1, 2, 0, "1"]]}
    with pytest.raises(FormatError, match="jacobi"):
        parse_algebra(json.dumps(obj))
    assert parse_algebra(json.dumps(obj), check=False).algebra.dim == 3


def test_alternation_violation_kept_when_unchecked():
    obj = {"name": "bad", "dim": 2, "brackets": [[0, 0, 1, "1"]]}
    with pytest.raises(FormatError, match="alternation"):
        parse_algebra(json.dumps(obj))


def test_rationals_as_text():
    obj = {"name": "q", "dim": 2, "brackets": [[0, 1, 1, "-3/4"]]}
    f = parse_algebra(json.dumps(obj))
    assert str(f.algebra.c[1][0][1]) == "3/4"
    assert '"-3/4"' in emit_algebra(f)


def test_abelian_grading_round_trip():
    obj = {
        "name": "z",
        "dim": 2,
        "basis": ["a", "b"],
        "brackets": [],
        "grading": {"group": {"kind": "abelian", "invariants": [0, 3]}, "degrees": [[1, 2], [-1, 4]]},
    }
    f = parse_algebra(json.dumps(obj))
    assert f.grading.degrees == ((1, 2), (-1, 1))
    again = parse_algebra(emit_algebra(f))
    assert again.grading == f.grading


terms = st.lists(
    st.tuples(st.integers(-5, 5).filter(bool), st.permutations([1, 2, 3]), st.lists(st.integers(0, 2), min_size=3, max_size=3)),
    max_size=6,
)


@settings(max_examples=40, deadline=None)
@given(terms)
def test_polynomial_round_trip(ts):
    f = MultilinearHPolynomial.make(3, [(c, p, tuple(lb)) for c, p, lb in ts])
    assert parse_polynomial(emit_polynomial(f)) == f


def test_polynomial_rejects_bad_perm():
    with pytest.raises(FormatError) as exc:
        parse_polynomial('{"n": 2, "terms": [{"coeff": "1", "perm": [1, 1]}]}')
    assert exc.value.where == "$.terms[0].perm"


@pytest.mark.parametrize("name", ["gl2", "sl2_semidirect_q2", "sl2sl2_swap"])
def test_certificate_round_trip(fx, name):
    f = fx[name]
    a = f.action_spec()
    rep = exponent(f.algebra, a)
    text = emit_certificate(rep.certificate, rep.chain)
    cert = parse_certificate(text, f.algebra.dim)
    assert check_certificate(f.algebra, a, cert) == rep.d
    whole = json.dumps(exponent_report_dict(rep))
    assert check_certificate(f.algebra, a, parse_certificate(whole, f.algebra.dim)) == rep.d


def test_certificate_in_zero_report(h3):
    rep = exponent(h3)
    d = exponent_report_dict(rep)
    assert d["d"] == 0 and d["certificate"] is None
    assert parse_certificate(json.dumps(d), 3).r == 0


def test_certificate_dimension_mismatch(fx):
    rep = exponent(fx["gl2"].algebra)
    with pytest.raises(FormatError):
        parse_certificate(emit_certificate(rep.certificate), 3)
