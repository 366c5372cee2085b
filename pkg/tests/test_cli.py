"""CLI: specs, parsing, printing, certificate JSON, exit codes."""

import contextlib
import io
import json
import random
import sys

import pytest

from skewlaurent.cli import (
    build_ctx,
    certificate_from_json,
    certificate_to_json,
    evaluate,
    main,
    parse_element,
    parse_series,
    series_to_obj,
)
from skewlaurent.decompose import decompose, verify_certificate
from skewlaurent.errors import FieldSpecError, SeriesSyntaxError
from skewlaurent.field_tower import FiniteFieldCtx, RationalFunctionCtx
from skewlaurent.skew_series import SkewSeries, term

from conftest import random_series


def run_cli(argv, stdin_text=None):
    out, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    if stdin_text is not None:
        sys.stdin = io.StringIO(stdin_text)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(argv)
    finally:
        sys.stdin = old_stdin
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# field and sigma specs


def test_build_ctx_specs():
    ctx = build_ctx("gf(3^4)", "frob")
    assert isinstance(ctx, FiniteFieldCtx) and ctx.sigma_order == 4
    ctx = build_ctx("gf(2^8);poly=1,0,1,1,1,0,0,0,1", "frob^2")
    assert ctx.sigma_order == 4 and ctx.subfield_degree == 2
    ctx = build_ctx("qt", "shift")
    assert isinstance(ctx, RationalFunctionCtx)
    ctx = build_ctx("qt", "scale:3/2")
    assert str(ctx.scale) == "3/2"
    for field, sigma in (
        ("gf(3^4)", "shift"),
        ("qt", "frob"),
        ("zz", "frob"),
        ("gf(3^4)", "frob^0"),
        ("qt", "scale:1"),
    ):
        with pytest.raises(FieldSpecError):
            build_ctx(field, sigma)


def test_ctx_spec_round_trip():
    for field, sigma in (
        ("gf(3^4)", "frob"),
        ("gf(2^5)", "frob"),
        ("gf(2^8)", "frob^3"),
        ("qt", "shift"),
        ("qt", "scale:-7/2"),
    ):
        ctx = build_ctx(field, sigma)
        again = build_ctx(ctx.field_spec(), ctx.sigma_spec())
        assert again == ctx


# ---------------------------------------------------------------------------
# series parsing


def test_parse_series_frozen(gf34, qt_shift):
    f = parse_series(gf34, "2*x^-3 + g*x^0 + O(x^4)")
    assert f.val == -3 and f.prec == 4
    assert f.coeff_at(-3) == gf34.from_int(2)
    assert f.coeff_at(0) == gf34.gen()

    assert parse_series(gf34, "x^1 + x^1") == term(gf34, gf34.from_int(2), 1, 33)

    f = parse_series(qt_shift, "(t^2+1)/(t-3) * x^0")
    t = qt_shift.gen()
    assert f.coeff_at(0) == (t * t + 1) / (t - 3)
    assert f.prec == 32

    f = parse_series(gf34, "g^3 + 2*g", relprec=5)
    assert f.val == 0 and f.prec == 5
    g = gf34.gen()
    assert f.coeff_at(0) == g**3 + 2 * g

    assert parse_series(gf34, "O(x^6)").is_zero
    assert parse_series(gf34, "x^2 - x^2", relprec=8).is_zero
    assert parse_series(gf34, "-x^3").coeff_at(3) == -gf34.one()
    assert parse_series(gf34, "x").valuation() == 1


def test_parse_series_precision_override(gf34):
    assert parse_series(gf34, "x^2", relprec=10).prec == 12
    assert parse_series(gf34, "x^2 + O(x^5)", relprec=10).prec == 5
    assert parse_series(gf34, "x^-4 + x^3", relprec=10).prec == 6


def test_parse_series_errors(gf34, qt_shift):
    bad = [
        "",
        "x^",
        "x^1 +",
        "2*",
        "g*x^2 + ?",
        "O(x^2) + x^1",
        "t*x^0",  # wrong variable for the field
        "(x+1)*x^2",  # x inside a coefficient
        "x^9 + O(x^4)",  # exponent at or beyond the cap
        "inv(x^1)",  # call syntax is eval-only
    ]
    for text in bad:
        with pytest.raises(SeriesSyntaxError):
            parse_series(gf34, text)
    with pytest.raises(SeriesSyntaxError):
        parse_series(qt_shift, "g*x^0")


def test_parse_error_positions(gf34):
    with pytest.raises(SeriesSyntaxError) as exc:
        parse_series(gf34, "x^1 + ?")
    assert "position 6" in str(exc.value)


def test_print_parse_round_trip(gf9, gf34, gf28, qt_shift):
    rng = random.Random("print-parse")
    scale = RationalFunctionCtx("scale", scale=random.Random("s").choice([3, -2]))
    for ctx in (gf9, gf34, gf28, qt_shift, scale):
        for _ in range(100):
            f = random_series(ctx, rng, -9, 9, rng.randint(1, 12), dense=False)
            assert parse_series(ctx, str(f)) == f
        assert parse_series(ctx, str(SkewSeries(ctx, 3, (), 3))) == SkewSeries(ctx, 3, (), 3)


def test_parse_element_round_trip(gf34, gf28, qt_shift):
    rng = random.Random("elem-rt")
    for ctx in (gf34, gf28, qt_shift):
        for _ in range(150):
            a = ctx.random_elem(rng)
            assert parse_element(ctx, str(a)) == a


# ---------------------------------------------------------------------------
# eval expressions


def test_evaluate(gf34, qt_shift):
    one = qt_shift.one()
    t = qt_shift.gen()
    r = evaluate(qt_shift, "comm(x^1, t*x^0)")
    assert r.coeff_at(1) == one

    r = evaluate(gf34, "inv(x^1 - x^2) * (x^1 - x^2)")
    assert r.coeff_at(0) == gf34.one() and r.valuation() == 0

    r = evaluate(qt_shift, "(x^1 + x^2) * inv(x^1)")
    assert r.coeff_at(0) == one and r.coeff_at(1) == one

    r = evaluate(qt_shift, "x^1 * t*x^0")
    assert r.coeff_at(1) == t + 1  # the twist moves t past x

    r = evaluate(gf34, "O(x^3) + x^1")
    assert r.prec == 3

    r = evaluate(gf34, "2*(g+1)*x^2")
    assert r.coeff_at(2) == 2 * (gf34.gen() + 1)

    with pytest.raises(SeriesSyntaxError):
        evaluate(gf34, "comm(x^1)")
    with pytest.raises(SeriesSyntaxError):
        evaluate(gf34, "inv()")


def test_evaluate_matches_library(gf34):
    rng = random.Random("eval-lib")
    for _ in range(25):
        f = random_series(gf34, rng, -3, 3, 6)
        g = random_series(gf34, rng, -3, 3, 6)
        text = f"comm({f}, {g})"
        from skewlaurent.skew_series import commutator

        expect = commutator(f, g)
        got = evaluate(gf34, text)
        assert got == expect


# ---------------------------------------------------------------------------
# certificate JSON


def test_certificate_json_round_trip(gf34, gf25, qt_shift):
    rng = random.Random("cert-json")
    for ctx in (gf34, gf25, qt_shift):
        for _ in range(12):
            f = random_series(ctx, rng, -5, 5, 10)
            cert = decompose(f)
            js = certificate_to_json(cert)
            back = certificate_from_json(js)
            assert back == cert
            assert certificate_to_json(back) == js
            assert verify_certificate(back)


def test_certificate_json_key_order(gf34):
    cert = decompose(term(gf34, gf34.gen(), 1, 9))
    obj = json.loads(certificate_to_json(cert))
    assert list(obj.keys()) == ["field", "sigma", "method", "prec", "input", "pairs"]
    assert list(obj["input"].keys()) == ["val", "prec", "coeffs"]

    exp_ctx = FiniteFieldCtx(2, 8, frob_power=2)
    cert = decompose(term(exp_ctx, exp_ctx.gen(), 1, 9))
    obj = json.loads(certificate_to_json(cert))
    assert list(obj.keys()) == [
        "field",
        "sigma",
        "method",
        "prec",
        "input",
        "pairs",
        "experimental",
    ]
    assert obj["experimental"] is True


def test_series_json_shape(gf34):
    f = term(gf34, gf34.gen(), -2, 1)
    obj = series_to_obj(f)
    assert obj == {"val": -2, "prec": 1, "coeffs": ["g", "0", "0"]}


def test_malformed_certificates_rejected(gf34):
    cert = decompose(term(gf34, gf34.gen(), 1, 9))
    obj = json.loads(certificate_to_json(cert))
    broken = dict(obj)
    del broken["pairs"]
    for text in ("{not json", json.dumps(broken), json.dumps([1, 2])):
        with pytest.raises(SeriesSyntaxError):
            certificate_from_json(text)


# ---------------------------------------------------------------------------
# exit codes


def test_cli_decompose_and_verify_round_trip(tmp_path):
    code, out, _ = run_cli(
        ["decompose", "--field", "gf(2^5)", "--sigma", "frob", "x^-1 + g*x^3"]
    )
    assert code == 0
    assert json.loads(out)["method"] == "DegreeAtLeast5"

    path = tmp_path / "cert.json"
    path.write_text(out, encoding="utf-8")
    code, out2, _ = run_cli(["verify", str(path)])
    assert code == 0 and out2.startswith("valid")

    code, out3, _ = run_cli(["verify", "-"], stdin_text=out)
    assert code == 0


def test_cli_verify_rejects_tampered_certificate():
    code, out, _ = run_cli(
        ["decompose", "--field", "qt", "--sigma", "shift", "x^-1 + O(x^6)"]
    )
    assert code == 0
    obj = json.loads(out)
    obj["input"]["coeffs"][0] = "2"
    code, out, _ = run_cli(["verify", "-"], stdin_text=json.dumps(obj))
    assert code == 1


def test_cli_exit_code_3_for_unsupported():
    code, _, err = run_cli(["decompose", "--field", "gf(3^2)", "--sigma", "frob", "x^1"])
    assert code == 3 and "order 2" in err
    code, _, err = run_cli(["trace", "--field", "gf(3^2)", "--sigma", "frob^2", "x^1"])
    assert code == 3


def test_cli_exit_code_2_for_bad_input():
    cases = [
        ["decompose", "--field", "gf(2^5)", "--sigma", "frob", "x^1 + ?"],
        ["decompose", "--field", "gf(6^2)", "--sigma", "frob", "x^1"],
        ["eval", "--field", "qt", "--sigma", "scale:0", "x^1"],
        ["verify", "-"],
    ]
    for argv in cases:
        code, _, _ = run_cli(argv, stdin_text="{broken")
        assert code == 2, argv


def test_cli_exit_code_1_for_infinite_trace():
    code, _, err = run_cli(["trace", "--field", "qt", "--sigma", "shift", "x^4"])
    assert code == 1 and "finite order" in err


def test_cli_trace_and_eval_output(gf34):
    code, out, _ = run_cli(
        ["trace", "--field", "gf(3^4)", "--sigma", "frob", "g*x^0 + x^1 + O(x^5)"]
    )
    assert code == 0
    g = gf34.gen()
    expect = g + gf34.sigma(g, 1) + gf34.sigma(g, 2) + gf34.sigma(g, 3)
    assert out.strip() == str(term(gf34, expect, 0, 8))

    code, out, _ = run_cli(
        ["eval", "--field", "qt", "--sigma", "shift", "comm(x^1, t*x^0) + O(x^4)"]
    )
    assert code == 0
    assert out.strip() == "x^1 + O(x^4)"


def test_cli_prec_flag():
    code, out, _ = run_cli(
        ["eval", "--field", "qt", "--sigma", "shift", "--prec", "6", "x^2"]
    )
    assert code == 0 and out.strip() == "x^2 + O(x^8)"
