import json
import math

import pytest

from tscale import (
    ClosedInterval,
    IsolatedPoint,
    OverlapError,
    ParseError,
    interval,
    isolated,
    parse_scale,
    render,
    uniform,
    union,
)
from tscale.cli import (
    EXIT_CONFIG,
    EXIT_IDENTITY_FAIL,
    EXIT_OK,
    EXIT_REGRESSIVITY,
    convergence_study,
    fit_loglog_slope,
    main,
)


# -- scale-spec parsing --------------------------------------------------------


def test_parse_interval_plus_point():
    ts = parse_scale("interval(0,1) + points(2)")
    assert ts.components == (ClosedInterval(0.0, 1.0), IsolatedPoint(2.0))


def test_parse_uniform():
    ts = parse_scale("uniform(0,0.5,5)")
    assert ts.components == tuple(IsolatedPoint(0.5 * k) for k in range(5))


def test_parse_duplicate_point_is_overlap():
    with pytest.raises(OverlapError):
        parse_scale("points(1,1)")


def test_parse_rejects_intersecting_intervals():
    with pytest.raises(OverlapError):
        parse_scale("interval(0,1) + interval(0.5,2)")
    with pytest.raises(OverlapError):
        parse_scale("interval(0,1) + points(0.5)")


def test_parse_merges_touching_components():
    ts = parse_scale("interval(0,1) + interval(1,2)")
    assert ts.components == (ClosedInterval(0.0, 2.0),)
    ts = parse_scale("points(1) + interval(0,1)")
    assert ts.components == (ClosedInterval(0.0, 1.0),)


def test_parse_sorts_terms():
    ts = parse_scale("points(5) + interval(0,1)")
    assert ts.components == (ClosedInterval(0.0, 1.0), IsolatedPoint(5.0))


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_scale("interval(0,1) + bogus(2)")
    assert err.value.line == 1
    assert err.value.column == 17
    with pytest.raises(ParseError):
        parse_scale("interval(0 1)")
    with pytest.raises(ParseError):
        parse_scale("")
    with pytest.raises(ParseError):
        parse_scale("interval(0,1) +")
    with pytest.raises(ParseError):
        parse_scale("uniform(0,0.5,0)")
    with pytest.raises(ParseError):
        parse_scale("interval(3,1)")


@pytest.mark.parametrize(
    "ts",
    [
        interval(0, 1),
        isolated(-3.0, 0.1, 7.25),
        uniform(0, 0.125, 9),
        union(interval(-2.5, -1.0), isolated(0.3), interval(1.0, 4.0)),
        isolated(1e-3, 2.5e6),
    ],
)
def test_render_parse_roundtrip(ts):
    assert parse_scale(render(ts)) == ts


# -- eval and solve -------------------------------------------------------------


def test_cmd_eval_csv(capsys):
    code = main(
        ["eval", "--scale", "uniform(0,1,4)", "--family", "cayley", "--alpha", "1"]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "t,re,im"
    assert lines[1] == "0,1,0"
    assert lines[2].startswith("1,3") and lines[2].endswith(",0")
    assert lines[4].startswith("3,27")


def test_cmd_eval_exact_zero_coefficient(capsys):
    code = main(["eval", "--scale", "uniform(0,1,4)", "--family", "exact", "--alpha", "0"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    for row in out.splitlines()[1:]:
        assert row.endswith(",1,0")


def test_cmd_eval_regressivity_exit(capsys):
    code = main(
        ["eval", "--scale", "uniform(0,1,4)", "--family", "hilger", "--alpha=-1"]
    )
    assert code == EXIT_REGRESSIVITY


def test_cmd_eval_parse_failure_exit(capsys):
    assert main(["eval", "--scale", "points(1,1)"]) == EXIT_CONFIG
    assert main(["eval", "--scale", "nope(1)"]) == EXIT_CONFIG
    assert main(["eval"]) == EXIT_CONFIG


def test_cmd_eval_json_deterministic(capsys):
    argv = [
        "eval",
        "--scale",
        "interval(0,1) + points(2)",
        "--family",
        "cayley",
        "--alpha",
        "0.5,0.25",
        "--dense-step",
        "0.25",
        "--format",
        "json",
    ]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["schema"] == "tscale/1"
    assert payload["rows"][0] == {"t": 0.0, "re": 1.0, "im": 0.0}


def test_cmd_eval_out_file(tmp_path, capsys):
    path = tmp_path / "rows.csv"
    code = main(
        ["eval", "--scale", "uniform(0,1,3)", "--family", "hilger", "--out", str(path)]
    )
    assert code == EXIT_OK
    data = path.read_bytes()
    assert data.endswith(b"\n") and b"\r" not in data
    assert data.decode().splitlines()[0] == "t,re,im"


def test_cmd_solve(capsys):
    code = main(
        ["solve", "--scale", "uniform(0,1,4)", "--scheme", "trapezoidal", "--alpha", "1"]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert out.splitlines()[3] == "2,9,0"


def test_csv_uses_17_significant_digits(capsys):
    main(["eval", "--scale", "uniform(0,1,2)", "--family", "exact", "--alpha", "1"])
    out = capsys.readouterr().out
    assert f"{math.e:.17g}" in out


# -- identity reports -------------------------------------------------------------


def run_identity(capsys, *extra):
    code = main(["identity", *extra, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_identity_pythagorean_cayley(capsys):
    code, payload = run_identity(
        capsys,
        "--scale",
        "uniform(0,1,8)",
        "--identity",
        "pythagorean",
        "--family",
        "cayley",
        "--omega",
        "1",
    )
    assert code == EXIT_OK
    assert payload["pass"] is True
    assert payload["max_residual"] < 1e-12
    assert payload["identity"] == "pythagorean"


def test_identity_unit_circle_zero_frequency(capsys):
    code, payload = run_identity(
        capsys,
        "--scale",
        "interval(0,1) + points(2)",
        "--identity",
        "unit-circle",
        "--omega",
        "0",
    )
    assert code == EXIT_OK
    assert payload["max_residual"] == 0.0


def test_identity_pythagorean_bp_reports_deformation(capsys):
    code, payload = run_identity(
        capsys,
        "--scale",
        "uniform(0,1,6)",
        "--identity",
        "pythagorean",
        "--family",
        "bp",
        "--omega",
        "1",
        "--tol",
        "1e-10",
    )
    assert code == EXIT_OK
    assert payload["reference"][1] == pytest.approx(2.0, abs=1e-12)


def test_identity_semigroup_and_shift_and_product(capsys):
    for name in ("semigroup", "sigma-shift", "product-law"):
        code, payload = run_identity(
            capsys,
            "--scale",
            "interval(0,1) + points(1.5,2.25)",
            "--identity",
            name,
            "--alpha",
            "0.4",
            "--beta",
            "0.3",
            "--tol",
            "1e-11",
        )
        assert code == EXIT_OK, name
        assert payload["pass"] is True


def test_identity_oscillators_and_delbis(capsys):
    code, payload = run_identity(
        capsys,
        "--scale",
        "uniform(0,0.5,12)",
        "--identity",
        "oscillator-cayley",
        "--omega",
        "1.2",
    )
    assert code == EXIT_OK and payload["pass"]
    code, payload = run_identity(
        capsys,
        "--scale",
        "uniform(0,0.5,12)",
        "--identity",
        "oscillator-exact",
        "--omega",
        "1.2",
        "--tol",
        "1e-10",
    )
    assert code == EXIT_OK and payload["pass"]
    assert payload["form_agreement"] < 1e-12
    code, payload = run_identity(
        capsys,
        "--scale",
        "uniform(0,0.5,12)",
        "--identity",
        "delbis",
        "--omega",
        "0.9",
    )
    assert code == EXIT_OK and payload["pass"]


def test_identity_fail_exit_code(capsys):
    code, payload = run_identity(
        capsys,
        "--scale",
        "uniform(0,1,8)",
        "--identity",
        "pythagorean",
        "--family",
        "cayley",
        "--omega",
        "1",
        "--tol",
        "1e-30",
    )
    assert code == EXIT_IDENTITY_FAIL
    assert payload["pass"] is False


def test_identity_unknown_name_is_config_error(capsys):
    assert (
        main(["identity", "--scale", "uniform(0,1,4)", "--identity", "nope"])
        == EXIT_CONFIG
    )


# -- convergence ------------------------------------------------------------------


def test_cmd_converge_slopes(capsys):
    code = main(["converge", "--family", "cayley", "--alpha", "1", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert 1.9 < out["slope"] < 2.1
    code = main(["converge", "--family", "hilger", "--alpha", "1", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert 0.9 < out["slope"] < 1.1
    code = main(["converge", "--family", "exact", "--alpha", "1", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert all(row["error"] <= 1e-13 for row in out["rows"])


def test_cmd_converge_csv_layout(capsys):
    code = main(
        ["converge", "--family", "cayley", "--alpha", "1", "--eps-list", "0.5,0.25,0.125"]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "eps,error,slope"
    assert len(lines) == 4


def test_cmd_converge_bad_eps(capsys):
    assert (
        main(["converge", "--family", "cayley", "--eps-list", "0.3", "--target-t", "1.0"])
        == EXIT_CONFIG
    )


def test_convergence_study_nabla_first_order():
    rows = convergence_study("nabla", 1.0, 1.0, [2.0 ** -k for k in range(4, 9)])
    slope = fit_loglog_slope([e for e, _ in rows], [r for _, r in rows])
    assert 0.9 < slope < 1.1


def test_fit_loglog_slope_handles_zero_errors():
    assert fit_loglog_slope([0.5, 0.25], [0.0, 0.0]) == 0.0
