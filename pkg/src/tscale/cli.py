"""Command-line front end.

Subcommands: eval (sample an exponential family on a grid), solve (march a
first-order scheme), identity (residual checks, JSON report), converge
(error-vs-step study with a fitted slope). Output is deterministic:
identical configurations produce byte-identical CSV or JSON, with a dot
decimal separator, 17 significant digits and LF line endings.

Exit codes: 0 success or identity pass, 1 identity fail, 2 regressivity
failure, 3 parse or configuration error, 4 internal tolerance failure.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import re
import sys
from dataclasses import dataclass, field

from .errors import (
    ConstantGraininessError,
    DomainError,
    GridError,
    OverlapError,
    ParseError,
    RegressivityError,
    SingularError,
    ToleranceError,
    TscaleError,
)
from .timescale import (
    ClosedInterval,
    Component,
    Grid,
    IsolatedPoint,
    TimeScale,
    normalize_components,
)
from .transforms import graininess_coefficient, oplus_cayley, oplus_mu
from .exponential import ExpFamily, check_semigroup, check_sigma_shift, exp_evaluate_grid
from .trig import TrigFamily, TrigKind, pythagorean_residual, trig_grid
from .dynamic import (
    SampledFunction,
    Scheme,
    delbis_relation_residual,
    oscillator_residual_cayley,
    oscillator_residual_exact,
    solve_first_order,
)
from .report import ResidualReport

SCHEMA = "tscale/1"

EXIT_OK = 0
EXIT_IDENTITY_FAIL = 1
EXIT_REGRESSIVITY = 2
EXIT_CONFIG = 3
EXIT_TOLERANCE = 4

IDENTITIES = (
    "pythagorean",
    "semigroup",
    "sigma-shift",
    "product-law",
    "unit-circle",
    "oscillator-cayley",
    "oscillator-exact",
    "delbis",
)


# -- scale-spec mini language -------------------------------------------------------

_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")
_NAME = re.compile(r"[a-z]+")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _coords(self, pos: int) -> tuple[int, int]:
        before = self.text[:pos]
        line = before.count("\n") + 1
        column = pos - (before.rfind("\n") + 1) + 1
        return line, column

    def fail(self, message: str, pos: int | None = None):
        line, column = self._coords(self.pos if pos is None else pos)
        raise ParseError(message, line, column)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def peek(self, ch: str) -> bool:
        self.skip_ws()
        return self.pos < len(self.text) and self.text[self.pos] == ch

    def name(self) -> str:
        self.skip_ws()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.fail("expected a term name (interval, points or uniform)")
        self.pos = m.end()
        return m.group(0)

    def number(self) -> float:
        self.skip_ws()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.fail("expected a number")
        self.pos = m.end()
        return float(m.group(0))


def parse_scale(text: str) -> TimeScale:
    """Parse 'interval(a,b) + points(p,...) + uniform(start,step,count)' text.

    Components are normalized: sorted, merged when touching. Intersecting
    or duplicate components raise OverlapError; malformed text raises
    ParseError with the source position.
    """
    sc = _Scanner(text)
    comps: list[Component] = []
    if sc.at_end():
        sc.fail("empty scale spec")
    while True:
        comps.extend(_parse_term(sc))
        if sc.at_end():
            break
        sc.expect("+")
        if sc.at_end():
            sc.fail("dangling '+'")
    try:
        return TimeScale(normalize_components(comps))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _parse_term(sc: _Scanner) -> list[Component]:
    start = sc.pos
    name = sc.name()
    sc.expect("(")
    if name == "interval":
        lo = sc.number()
        sc.expect(",")
        hi = sc.number()
        sc.expect(")")
        if not hi > lo:
            sc.fail(f"interval needs lo < hi, got ({lo!r}, {hi!r})", start)
        return [ClosedInterval(lo, hi)]
    if name == "points":
        vals = [sc.number()]
        while sc.peek(","):
            sc.expect(",")
            vals.append(sc.number())
        sc.expect(")")
        return [IsolatedPoint(v) for v in vals]
    if name == "uniform":
        first = sc.number()
        sc.expect(",")
        step = sc.number()
        sc.expect(",")
        count = sc.number()
        sc.expect(")")
        if count != int(count) or count < 1:
            sc.fail(f"uniform count must be a positive integer, got {count!r}", start)
        if step <= 0:
            sc.fail(f"uniform step must be positive, got {step!r}", start)
        return [IsolatedPoint(first + k * step) for k in range(int(count))]
    sc.fail(f"unknown term {name!r}", start)


def render(ts: TimeScale) -> str:
    """Scale-spec text that parses back to an identical scale."""
    parts: list[str] = []
    run: list[float] = []
    for c in ts.components:
        if isinstance(c, IsolatedPoint):
            run.append(c.t)
            continue
        if run:
            parts.append("points(" + ",".join(repr(v) for v in run) + ")")
            run = []
        parts.append(f"interval({c.lo!r},{c.hi!r})")
    if run:
        parts.append("points(" + ",".join(repr(v) for v in run) + ")")
    return " + ".join(parts)


# -- configuration ---------------------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    scale: str | None = None
    family: str = "cayley"
    scheme: str = "trapezoidal"
    identity: str = "pythagorean"
    kind: str = "trig"
    alpha: complex = 1.0 + 0j
    beta: complex | None = None
    omega: float | None = None
    x0: complex = 1.0 + 0j
    t0: float = 0.0
    range_: tuple[float, float] | None = None
    dense_step: float = 0.1
    tol: float = 1e-12
    fmt: str = "csv"
    out: str | None = None
    target_t: float = 1.0
    eps_list: tuple[float, ...] = field(
        default_factory=lambda: tuple(2.0 ** -k for k in range(1, 11))
    )

    def validate(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.dense_step <= 0:
            raise ValueError("dense-step must be positive")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {self.fmt!r}")


_EXP_FAMILIES = {
    "hilger": ExpFamily.HILGER_DELTA,
    "nabla": ExpFamily.NABLA_CONST,
    "cayley": ExpFamily.CAYLEY,
    "exact": ExpFamily.EXACT,
}

_TRIG_FAMILIES = {
    "hilger": TrigFamily.HILGER,
    "bp": TrigFamily.BOHNER_PETERSON,
    "cayley": TrigFamily.CAYLEY,
    "exact": TrigFamily.EXACT,
}

_SCHEMES = {
    "explicit": Scheme.EXPLICIT_DELTA,
    "trapezoidal": Scheme.TRAPEZOIDAL_CAYLEY,
    "exact": Scheme.EXACT_DISC,
}


def _scale_and_grid(config: RunConfig) -> tuple[TimeScale, Grid]:
    if not config.scale:
        raise ValueError("--scale is required")
    ts = parse_scale(config.scale)
    a, b = config.range_ if config.range_ is not None else (ts.inf, ts.sup)
    return ts, ts.make_grid(a, b, config.dense_step)


def _fmt17(v: float) -> str:
    return f"{v:.17g}"


def _csv(lines: list[str]) -> str:
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x), ignoring zero errors."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        return 0.0
    n = len(pts)
    mx = sum(p[0] for p in pts) / n
    my = sum(p[1] for p in pts) / n
    sxx = sum((p[0] - mx) ** 2 for p in pts)
    sxy = sum((p[0] - mx) * (p[1] - my) for p in pts)
    return sxy / sxx


# -- commands -------------------------------------------------------------------------


def cmd_eval(config: RunConfig) -> tuple[int, str]:
    config.validate()
    ts, grid = _scale_and_grid(config)
    family = _EXP_FAMILIES[config.family]
    ev = exp_evaluate_grid(family, ts, config.alpha, config.t0, grid, config.tol)
    if config.fmt == "json":
        rows = [
            {"t": t, "re": v.real, "im": v.imag}
            for t, v in zip(grid.points, ev.values)
        ]
        return EXIT_OK, _json_text(
            {"schema": SCHEMA, "command": "eval", "family": config.family, "rows": rows}
        )
    lines = ["t,re,im"]
    lines += [
        f"{_fmt17(t)},{_fmt17(v.real)},{_fmt17(v.imag)}"
        for t, v in zip(grid.points, ev.values)
    ]
    return EXIT_OK, _csv(lines)


def cmd_solve(config: RunConfig) -> tuple[int, str]:
    config.validate()
    ts, grid = _scale_and_grid(config)
    scheme = _SCHEMES[config.scheme]
    t0 = config.t0 if grid.index_of(config.t0) is not None else grid.points[0]
    x = solve_first_order(scheme, ts, config.alpha, config.x0, t0, grid, config.tol)
    if config.fmt == "json":
        rows = [
            {"t": t, "re": v.real, "im": v.imag}
            for t, v in zip(grid.points, x.values)
        ]
        return EXIT_OK, _json_text(
            {"schema": SCHEMA, "command": "solve", "scheme": config.scheme, "rows": rows}
        )
    lines = ["t,re,im"]
    lines += [
        f"{_fmt17(t)},{_fmt17(v.real)},{_fmt17(v.imag)}"
        for t, v in zip(grid.points, x.values)
    ]
    return EXIT_OK, _csv(lines)


def cmd_identity(config: RunConfig) -> tuple[int, str]:
    config.validate()
    if config.identity not in IDENTITIES:
        raise ValueError(f"unknown identity {config.identity!r}")
    ts, grid = _scale_and_grid(config)
    extra: dict = {}
    name = config.identity
    if name == "pythagorean":
        family = _TRIG_FAMILIES[config.family]
        kind = TrigKind.HYPERBOLIC if config.kind == "hyp" else TrigKind.TRIGONOMETRIC
        param = config.alpha if kind is TrigKind.HYPERBOLIC else _omega(config)
        report = pythagorean_residual(family, kind, ts, param, grid, config.tol)
        if report.reference is not None:
            extra["reference"] = list(report.reference)
    elif name == "semigroup":
        report = _semigroup_report(config, ts, grid)
    elif name == "sigma-shift":
        report = _sigma_shift_report(config, ts, grid)
    elif name == "product-law":
        report = _product_law_report(config, ts, grid)
    elif name == "unit-circle":
        report = _unit_circle_report(config, ts, grid)
    elif name == "oscillator-cayley":
        report = _oscillator_cayley_report(config, ts, grid)
    elif name == "oscillator-exact":
        result = oscillator_residual_exact(
            ts, _omega(config), _exact_sin_samples(config, ts, grid), grid, config.tol
        )
        extra = {
            "phi_form_max": result.phi_form.max_residual,
            "sinc_form_max": result.sinc_form.max_residual,
            "form_agreement": result.form_agreement,
        }
        # pass requires both forms and their mutual agreement below tol
        report = ResidualReport(
            "oscillator-exact",
            result.phi_form.points,
            tuple(
                max(a, b, result.form_agreement)
                for a, b in zip(result.phi_form.residuals, result.sinc_form.residuals)
            ),
            config.tol,
            skipped=result.phi_form.skipped,
        )
    else:  # delbis
        x = SampledFunction.sample(
            lambda t: math.sin(t) + 0.5 * math.cos(2.0 * t) + 0.25 * t, grid
        )
        report = delbis_relation_residual(ts, _omega(config), x, grid, config.tol)
    payload = {
        "schema": SCHEMA,
        "identity": name,
        "max_residual": report.max_residual,
        "argmax_t": report.argmax_t,
        "pass": report.passed,
        "n_points": len(report.points),
        "n_skipped": len(report.skipped),
    }
    payload.update(extra)
    code = EXIT_OK if report.passed else EXIT_IDENTITY_FAIL
    return code, _json_text(payload)


def _omega(config: RunConfig) -> float:
    return config.omega if config.omega is not None else 1.0


def _semigroup_report(config, ts, grid) -> ResidualReport:
    family = _EXP_FAMILIES[config.family]
    t1 = grid.points[0]
    pts, residuals = [], []
    for i, t in enumerate(grid.points):
        worst = 0.0
        for j in range(i + 1):
            r = check_semigroup(
                family, ts, config.alpha, t, grid.points[j], t1, config.tol
            )
            worst = max(worst, r)
        pts.append(t)
        residuals.append(worst)
    return ResidualReport("semigroup", tuple(pts), tuple(residuals), config.tol)


def _sigma_shift_report(config, ts, grid) -> ResidualReport:
    family = _EXP_FAMILIES[config.family]
    pts, residuals, skipped = [], [], []
    for t in grid.points:
        if not ts.in_kappa(t):
            skipped.append(t)
            continue
        pts.append(t)
        residuals.append(
            check_sigma_shift(family, ts, config.alpha, t, grid.points[0], config.tol)
        )
    return ResidualReport(
        "sigma-shift", tuple(pts), tuple(residuals), config.tol, skipped=tuple(skipped)
    )


def _product_law_report(config, ts, grid) -> ResidualReport:
    family = _EXP_FAMILIES[config.family]
    a = config.alpha
    b = config.beta if config.beta is not None else 0.5 + 0j
    t0 = grid.points[0]
    ea = exp_evaluate_grid(family, ts, a, t0, grid, config.tol)
    eb = exp_evaluate_grid(family, ts, b, t0, grid, config.tol)
    if family is ExpFamily.CAYLEY:
        combo = graininess_coefficient(ts, lambda mu, s: oplus_cayley(mu, a, b))
    else:
        combo = graininess_coefficient(ts, lambda mu, s: oplus_mu(mu, a, b))
    eab = exp_evaluate_grid(family, ts, combo, t0, grid, config.tol)
    residuals = tuple(
        abs(x * y - z) for x, y, z in zip(ea.values, eb.values, eab.values)
    )
    return ResidualReport("product-law", grid.points, residuals, config.tol)


def _unit_circle_report(config, ts, grid) -> ResidualReport:
    omega = _omega(config)
    ev = exp_evaluate_grid(
        ExpFamily.CAYLEY, ts, 1j * omega, grid.points[0], grid, config.tol
    )
    residuals = tuple(abs(abs(v) - 1.0) for v in ev.values)
    return ResidualReport("unit-circle", grid.points, residuals, config.tol)


def _oscillator_cayley_report(config, ts, grid) -> ResidualReport:
    omega = _omega(config)
    pair = trig_grid(TrigFamily.CAYLEY, ts, omega, grid.points[0], grid, config.tol)
    rep_c = oscillator_residual_cayley(
        ts, omega, SampledFunction(grid, pair.c_values), grid, config.tol
    )
    rep_s = oscillator_residual_cayley(
        ts, omega, SampledFunction(grid, pair.s_values), grid, config.tol
    )
    residuals = tuple(max(a, b) for a, b in zip(rep_c.residuals, rep_s.residuals))
    return ResidualReport(
        "oscillator-cayley", rep_c.points, residuals, config.tol, skipped=rep_c.skipped
    )


def _exact_sin_samples(config, ts, grid) -> SampledFunction:
    omega = _omega(config)
    return SampledFunction.sample(lambda t: math.sin(omega * t), grid)


def cmd_converge(config: RunConfig) -> tuple[int, str]:
    config.validate()
    rows = convergence_study(
        config.family, config.alpha, config.target_t, config.eps_list, config.tol
    )
    errs = [e for _, e in rows]
    tail = rows[-5:] if len(rows) >= 5 else rows
    slope = fit_loglog_slope([x for x, _ in tail], [y for _, y in tail])
    if config.fmt == "json":
        return EXIT_OK, _json_text(
            {
                "schema": SCHEMA,
                "command": "converge",
                "family": config.family,
                "rows": [{"eps": x, "error": y} for x, y in rows],
                "slope": slope,
            }
        )
    lines = ["eps,error,slope"]
    lines += [f"{_fmt17(x)},{_fmt17(y)},{_fmt17(slope)}" for x, y in rows]
    return EXIT_OK, _csv(lines)


def convergence_study(family_name, alpha, target_t, eps_list, tol=1e-12):
    """Error of one family against the continuum exponential at target_t.

    For each step eps a uniform discrete scale covering [0, target_t] is
    built; target_t must be an integer multiple of each eps.
    """
    from .exponential import exp_cayley, exp_exact, exp_hilger, exp_nabla_const
    from .timescale import uniform as uniform_scale

    alpha = complex(alpha)
    exact_value = cmath.exp(alpha * target_t)
    rows = []
    for eps in eps_list:
        k = round(target_t / eps)
        if abs(target_t - k * eps) > 1e-9 or k < 1:
            raise ValueError(
                f"target t={target_t!r} is not a positive integer multiple of eps={eps!r}"
            )
        ts = uniform_scale(0.0, eps, k + 1)
        if family_name == "hilger":
            val = exp_hilger(ts, alpha, target_t, 0.0, tol)
        elif family_name == "cayley":
            val = exp_cayley(ts, alpha, target_t, 0.0, tol)
        elif family_name == "nabla":
            val = exp_nabla_const(eps, alpha, target_t)
        elif family_name == "exact":
            val = exp_exact(alpha, target_t, 0.0)
        else:
            raise ValueError(f"unknown family {family_name!r}")
        rows.append((eps, abs(val - exact_value)))
    return rows


# -- argument parsing -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit-code policy in main()
        raise ValueError(message)


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected re or re,im, got {text!r}")


def _range_arg(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected a,b, got {text!r}")
    return float(parts[0]), float(parts[1])


def _eps_list_arg(text: str) -> tuple[float, ...]:
    vals = tuple(float(p) for p in text.split(","))
    if not vals or any(v <= 0 for v in vals):
        raise ValueError("eps list must be positive numbers")
    return vals


def _add_common(p: _Parser):
    p.add_argument("--scale", help="scale spec, e.g. 'interval(0,1) + points(2)'")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--range", dest="range_", type=_range_arg, default=None)
    p.add_argument("--dense-step", dest="dense_step", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="tscale", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="sample an exponential family on a grid")
    _add_common(p)
    p.add_argument("--family", choices=sorted(_EXP_FAMILIES), default="cayley")
    p.add_argument("--alpha", type=_complex_arg, default=1.0 + 0j)

    p = sub.add_parser("solve", help="march a first-order scheme along the grid")
    _add_common(p)
    p.add_argument("--scheme", choices=sorted(_SCHEMES), default="trapezoidal")
    p.add_argument("--alpha", type=_complex_arg, default=1.0 + 0j)
    p.add_argument("--x0", type=_complex_arg, default=1.0 + 0j)

    p = sub.add_parser("identity", help="run one identity check, emit a JSON report")
    _add_common(p)
    p.add_argument("--identity", choices=IDENTITIES, required=True)
    p.add_argument("--family", default="cayley")
    p.add_argument("--kind", choices=("trig", "hyp"), default="trig")
    p.add_argument("--alpha", type=_complex_arg, default=1.0 + 0j)
    p.add_argument("--beta", type=_complex_arg, default=None)
    p.add_argument("--omega", type=float, default=None)

    p = sub.add_parser("converge", help="error against the continuum exponential")
    p.add_argument("--family", choices=sorted(_EXP_FAMILIES), default="cayley")
    p.add_argument("--alpha", type=_complex_arg, default=1.0 + 0j)
    p.add_argument("--target-t", dest="target_t", type=float, default=1.0)
    p.add_argument(
        "--eps-list",
        dest="eps_list",
        type=_eps_list_arg,
        default=tuple(2.0 ** -k for k in range(1, 11)),
    )
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    return parser


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=ns.command)
    for name in vars(ns):
        if hasattr(config, name):
            setattr(config, name, getattr(ns, name))
    return config


_COMMANDS = {
    "eval": cmd_eval,
    "solve": cmd_solve,
    "identity": cmd_identity,
    "converge": cmd_converge,
}


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        config = _config_from_args(ns)
        code, text = _COMMANDS[config.command](config)
    except (ParseError, OverlapError, ValueError, DomainError, KeyError) as exc:
        print(f"tscale: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegressivityError as exc:
        print(f"tscale: regressivity failure: {exc}", file=sys.stderr)
        return EXIT_REGRESSIVITY
    except (ToleranceError, SingularError, GridError, ConstantGraininessError) as exc:
        print(f"tscale: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except TscaleError as exc:
        print(f"tscale: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    if config.out:
        with open(config.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
