"""Hyperbolic and trigonometric function families and their identity residuals.

Each family builds its pair from two exponentials: half-sum and
half-difference. The Cayley family inherits an exactly unimodular
exponential on the imaginary axis, so its trigonometric pair is real and
satisfies the circular identity on any supported scale; the
forward-step-based family satisfies a deformed identity instead, with the
deformation itself an exponential that this module evaluates for
comparison.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import RegressivityError, ToleranceError
from .timescale import DEFAULT_TOL, Grid, TimeScale, delta_derivative_numeric
from .transforms import Coefficient, as_coefficient, graininess_coefficient
from .exponential import (
    ExpFamily,
    _grid_log_integrals,
    _hilger_grid_lenient,
    _hilger_product_point,
    _log_integral_range,
    _validate_regressive,
)
from .report import ResidualReport

# Trigonometric values are returned as reals; any larger imaginary residue
# indicates a broken conjugation symmetry and is raised, not discarded.
_IMAG_RESIDUE_TOL = 1e-13


class TrigFamily(Enum):
    HILGER = "hilger"
    BOHNER_PETERSON = "bp"
    CAYLEY = "cayley"
    EXACT = "exact"


class TrigKind(Enum):
    HYPERBOLIC = "hyp"
    TRIGONOMETRIC = "trig"


@dataclass(frozen=True)
class TrigPair:
    """Grid-aligned cosine-like and sine-like values of one family."""

    family: TrigFamily
    kind: TrigKind
    parameter: complex
    grid: Grid
    c_values: tuple
    s_values: tuple


# -- pointwise pairs ---------------------------------------------------------------


def _log_integral(family: ExpFamily, ts, coeff, t, t0, tol) -> complex:
    _validate_regressive(family, ts, coeff, min(t, t0), max(t, t0))
    return _log_integral_range(family, ts, coeff, t0, t, tol)


def hyp(family: TrigFamily, ts: TimeScale, alpha, t, t0, tol: float = DEFAULT_TOL):
    """Hyperbolic pair (cosh-like, sinh-like) of the given family at t.

    The two exponentials combined are: the forward-step exponential and
    its reciprocal (Hilger family), the forward-step exponentials of
    alpha and -alpha (Bohner-Peterson), the Cayley exponentials of alpha
    and -alpha, or the continuum pair exp(±alpha (t - t0)) (exact). The
    Bohner-Peterson family is the one definition that stays on the
    degenerate boundary where one exponential vanishes identically; it is
    evaluated by a step-factor product there instead of being rejected.
    """
    coeff = as_coefficient(alpha)
    if family is TrigFamily.EXACT:
        w = coeff.constant_value * (t - t0)
        return cmath.cosh(w), cmath.sinh(w)
    if family is TrigFamily.CAYLEY:
        L = _log_integral(ExpFamily.CAYLEY, ts, coeff, t, t0, tol)
        e, einv = cmath.exp(L), cmath.exp(-L)
        return 0.5 * (e + einv), 0.5 * (e - einv)
    if family is TrigFamily.HILGER:
        # the reciprocal is exactly the exponential of the inverted coefficient
        L = _log_integral(ExpFamily.HILGER_DELTA, ts, coeff, t, t0, tol)
        e, einv = cmath.exp(L), cmath.exp(-L)
        return 0.5 * (e + einv), 0.5 * (e - einv)
    if family is TrigFamily.BOHNER_PETERSON:
        e_plus = _bp_exp_point(ts, coeff, t, t0, tol)
        e_minus = _bp_exp_point(ts, -coeff, t, t0, tol)
        return 0.5 * (e_plus + e_minus), 0.5 * (e_plus - e_minus)
    raise ValueError(f"unknown family {family!r}")


def _bp_exp_point(ts, coeff, t, t0, tol) -> complex:
    try:
        L = _log_integral(ExpFamily.HILGER_DELTA, ts, coeff, t, t0, tol)
        return cmath.exp(L)
    except RegressivityError:
        return _hilger_product_point(ts, coeff, t, t0, tol)


def trig(family: TrigFamily, ts: TimeScale, omega: float, t, t0, tol: float = DEFAULT_TOL):
    """Trigonometric pair (cos-like, sin-like) of the given family at t.

    Values are returned as floats after asserting the imaginary residue
    is below 1e-13. The Hilger trigonometric construction reduces to the
    restricted continuum functions for constant frequency, the only case
    supported here, so it delegates to the exact family.
    """
    omega = float(omega)
    if family in (TrigFamily.EXACT, TrigFamily.HILGER):
        w = omega * (t - t0)
        return math.cos(w), math.sin(w)
    if family is TrigFamily.CAYLEY:
        L = _log_integral(ExpFamily.CAYLEY, ts, Coefficient.constant(1j * omega), t, t0, tol)
        e, einv = cmath.exp(L), cmath.exp(-L)
        c = 0.5 * (e + einv)
        s = (e - einv) / 2j
        return _require_real(c, t), _require_real(s, t)
    if family is TrigFamily.BOHNER_PETERSON:
        ch, sh = hyp(family, ts, Coefficient.constant(1j * omega), t, t0, tol)
        return _require_real(ch, t), _require_real(sh / 1j, t)
    raise ValueError(f"unknown family {family!r}")


def _require_real(v: complex, t) -> float:
    if abs(v.imag) >= _IMAG_RESIDUE_TOL:
        raise ToleranceError(
            f"imaginary residue {v.imag!r} at t={t!r} exceeds {_IMAG_RESIDUE_TOL}"
        )
    return v.real


# -- grid pairs ----------------------------------------------------------------------


def hyp_grid(
    family: TrigFamily, ts: TimeScale, alpha, t0, grid: Grid, tol: float = DEFAULT_TOL
) -> TrigPair:
    """Hyperbolic pair sampled on a grid (linear cost in the grid size)."""
    coeff = as_coefficient(alpha)
    if family is TrigFamily.EXACT:
        a = coeff.constant_value
        cs = tuple(cmath.cosh(a * (p - t0)) for p in grid.points)
        ss = tuple(cmath.sinh(a * (p - t0)) for p in grid.points)
        return TrigPair(family, TrigKind.HYPERBOLIC, a, grid, cs, ss)
    param = coeff.constant_value if coeff.is_constant else None
    if family in (TrigFamily.CAYLEY, TrigFamily.HILGER):
        exp_family = (
            ExpFamily.CAYLEY if family is TrigFamily.CAYLEY else ExpFamily.HILGER_DELTA
        )
        _validate_regressive(
            exp_family, ts, coeff, min(grid.points[0], t0), max(grid.points[-1], t0)
        )
        logs = _grid_log_integrals(exp_family, ts, coeff, t0, grid, tol)
        cs = tuple(0.5 * (cmath.exp(L) + cmath.exp(-L)) for L in logs)
        ss = tuple(0.5 * (cmath.exp(L) - cmath.exp(-L)) for L in logs)
        return TrigPair(family, TrigKind.HYPERBOLIC, param, grid, cs, ss)
    if family is TrigFamily.BOHNER_PETERSON:
        plus = _hilger_grid_lenient(ts, coeff, t0, grid, tol)
        minus = _hilger_grid_lenient(ts, -coeff, t0, grid, tol)
        cs = tuple(0.5 * (a + b) for a, b in zip(plus, minus))
        ss = tuple(0.5 * (a - b) for a, b in zip(plus, minus))
        return TrigPair(family, TrigKind.HYPERBOLIC, param, grid, cs, ss)
    raise ValueError(f"unknown family {family!r}")


def trig_grid(
    family: TrigFamily, ts: TimeScale, omega: float, t0, grid: Grid, tol: float = DEFAULT_TOL
) -> TrigPair:
    """Trigonometric pair sampled on a grid; values are real floats."""
    omega = float(omega)
    if family in (TrigFamily.EXACT, TrigFamily.HILGER):
        cs = tuple(math.cos(omega * (p - t0)) for p in grid.points)
        ss = tuple(math.sin(omega * (p - t0)) for p in grid.points)
        return TrigPair(family, TrigKind.TRIGONOMETRIC, omega, grid, cs, ss)
    if family is TrigFamily.CAYLEY:
        coeff = Coefficient.constant(1j * omega)
        _validate_regressive(
            ExpFamily.CAYLEY, ts, coeff, min(grid.points[0], t0), max(grid.points[-1], t0)
        )
        logs = _grid_log_integrals(ExpFamily.CAYLEY, ts, coeff, t0, grid, tol)
        cs, ss = [], []
        for L, p in zip(logs, grid.points):
            e, einv = cmath.exp(L), cmath.exp(-L)
            cs.append(_require_real(0.5 * (e + einv), p))
            ss.append(_require_real((e - einv) / 2j, p))
        return TrigPair(family, TrigKind.TRIGONOMETRIC, omega, grid, tuple(cs), tuple(ss))
    if family is TrigFamily.BOHNER_PETERSON:
        pair = hyp_grid(family, ts, Coefficient.constant(1j * omega), t0, grid, tol)
        cs = tuple(_require_real(v, p) for v, p in zip(pair.c_values, grid.points))
        ss = tuple(_require_real(v / 1j, p) for v, p in zip(pair.s_values, grid.points))
        return TrigPair(family, TrigKind.TRIGONOMETRIC, omega, grid, cs, ss)
    raise ValueError(f"unknown family {family!r}")


# -- identity residuals -----------------------------------------------------------------


def pythagorean_residual(
    family: TrigFamily,
    kind: TrigKind,
    ts: TimeScale,
    param,
    grid: Grid,
    tol: float = DEFAULT_TOL,
    t0: float | None = None,
) -> ResidualReport:
    """Residual of c^2 - s^2 (hyperbolic) or c^2 + s^2 (trigonometric).

    For the Hilger, Cayley and exact families the reference is the
    constant one. For Bohner-Peterson the identity is deformed: the
    reference is the forward-step exponential of -mu*param^2 (hyperbolic)
    or +mu*param^2 (trigonometric), and the report carries those values.
    """
    if t0 is None:
        t0 = grid.points[0]
    if kind is TrigKind.HYPERBOLIC:
        pair = hyp_grid(family, ts, as_coefficient(param), t0, grid, tol)
        squares = [c * c - s * s for c, s in zip(pair.c_values, pair.s_values)]
    else:
        pair = trig_grid(family, ts, float(param), t0, grid, tol)
        squares = [
            complex(c * c + s * s) for c, s in zip(pair.c_values, pair.s_values)
        ]
    name = f"pythagorean-{family.value}-{kind.value}"
    if family is not TrigFamily.BOHNER_PETERSON:
        residuals = tuple(abs(q - 1.0) for q in squares)
        return ResidualReport(name, grid.points, residuals, tol)
    p2 = complex(param) * complex(param)
    sign = -1.0 if kind is TrigKind.HYPERBOLIC else 1.0
    deform = graininess_coefficient(ts, lambda mu, s: sign * mu * p2)
    reference = _hilger_grid_lenient(ts, deform, t0, grid, tol)
    residuals = tuple(abs(q - r) for q, r in zip(squares, reference))
    return ResidualReport(
        name, grid.points, residuals, tol, reference=tuple(r.real for r in reference)
    )


def derivative_residual(
    family: TrigFamily,
    kind: TrigKind,
    ts: TimeScale,
    param,
    grid: Grid,
    tol: float = DEFAULT_TOL,
    t0: float | None = None,
) -> ResidualReport:
    """Residual of the Cayley pair's first-derivative laws on the grid.

    Checks cosh' = param * avg(sinh) and sinh' = param * avg(cosh), or
    cos' = -omega * avg(sin) and sin' = omega * avg(cos), with the exact
    difference quotient at right-scattered points and a Richardson
    estimate at right-dense points (accuracy there is limited to roughly
    1e-8 for smooth data). Points whose forward jump is not sampled are
    skipped and reported.
    """
    if family is not TrigFamily.CAYLEY:
        raise ValueError("derivative law residuals are defined for the Cayley family")
    if t0 is None:
        t0 = grid.points[0]
    if kind is TrigKind.HYPERBOLIC:
        coeff = as_coefficient(param)
        pair = hyp_grid(family, ts, coeff, t0, grid, tol)
        a = coeff.constant_value
        c_rhs = lambda avg_c, avg_s: a * avg_s
        s_rhs = lambda avg_c, avg_s: a * avg_c
        c_fn = lambda u: hyp(family, ts, coeff, u, t0, tol)[0]
        s_fn = lambda u: hyp(family, ts, coeff, u, t0, tol)[1]
    else:
        w = float(param)
        pair = trig_grid(family, ts, w, t0, grid, tol)
        c_rhs = lambda avg_c, avg_s: -w * avg_s
        s_rhs = lambda avg_c, avg_s: w * avg_c
        c_fn = lambda u: trig(family, ts, w, u, t0, tol)[0]
        s_fn = lambda u: trig(family, ts, w, u, t0, tol)[1]
    pts, residuals, skipped = [], [], []
    for i, p in enumerate(grid.points):
        if not ts.in_kappa(p):
            skipped.append(p)
            continue
        s = ts.sigma(p)
        if s > p:
            j = grid.index_of(s)
            if j is None:
                skipped.append(p)
                continue
            mu = s - p
            dc = (pair.c_values[j] - pair.c_values[i]) / mu
            ds = (pair.s_values[j] - pair.s_values[i]) / mu
            avg_c = 0.5 * (pair.c_values[i] + pair.c_values[j])
            avg_s = 0.5 * (pair.s_values[i] + pair.s_values[j])
        else:
            dc = delta_derivative_numeric(ts, c_fn, p)
            ds = delta_derivative_numeric(ts, s_fn, p)
            avg_c, avg_s = pair.c_values[i], pair.s_values[i]
        r = max(abs(dc - c_rhs(avg_c, avg_s)), abs(ds - s_rhs(avg_c, avg_s)))
        pts.append(p)
        residuals.append(r)
    name = f"derivative-{family.value}-{kind.value}"
    return ResidualReport(name, tuple(pts), tuple(residuals), tol, skipped=tuple(skipped))


def exact_trig_delta(omega: float, mu: float, t: float) -> tuple[float, float]:
    """Delta derivatives of the restricted cos/sin at a right-scattered point.

    Returns (cos_delta, sin_delta) for graininess mu > 0:
    sin' = (sin(omega*mu)/mu) cos(omega*t) + ((cos(omega*mu) - 1)/mu) sin(omega*t)
    and the matching expression for cos'.
    """
    if mu <= 0:
        raise ValueError("mu must be positive at a right-scattered point")
    omega = float(omega)
    sp = math.sin(omega * mu) / mu
    cm = (math.cos(omega * mu) - 1.0) / mu
    c, s = math.cos(omega * t), math.sin(omega * t)
    return cm * c - sp * s, sp * c + cm * s
