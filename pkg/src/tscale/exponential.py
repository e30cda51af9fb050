"""Exponential function families on time scales.

Four families share one evaluation core: an exponent integral is
accumulated along the scale (log terms at right-scattered points,
quadrature on continuous pieces) and exponentiated once per requested
point. Accumulating the exponent, rather than multiplying step factors,
keeps the complex phase unwrapped over long discrete products.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    ConstantGraininessError,
    DomainError,
    GridError,
    RegressivityError,
    SingularError,
    ToleranceError,
)
from .timescale import DEFAULT_TOL, Grid, TimeScale
from .transforms import (
    REGRESSIVITY_MARGIN,
    Coefficient,
    as_coefficient,
    cayley,
    xi,
    zeta,
)


class ExpFamily(Enum):
    HILGER_DELTA = "hilger"
    NABLA_CONST = "nabla"
    CAYLEY = "cayley"
    EXACT = "exact"


@dataclass(frozen=True)
class ExpEvaluation:
    """Grid evaluation of one exponential family; immutable and shareable."""

    family: ExpFamily
    ts: TimeScale
    alpha: Coefficient
    t0: float
    grid: Grid
    values: tuple[complex, ...]
    tol: float

    def __post_init__(self):
        if len(self.values) != len(self.grid.points):
            raise ValueError("values and grid must align")
        for v in self.values:
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ToleranceError("non-finite exponential value on grid")

    def value_at(self, t: float) -> complex:
        i = self.grid.index_of(t)
        if i is None:
            raise GridError(f"t={t!r} is not a grid point")
        return self.values[i]


# -- exponent integral -----------------------------------------------------------


def _step_log(family: ExpFamily, mu: float, a: complex) -> complex:
    """Exponent contribution of one scattered step of graininess mu."""
    if family is ExpFamily.HILGER_DELTA:
        return mu * xi(mu, a)
    return mu * zeta(mu, a)


def _log_integral_range(
    family: ExpFamily, ts: TimeScale, coeff: Coefficient, t0: float, t1: float, tol: float
) -> complex:
    """Exponent integral from t0 to t1: step logs at scattered points plus
    quadrature of the coefficient's dense view on continuous pieces (the
    cylinder maps reduce to the identity at zero graininess there)."""
    _, a = ts._locate(t0)
    _, b = ts._locate(t1)
    if a == b:
        return 0j
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    total = 0j
    for s, mu in ts.scattered_points(a, b):
        total += _step_log(family, mu, coeff(s))
    for c, d in ts.dense_segments(a, b):
        total += ts.delta_integral(coeff.dense, c, d, tol)
    return sign * total


def _validate_regressive(
    family: ExpFamily, ts: TimeScale, coeff: Coefficient, lo: float, hi: float
) -> None:
    """Fail fast with the first point where the step factor degenerates."""
    for s, mu in ts.scattered_points(lo, hi):
        m = mu * coeff(s)
        if family is ExpFamily.HILGER_DELTA:
            if abs(1.0 + m) <= REGRESSIVITY_MARGIN:
                raise RegressivityError(
                    f"1 + mu*alpha vanishes at t={s!r} (mu*alpha={m!r})", t=s
                )
        elif family is ExpFamily.CAYLEY:
            if abs(m - 2.0) <= REGRESSIVITY_MARGIN or abs(m + 2.0) <= REGRESSIVITY_MARGIN:
                raise RegressivityError(
                    f"mu*alpha = {m!r} at t={s!r} is within margin of ±2", t=s
                )


# -- pointwise evaluation --------------------------------------------------------


def exp_hilger(ts: TimeScale, alpha, t: float, t0: float, tol: float = DEFAULT_TOL) -> complex:
    """Forward-step exponential: exp of the delta integral of the cylinder map.

    On a uniform discrete scale with constant alpha this equals
    (1 + alpha*eps) ** (t/eps).
    """
    coeff = as_coefficient(alpha)
    _validate_regressive(ExpFamily.HILGER_DELTA, ts, coeff, min(t, t0), max(t, t0))
    return cmath.exp(_log_integral_range(ExpFamily.HILGER_DELTA, ts, coeff, t0, t, tol))


def exp_cayley(ts: TimeScale, alpha, t: float, t0: float, tol: float = DEFAULT_TOL) -> complex:
    """Cayley exponential: exp of the delta integral of the Cayley cylinder map.

    On a uniform discrete scale with constant alpha this equals
    ((1 + alpha*eps/2) / (1 - alpha*eps/2)) ** (t/eps).
    """
    coeff = as_coefficient(alpha)
    _validate_regressive(ExpFamily.CAYLEY, ts, coeff, min(t, t0), max(t, t0))
    return cmath.exp(_log_integral_range(ExpFamily.CAYLEY, ts, coeff, t0, t, tol))


def exp_nabla_const(eps: float, alpha: complex, t: float) -> complex:
    """Backward-step exponential on a uniform discrete scale, constant alpha.

    Defined as (1 - alpha*eps) ** (-t/eps); t must be an integer multiple
    of eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    alpha = complex(alpha)
    k = round(t / eps)
    if abs(t - k * eps) > 1e-9 * max(1.0, abs(t)):
        raise DomainError(f"t={t!r} is not an integer multiple of eps={eps!r}")
    base = 1.0 - alpha * eps
    if base == 0:
        raise SingularError(f"alpha*eps = 1 for alpha={alpha!r}, eps={eps!r}")
    return base ** (-k)


def exp_exact(alpha: complex, t: float, t0: float) -> complex:
    """Restriction of the continuum exponential: exp(alpha * (t - t0))."""
    return cmath.exp(complex(alpha) * (t - t0))


# -- grid evaluation --------------------------------------------------------------


def exp_evaluate_grid(
    family: ExpFamily,
    ts: TimeScale,
    alpha,
    t0: float,
    grid: Grid,
    tol: float = DEFAULT_TOL,
) -> ExpEvaluation:
    """Evaluate one family at every grid point in linear total cost.

    The exponent integral is accumulated incrementally between
    consecutive grid points, anchored at t0 so the value there is exactly
    one when t0 lies on the grid.
    """
    coeff = as_coefficient(alpha)
    if family is ExpFamily.EXACT:
        a = coeff.constant_value
        values = tuple(cmath.exp(a * (p - t0)) for p in grid.points)
        return ExpEvaluation(family, ts, coeff, t0, grid, values, tol)
    if family is ExpFamily.NABLA_CONST:
        values = _nabla_grid_values(ts, coeff, t0, grid)
        return ExpEvaluation(family, ts, coeff, t0, grid, values, tol)
    lo = min(grid.points[0], t0)
    hi = max(grid.points[-1], t0)
    _validate_regressive(family, ts, coeff, lo, hi)
    logs = _grid_log_integrals(family, ts, coeff, t0, grid, tol)
    values = tuple(cmath.exp(L) for L in logs)
    return ExpEvaluation(family, ts, coeff, t0, grid, values, tol)


def _nabla_grid_values(ts, coeff, t0, grid) -> tuple[complex, ...]:
    eps = ts.constant_graininess()
    if not ts.is_discrete() or eps is None or eps <= 0:
        raise ConstantGraininessError(
            "the backward-step family needs a uniform discrete scale"
        )
    a = coeff.constant_value
    base = 1.0 - a * eps
    if base == 0:
        raise SingularError(f"alpha*eps = 1 for alpha={a!r}, eps={eps!r}")
    out = []
    for p in grid.points:
        k = round((p - t0) / eps)
        if abs((p - t0) - k * eps) > 1e-9 * max(1.0, abs(p - t0)):
            raise DomainError(f"t={p!r} is not t0 plus an integer multiple of eps")
        out.append(base ** (-k))
    return tuple(out)


def _grid_log_integrals(
    family: ExpFamily, ts: TimeScale, coeff: Coefficient, t0: float, grid: Grid, tol: float
) -> list[complex]:
    """Exponent integral from t0 to each grid point, reusing partial sums."""
    n = len(grid.points)
    _, t0s = ts._locate(t0)
    anchor = grid.index_of(t0s)
    logs: list[complex] = [0j] * n
    if anchor is None:
        anchor = 0
        logs[0] = _log_integral_range(family, ts, coeff, t0s, grid.points[0], tol)
    for k in range(anchor, n - 1):
        logs[k + 1] = logs[k] + _log_increment(family, ts, coeff, grid, k, tol)
    for k in range(anchor, 0, -1):
        logs[k - 1] = logs[k] - _log_increment(family, ts, coeff, grid, k - 1, tol)
    return logs


def _log_increment(family, ts, coeff, grid, k, tol) -> complex:
    p, q = grid.points[k], grid.points[k + 1]
    s = ts.sigma(p)
    if s > p:
        if abs(s - q) > 1e-12:
            raise GridError(
                f"grid skips the forward jump of {p!r}: next sample {q!r}, jump {s!r}"
            )
        return _step_log(family, s - p, coeff(p))
    return ts.delta_integral(coeff.dense, p, q, tol)


# -- degenerate-tolerant forward-step evaluation -----------------------------------


def _hilger_product_point(
    ts: TimeScale, coeff: Coefficient, t: float, t0: float, tol: float
) -> complex:
    """Forward-step exponential as a plain step-factor product.

    Tolerates step factors that are exactly zero (the value is then zero
    from that jump onward), which the exponent-integral path cannot
    represent. Only forward evaluation can cross a zero factor.
    """
    _, a = ts._locate(t0)
    _, b = ts._locate(t)
    backward = b < a
    lo, hi = (b, a) if backward else (a, b)
    prod = 1 + 0j
    for s, mu in ts.scattered_points(lo, hi):
        prod *= 1.0 + mu * coeff(s)
    for c, d in ts.dense_segments(lo, hi):
        prod *= cmath.exp(ts.delta_integral(coeff.dense, c, d, tol))
    if backward:
        if prod == 0:
            raise SingularError(
                "cannot evaluate backward through a degenerate (zero) step factor"
            )
        return 1.0 / prod
    return prod


def _hilger_grid_lenient(
    ts: TimeScale, coeff: Coefficient, t0: float, grid: Grid, tol: float
) -> tuple[complex, ...]:
    """Grid values of the forward-step exponential, degenerate factors allowed."""
    try:
        _validate_regressive(
            ExpFamily.HILGER_DELTA,
            ts,
            coeff,
            min(grid.points[0], t0),
            max(grid.points[-1], t0),
        )
        logs = _grid_log_integrals(ExpFamily.HILGER_DELTA, ts, coeff, t0, grid, tol)
        return tuple(cmath.exp(L) for L in logs)
    except RegressivityError:
        return tuple(
            _hilger_product_point(ts, coeff, p, t0, tol) for p in grid.points
        )


# -- property residuals -------------------------------------------------------------


def _exp_point(family: ExpFamily, ts: TimeScale, coeff, t, t0, tol) -> complex:
    coeff = as_coefficient(coeff)
    if family is ExpFamily.HILGER_DELTA:
        return exp_hilger(ts, coeff, t, t0, tol)
    if family is ExpFamily.CAYLEY:
        return exp_cayley(ts, coeff, t, t0, tol)
    if family is ExpFamily.EXACT:
        return exp_exact(coeff.constant_value, t, t0)
    if family is ExpFamily.NABLA_CONST:
        eps = ts.constant_graininess()
        if not ts.is_discrete() or eps is None:
            raise ConstantGraininessError(
                "the backward-step family needs a uniform discrete scale"
            )
        return exp_nabla_const(eps, coeff.constant_value, t - t0)
    raise ValueError(f"unknown family {family!r}")


def check_semigroup(
    family: ExpFamily, ts: TimeScale, alpha, t, t0, t1, tol: float = DEFAULT_TOL
) -> float:
    """Residual |E(t,t0) E(t0,t1) - E(t,t1)| of the two-point composition law."""
    coeff = as_coefficient(alpha)
    a = _exp_point(family, ts, coeff, t, t0, tol)
    b = _exp_point(family, ts, coeff, t0, t1, tol)
    c = _exp_point(family, ts, coeff, t, t1, tol)
    return abs(a * b - c)


def check_sigma_shift(
    family: ExpFamily, ts: TimeScale, alpha, t, t0, tol: float = DEFAULT_TOL
) -> float:
    """Residual of the one-jump shift law E(sigma(t), t0) = factor * E(t, t0).

    The factor is the family's step factor: (1 + mu*alpha/2)/(1 - mu*alpha/2)
    for the Cayley family, 1 + mu*alpha for the forward-step family. At a
    right-dense point the residual is identically zero.
    """
    if family not in (ExpFamily.CAYLEY, ExpFamily.HILGER_DELTA):
        raise ValueError("shift law check supports the Cayley and forward-step families")
    coeff = as_coefficient(alpha)
    _, tt = ts._locate(t)
    mu = ts.mu(tt)
    a = coeff(tt)
    if family is ExpFamily.CAYLEY:
        factor = cayley(a, 0.5 * mu)
    else:
        factor = 1.0 + mu * a
    et = _exp_point(family, ts, coeff, tt, t0, tol)
    es = _exp_point(family, ts, coeff, ts.sigma(tt), t0, tol)
    return abs(es - factor * et)
