"""Pointwise scalar maps and the regressive-coefficient algebra.

Cylinder transforms, the Cayley transform, both circle-plus additions,
the correspondence between trapezoidal and forward-step coefficients,
and the regressivity predicates. Everything here is a pure function of
its arguments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .errors import SingularError
from .timescale import Grid, TimeScale

# Margin below which regressivity predicates report failure instead of
# letting downstream exponentials lose all precision.
REGRESSIVITY_MARGIN = 1e-9

# Below this |h*z| the log-ratio form of the Cayley cylinder cancels badly;
# a short odd series is exact to double precision there.
_SERIES_CUTOFF = 1e-4


def _principal_log(w: complex) -> complex:
    """Principal-branch log with the negative real axis taken from above."""
    if w == 0:
        raise SingularError("log of zero")
    if w.imag == 0.0:
        w = complex(w.real, 0.0)  # clears a negative zero below the cut
    return cmath.log(w)


def xi(h: float, z: complex) -> complex:
    """Cylinder transform: the exponent whose forward step factor is 1 + z*h.

    xi(0, z) = z; otherwise log(1 + z*h) / h on the principal branch.
    """
    if h < 0:
        raise ValueError("h must be nonnegative")
    z = complex(z)
    if h == 0:
        return z
    w = 1.0 + z * h
    if w == 0:
        raise SingularError(f"1 + z*h vanishes for z={z!r}, h={h!r}")
    return _principal_log(w) / h


def zeta(h: float, z: complex) -> complex:
    """Cayley cylinder transform, the exponent of the Cayley step factor.

    zeta(0, z) = z; otherwise log((1 + z*h/2) / (1 - z*h/2)) / h on the
    principal branch. Even in h. For small |h*z| the series
    z + h^2 z^3 / 12 + h^4 z^5 / 80 is used to avoid cancellation.
    """
    h = abs(h)
    z = complex(z)
    if h == 0:
        return z
    if abs(h * z) < _SERIES_CUTOFF:
        z2 = z * z
        return z + (h * h) * (z2 * z) / 12.0 + (h ** 4) * (z2 * z2 * z) / 80.0
    num = 1.0 + 0.5 * h * z
    den = 1.0 - 0.5 * h * z
    if num == 0 or den == 0:
        raise SingularError(f"z*h/2 = ±1 for z={z!r}, h={h!r}")
    return _principal_log(num / den) / h


def zeta_inv(h: float, w: complex) -> complex:
    """Inverse of the Cayley cylinder: (2/h) tanh(h*w/2), identity at h = 0."""
    h = abs(h)
    w = complex(w)
    if h == 0:
        return w
    u = 0.5 * h * w
    if abs(u.real) < REGRESSIVITY_MARGIN and abs(math.cos(u.imag)) < REGRESSIVITY_MARGIN:
        raise SingularError(f"h*w/2 = {u!r} is within guard distance of a tanh pole")
    return (2.0 / h) * cmath.tanh(u)


def cayley(z: complex, a: complex) -> complex:
    """Cayley transform (1 + a*z) / (1 - a*z)."""
    z, a = complex(z), complex(a)
    den = 1.0 - a * z
    if den == 0:
        raise SingularError(f"a*z = 1 for z={z!r}, a={a!r}")
    return (1.0 + a * z) / den


def oplus_mu(mu: float, a: complex, b: complex) -> complex:
    """Forward-step addition a + b + mu*a*b (exponent product law)."""
    return complex(a) + complex(b) + mu * complex(a) * complex(b)


def ominus_mu(mu: float, a: complex) -> complex:
    """Forward-step additive inverse -a / (1 + mu*a)."""
    a = complex(a)
    den = 1.0 + mu * a
    if den == 0:
        raise SingularError(f"1 + mu*a vanishes for a={a!r}, mu={mu!r}")
    return -a / den


def oplus_cayley(mu: float, a: complex, b: complex) -> complex:
    """Lorentz-style addition (a + b) / (1 + mu^2 a b / 4).

    Raises SingularError when the denominator vanishes (mu^2 a b near -4,
    the documented non-closure of the regressive set).
    """
    a, b = complex(a), complex(b)
    den = 1.0 + 0.25 * mu * mu * a * b
    if abs(den) < 1e-12:
        raise SingularError(
            f"mu^2*a*b = {mu * mu * a * b!r} is too close to -4: sum not regressive"
        )
    return (a + b) / den


def beta_of_alpha(mu: float, a: complex) -> complex:
    """Forward-step coefficient equivalent to trapezoidal coefficient a."""
    a = complex(a)
    den = 1.0 - 0.5 * mu * a
    if den == 0:
        raise SingularError(f"mu*a = 2 for a={a!r}, mu={mu!r}")
    return a / den


def alpha_of_beta(mu: float, b: complex) -> complex:
    """Trapezoidal coefficient equivalent to forward-step coefficient b."""
    b = complex(b)
    den = 1.0 + 0.5 * mu * b
    if den == 0:
        raise SingularError(f"mu*b = -2 for b={b!r}, mu={mu!r}")
    return b / den


# -- coefficients ---------------------------------------------------------------


class Coefficient:
    """Scalar coefficient on a time scale, evaluated pointwise as alpha(t).

    Kinds: "constant", "piecewise" (right-continuous steps), "tabulated"
    (values pinned to known abscissae) and "function" (an in-memory
    callable; not serializable). rd-continuity is a caller-asserted
    contract recorded as a flag. Evaluation is pure and caches nothing.

    A coefficient that depends on the pointwise graininess takes a jump
    value at the scattered right endpoint of a continuous piece while its
    limit along the piece uses zero graininess; `dense` exposes that limit
    evaluator so quadrature sees a continuous integrand. For plain
    coefficients the two evaluators coincide.
    """

    __slots__ = ("kind", "rd_continuous", "_eval", "_dense", "payload")

    def __init__(self, kind, eval_fn, payload, rd_continuous=True, dense_fn=None):
        self.kind = kind
        self._eval = eval_fn
        self._dense = dense_fn if dense_fn is not None else eval_fn
        self.payload = payload
        self.rd_continuous = bool(rd_continuous)

    @classmethod
    def constant(cls, value: complex) -> "Coefficient":
        v = complex(value)
        return cls("constant", lambda t: v, v)

    @classmethod
    def piecewise(cls, breakpoints, values, rd_continuous=True) -> "Coefficient":
        """Step function: values[i] on [breakpoints[i-1], breakpoints[i])."""
        bps = tuple(float(b) for b in breakpoints)
        vals = tuple(complex(v) for v in values)
        if len(vals) != len(bps) + 1:
            raise ValueError("need len(values) == len(breakpoints) + 1")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")

        def ev(t, _bps=bps, _vals=vals):
            i = 0
            while i < len(_bps) and t >= _bps[i]:
                i += 1
            return _vals[i]

        return cls("piecewise", ev, (bps, vals), rd_continuous)

    @classmethod
    def tabulated(cls, points, values, rd_continuous=True) -> "Coefficient":
        pts = tuple(float(p) for p in points)
        vals = tuple(complex(v) for v in values)
        if len(pts) != len(vals):
            raise ValueError("points and values must have equal length")

        def ev(t, _pts=pts, _vals=vals):
            for p, v in zip(_pts, _vals):
                if abs(t - p) <= 1e-12:
                    return v
            raise ValueError(f"t={t!r} is not a tabulated abscissa")

        return cls("tabulated", ev, (pts, vals), rd_continuous)

    @classmethod
    def from_function(
        cls,
        fn: Callable[[float], complex],
        rd_continuous=True,
        dense_fn: Callable[[float], complex] | None = None,
    ):
        wrapped_dense = None if dense_fn is None else (lambda t: complex(dense_fn(t)))
        return cls(
            "function", lambda t: complex(fn(t)), None, rd_continuous, wrapped_dense
        )

    def __call__(self, t: float) -> complex:
        return self._eval(t)

    @property
    def dense(self) -> Callable[[float], complex]:
        """Evaluator for points of continuous pieces (zero-graininess limit)."""
        return self._dense

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    @property
    def constant_value(self) -> complex:
        if not self.is_constant:
            raise ValueError("coefficient is not constant")
        return self.payload

    def scaled(self, factor: complex) -> "Coefficient":
        factor = complex(factor)
        if self.kind == "constant":
            return Coefficient.constant(factor * self.payload)
        if self.kind == "piecewise":
            bps, vals = self.payload
            return Coefficient.piecewise(
                bps, tuple(factor * v for v in vals), self.rd_continuous
            )
        if self.kind == "tabulated":
            pts, vals = self.payload
            return Coefficient.tabulated(
                pts, tuple(factor * v for v in vals), self.rd_continuous
            )
        inner, inner_dense = self._eval, self._dense
        return Coefficient.from_function(
            lambda t: factor * inner(t),
            self.rd_continuous,
            dense_fn=(
                None if inner_dense is inner else (lambda t: factor * inner_dense(t))
            ),
        )

    def __neg__(self) -> "Coefficient":
        return self.scaled(-1.0)

    def __repr__(self):
        return f"Coefficient({self.kind}, {self.payload!r})"


def as_coefficient(alpha) -> Coefficient:
    """Coerce a Coefficient, scalar, or bare callable to a Coefficient."""
    if isinstance(alpha, Coefficient):
        return alpha
    if isinstance(alpha, (int, float, complex)):
        return Coefficient.constant(alpha)
    if callable(alpha):
        return Coefficient.from_function(alpha)
    raise TypeError(f"cannot interpret {alpha!r} as a coefficient")


def graininess_coefficient(ts: TimeScale, fn, rd_continuous=True) -> Coefficient:
    """Coefficient defined through the pointwise graininess: fn(mu, t).

    At scattered points the scale's graininess is used; the dense
    evaluator fixes mu = 0 since the graininess vanishes identically
    along continuous pieces. This keeps quadrature integrands continuous
    on closed segments even though the jump value at a segment's
    scattered right endpoint differs.
    """
    return Coefficient.from_function(
        lambda t: fn(ts.mu(t), t),
        rd_continuous,
        dense_fn=lambda t: fn(0.0, t),
    )


# -- regressivity ----------------------------------------------------------------


class RegressivityKind(Enum):
    MU_REGRESSIVE = "mu"  # 1 + mu*alpha != 0
    CAYLEY_REGRESSIVE = "cayley"  # mu*alpha != ±2
    POSITIVELY_REGRESSIVE = "positive"  # alpha real, |mu*alpha| < 2


@dataclass(frozen=True)
class RegressivityCheck:
    """Outcome of a regressivity scan; truthiness mirrors ok."""

    ok: bool
    kind: RegressivityKind
    first_violation: float | None = None
    message: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_regressivity(
    kind: RegressivityKind, ts: TimeScale, alpha, grid: Grid
) -> RegressivityCheck:
    """Check the predicate at every grid point with margin 1e-9.

    Points outside the differentiation domain (a left-scattered maximum)
    are skipped since graininess is undefined there.
    """
    coeff = as_coefficient(alpha)
    for t in grid.points:
        if not ts.in_kappa(t):
            continue
        m = ts.mu(t) * coeff(t)
        bad = _violation(kind, m)
        if bad is not None:
            return RegressivityCheck(False, kind, first_violation=t, message=bad)
    return RegressivityCheck(True, kind)


def _violation(kind: RegressivityKind, m: complex) -> str | None:
    if kind is RegressivityKind.MU_REGRESSIVE:
        if abs(1.0 + m) <= REGRESSIVITY_MARGIN:
            return f"1 + mu*alpha = {1.0 + m!r} within margin of zero"
        return None
    if kind is RegressivityKind.CAYLEY_REGRESSIVE:
        if abs(m - 2.0) <= REGRESSIVITY_MARGIN or abs(m + 2.0) <= REGRESSIVITY_MARGIN:
            return f"mu*alpha = {m!r} within margin of ±2"
        return None
    if kind is RegressivityKind.POSITIVELY_REGRESSIVE:
        if abs(m.imag) > 1e-13:
            return f"mu*alpha = {m!r} is not real"
        if abs(m.real) >= 2.0 - REGRESSIVITY_MARGIN:
            return f"|mu*alpha| = {abs(m.real)!r} not below 2 with margin"
        return None
    raise ValueError(f"unknown regressivity kind: {kind!r}")
