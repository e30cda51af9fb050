"""Time scales as finite unions of closed intervals and isolated points.

Supplies jump operators, graininess, point classification, grid
enumeration and the delta integral. All values are immutable and all
operations are pure, so scales and grids can be shared across threads.

Scales with accumulation points are not representable: construction
requires a finite component list with gaps larger than the membership
tolerance, which keeps the jump operators and the integral exact.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Iterable, Union

from .errors import DomainError, KappaError, OverlapError, ToleranceError

# Absolute tolerance for locating a time value inside a component.
MEMBERSHIP_TOL = 1e-12

# Default absolute tolerance for tolerance-driven quadrature.
DEFAULT_TOL = 1e-12

_MAX_SIMPSON_DEPTH = 40


@dataclass(frozen=True)
class ClosedInterval:
    """A continuous component [lo, hi] with lo < hi."""

    lo: float
    hi: float

    @property
    def left(self) -> float:
        return self.lo

    @property
    def right(self) -> float:
        return self.hi


@dataclass(frozen=True)
class IsolatedPoint:
    """A single isolated time value."""

    t: float

    @property
    def left(self) -> float:
        return self.t

    @property
    def right(self) -> float:
        return self.t


Component = Union[ClosedInterval, IsolatedPoint]


@dataclass(frozen=True)
class PointClass:
    """Density classification of a point, one flag per side."""

    right_dense: bool
    left_dense: bool

    @property
    def right_scattered(self) -> bool:
        return not self.right_dense

    @property
    def left_scattered(self) -> bool:
        return not self.left_dense


@dataclass(frozen=True)
class Grid:
    """Ordered sample points of a scale plus the step used inside intervals."""

    points: tuple[float, ...]
    dense_step: float

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(float(p) for p in self.points))
        if self.dense_step <= 0:
            raise ValueError("dense_step must be positive")
        if not self.points:
            raise ValueError("grid must contain at least one point")
        for a, b in zip(self.points, self.points[1:]):
            if not b > a:
                raise ValueError("grid points must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index_of(self, t: float) -> int | None:
        """Index of the grid point equal to t within the membership tolerance."""
        i = bisect_left(self.points, t - MEMBERSHIP_TOL)
        if i < len(self.points) and abs(self.points[i] - t) <= MEMBERSHIP_TOL:
            return i
        return None


@dataclass(frozen=True)
class TimeScale:
    """Finite union of closed intervals and isolated points, strictly ordered."""

    components: tuple[Component, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise ValueError("a time scale needs at least one component")
        for c in comps:
            if isinstance(c, ClosedInterval):
                if not (math.isfinite(c.lo) and math.isfinite(c.hi)):
                    raise ValueError("interval endpoints must be finite")
                if not c.hi - c.lo > MEMBERSHIP_TOL:
                    raise ValueError(
                        f"interval [{c.lo}, {c.hi}] is empty or ill-conditioned"
                    )
            elif isinstance(c, IsolatedPoint):
                if not math.isfinite(c.t):
                    raise ValueError("isolated points must be finite")
            else:
                raise TypeError(f"not a component: {c!r}")
        for a, b in zip(comps, comps[1:]):
            if not b.left - a.right > MEMBERSHIP_TOL:
                raise ValueError(
                    f"components {a!r} and {b!r} overlap or are closer than "
                    f"{MEMBERSHIP_TOL}"
                )

    # -- membership -------------------------------------------------------

    @property
    def inf(self) -> float:
        return self.components[0].left

    @property
    def sup(self) -> float:
        return self.components[-1].right

    def __contains__(self, t: float) -> bool:
        try:
            self._locate(t)
        except DomainError:
            return False
        return True

    def _locate(self, t: float) -> tuple[int, float]:
        """Component index and canonically snapped value for a member t."""
        if not math.isfinite(t):
            raise DomainError(f"t={t!r} is not finite")
        for i, comp in enumerate(self.components):
            if t < comp.left - MEMBERSHIP_TOL:
                break
            if isinstance(comp, IsolatedPoint):
                if abs(t - comp.t) <= MEMBERSHIP_TOL:
                    return i, comp.t
            else:
                if t <= comp.hi + MEMBERSHIP_TOL:
                    if abs(t - comp.lo) <= MEMBERSHIP_TOL:
                        return i, comp.lo
                    if abs(t - comp.hi) <= MEMBERSHIP_TOL:
                        return i, comp.hi
                    return i, t
        raise DomainError(f"t={t!r} is not a member of the time scale")

    # -- jump operators ----------------------------------------------------

    def sigma(self, t: float) -> float:
        """Forward jump: least member above t, or t itself at the supremum."""
        i, tt = self._locate(t)
        comp = self.components[i]
        if isinstance(comp, ClosedInterval) and tt < comp.hi:
            return tt
        if i + 1 < len(self.components):
            return self.components[i + 1].left
        return tt

    def rho(self, t: float) -> float:
        """Backward jump: greatest member below t, or t itself at the infimum."""
        i, tt = self._locate(t)
        comp = self.components[i]
        if isinstance(comp, ClosedInterval) and tt > comp.lo:
            return tt
        if i > 0:
            return self.components[i - 1].right
        return tt

    def in_kappa(self, t: float) -> bool:
        """True unless t is a left-scattered maximum of the scale."""
        _, tt = self._locate(t)
        return not (tt == self.sup and self.rho(tt) < tt)

    def mu(self, t: float) -> float:
        """Graininess sigma(t) - t; undefined at a left-scattered maximum."""
        if not self.in_kappa(t):
            raise KappaError(f"t={t!r} is the left-scattered maximum")
        _, tt = self._locate(t)
        return self.sigma(tt) - tt

    def classify(self, t: float) -> PointClass:
        _, tt = self._locate(t)
        return PointClass(
            right_dense=self.sigma(tt) == tt, left_dense=self.rho(tt) == tt
        )

    # -- structure queries --------------------------------------------------

    def is_discrete(self) -> bool:
        return all(isinstance(c, IsolatedPoint) for c in self.components)

    def constant_graininess(self) -> float | None:
        """Constant graininess value, or None when graininess varies.

        A single interval has graininess identically zero; a uniformly
        spaced set of isolated points has the spacing. Anything else mixes
        zero and positive values.
        """
        if len(self.components) == 1 and isinstance(self.components[0], ClosedInterval):
            return 0.0
        if not self.is_discrete():
            return None
        pts = [c.t for c in self.components]
        if len(pts) < 2:
            return None
        eps = pts[1] - pts[0]
        for a, b in zip(pts, pts[1:]):
            if abs((b - a) - eps) > MEMBERSHIP_TOL:
                return None
        return eps

    def scattered_points(self, t0: float, t1: float) -> tuple[tuple[float, float], ...]:
        """Right-scattered members s in [t0, t1) with their graininess, ascending."""
        _, a = self._locate(t0)
        _, b = self._locate(t1)
        if b < a:
            a, b = b, a
        out = []
        for i, comp in enumerate(self.components):
            if comp.left > b:
                break
            end = comp.right
            if a <= end < b:
                nxt = self.components[i + 1].left
                out.append((end, nxt - end))
        return tuple(out)

    def dense_segments(self, t0: float, t1: float) -> tuple[tuple[float, float], ...]:
        """Nondegenerate interval pieces of the scale clipped to [t0, t1]."""
        _, a = self._locate(t0)
        _, b = self._locate(t1)
        if b < a:
            a, b = b, a
        out = []
        for comp in self.components:
            if comp.left > b:
                break
            if isinstance(comp, ClosedInterval):
                c, d = max(comp.lo, a), min(comp.hi, b)
                if d > c:
                    out.append((c, d))
        return tuple(out)

    # -- integration ---------------------------------------------------------

    def delta_integral(
        self,
        f: Callable[[float], complex],
        t0: float,
        t1: float,
        tol: float = DEFAULT_TOL,
    ) -> complex:
        """Delta integral of f from t0 to t1.

        Sums mu(s)*f(s) over right-scattered s in [t0, t1) and applies
        adaptive Simpson quadrature (absolute tolerance tol) on the
        continuous pieces. Antisymmetric in (t0, t1). The scattered sum is
        accumulated in plain ascending order so that on purely discrete
        scales the result is bit-identical to the naive finite sum.

        Quadrature samples f on each closed continuous piece, so f must
        extend continuously to the piece's endpoints; integrands whose
        jump value differs at a scattered right endpoint (anything built
        from the pointwise graininess) belong in the coefficient
        machinery, which integrates their zero-graininess view instead.
        """
        _, a = self._locate(t0)
        _, b = self._locate(t1)
        if a == b:
            return 0j
        if b < a:
            return -self.delta_integral(f, t1, t0, tol)
        jumps = 0j
        riemann = 0j
        for i, comp in enumerate(self.components):
            if comp.left > b:
                break
            if isinstance(comp, ClosedInterval):
                c, d = max(comp.lo, a), min(comp.hi, b)
                if d > c:
                    riemann += _adaptive_simpson(f, c, d, tol)
            end = comp.right
            if a <= end < b:
                nxt = self.components[i + 1].left
                jumps += (nxt - end) * f(end)
        return riemann + jumps

    # -- grids ----------------------------------------------------------------

    def make_grid(self, t0: float, t1: float, dense_step: float) -> Grid:
        """Deterministic grid on [t0, t1] covering all endpoints in range.

        Every isolated point and every interval endpoint inside the range
        is included; interval interiors are sampled uniformly with spacing
        at most dense_step.
        """
        if dense_step <= 0:
            raise ValueError("dense_step must be positive")
        _, a = self._locate(t0)
        _, b = self._locate(t1)
        if b < a:
            raise DomainError(f"range reversed: {t0!r} > {t1!r}")
        pts: list[float] = []
        for comp in self.components:
            if comp.left > b:
                break
            if comp.right < a:
                continue
            if isinstance(comp, IsolatedPoint):
                pts.append(comp.t)
                continue
            c, d = max(comp.lo, a), min(comp.hi, b)
            if d <= c:
                pts.append(c)
                continue
            n = max(1, math.ceil((d - c) / dense_step))
            pts.append(c)
            pts.extend(c + k * (d - c) / n for k in range(1, n))
            pts.append(d)
        return Grid(tuple(pts), dense_step)


# -- constructors -------------------------------------------------------------


def interval(lo: float, hi: float) -> TimeScale:
    return TimeScale((ClosedInterval(float(lo), float(hi)),))


def isolated(*ts: float) -> TimeScale:
    return TimeScale(tuple(IsolatedPoint(float(t)) for t in sorted(ts)))


def uniform(start: float, step: float, count: int) -> TimeScale:
    """count isolated points start, start+step, ..."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if step <= 0:
        raise ValueError("step must be positive")
    return TimeScale(tuple(IsolatedPoint(start + k * step) for k in range(count)))


def normalize_components(components: Iterable[Component]) -> tuple[Component, ...]:
    """Sort components, merge ones that touch, reject ones that intersect.

    Touching means boundary contact within the membership tolerance; a
    duplicate point or any interior intersection raises OverlapError.
    """
    comps = sorted(components, key=lambda c: (c.left, c.right))
    merged: list[list[float]] = []  # [lo, hi] pairs, point when lo == hi
    for c in comps:
        lo, hi = c.left, c.right
        if merged and lo <= merged[-1][1] + MEMBERSHIP_TOL:
            plo, phi = merged[-1]
            if plo == phi and lo == hi and abs(lo - phi) <= MEMBERSHIP_TOL:
                raise OverlapError(f"duplicate point {lo!r}")
            if lo < phi - MEMBERSHIP_TOL:
                raise OverlapError(
                    f"components intersect near {lo!r}: "
                    f"[{plo!r}, {phi!r}] and [{lo!r}, {hi!r}]"
                )
            merged[-1][1] = max(phi, hi)
        else:
            merged.append([lo, hi])
    out: list[Component] = []
    for lo, hi in merged:
        if hi > lo:
            out.append(ClosedInterval(lo, hi))
        else:
            out.append(IsolatedPoint(lo))
    return tuple(out)


def union(*scales: TimeScale) -> TimeScale:
    comps: list[Component] = []
    for s in scales:
        comps.extend(s.components)
    return TimeScale(normalize_components(comps))


# -- numeric delta derivative --------------------------------------------------


def delta_derivative_numeric(
    ts: TimeScale, f: Callable[[float], complex], t: float, h0: float = 1e-2
) -> complex:
    """Delta derivative estimate at t.

    At right-scattered points this is the exact difference quotient
    (f(sigma(t)) - f(t)) / mu(t). At right-dense points the ordinary
    derivative is estimated by Richardson extrapolation of difference
    quotients starting from step h0 (clipped to the containing interval);
    for smooth f the estimate is typically accurate to about 1e-9. Meant
    as a test and diagnostics utility, not a production differentiator.
    """
    if h0 <= 0:
        raise ValueError("h0 must be positive")
    i, tt = ts._locate(t)
    if not ts.in_kappa(tt):
        raise KappaError(f"t={t!r} is the left-scattered maximum")
    s = ts.sigma(tt)
    if s > tt:
        return (complex(f(s)) - complex(f(tt))) / (s - tt)
    comp = ts.components[i]
    if isinstance(comp, IsolatedPoint):
        raise DomainError(f"no neighboring members around t={t!r}")
    hl, hr = tt - comp.lo, comp.hi - tt
    if hl > 0 and hr > 0:
        h = min(h0, hl, hr)
        return _richardson(
            lambda hh: (complex(f(tt + hh)) - complex(f(tt - hh))) / (2 * hh), h, 4.0
        )
    if hr > 0:
        h = min(h0, hr)
        return _richardson(lambda hh: (complex(f(tt + hh)) - complex(f(tt))) / hh, h, 2.0)
    h = min(h0, hl)
    return _richardson(lambda hh: (complex(f(tt)) - complex(f(tt - hh))) / hh, h, 2.0)


def _richardson(quotient, h0: float, factor: float, levels: int = 8) -> complex:
    """Neville extrapolation of quotient(h) over h0, h0/2, ...; best estimate wins."""
    row = [quotient(h0)]
    best = row[0]
    best_gap = math.inf
    h = h0
    for _ in range(levels):
        h /= 2
        new = [quotient(h)]
        fac = factor
        for prev in row:
            new.append(new[-1] + (new[-1] - prev) / (fac - 1.0))
            fac *= factor
        gap = abs(new[-1] - row[-1])
        if gap < best_gap:
            best, best_gap = new[-1], gap
        row = new
    return best


# -- quadrature ----------------------------------------------------------------


def _adaptive_simpson(
    f: Callable[[float], complex], a: float, b: float, tol: float
) -> complex:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0j
    m = 0.5 * (a + b)
    fa, fm, fb = complex(f(a)), complex(f(m)), complex(f(b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_step(f, a, b, fa, fm, fb, whole, tol, _MAX_SIMPSON_DEPTH)


def _simpson_step(f, a, b, fa, fm, fb, whole, tol, depth) -> complex:
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = complex(f(lm)), complex(f(rm))
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    # lm == a or rm == b means the interval is below float resolution
    if abs(delta) <= 15.0 * tol or lm <= a or rm >= b:
        return left + right + delta / 15.0
    if depth == 0:
        raise ToleranceError(
            f"quadrature failed to reach tol={tol} on [{a}, {b}]"
        )
    half = 0.5 * tol
    return _simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1) + _simpson_step(
        f, m, b, fm, frm, fb, right, half, depth - 1
    )
