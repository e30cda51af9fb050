"""Calculus on time scales: exponential, hyperbolic and trigonometric
function families with the dynamic-equation machinery that characterizes
them, cross-validated by identity residual checks."""

from .errors import (
    ConstantGraininessError,
    DomainError,
    GridError,
    KappaError,
    OverlapError,
    ParseError,
    RegressivityError,
    SingularError,
    ToleranceError,
    TscaleError,
)
from .timescale import (
    ClosedInterval,
    Grid,
    IsolatedPoint,
    PointClass,
    TimeScale,
    delta_derivative_numeric,
    interval,
    isolated,
    uniform,
    union,
)
from .transforms import (
    Coefficient,
    RegressivityCheck,
    RegressivityKind,
    alpha_of_beta,
    as_coefficient,
    beta_of_alpha,
    cayley,
    check_regressivity,
    graininess_coefficient,
    ominus_mu,
    oplus_cayley,
    oplus_mu,
    xi,
    zeta,
    zeta_inv,
)
from .exponential import (
    ExpEvaluation,
    ExpFamily,
    check_semigroup,
    check_sigma_shift,
    exp_cayley,
    exp_evaluate_grid,
    exp_exact,
    exp_hilger,
    exp_nabla_const,
)
from .trig import (
    TrigFamily,
    TrigKind,
    TrigPair,
    derivative_residual,
    exact_trig_delta,
    hyp,
    hyp_grid,
    pythagorean_residual,
    trig,
    trig_grid,
)
from .dynamic import (
    ExactOscillatorResult,
    SampledFunction,
    Scheme,
    average,
    delbis_relation_residual,
    delta_doubleprime,
    delta_prime,
    double_average,
    oscillator_residual_cayley,
    oscillator_residual_exact,
    phi,
    psi,
    sinc,
    solve_first_order,
)
from .report import ResidualReport
from .cli import parse_scale, render

__version__ = "0.1.0"
