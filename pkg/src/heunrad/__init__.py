"""Confluent Heun functions and the closed-form radial waves of the massless
Dirac and Klein-Gordon equations on two interpolated Schwarzschild /
Bertotti-Robinson backgrounds."""

from .angular import AngularMode, angular_residual, assoc_legendre
from .curves import (
    FIG1_CONFIG,
    FIG2_CONFIG,
    OutputFormat,
    Problem,
    RunConfig,
    SampledCurve,
    emit,
    sample_curve,
)
from .dirac_radial import (
    AsymptoticKind,
    Branch,
    ClosedSolutionSpec,
    ExpansionPoint,
    SecondOrderCoeffs,
    SpinorPair,
    asymptotic_behavior,
    closed_solution,
    closed_solution_spec,
    fitted_phase_rate,
    integrate_system,
    residual_second_order,
    residual_second_order_origin,
    second_order_coeffs,
    wronskian_scaled,
)
from .errors import (
    BranchUnavailableError,
    CurveEvaluationError,
    DidNotConvergeError,
    DivisionBySingularAreaError,
    HeunradError,
    IntervalContainsSingularityError,
    NotIrregularError,
    OnHorizonError,
    OrderExceedsDegreeError,
    OutOfDomainError,
    SingularPointError,
    StepTooLargeError,
    TooCloseToPoleError,
)
from .heun_core import (
    AccessoryPair,
    ConfluentHeunParams,
    EvalResult,
    IndicialExponents,
    SingularPointLabel,
    SpheroidalForm,
    ThomeBranch,
    accessory_from_params,
    from_spheroidal,
    heun_eval,
    heun_eval_many,
    indicial_exponents,
    ode_residual,
    params_from_accessory,
    polynomial_condition,
    thome_leading,
    to_spheroidal,
)
from .kg_radial import (
    KGBranch,
    KGClosedSpec,
    KGRadialCoeffs,
    kg_closed_solution,
    kg_closed_spec,
    kg_radial_coeffs,
    kg_residual,
    kg_wronskian_scaled,
)
from .spacetimes import (
    DiracBackground,
    DiracMode,
    KGBackground,
    KGMode,
    h_squared,
    kg_delta,
    kg_horizons,
    rsq_f,
)

__version__ = "0.1.0"
