"""Radial equations of the massless Dirac field on the twisted background.

The two spinor components satisfy the coupled first-order system (in r)

    T1' + i (k/H^2) T1 = (lam/(R H)) T2
    T2' - i (k/H^2) T2 = (lam/(R H)) T1

with R^2 = r^2 f(r), H^2 = (r^2-2Mr)/R^2, so k/H^2 = k R^2/(r^2-2Mr) and
R H = sqrt(r^2-2Mr).  Eliminating T2 gives a second-order equation which,
in the horizon variable u = r - 2M, reads

    A T1'' + B T1' + (C + D + E) T1 = 0,
    A = (u+2M)^2 u^2,      B = (M+u)(u+2M) u,
    C = k^2 (R^2)^2,       D = i k [ (R^2)' S - R^2 S'/2 ],   S = u(u+2M),
    E = -lam^2 (u+2M) u.

C and D are expanded to explicit polynomials below.  Note the sign of E:
the system above forces the T1 coefficient g^2 - c^2 + i(g' - g c'/c)
with g = k R^2/S and c = lam/sqrt(S), so the lam^2 term enters negatively.
(Both closed-form branches fail the residual check by ~1e-3 if that sign
is flipped, and direct integration of the first-order system confirms it.)

The same polynomials, evaluated at u = r - 2M < 0, are the r-form
coefficients valid inside the horizon region 0 < r < 2M used by the
origin-expansion solutions.  Evaluation inside the horizon is supported
solely as a formal continuation for plotting; the background is only
physical outside r = 2M.

Four closed-form solutions are provided, one regular and one second branch
at each expansion point (r=0 and u=0), each an exponential-power prefactor
times a confluent Heun function.  The Heun argument lists are transcribed
once, in closed_solution_spec below, and are validated by residual tests.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from . import heun_core
from .errors import (
    DidNotConvergeError,
    IntervalContainsSingularityError,
    OutOfDomainError,
    StepTooLargeError,
)
from .heun_core import ConfluentHeunParams, EvalResult, ThomeBranch
from .spacetimes import DiracBackground, DiracMode, rsq_f


class ExpansionPoint(Enum):
    ORIGIN = "origin"      # analytic around r = 0, formal region 0 < r < 2M
    HORIZON = "horizon"    # analytic around u = r - 2M = 0, region u > 0


class Branch(Enum):
    REGULAR = "regular"    # exponent-0 branch at the expansion point
    SECOND = "second"      # the discarded branch (square-root irregularity)


class AsymptoticKind(Enum):
    OSCILLATORY = "oscillatory"   # constant-modulus plane-wave behavior
    DECAYING = "decaying"         # modulus falling off like 1/u


@dataclass(frozen=True)
class SecondOrderCoeffs:
    """Coefficients of A T1'' + B T1' + (C+D+E) T1 = 0 at a point u."""

    A: float
    B: float
    C: float
    D: complex
    E: float

    @property
    def Csum(self) -> complex:
        return self.C + self.D + self.E


@dataclass(frozen=True)
class SpinorPair:
    """The two radial spinor components at a point."""

    t1: complex
    t2: complex


@dataclass(frozen=True)
class SpinorTrajectory:
    """Sampled integration result of the first-order system."""

    r: np.ndarray
    t1: np.ndarray
    t2: np.ndarray

    def pairs(self):
        return [SpinorPair(a, b) for a, b in zip(self.t1, self.t2)]


@dataclass(frozen=True)
class ClosedSolutionSpec:
    """One closed-form solution: prefactor exponents, mapped Heun parameters,
    and the affine Heun argument z(x) = z_scale * x.

    The prefactor is exp(exp_rate*x) * x**pow_near * (2M + far_sign*x)**pow_far
    with x = r (origin) or x = u (horizon)."""

    expansion_point: ExpansionPoint
    branch: Branch
    params: ConfluentHeunParams
    exp_rate: complex
    pow_near: complex
    pow_far: complex
    far_sign: float
    z_scale: float
    half_width: float      # 2M, the far-base constant

    @property
    def mu_plus_nu(self) -> complex:
        acc = heun_core.accessory_from_params(self.params)
        return acc.mu + acc.nu


def second_order_coeffs(bg: DiracBackground, mode: DiracMode, u: float) -> SecondOrderCoeffs:
    """Coefficient values at u (polynomials; u < 0 gives the r-form inside
    the horizon with u = r - 2M)."""
    M, p, a = bg.M, bg.p, bg.a
    k, lam = mode.k, mode.lam
    A = (u + 2*M)**2*u**2
    B = (M + u)*(u + 2*M)*u
    C = (((p/2 + 0.5)*a**2 + p/2 - 0.5)*(u + 2*M)**2
         - ((p + 1)*a**2 - 2*a + p - 1)*M*(u + 2*M)
         + M**2*(a**2*p - 2*a + p))**2 * k**2
    D = (((0.5j + 0.5j*p)*a**2 + 0.5j*p - 0.5j)*(u + 2*M)**3
         - 1.5j*M*((p + 1)*a**2 + p - 1)*(u + 2*M)**2
         + 1j*(a - 1)*M**2*(a + 1)*(u + 2*M)
         + 1j*M**3*(a**2*p - 2*a + p)) * k
    E = -lam**2*(u + 2*M)*u
    return SecondOrderCoeffs(A, B, C, D, E)


def _eta_horizon(M, p, a, k, lam):
    return (0.5*M**2*k**2*(a**2 + 1)**2*p**2
            + 0.5*M*(a**2 + 1)*(2*M*a**2*k + 4*k*M*a - 2*M*k + 1j)*k*p
            + 2*k**2*a**3*M**2
            + 0.5*M*(4*M*k + 1j)*k*a**2
            + M*k*(-2*M*k + 1j)*a
            - 0.5j*M*k - lam**2 + 0.375)


def _eta_origin(M, p, a, k, lam):
    return (0.5*k**2*M**2*(a**2 + 1)**2*p**2
            - 0.5*M*(a**2 + 1)*(-2*M*a**2*k + 4*M*a*k + 2*k*M + 1j)*k*p
            - 2*k**2*a**3*M**2
            - 0.5*M*k*(-4*k*M + 1j)*a**2
            + M*(2*k*M + 1j)*k*a
            + 0.5j*k*M - lam**2 + 0.375)


def closed_solution_spec(bg: DiracBackground, mode: DiracMode,
                         point: ExpansionPoint, branch: Branch) -> ClosedSolutionSpec:
    """The transcription table of all four closed solutions.

    p2 = a^2 p - 2a + p and p3 = a^2 p + 2a + p are the two horizon-value
    combinations of the area function (r^2 f at r->0 and r=2M are M^2 p2
    and M^2 p3); q1 = (p+1)a^2 + p - 1 sets the exponential rates.
    """
    M, p, a = bg.M, bg.p, bg.a
    k, lam = mode.k, mode.lam
    q1 = (p + 1)*a**2 + p - 1
    p2 = a**2*p - 2*a + p
    p3 = a**2*p + 2*a + p
    alpha = 2j*M*q1*k
    if point is ExpansionPoint.HORIZON:
        gamma = -0.5 + 1j*k*p2*M
        delta = -M*q1*(4*k*M*a + 1j)*k
        eta = _eta_horizon(M, p, a, k, lam)
        if branch is Branch.REGULAR:
            beta = -0.5 - 1j*p3*k*M
            pow_near = -0.5j*p3*k*M
        else:
            beta = 0.5 + 1j*p3*k*M
            pow_near = 0.5 + 0.5j*p3*k*M
        return ClosedSolutionSpec(
            point, branch, ConfluentHeunParams(alpha, beta, gamma, delta, eta),
            exp_rate=-0.5j*k*q1, pow_near=pow_near, pow_far=0.5j*k*p2*M,
            far_sign=+1.0, z_scale=-1/(2*M), half_width=2*M)
    if point is ExpansionPoint.ORIGIN:
        gamma = 0.5 + 1j*k*p3*M
        delta = (4*M*a*k + 1j)*M*q1*k
        eta = _eta_origin(M, p, a, k, lam)
        if branch is Branch.REGULAR:
            beta = -0.5 + 1j*k*p2*M
            pow_near = 0.5j*k*p2*M
        else:
            beta = 0.5 - 1j*k*p2*M
            pow_near = 0.5 - 0.5j*k*p2*M
        return ClosedSolutionSpec(
            point, branch, ConfluentHeunParams(alpha, beta, gamma, delta, eta),
            exp_rate=0.5j*q1*k, pow_near=pow_near, pow_far=0.5 + 0.5j*k*p3*M,
            far_sign=-1.0, z_scale=1/(2*M), half_width=2*M)
    raise ValueError(f"unknown expansion point {point!r}")


def _check_domain(spec: ClosedSolutionSpec, x: float):
    if spec.expansion_point is ExpansionPoint.ORIGIN:
        if not (0.0 < x < spec.half_width):
            raise OutOfDomainError(
                f"origin expansion requires 0 < r < 2M, got r = {x}")
    else:
        if not (x > 0.0):
            raise OutOfDomainError(f"horizon expansion requires u > 0, got u = {x}")


def closed_solution(bg: DiracBackground, mode: DiracMode, spec: ClosedSolutionSpec,
                    position: float, tol: float = 1e-10) -> EvalResult:
    """Evaluate prefactor(x) * H_C(z(x)) and its x-derivative.

    All prefactor bases (x and 2M + far_sign*x) are positive in the domain,
    so principal-branch complex powers are unambiguous.  The error estimate
    is the Heun estimate scaled by the prefactor modulus.
    """
    return closed_solution_many(bg, mode, spec, [position], tol)[0]


def closed_solution_many(bg: DiracBackground, mode: DiracMode, spec: ClosedSolutionSpec,
                         positions, tol: float = 1e-10) -> list[EvalResult]:
    """Batch evaluation; one continuation sweep serves all positions."""
    xs = [float(x) for x in positions]
    for x in xs:
        _check_domain(spec, x)
    heun = heun_core.heun_eval_many(spec.params, [spec.z_scale*x for x in xs], tol)
    out = []
    for x, h in zip(xs, heun):
        far = spec.half_width + spec.far_sign*x
        pref = (cmath.exp(spec.exp_rate*x) * x**spec.pow_near * far**spec.pow_far)
        dlog = spec.exp_rate + spec.pow_near/x + spec.far_sign*spec.pow_far/far
        value = pref*h.value
        deriv = pref*(dlog*h.value + h.derivative*spec.z_scale)
        out.append(EvalResult(value, deriv, abs(pref)*h.err_estimate))
    return out


def system_coefficients(bg: DiracBackground, mode: DiracMode, r: float):
    """(k/H^2, lam/(R H)) of the first-order system at r > 2M."""
    S = r**2 - 2*bg.M*r
    return mode.k*rsq_f(bg, r)/S, mode.lam/math.sqrt(S)


def integrate_system(bg: DiracBackground, mode: DiracMode, r_start: float,
                     r_end: float, initial: SpinorPair, tol: float = 1e-10,
                     samples: int = 200) -> SpinorTrajectory:
    """Adaptively integrate the coupled first-order system over [r_start,
    r_end], which must exclude r = 0 and the horizon r = 2M."""
    lo, hi = min(r_start, r_end), max(r_start, r_end)
    if lo <= 0.0 or (lo <= 2*bg.M <= hi):
        raise IntervalContainsSingularityError(
            f"[{r_start}, {r_end}] touches r=0 or r=2M={2*bg.M}")

    def rhs(r, y):
        g, c = system_coefficients(bg, mode, r)
        t1, t2 = y
        return (-1j*g*t1 + c*t2, 1j*g*t2 + c*t1)

    r_eval = np.linspace(r_start, r_end, samples)
    sol = solve_ivp(rhs, (r_start, r_end),
                    np.array([initial.t1, initial.t2], dtype=complex),
                    method="DOP853", rtol=min(tol, 1e-9), atol=1e-300,
                    t_eval=r_eval)
    if not sol.success:
        raise DidNotConvergeError(f"system integration failed: {sol.message}")
    return SpinorTrajectory(sol.t, sol.y[0], sol.y[1])


def spinor_pair_from_t1(bg: DiracBackground, mode: DiracMode, r: float,
                        t1: complex, dt1_dr: complex) -> SpinorPair:
    """Recover T2 from (T1, T1') through the first system equation; needs
    lam != 0 and r > 2M."""
    if mode.lam == 0:
        raise ValueError("T2 is unconstrained by T1 when lam = 0")
    g, c = system_coefficients(bg, mode, r)
    return SpinorPair(t1, (dt1_dr + 1j*g*t1)/c)


def _fd_second_derivative(solution, x: float, h: float):
    """Fourth-order central difference of the analytically supplied first
    derivative; returns (value, d1, d2_fd)."""
    d = {s: solution(x + s*h) for s in (-2, -1, 0, 1, 2)}
    d2 = (-d[2].derivative + 8*d[1].derivative
          - 8*d[-1].derivative + d[-2].derivative)/(12*h)
    return d[0].value, d[0].derivative, d2


def default_step(u: float) -> float:
    return max(1e-6, 1e-4*abs(u))


def residual_second_order(bg: DiracBackground, mode: DiracMode, solution,
                          u: float, h: float | None = None) -> float:
    """Normalized residual |A T1'' + B T1' + Csum T1| / (|A T1''| + |B T1'|
    + |Csum T1|) at u > 0, with T1'' from central differences of the
    solution's analytic first derivative.  ``solution`` maps u -> EvalResult.
    """
    if u <= 0:
        raise OutOfDomainError(f"horizon-form residual requires u > 0, got {u}")
    if h is None:
        h = default_step(u)
    if h > u/10:
        raise StepTooLargeError(f"h = {h} exceeds u/10 = {u/10}")
    value, d1, d2 = _fd_second_derivative(solution, u, h)
    co = second_order_coeffs(bg, mode, u)
    num = abs(co.A*d2 + co.B*d1 + co.Csum*value)
    den = abs(co.A*d2) + abs(co.B*d1) + abs(co.Csum*value)
    return num/den


def residual_second_order_origin(bg: DiracBackground, mode: DiracMode, solution,
                                 r: float, h: float | None = None) -> float:
    """Same residual in the r-form valid inside the horizon (0 < r < 2M);
    the coefficient polynomials are evaluated at u = r - 2M < 0.
    ``solution`` maps r -> EvalResult."""
    if not (0 < r < 2*bg.M):
        raise OutOfDomainError(f"origin-form residual requires 0 < r < 2M, got {r}")
    if h is None:
        h = default_step(min(r, 2*bg.M - r))
    if h > min(r, 2*bg.M - r)/10:
        raise StepTooLargeError(f"h = {h} exceeds distance/10 to a singular point")
    value, d1, d2 = _fd_second_derivative(solution, r, h)
    co = second_order_coeffs(bg, mode, r - 2*bg.M)
    num = abs(co.A*d2 + co.B*d1 + co.Csum*value)
    den = abs(co.A*d2) + abs(co.B*d1) + abs(co.Csum*value)
    return num/den


def wronskian_scaled(bg: DiracBackground, mode: DiracMode, point: ExpansionPoint,
                     x: float, tol: float = 1e-11) -> complex:
    """W(x) * sqrt(|x^2-2Mx|-style factor): T1 T12' - T1' T12 scaled by
    exp(int B/A) = sqrt(x(x+2M)) (horizon) or sqrt(r(2M-r)) (origin); the
    product is position-independent for exact solutions."""
    reg = closed_solution(bg, mode, closed_solution_spec(bg, mode, point, Branch.REGULAR), x, tol)
    sec = closed_solution(bg, mode, closed_solution_spec(bg, mode, point, Branch.SECOND), x, tol)
    w = reg.value*sec.derivative - reg.derivative*sec.value
    if point is ExpansionPoint.HORIZON:
        return w*math.sqrt(x*(x + 2*bg.M))
    return w*math.sqrt(x*(2*bg.M - x))


def asymptotic_behavior(bg: DiracBackground, mode: DiracMode,
                        kind: AsymptoticKind) -> tuple[complex, complex]:
    """Leading large-u behavior exp(exp_rate*u) * u**power of the two
    solution families, composed from the horizon-regular prefactor and the
    two Thome branches of the Heun factor.

    The oscillatory family has Re(exp_rate) = Re(power) = 0 (a plane wave
    of constant amplitude); the decaying family has Re(power) = -1, so its
    modulus falls off like 1/u.
    """
    spec = closed_solution_spec(bg, mode, ExpansionPoint.HORIZON, Branch.REGULAR)
    s = heun_core.to_spheroidal(spec.params)
    candidates = []
    for tb in (ThomeBranch.PLUS, ThomeBranch.MINUS):
        rate_z, power_z = heun_core.thome_leading(s, tb)
        # H_C = e^{i omega z} U, z = z_scale * u; powers of z and of the
        # prefactor bases merge into one power of u
        exp_rate = spec.exp_rate + (1j*s.omega + rate_z)*spec.z_scale
        power = power_z + spec.pow_near + spec.pow_far
        candidates.append((exp_rate, power))
    osc = min(candidates, key=lambda c: abs(c[1].real))
    dec = min(candidates, key=lambda c: abs(c[1].real + 1))
    return osc if kind is AsymptoticKind.OSCILLATORY else dec


@dataclass(frozen=True)
class PhaseRateReport:
    """Measured phase rate of the horizon-regular solution at large u,
    with the two analytic candidates for comparison.  The candidates differ
    by a factor 4M (an unresolved normalization of the quoted asymptotic
    exponential); the fit decides which one the solution follows."""

    fitted_rate: float
    r_squared: float
    rate_prefactor: float          # |Im exp_rate| of the prefactor, k q1 / 2
    rate_prefactor_times_4m: float  # the 4M-scaled alternative, 2 M k q1


def fitted_phase_rate(bg: DiracBackground, mode: DiracMode, u_lo: float = 50.0,
                      u_hi: float = 100.0, samples: int = 400,
                      tol: float = 1e-10) -> PhaseRateReport:
    """Linear fit of the unwrapped phase of the horizon-regular solution."""
    spec = closed_solution_spec(bg, mode, ExpansionPoint.HORIZON, Branch.REGULAR)
    us = np.linspace(u_lo, u_hi, samples)
    vals = closed_solution_many(bg, mode, spec, us, tol)
    phase = np.unwrap(np.angle(np.array([v.value for v in vals])))
    coef = np.polyfit(us, phase, 1)
    fit = np.polyval(coef, us)
    ss_res = float(np.sum((phase - fit)**2))
    ss_tot = float(np.sum((phase - np.mean(phase))**2))
    q1 = (bg.p + 1)*bg.a**2 + bg.p - 1
    return PhaseRateReport(
        fitted_rate=float(coef[0]),
        r_squared=1.0 - ss_res/ss_tot if ss_tot > 0 else 1.0,
        rate_prefactor=abs(0.5*mode.k*q1),
        rate_prefactor_times_4m=abs(2*bg.M*mode.k*q1))


def perturbed_spec(spec: ClosedSolutionSpec, delta_factor: float = 1.01) -> ClosedSolutionSpec:
    """Copy of a closed-solution spec with the Heun delta argument scaled;
    used as a negative control for the residual checks."""
    p = spec.params
    return replace(spec, params=ConfluentHeunParams(
        p.alpha, p.beta, p.gamma, p.delta*delta_factor, p.eta))
