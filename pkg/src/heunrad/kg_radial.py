"""Radial equation of the massless Klein-Gordon field on the charged-coupling
background.

After separating Phi = e^{-i omega t} e^{i n phi} F(r) S(theta), the radial
part reads

    F'' + (Delta'/Delta) F' + (r^4 omega^2 - lam Delta)/Delta^2 F = 0

with Delta = (r-r1)(r-r2).  In the exterior variable u = r - r1 both
closed-form branches are exponential-power prefactors times a confluent
Heun function of z = -u/(r1-r2); they differ only in the sign of the
u-power exponent +/- i r1^2 omega/(r1-r2), matching the two indicial roots
at z=0.  The same transcription-plus-residual discipline as the Dirac
module applies.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, replace
from enum import Enum

from . import heun_core
from .errors import OnHorizonError, OutOfDomainError, StepTooLargeError
from .heun_core import ConfluentHeunParams, EvalResult
from .spacetimes import KGBackground, KGMode, kg_delta, kg_horizons


class KGBranch(Enum):
    REGULAR = "regular"
    SECOND = "second"


@dataclass(frozen=True)
class KGRadialCoeffs:
    """friction = Delta'/Delta and potential = (r^4 omega^2 - lam Delta)/Delta^2,
    arranged so the ODE reads F'' + friction F' + potential F = 0."""

    friction: float
    potential: float


@dataclass(frozen=True)
class KGClosedSpec:
    """One closed-form branch: mapped Heun parameters, prefactor exponents,
    and z(u) = -u/(r1-r2)."""

    branch: KGBranch
    params: ConfluentHeunParams
    pow_near: complex          # exponent of u
    pow_far: complex           # exponent of (u + r1 - r2)
    omega: float
    width: float               # r1 - r2

    @property
    def mu_plus_nu(self) -> complex:
        acc = heun_core.accessory_from_params(self.params)
        return acc.mu + acc.nu


def kg_radial_coeffs(bg: KGBackground, mode: KGMode, r: float) -> KGRadialCoeffs:
    delta = kg_delta(bg, r)
    if delta == 0.0:
        raise OnHorizonError(f"r = {r} is a horizon radius")
    return KGRadialCoeffs(friction=(2*r - 2*bg.M)/delta,
                          potential=(r**4*mode.omega**2 - mode.lam*delta)/delta**2)


def kg_closed_spec(bg: KGBackground, mode: KGMode, branch: KGBranch) -> KGClosedSpec:
    """Transcription table for both radial branches."""
    r1, r2 = kg_horizons(bg)
    b = r1 - r2
    w, lam = mode.omega, mode.lam
    alpha = 2j*w*b
    beta = 2j*r1**2*w/b
    gamma = 2j*r2**2*w/b
    delta = (-2*r1**2 + 2*r2**2)*w**2
    eta = (2*r1**4*w**2 - 4*r1**3*w**2*r2 - lam*r1**2 + 2*r1*r2*lam - lam*r2**2)/b**2
    if branch is KGBranch.REGULAR:
        pow_near = 1j*r1**2*w/b
    else:
        beta = -beta
        pow_near = -1j*r1**2*w/b
    return KGClosedSpec(branch, ConfluentHeunParams(alpha, beta, gamma, delta, eta),
                        pow_near=pow_near, pow_far=1j*r2**2*w/b, omega=w, width=b)


def kg_closed_solution(bg: KGBackground, mode: KGMode, spec: KGClosedSpec,
                       u: float, tol: float = 1e-10) -> EvalResult:
    """Evaluate e^{-i omega u} u^{pow_near} (u+r1-r2)^{pow_far} H_C(z(u))
    and its u-derivative, for u > 0 (outside the outer horizon)."""
    return kg_closed_solution_many(bg, mode, spec, [u], tol)[0]


def kg_closed_solution_many(bg: KGBackground, mode: KGMode, spec: KGClosedSpec,
                            us, tol: float = 1e-10) -> list[EvalResult]:
    us = [float(u) for u in us]
    for u in us:
        if u <= 0:
            raise OutOfDomainError(f"exterior solution requires u > 0, got {u}")
    b = spec.width
    heun = heun_core.heun_eval_many(spec.params, [-u/b for u in us], tol)
    out = []
    for u, h in zip(us, heun):
        pref = cmath.exp(-1j*spec.omega*u) * u**spec.pow_near * (u + b)**spec.pow_far
        dlog = -1j*spec.omega + spec.pow_near/u + spec.pow_far/(u + b)
        out.append(EvalResult(pref*h.value,
                              pref*(dlog*h.value + h.derivative*(-1/b)),
                              abs(pref)*h.err_estimate))
    return out


def kg_residual(bg: KGBackground, mode: KGMode, solution, u: float,
                h: float | None = None) -> float:
    """Normalized residual of F'' + friction F' + potential F at u > 0,
    with F'' from central differences of the analytic first derivative
    supplied by ``solution`` (u -> EvalResult)."""
    if u <= 0:
        raise OutOfDomainError(f"residual requires u > 0, got {u}")
    if h is None:
        h = max(1e-6, 1e-4*u)
    if h > u/10:
        raise StepTooLargeError(f"h = {h} exceeds u/10 = {u/10}")
    d = {s: solution(u + s*h) for s in (-2, -1, 0, 1, 2)}
    d2 = (-d[2].derivative + 8*d[1].derivative
          - 8*d[-1].derivative + d[-2].derivative)/(12*h)
    r1, _ = kg_horizons(bg)
    co = kg_radial_coeffs(bg, mode, u + r1)
    num = abs(d2 + co.friction*d[0].derivative + co.potential*d[0].value)
    den = abs(d2) + abs(co.friction*d[0].derivative) + abs(co.potential*d[0].value)
    return num/den


def kg_wronskian_scaled(bg: KGBackground, mode: KGMode, u: float,
                        tol: float = 1e-11) -> complex:
    """W(u) * Delta(u + r1): friction = Delta'/Delta makes W proportional to
    1/Delta, so the product is position-independent for exact solutions."""
    r1, _ = kg_horizons(bg)
    reg = kg_closed_solution(bg, mode, kg_closed_spec(bg, mode, KGBranch.REGULAR), u, tol)
    sec = kg_closed_solution(bg, mode, kg_closed_spec(bg, mode, KGBranch.SECOND), u, tol)
    w = reg.value*sec.derivative - reg.derivative*sec.value
    return w*kg_delta(bg, u + r1)


def perturbed_kg_spec(spec: KGClosedSpec, eta_factor: float = 1.01) -> KGClosedSpec:
    """Copy with the Heun eta argument scaled; residual negative control."""
    p = spec.params
    return replace(spec, params=ConfluentHeunParams(
        p.alpha, p.beta, p.gamma, p.delta, p.eta*eta_factor))
