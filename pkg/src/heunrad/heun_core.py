"""Numerical evaluation of the confluent Heun function H_C(alpha,beta,gamma,delta,eta,z).

The function is the exponent-0 Frobenius solution at z=0, normalized to
H_C(...,0) = 1, of

    H'' + (alpha + (gamma+1)/(z-1) + (beta+1)/z) H' + (mu/z + nu/(z-1)) H = 0

where the accessory parameters (mu, nu) are related to (delta, eta) by

    delta = mu + nu - alpha (beta + gamma + 2)/2
    eta   = alpha (beta + 1)/2 - mu - (beta + gamma + beta gamma)/2

(This is the argument convention of Maple's HeunC; it is the only
convention supported here.)

Evaluation strategy:
  * |z| <= 0.5 : truncated power series sum c_k z^k.  c_0 = 1,
    c_1 = -mu/(beta+1), and higher coefficients from the three-term
    recurrence obtained by inserting the series into the ODE multiplied
    by z(z-1):

      (k+1)(k+1+beta) c_{k+1} = [k(k + beta+gamma+1-alpha) - mu] c_k
                                + [alpha(k-1) + mu + nu] c_{k-1}

  * elsewhere on the real axis (z < -0.5 or 0.5 < z < 1): analytic
    continuation of the ODE as a first-order complex system with an
    adaptive embedded-pair integrator (DOP853), seeded by series values
    at z0 = +/-0.25 (sign matching the target).  The path never crosses
    z = 0 or z = 1; the negative real axis contains no singularities.
    Crossing z = 1 is not supported.  For large parameters the series can
    be cancellation-limited inside the disk (intermediate terms peak far
    above the sum); such points are detected through the reported error
    and rerouted through continuation from a smaller, well-conditioned
    seed point.

The module also exposes the accessory-parameter algebra, indicial data
at the two regular singular points, the generalized-spheroidal form used
for asymptotics at the irregular point at infinity, the leading Thome
behavior there, and the degree-N polynomial-solution condition.

All functions are pure; the module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    BranchUnavailableError,
    DidNotConvergeError,
    NotIrregularError,
    SingularPointError,
)

SERIES_RADIUS = 0.5      # series used for |z| <= 0.5 (unit disk margin)
SERIES_SEED = 0.25       # continuation starts from +/- this point
MAX_SERIES_TERMS = 2000
_EPS = np.finfo(float).eps


def _as_finite_complex(name, value):
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class ConfluentHeunParams:
    """The five parameters of the standard confluent Heun form."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    eta: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "eta"):
            object.__setattr__(self, name, _as_finite_complex(name, getattr(self, name)))


@dataclass(frozen=True)
class AccessoryPair:
    """Accessory parameters (mu, nu) of the ODE written in residue form."""

    mu: complex
    nu: complex

    def __post_init__(self):
        object.__setattr__(self, "mu", _as_finite_complex("mu", self.mu))
        object.__setattr__(self, "nu", _as_finite_complex("nu", self.nu))


@dataclass(frozen=True)
class SpheroidalForm:
    """Parameters (B1, B2, B3, eta, omega) of the generalized spheroidal wave
    equation

        z(z-1) U'' + (B1 + B2 z) U' + [B3 - 2 eta omega (z-1)
                                       + omega^2 z(z-1)] U = 0,

    the equivalent form of the confluent Heun equation used for large-z
    asymptotics.  Requires omega != 0."""

    b1: complex
    b2: complex
    b3: complex
    eta: complex
    omega: complex

    def __post_init__(self):
        for name in ("b1", "b2", "b3", "eta", "omega"):
            object.__setattr__(self, name, _as_finite_complex(name, getattr(self, name)))
        if self.omega == 0:
            raise ValueError("spheroidal form requires omega != 0")


@dataclass(frozen=True)
class EvalResult:
    """A function value, its first derivative, and an estimated absolute
    error of the value."""

    value: complex
    derivative: complex
    err_estimate: float

    def __post_init__(self):
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be nonnegative")


class SingularPointLabel(Enum):
    ZERO = "zero"
    ONE = "one"


class ThomeBranch(Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class IndicialExponents:
    """Indicial roots at a regular singular point; ``degenerate`` marks a
    double root (the second local solution then carries a logarithm)."""

    first: complex
    second: complex
    degenerate: bool

    def __iter__(self):
        return iter((self.first, self.second))


def accessory_from_params(p: ConfluentHeunParams) -> AccessoryPair:
    """Invert the (delta, eta) relations for the accessory pair (mu, nu)."""
    mu = p.alpha*(p.beta + 1)/2 - p.eta - (p.beta + p.gamma + p.beta*p.gamma)/2
    nu = p.delta + p.alpha*(p.beta + p.gamma + 2)/2 - mu
    return AccessoryPair(mu, nu)


def params_from_accessory(alpha, beta, gamma, acc: AccessoryPair) -> ConfluentHeunParams:
    """Assemble full parameters from (alpha, beta, gamma) and (mu, nu)."""
    alpha = _as_finite_complex("alpha", alpha)
    beta = _as_finite_complex("beta", beta)
    gamma = _as_finite_complex("gamma", gamma)
    delta = acc.mu + acc.nu - alpha*(beta + gamma + 2)/2
    eta = alpha*(beta + 1)/2 - acc.mu - (beta + gamma + beta*gamma)/2
    return ConfluentHeunParams(alpha, beta, gamma, delta, eta)


def _check_regular_branch(beta: complex):
    # recurrence denominator (k)(k+beta) must not vanish for k >= 1
    if abs(beta.imag) < 1e-13:
        b = beta.real
        if b <= -0.5 and abs(b - round(b)) < 1e-13*max(1.0, abs(b)):
            raise BranchUnavailableError(
                f"beta = {beta} is a negative integer; the exponent-0 "
                "Frobenius branch at z=0 is undefined")


def _series_eval(p: ConfluentHeunParams, z: float, tol: float):
    """Truncated series at z=0.  Returns (value, derivative, err_estimate).

    Stops when three consecutive terms fall below tol * |partial sum|.
    err_estimate combines the magnitude of the last retained term with the
    round-off floor set by the largest intermediate term: for large
    parameters the terms can peak orders of magnitude above the sum, and
    the cancellation cost must be reported (callers fall back to
    continuation from a smaller seed point when it exceeds the budget).
    """
    acc = accessory_from_params(p)
    mu, nu = acc.mu, acc.nu
    al, be, ga = p.alpha, p.beta, p.gamma
    c_prev = 0.0 + 0.0j    # c_{k-1}
    c_curr = 1.0 + 0.0j    # c_k, starting at k=0
    val = c_curr
    der = 0.0 + 0.0j
    zk = 1.0 + 0.0j        # z^k
    peak = 1.0
    consecutive_small = 0
    for k in range(MAX_SERIES_TERMS):
        c_next = ((k*(k + be + ga + 1 - al) - mu)*c_curr
                  + (al*(k - 1) + mu + nu)*c_prev) / ((k + 1)*(k + 1 + be))
        der += (k + 1)*c_next*zk
        zk *= z
        term = c_next*zk
        val += term
        peak = max(peak, abs(term))
        if abs(term) <= tol*max(1.0, abs(val)):
            consecutive_small += 1
            if consecutive_small >= 3:
                err = max(abs(term), 4*_EPS*peak)
                return val, der, err
        else:
            consecutive_small = 0
        c_prev, c_curr = c_curr, c_next
    raise DidNotConvergeError(
        f"series at z={z} did not reach tol={tol} within {MAX_SERIES_TERMS} terms")


def _ode_rhs(al, be, ga, mu, nu):
    def rhs(z, y):
        w, dw = y
        d2 = -(al + (ga + 1)/(z - 1) + (be + 1)/z)*dw - (mu/z + nu/(z - 1))*w
        return (dw, d2)
    return rhs


def _sweep(p: ConfluentHeunParams, z0, y0, targets, rtol):
    """One adaptive integration pass from z0 through the sorted targets."""
    acc = accessory_from_params(p)
    rhs = _ode_rhs(p.alpha, p.beta, p.gamma, acc.mu, acc.nu)
    sol = solve_ivp(rhs, (z0, targets[-1]), np.array(y0, dtype=complex),
                    method="DOP853", rtol=rtol, atol=1e-300, t_eval=targets)
    if not sol.success or sol.y.shape[1] != len(targets):
        raise DidNotConvergeError(
            f"continuation from z0={z0} to {targets[-1]} failed: {sol.message}")
    return sol.y[0], sol.y[1]


def _continued_eval(p: ConfluentHeunParams, zs, tol: float):
    """Continuation to the points zs (all on the same side, ordered by
    distance from the origin).  The seed point starts at +/-0.25 and moves
    inward until the seed series is well conditioned (large parameters can
    make the series cancellation-limited well inside the nominal disk).
    Error estimates come from comparing two integrations at different
    tolerances; retries with a tighter controller before giving up."""
    sign = 1.0 if zs[0] > 0 else -1.0
    z0 = sign*min(SERIES_SEED, 0.5*min(abs(z) for z in zs))
    while True:
        v0, d0, seed_err = _series_eval(p, z0, min(tol*1e-3, 1e-15))
        if seed_err <= min(tol*1e-1, 1e-13)*max(1.0, abs(v0)) or abs(z0) <= 1e-3:
            break
        z0 /= 2
    rtol_floor = 100*_EPS     # DOP853 clamps rtol there anyway
    rtol = max(min(tol/10, 1e-11), rtol_floor)
    for _ in range(3):
        vt, dt = _sweep(p, z0, (v0, d0), zs, rtol)
        vl, _ = _sweep(p, z0, (v0, d0), zs, min(rtol*100, 1e-8))
        # error scales about linearly with rtol, so the tight pass is ~100x
        # more accurate than the loose one; /50 keeps a 2x safety margin
        errs = np.maximum(np.abs(vt - vl)/50 + seed_err,
                          8*_EPS*np.maximum(1.0, np.abs(vt)))
        if np.all(errs <= tol*np.maximum(1.0, np.abs(vt))) or rtol <= rtol_floor:
            break
        rtol = max(rtol/100, rtol_floor)
    if not np.all(errs <= tol*np.maximum(1.0, np.abs(vt))):
        raise DidNotConvergeError(
            f"continuation error estimate {errs.max():.2e} exceeds budget at tol={tol}")
    return vt, dt, errs


def heun_eval_many(p: ConfluentHeunParams, zs, tol: float = 1e-10) -> list[EvalResult]:
    """Evaluate H_C and its derivative at many real points in one call.

    Points inside the series disk are summed directly; points beyond it are
    collected per side and handled by a single continuation sweep each.
    Results are returned in input order.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    _check_regular_branch(p.beta)
    zs = [float(z) for z in zs]
    for z in zs:
        if z >= 1.0:
            raise SingularPointError(
                f"z={z}: evaluation at or beyond the z=1 singular point is not supported")
    results: dict[int, EvalResult] = {}
    pos, neg = [], []
    for i, z in enumerate(zs):
        if abs(z) <= SERIES_RADIUS:
            v, d, e = _series_eval(p, z, tol)
            if e <= tol*max(1.0, abs(v)) or z == 0.0:
                results[i] = EvalResult(v, d, e)
                continue
            # cancellation-limited series: fall back to continuation
        if z > 0:
            pos.append(i)
        else:
            neg.append(i)
    for side in (pos, neg):
        if not side:
            continue
        side.sort(key=lambda i: abs(zs[i]))
        targets = [zs[i] for i in side]
        vt, dt, errs = _continued_eval(p, targets, tol)
        for j, i in enumerate(side):
            results[i] = EvalResult(vt[j], dt[j], float(errs[j]))
    return [results[i] for i in range(len(zs))]


def heun_eval(p: ConfluentHeunParams, z: float, tol: float = 1e-10,
              method: str = "auto") -> EvalResult:
    """Evaluate H_C(p, z) and dH_C/dz on the real axis, z < 1.

    ``method`` selects "auto" (series inside |z| <= 0.5, continuation
    outside), or forces "series" / "continuation" (the latter is meaningful
    for |z| <= 0.5 only as a consistency check against the series).
    On success err_estimate <= tol * max(1, |value|).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = float(z)
    if z == 1.0 or z > 1.0:
        raise SingularPointError(
            f"z={z}: evaluation at or beyond the z=1 singular point is not supported")
    _check_regular_branch(p.beta)
    if method == "auto":
        return heun_eval_many(p, [z], tol)[0]
    if method == "series":
        v, d, e = _series_eval(p, z, tol)
        return EvalResult(v, d, e)
    if method == "continuation":
        if z == 0.0:
            v, d, e = _series_eval(p, z, tol)
            return EvalResult(v, d, e)
        vt, dt, errs = _continued_eval(p, [z], tol)
        return EvalResult(vt[0], dt[0], float(errs[0]))
    raise ValueError(f"unknown method {method!r}")


def ode_residual(p: ConfluentHeunParams, z: float, value, d1, d2) -> complex:
    """Exact algebraic residual of the defining ODE at z for a candidate
    (value, first derivative, second derivative) triple."""
    if z == 0.0 or z == 1.0:
        raise SingularPointError(f"residual undefined at the singular point z={z}")
    acc = accessory_from_params(p)
    return (d2 + (p.alpha + (p.gamma + 1)/(z - 1) + (p.beta + 1)/z)*d1
            + (acc.mu/z + acc.nu/(z - 1))*value)


def indicial_exponents(p: ConfluentHeunParams,
                       point: SingularPointLabel) -> IndicialExponents:
    """Indicial roots (0, -beta) at z=0 or (0, -gamma) at z=1."""
    if point is SingularPointLabel.ZERO:
        second = -p.beta
    elif point is SingularPointLabel.ONE:
        second = -p.gamma
    else:
        raise ValueError(f"unknown singular point {point!r}")
    return IndicialExponents(0.0 + 0.0j, second, degenerate=(second == 0))


def to_spheroidal(p: ConfluentHeunParams) -> SpheroidalForm:
    """Map to the generalized spheroidal wave form: with the returned
    parameters, U(z) = exp(-i omega z) H_C(p, z) satisfies the spheroidal
    equation.  Requires alpha != 0 (otherwise no irregular-point scaling
    exists)."""
    if p.alpha == 0:
        raise NotIrregularError("alpha = 0: no spheroidal form exists")
    acc = accessory_from_params(p)
    omega = 0.5j*p.alpha
    b1 = -(p.beta + 1)
    b2 = p.beta + p.gamma + 2
    b3 = acc.nu + 1j*omega*(p.gamma + 1)
    eta = (1j*omega*b1 - b3 - acc.mu)/(2*omega)
    return SpheroidalForm(b1, b2, b3, eta, omega)


def from_spheroidal(s: SpheroidalForm) -> ConfluentHeunParams:
    """Inverse of :func:`to_spheroidal` (exact algebraic roundtrip)."""
    alpha = -2j*s.omega
    beta = -s.b1 - 1
    gamma = s.b1 + s.b2 - 1
    mu = 1j*s.omega*s.b1 - 2*s.eta*s.omega - s.b3
    nu = s.b3 - 1j*s.omega*(gamma + 1)
    return params_from_accessory(alpha, beta, gamma, AccessoryPair(mu, nu))


def thome_leading(s: SpheroidalForm, branch: ThomeBranch) -> tuple[complex, complex]:
    """Leading behavior U(z) ~ exp(rate*z) * z**power at the irregular point
    at infinity: rate = +/- i omega, power = -/+ i eta - B2/2.  Only the
    first term of the (nonconverging) asymptotic series is provided."""
    if branch is ThomeBranch.PLUS:
        return 1j*s.omega, -1j*s.eta - s.b2/2
    if branch is ThomeBranch.MINUS:
        return -1j*s.omega, 1j*s.eta - s.b2/2
    raise ValueError(f"unknown Thome branch {branch!r}")


def polynomial_condition(p: ConfluentHeunParams, n: int) -> bool:
    """True iff mu + nu + N*alpha = 0 within 1e-12*(|mu|+|nu|+N|alpha|+1),
    the necessary condition for a degree-N polynomial solution.  The
    companion vanishing-determinant condition is not evaluated."""
    if n < 0:
        raise ValueError("polynomial degree must be nonnegative")
    acc = accessory_from_params(p)
    lhs = acc.mu + acc.nu + n*p.alpha
    scale = abs(acc.mu) + abs(acc.nu) + n*abs(p.alpha) + 1.0
    return abs(lhs) <= 1e-12*scale


def heun_series_c1(p: ConfluentHeunParams) -> complex:
    """First series coefficient c_1 = -mu/(beta+1) (the derivative at z=0)."""
    _check_regular_branch(p.beta)
    acc = accessory_from_params(p)
    return -acc.mu/(p.beta + 1)
