"""Angular sector shared by both separations: the associated Legendre
equation in theta,

    S'' + lam S + (S' sin(theta) cos(theta) - n^2 S) / sin^2(theta) = 0,

solved by S(theta) = P_l^n(cos theta) with lam = l(l+1).

P_l^n uses the standard stable upward recurrence in l with the
Condon-Shortley phase; only integer degree and order are supported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OrderExceedsDegreeError, TooCloseToPoleError


@dataclass(frozen=True)
class AngularMode:
    """Degree l >= 0, order |n| <= l, and eigenvalue lam = l(l+1).
    Omit lam to have it filled in; an explicit value must match exactly."""

    l: int
    n: int
    lam: float | None = None

    def __post_init__(self):
        if self.l < 0 or abs(self.n) > self.l:
            raise ValueError(f"need 0 <= |n| <= l, got l={self.l}, n={self.n}")
        expected = float(self.l*(self.l + 1))
        if self.lam is None:
            object.__setattr__(self, "lam", expected)
        elif self.lam != expected:
            raise ValueError(f"lam must equal l(l+1) = {expected}, got {self.lam}")


def assoc_legendre(l: int, n: int, x: float) -> float:
    """P_l^n(x) for integer 0 <= |n| <= l and |x| <= 1 (Condon-Shortley)."""
    if abs(n) > l or l < 0:
        raise OrderExceedsDegreeError(f"|n| = {abs(n)} exceeds degree l = {l}")
    if abs(x) > 1:
        raise ValueError(f"|x| must not exceed 1, got {x}")
    m = abs(n)
    # P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}, then upward in l
    pmm = 1.0
    if m > 0:
        s = math.sqrt((1.0 - x)*(1.0 + x))
        fact = 1.0
        for _ in range(m):
            pmm *= -fact*s
            fact += 2.0
    if l == m:
        plm = pmm
    else:
        pm1 = x*(2*m + 1)*pmm        # P_{m+1}^m
        if l == m + 1:
            plm = pm1
        else:
            for ll in range(m + 2, l + 1):
                pmm, pm1 = pm1, (x*(2*ll - 1)*pm1 - (ll + m - 1)*pmm)/(ll - m)
            plm = pm1
    if n < 0:
        plm *= (-1)**m * math.factorial(l - m)/math.factorial(l + m)
    return plm


def assoc_legendre_theta_derivative(l: int, n: int, theta: float) -> float:
    """d/dtheta of S(theta) = P_l^n(cos theta), from the degree-lowering
    identity (1-x^2) dP_l^n/dx = (l+n) P_{l-1}^n - l x P_l^n."""
    x = math.cos(theta)
    s = math.sin(theta)
    if s == 0.0:
        raise TooCloseToPoleError("derivative undefined at the poles")
    m = abs(n)
    lower = assoc_legendre(l - 1, m, x) if l - 1 >= m else 0.0
    dpdx = ((l + m)*lower - l*x*assoc_legendre(l, m, x))/(s*s)
    d = -s*dpdx
    if n < 0:
        d *= (-1)**m * math.factorial(l - m)/math.factorial(l + m)
    return d


def angular_residual(mode: AngularMode, theta: float, h: float = 1e-5,
                     eigenvalue: float | None = None) -> float:
    """Normalized residual of the angular equation at theta in (0, pi),
    bounded away from the poles by 10h.  S'' comes from a central
    difference of the analytic theta-derivative; ``eigenvalue`` overrides
    lam for sensitivity (negative-control) checks."""
    if h <= 0:
        raise ValueError("h must be positive")
    if theta < 10*h or theta > math.pi - 10*h:
        raise TooCloseToPoleError(
            f"theta = {theta} is within 10h = {10*h} of a pole")
    lam = mode.lam if eigenvalue is None else eigenvalue
    s_val = assoc_legendre(mode.l, mode.n, math.cos(theta))
    d1 = assoc_legendre_theta_derivative(mode.l, mode.n, theta)
    ds = {s: assoc_legendre_theta_derivative(mode.l, mode.n, theta + s*h)
          for s in (-2, -1, 1, 2)}
    d2 = (-ds[2] + 8*ds[1] - 8*ds[-1] + ds[-2])/(12*h)
    st, ct = math.sin(theta), math.cos(theta)
    angular_term = (d1*st*ct - mode.n**2*s_val)/st**2
    num = abs(d2 + lam*s_val + angular_term)
    den = abs(d2) + abs(lam*s_val) + abs(angular_term)
    if den == 0.0:
        return 0.0
    return num/den
