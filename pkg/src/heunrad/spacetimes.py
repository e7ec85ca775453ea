"""Background geometries and their derived scalar functions.

Two black-hole backgrounds are supported, both interpolating between the
Schwarzschild and Bertotti-Robinson geometries:

  * the twisted background of the Dirac problem, with mass M, twisting
    parameter p of the external electromagnetic field, and interpolation
    parameter a; its area function is

      r^2 f(r) = (1/2) r (r-2M) [p(1+a^2)+a^2-1] + 2 M a r + M^2 [p(1+a^2)-2a]

    and H^2 = (r^2 - 2Mr) / (r^2 f(r)) vanishes on the horizon r = 2M;

  * the charged-coupling background of the Klein-Gordon problem, with
    Delta = r^2 - 2Mr + M^2(1-a^2) and horizons r_1 = M(1+a), r_2 = M(1-a).

Geometric units; all inputs are raw positive reals (no normalization by M
is imposed).  Pure value types and pure functions throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DivisionBySingularAreaError


@dataclass(frozen=True)
class DiracBackground:
    """Mass M > 0, twisting parameter p, interpolation parameter a in [0,1].

    Construction checks that the area function r^2 f(r) stays positive on
    r in [2M, 102M], the horizon-exterior range the solution modules use.
    """

    M: float
    p: float
    a: float

    def __post_init__(self):
        if not (self.M > 0):
            raise ValueError(f"M must be positive, got {self.M}")
        if not (0.0 <= self.a <= 1.0):
            raise ValueError(f"a must lie in [0, 1], got {self.a}")
        lo, hi = 2*self.M, 102*self.M
        candidates = [lo, hi]
        q = self.p*(1 + self.a**2) + self.a**2 - 1
        if q != 0:
            vertex = self.M - 2*self.M*self.a/q
            if lo < vertex < hi:
                candidates.append(vertex)
        if min(rsq_f(self, r) for r in candidates) <= 0:
            raise ValueError(
                f"area function r^2 f(r) is not positive on [{lo}, {hi}] "
                f"for (M, p, a) = ({self.M}, {self.p}, {self.a})")


@dataclass(frozen=True)
class DiracMode:
    """Mode frequency-like parameter k and angular eigenvalue lam; only
    lam^2 enters the radial system."""

    k: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and math.isfinite(self.lam)):
            raise ValueError("mode parameters must be finite")


@dataclass(frozen=True)
class KGBackground:
    """Mass M > 0 and external parameter a in (0, 1].

    a = 0 (the Bertotti-Robinson limit, degenerate horizons) is rejected:
    the radial solution map divides by r_1 - r_2 = 2Ma.  At a = 1 the
    inner horizon degenerates to r_2 = 0, which is supported.
    """

    M: float
    a: float

    def __post_init__(self):
        if not (self.M > 0):
            raise ValueError(f"M must be positive, got {self.M}")
        if not (0.0 < self.a <= 1.0):
            raise ValueError(f"a must lie in (0, 1], got {self.a}")


@dataclass(frozen=True)
class KGMode:
    """Frequency omega, integer azimuthal number n, separation constant lam.
    For the Legendre branch lam = l(l+1) with integer l >= |n|."""

    omega: float
    n: int
    lam: float

    def __post_init__(self):
        if self.n != int(self.n):
            raise ValueError(f"n must be an integer, got {self.n}")
        if not (math.isfinite(self.omega) and math.isfinite(self.lam)):
            raise ValueError("mode parameters must be finite")


def rsq_f(bg: DiracBackground, r: float) -> float:
    """Area function r^2 f(r) of the twisted background."""
    M, p, a = bg.M, bg.p, bg.a
    return (0.5*r*(r - 2*M)*(p*(1 + a**2) + a**2 - 1)
            + 2*M*a*r + M**2*(p*(1 + a**2) - 2*a))


def h_squared(bg: DiracBackground, r: float) -> float:
    """H^2 = (r^2 - 2Mr)/(r^2 f(r)): negative inside the horizon, zero at
    r = 2M, positive outside (wherever the area function is positive)."""
    area = rsq_f(bg, r)
    if area == 0.0:
        raise DivisionBySingularAreaError(f"r^2 f(r) vanishes at r = {r}")
    return (r**2 - 2*bg.M*r)/area


def kg_delta(bg: KGBackground, r: float) -> float:
    """Horizon function Delta = r^2 - 2Mr + M^2(1 - a^2)."""
    return r**2 - 2*bg.M*r + bg.M**2*(1 - bg.a**2)


def kg_horizons(bg: KGBackground) -> tuple[float, float]:
    """Outer and inner horizon radii (M(1+a), M(1-a)); Delta factorizes as
    (r - r1)(r - r2)."""
    return bg.M*(1 + bg.a), bg.M*(1 - bg.a)
