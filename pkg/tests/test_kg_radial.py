"""Tests for the Klein-Gordon radial solutions."""

import numpy as np
import pytest

from heunrad.errors import OnHorizonError, OutOfDomainError, StepTooLargeError
from heunrad.heun_core import SingularPointLabel, indicial_exponents
from heunrad.kg_radial import (
    KGBranch,
    kg_closed_solution,
    kg_closed_solution_many,
    kg_closed_spec,
    kg_radial_coeffs,
    kg_residual,
    kg_wronskian_scaled,
    perturbed_kg_spec,
)
from heunrad.spacetimes import KGBackground, KGMode, kg_horizons

BG = KGBackground(M=5.0, a=0.1)
MODE = KGMode(omega=0.3, n=0, lam=2.0)


class TestCoeffs:
    def test_zero_mode(self):
        co = kg_radial_coeffs(BG, KGMode(omega=0.0, n=0, lam=0.0), 12.0)
        assert co.potential == 0.0

    def test_direct_values(self):
        co = kg_radial_coeffs(BG, MODE, 10.0)
        assert co.friction == pytest.approx(10.0/24.75, rel=1e-13)
        assert co.potential == pytest.approx((1e4*0.09 - 24.75*2.0)/24.75**2, rel=1e-13)

    def test_friction_residue_at_horizon(self):
        r1, r2 = kg_horizons(BG)
        for r0 in (r1, r2):
            eps = 1e-7
            co = kg_radial_coeffs(BG, MODE, r0 + eps)
            assert co.friction*eps == pytest.approx(1.0, rel=1e-5)

    def test_on_horizon(self):
        with pytest.raises(OnHorizonError):
            kg_radial_coeffs(BG, MODE, 5.5)


class TestClosedSolutions:
    def test_modulus_at_horizon(self):
        spec = kg_closed_spec(BG, MODE, KGBranch.REGULAR)
        v = kg_closed_solution(BG, MODE, spec, 1e-6, tol=1e-12)
        assert abs(v.value) == pytest.approx(1.0, abs=1e-5)

    def test_zero_mode_constant(self):
        mode0 = KGMode(omega=0.0, n=0, lam=0.0)
        spec = kg_closed_spec(BG, mode0, KGBranch.REGULAR)
        p = spec.params
        assert p.alpha == 0 and p.beta == 0 and p.gamma == 0
        assert p.delta == 0 and p.eta == 0
        for u in (0.5, 3.0, 20.0):
            v = kg_closed_solution(BG, mode0, spec, u, tol=1e-12)
            assert v.value == pytest.approx(1.0, abs=1e-12)

    def test_eta_reduces_to_minus_lam_at_zero_frequency(self):
        mode = KGMode(omega=0.0, n=0, lam=3.5)
        spec = kg_closed_spec(BG, mode, KGBranch.REGULAR)
        assert spec.params.eta == pytest.approx(-3.5, rel=1e-13)

    @pytest.mark.parametrize("branch", list(KGBranch))
    def test_residuals(self, branch):
        spec = kg_closed_spec(BG, MODE, branch)
        f = lambda u: kg_closed_solution(BG, MODE, spec, u, tol=1e-12)
        for u in (0.5, 3.0, 20.0):
            assert kg_residual(BG, MODE, f, u) < 1e-8

    def test_corrupted_eta_negative_control(self):
        bad = perturbed_kg_spec(kg_closed_spec(BG, MODE, KGBranch.REGULAR), 1.01)
        f = lambda u: kg_closed_solution(BG, MODE, bad, u, tol=1e-12)
        assert kg_residual(BG, MODE, f, 3.0) > 1e-3

    def test_branch_relation(self):
        reg = kg_closed_spec(BG, MODE, KGBranch.REGULAR)
        sec = kg_closed_spec(BG, MODE, KGBranch.SECOND)
        r1, r2 = kg_horizons(BG)
        expected = 1j*r1**2*MODE.omega/(r1 - r2)
        assert reg.pow_near == pytest.approx(expected, rel=1e-13)
        assert sec.pow_near == pytest.approx(-expected, rel=1e-13)
        root = indicial_exponents(reg.params, SingularPointLabel.ZERO).second
        assert sec.pow_near - reg.pow_near == pytest.approx(root, rel=1e-13)

    def test_extremal_background_supported(self):
        bg = KGBackground(M=2.0, a=1.0)       # inner horizon at r2 = 0
        spec = kg_closed_spec(bg, MODE, KGBranch.REGULAR)
        f = lambda u: kg_closed_solution(bg, MODE, spec, u, tol=1e-12)
        assert kg_residual(bg, MODE, f, 2.0) < 1e-8

    def test_large_u_wave_falloff(self):
        # at large r the equation reduces to F'' + (2/r)F' + omega^2 F = 0,
        # so both branches decay like 1/u with unit-modulus phase factors:
        # two waves of different phase, identical modulus
        slopes = {}
        for branch in KGBranch:
            spec = kg_closed_spec(BG, MODE, branch)
            us = np.linspace(800.0, 1600.0, 12)
            vals = kg_closed_solution_many(BG, MODE, spec, us, tol=1e-11)
            slope = np.polyfit(np.log(us), np.log([abs(v.value) for v in vals]), 1)[0]
            assert slope == pytest.approx(-1.0, abs=0.01)
            slopes[branch] = slope
        reg = kg_closed_spec(BG, MODE, KGBranch.REGULAR)
        sec = kg_closed_spec(BG, MODE, KGBranch.SECOND)
        for u in (100.0, 400.0, 1000.0):
            a = kg_closed_solution(BG, MODE, reg, u, tol=1e-11).value
            b = kg_closed_solution(BG, MODE, sec, u, tol=1e-11).value
            assert abs(a)/abs(b) == pytest.approx(1.0, abs=1e-9)
            assert abs(np.angle(a/b)) > 1e-3    # same modulus, different phase

    def test_domain_and_step_errors(self):
        spec = kg_closed_spec(BG, MODE, KGBranch.REGULAR)
        with pytest.raises(OutOfDomainError):
            kg_closed_solution(BG, MODE, spec, -0.5)
        f = lambda u: kg_closed_solution(BG, MODE, spec, u, tol=1e-12)
        with pytest.raises(StepTooLargeError):
            kg_residual(BG, MODE, f, 1.0, h=0.5)


class TestWronskian:
    def test_scaled_constancy(self):
        us = np.linspace(0.5*BG.M, 10*BG.M, 8)
        w = np.array([kg_wronskian_scaled(BG, MODE, float(u)) for u in us])
        assert np.abs(w - w.mean()).max() < 1e-7*abs(w.mean())
        assert abs(w.mean()) > 1e-6
