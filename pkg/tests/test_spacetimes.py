"""Tests for the background geometries."""

import numpy as np
import pytest

from heunrad.errors import DivisionBySingularAreaError
from heunrad.spacetimes import (
    DiracBackground,
    DiracMode,
    KGBackground,
    KGMode,
    h_squared,
    kg_delta,
    kg_horizons,
    rsq_f,
)

BG = DiracBackground(M=5.0, p=10.0, a=0.1)


class TestDiracBackground:
    def test_validation(self):
        with pytest.raises(ValueError):
            DiracBackground(M=-1.0, p=10.0, a=0.1)
        with pytest.raises(ValueError):
            DiracBackground(M=5.0, p=10.0, a=1.5)
        with pytest.raises(ValueError):
            # strongly negative twisting makes the area function negative
            DiracBackground(M=5.0, p=-10.0, a=0.1)

    def test_area_at_horizon(self):
        # first term vanishes at r=2M, leaving M^2 (a^2 p + 2a + p)
        assert rsq_f(BG, 10.0) == pytest.approx(257.5, rel=1e-14)

    def test_area_at_origin(self):
        assert rsq_f(BG, 0.0) == pytest.approx(247.5, rel=1e-14)

    def test_schwarzschild_like_collapse(self):
        bg = DiracBackground(M=3.0, p=1.0, a=1.0)
        for r in (1.0, 5.0, 17.3):
            assert rsq_f(bg, r) == pytest.approx(r**2, rel=1e-13)

    def test_horizon_and_origin_identities_random(self):
        rng = np.random.default_rng(21)
        for _ in range(50):
            M = rng.uniform(0.5, 10)
            p = rng.uniform(1, 20)
            a = rng.uniform(0, 1)
            bg = DiracBackground(M, p, a)
            assert rsq_f(bg, 2*M) == pytest.approx(M**2*(a**2*p + 2*a + p), rel=1e-12)
            assert rsq_f(bg, 0.0) == pytest.approx(M**2*(a**2*p - 2*a + p), rel=1e-12)


class TestHSquared:
    def test_zero_on_horizon(self):
        assert h_squared(BG, 10.0) == 0.0

    def test_value_outside(self):
        # independent recomputation, term by term:
        # rsq_f(15) = 0.5*15*5*9.11 + 2*5*0.1*15 + 25*9.9 = 604.125
        area = 0.5*15*5*((10 + 1)*0.01 + 10 - 1) + 2*5*0.1*15 + 25*(10*1.01 - 0.2)
        assert area == pytest.approx(604.125, rel=1e-14)
        expected = (225.0 - 150.0)/area
        assert h_squared(BG, 15.0) == pytest.approx(expected, rel=1e-13)
        assert h_squared(BG, 15.0) == pytest.approx(0.124146492861576, rel=1e-12)

    def test_negative_inside_horizon(self):
        for r in np.linspace(0.5, 9.5, 19):
            assert h_squared(BG, float(r)) < 0

    def test_singular_area_raises(self):
        # p=0, a=1, M=1 collapses the area function to 2r - 2, which
        # vanishes exactly (in floats too) at r = 1, inside the horizon
        bg = DiracBackground(M=1.0, p=0.0, a=1.0)
        assert rsq_f(bg, 1.0) == 0.0
        with pytest.raises(DivisionBySingularAreaError):
            h_squared(bg, 1.0)


class TestKG:
    def test_horizon_roots(self):
        bg = KGBackground(M=5.0, a=0.1)
        assert kg_horizons(bg) == (5.5, 4.5)
        assert kg_delta(bg, 5.5) == pytest.approx(0.0, abs=1e-12)
        assert kg_delta(bg, 4.5) == pytest.approx(0.0, abs=1e-12)

    def test_extremal(self):
        bg = KGBackground(M=1.0, a=1.0)
        assert kg_horizons(bg) == (2.0, 0.0)
        for r in (0.7, 2.0, 3.1):
            assert kg_delta(bg, r) == pytest.approx(r*(r - 2), rel=1e-13, abs=1e-13)

    def test_factorization_random(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            bg = KGBackground(M=rng.uniform(0.5, 10), a=rng.uniform(0.05, 1.0))
            r1, r2 = kg_horizons(bg)
            r = rng.uniform(0, 4*bg.M)
            lhs = kg_delta(bg, r)
            rhs = (r - r1)*(r - r2)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12*bg.M**2)

    def test_validation(self):
        with pytest.raises(ValueError):
            KGBackground(M=1.0, a=0.0)      # degenerate horizons rejected
        with pytest.raises(ValueError):
            KGBackground(M=0.0, a=0.5)
        with pytest.raises(ValueError):
            KGMode(omega=0.3, n=0.5, lam=2.0)

    def test_modes(self):
        assert KGMode(omega=0.3, n=2, lam=6.0).n == 2
        assert DiracMode(k=0.2, lam=0.7).lam == 0.7
