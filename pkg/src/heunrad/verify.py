"""Verification suites: every check the package promises, runnable in one
call and reported with measured numbers.

Each criterion function returns a CheckResult; ``run_all`` executes the
standard list.  Two sub-checks fail by construction of the quantities they
measure and are kept as stated rather than loosened:

  * the identity check asserts mu+nu = 0 for all six closed-solution
    parameter maps, but the identity genuinely holds only for the
    horizon-regular Dirac map (for the second branches and the other
    expansion points mu+nu equals nonzero combinations such as -alpha*beta;
    the measured values are printed);
  * the decaying-branch slope check fits log|T| vs log u on u in [50,100],
    where the 1/u corrections to the limiting u^-1 law still contribute
    about 8 percent; the fitted slope is -0.92 there and approaches -1.00
    only on later windows (also printed).
"""

from __future__ import annotations

import itertools
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import curves, dirac_radial, heun_core, kg_radial
from .angular import AngularMode, angular_residual, assoc_legendre, assoc_legendre_theta_derivative
from .curves import FIG1_CONFIG, FIG2_CONFIG, OutputFormat, emit, sample_curve
from .dirac_radial import (
    Branch,
    ExpansionPoint,
    closed_solution,
    closed_solution_many,
    closed_solution_spec,
    fitted_phase_rate,
    integrate_system,
    spinor_pair_from_t1,
    wronskian_scaled,
)
from .heun_core import ConfluentHeunParams, heun_eval, heun_series_c1, ode_residual
from .kg_radial import (
    KGBranch,
    kg_closed_solution_many,
    kg_closed_spec,
    kg_wronskian_scaled,
)
from .spacetimes import DiracBackground, DiracMode, KGBackground, KGMode, kg_delta, kg_horizons

FIG_BG = DiracBackground(M=5.0, p=10.0, a=0.1)
FIG_MODE = DiracMode(k=0.2, lam=0.7)
KG_EXAMPLE_BG = KGBackground(M=5.0, a=0.1)
KG_EXAMPLE_MODE = KGMode(omega=0.3, n=0, lam=2.0)
SEED = 20260809


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: list[str]

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}"


def _random_heun_params(rng) -> ConfluentHeunParams:
    while True:
        vals = rng.uniform(-5, 5, 5) + 1j*rng.uniform(-5, 5, 5)
        beta = vals[1]
        # keep beta away from negative integers so the regular branch exists
        if abs(beta.imag) > 0.05 or beta.real > -0.5 or abs(beta.real - round(beta.real)) > 0.05:
            return ConfluentHeunParams(*vals)


def check_heun_suite(n_sets: int = 100) -> CheckResult:
    """Criterion 1: ODE residual, normalization, and derivative at 0."""
    rng = np.random.default_rng(SEED)
    zs = (-0.9, -0.55, -0.3, 0.2, 0.45)
    h = 1e-5
    worst_res = 0.0
    worst_der = 0.0
    norm_exact = True
    for _ in range(n_sets):
        p = _random_heun_params(rng)
        at_zero = heun_eval(p, 0.0, tol=1e-13)
        norm_exact &= (at_zero.value == 1.0)
        c1 = heun_series_c1(p)
        worst_der = max(worst_der, abs(at_zero.derivative - c1)/max(1.0, abs(c1)))
        for z in zs:
            probe = heun_core.heun_eval_many(p, [z - h, z, z + h], tol=1e-12)
            d2 = (probe[2].derivative - probe[0].derivative)/(2*h)
            res = ode_residual(p, z, probe[1].value, probe[1].derivative, d2)
            scale = abs(d2) + abs(probe[1].derivative) + abs(probe[1].value)
            worst_res = max(worst_res, abs(res)/scale)
    passed = norm_exact and worst_res < 1e-6 and worst_der < 1e-12
    return CheckResult(
        "1 confluent Heun residual suite", passed,
        [f"normalization H_C(...,0)=1 exact: {norm_exact}",
         f"max normalized ODE residual {worst_res:.3e} (limit 1e-06)",
         f"max derivative-at-0 error {worst_der:.3e} (limit 1e-12)"])


def _perturbed_dirac(rng):
    f = lambda: rng.uniform(0.8, 1.2)
    bg = DiracBackground(FIG_BG.M*f(), FIG_BG.p*f(), min(1.0, FIG_BG.a*f()))
    mode = DiracMode(FIG_MODE.k*f(), FIG_MODE.lam*f())
    return bg, mode


def _batched_dirac_residual(bg, mode, spec, x, h, tol=1e-12):
    """Residual via one batched evaluation of the five stencil points."""
    offsets = (-2, -1, 0, 1, 2)
    res = closed_solution_many(bg, mode, spec, [x + s*h for s in offsets], tol)
    d2 = (-res[4].derivative + 8*res[3].derivative
          - 8*res[1].derivative + res[0].derivative)/(12*h)
    u = x if spec.expansion_point is ExpansionPoint.HORIZON else x - 2*bg.M
    co = dirac_radial.second_order_coeffs(bg, mode, u)
    num = abs(co.A*d2 + co.B*res[2].derivative + co.Csum*res[2].value)
    den = abs(co.A*d2) + abs(co.B*res[2].derivative) + abs(co.Csum*res[2].value)
    return num/den


def check_dirac_closed_residuals() -> CheckResult:
    """Criterion 2: all four closed-form branches solve their second-order
    equations at residual < 1e-8, for the reference parameters and ten
    +/-20 percent perturbations."""
    rng = np.random.default_rng(SEED + 1)
    cases = [(FIG_BG, FIG_MODE)] + [_perturbed_dirac(rng) for _ in range(10)]
    u_grid = (0.5, 1.0, 2.0, 5.0, 12.0, 25.0, 50.0)
    worst_h = 0.0
    worst_o = 0.0
    for bg, mode in cases:
        for branch in (Branch.REGULAR, Branch.SECOND):
            spec_h = closed_solution_spec(bg, mode, ExpansionPoint.HORIZON, branch)
            for u in u_grid:
                h = max(1e-6, 1e-4*u)
                worst_h = max(worst_h, _batched_dirac_residual(bg, mode, spec_h, u, h))
            spec_o = closed_solution_spec(bg, mode, ExpansionPoint.ORIGIN, branch)
            for frac in (0.5/10, 2.0/10, 5.0/10, 8.0/10, 9.5/10):
                r = frac*2*bg.M
                h = max(1e-6, 1e-4*min(r, 2*bg.M - r))
                worst_o = max(worst_o, _batched_dirac_residual(bg, mode, spec_o, r, h))
    passed = worst_h < 1e-8 and worst_o < 1e-8
    return CheckResult(
        "2 Dirac closed-form residual suite", passed,
        [f"horizon branches: max residual {worst_h:.3e} (limit 1e-08) on u in [0.5, 50]",
         f"origin branches: max residual {worst_o:.3e} (limit 1e-08) on r in [0.5M/5, 9.5M/5]"])


def check_integration_oracle() -> CheckResult:
    """Criterion 3: direct integration of the first-order system matches the
    horizon-regular closed form to 1e-6 after one-point normalization."""
    bg, mode = FIG_BG, FIG_MODE
    spec = closed_solution_spec(bg, mode, ExpansionPoint.HORIZON, Branch.REGULAR)
    r0 = 2*bg.M + 0.5
    ref = closed_solution(bg, mode, spec, 0.5, tol=1e-12)
    initial = spinor_pair_from_t1(bg, mode, r0, ref.value, ref.derivative)
    traj = integrate_system(bg, mode, r0, 2*bg.M + 50.0, initial, tol=1e-11, samples=41)
    closed = closed_solution_many(bg, mode, spec, traj.r - 2*bg.M, tol=1e-12)
    rel = max(abs(t1 - c.value)/abs(c.value) for t1, c in zip(traj.t1, closed))
    return CheckResult(
        "3 first-order system vs closed form", rel < 1e-6,
        [f"max relative deviation {rel:.3e} (limit 1e-06) on u in [0.5, 50]"])


def check_mu_plus_nu() -> CheckResult:
    """Criterion 4a: mu+nu = 0 for all six parameter maps (holds only for
    the horizon-regular Dirac map; the others are reported as measured)."""
    details = []
    ok = True
    for point, branch in itertools.product(ExpansionPoint, Branch):
        spec = closed_solution_spec(FIG_BG, FIG_MODE, point, branch)
        v = spec.mu_plus_nu
        good = abs(v) < 1e-12*(1 + abs(v))
        ok &= good
        details.append(f"dirac {point.value}/{branch.value}: mu+nu = {v:.6e} "
                       f"{'PASS' if good else 'FAIL'}")
    for branch in KGBranch:
        spec = kg_closed_spec(KG_EXAMPLE_BG, KG_EXAMPLE_MODE, branch)
        v = spec.mu_plus_nu
        good = abs(v) < 1e-12*(1 + abs(v))
        ok &= good
        details.append(f"kg {branch.value}: mu+nu = {v:.6e} {'PASS' if good else 'FAIL'}")
    details.append("identity holds only for the horizon-regular map; "
                   "for a second branch mu+nu = -alpha*beta of the regular map")
    return CheckResult("4a identity suite: mu+nu of the six maps", ok, details)


def check_wronskians_and_roots() -> CheckResult:
    """Criterion 4b: scaled-Wronskian constancy and horizon roots."""
    bg, mode = FIG_BG, FIG_MODE
    us = np.linspace(0.5*bg.M, 10*bg.M, 12)
    w_d = np.array([wronskian_scaled(bg, mode, ExpansionPoint.HORIZON, u) for u in us])
    drift_d = float(np.abs(w_d - w_d.mean()).max()/abs(w_d.mean()))
    kus = np.linspace(0.5*KG_EXAMPLE_BG.M, 10*KG_EXAMPLE_BG.M, 12)
    w_k = np.array([kg_wronskian_scaled(KG_EXAMPLE_BG, KG_EXAMPLE_MODE, u) for u in kus])
    drift_k = float(np.abs(w_k - w_k.mean()).max()/abs(w_k.mean()))
    rng = np.random.default_rng(SEED + 2)
    worst_root = 0.0
    for _ in range(50):
        b = KGBackground(M=rng.uniform(0.5, 20), a=rng.uniform(0.05, 1.0))
        r1, r2 = kg_horizons(b)
        worst_root = max(worst_root,
                         abs(kg_delta(b, r1))/b.M**2, abs(kg_delta(b, r2))/b.M**2)
    passed = drift_d < 1e-7 and drift_k < 1e-7 and worst_root < 1e-12
    return CheckResult(
        "4b identity suite: Wronskians and horizon roots", passed,
        [f"dirac W*sqrt(u(u+2M)) relative drift {drift_d:.3e} (limit 1e-07)",
         f"kg W*Delta relative drift {drift_k:.3e} (limit 1e-07)",
         f"max |Delta(M(1 +/- a))|/M^2 {worst_root:.3e} (limit 1e-12)"])


def check_oscillatory_asymptotics() -> CheckResult:
    """Criterion 5a: plane-wave behavior of the horizon-regular branch."""
    cfg = curves.RunConfig(problem=curves.Problem.DIRAC_HORIZON,
                           branch="regular", lo=20.0, hi=50.0, samples=300)
    curve = sample_curve(cfg)
    absv = curve.column("abs")
    cov = float(np.std(absv)/np.mean(absv))
    report = fitted_phase_rate(FIG_BG, FIG_MODE)
    passed = cov < 0.10 and report.r_squared > 0.999
    return CheckResult(
        "5a oscillatory branch: constant amplitude and linear phase", passed,
        [f"modulus coefficient of variation {cov:.3e} on u in [20,50] (limit 0.10)",
         f"phase linear-fit R^2 = {report.r_squared:.7f} (limit 0.999)",
         f"fitted rate {report.fitted_rate:+.5f}; candidates "
         f"{report.rate_prefactor:.5f} (prefactor) and "
         f"{report.rate_prefactor_times_4m:.5f} (4M-scaled); no gate applied"])


def check_decaying_slope() -> CheckResult:
    """Criterion 5b: log-log slope of the decaying branch on u in [50,100]
    (measured; the limiting value -1 is approached only beyond this window)."""
    spec = closed_solution_spec(FIG_BG, FIG_MODE, ExpansionPoint.HORIZON, Branch.SECOND)
    details = []
    slope_win = None
    for lo, hi in ((50.0, 100.0), (200.0, 400.0), (800.0, 1600.0)):
        us = np.linspace(lo, hi, 30)
        vals = closed_solution_many(FIG_BG, FIG_MODE, spec, us, tol=1e-11)
        slope = float(np.polyfit(np.log(us), np.log([abs(v.value) for v in vals]), 1)[0])
        details.append(f"slope on [{lo:g},{hi:g}]: {slope:+.4f}")
        if (lo, hi) == (50.0, 100.0):
            slope_win = slope
    passed = abs(slope_win + 1.0) <= 0.05
    details.append(f"required -1.00 +/- 0.05 on [50,100]; measured {slope_win:+.4f} "
                   "(1/u corrections to the limiting power law are ~8% there)")
    return CheckResult("5b decaying branch: modulus power law on [50,100]", passed, details)


def _kg_step(bg, mode, u) -> float:
    """Finite-difference step balancing truncation against evaluation noise:
    4e-3 over the local coefficient rate, capped by the distance rule."""
    r1, _ = kg_horizons(bg)
    co = kg_radial.kg_radial_coeffs(bg, mode, u + r1)
    rate = max(abs(co.friction), math.sqrt(abs(co.potential)), 0.05)
    return min(u/10.01, 4e-3/rate)


def _kg_residual_batched(bg, mode, spec, u, h, tol=1e-12):
    offsets = (-2, -1, 0, 1, 2)
    res = kg_closed_solution_many(bg, mode, spec, [u + s*h for s in offsets], tol)
    d2 = (-res[4].derivative + 8*res[3].derivative
          - 8*res[1].derivative + res[0].derivative)/(12*h)
    r1, _ = kg_horizons(bg)
    co = kg_radial.kg_radial_coeffs(bg, mode, u + r1)
    num = abs(d2 + co.friction*res[2].derivative + co.potential*res[2].value)
    den = abs(d2) + abs(co.friction*res[2].derivative) + abs(co.potential*res[2].value)
    return num/den


def check_kg_suite() -> CheckResult:
    """Criterion 6: both KG branches solve the radial equation on the
    81-point parameter grid, and the assembled field solves the full wave
    equation on an (r, theta) grid."""
    worst = 0.0
    for M, a, w, lam in itertools.product((1.0, 5.0, 10.0), (0.1, 0.5, 0.9),
                                          (0.1, 0.3, 1.0), (0.0, 2.0, 6.0)):
        bg = KGBackground(M, a)
        mode = KGMode(w, 0, lam)
        for branch in KGBranch:
            spec = kg_closed_spec(bg, mode, branch)
            for u in (0.1*M, M, 10*M):
                worst = max(worst, _kg_residual_batched(bg, mode, spec, u,
                                                        _kg_step(bg, mode, u)))
    pde_worst = _pde_residual_grid()
    passed = worst < 1e-8 and pde_worst < 1e-6
    return CheckResult(
        "6 Klein-Gordon suite", passed,
        [f"radial residual over 81-point grid, both branches: max {worst:.3e} (limit 1e-08)",
         f"full wave equation on 20x20 (r,theta) grid, l=1 n=0: "
         f"max residual {pde_worst:.3e} (limit 1e-06)"])


def _pde_residual_grid() -> float:
    """Assembled Phi = F(r) S(theta) inserted into the expanded wave equation."""
    bg, l, n = KG_EXAMPLE_BG, 1, 0
    mode = KGMode(omega=KG_EXAMPLE_MODE.omega, n=n, lam=float(l*(l + 1)))
    spec = kg_closed_spec(bg, mode, KGBranch.REGULAR)
    r1, _ = kg_horizons(bg)
    us = np.linspace(0.5, 10.0, 20)
    thetas = np.linspace(0.3, math.pi - 0.3, 20)
    worst = 0.0
    h_t = 1e-4
    for u in us:
        h = max(1e-6, 1e-4*u)
        res = kg_closed_solution_many(bg, mode, spec, [u + s*h for s in (-2, -1, 0, 1, 2)],
                                      tol=1e-12)
        F, dF = res[2].value, res[2].derivative
        d2F = (-res[4].derivative + 8*res[3].derivative
               - 8*res[1].derivative + res[0].derivative)/(12*h)
        r = u + r1
        Dl = kg_delta(bg, r)
        dDl = 2*r - 2*bg.M
        for th in thetas:
            S = assoc_legendre(l, n, math.cos(th))
            dS = assoc_legendre_theta_derivative(l, n, th)
            d2S = (assoc_legendre_theta_derivative(l, n, th + h_t)
                   - assoc_legendre_theta_derivative(l, n, th - h_t))/(2*h_t)
            st, ct = math.sin(th), math.cos(th)
            terms = (F*S*st**2*r**4*mode.omega**2,
                     Dl**2*st**2*d2F*S,
                     Dl*dF*S*st**2*dDl,
                     -Dl*n**2*F*S,
                     Dl*F*dS*st*ct,
                     Dl*st**2*F*d2S)
            worst = max(worst, abs(sum(terms))/sum(abs(t) for t in terms))
    return worst


def check_angular_suite() -> CheckResult:
    """Criterion 7: angular residuals for l <= 10 and the eigenvalue
    negative control."""
    worst = 0.0
    thetas = np.linspace(0.1, math.pi - 0.1, 50)
    for l in range(11):
        for n in range(-l, l + 1):
            mode = AngularMode(l, n)
            for th in thetas:
                worst = max(worst, angular_residual(mode, float(th), h=1e-5))
    mode = AngularMode(1, 0)
    control = min(angular_residual(mode, th, h=1e-5, eigenvalue=mode.lam + 0.1)
                  for th in (0.5, 1.0, 2.0))
    passed = worst < 1e-8 and control > 1e-3
    return CheckResult(
        "7 angular suite", passed,
        [f"max residual over l<=10, |n|<=l, 50 theta points: {worst:.3e} (limit 1e-08)",
         f"eigenvalue negative control (lam + 0.1): min residual {control:.3e} (must exceed 1e-03)"])


def check_figures(out_dir: str | None = None) -> CheckResult:
    """Criterion 8: the two presets emit deterministic CSV+SVG with the
    documented qualitative features."""
    out_dir = out_dir or tempfile.mkdtemp(prefix="heunrad-verify-")
    os.makedirs(out_dir, exist_ok=True)
    details = [f"outputs in {out_dir}"]
    ok = True

    c1 = sample_curve(FIG1_CONFIG)
    c1_again = sample_curve(FIG1_CONFIG)
    det1 = c1.rows == c1_again.rows
    absv1 = c1.column("abs")
    # the modulus climbs into the r=2M singular point through decaying
    # ripples; judge growth on a 5-sample moving average
    smooth = np.convolve(absv1, np.ones(5)/5, mode="valid")
    tail = smooth[-len(smooth)//10:]
    grows = bool(np.all(np.diff(tail) > 0)) and int(absv1.argmax()) >= len(absv1) - 8
    ok &= det1 and grows
    details.append(f"figure 1: resampling identical: {det1}; "
                   f"modulus grows into r=2M (smoothed tail increasing, "
                   f"maximum at the edge): {grows}")

    c2 = sample_curve(FIG2_CONFIG)
    us = c2.column("coordinate")
    mask = (us >= 20) & (us <= 50)
    cov = float(np.std(c2.column("abs")[mask])/np.mean(c2.column("abs")[mask]))
    ok &= cov < 0.10
    details.append(f"figure 2 (regular): modulus CoV on [20,50] = {cov:.3e} (limit 0.10)")

    cfg2s = curves.RunConfig(problem=curves.Problem.DIRAC_HORIZON, branch="second",
                             lo=0.1, hi=50.0, samples=800)
    c2s = sample_curve(cfg2s)
    us2 = c2s.column("coordinate")
    m = (us2 >= 20) & (us2 <= 50)
    decreasing = bool(np.all(np.diff(c2s.column("abs")[m]) < 0))
    re2 = c2s.column("re")[m]
    ripple = np.abs(re2 - np.mean(re2))
    first, last = np.max(ripple[:len(ripple)//4]), np.max(ripple[-len(ripple)//4:])
    shrinking = bool(last < first)
    ok &= decreasing and shrinking
    details.append(f"second branch: modulus strictly decreasing on [20,50]: {decreasing}; "
                   f"oscillation amplitude shrinking: {shrinking}")

    for name, curve, cfg in (("fig1", c1, FIG1_CONFIG), ("fig2", c2, FIG2_CONFIG)):
        csv_a = os.path.join(out_dir, f"{name}.csv")
        svg_a = os.path.join(out_dir, f"{name}.svg")
        emit(curve, OutputFormat.CSV, csv_a, cfg.describe())
        emit(curve, OutputFormat.SVG, svg_a, cfg.describe())
        csv_b = os.path.join(out_dir, f"{name}-again.csv")
        svg_b = os.path.join(out_dir, f"{name}-again.svg")
        emit(curve, OutputFormat.CSV, csv_b, cfg.describe())
        emit(curve, OutputFormat.SVG, svg_b, cfg.describe())
        same = (open(csv_a, "rb").read() == open(csv_b, "rb").read()
                and open(svg_a, "rb").read() == open(svg_b, "rb").read())
        ok &= same
        details.append(f"{name}: CSV+SVG byte-deterministic: {same}")
    return CheckResult("8 figure presets", ok, details)


def run_all(out_dir: str | None = None) -> list[CheckResult]:
    return [
        check_heun_suite(),
        check_dirac_closed_residuals(),
        check_integration_oracle(),
        check_mu_plus_nu(),
        check_wronskians_and_roots(),
        check_oscillatory_asymptotics(),
        check_decaying_slope(),
        check_kg_suite(),
        check_angular_suite(),
        check_figures(out_dir),
    ]
