"""Curve sampling and emission (CSV and SVG) for the closed-form solutions.

A sampled curve carries (coordinate, Re, Im, |value|) rows.  Because the
plotted quantity of record is not fixed, all three series are emitted so
any reading (real part, imaginary part, or modulus) can be compared.

CSV: header ``coordinate,re,im,abs``, 17-significant-digit values, LF line
endings; identical configurations produce byte-identical files.  SVG is
rendered with matplotlib to a self-contained file (fonts as paths, fixed
hash salt, no timestamp) and is likewise deterministic for a fixed input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import dirac_radial, kg_radial
from .errors import CurveEvaluationError, HeunradError
from .spacetimes import DiracBackground, DiracMode, KGBackground, KGMode


class Problem(Enum):
    DIRAC_ORIGIN = "dirac-origin"
    DIRAC_HORIZON = "dirac-horizon"
    KG = "kg"


class OutputFormat(Enum):
    CSV = "csv"
    SVG = "svg"


@dataclass(frozen=True)
class SampledCurve:
    """Ordered samples (coordinate, re, im, abs) of one complex-valued curve."""

    coordinate_name: str
    rows: tuple[tuple[float, float, float, float], ...]
    max_err_estimate: float = 0.0

    def __post_init__(self):
        coords = [row[0] for row in self.rows]
        if any(b <= a for a, b in zip(coords, coords[1:])):
            raise ValueError("coordinates must be strictly increasing")
        for c, re, im, ab in self.rows:
            if not math.isclose(ab, math.hypot(re, im), rel_tol=1e-13, abs_tol=1e-300):
                raise ValueError(f"abs column inconsistent at coordinate {c}")

    def column(self, name: str) -> np.ndarray:
        idx = {"coordinate": 0, "re": 1, "im": 2, "abs": 3}[name]
        return np.array([row[idx] for row in self.rows])


@dataclass(frozen=True)
class RunConfig:
    """One curve-sampling run: problem, branch, physical parameters, range."""

    problem: Problem
    branch: str = "regular"            # "regular" | "second"
    M: float = 5.0
    p: float = 10.0
    a: float = 0.1
    k: float = 0.2
    lam: float = 0.7
    omega: float = 0.3
    l: int = 1
    n: int = 0
    lo: float = 0.1
    hi: float = 50.0
    samples: int = 800
    tol: float = 1e-10
    out: str | None = None

    def __post_init__(self):
        if self.branch not in ("regular", "second"):
            raise ValueError(f"branch must be 'regular' or 'second', got {self.branch!r}")
        if not (self.lo < self.hi):
            raise ValueError(f"need lo < hi, got {self.lo} >= {self.hi}")
        if self.samples < 2:
            raise ValueError("samples must be at least 2")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.lo <= 0:
            raise ValueError("range must start above the expansion point, lo > 0")
        if self.problem is Problem.DIRAC_ORIGIN and self.hi >= 2*self.M:
            raise ValueError(
                f"origin problem requires the range inside (0, 2M): hi={self.hi} >= {2*self.M}")

    def describe(self) -> str:
        common = (f"problem={self.problem.value} branch={self.branch} "
                  f"range={self.lo:g}:{self.hi:g} samples={self.samples} tol={self.tol:g}")
        if self.problem is Problem.KG:
            return (f"{common} M={self.M:g} a={self.a:g} omega={self.omega:g} "
                    f"l={self.l} n={self.n} lambda={self.l*(self.l+1)}")
        return (f"{common} M={self.M:g} p={self.p:g} a={self.a:g} "
                f"k={self.k:g} lambda={self.lam:g}")


def sample_curve(cfg: RunConfig) -> SampledCurve:
    """Evaluate the configured solution at ``samples`` uniformly spaced
    points.  Deterministic for a fixed config; a single failing point
    aborts with its index and coordinate attached (no silent gaps)."""
    xs = np.linspace(cfg.lo, cfg.hi, cfg.samples)
    if cfg.problem is Problem.KG:
        bg = KGBackground(cfg.M, cfg.a)
        mode = KGMode(cfg.omega, cfg.n, float(cfg.l*(cfg.l + 1)))
        branch = (kg_radial.KGBranch.REGULAR if cfg.branch == "regular"
                  else kg_radial.KGBranch.SECOND)
        spec = kg_radial.kg_closed_spec(bg, mode, branch)
        evaluate = lambda pts: kg_radial.kg_closed_solution_many(bg, mode, spec, pts, cfg.tol)
        name = "u"
    else:
        bg = DiracBackground(cfg.M, cfg.p, cfg.a)
        mode = DiracMode(cfg.k, cfg.lam)
        point = (dirac_radial.ExpansionPoint.ORIGIN if cfg.problem is Problem.DIRAC_ORIGIN
                 else dirac_radial.ExpansionPoint.HORIZON)
        branch = (dirac_radial.Branch.REGULAR if cfg.branch == "regular"
                  else dirac_radial.Branch.SECOND)
        spec = dirac_radial.closed_solution_spec(bg, mode, point, branch)
        evaluate = lambda pts: dirac_radial.closed_solution_many(bg, mode, spec, pts, cfg.tol)
        name = "r" if cfg.problem is Problem.DIRAC_ORIGIN else "u"
    try:
        results = evaluate(xs)
    except HeunradError:
        # batch failed; locate the first failing point for the diagnostic
        results = []
        for i, x in enumerate(xs):
            try:
                results.extend(evaluate([x]))
            except HeunradError as exc:
                raise CurveEvaluationError(
                    f"sample {i} at {name} = {x:.17g} failed: {exc}") from exc
    rows = tuple((float(x), v.value.real, v.value.imag, abs(v.value))
                 for x, v in zip(xs, results))
    return SampledCurve(name, rows, max(v.err_estimate for v in results))


def _emit_csv(curve: SampledCurve, path: str):
    lines = ["coordinate,re,im,abs"]
    lines += [",".join(f"{v:.17g}" for v in row) for row in curve.rows]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _emit_svg(curve: SampledCurve, path: str, title: str):
    plt.rcParams["svg.hashsalt"] = "heunrad"
    fig, ax = plt.subplots(figsize=(9, 5.5))
    xs = curve.column("coordinate")
    ax.plot(xs, curve.column("re"), lw=0.9, label="re")
    ax.plot(xs, curve.column("im"), lw=0.9, label="im")
    ax.plot(xs, curve.column("abs"), lw=1.4, label="abs")
    ax.set_xlabel(curve.coordinate_name)
    ax.set_title(title, fontsize=9)
    ax.legend(loc="best")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit(curve: SampledCurve, fmt: OutputFormat, path: str, title: str = ""):
    """Write the curve; an empty curve is an error, never an empty file."""
    if not curve.rows:
        raise ValueError("refusing to emit an empty curve")
    if fmt is OutputFormat.CSV:
        _emit_csv(curve, path)
    elif fmt is OutputFormat.SVG:
        _emit_svg(curve, path, title or "sampled curve")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def parse_csv(path: str) -> SampledCurve:
    """Read back an emitted CSV (bit-exact round trip of the values)."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if lines[0] != "coordinate,re,im,abs":
        raise ValueError(f"unexpected header {lines[0]!r}")
    rows = tuple(tuple(float(tok) for tok in ln.split(",")) for ln in lines[1:])
    return SampledCurve("coordinate", rows)


# presets reproducing the two reference figures (M=5, p=10, a=0.1, k=0.2,
# lambda=0.7): the interior solution over 0 < r < 2M and the exterior one
FIG1_CONFIG = RunConfig(problem=Problem.DIRAC_ORIGIN, branch="regular",
                        lo=0.1, hi=9.9, samples=800)
FIG2_CONFIG = RunConfig(problem=Problem.DIRAC_HORIZON, branch="regular",
                        lo=0.1, hi=50.0, samples=800)
