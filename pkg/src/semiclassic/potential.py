"""Analytic 1-D potential models, turning-point location, local wavenumbers.

All models evaluate V(x), dV/dx and d2V/dx2 for scalar or array ``x``.  The
scattering problem bundles a potential with a physical context (mass, hbar),
an energy and a working domain; everything downstream consumes that bundle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, MultiWellError

__all__ = [
    "PhysicalContext",
    "PotentialModel",
    "SquareBarrier",
    "GaussianBump",
    "EckartBarrier",
    "HarmonicWell",
    "LinearRamp",
    "ParabolicBarrier",
    "TabulatedPotential",
    "ScatteringProblem",
    "TurningPoints",
    "evaluate",
    "derivative",
    "second_derivative",
    "find_turning_points",
    "local_wavenumber",
    "exclusion_radius",
]

#: |V(root) - E| must not exceed this times max(1, |E|) at a reported root.
ROOT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class PhysicalContext:
    """Unit system: particle mass and hbar. Defaults to m = hbar = 1."""

    mass: float = 1.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if not (self.mass > 0.0 and math.isfinite(self.mass)):
            raise DomainError(f"mass must be positive and finite, got {self.mass}")
        if not (self.hbar > 0.0 and math.isfinite(self.hbar)):
            raise DomainError(f"hbar must be positive and finite, got {self.hbar}")


class PotentialModel:
    """Base class: analytic V(x) with first and second derivatives."""

    def value(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def second_derivative(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.value(x)


def _require_positive(name: str, v: float) -> None:
    if not (v > 0.0 and math.isfinite(v)):
        raise DomainError(f"{name} must be strictly positive, got {v}")


@dataclass(frozen=True)
class SquareBarrier(PotentialModel):
    """Rectangular barrier of the given height and width.

    The value exactly at either edge is the midpoint height/2, so grids whose
    nodes land on the edges average the jump instead of biasing it one way.
    """

    height: float
    width: float
    center: float = 0.0

    def __post_init__(self) -> None:
        _require_positive("width", self.width)

    def value(self, x):
        dx = np.abs(np.asarray(x, dtype=float) - self.center)
        half = 0.5 * self.width
        out = np.where(dx < half, self.height, 0.0)
        out = np.where(dx == half, 0.5 * self.height, out)
        return out if out.ndim else float(out)

    def derivative(self, x):
        # Zero almost everywhere; the edge delta spikes are not representable.
        out = np.zeros_like(np.asarray(x, dtype=float))
        return out if out.ndim else 0.0

    def second_derivative(self, x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        return out if out.ndim else 0.0


@dataclass(frozen=True)
class GaussianBump(PotentialModel):
    """V(x) = A exp(-((x - c)/d)^2)."""

    amplitude: float
    width: float
    center: float = 0.0

    def __post_init__(self) -> None:
        _require_positive("width", self.width)

    def value(self, x):
        u = (np.asarray(x, dtype=float) - self.center) / self.width
        out = self.amplitude * np.exp(-u * u)
        return out if out.ndim else float(out)

    def derivative(self, x):
        xa = np.asarray(x, dtype=float)
        u = (xa - self.center) / self.width
        out = self.amplitude * np.exp(-u * u) * (-2.0 * u / self.width)
        return out if out.ndim else float(out)

    def second_derivative(self, x):
        xa = np.asarray(x, dtype=float)
        u = (xa - self.center) / self.width
        out = self.amplitude * np.exp(-u * u) * (4.0 * u * u - 2.0) / self.width**2
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class EckartBarrier(PotentialModel):
    """V(x) = V0 sech^2((x - c)/d)."""

    height: float
    width: float
    center: float = 0.0

    def __post_init__(self) -> None:
        _require_positive("width", self.width)

    def value(self, x):
        u = (np.asarray(x, dtype=float) - self.center) / self.width
        out = self.height / np.cosh(u) ** 2
        return out if out.ndim else float(out)

    def derivative(self, x):
        xa = np.asarray(x, dtype=float)
        u = (xa - self.center) / self.width
        s = 1.0 / np.cosh(u)
        out = -2.0 * self.height * s * s * np.tanh(u) / self.width
        return out if out.ndim else float(out)

    def second_derivative(self, x):
        xa = np.asarray(x, dtype=float)
        u = (xa - self.center) / self.width
        s2 = 1.0 / np.cosh(u) ** 2
        out = (self.height / self.width**2) * (4.0 * s2 - 6.0 * s2 * s2)
        return out if np.asarray(out).ndim else float(out)


@dataclass(frozen=True)
class HarmonicWell(PotentialModel):
    """V(x) = stiffness x^2 / 2."""

    stiffness: float

    def __post_init__(self) -> None:
        _require_positive("stiffness", self.stiffness)

    def value(self, x):
        xa = np.asarray(x, dtype=float)
        out = 0.5 * self.stiffness * xa * xa
        return out if out.ndim else float(out)

    def derivative(self, x):
        xa = np.asarray(x, dtype=float)
        out = self.stiffness * xa
        return out if out.ndim else float(out)

    def second_derivative(self, x):
        out = np.full_like(np.asarray(x, dtype=float), self.stiffness)
        return out if out.ndim else float(self.stiffness)


@dataclass(frozen=True)
class LinearRamp(PotentialModel):
    """V(x) = offset + slope * x."""

    offset: float
    slope: float

    def value(self, x):
        xa = np.asarray(x, dtype=float)
        out = self.offset + self.slope * xa
        return out if out.ndim else float(out)

    def derivative(self, x):
        out = np.full_like(np.asarray(x, dtype=float), self.slope)
        return out if out.ndim else float(self.slope)

    def second_derivative(self, x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        return out if out.ndim else 0.0


@dataclass(frozen=True)
class ParabolicBarrier(PotentialModel):
    """Inverted parabola V(x) = V0 - curvature (x - c)^2 / 2.

    The canonical smooth barrier: its opacity integral has the closed form
    pi (V0 - E) sqrt(m / curvature) / hbar, which makes it the standard
    cross-check for barrier quadrature.
    """

    height: float
    curvature: float
    center: float = 0.0

    def __post_init__(self) -> None:
        _require_positive("curvature", self.curvature)

    def value(self, x):
        dx = np.asarray(x, dtype=float) - self.center
        out = self.height - 0.5 * self.curvature * dx * dx
        return out if out.ndim else float(out)

    def derivative(self, x):
        dx = np.asarray(x, dtype=float) - self.center
        out = -self.curvature * dx
        return out if out.ndim else float(out)

    def second_derivative(self, x):
        out = np.full_like(np.asarray(x, dtype=float), -self.curvature)
        return out if out.ndim else float(-self.curvature)


@dataclass(frozen=True)
class TabulatedPotential(PotentialModel):
    """Cubic interpolation through (x, V) samples on a strictly increasing grid.

    Cubic (not-a-knot) interpolation keeps V'' continuous, which the
    effective-perturbation machinery needs.  dV/dx follows the stated
    contract: a central finite difference of the interpolant with step
    1e-6 max(1, |x|), shrunk near the grid edges to stay in range.
    """

    xs: tuple
    vs: tuple
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __init__(self, xs, vs):
        xs = tuple(float(v) for v in xs)
        vs = tuple(float(v) for v in vs)
        if len(xs) < 4:
            raise DomainError(f"tabulated grid needs >= 4 points, got {len(xs)}")
        if len(xs) != len(vs):
            raise DomainError("tabulated grid: x and V lengths differ")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("tabulated grid must be strictly increasing in x")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "vs", vs)
        object.__setattr__(self, "_spline", CubicSpline(xs, vs, bc_type="not-a-knot"))

    def _check_range(self, x) -> None:
        xa = np.asarray(x, dtype=float)
        if np.any(xa < self.xs[0]) or np.any(xa > self.xs[-1]):
            raise DomainError(
                f"x outside tabulated range [{self.xs[0]}, {self.xs[-1]}]"
            )

    def value(self, x):
        self._check_range(x)
        out = self._spline(np.asarray(x, dtype=float))
        return out if out.ndim else float(out)

    def derivative(self, x):
        self._check_range(x)
        xa = np.asarray(x, dtype=float)
        h = 1e-6 * np.maximum(1.0, np.abs(xa))
        h = np.minimum(h, np.minimum(xa - self.xs[0], self.xs[-1] - xa))
        h = np.maximum(h, 1e-12)
        out = (self._spline(xa + h) - self._spline(xa - h)) / (2.0 * h)
        return out if out.ndim else float(out)

    def second_derivative(self, x):
        self._check_range(x)
        out = self._spline(np.asarray(x, dtype=float), 2)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class ScatteringProblem:
    """A potential, an energy and a domain in a fixed unit system."""

    potential: PotentialModel
    energy: float
    domain: tuple = (-10.0, 10.0)
    context: PhysicalContext = PhysicalContext()

    def __post_init__(self) -> None:
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"domain must satisfy x_min < x_max, got {self.domain}")
        if not math.isfinite(self.energy):
            raise DomainError(f"energy must be finite, got {self.energy}")
        object.__setattr__(self, "domain", (float(lo), float(hi)))

    # Short-hand evaluators -------------------------------------------------

    def v(self, x):
        return self.potential.value(x)

    def dv(self, x):
        return self.potential.derivative(x)

    def d2v(self, x):
        return self.potential.second_derivative(x)

    def momentum(self, x):
        """p(x) = sqrt(2m(E - V)); nan where classically forbidden."""
        with np.errstate(invalid="ignore"):
            out = np.sqrt(2.0 * self.context.mass * (self.energy - self.v(x)))
        return out if np.asarray(out).ndim else float(out)

    def beta(self, x):
        """Decay rate sqrt(2m(V - E))/hbar; nan where classically allowed."""
        with np.errstate(invalid="ignore"):
            out = (
                np.sqrt(2.0 * self.context.mass * (self.v(x) - self.energy))
                / self.context.hbar
            )
        return out if np.asarray(out).ndim else float(out)


@dataclass(frozen=True)
class TurningPoints:
    """Classical turning points: count in {0, 1, 2}; a < b when both exist."""

    a: float | None
    b: float | None
    count: int


def evaluate(potential: PotentialModel, x):
    """V(x)."""
    if np.any(~np.isfinite(np.asarray(x, dtype=float))):
        raise DomainError("x must be finite")
    return potential.value(x)


def derivative(potential: PotentialModel, x):
    """dV/dx."""
    if np.any(~np.isfinite(np.asarray(x, dtype=float))):
        raise DomainError("x must be finite")
    return potential.derivative(x)


def second_derivative(potential: PotentialModel, x):
    """d2V/dx2."""
    if np.any(~np.isfinite(np.asarray(x, dtype=float))):
        raise DomainError("x must be finite")
    return potential.second_derivative(x)


def _bisect_root(g, lo: float, hi: float, rel_tol: float = 1e-12) -> float:
    """Bisection on a bracketing interval, to relative x tolerance."""
    glo = g(lo)
    if glo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rel_tol * max(1.0, abs(mid)):
            return mid
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (glo < 0.0) == (gm < 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_turning_points(problem: ScatteringProblem, panels: int = 2048) -> TurningPoints:
    """Locate the roots of V(x) - E inside the problem domain.

    A bracketing scan over ``panels`` intervals feeds bisection; the two
    outermost roots are returned for the single-barrier (or single-well)
    topology.  More than two roots means a multi-well landscape, which is
    rejected rather than silently truncated.
    """
    lo, hi = problem.domain
    xs = np.linspace(lo, hi, panels + 1)
    g = np.asarray(problem.v(xs), dtype=float) - problem.energy

    roots: list[float] = []
    gfun = lambda x: problem.v(x) - problem.energy
    for i in range(panels):
        g0, g1 = g[i], g[i + 1]
        if g0 == 0.0:
            if not roots or abs(xs[i] - roots[-1]) > 1e-9 * max(1.0, abs(xs[i])):
                roots.append(float(xs[i]))
        elif (g0 < 0.0) != (g1 < 0.0):
            roots.append(_bisect_root(gfun, float(xs[i]), float(xs[i + 1])))
    if g[-1] == 0.0:
        roots.append(float(xs[-1]))

    if len(roots) > 2:
        raise MultiWellError(
            f"found {len(roots)} turning points; only single-barrier/single-well "
            "potentials (at most 2) are supported"
        )
    if not roots:
        return TurningPoints(a=None, b=None, count=0)
    if len(roots) == 1:
        return TurningPoints(a=roots[0], b=None, count=1)
    a, b = sorted(roots)
    return TurningPoints(a=a, b=b, count=2)


def local_wavenumber(problem: ScatteringProblem, x: float) -> complex:
    """k(x) = sqrt(2m(E - V))/hbar, continued to i beta(x) where E < V."""
    m, hbar = problem.context.mass, problem.context.hbar
    diff = problem.energy - problem.v(x)
    if diff >= 0.0:
        return complex(math.sqrt(2.0 * m * diff) / hbar, 0.0)
    return complex(0.0, math.sqrt(-2.0 * m * diff) / hbar)


def exclusion_radius(problem: ScatteringProblem, x_c: float) -> float:
    """Airy length (hbar^2 / (2m |V'(x_c)|))^(1/3) around a turning point.

    The slope is the larger of the analytic derivative and a finite
    difference across the point, so potential jumps (where the analytic
    slope reads 0 but the physical one is effectively infinite) shrink the
    zone instead of inflating it.  A genuinely flat turning point, e.g. a
    smooth barrier top at E = V_max, has no WKB region at all: inf.
    """
    m, hbar = problem.context.mass, problem.context.hbar
    slope = abs(problem.dv(x_c))
    delta = 1e-6 * max(1.0, abs(x_c))
    lo, hi = problem.domain
    lo_pt, hi_pt = max(x_c - delta, lo), min(x_c + delta, hi)
    if hi_pt > lo_pt:
        slope = max(
            slope, abs(problem.v(hi_pt) - problem.v(lo_pt)) / (hi_pt - lo_pt)
        )
    if slope == 0.0:
        return math.inf
    return (hbar * hbar / (2.0 * m * slope)) ** (1.0 / 3.0)
