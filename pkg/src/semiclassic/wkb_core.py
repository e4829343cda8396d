"""Action integrals, WKB expansion terms, leading transmission, quantization.

Quadrature policy: adaptive Gauss-Kronrod everywhere; when an integration
endpoint is a classical turning point the substitution x = a + s^2 removes
the square-root branch point, so the transformed integrand is smooth and the
quadrature keeps its full order.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import (
    BracketError,
    DomainError,
    NoBarrierError,
    NumericalError,
    RegionError,
    SpectrumError,
    TurningPointProximityError,
)
from .potential import (
    ScatteringProblem,
    TurningPoints,
    exclusion_radius,
    find_turning_points,
)

__all__ = [
    "Method",
    "WkbTerms",
    "TransmissionReport",
    "action_integral",
    "barrier_integral",
    "wkb_terms",
    "wkb_wavefunction",
    "transmission_leading",
    "quantize",
    "quantize_levels",
    "assert_outside_exclusion",
    "effective_perturbation_value",
]

#: |V(x) - E| below this (times max(1, |E|)) marks x as a turning point for
#: quadrature purposes and triggers the s^2 endpoint substitution.
_SINGULAR_EPS = 1e-8


class Method(enum.Enum):
    """Provenance tag for transmission/reflection numbers."""

    WKB_LEADING = "wkb"
    WKB_CORRECTED = "wkb-corrected"
    CONNECTION_PATCHED = "connection"
    BORN_FIRST_ORDER = "born1"
    EXACT_NUMEROV = "exact"


@dataclass(frozen=True)
class WkbTerms:
    """Leading terms of the phase expansion at one point.

    sigma0 is the accumulated action w(x0, x); sigma1 = -ln sqrt(p);
    sigma2_prime is recovered from the effective perturbation via
    sigma2' = -p Vtilde / 2.
    """

    sigma0: float
    sigma1: float
    sigma2_prime: float
    evaluation_point: float


@dataclass(frozen=True)
class TransmissionReport:
    """Transmission/reflection pair with the opacity integral that made it."""

    transmission: float
    reflection: float
    sigma_star: float | None
    method: Method
    transmission_bare: float | None = None

    def __post_init__(self) -> None:
        if not (-1e-12 <= self.transmission <= 1.0 + 1e-12):
            raise NumericalError(
                f"transmission {self.transmission} outside [0, 1]"
            )


def assert_outside_exclusion(
    problem: ScatteringProblem,
    xs,
    tp: TurningPoints | None = None,
    factor: float = 1.0,
) -> TurningPoints:
    """Raise if any x lies within ``factor`` Airy lengths of a turning point."""
    if tp is None:
        tp = find_turning_points(problem)
    points = [p for p in (tp.a, tp.b) if p is not None]
    xa = np.atleast_1d(np.asarray(xs, dtype=float))
    for x_c in points:
        r = exclusion_radius(problem, x_c)
        bad = np.abs(xa - x_c) < factor * r
        if np.any(bad):
            raise TurningPointProximityError(
                f"x = {float(xa[bad][0]):g} is within {factor:g} Airy lengths "
                f"({factor * r:g}) of the turning point at {x_c:g}"
            )
    return tp


def _quad(f, lo: float, hi: float, scale: float) -> float:
    val, _ = integrate.quad(
        f, lo, hi, limit=400, epsabs=1e-13 * max(1.0, scale), epsrel=1e-12
    )
    return val


def _integrate_with_endpoint_substitution(
    f, lo: float, hi: float, singular_lo: bool, singular_hi: bool, scale: float
) -> float:
    """Integrate f over [lo, hi]; s^2-substitute any turning-point endpoint."""
    if hi <= lo:
        return 0.0
    if singular_lo and singular_hi:
        mid = 0.5 * (lo + hi)
        return (
            _integrate_with_endpoint_substitution(f, lo, mid, True, False, scale)
            + _integrate_with_endpoint_substitution(f, mid, hi, False, True, scale)
        )
    if singular_lo:
        smax = math.sqrt(hi - lo)
        return _quad(lambda s: 2.0 * s * f(lo + s * s), 0.0, smax, scale)
    if singular_hi:
        smax = math.sqrt(hi - lo)
        return _quad(lambda s: 2.0 * s * f(hi - s * s), 0.0, smax, scale)
    return _quad(f, lo, hi, scale)


def _is_turning_endpoint(problem: ScatteringProblem, x: float) -> bool:
    return abs(problem.v(x) - problem.energy) <= _SINGULAR_EPS * max(
        1.0, abs(problem.energy)
    )


def action_integral(problem: ScatteringProblem, x0: float, x: float) -> float:
    """w(x0, x) = integral of p(x') dx' through classically allowed territory.

    The signed integral is returned (negative when x < x0).  An interior
    turning point is an error: the path must stay inside one allowed region,
    though either endpoint may sit exactly on a turning point.
    """
    if x == x0:
        return 0.0
    sign = 1.0 if x > x0 else -1.0
    lo, hi = (x0, x) if x > x0 else (x, x0)

    tp = find_turning_points(problem)
    edge = 1e-9 * max(1.0, hi - lo)
    for x_c in (tp.a, tp.b):
        if x_c is not None and lo + edge < x_c < hi - edge:
            raise RegionError(
                f"turning point at {x_c:g} lies strictly inside [{lo:g}, {hi:g}]"
            )

    m, e = problem.context.mass, problem.energy
    probe = np.linspace(lo, hi, 33)[1:-1]
    if np.min(e - np.asarray(problem.v(probe), dtype=float)) < -_SINGULAR_EPS * max(
        1.0, abs(e)
    ):
        raise RegionError(
            f"[{lo:g}, {hi:g}] enters the classically forbidden region"
        )

    def p_of(xv: float) -> float:
        return math.sqrt(max(2.0 * m * (e - problem.v(xv)), 0.0))

    scale = (hi - lo) * max(p_of(0.5 * (lo + hi)), 1.0)
    val = _integrate_with_endpoint_substitution(
        p_of,
        lo,
        hi,
        _is_turning_endpoint(problem, lo),
        _is_turning_endpoint(problem, hi),
        scale,
    )
    return sign * val


def barrier_integral(
    problem: ScatteringProblem, tp: TurningPoints | None = None
) -> float:
    """Opacity sigma* = (1/hbar) integral_a^b sqrt(2m(V - E)) dx.

    Requires a genuine barrier: two turning points with E < V between them.
    """
    if tp is None:
        tp = find_turning_points(problem)
    if tp.count != 2:
        raise NoBarrierError(
            f"barrier integral needs 2 turning points, found {tp.count} "
            "(E >= max V or no barrier in the domain)"
        )
    a, b = tp.a, tp.b
    m, e, hbar = problem.context.mass, problem.energy, problem.context.hbar
    mid = 0.5 * (a + b)
    if problem.v(mid) <= e:
        raise NoBarrierError(
            "interval between turning points is classically allowed; "
            "this is a well, not a barrier"
        )

    def beta_of(xv: float) -> float:
        return math.sqrt(max(2.0 * m * (problem.v(xv) - e), 0.0)) / hbar

    scale = (b - a) * max(beta_of(mid), 1.0)
    return _integrate_with_endpoint_substitution(
        beta_of,
        a,
        b,
        _is_turning_endpoint(problem, a),
        _is_turning_endpoint(problem, b),
        scale,
    )


def effective_perturbation_value(problem: ScatteringProblem, x: float) -> float:
    """Vtilde = (3 p'^2 - 2 p p'') / (4 p^4) from analytic V derivatives.

    Valid in the classically allowed region (p > 0).  This is the residual
    coupling left over when the wave equation is rewritten in the phase
    variable; it vanishes identically for a free particle.
    """
    m = problem.context.mass
    e = problem.energy
    v = problem.v(x)
    if e <= v:
        raise DomainError(
            f"effective perturbation needs the allowed region; E - V = {e - v:g} at x = {x:g}"
        )
    p = math.sqrt(2.0 * m * (e - v))
    dv = problem.dv(x)
    d2v = problem.d2v(x)
    p1 = -m * dv / p
    p2 = -m * d2v / p - (m * dv) ** 2 / p**3
    return (3.0 * p1 * p1 - 2.0 * p * p2) / (4.0 * p**4)


def wkb_terms(problem: ScatteringProblem, x0: float, x: float) -> WkbTerms:
    """Accumulated action, amplitude log-term, and the sigma2' residual at x.

    Both x0 and x must lie in the classically allowed region, outside every
    turning-point exclusion zone.
    """
    tp = assert_outside_exclusion(problem, [x0, x])
    sigma0 = action_integral(problem, x0, x)
    m = problem.context.mass
    p = math.sqrt(2.0 * m * (problem.energy - problem.v(x)))
    sigma1 = -math.log(math.sqrt(p))
    v_tilde = effective_perturbation_value(problem, x)
    sigma2_prime = -0.5 * p * v_tilde
    del tp
    return WkbTerms(
        sigma0=sigma0, sigma1=sigma1, sigma2_prime=sigma2_prime, evaluation_point=x
    )


def _cumulative_action(problem: ScatteringProblem, ref: float, xs: np.ndarray):
    """w(ref, x) for sorted xs, one quadrature segment per gap."""
    out = np.empty(len(xs))
    prev, acc = ref, 0.0
    for i, xv in enumerate(xs):
        acc += action_integral(problem, prev, xv)
        out[i] = acc
        prev = xv
    return out


def _cumulative_decay(problem: ScatteringProblem, ref: float, xs: np.ndarray):
    """integral of beta from ref to each sorted x (forbidden region)."""
    m, e, hbar = problem.context.mass, problem.energy, problem.context.hbar

    def beta_of(xv: float) -> float:
        return math.sqrt(max(2.0 * m * (problem.v(xv) - e), 0.0)) / hbar

    out = np.empty(len(xs))
    prev, acc = ref, 0.0
    for i, xv in enumerate(xs):
        lo, hi = (prev, xv) if xv >= prev else (xv, prev)
        seg = _integrate_with_endpoint_substitution(
            beta_of,
            lo,
            hi,
            _is_turning_endpoint(problem, lo),
            _is_turning_endpoint(problem, hi),
            max(1.0, hi - lo),
        )
        acc += seg if xv >= prev else -seg
        out[i] = acc
        prev = xv
    return out


def wkb_wavefunction(problem: ScatteringProblem, amplitudes, x0: float, xs):
    """First-order WKB wave on a set of points sharing one region with x0.

    In the allowed region psi = p^(-1/2) [C+ e^{i w/hbar} + C- e^{-i w/hbar}];
    in the forbidden region the oscillations become real exponentials with
    rate beta.  Crossing a turning point requires the connection machinery
    instead, so mixed-region requests are rejected.
    """
    from .connection import WavefunctionTable, classify_region

    c_plus = complex(amplitudes.c_plus if hasattr(amplitudes, "c_plus") else amplitudes[0])
    c_minus = complex(amplitudes.c_minus if hasattr(amplitudes, "c_minus") else amplitudes[1])

    xs = np.sort(np.atleast_1d(np.asarray(xs, dtype=float)))
    tp = assert_outside_exclusion(problem, xs)
    assert_outside_exclusion(problem, [x0], tp=tp)

    span_lo = min(float(xs[0]), x0)
    span_hi = max(float(xs[-1]), x0)
    for x_c in (tp.a, tp.b):
        if x_c is not None and span_lo < x_c < span_hi:
            raise RegionError(
                f"points straddle the turning point at {x_c:g}; "
                "use the connection module to cross it"
            )

    e, m, hbar = problem.energy, problem.context.mass, problem.context.hbar
    allowed = e >= problem.v(x0)
    psi = np.empty(len(xs), dtype=complex)
    if allowed:
        w = _cumulative_action(problem, x0, xs)
        p = np.sqrt(2.0 * m * (e - np.asarray(problem.v(xs), dtype=float)))
        psi = (c_plus * np.exp(1j * w / hbar) + c_minus * np.exp(-1j * w / hbar)) / np.sqrt(p)
    else:
        s = _cumulative_decay(problem, x0, xs)
        beta = np.asarray(problem.beta(xs), dtype=float)
        psi = (c_plus * np.exp(-s) + c_minus * np.exp(+s)) / np.sqrt(beta)

    tags = [classify_region(problem, x, tp) for x in xs]
    return WavefunctionTable(xs=xs, psi=psi, region_tags=tags)


def transmission_leading(
    problem: ScatteringProblem, corrected: bool = True
) -> TransmissionReport:
    """Tunneling probability from the opacity integral.

    corrected=True reports T = e^{-2 sigma*} / (1 + e^{-2 sigma*}/4)^2, the
    interference-aware value that keeping the growing exponential inside the
    barrier produces; corrected=False reports the bare e^{-2 sigma*}.  The
    bare value is always recorded alongside for comparison.
    """
    sigma_star = barrier_integral(problem)
    bare = math.exp(-2.0 * sigma_star)
    corr = bare / (1.0 + 0.25 * bare) ** 2
    t = corr if corrected else bare
    return TransmissionReport(
        transmission=t,
        reflection=1.0 - t,
        sigma_star=sigma_star,
        method=Method.WKB_CORRECTED if corrected else Method.WKB_LEADING,
        transmission_bare=bare,
    )


def quantize(
    problem: ScatteringProblem, n: int, bracket: tuple[float, float]
) -> float:
    """Level E_n of a single well from the half-integer action condition.

    Solves integral_a^b sqrt(2m(E - V)) dx = (n + 1/2) pi hbar by bisection
    on the energy bracket, to relative tolerance 1e-10.  The integrand is
    cheap and monotone in E, so bisection wins on robustness.
    """
    if n < 0:
        raise DomainError(f"quantum number must be nonnegative, got {n}")
    e_lo, e_hi = bracket
    if not e_lo < e_hi:
        raise BracketError(f"empty bracket {bracket}")
    target = (n + 0.5) * math.pi * problem.context.hbar

    def residual(e: float) -> float:
        prob_e = dataclasses.replace(problem, energy=e)
        tp = find_turning_points(prob_e)
        if tp.count != 2:
            raise BracketError(
                f"E = {e:g} has {tp.count} turning points; the bracket must "
                "keep the well topology (exactly 2)"
            )
        if prob_e.v(0.5 * (tp.a + tp.b)) >= e:
            raise BracketError(f"E = {e:g}: interval between roots is not a well")
        return action_integral(prob_e, tp.a, tp.b) - target

    f_lo, f_hi = residual(e_lo), residual(e_hi)
    if f_lo == 0.0:
        return e_lo
    if f_hi == 0.0:
        return e_hi
    if (f_lo < 0.0) == (f_hi < 0.0):
        raise BracketError(
            f"quantization residual does not change sign on [{e_lo:g}, {e_hi:g}] "
            f"for n = {n}"
        )
    for _ in range(200):
        e_mid = 0.5 * (e_lo + e_hi)
        if e_hi - e_lo <= 1e-10 * max(1.0, abs(e_mid)):
            return e_mid
        f_mid = residual(e_mid)
        if f_mid == 0.0:
            return e_mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            e_lo, f_lo = e_mid, f_mid
        else:
            e_hi = e_mid
    return 0.5 * (e_lo + e_hi)


def quantize_levels(
    problem: ScatteringProblem, n_max: int, scan_points: int = 64
) -> list[float]:
    """E_0..E_n_max of a single well, with brackets found automatically.

    The well action grows monotonically with E, so a coarse scan between the
    well bottom and the lowest domain-edge rim brackets every level; each
    bracket then goes through :func:`quantize`.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be nonnegative, got {n_max}")
    lo_x, hi_x = problem.domain
    xs = np.linspace(lo_x, hi_x, 2049)
    v = np.asarray(problem.v(xs), dtype=float)
    v_min = float(np.min(v))
    rim = min(float(problem.v(lo_x)), float(problem.v(hi_x)))
    if rim <= v_min:
        raise SpectrumError("potential has no well below the domain edges")
    span = rim - v_min
    energies = np.linspace(v_min + 1e-6 * span, rim - 1e-9 * span, scan_points)
    hbar = problem.context.hbar

    def well_action(e: float) -> float:
        prob_e = dataclasses.replace(problem, energy=e)
        tp = find_turning_points(prob_e)
        if tp.count != 2:
            raise SpectrumError(
                f"E = {e:g} does not see a simple well (found {tp.count} "
                "turning points)"
            )
        return action_integral(prob_e, tp.a, tp.b)

    actions = np.array([well_action(float(e)) for e in energies])
    levels = []
    for n in range(n_max + 1):
        target = (n + 0.5) * math.pi * hbar
        if actions[-1] <= target:
            raise SpectrumError(
                f"the well holds fewer than {n_max + 1} levels below its rim"
            )
        j = int(np.searchsorted(actions, target))
        bracket_lo = energies[j - 1] if j > 0 else v_min + 1e-9 * span
        levels.append(quantize(problem, n, (float(bracket_lo), float(energies[j]))))
    return levels
