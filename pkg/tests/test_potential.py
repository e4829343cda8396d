"""Potential models, turning points, local wavenumbers."""

import math

import numpy as np
import pytest

from semiclassic import (
    DomainError,
    EckartBarrier,
    GaussianBump,
    HarmonicWell,
    LinearRamp,
    MultiWellError,
    ParabolicBarrier,
    PhysicalContext,
    ScatteringProblem,
    SquareBarrier,
    TabulatedPotential,
    derivative,
    evaluate,
    exclusion_radius,
    find_turning_points,
    local_wavenumber,
    second_derivative,
)

SMOOTH_MODELS = [
    GaussianBump(amplitude=0.7, width=1.3, center=0.2),
    EckartBarrier(height=1.0, width=0.8, center=-0.4),
    HarmonicWell(stiffness=2.0),
    LinearRamp(offset=0.3, slope=-1.1),
    ParabolicBarrier(height=2.0, curvature=0.5, center=0.1),
]


def problem_for(potential, energy, domain=(-10.0, 10.0)):
    return ScatteringProblem(potential=potential, energy=energy, domain=domain)


class TestEvaluate:
    def test_harmonic_minimum(self):
        assert evaluate(HarmonicWell(stiffness=1.0), 0.0) == 0.0

    def test_linear_ramp(self):
        assert evaluate(LinearRamp(offset=0.0, slope=2.0), 3.0) == 6.0

    def test_eckart_peak(self):
        assert evaluate(EckartBarrier(height=1.0, width=1.0), 0.0) == 1.0

    def test_square_edge_value_is_midpoint(self):
        bar = SquareBarrier(height=1.0, width=2.0)
        assert bar.value(1.0) == 0.5
        assert bar.value(0.999) == 1.0
        assert bar.value(1.001) == 0.0

    def test_vectorized(self):
        xs = np.array([-1.0, 0.0, 2.0])
        np.testing.assert_allclose(
            evaluate(HarmonicWell(stiffness=2.0), xs), xs * xs
        )

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            evaluate(HarmonicWell(stiffness=1.0), math.inf)


class TestDerivative:
    def test_linear_slope(self):
        assert derivative(LinearRamp(offset=0.0, slope=2.0), -7.3) == 2.0

    def test_harmonic(self):
        assert derivative(HarmonicWell(stiffness=1.0), 1.0) == 1.0

    def test_eckart_even_peak(self):
        assert derivative(EckartBarrier(height=1.0, width=1.0), 0.0) == 0.0

    def test_matches_finite_difference(self):
        rng = np.random.default_rng(7)
        for model in SMOOTH_MODELS:
            xs = rng.uniform(-3.0, 3.0, 100)
            h = 1e-6 * np.maximum(1.0, np.abs(xs))
            fd = (model.value(xs + h) - model.value(xs - h)) / (2.0 * h)
            exact = model.derivative(xs)
            assert np.all(
                np.abs(exact - fd) <= 1e-6 * np.maximum(1.0, np.abs(exact))
            )

    def test_second_derivative_matches_finite_difference(self):
        rng = np.random.default_rng(8)
        for model in SMOOTH_MODELS:
            xs = rng.uniform(-3.0, 3.0, 50)
            h = 1e-5
            fd = (model.value(xs + h) - 2 * model.value(xs) + model.value(xs - h)) / h**2
            exact = second_derivative(model, xs)
            assert np.all(np.abs(exact - fd) <= 1e-4 * np.maximum(1.0, np.abs(exact)))


class TestTabulated:
    def build(self):
        xs = np.linspace(-5.0, 5.0, 201)
        return TabulatedPotential(xs, np.cos(xs))

    def test_interpolates(self):
        pot = self.build()
        assert abs(pot.value(0.37) - math.cos(0.37)) < 1e-7

    def test_derivative_fd(self):
        pot = self.build()
        assert abs(pot.derivative(0.37) + math.sin(0.37)) < 1e-5

    def test_second_derivative_continuous(self):
        pot = self.build()
        assert abs(pot.second_derivative(0.5) + math.cos(0.5)) < 1e-3

    def test_out_of_range(self):
        pot = self.build()
        with pytest.raises(DomainError):
            pot.value(5.5)

    def test_too_few_points(self):
        with pytest.raises(DomainError):
            TabulatedPotential([0.0, 1.0, 2.0], [0.0, 1.0, 2.0])

    def test_non_monotone(self):
        with pytest.raises(DomainError):
            TabulatedPotential([0.0, 1.0, 1.0, 2.0], [0.0, 1.0, 2.0, 3.0])


class TestValidation:
    def test_positive_parameters(self):
        with pytest.raises(DomainError):
            GaussianBump(amplitude=1.0, width=-1.0)
        with pytest.raises(DomainError):
            HarmonicWell(stiffness=0.0)
        with pytest.raises(DomainError):
            PhysicalContext(mass=-1.0)

    def test_domain_ordering(self):
        with pytest.raises(DomainError):
            ScatteringProblem(
                potential=HarmonicWell(stiffness=1.0), energy=0.5, domain=(2.0, -2.0)
            )


class TestTurningPoints:
    def test_harmonic(self):
        tp = find_turning_points(problem_for(HarmonicWell(stiffness=1.0), 0.5))
        assert tp.count == 2
        assert abs(tp.a + 1.0) < 1e-10 and abs(tp.b - 1.0) < 1e-10

    def test_eckart_derived_root(self):
        # sech^2(b) = 1/2  =>  b = arcsech(1/sqrt(2)) = ln((1 + sqrt(1/2)) sqrt(2))
        expected = math.log((1.0 + math.sqrt(0.5)) / math.sqrt(0.5))
        tp = find_turning_points(
            problem_for(EckartBarrier(height=1.0, width=1.0), 0.5, (-14, 14))
        )
        assert tp.count == 2
        assert abs(tp.b - expected) < 1e-10
        assert abs(tp.a + expected) < 1e-10

    def test_over_barrier_no_roots(self):
        tp = find_turning_points(
            problem_for(SquareBarrier(height=1.0, width=2.0), 2.0, (-8, 8))
        )
        assert tp.count == 0

    def test_single_root_ramp(self):
        tp = find_turning_points(problem_for(LinearRamp(offset=0.0, slope=1.0), 0.5))
        assert tp.count == 1
        assert abs(tp.a - 0.5) < 1e-10

    def test_root_tolerance_invariant(self):
        for model, e in [
            (GaussianBump(amplitude=1.0, width=1.0), 0.37),
            (EckartBarrier(height=1.0, width=1.0), 0.62),
            (HarmonicWell(stiffness=2.0), 1.3),
        ]:
            problem = problem_for(model, e)
            tp = find_turning_points(problem)
            for root in (tp.a, tp.b):
                if root is not None:
                    assert abs(problem.v(root) - e) <= 1e-10 * max(1.0, abs(e))

    def test_even_bump_symmetry(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            center = rng.uniform(-2.0, 2.0)
            width = rng.uniform(0.5, 2.0)
            e = rng.uniform(0.2, 0.8)
            problem = problem_for(
                GaussianBump(amplitude=1.0, width=width, center=center),
                e,
                (center - 10, center + 10),
            )
            tp = find_turning_points(problem)
            assert tp.count == 2
            assert abs((tp.a - center) + (tp.b - center)) <= 1e-10

    def test_multi_well_rejected(self):
        xs = np.linspace(-2.0, 2.0, 401)
        double_well = TabulatedPotential(xs, (xs**2 - 1.0) ** 2)
        with pytest.raises(MultiWellError):
            find_turning_points(problem_for(double_well, 0.5, (-2.0, 2.0)))


class TestLocalWavenumber:
    def test_free(self):
        problem = problem_for(LinearRamp(offset=0.0, slope=0.0), 0.5)
        assert local_wavenumber(problem, 0.0) == pytest.approx(1.0)

    def test_forbidden(self):
        problem = problem_for(SquareBarrier(height=1.0, width=2.0), 0.5, (-8, 8))
        k = local_wavenumber(problem, 0.0)
        assert k.real == 0.0
        assert k.imag == pytest.approx(1.0)

    def test_turning_point(self):
        problem = problem_for(HarmonicWell(stiffness=1.0), 0.5)
        assert local_wavenumber(problem, 1.0) == 0.0

    def test_square_identity(self):
        rng = np.random.default_rng(3)
        ctx = PhysicalContext(mass=1.7, hbar=0.6)
        for model in SMOOTH_MODELS:
            for _ in range(20):
                x = rng.uniform(-3.0, 3.0)
                e = rng.uniform(-1.0, 3.0)
                problem = ScatteringProblem(
                    potential=model, energy=e, domain=(-10, 10), context=ctx
                )
                k = local_wavenumber(problem, x)
                expected = 2.0 * ctx.mass * (e - model.value(x)) / ctx.hbar**2
                assert k * k == pytest.approx(expected, rel=1e-13, abs=1e-13)


class TestExclusionRadius:
    def test_airy_length(self):
        problem = problem_for(HarmonicWell(stiffness=1.0), 0.5)
        # |V'| = 1 at the right turning point.
        assert exclusion_radius(problem, 1.0) == pytest.approx(0.5 ** (1.0 / 3.0))

    def test_jump_shrinks_zone(self):
        problem = problem_for(SquareBarrier(height=1.0, width=2.0), 0.5, (-8, 8))
        assert exclusion_radius(problem, 1.0) < 0.02

    def test_flat_is_infinite(self):
        problem = problem_for(LinearRamp(offset=0.0, slope=0.0), 0.5)
        assert exclusion_radius(problem, 0.0) == math.inf
