#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests du calcul dans la classe C.
"""

import math

import numpy as np
import pytest

from measures.errors import ConfigError, DomainError, NotInClassError
from ratefn.calculus import (
    convex_regularization, generalized_inverse, inf_convolution, inf_convolution_many,
    monotone_conjugate, pointwise_max, rescale, scale, sup_value
)
from ratefn.functions import (
    Bernstein, Linear, MaxOf, MinOf, Quadratic, Sampled, ShiftedFloor, SqrtForm, StepFunction,
    Threshold, pinsker, zero
)
from ratefn.legendre import lower_hull
from ratefn.spec import rate_from_spec, rate_to_spec

SUP_TOL = 1e-6


def random_sampled(rng: np.random.Generator, knots: int = 6) -> Sampled:
    """Fonction convexe affine par morceaux aléatoire, nulle en 0, prolongée affinement"""
    t = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 1.0, size=knots))])
    slopes = np.cumsum(rng.uniform(0.05, 1.0, size=knots))
    v = np.concatenate([[0.0], np.cumsum(slopes * np.diff(t))])
    return Sampled(t, v, slopes[-1] + rng.uniform(0.05, 1.0))


def brute_inf_convolution(a1: Sampled, a2: Sampled, t: float) -> float:
    """Minimum exact sur les découpages t1 + t2 = t (atteint aux points de rupture)"""
    candidates = np.concatenate([[0.0, t], a1.t, t - a2.t])
    candidates = np.clip(candidates, 0.0, t)
    return float((a1(candidates) + a2(t - candidates)).min())


class TestClosedForms:
    def test_values(self):
        assert pinsker()(2.0) == pytest.approx(2.0)
        assert SqrtForm(1.0)(3.0) == pytest.approx(1.0)
        assert Bernstein(1.0)(0.5) == pytest.approx(0.5)
        assert math.isinf(Bernstein(1.0)(1.0))
        assert Threshold(1.0)(1.0) == 0.0
        assert math.isinf(Threshold(1.0)(1.5))

    def test_array_shapes_are_preserved(self):
        t = np.linspace(0.0, 1.0, 6).reshape(2, 3)
        assert Quadratic(1.0)(t).shape == (2, 3)
        assert isinstance(Quadratic(1.0)(0.5), float)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            Quadratic(1.0)(-1.0)
        with pytest.raises(NotInClassError):
            Quadratic(0.0)
        with pytest.raises(NotInClassError):
            Sampled([0.0, 1.0, 2.0], [0.0, 1.0, 1.5])

    def test_conjugate_pairs(self):
        assert monotone_conjugate(Quadratic(2.0)) == Quadratic(1.0 / 8.0)
        assert monotone_conjugate(SqrtForm(3.0)) == Bernstein(3.0)
        assert monotone_conjugate(Bernstein(3.0)) == SqrtForm(3.0)
        assert monotone_conjugate(Linear(2.0)) == Threshold(2.0)
        assert monotone_conjugate(Threshold(2.0)) == Linear(2.0)

    def test_numeric_conjugate_matches_closed_form(self):
        numeric = SqrtForm(1.0).discretize(t_max=200.0, points=20001).conjugate()
        s = np.linspace(0.0, 0.8, 41)
        assert np.max(np.abs(numeric(s) - Bernstein(1.0)(s))) < 1e-4

    def test_sqrt_form_has_no_cancellation(self):
        assert SqrtForm(1.0)(1e-12) == pytest.approx(0.25e-24, rel=1e-6)

    def test_inverses(self):
        for alpha in (Quadratic(0.5), SqrtForm(2.0), Bernstein(2.0), Linear(3.0)):
            for y in (0.1, 1.0, 4.0):
                t = generalized_inverse(alpha, y)
                assert alpha(t) == pytest.approx(y, rel=1e-8)
        with pytest.raises(DomainError):
            generalized_inverse(zero(), 1.0)


class TestConjugateInvolution:
    def test_closed_forms(self):
        for alpha in (Quadratic(0.7), SqrtForm(1.5), Bernstein(0.5), Linear(2.0), Threshold(1.0)):
            twice = monotone_conjugate(monotone_conjugate(alpha))
            t = np.linspace(0.0, 5.0, 51)
            assert np.allclose(twice(t), alpha(t), rtol=1e-12, atol=0.0)

    def test_random_sampled(self, rng):
        for _ in range(50):
            alpha = random_sampled(rng)
            twice = alpha.conjugate().conjugate()
            t = np.linspace(0.0, 2.0 * alpha.t[-1], 400)
            assert np.max(np.abs(twice(t) - alpha(t))) <= SUP_TOL

    def test_shifted_conjugate(self):
        alpha = ShiftedFloor(Quadratic(1.0), 2.0, 0.5)
        # 2 (t/2)^2 = t^2 / 2
        assert alpha.conjugate()(1.0) == pytest.approx(pinsker().conjugate()(1.0))


class TestInfConvolution:
    def test_closed_forms(self):
        assert inf_convolution(Quadratic(1.0), Quadratic(1.0)) == Quadratic(0.5)
        assert inf_convolution(Linear(1.0), Linear(2.0)) == Linear(1.0)
        assert inf_convolution(Threshold(1.0), Threshold(2.0)) == Threshold(3.0)
        assert inf_convolution(zero(), SqrtForm(1.0)) == zero()

    def test_self_convolution_rescales(self):
        alpha = SqrtForm(1.0)
        doubled = inf_convolution(alpha, alpha)
        assert doubled(3.0) == pytest.approx(2.0 * alpha(1.5))

    def test_random_sampled_against_brute_force(self, rng):
        for _ in range(50):
            a1, a2 = random_sampled(rng), random_sampled(rng)
            conv = inf_convolution(a1, a2)
            for t in np.linspace(0.0, a1.t[-1] + a2.t[-1] + 1.0, 25):
                assert conv(t) == pytest.approx(brute_inf_convolution(a1, a2, t), abs=SUP_TOL)

    def test_conjugate_of_convolution_is_sum(self, rng):
        for _ in range(50):
            a1, a2 = random_sampled(rng), random_sampled(rng)
            conv = inf_convolution(a1, a2)
            end = min(a1.right_slope, a2.right_slope)
            s = np.linspace(0.0, end, 200)
            assert np.max(np.abs(conv.conjugate()(s) - (a1.conjugate()(s) + a2.conjugate()(s)))) <= SUP_TOL

    def test_many(self):
        alphas = [Quadratic(1.0), Quadratic(2.0), Quadratic(2.0)]
        # 1 / (1 + 1/2 + 1/2)
        assert inf_convolution_many(alphas)(1.0) == pytest.approx(0.5)


class TestCalculus:
    def test_rescale_and_scale(self):
        assert rescale(Quadratic(1.0), 2.0, 3.0) == Quadratic(18.0)
        assert scale(Linear(1.0), 3.0) == Linear(3.0)
        assert rescale(SqrtForm(1.0), 2.0, 0.5)(1.0) == pytest.approx(2.0 * SqrtForm(1.0)(0.5))
        with pytest.raises(DomainError):
            rescale(Quadratic(1.0), -1.0, 1.0)

    def test_pointwise_max(self):
        alpha = pointwise_max(Quadratic(1.0), Linear(1.0))
        assert isinstance(alpha, MaxOf)
        assert alpha(0.5) == pytest.approx(0.5)
        assert alpha(2.0) == pytest.approx(4.0)
        assert pointwise_max(Quadratic(1.0), zero()) == Quadratic(1.0)

    def test_sup_value(self):
        assert sup_value(zero()) == 0.0
        assert math.isinf(sup_value(Quadratic(1.0)))
        assert sup_value(ShiftedFloor(Sampled([0.0, 1.0], [0.0, 1.0], 1.0), 1.0, 1.0, 0.5)) == math.inf

    def test_shifted_floor(self):
        alpha = ShiftedFloor(Quadratic(1.0), 2.0, 0.5, 1.0)
        assert alpha(1.0) == 0.0
        assert alpha(4.0) == pytest.approx(7.0)
        assert generalized_inverse(alpha, 7.0) == pytest.approx(4.0)

    def test_regularization_of_steps(self):
        step = StepFunction([1.0, 2.0], [0.0, 3.0])
        hull = convex_regularization(step)
        assert hull(1.0) == pytest.approx(0.0)
        assert hull(2.0) == pytest.approx(3.0)
        assert hull(1.5) == pytest.approx(1.5)
        assert math.isinf(hull(2.5))

    def test_regularization_keeps_convex_functions(self):
        alpha = SqrtForm(1.0)
        assert convex_regularization(alpha) is alpha

    def test_regularization_of_minimum(self):
        f = MinOf([Quadratic(1.0), ShiftedFloor(Linear(1.0), 1.0, 1.0, 0.0)])
        hull = convex_regularization(f, t_max=4.0, points=401)
        t = np.linspace(0.0, 4.0, 41)
        assert np.all(hull(t) <= f(t) + 1e-12)

    def test_lower_hull(self):
        t = np.array([0.0, 1.0, 2.0, 3.0])
        v = np.array([0.0, 2.0, 1.0, 3.0])
        assert lower_hull(t, v).tolist() == [0, 2, 3]


class TestSpec:
    def test_nested_spec(self):
        spec = {"form": "max", "of": [{"form": "sqrt", "M": 2.0},
                                      {"form": "shifted", "base": {"form": "quadratic", "a": 1.0},
                                       "outer": 2.0, "inner": 0.5, "shift": 0.1}]}
        alpha = rate_from_spec(spec)
        assert rate_to_spec(alpha) == spec

    def test_invalid_spec_names_the_field(self):
        with pytest.raises(ConfigError) as info:
            rate_from_spec({"form": "max", "of": [{"form": "sqrt"}]})
        assert info.value.field == "alpha.of[0].M"
        with pytest.raises(ConfigError):
            rate_from_spec({"form": "cubic"})
