#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests de la tensorisation et du diagnostic sans dimension.
"""

import numpy as np
import pytest

from duality.best import best_alpha
from duality.family import lipschitz_ball
from measures.errors import BudgetExceededError, DomainError
from measures.finite_space import FiniteSpace, ProbMeasure, dirac
from ratefn.calculus import scale
from ratefn.functions import Quadratic
from reports.report_types import Verdict
from tensor.diagnostics import dimension_free_diagnostic
from tensor.tensorization import (
    marginal_consistency_check, tensorize_alpha, tensorize_many, tensorize_n, verify_product_tci
)
from tests.helpers import random_measure, random_metric
from transport.cost import hamming, line_metric


def factor(weights, cost):
    mu = ProbMeasure.from_weights(weights)
    return mu, best_alpha(lipschitz_ball(cost, mu), mu)


class TestTensorizedFunctions:
    def test_tensorize_n(self):
        alpha = Quadratic(1.0)
        assert tensorize_n(alpha, 1) is alpha
        assert tensorize_n(alpha, 3)(3.0) == pytest.approx(3.0)
        with pytest.raises(DomainError):
            tensorize_n(alpha, 0)

    def test_tensorize_many_matches_n_fold(self):
        alpha = Quadratic(2.0)
        t = np.linspace(0.0, 4.0, 9)
        assert np.allclose(tensorize_many([alpha] * 3)(t), tensorize_n(alpha, 3)(t))

    def test_tensorize_alpha_is_below_factors(self):
        a1, a2 = Quadratic(1.0), Quadratic(3.0)
        t = np.linspace(0.0, 2.0, 11)
        conv = tensorize_alpha(a1, a2)(t)
        assert np.all(conv <= a1(t) + 1e-12)
        assert np.all(conv <= a2(t) + 1e-12)


class TestProductSweep:
    @pytest.mark.slow
    def test_hamming_squares(self, hamming2):
        mu1, alpha1 = factor([0.5, 0.5], hamming2)
        mu2, alpha2 = factor([0.5, 0.5], hamming2)
        report = verify_product_tci(mu1, mu2, hamming2, hamming2, alpha1, alpha2)
        assert report.grid_points >= 10 ** 6
        assert report.holds and report.verdict is Verdict.PASS
        assert report.factor_holds == [True, True]

    @pytest.mark.slow
    def test_inflated_alpha_is_falsified(self, hamming2):
        mu1, alpha1 = factor([0.5, 0.5], hamming2)
        mu2, alpha2 = factor([0.5, 0.5], hamming2)
        report = verify_product_tci(mu1, mu2, hamming2, hamming2, scale(alpha1, 2.0), scale(alpha2, 2.0),
                                    check_factors=False)
        assert report.verdict is Verdict.FAIL
        assert report.witness_nu is not None
        assert report.witness_transport > 0.0

    def test_mixed_factors_on_coarse_grid(self):
        d1, d2 = hamming(2), line_metric(2)
        mu1, alpha1 = factor([0.3, 0.7], d1)
        mu2, alpha2 = factor([0.6, 0.4], d2)
        report = verify_product_tci(mu1, mu2, d1, d2, alpha1, alpha2, h=0.05)
        assert report.holds
        assert report.grid_points == 1771

    def test_product_budget(self, hamming2):
        mu1, alpha1 = factor([0.5, 0.5], hamming2)
        mu3 = ProbMeasure.from_weights([0.2, 0.3, 0.5])
        with pytest.raises(BudgetExceededError):
            verify_product_tci(mu1, mu3, hamming2, line_metric(3), alpha1, alpha1)

    def test_marginal_consistency(self, rng):
        for _ in range(20):
            n1, n2 = int(rng.integers(2, 4)), int(rng.integers(2, 4))
            c1, c2 = random_metric(rng, n1), random_metric(rng, n2)
            report = marginal_consistency_check(random_measure(rng, n1), random_measure(rng, n2),
                                                random_measure(rng, n1), random_measure(rng, n2), c1, c2)
            assert report.verdict is Verdict.PASS
            assert report.values["product"] <= report.values["sum_of_factors"] + 1e-8


class TestDimensionFree:
    def test_non_dirac_slope_vanishes(self, hamming2, uniform2):
        report = dimension_free_diagnostic(uniform2, hamming2)
        assert report.slope_vanishes
        assert not report.alpha_zero
        assert not report.is_dirac

    def test_dirac(self, hamming2):
        report = dimension_free_diagnostic(dirac(FiniteSpace(2), 0), hamming2)
        assert report.is_dirac
        assert report.verdict is Verdict.PASS
        # best_alpha n'a pas de sens sur une masse de Dirac: non évaluée
        assert report.alpha_zero is None
        assert report.slope_vanishes
