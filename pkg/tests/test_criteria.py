#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests des critères intégraux: normes d'Orlicz, constructeurs, conditions nécessaires.
"""

import math

import numpy as np
import pytest

from config.settings import get_settings
from criteria.checks import centered_lipschitz_orlicz_check, cramer_moment_check, necessity_check
from criteria.constructors import (
    alpha_chi_envelope, alpha_dp, alpha_lipschitz_orlicz, alpha_moment, alpha_orlicz_nei,
    alpha_small_t, alpha_t1_integral, alpha_weighted_ckp, comparison_gap, density_deviation, tv_entropy_bound
)
import criteria.orlicz
from criteria.orlicz import bernstein_bound_check, orlicz_dual_norm, orlicz_norm, orlicz_norm_pair
from duality.best import best_alpha
from duality.checks import bg_check
from duality.family import chi_ball, lipschitz_ball
from measures.entropy import entropy_batch, tv_norm
from measures.errors import DimensionMismatchError, DomainError, SolverError
from measures.finite_space import FiniteSpace, ProbMeasure, dirac
from ratefn.functions import Quadratic, SqrtForm, Threshold
from reports.report_types import Verdict
from tests.helpers import random_measure, random_metric
from transport.cost import hamming, line_metric

LOG2 = math.log(2.0)


def dual_norm_grid_oracle(f: np.ndarray, w: np.ndarray, points: int = 1501) -> float:
    """Maximum de sum mu f phi sur une grille dense du bord {sum mu e^{|phi|} = 2}"""
    a = np.abs(f)
    n = a.shape[0]
    tops = np.log((2.0 - (1.0 - w)) / w)
    axes = [np.linspace(0.0, tops[i], points) for i in range(n - 1)]
    mesh = np.meshgrid(*axes, indexing="ij")
    x = np.stack([m.ravel() for m in mesh], axis=1)
    rest = 2.0 - np.exp(x) @ w[:-1]
    ok = rest >= w[-1]
    last = np.log(rest[ok] / w[-1])
    values = x[ok] @ (w[:-1] * a[:-1]) + w[-1] * a[-1] * last
    return float(values.max())


class TestOrliczNorm:
    def test_constant_function(self, uniform2):
        assert orlicz_norm([1.0, 1.0], uniform2).value == pytest.approx(1.0 / LOG2)
        assert orlicz_norm([0.0, 0.0], uniform2).value == 0.0

    def test_certificate_is_two(self, rng):
        for _ in range(20):
            mu = random_measure(rng, 4)
            estimate = orlicz_norm(rng.normal(size=4), mu)
            assert estimate.certificate == pytest.approx(2.0, rel=1e-9)

    def test_homogeneity_and_triangle_inequality(self, rng):
        for _ in range(50):
            mu = random_measure(rng, 5)
            f, g = rng.normal(size=5), rng.normal(size=5)
            nf, ng = orlicz_norm(f, mu).value, orlicz_norm(g, mu).value
            assert orlicz_norm(3.0 * f, mu).value == pytest.approx(3.0 * nf, rel=1e-9)
            assert orlicz_norm(f + g, mu).value <= nf + ng + 1e-9

    def test_pair_norm_on_two_points(self, hamming2, uniform2):
        # (1 + e^{1/b}) / 2 = 2
        assert orlicz_norm_pair(hamming2, uniform2).value == pytest.approx(1.0 / math.log(3.0))

    def test_dimension_mismatch(self, uniform2):
        with pytest.raises(DimensionMismatchError):
            orlicz_norm([1.0, 2.0, 3.0], uniform2)

    def test_bernstein_bound(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 6))
            assert bernstein_bound_check(rng.normal(size=n), random_measure(rng, n))


class TestDualNorm:
    def test_zero_function(self, uniform2):
        assert orlicz_dual_norm([0.0, 0.0], uniform2) == 0.0

    @pytest.mark.parametrize("n", [2, 3])
    def test_matches_grid_oracle(self, rng, n):
        for _ in range(10):
            mu = random_measure(rng, n)
            f = rng.normal(size=n)
            value = orlicz_dual_norm(f, mu, cross_check=True)
            oracle = dual_norm_grid_oracle(f, mu.w)
            assert oracle <= value + 1e-9
            assert value - oracle <= 2e-3 * max(1.0, value)

    def test_cross_check_rejects_a_better_feasible_point(self, uniform2, monkeypatch):
        f = [1.0, -2.0]
        value = orlicz_dual_norm(f, uniform2)
        monkeypatch.setattr(criteria.orlicz, "_dual_norm_slsqp", lambda a, w, x: (value + 1.0, True))
        with pytest.raises(SolverError):
            orlicz_dual_norm(f, uniform2, cross_check=True)
        # un SLSQP en retard ou hors contrainte est seulement journalisé
        monkeypatch.setattr(criteria.orlicz, "_dual_norm_slsqp", lambda a, w, x: (0.5 * value, True))
        assert orlicz_dual_norm(f, uniform2, cross_check=True) == pytest.approx(value)
        monkeypatch.setattr(criteria.orlicz, "_dual_norm_slsqp", lambda a, w, x: (value + 1.0, False))
        assert orlicz_dual_norm(f, uniform2, cross_check=True) == pytest.approx(value)

    def test_dual_pairing(self, rng):
        for _ in range(50):
            mu = random_measure(rng, 4)
            f, phi = rng.normal(size=4), rng.normal(size=4)
            lhs = abs(float(np.dot(mu.w, f * phi)))
            assert lhs <= orlicz_dual_norm(f, mu) * orlicz_norm(phi, mu).value * (1.0 + 1e-9) + 1e-12


class TestIntegralInequalities:
    @pytest.mark.slow
    def test_weighted_ckp_and_orlicz_nei(self, rng):
        violations = 0
        for _ in range(1000):
            n = int(rng.integers(2, 6))
            mu = random_measure(rng, n)
            chi = rng.uniform(0.0, 2.0, size=n)
            chi[0] = max(chi[0], 0.1)
            ckp = alpha_weighted_ckp(chi, mu)
            nei = alpha_orlicz_nei(mu)
            nus = rng.dirichlet(np.ones(n), size=100)
            H = entropy_batch(nus, mu)
            T = np.abs(nus - mu.w[None, :]) @ chi
            violations += int(np.sum(ckp(T) > H + 1e-12))
            for k in range(nus.shape[0]):
                deviation = density_deviation(ProbMeasure.from_weights(nus[k]), mu)
                violations += int(nei(orlicz_dual_norm(deviation, mu)) > H[k] + 1e-9)
        assert violations == 0

    def test_weighted_ckp_passes_dual_criterion(self, rng):
        for _ in range(10):
            mu = random_measure(rng, 3)
            chi = rng.uniform(0.1, 2.0, size=3)
            assert bg_check(alpha_weighted_ckp(chi, mu), chi_ball(chi), mu).verdict is Verdict.PASS

    def test_lipschitz_orlicz_passes_dual_criterion(self, rng):
        for _ in range(10):
            d = random_metric(rng, 3)
            mu = random_measure(rng, 3)
            alpha = alpha_lipschitz_orlicz(d, mu)
            assert isinstance(alpha, SqrtForm)
            assert bg_check(alpha, lipschitz_ball(d, mu), mu).verdict is Verdict.PASS

    def test_lipschitz_orlicz_on_dirac(self, hamming2):
        alpha = alpha_lipschitz_orlicz(hamming2, dirac(FiniteSpace(2), 1))
        assert alpha(5.0) == 0.0

    def test_centered_norms(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 5))
            report = centered_lipschitz_orlicz_check(random_metric(rng, n), random_measure(rng, n))
            assert report.verdict is Verdict.PASS

    def test_tv_entropy_bound(self, rng):
        mu = random_measure(rng, 4)
        for w in rng.dirichlet(np.ones(4), size=200):
            nu = ProbMeasure.from_weights(w)
            assert tv_norm(nu, mu) <= tv_entropy_bound(nu, mu) + 1e-12

    def test_comparison_gap(self):
        u = np.linspace(0.0, 50.0, 501)
        assert np.all(comparison_gap(u) >= -1e-15)
        assert comparison_gap(0.0) == 0.0
        with pytest.raises(DomainError):
            comparison_gap(-1.0)


class TestCramerMoments:
    @pytest.mark.slow
    def test_random_variables(self, rng):
        violations = 0
        for _ in range(1000):
            n = int(rng.integers(2, 7))
            mu = random_measure(rng, n)
            z = rng.normal(scale=rng.uniform(0.1, 5.0), size=n)
            for delta in get_settings().deltas:
                violations += int(not cramer_moment_check(z, mu, delta))
        assert violations == 0

    def test_delta_range(self, uniform2):
        with pytest.raises(DomainError):
            cramer_moment_check([0.0, 1.0], uniform2, 1.0)

    def test_necessity_with_best_alpha(self, hamming2):
        mu = ProbMeasure.from_weights([0.3, 0.7])
        family = lipschitz_ball(hamming2, mu)
        report = necessity_check(best_alpha(family, mu), hamming2, 1.0, mu, 1.0, family=family)
        assert report.companion_holds
        assert len(report.integrals) == 2
        assert all(np.isfinite(report.integrals))

    def test_necessity_flags_inflated_alpha(self, hamming2):
        mu = ProbMeasure.from_weights([0.3, 0.7])
        report = necessity_check(Quadratic(1000.0), hamming2, 1.0, mu, 0.5)
        assert not report.companion_holds
        assert report.verdict is Verdict.FAIL

    def test_necessity_arguments(self, hamming2, uniform2):
        with pytest.raises(DomainError):
            necessity_check(Quadratic(1.0), hamming2, 1.0, uniform2, 2.0)
        with pytest.raises(DomainError):
            necessity_check(Quadratic(1.0), hamming2, 0.5, uniform2, 1.0)


class TestConstructors:
    def test_weighted_ckp_errors(self, uniform2):
        with pytest.raises(DomainError):
            alpha_weighted_ckp([0.0, 0.0], uniform2)
        with pytest.raises(DimensionMismatchError):
            alpha_weighted_ckp([1.0, 1.0, 1.0], uniform2)
        with pytest.raises(DomainError):
            alpha_weighted_ckp([-1.0, 1.0], uniform2)

    def test_weighted_ckp_constant(self, uniform2):
        alpha = alpha_weighted_ckp([1.0, 1.0], uniform2)
        assert alpha.M == pytest.approx(1.0 / LOG2)

    def test_small_t_matches_weighted_ckp(self, rng):
        mu = random_measure(rng, 4)
        chi = rng.uniform(0.1, 2.0, size=4)
        assert alpha_small_t(chi, mu).M == pytest.approx(alpha_weighted_ckp(chi, mu).M)

    def test_t1_integral(self, line3):
        mu = ProbMeasure.from_weights([0.2, 0.3, 0.5])
        alpha = alpha_t1_integral(line3, mu, 0.1, Quadratic(1.0), 0)
        assert alpha(0.0) == 0.0
        assert alpha(1.0) >= SqrtForm(10.0)(1.0) - 1e-12
        with pytest.raises(DomainError):
            alpha_t1_integral(line3, mu, 50.0, Quadratic(1.0), 0)
        with pytest.raises(DomainError):
            alpha_t1_integral(line3, mu, -1.0, Quadratic(1.0), 0)

    def test_dp(self, line3):
        mu = ProbMeasure.from_weights([0.2, 0.3, 0.5])
        alpha = alpha_dp(line3, 2.0, mu, Quadratic(0.1), 1)
        assert alpha(0.0) == 0.0
        assert alpha(100.0) > 0.0
        with pytest.raises(DomainError):
            alpha_dp(line3, 0.5, mu, Quadratic(0.1), 1)

    def test_chi_envelope(self):
        mu = ProbMeasure.from_weights([0.5, 0.5])
        alpha = alpha_chi_envelope([1.0, 2.0], mu, Quadratic(0.1), 0)
        assert alpha(0.0) == 0.0
        assert np.all(np.diff(alpha(np.linspace(0.0, 50.0, 51))) >= 0.0)

    def test_moment_with_bounded_cost(self):
        mu = ProbMeasure.from_weights([0.25, 0.25, 0.5])
        cost = line_metric(3)
        alpha = alpha_moment(cost, mu, Threshold(2.0))
        assert alpha(2.0) == 0.0
        assert math.isinf(alpha(2.5))
        with pytest.raises(DimensionMismatchError):
            alpha_moment(hamming(2), mu, Threshold(2.0))

    def test_density_deviation(self):
        mu = ProbMeasure.from_weights([0.5, 0.5, 0.0])
        nu = ProbMeasure.from_weights([0.25, 0.75, 0.0])
        assert density_deviation(nu, mu).tolist() == pytest.approx([-0.5, 0.5, 0.0])
        with pytest.raises(DomainError):
            density_deviation(ProbMeasure.from_weights([0.0, 0.0, 1.0]), mu)
