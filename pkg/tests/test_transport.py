#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests des coûts, du transport optimal et de ses duaux.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from measures.errors import (
    BudgetExceededError, DimensionMismatchError, DomainError, InvalidCostError
)
from measures.entropy import weighted_tv
from measures.finite_space import FiniteSpace, ProbMeasure, uniform
from tests.helpers import random_cost, random_measure, random_metric
from transport.cost import (
    CostKind, CostMatrix, chi_metric, euclidean_metric, hamming, line_metric, power_cost,
    scaled_cost, tensor_cost
)
from transport.exact import solve_ot_exact
from transport.solver import c_transform, chi_tv_identity_check, kr_dual_norm, solve_dual, solve_ot
from transport.vertices import dual_vertices, lipschitz_vertices, transport_values

DUALITY_TOL = 1e-8


class TestCostMatrix:
    def test_metric_validation(self):
        with pytest.raises(InvalidCostError):
            CostMatrix([[0.0, 1.0], [2.0, 0.0]], CostKind.METRIC)
        with pytest.raises(InvalidCostError):
            CostMatrix([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]], CostKind.METRIC)
        with pytest.raises(InvalidCostError):
            CostMatrix([[1.0, 1.0], [1.0, 0.0]])
        with pytest.raises(InvalidCostError):
            CostMatrix([[0.0, -1.0], [1.0, 0.0]])

    def test_constructors(self):
        assert hamming(3).is_metric
        assert line_metric(4).diameter == 3.0
        assert not power_cost(line_metric(3), 2.0).is_metric
        assert power_cost(line_metric(3), 2.0).C[0, 2] == 4.0
        assert scaled_cost(hamming(2), 3.0).diameter == 3.0
        with pytest.raises(DomainError):
            power_cost(line_metric(3), 0.5)

    def test_euclidean_requires_coords(self):
        space = FiniteSpace(3, coords=[[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]])
        assert euclidean_metric(space).C[0, 1] == pytest.approx(5.0)
        with pytest.raises(InvalidCostError):
            euclidean_metric(FiniteSpace(3))

    def test_chi_metric_kind(self):
        assert chi_metric([1.0, 0.0, 2.0]).is_metric
        assert not chi_metric([0.0, 0.0, 2.0]).is_metric

    def test_tensor_cost(self):
        c = tensor_cost(hamming(2), line_metric(3))
        assert c.shape == (6, 6)
        # (0, 0) -> (1, 2): 1 + 2
        assert c.C[0, 5] == 3.0
        assert c.source.is_product


class TestSolver:
    def test_identical_measures_cost_nothing(self, uniform2, hamming2):
        assert solve_ot(uniform2, uniform2, hamming2).value == pytest.approx(0.0, abs=1e-12)

    def test_two_point_hamming(self, hamming2):
        mu = ProbMeasure.from_weights([0.5, 0.5])
        nu = ProbMeasure.from_weights([0.8, 0.2])
        result = solve_ot(mu, nu, hamming2)
        assert result.value == pytest.approx(0.3)
        assert result.plan.marginal_residual(mu, nu) < 1e-9

    def test_dimension_mismatch(self, hamming2):
        with pytest.raises(DimensionMismatchError):
            solve_ot(uniform(FiniteSpace(3)), uniform(FiniteSpace(3)), hamming2)

    def test_kantorovich_duality_on_random_instances(self, rng):
        start = time.perf_counter()
        for _ in range(100):
            n, m = rng.integers(1, 9, size=2)
            cost = random_cost(rng, int(n), int(m))
            mu = random_measure(rng, int(n), positive=False)
            nu = random_measure(rng, int(m), positive=False)
            primal = solve_ot(mu, nu, cost).value
            dual = solve_dual(mu, nu, cost)
            assert abs(primal - dual.value) <= DUALITY_TOL
            assert dual.max_violation(cost) <= 1e-8
        assert time.perf_counter() - start < 10.0

    def test_exact_oracle_agreement(self, rng):
        for _ in range(30):
            n, m = rng.integers(1, 6, size=2)
            a = rng.integers(1, 10, size=n)
            b = rng.integers(1, 10, size=m)
            C = rng.integers(0, 10, size=(n, m)).astype(float)
            if n == m:
                np.fill_diagonal(C, 0.0)
            mu_w = [Fraction(int(x), int(a.sum())) for x in a]
            nu_w = [Fraction(int(x), int(b.sum())) for x in b]
            exact, plan = solve_ot_exact(mu_w, nu_w, C.tolist())
            mu = ProbMeasure.from_weights(a / a.sum())
            nu = ProbMeasure.from_weights(b / b.sum())
            assert solve_ot(mu, nu, CostMatrix(C)).value == pytest.approx(float(exact), abs=DUALITY_TOL)
            assert [sum(row) for row in plan] == mu_w

    def test_exact_oracle_budget(self):
        with pytest.raises(BudgetExceededError):
            solve_ot_exact([1 / 6] * 6, [1 / 6] * 6, np.zeros((6, 6)).tolist())

    def test_kantorovich_rubinstein(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 7))
            d = random_metric(rng, n)
            mu = random_measure(rng, n, positive=False)
            nu = random_measure(rng, n, positive=False)
            assert kr_dual_norm(nu, mu, d) == pytest.approx(solve_ot(mu, nu, d).value, abs=DUALITY_TOL)

    def test_chi_identity(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 6))
            chi = rng.uniform(0.0, 2.0, size=n)
            mu = random_measure(rng, n, positive=False)
            nu = random_measure(rng, n, positive=False)
            value = solve_ot(mu, nu, chi_metric(chi)).value
            assert abs(value - weighted_tv(nu, mu, chi)) <= DUALITY_TOL
        assert chi_tv_identity_check(ProbMeasure.from_weights([0.2, 0.8]),
                                     ProbMeasure.from_weights([0.6, 0.4]), [1.0, 2.0])

    def test_c_transform(self):
        cost = line_metric(3)
        assert c_transform(np.array([0.0, 5.0, 0.5]), cost).tolist() == [0.0, 1.0, 0.5]


class TestVertices:
    def test_lipschitz_vertices_of_hamming(self, hamming2):
        vertices = lipschitz_vertices(hamming2)
        assert sorted(vertices[:, 1].tolist()) == [-1.0, 1.0]
        assert np.all(vertices[:, 0] == 0.0)

    def test_vertex_budget(self):
        with pytest.raises(BudgetExceededError):
            lipschitz_vertices(hamming(6))
        with pytest.raises(BudgetExceededError):
            dual_vertices(CostMatrix(np.ones((5, 2))))

    def test_dual_vertices_are_feasible(self, rng):
        cost = random_cost(rng, 3, 3)
        psis, phis = dual_vertices(cost)
        assert np.all(psis[:, 0] == 0.0)
        assert (psis[:, :, None] + phis[:, None, :] - cost.C[None]).max() <= 1e-9

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_transport_values_match_lp(self, rng, n):
        d = random_metric(rng, n)
        mu = random_measure(rng, n)
        nus = rng.dirichlet(np.ones(n), size=25)
        values = transport_values(mu, nus, d, batch_size=7)
        for k in range(25):
            expected = solve_ot(mu, ProbMeasure.from_weights(nus[k]), d).value
            assert values[k] == pytest.approx(expected, abs=DUALITY_TOL)

    def test_transport_values_general_cost(self, rng):
        cost = random_cost(rng, 3, 3)
        mu = random_measure(rng, 3)
        nus = rng.dirichlet(np.ones(3), size=10)
        values = transport_values(mu, nus, cost)
        for k in range(10):
            assert values[k] == pytest.approx(solve_ot(mu, ProbMeasure.from_weights(nus[k]), cost).value,
                                              abs=DUALITY_TOL)

    def test_transport_values_large_space_uses_lp(self, rng):
        d = random_metric(rng, 6)
        mu = random_measure(rng, 6)
        nus = np.vstack([mu.w, rng.dirichlet(np.ones(6))])
        values = transport_values(mu, nus, d)
        assert values[0] == pytest.approx(0.0, abs=1e-9)
        assert values[1] == pytest.approx(solve_ot(mu, ProbMeasure.from_weights(nus[1]), d).value, abs=1e-9)
