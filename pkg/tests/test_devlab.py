#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests du laboratoire de déviations: flux Philox, queues Monte Carlo, Marton, processus empiriques.
"""

import numpy as np
import pytest

from criteria.constructors import alpha_lipschitz_orlicz
from devlab.concentration import (
    basic_lemma_check, concentration_consistency, concentration_function, enlargement, marton_bound_check
)
from devlab.deviation import deviation_tail, exceedances, member_deviation_tail, run_blocks, tail_cell
from devlab.empirical import banach_mean_deviation, empirical_process, yurinskii_exponent
from devlab.experiment import ExperimentConfig
from devlab.rng import RngStreams, sample_counts, sample_empirical
from duality.best import best_alpha
from duality.family import FamilyKind, PotentialFamily, lipschitz_ball
from measures.errors import BudgetExceededError, ConfigError, DomainError
from measures.finite_space import FiniteSpace, ProbMeasure, uniform
from ratefn.calculus import scale
from ratefn.functions import Quadratic
from reports.report_types import Verdict
from tests.helpers import random_measure, random_metric
from transport.cost import hamming, line_metric

DEVIATION_SIZES = [10, 50, 200]
DEVIATION_T = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5]


def distance_family(d):
    """Fonctions distance d(x_k, .), 1-lipschitziennes"""
    return PotentialFamily(FamilyKind.LIPSCHITZ_BALL, -d.C, d.C, False, d)


def certified_alpha(d, mu):
    if mu.n <= 4:
        return best_alpha(lipschitz_ball(d, mu), mu)
    return alpha_lipschitz_orlicz(d, mu)


class TestRngStreams:
    def test_streams_are_reproducible(self):
        first = RngStreams(7).generator(3).random(5)
        again = RngStreams(7).generator(3).random(5)
        assert np.array_equal(first, again)

    def test_streams_are_distinct(self):
        streams = RngStreams(7)
        base = streams.generator(0).random(5)
        assert not np.array_equal(base, streams.generator(1).random(5))
        assert not np.array_equal(base, streams.generator(0, purpose=RngStreams.EXPECTATION).random(5))
        assert not np.array_equal(base, streams.generator(0, series=1).random(5))
        assert not np.array_equal(base, RngStreams(8).generator(0).random(5))

    def test_negative_indices(self):
        with pytest.raises(DomainError):
            RngStreams(7).key(-1)

    def test_sample_counts(self):
        mu = ProbMeasure.from_weights([0.5, 0.0, 0.5])
        counts = sample_counts(mu, 20, 500, RngStreams(1).generator(0))
        assert counts.shape == (500, 3)
        assert np.all(counts.sum(axis=1) == 20)
        assert np.all(counts[:, 1] == 0)
        with pytest.raises(DomainError):
            sample_counts(mu, 0, 10, RngStreams(1).generator(0))

    def test_sample_empirical(self, uniform2):
        nu = sample_empirical(uniform2, 8, RngStreams(1).generator(0))
        assert nu.w.sum() == pytest.approx(1.0)
        assert np.all(np.isclose(nu.w * 8, np.round(nu.w * 8)))

    def test_blocks_do_not_depend_on_workers(self, uniform2):
        config = ExperimentConfig(seed=11, replicas=5000, block_size=700, sample_sizes=[5], t_grid=[0.1])
        sequential = run_blocks(config, uniform2, 5, config.replicas, lambda c: c.sum(axis=0))
        threaded = run_blocks(config, uniform2, 5, config.replicas, lambda c: c.sum(axis=0), workers=4)
        assert len(sequential) == 8
        assert all(np.array_equal(a, b) for a, b in zip(sequential, threaded))


class TestExperimentConfig:
    def test_defaults_and_overrides(self):
        config = ExperimentConfig(seed=3, replicas=100, sample_sizes=[10], t_grid=[0.1, 0.2])
        assert config.expectation_replicas == max(1, round(100 * config.expectation_fraction))
        other = config.with_overrides(seed=5)
        assert other.seed == 5 and other.replicas == 100
        assert ExperimentConfig.from_dict(config.to_dict()).to_dict() == config.to_dict()

    @pytest.mark.parametrize("data, field", [
        ({"replicas": 0}, "replicas"),
        ({"block_size": 0}, "block_size"),
        ({"sample_sizes": [0]}, "sample_sizes"),
        ({"t_grid": [0.2, 0.1]}, "t_grid"),
        ({"t_grid": [-0.1]}, "t_grid"),
        ({"expectation_fraction": 0.0}, "expectation_fraction"),
    ])
    def test_invalid_values(self, data, field):
        with pytest.raises(ConfigError) as info:
            ExperimentConfig.from_dict(data)
        assert info.value.field == field


class TestDeviationTail:
    def test_exceedances(self):
        values = np.array([0.1, 0.2, 0.3])
        assert exceedances(values, np.array([0.0, 0.2, 0.5])).tolist() == [3, 2, 0]

    def test_tail_cell_verdicts(self):
        assert tail_cell(10, 0.1, 0, 1000, Quadratic(1.0), 3.0).verdict is Verdict.PASS
        cell = tail_cell(10, 0.5, 900, 1000, Quadratic(1.0), 3.0)
        assert cell.verdict is Verdict.FAIL
        assert cell.bound == pytest.approx(np.exp(-2.5))
        assert tail_cell(10, 0.5, 20, 1000, Quadratic(1.0), 3.0, factor=3).bound == pytest.approx(3 * np.exp(-2.5))
        assert tail_cell(10, 0.0, 1000, 1000, Quadratic(1.0), 3.0, factor=2).bound == 1.0
        assert tail_cell(10, 0.5, 900, 1000, Quadratic(1.0), 3.0, judged=False).verdict is Verdict.INFO

    def test_doubled_alpha_is_falsified(self, hamming2, uniform2):
        alpha = scale(best_alpha(lipschitz_ball(hamming2, uniform2), uniform2), 2.0)
        config = ExperimentConfig(seed=5, replicas=20000, sample_sizes=[50], t_grid=[0.2])
        report = deviation_tail(config, uniform2, alpha, hamming2)
        assert report.verdict is Verdict.FAIL
        assert report.failures

    def test_saturating_threshold_uses_union_bound(self, hamming2, uniform2):
        # T(mu, L_10) = |k/10 - 1/2| vaut 1/2 avec probabilité 2/1024, deux fois exp(-10 log 2)
        alpha = best_alpha(lipschitz_ball(hamming2, uniform2), uniform2)
        config = ExperimentConfig(seed=5, replicas=20000, sample_sizes=[10], t_grid=[0.4, 0.5])
        report = deviation_tail(config, uniform2, alpha, hamming2)
        assert report.metadata["union_factor"] == 2
        cell = report.cells[-1]
        assert cell.t == 0.5
        assert cell.bound == pytest.approx(2.0 / 1024.0, rel=5e-3)
        assert cell.p_hat > 0.0
        assert report.verdict is Verdict.PASS

    def test_inexact_family_defers_to_members(self, uniform2):
        d = line_metric(FiniteSpace(2))
        family = distance_family(d)
        alpha = best_alpha(lipschitz_ball(d, uniform2), uniform2)
        config = ExperimentConfig(seed=8, replicas=5000, sample_sizes=[10], t_grid=[0.1, 0.5])
        report = deviation_tail(config, uniform2, alpha, d, family=family)
        # la famille fournie n'est pas exacte: la boule de Lipschitz exacte la remplace
        assert report.metadata["union_factor"] == 2
        assert all(cell.verdict is not Verdict.INFO for cell in report.cells)
        assert report.verdict is Verdict.PASS

    def test_members_are_checked(self, hamming2, uniform2):
        family = lipschitz_ball(hamming2, uniform2)
        alpha = best_alpha(family, uniform2)
        config = ExperimentConfig(seed=5, replicas=20000, sample_sizes=[10, 50], t_grid=[0.1, 0.2])
        report = deviation_tail(config, uniform2, alpha, hamming2, family=family)
        assert any(cell.member is not None for cell in report.cells)
        assert report.verdict is Verdict.PASS

    def test_member_tails(self, hamming2, uniform2):
        family = lipschitz_ball(hamming2, uniform2)
        alpha = best_alpha(family, uniform2)
        config = ExperimentConfig(seed=6, replicas=5000, sample_sizes=[10, 20], t_grid=[0.1, 0.3])
        report = member_deviation_tail(config, uniform2, alpha, family)
        members = {cell.member for cell in report.cells}
        assert 0 not in members
        assert len(report.cells) == len(members) * 2 * 2
        assert report.verdict is Verdict.PASS

    def test_report_is_independent_of_workers(self, hamming2, uniform2):
        alpha = best_alpha(lipschitz_ball(hamming2, uniform2), uniform2)
        config = ExperimentConfig(seed=9, replicas=6000, block_size=1000, sample_sizes=[20], t_grid=[0.1, 0.2])
        one = deviation_tail(config, uniform2, alpha, hamming2)
        many = deviation_tail(config, uniform2, alpha, hamming2, workers=3)
        assert [c.p_hat for c in one.cells] == [c.p_hat for c in many.cells]

    @pytest.mark.slow
    def test_uniform_two_point_acceptance(self, hamming2, uniform2):
        alpha = best_alpha(lipschitz_ball(hamming2, uniform2), uniform2)
        config = ExperimentConfig(seed=20240601, replicas=100000, sample_sizes=DEVIATION_SIZES,
                                  t_grid=DEVIATION_T)
        report = deviation_tail(config, uniform2, alpha, hamming2)
        assert len(report.cells) == len(DEVIATION_SIZES) * len(DEVIATION_T)
        assert report.verdict is Verdict.PASS


class TestConcentration:
    def test_enlargement(self, line3):
        assert enlargement([0], 1.0, line3).tolist() == [0, 1]
        assert enlargement([0, 2], 0.0, line3).tolist() == [0, 2]
        with pytest.raises(DomainError):
            enlargement([], 1.0, line3)
        with pytest.raises(DomainError):
            enlargement([0], -1.0, line3)

    def test_concentration_function_two_points(self, hamming2, uniform2):
        theta = concentration_function(uniform2, hamming2, [0.0, 0.5, 1.0])
        assert theta.tolist() == pytest.approx([0.5, 0.5, 0.0])

    def test_concentration_budget(self):
        d = hamming(25)
        with pytest.raises(BudgetExceededError):
            concentration_function(uniform(FiniteSpace(25)), d, [1.0])

    def test_consistency(self, rng):
        for _ in range(5):
            n = int(rng.integers(2, 7))
            d = random_metric(rng, n)
            mu = random_measure(rng, n)
            r = np.linspace(0.0, 1.5 * d.diameter, 50)
            report = concentration_consistency(mu, d, certified_alpha(d, mu), r)
            assert report.verdict is Verdict.PASS

    def test_basic_lemma(self, rng):
        d = random_metric(rng, 4)
        mu = random_measure(rng, 4)
        holds, worst = basic_lemma_check(mu, d, certified_alpha(d, mu))
        assert holds and worst >= -1e-9

    @pytest.mark.slow
    @pytest.mark.parametrize("n", [3, 4, 8, 12])
    def test_marton_exact_enumeration(self, rng, n):
        d = random_metric(rng, n)
        mu = random_measure(rng, n)
        alpha = certified_alpha(d, mu)
        family = lipschitz_ball(d, mu) if n <= 4 else distance_family(d)
        report = marton_bound_check(mu, d, alpha, family=family)
        assert report.holds
        assert report.basic_lemma_holds
        assert report.cells > 0
        assert report.witness_set is None

    def test_marton_flags_inflated_alpha(self, hamming2, uniform2):
        alpha = scale(best_alpha(lipschitz_ball(hamming2, uniform2), uniform2), 10.0)
        report = marton_bound_check(uniform2, hamming2, alpha)
        assert report.verdict is Verdict.FAIL

    def test_marton_budget(self):
        with pytest.raises(BudgetExceededError):
            marton_bound_check(uniform(FiniteSpace(13)), hamming(13), Quadratic(1.0))


class TestEmpiricalProcesses:
    def test_empirical_process_on_two_points(self, hamming2, uniform2):
        family = lipschitz_ball(hamming2, uniform2)
        alpha = best_alpha(family, uniform2)
        config = ExperimentConfig(seed=2, replicas=20000, sample_sizes=[10, 50], t_grid=[0.1, 0.2])
        report = empirical_process(config, uniform2, hamming2, family.phis, alpha)
        assert report.verdict is Verdict.PASS
        assert set(report.expectations) == {"n=10", "n=50"}
        assert report.expectations["n=10"] == pytest.approx(0.123, abs=0.01)

    def test_class_must_be_lipschitz(self, line3):
        with pytest.raises(DomainError):
            empirical_process(ExperimentConfig(sample_sizes=[5], t_grid=[0.1]), uniform(FiniteSpace(3)),
                              line3, [[0.0, 5.0, 0.0]], Quadratic(1.0))

    def test_banach_deviation_on_segment(self):
        space = FiniteSpace(2, coords=[[0.0], [1.0]])
        mu = uniform(space)
        config = ExperimentConfig(seed=4, replicas=20000, sample_sizes=[10, 50], t_grid=[0.1, 0.2])
        report = banach_mean_deviation(config, mu)
        assert report.norms["M"] == pytest.approx(1.0 / np.log(3.0))
        assert report.verdict is Verdict.PASS

    def test_banach_bound_ordering(self, rng):
        for _ in range(20):
            n, q = int(rng.integers(2, 6)), int(rng.integers(1, 4))
            space = FiniteSpace(n, coords=rng.normal(size=(n, q)).tolist())
            mu = ProbMeasure(space, random_measure(rng, n).w)
            config = ExperimentConfig(seed=1, replicas=200, sample_sizes=[5],
                                      t_grid=np.geomspace(1e-3, 10.0, 20).tolist())
            report = banach_mean_deviation(config, mu)
            assert report.norms["M"] <= 2.0 * report.norms["M0"] * (1.0 + 1e-9)
            assert report.metadata["pair_norm_within_twice_m0"]
            assert report.metadata["bound_ordering"]

    def test_banach_requires_coords(self, uniform2):
        with pytest.raises(DomainError):
            banach_mean_deviation(ExperimentConfig(sample_sizes=[5], t_grid=[0.1]), uniform2)

    def test_yurinskii_exponent(self):
        assert yurinskii_exponent(0.0, 1.0) == 0.0
        assert yurinskii_exponent(2.0, 1.0) == pytest.approx(4.0 / 32.0)
