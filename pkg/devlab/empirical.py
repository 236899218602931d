#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Déviations des processus empiriques indexés par des fonctions
1-lipschitziennes et des moyennes empiriques vectorielles.

L'espérance E[Z_n] qui centre les bornes est estimée sur un lot de
répliques indépendant de celui des queues.
"""

import logging
from typing import Optional

import numpy as np

from config.settings import get_settings
from criteria.constructors import comparison_gap
from criteria.orlicz import orlicz_norm, orlicz_norm_pair
from devlab.deviation import exceedances, new_tail_report, run_blocks, tail_cell
from devlab.experiment import ExperimentConfig
from devlab.rng import RngStreams
from measures.errors import DimensionMismatchError, DomainError
from measures.finite_space import ProbMeasure
from ratefn.functions import RateFunction, SqrtForm, zero
from reports.report_types import TailReport
from transport.cost import CostMatrix, euclidean_metric

logger = logging.getLogger("tcilab.devlab")


def _check_lipschitz(G: np.ndarray, d: CostMatrix):
    tol = get_settings().feasibility_tol * max(1.0, d.diameter)
    for k, g in enumerate(G):
        excess = float((np.abs(g[:, None] - g[None, :]) - d.C).max())
        if excess > tol:
            raise DomainError(f"La fonction {k} de la classe n'est pas 1-lipschitzienne (excès {excess:.3e})")


def _centered_tails(config: ExperimentConfig, mu: ProbMeasure, statistic, alpha: RateFunction,
                    report: TailReport, workers: Optional[int]) -> TailReport:
    """P(Z_n >= E[Z_n] + t) pour chaque (n, t), E[Z_n] estimée sur un lot indépendant"""
    t = np.asarray(config.t_grid, dtype=float)
    for series, n in enumerate(config.sample_sizes):
        partial = run_blocks(config, mu, n, config.expectation_replicas,
                             lambda counts, n=n: np.array([statistic(counts, n).sum()]),
                             series, purpose=RngStreams.EXPECTATION, workers=workers)
        mean = float(np.sum(partial)) / config.expectation_replicas
        report.expectations[f"n={n}"] = mean

        total = np.sum(run_blocks(config, mu, n, config.replicas,
                                  lambda counts, n=n, mean=mean: exceedances(statistic(counts, n) - mean, t),
                                  series, workers=workers), axis=0)
        for j, tj in enumerate(t):
            report.add_cell(tail_cell(n, tj, int(total[j]), config.replicas, alpha, config.stderr_factor))
        logger.info(f"Processus pour n={n}: E[Z_n] estimée à {mean:.6g}")
    return report


def empirical_process(config: ExperimentConfig, mu: ProbMeasure, d: CostMatrix, G,
                      alpha: RateFunction, workers: Optional[int] = None) -> TailReport:
    """
    Z_n = max_g |<g, L_n - mu>| sur une classe finie de fonctions 1-lipschitziennes

    Raises:
        DomainError: un membre de la classe n'est pas 1-lipschitzien
    """
    d.require_metric()
    G = np.atleast_2d(np.asarray(G, dtype=float))
    if G.shape[1] != mu.n:
        raise DimensionMismatchError(f"Fonctions de taille {G.shape[1]} sur {mu.n} points")
    _check_lipschitz(G, d)
    means = G @ mu.w

    def statistic(counts, n):
        return np.abs(counts / n @ G.T - means[None, :]).max(axis=1)

    report = new_tail_report("emp-process", config, alpha)
    report.metadata["class_size"] = int(G.shape[0])
    return _centered_tails(config, mu, statistic, alpha, report, workers)


def yurinskii_exponent(t, m0: float) -> np.ndarray:
    """t^2 / (8 (2 M0^2 + t M0)), exposant de la borne de type martingale"""
    t = np.asarray(t, dtype=float)
    return t ** 2 / (8.0 * (2.0 * m0 ** 2 + t * m0))


def banach_mean_deviation(config: ExperimentConfig, mu: ProbMeasure,
                          workers: Optional[int] = None) -> TailReport:
    """
    Z_n = ‖(1/n) sum X_i - E X‖_2 pour une mesure à coordonnées dans R^q

    La borne exp(-n (sqrt(1 + t/M) - 1)^2) utilise M = ‖d‖_{rho, mu⊗mu}; le
    rapport contient aussi M0 = ‖ ‖x‖ ‖_rho et l'ordre entre les deux bornes.

    Raises:
        DomainError: l'espace n'a pas de coordonnées
    """
    if mu.space.coords is None:
        raise DomainError("banach_mean_deviation requiert des coordonnées")
    X = mu.space.coords
    center = mu.w @ X
    M = orlicz_norm_pair(euclidean_metric(mu.space), mu).value
    M0 = orlicz_norm(np.linalg.norm(X, axis=1), mu).value
    alpha = SqrtForm(M) if M > 0 else zero()

    t = np.asarray(config.t_grid, dtype=float)
    positive = t[t > 0]
    ordering = True
    if M > 0 and positive.size:
        # (sqrt(1 + t/M) - 1)^2 >= t^2 / (8 (2 M0^2 + t M0)) via M <= 2 M0
        ordering = bool(np.all(alpha(positive) >= yurinskii_exponent(positive, M0) - 1e-15)
                        and np.all(comparison_gap(positive / M) >= -1e-15))

    def statistic(counts, n):
        return np.linalg.norm(counts / n @ X - center[None, :], axis=1)

    report = new_tail_report("banach-dev", config, alpha)
    report.norms = {"M": M, "M0": M0}
    report.metadata["bound_ordering"] = ordering
    report.metadata["pair_norm_within_twice_m0"] = bool(M <= 2.0 * M0 * (1.0 + 1e-9))
    report.metadata["yurinskii_bounds"] = {
        str(n): np.exp(-n * yurinskii_exponent(t, M0)).tolist() if M0 > 0 else [1.0] * t.size
        for n in config.sample_sizes
    }
    return _centered_tails(config, mu, statistic, alpha, report, workers)
