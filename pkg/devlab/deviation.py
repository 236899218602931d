#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Queues de déviation Monte Carlo de T(L_n) face aux bornes exp(-n alpha(t)).

Les répliques sont tirées par blocs, chaque bloc dans son propre flux
Philox; les dépassements sont des entiers additionnés dans l'ordre des
blocs, ce qui rend le rapport indépendant du nombre de fils d'exécution.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import numpy as np

from devlab.experiment import ExperimentConfig
from devlab.rng import RngStreams, sample_counts
from duality.family import PotentialFamily, cost_dual, lipschitz_ball
from measures.finite_space import ProbMeasure
from ratefn.functions import RateFunction
from reports.report_types import TailCell, TailReport, Verdict
from transport.cost import CostMatrix
from transport.vertices import transport_values

logger = logging.getLogger("tcilab.devlab")

# tolérance sur les comparaisons Z >= t (valeurs issues de différences de fractions k/n)
THRESHOLD_RTOL = 1e-12


def run_blocks(config: ExperimentConfig, mu: ProbMeasure, n: int, replicas: int,
               fn: Callable[[np.ndarray], np.ndarray], series: int = 0,
               purpose: int = RngStreams.MAIN, workers: Optional[int] = None) -> List[np.ndarray]:
    """
    Applique fn aux effectifs de chaque bloc de répliques, dans l'ordre des blocs

    Args:
        config (ExperimentConfig): Graine et taille des blocs
        mu (ProbMeasure): Loi des observations
        n (int): Taille des échantillons
        replicas (int): Nombre total de répliques
        fn: Fonction des effectifs (B, m) vers un résultat par bloc
        series (int): Indice de série (une par taille d'échantillon)
        purpose (int): Domaine de clés (tirages principaux ou estimation d'espérance)
        workers (int, optional): Nombre de fils; séquentiel par défaut
    """
    streams = RngStreams(config.seed)
    starts = list(range(0, replicas, config.block_size))

    def one(block: int) -> np.ndarray:
        size = min(config.block_size, replicas - starts[block])
        counts = sample_counts(mu, n, size, streams.generator(block, purpose, series))
        return fn(counts)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, range(len(starts))))
    return [one(block) for block in range(len(starts))]


def exceedances(values: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    """Nombre de répliques avec valeur >= t, pour chaque t (et chaque colonne)"""
    slack = THRESHOLD_RTOL * np.maximum(1.0, np.abs(thresholds))
    if values.ndim == 1:
        return (values[:, None] >= (thresholds - slack)[None, :]).sum(axis=0)
    return (values[:, :, None] >= (thresholds - slack)[None, None, :]).sum(axis=0)


def tail_cell(n: int, t: float, count: int, replicas: int, alpha: RateFunction,
              stderr_factor: float, member: Optional[int] = None, factor: float = 1.0,
              judged: bool = True) -> TailCell:
    """
    Cellule (n, t): p̂, erreur type et borne min(1, factor·exp(-n alpha(t)))

    factor est le nombre de membres d'une borne d'union; une cellule non
    jugée (judged=False) est rapportée avec le verdict INFO.
    """
    p_hat = count / replicas
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / replicas)
    a = float(alpha(t))
    bound = 0.0 if math.isinf(a) else min(1.0, factor * math.exp(-n * a))
    if not judged:
        verdict = Verdict.INFO
    elif p_hat <= bound + stderr_factor * stderr:
        verdict = Verdict.PASS
    else:
        verdict = Verdict.FAIL
    return TailCell(n=n, t=float(t), p_hat=p_hat, stderr=stderr, bound=bound, verdict=verdict, member=member)


def active_members(family: PotentialFamily) -> np.ndarray:
    """Indices des membres non nuls, un seul par couple (psi, phi) distinct"""
    pairs = np.hstack([family.psis, family.phis])
    _, first = np.unique(pairs, axis=0, return_index=True)
    first = np.sort(first)
    nonzero = np.any(pairs[first] != 0, axis=1)
    return first[nonzero]


def union_family(mu: ProbMeasure, cost: CostMatrix,
                 family: Optional[PotentialFamily] = None) -> PotentialFamily:
    """
    Famille dont le sup réalise T_C(mu, .)

    La famille fournie sert si elle est exacte et construite sur le même coût;
    sinon boule de Lipschitz (coût métrique) ou famille duale du coût.
    """
    if (family is not None and family.exact and family.cost is not None
            and family.cost.shape == cost.shape and np.array_equal(family.cost.C, cost.C)):
        return family
    if cost.is_metric:
        return lipschitz_ball(cost, mu)
    return cost_dual(cost)


def new_tail_report(name: str, config: ExperimentConfig, alpha: RateFunction) -> TailReport:
    try:
        spec = alpha.to_spec()
    except NotImplementedError:
        spec = {"form": type(alpha).__name__}
    return TailReport(name=name, verdict=Verdict.INFO, seed=config.seed, replicas=config.replicas,
                      stderr_factor=config.stderr_factor, metadata={"config": config.to_dict(), "alpha": spec})


def deviation_tail(config: ExperimentConfig, mu: ProbMeasure, alpha: RateFunction, cost: CostMatrix,
                   family: Optional[PotentialFamily] = None, workers: Optional[int] = None) -> TailReport:
    """
    p̂ = P(T_C(mu, L_n) >= t) contre m·exp(-n alpha(t)) pour chaque (n, t)

    T_C est un sup sur une famille de potentiels: à n fini seule la borne
    d'union sur ses m membres non nuls distincts tient. Si la famille qui
    réalise T_C n'est pas exacte, m est inconnu et les cellules de T_C sont
    rapportées en INFO; le verdict vient alors des queues par membre.
    Avec une famille, chaque membre est aussi contrôlé individuellement.
    """
    t = np.asarray(config.t_grid, dtype=float)
    report = new_tail_report("deviate", config, alpha)
    realizing = union_family(mu, cost, family)
    factor = max(1, len(active_members(realizing)))
    judged = realizing.exact
    report.metadata["union_factor"] = factor if judged else None
    if not judged:
        logger.warning("Famille de T_C non exacte: cellules de T_C sans verdict")
    for series, n in enumerate(config.sample_sizes):
        def block_exceedances(counts, n=n):
            return exceedances(transport_values(mu, counts / n, cost), t)

        total = np.sum(run_blocks(config, mu, n, config.replicas, block_exceedances, series,
                                  workers=workers), axis=0)
        for j, tj in enumerate(t):
            report.add_cell(tail_cell(n, tj, int(total[j]), config.replicas, alpha, config.stderr_factor,
                                      factor=factor, judged=judged))
        logger.info(f"Déviations pour n={n}: {config.replicas} répliques")

    if family is not None:
        for cell in member_deviation_tail(config, mu, alpha, family, workers).cells:
            report.add_cell(cell)
    if report.failures:
        logger.warning(f"{len(report.failures)} cellules dépassent la borne")
    return report


def member_deviation_tail(config: ExperimentConfig, mu: ProbMeasure, alpha: RateFunction,
                          family: PotentialFamily, workers: Optional[int] = None) -> TailReport:
    """
    P(<phi, L_n> + <psi, mu> >= t) <= exp(-n alpha(t)) pour chaque membre non nul de la famille
    """
    t = np.asarray(config.t_grid, dtype=float)
    active = active_members(family)
    phis = family.phis[active]
    offsets = family.psis[active] @ mu.w
    report = new_tail_report("deviate-members", config, alpha)
    # séries disjointes de celles de deviation_tail
    base_series = len(config.sample_sizes)
    for k, n in enumerate(config.sample_sizes):
        def block_exceedances(counts, n=n):
            return exceedances(counts / n @ phis.T + offsets[None, :], t)

        total = np.sum(run_blocks(config, mu, n, config.replicas, block_exceedances, base_series + k,
                                  workers=workers), axis=0)
        for m, member in enumerate(active):
            for j, tj in enumerate(t):
                report.add_cell(tail_cell(n, tj, int(total[m, j]), config.replicas, alpha,
                                          config.stderr_factor, member=int(member)))
    return report
