#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Concentration de la mesure par énumération exacte des parties.

Pour une inégalité T_1 de fonction alpha non bornée, toute partie A de masse
positive vérifie mu(A^r) >= 1 - exp(-alpha(r - r_A)) pour r >= r_A, avec
r_A = alpha^{-1}(-log mu(A)).
"""

import logging
import math
from typing import Iterator, Optional, Sequence

import numpy as np

from config.settings import get_settings
from duality.family import PotentialFamily, lipschitz_ball
from measures.errors import BudgetExceededError, DomainError
from measures.finite_space import ProbMeasure
from ratefn.calculus import generalized_inverse
from ratefn.functions import RateFunction
from reports.report_types import ConcentrationReport, MartonReport, Verdict
from transport.cost import CostMatrix

logger = logging.getLogger("tcilab.devlab")

SUBSET_CHUNK = 4096


def enlargement(A: Sequence[int], r: float, d: CostMatrix) -> np.ndarray:
    """
    A^r = {x : d(x, A) <= r}

    Raises:
        DomainError: A vide ou r < 0
    """
    d.require_metric()
    A = np.asarray(sorted(set(int(i) for i in A)), dtype=int)
    if A.size == 0:
        raise DomainError("Élargissement d'une partie vide")
    if r < 0:
        raise DomainError(f"Rayon négatif: {r}")
    distance = d.C[A].min(axis=0)
    return np.flatnonzero(distance <= r + _dist_tol(d))


def _dist_tol(d: CostMatrix) -> float:
    return 1e-12 * max(1.0, d.diameter)


def _subset_chunks(n: int) -> Iterator[np.ndarray]:
    """Masques booléens de toutes les parties non vides, par paquets"""
    bits = np.arange(n)
    total = 1 << n
    for start in range(1, total, SUBSET_CHUNK):
        codes = np.arange(start, min(start + SUBSET_CHUNK, total))
        yield ((codes[:, None] >> bits[None, :]) & 1).astype(bool)


def _distances_to_sets(masks: np.ndarray, d: CostMatrix) -> np.ndarray:
    # d(x, A) pour chaque partie A (ligne) et chaque point x (colonne)
    return np.where(masks[:, :, None], d.C[None, :, :], np.inf).min(axis=1)


def concentration_function(mu: ProbMeasure, d: CostMatrix, r_grid,
                           sets: Optional[Sequence[Sequence[int]]] = None) -> np.ndarray:
    """
    theta_mu(r) = sup {1 - mu(A^r) : mu(A) >= 1/2}

    Args:
        mu (ProbMeasure): Mesure
        d (CostMatrix): Métrique
        r_grid: Rayons
        sets: Parties candidates; toutes les parties si absent

    Raises:
        BudgetExceededError: n > max_enumeration_points sans parties fournies
    """
    d.require_metric()
    settings = get_settings()
    r = np.asarray(r_grid, dtype=float)
    n = mu.n
    if sets is None:
        if n > settings.max_enumeration_points:
            raise BudgetExceededError(
                f"Énumération des parties limitée à {settings.max_enumeration_points} points (n={n})")
        chunks = _subset_chunks(n)
    else:
        masks = np.zeros((len(sets), n), dtype=bool)
        for k, subset in enumerate(sets):
            masks[k, list(subset)] = True
        chunks = iter([masks[masks.any(axis=1)]])

    theta = np.zeros(r.size)
    tol = _dist_tol(d)
    for masks in chunks:
        heavy = masks[(masks @ mu.w) >= 0.5 - 1e-12]
        if heavy.shape[0] == 0:
            continue
        dist = _distances_to_sets(heavy, d)
        for j, rj in enumerate(r):
            outside = 1.0 - (dist <= rj + tol) @ mu.w
            theta[j] = max(theta[j], float(outside.max()))
    return np.maximum(theta, 0.0)


def concentration_consistency(mu: ProbMeasure, d: CostMatrix, alpha: RateFunction, r_grid,
                              sets: Optional[Sequence[Sequence[int]]] = None) -> ConcentrationReport:
    """
    theta_mu(r) <= exp(-alpha(r - r_0)) pour r >= r_0 = alpha^{-1}(log 2)

    Raises:
        DomainError: sup alpha < log 2
    """
    settings = get_settings()
    r = np.asarray(r_grid, dtype=float)
    r0 = generalized_inverse(alpha, math.log(2.0))
    theta = concentration_function(mu, d, r, sets)
    past = r >= r0
    bound = np.ones(r.size)
    bound[past] = np.exp(-alpha(np.maximum(r[past] - r0, 0.0)))
    holds = bool(np.all(theta[past] <= bound[past] + settings.inequality_margin))
    logger.info(f"Fonction de concentration sur {r.size} rayons, seuil r_0 = {r0:.6g}")
    return ConcentrationReport(
        name="concentration",
        verdict=Verdict.PASS if holds else Verdict.FAIL,
        r=r.tolist(),
        theta=theta.tolist(),
        bound=bound.tolist(),
        holds=holds,
        metadata={"r0": r0},
    )


def basic_lemma_check(mu: ProbMeasure, d: CostMatrix, alpha: RateFunction,
                      family: Optional[PotentialFamily] = None,
                      t_grid: Optional[np.ndarray] = None) -> tuple:
    """
    mu(phi >= <phi, mu> + t) <= exp(-alpha(t)) pour les potentiels de la boule de Lipschitz

    Returns:
        tuple: (vérifiée, plus petite marge exp(-alpha(t)) - mu(...))
    """
    settings = get_settings()
    family = family if family is not None else lipschitz_ball(d, mu)
    t = np.asarray(t_grid, dtype=float) if t_grid is not None else np.linspace(0.0, d.diameter, 101)[1:]
    Y = family.phis - (family.phis @ mu.w)[:, None]
    bound = np.exp(-alpha(t))
    slack_tol = 1e-12 * max(1.0, d.diameter)
    tails = (Y[:, :, None] >= t[None, None, :] - slack_tol).astype(float)
    masses = np.einsum("kit,i->kt", tails, mu.w)
    worst = float((bound[None, :] - masses).min())
    return worst >= -settings.inequality_margin, worst


def marton_bound_check(mu: ProbMeasure, d: CostMatrix, alpha: RateFunction,
                       r_grid: Optional[np.ndarray] = None, alpha_source: str = "",
                       family: Optional[PotentialFamily] = None) -> MartonReport:
    """
    mu(A^r) >= 1 - exp(-alpha(r - r_A)) pour toute partie A et tout r >= r_A de la grille

    Args:
        mu (ProbMeasure): Mesure
        d (CostMatrix): Métrique
        alpha (RateFunction): Fonction de transport certifiée pour d
        r_grid (np.ndarray, optional): Rayons (100 points sur [0, 1.5 diamètre] par défaut)
        alpha_source (str): Provenance de alpha, recopiée dans le rapport
        family (PotentialFamily, optional): Potentiels du lemme de base

    Raises:
        BudgetExceededError: n > marton_max_points
        DomainError: -log mu(A) dépasse le supremum d'une alpha bornée
    """
    d.require_metric()
    settings = get_settings()
    n = mu.n
    if n > settings.marton_max_points:
        raise BudgetExceededError(f"Vérification de Marton limitée à {settings.marton_max_points} points (n={n})")
    r = np.asarray(r_grid, dtype=float) if r_grid is not None else np.linspace(0.0, 1.5 * d.diameter, 100)
    tol = _dist_tol(d)
    cache = {}

    def radius(mass: float) -> float:
        key = round(mass, 15)
        if key not in cache:
            cache[key] = generalized_inverse(alpha, max(0.0, -math.log(min(mass, 1.0))))
        return cache[key]

    worst, witness_set, witness_r, cells = math.inf, None, None, 0
    for masks in _subset_chunks(n):
        masses = masks @ mu.w
        masks, masses = masks[masses > 0], masses[masses > 0]
        if masks.shape[0] == 0:
            continue
        r_a = np.array([radius(float(m)) for m in masses])
        dist = _distances_to_sets(masks, d)
        for j, rj in enumerate(r):
            active = rj >= r_a
            if not np.any(active):
                continue
            enlarged = (dist[active] <= rj + tol) @ mu.w
            lower = 1.0 - np.exp(-alpha(np.maximum(rj - r_a[active], 0.0)))
            slack = enlarged - lower
            cells += int(active.sum())
            k = int(np.argmin(slack))
            if slack[k] < worst:
                worst = float(slack[k])
                witness_set = np.flatnonzero(masks[active][k]).tolist()
                witness_r = float(rj)

    lemma_holds, lemma_worst = basic_lemma_check(mu, d, alpha, family)
    holds = worst >= -settings.inequality_margin and lemma_holds
    report = MartonReport(
        name="marton",
        verdict=Verdict.PASS if holds else Verdict.FAIL,
        holds=holds,
        worst_slack=worst,
        cells=cells,
        basic_lemma_holds=lemma_holds,
        basic_lemma_worst=lemma_worst,
        alpha_source=alpha_source,
    )
    if worst < -settings.inequality_margin:
        report.witness_set = witness_set
        report.witness_r = witness_r
    logger.info(f"Marton: {cells} cellules (A, r), marge minimale {worst:.3e}")
    return report
