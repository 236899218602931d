#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Meilleures fonctions de transport: Lambda_Phi^⊛, J_Phi et la recherche
exhaustive sur la grille du simplexe.
"""

import logging
from typing import Optional

import numpy as np

from config.settings import get_settings
from duality.cramer import cramer_transform
from duality.family import PotentialFamily
from duality.laplace import lambda_family
from measures.entropy import entropy_batch
from measures.errors import BudgetExceededError
from measures.finite_space import ProbMeasure
from measures.lattice import simplex_lattice
from ratefn.functions import MinOf, RateFunction, StepFunction
from transport.cost import CostMatrix
from transport.vertices import transport_values

logger = logging.getLogger("tcilab.duality")


def transport_functional(family: PotentialFamily, mu: ProbMeasure, nus: np.ndarray) -> np.ndarray:
    """T(nu) = sup sur la famille de <psi, mu> + <phi, nu>, pour chaque ligne nu"""
    return family.transport(mu, nus)


def best_alpha(family: PotentialFamily, mu: ProbMeasure, t_target: Optional[float] = None,
               grid: Optional[np.ndarray] = None) -> RateFunction:
    """
    Meilleure fonction de transport convexe Lambda_Phi^⊛

    La conjuguée d'une interpolation de Lambda_Phi par cordes est un minorant
    de Lambda_Phi^⊛; le résultat reste donc une fonction de transport.
    """
    curve = lambda_family(family, mu, grid=grid, t_target=t_target)
    alpha = curve.as_rate().conjugate()
    if not family.exact:
        logger.warning("best_alpha calculée sur une famille non exacte: borne non certifiée")
    return alpha


def j_phi(family: PotentialFamily, mu: ProbMeasure, points: Optional[int] = None) -> MinOf:
    """
    J_Phi(t) = inf sur la famille des transformées de Cramér en t

    Chaque transformée est continue à gauche; leur minimum l'est aussi.
    """
    members = [cramer_transform(pair.phi, pair.psi, mu, points) for pair in family.members]
    return MinOf(members)


def best_transport_brute(mu: ProbMeasure, cost: CostMatrix, h: Optional[float] = None,
                         family: Optional[PotentialFamily] = None) -> StepFunction:
    """
    J(t) = min {H(nu|mu) : nu sur la grille de pas h, T(nu) >= t}

    Args:
        mu (ProbMeasure): Mesure de référence
        cost (CostMatrix): Coût définissant T_C
        h (float, optional): Pas de la grille (duality.simplex_steps par défaut)
        family (PotentialFamily, optional): Famille définissant T à la place de T_C

    Returns:
        StepFunction: Version continue à gauche, +inf au-delà du plus grand T

    Raises:
        BudgetExceededError: n > duality.brute_max_points ou grille trop grande
    """
    settings = get_settings()
    n = mu.n
    if n > settings.brute_max_points:
        raise BudgetExceededError(f"Recherche exhaustive limitée à {settings.brute_max_points} points (n={n})")
    h = h if h is not None else settings.simplex_step(n)
    nus = simplex_lattice(n, h)
    # nu = mu appartient toujours à la grille effective
    nus = np.vstack([mu.w[None, :], nus])
    if family is not None:
        T = family.transport(mu, nus)
    else:
        T = transport_values(mu, nus, cost)
    H = entropy_batch(nus, mu)
    finite = np.isfinite(H)
    T, H = T[finite], H[finite]

    order = np.argsort(T, kind="stable")
    T, H = T[order], H[order]
    # minimum des entropies parmi les nu de T(nu) >= T_k
    suffix = np.minimum.accumulate(H[::-1])[::-1]
    levels, first = np.unique(T, return_index=True)
    values = suffix[first]
    # une marche par valeur distincte: on garde le plus grand niveau de chaque palier
    last_of_run = np.concatenate([values[1:] != values[:-1], [True]])
    step = StepFunction(levels[last_of_run], values[last_of_run])
    logger.info(f"J exhaustive: {nus.shape[0]} mesures, {step.levels.size} marches, T_max={levels[-1]:.6g}")
    return step
