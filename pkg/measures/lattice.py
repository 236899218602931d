#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Grille barycentrique du simplexe, support de tous les balayages exhaustifs.
"""

import logging
from functools import lru_cache
from itertools import chain, combinations
from typing import Optional

import numpy as np
from scipy.special import comb

from config.settings import get_settings
from measures.errors import BudgetExceededError, DomainError

logger = logging.getLogger("tcilab.measures")


def lattice_size(n: int, h: float) -> int:
    """Nombre de points de la grille de pas h sur le simplexe à n sommets"""
    steps = int(round(1.0 / h))
    return int(comb(steps + n - 1, n - 1, exact=True))


@lru_cache(maxsize=16)
def _compositions(total: int, parts: int) -> np.ndarray:
    # décompositions de total en parts entiers >= 0 (méthode des barres)
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    slots = total + parts - 1
    count = int(comb(slots, parts - 1, exact=True))
    bars = np.fromiter(chain.from_iterable(combinations(range(slots), parts - 1)),
                       dtype=np.int64, count=count * (parts - 1)).reshape(count, parts - 1)
    padded = np.hstack([np.full((count, 1), -1, dtype=np.int64), bars,
                        np.full((count, 1), slots, dtype=np.int64)])
    result = np.diff(padded, axis=1) - 1
    result.setflags(write=False)
    return result


def simplex_lattice(n: int, h: float, budget: Optional[int] = None) -> np.ndarray:
    """
    Points k/N du simplexe, N = round(1/h)

    Args:
        n (int): Nombre de sommets
        h (float): Pas de la grille
        budget (int, optional): Nombre maximal de points (duality.grid_budget par défaut)

    Returns:
        np.ndarray: Tableau (K, n) de mesures en lignes

    Raises:
        BudgetExceededError: si la grille dépasse le budget
    """
    if n < 1:
        raise DomainError(f"n doit être >= 1 (n={n})")
    if not 0 < h <= 1:
        raise DomainError(f"Le pas h doit être dans (0, 1] (h={h})")
    budget = budget if budget is not None else get_settings().grid_budget
    size = lattice_size(n, h)
    if size > budget:
        raise BudgetExceededError(f"Grille de {size} points pour n={n}, h={h} (budget {budget})")
    steps = int(round(1.0 / h))
    logger.debug(f"Grille du simplexe: n={n}, N={steps}, {size} points")
    return _compositions(steps, n) / float(steps)
