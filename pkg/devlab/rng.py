#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Flux aléatoires déterministes à compteur (Philox) et mesures empiriques.

Chaque bloc de répliques tire ses nombres d'un flux indépendant indexé par
(graine, bloc): le résultat ne dépend pas de l'ordre d'exécution des blocs.
"""

import logging
from typing import Optional

import numpy as np

from config.settings import get_settings
from measures.errors import DomainError
from measures.finite_space import ProbMeasure

logger = logging.getLogger("tcilab.devlab")

MASK64 = (1 << 64) - 1


class RngStreams:
    """Famille de générateurs Philox de clé (seed << 64) | bloc"""

    # domaines de clés séparés pour les tirages principaux et les estimations d'espérance
    MAIN = 0
    EXPECTATION = 1

    def __init__(self, seed: Optional[int] = None):
        self.seed = int(seed if seed is not None else get_settings().seed) & MASK64

    def key(self, block: int, purpose: int = MAIN, series: int = 0) -> int:
        """Clé 128 bits: la graine en poids fort, (purpose, series, bloc) en poids faible"""
        if block < 0 or series < 0:
            raise DomainError(f"Indices de flux négatifs: bloc={block}, série={series}")
        low = (purpose << 62) | ((series & 0x3FFF_FFFF) << 32) | (block & 0xFFFF_FFFF)
        return (self.seed << 64) | low

    def generator(self, block: int, purpose: int = MAIN, series: int = 0) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key(block, purpose, series)))


def _cdf(mu: ProbMeasure) -> np.ndarray:
    cdf = np.cumsum(mu.w)
    cdf[np.flatnonzero(mu.w > 0)[-1]:] = 1.0
    return cdf


def sample_counts(mu: ProbMeasure, n: int, replicas: int, rng: np.random.Generator) -> np.ndarray:
    """
    Effectifs de `replicas` échantillons i.i.d. de taille n, par inversion de la fonction de répartition

    Returns:
        np.ndarray: Tableau (replicas, mu.n) d'entiers de somme n par ligne
    """
    if n < 1:
        raise DomainError(f"La taille d'échantillon doit être >= 1 (n={n})")
    u = rng.random((replicas, n))
    idx = np.searchsorted(_cdf(mu), u, side="right")
    # les atomes de masse nulle ne sont jamais tirés
    idx = np.minimum(idx, mu.n - 1)
    offsets = (np.arange(replicas) * mu.n)[:, None]
    return np.bincount((idx + offsets).ravel(), minlength=replicas * mu.n).reshape(replicas, mu.n)


def sample_empirical(mu: ProbMeasure, n: int, rng: np.random.Generator) -> ProbMeasure:
    """Mesure empirique L_n = (1/n) sum_i delta_{X_i} d'un échantillon de taille n"""
    counts = sample_counts(mu, n, 1, rng)[0]
    return ProbMeasure(mu.space, counts / n)
