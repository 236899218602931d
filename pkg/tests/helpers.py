#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Générateurs d'instances aléatoires pour les tests.
"""

import numpy as np
from scipy.sparse.csgraph import shortest_path

from measures.finite_space import ProbMeasure
from transport.cost import CostKind, CostMatrix


def random_measure(rng: np.random.Generator, n: int, positive: bool = True) -> ProbMeasure:
    """Mesure de Dirichlet(1,...,1); poids minorés par 1e-3 si positive"""
    w = rng.dirichlet(np.ones(n))
    if positive:
        w = np.maximum(w, 1e-3)
        w = w / w.sum()
    return ProbMeasure.from_weights(w)


def random_metric(rng: np.random.Generator, n: int) -> CostMatrix:
    """Métrique des plus courts chemins d'un graphe complet à poids aléatoires"""
    W = rng.uniform(0.2, 2.0, size=(n, n))
    W = (W + W.T) / 2.0
    np.fill_diagonal(W, 0.0)
    D = shortest_path(W, method="FW", directed=False)
    D = (D + D.T) / 2.0
    np.fill_diagonal(D, 0.0)
    return CostMatrix(D, CostKind.METRIC)


def random_cost(rng: np.random.Generator, n: int, m: int) -> CostMatrix:
    """Coût général n x m à entrées dans [0, 3), diagonale nulle si carré"""
    C = rng.uniform(0.0, 3.0, size=(n, m))
    if n == m:
        np.fill_diagonal(C, 0.0)
    return CostMatrix(C, CostKind.GENERAL)
