#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Sommets des polyèdres duaux et évaluation vectorisée du coût de transport.

Un sommet du dual de Kantorovich (psi_0 = 0) correspond à un arbre couvrant
du graphe biparti complet dont les arêtes sont saturées; un sommet de la boule
de Lipschitz modulo les constantes (phi_0 = 0) à un arbre couvrant orienté.
Sur un espace fini, T_C(mu, nu) est le maximum de <psi, mu> + <phi, nu> sur
ces sommets.
"""

import logging
from itertools import combinations, product
from typing import List, Optional, Tuple

import numpy as np

from config.settings import get_settings
from measures.errors import BudgetExceededError, DimensionMismatchError
from measures.finite_space import ProbMeasure
from transport.cost import CostMatrix
from transport.solver import solve_ot

logger = logging.getLogger("tcilab.transport")


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def _spanning_trees(num_nodes: int, edges: List[Tuple[int, int]]):
    for subset in combinations(range(len(edges)), num_nodes - 1):
        uf = _UnionFind(num_nodes)
        if all(uf.union(*edges[k]) for k in subset):
            yield [edges[k] for k in subset]


def _unique_rows(rows: np.ndarray, decimals: int = 12) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    _, keep = np.unique(np.round(rows, decimals), axis=0, return_index=True)
    return rows[np.sort(keep)]


def dual_vertices(cost: CostMatrix, max_points: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solutions de base admissibles du dual de Kantorovich, psi_0 = 0

    Returns:
        tuple: (psi (K, n), phi (K, m))

    Raises:
        BudgetExceededError: au-delà de transport.vertex_enumeration_max_points
    """
    settings = get_settings()
    max_points = max_points if max_points is not None else settings.vertex_enumeration_max_points
    n, m = cost.shape
    if max(n, m) > max_points:
        raise BudgetExceededError(f"Énumération des sommets limitée à {max_points} points (coût {n}x{m})")
    C = cost.C
    # noeuds 0..n-1 pour les lignes, n..n+m-1 pour les colonnes
    edges = [(i, n + j) for i in range(n) for j in range(m)]
    vertices = []
    for tree in _spanning_trees(n + m, edges):
        potential = np.full(n + m, np.nan)
        potential[0] = 0.0
        pending = list(tree)
        while pending:
            remaining = []
            for (i, jn) in pending:
                if not np.isnan(potential[i]) and np.isnan(potential[jn]):
                    potential[jn] = C[i, jn - n] - potential[i]
                elif np.isnan(potential[i]) and not np.isnan(potential[jn]):
                    potential[i] = C[i, jn - n] - potential[jn]
                elif np.isnan(potential[i]):
                    remaining.append((i, jn))
            pending = remaining
        psi, phi = potential[:n], potential[n:]
        if (psi[:, None] + phi[None, :] - C).max() <= settings.feasibility_tol:
            vertices.append(potential)
    rows = _unique_rows(np.array(vertices))
    logger.debug(f"{rows.shape[0]} sommets duaux pour un coût {n}x{m}")
    return rows[:, :n].copy(), rows[:, n:].copy()


def lipschitz_vertices(d: CostMatrix, max_points: Optional[int] = None) -> np.ndarray:
    """
    Sommets de {phi : phi_i - phi_j <= d_ij, phi_0 = 0}

    Returns:
        np.ndarray: Potentiels 1-lipschitziens en lignes (K, n)
    """
    settings = get_settings()
    d.require_metric()
    max_points = max_points if max_points is not None else settings.vertex_enumeration_max_points
    n = d.shape[0]
    if n > max_points:
        raise BudgetExceededError(f"Énumération des sommets limitée à {max_points} points (n={n})")
    if n == 1:
        return np.zeros((1, 1))
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    vertices = []
    for tree in _spanning_trees(n, edges):
        for signs in product((1.0, -1.0), repeat=n - 1):
            phi = np.full(n, np.nan)
            phi[0] = 0.0
            pending = list(zip(tree, signs))
            while pending:
                remaining = []
                for (i, j), sign in pending:
                    if not np.isnan(phi[i]) and np.isnan(phi[j]):
                        phi[j] = phi[i] + sign * d.C[i, j]
                    elif np.isnan(phi[i]) and not np.isnan(phi[j]):
                        phi[i] = phi[j] - sign * d.C[i, j]
                    elif np.isnan(phi[i]):
                        remaining.append(((i, j), sign))
                pending = remaining
            if (phi[:, None] - phi[None, :] - d.C).max() <= settings.feasibility_tol:
                vertices.append(phi)
    rows = _unique_rows(np.array(vertices))
    logger.debug(f"{rows.shape[0]} sommets de la boule de Lipschitz (n={n})")
    return rows


def transport_values(mu: ProbMeasure, nus: np.ndarray, cost: CostMatrix,
                     batch_size: Optional[int] = None) -> np.ndarray:
    """
    T_C(mu, nu_k) pour chaque ligne nu_k d'un tableau (K, m)

    Par énumération des sommets duaux sur les petits espaces, sinon un
    programme linéaire par ligne distincte.
    """
    settings = get_settings()
    batch_size = batch_size or settings.batch_size
    nus = np.atleast_2d(np.asarray(nus, dtype=float))
    n, m = cost.shape
    if mu.n != n or nus.shape[1] != m:
        raise DimensionMismatchError(f"Coût {cost.shape} pour des mesures de tailles ({mu.n}, {nus.shape[1]})")

    limit = settings.vertex_enumeration_max_points
    if cost.is_metric and n <= limit:
        phis = lipschitz_vertices(cost)
        offsets = -(phis @ mu.w)
    elif max(n, m) <= limit:
        psis, phis = dual_vertices(cost)
        offsets = psis @ mu.w
    else:
        return _transport_values_lp(mu, nus, cost)

    values = np.empty(nus.shape[0])
    for start in range(0, nus.shape[0], batch_size):
        block = nus[start:start + batch_size]
        values[start:start + batch_size] = (block @ phis.T + offsets[None, :]).max(axis=1)
    return np.maximum(values, 0.0)


def _transport_values_lp(mu: ProbMeasure, nus: np.ndarray, cost: CostMatrix) -> np.ndarray:
    unique, inverse = np.unique(nus, axis=0, return_inverse=True)
    if unique.shape[0] > 1000:
        logger.warning(f"{unique.shape[0]} programmes linéaires à résoudre, calcul lent")
    values = np.array([solve_ot(mu, ProbMeasure(cost.target, row), cost).value for row in unique])
    return values[np.ravel(inverse)]
