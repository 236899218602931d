#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Matrices de coût et constructions dérivées (d_chi, c1 ⊕ c2, d^p).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from config.settings import get_settings
from measures.errors import DomainError, InvalidCostError
from measures.finite_space import FiniteSpace
from measures.products import product_space

logger = logging.getLogger("tcilab.transport")


class CostKind(Enum):
    """Nature d'une matrice de coût"""
    GENERAL = "general-cost"
    METRIC = "metric"


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """
    Coût c(x_i, y_j) >= 0 entre deux espaces finis

    Une métrique est carrée, symétrique, de diagonale nulle et vérifie
    l'inégalité triangulaire; un coût général carré a une diagonale nulle.
    """
    C: np.ndarray
    kind: CostKind = CostKind.GENERAL
    source: Optional[FiniteSpace] = None
    target: Optional[FiniteSpace] = None

    def __post_init__(self):
        C = np.array(self.C, dtype=float)
        if C.ndim != 2:
            raise InvalidCostError(f"Matrice de coût de dimension {C.ndim}")
        if not np.all(np.isfinite(C)):
            raise InvalidCostError("Entrées de coût non finies")
        tol = get_settings().feasibility_tol
        if np.any(C < -tol):
            raise InvalidCostError(f"Entrée de coût négative: {C.min()}")
        C = np.clip(C, 0.0, None)
        kind = CostKind(self.kind)
        square = C.shape[0] == C.shape[1]
        if square and np.any(np.abs(np.diag(C)) > tol):
            raise InvalidCostError("Un coût carré doit avoir une diagonale nulle")
        if kind is CostKind.METRIC:
            if not square:
                raise InvalidCostError("Une métrique est une matrice carrée")
            if not np.allclose(C, C.T, atol=tol, rtol=0.0):
                raise InvalidCostError("Une métrique est symétrique")
            # C_ik <= C_ij + C_jk pour tous i, j, k
            violation = C[:, None, :] - (C[:, :, None] + C[None, :, :])
            if violation.max() > tol * max(1.0, C.max()):
                raise InvalidCostError(f"Inégalité triangulaire violée de {violation.max():.3e}")
        source = self.source if self.source is not None else FiniteSpace(C.shape[0])
        target = self.target if self.target is not None else (source if square else FiniteSpace(C.shape[1]))
        if source.n != C.shape[0] or target.n != C.shape[1]:
            raise InvalidCostError(f"Matrice {C.shape} incompatible avec les espaces ({source.n}, {target.n})")
        C.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)

    @property
    def shape(self):
        return self.C.shape

    @property
    def is_metric(self) -> bool:
        return self.kind is CostKind.METRIC

    @property
    def diameter(self) -> float:
        return float(self.C.max())

    def require_metric(self):
        if not self.is_metric:
            raise InvalidCostError("Cette opération requiert une métrique")


def hamming(space) -> CostMatrix:
    """Métrique triviale 1_{x != y}"""
    space = space if isinstance(space, FiniteSpace) else FiniteSpace(int(space))
    return CostMatrix(1.0 - np.eye(space.n), CostKind.METRIC, space)


def line_metric(space) -> CostMatrix:
    """Métrique |i - j| sur les points alignés 0..n-1"""
    space = space if isinstance(space, FiniteSpace) else FiniteSpace(int(space))
    idx = np.arange(space.n, dtype=float)
    return CostMatrix(np.abs(idx[:, None] - idx[None, :]), CostKind.METRIC, space)


def euclidean_metric(space: FiniteSpace) -> CostMatrix:
    """Distance euclidienne entre les coordonnées des points"""
    if space.coords is None:
        raise InvalidCostError("L'espace n'a pas de coordonnées")
    diff = space.coords[:, None, :] - space.coords[None, :, :]
    return CostMatrix(np.sqrt((diff ** 2).sum(axis=-1)), CostKind.METRIC, space)


def power_cost(d: CostMatrix, p: float) -> CostMatrix:
    """Coût c = d^p (coût général pour p > 1)"""
    if p < 1:
        raise DomainError(f"p doit être >= 1 (p={p})")
    kind = d.kind if p == 1 else CostKind.GENERAL
    return CostMatrix(d.C ** p, kind, d.source, d.target)


def scaled_cost(cost: CostMatrix, a: float) -> CostMatrix:
    """Coût a·c, a >= 0"""
    if a < 0:
        raise DomainError(f"Facteur négatif: {a}")
    kind = cost.kind if a > 0 else CostKind.GENERAL
    return CostMatrix(a * cost.C, kind, cost.source, cost.target)


def chi_metric(chi, space: Optional[FiniteSpace] = None) -> CostMatrix:
    """
    d_chi(x, y) = 1_{x != y} (chi(x) + chi(y))

    Métrique si au plus un chi_i est nul, semi-métrique (coût général) sinon.
    """
    chi = np.asarray(chi, dtype=float)
    if np.any(chi < 0):
        raise DomainError(f"Poids chi négatif: {chi.min()}")
    C = (chi[:, None] + chi[None, :]) * (1.0 - np.eye(chi.shape[0]))
    kind = CostKind.METRIC if np.count_nonzero(chi == 0) <= 1 else CostKind.GENERAL
    return CostMatrix(C, kind, space)


def tensor_cost(c1: CostMatrix, c2: CostMatrix) -> CostMatrix:
    """(c1 ⊕ c2)_{(i,j),(k,l)} = c1_ik + c2_jl en ordre ligne"""
    if c1.shape[0] != c1.shape[1] or c2.shape[0] != c2.shape[1]:
        raise InvalidCostError("tensor_cost requiert deux coûts carrés")
    n1, n2 = c1.shape[0], c2.shape[0]
    C = (c1.C[:, None, :, None] + c2.C[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    kind = CostKind.METRIC if c1.is_metric and c2.is_metric else CostKind.GENERAL
    return CostMatrix(C, kind, product_space(c1.source, c2.source))
