#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Produits, marginales, désintégration et restriction de mesures.
Les espaces produits sont indexés en ordre ligne (i, j) -> i * n2 + j.
"""

import logging
from functools import reduce
from typing import Iterable, List, NamedTuple, Tuple

import numpy as np

from measures.errors import DomainError, InvalidMeasureError
from measures.finite_space import FiniteSpace, ProbMeasure

logger = logging.getLogger("tcilab.measures")


class Disintegration(NamedTuple):
    """Première marginale, noyaux conditionnels et lignes de masse nulle signalées"""
    marginal: ProbMeasure
    kernels: List[ProbMeasure]
    degenerate: Tuple[int, ...]


def product_space(s1: FiniteSpace, s2: FiniteSpace) -> FiniteSpace:
    """Espace produit X1 x X2"""
    labels = None
    if s1.labels is not None or s2.labels is not None:
        labels = tuple(f"({s1.label(i)},{s2.label(j)})" for i in range(s1.n) for j in range(s2.n))
    coords = None
    if s1.coords is not None and s2.coords is not None:
        coords = np.array([np.concatenate([s1.coords[i], s2.coords[j]])
                           for i in range(s1.n) for j in range(s2.n)])
    return FiniteSpace(s1.n * s2.n, labels=labels, coords=coords, factors=(s1, s2))


def product_measure(mu1: ProbMeasure, mu2: ProbMeasure) -> ProbMeasure:
    """Mesure produit mu1 ⊗ mu2"""
    return ProbMeasure(product_space(mu1.space, mu2.space), np.outer(mu1.w, mu2.w).ravel())


def product_measure_n(mu: ProbMeasure, n: int) -> ProbMeasure:
    """Puissance tensorielle mu^{⊗n}"""
    if n < 1:
        raise DomainError(f"n doit être >= 1 (n={n})")
    return reduce(product_measure, [mu] * n)


def _factor_shape(nu: ProbMeasure) -> Tuple[int, int]:
    if not nu.space.is_product:
        raise InvalidMeasureError("La mesure ne vit pas sur un espace produit déclaré")
    s1, s2 = nu.space.factors
    return s1.n, s2.n


def marginals(nu: ProbMeasure) -> Tuple[ProbMeasure, ProbMeasure]:
    """Les deux marginales d'une mesure sur un espace produit"""
    n1, n2 = _factor_shape(nu)
    s1, s2 = nu.space.factors
    table = nu.w.reshape(n1, n2)
    return ProbMeasure(s1, table.sum(axis=1)), ProbMeasure(s2, table.sum(axis=0))


def disintegrate(nu: ProbMeasure) -> Disintegration:
    """
    Désintégration nu(dx dy) = nu1(dx) nu2^x(dy)

    Les lignes de masse nulle reçoivent un noyau uniforme et sont signalées
    dans le champ degenerate.
    """
    n1, n2 = _factor_shape(nu)
    s1, s2 = nu.space.factors
    table = nu.w.reshape(n1, n2)
    row_mass = table.sum(axis=1)
    kernels = []
    degenerate = []
    for i in range(n1):
        if row_mass[i] > 0:
            kernels.append(ProbMeasure(s2, table[i] / row_mass[i]))
        else:
            kernels.append(ProbMeasure(s2, np.full(n2, 1.0 / n2)))
            degenerate.append(i)
    if degenerate:
        logger.debug(f"Noyaux uniformes arbitraires sur les lignes {degenerate}")
    return Disintegration(ProbMeasure(s1, row_mass), kernels, tuple(degenerate))


def restrict(mu: ProbMeasure, subset: Iterable) -> ProbMeasure:
    """
    Mesure conditionnée mu_A = 1_A mu / mu(A)

    Raises:
        InvalidMeasureError: si mu(A) = 0
    """
    idx = sorted({mu.space.index_of(i) for i in subset})
    mass = mu.w[idx].sum() if idx else 0.0
    if mass <= 0:
        raise InvalidMeasureError("Restriction à un ensemble de masse nulle")
    w = np.zeros(mu.n)
    w[idx] = mu.w[idx] / mass
    return ProbMeasure(mu.space, w)
