#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Entropie relative et normes de variation.
"""

import math

import numpy as np
from scipy.special import rel_entr

from measures.errors import DimensionMismatchError, DomainError
from measures.finite_space import ProbMeasure, check_same_space


def relative_entropy(nu: ProbMeasure, mu: ProbMeasure) -> float:
    """
    Entropie relative H(nu|mu)

    Convention 0 log 0 = 0; renvoie +inf si nu n'est pas absolument continue par rapport à mu.
    """
    check_same_space(nu, mu)
    value = float(rel_entr(nu.w, mu.w).sum())
    return value if value > 0.0 or math.isinf(value) else 0.0


def entropy_batch(nus: np.ndarray, mu: ProbMeasure) -> np.ndarray:
    """
    Entropies relatives H(nu_k|mu) pour chaque ligne d'un tableau (K, n)

    Args:
        nus (np.ndarray): Poids des mesures nu_k en lignes
        mu (ProbMeasure): Mesure de référence

    Returns:
        np.ndarray: Vecteur des K entropies (+inf sans continuité absolue)
    """
    nus = np.atleast_2d(np.asarray(nus, dtype=float))
    if nus.shape[1] != mu.n:
        raise DimensionMismatchError(f"Lignes de taille {nus.shape[1]} pour {mu.n} points")
    values = rel_entr(nus, mu.w[None, :]).sum(axis=1)
    return np.maximum(values, 0.0)


def tv_norm(nu: ProbMeasure, mu: ProbMeasure) -> float:
    """Norme en variation totale sum_i |nu_i - mu_i|"""
    check_same_space(nu, mu)
    return float(np.abs(nu.w - mu.w).sum())


def weighted_tv(nu: ProbMeasure, mu: ProbMeasure, chi: np.ndarray) -> float:
    """Variation totale pondérée sum_i chi_i |nu_i - mu_i|"""
    check_same_space(nu, mu)
    chi = np.asarray(chi, dtype=float)
    if chi.shape[0] != mu.n:
        raise DimensionMismatchError(f"Poids chi de taille {chi.shape[0]} pour {mu.n} points")
    if np.any(chi < 0):
        raise DomainError(f"Poids chi négatif: {chi.min()}")
    return float(np.dot(chi, np.abs(nu.w - mu.w)))
