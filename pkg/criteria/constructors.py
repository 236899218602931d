#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Constructeurs de fonctions de transport à partir de conditions d'intégrabilité.

Sur un espace fini les intégrales sont des sommes finies: les constantes
(normes d'Orlicz, B, A) sont calculées exactement.
"""

import logging
import math
import numpy as np
from scipy.special import logsumexp

from config.settings import get_settings
from criteria.orlicz import orlicz_norm, orlicz_norm_pair
from measures.errors import DimensionMismatchError, DomainError
from measures.entropy import relative_entropy
from measures.finite_space import ProbMeasure
from ratefn.calculus import pointwise_max, rescale
from ratefn.functions import RateFunction, ShiftedFloor, SqrtForm, is_zero, zero
from transport.cost import CostMatrix

logger = logging.getLogger("tcilab.criteria")


def _log_integral(values: np.ndarray, mu: ProbMeasure) -> float:
    """log sum_i mu_i e^{values_i}, sur le support de mu"""
    keep = mu.w > 0
    return float(logsumexp(values[keep], b=mu.w[keep]))


def _floor(gamma: RateFunction, outer: float, inner: float, shift: float) -> RateFunction:
    """t -> max(0, outer·gamma(inner·t) - shift)"""
    if is_zero(gamma):
        return zero()
    if shift <= 0.0:
        return rescale(gamma, outer, inner)
    return ShiftedFloor(gamma, outer, inner, shift)


def _check_chi(chi, mu: ProbMeasure) -> np.ndarray:
    chi = np.asarray(chi, dtype=float)
    if chi.shape[0] != mu.n:
        raise DimensionMismatchError(f"Poids chi de taille {chi.shape[0]} pour {mu.n} points")
    if np.any(chi < 0):
        raise DomainError(f"Poids chi négatif: {chi.min()}")
    return chi


def alpha_weighted_ckp(chi, mu: ProbMeasure) -> SqrtForm:
    """
    Inégalité CKP pondérée: (sqrt(t/‖chi‖_rho + 1) - 1)^2 pour le coût d_chi

    Raises:
        DomainError: chi nul mu-presque partout
    """
    chi = _check_chi(chi, mu)
    norm = orlicz_norm(chi, mu).value
    if norm == 0.0:
        raise DomainError("chi est nul mu-presque partout: norme d'Orlicz nulle")
    logger.debug(f"CKP pondérée: ‖chi‖_rho = {norm:.10g}")
    return SqrtForm(norm)


def alpha_small_t(chi, mu: ProbMeasure) -> SqrtForm:
    """Contrôle près de 0 pour un coût c <= chi ⊕ chi; même formule que la CKP pondérée"""
    return alpha_weighted_ckp(chi, mu)


def alpha_orlicz_nei(mu: ProbMeasure) -> SqrtForm:
    """
    (sqrt(t + 1) - 1)^2, à comparer à ‖dnu/dmu - 1‖*_rho

    Ne dépend pas de mu: l'argument est gardé pour l'uniformité des constructeurs.
    """
    return SqrtForm(1.0)


def density_deviation(nu: ProbMeasure, mu: ProbMeasure) -> np.ndarray:
    """
    dnu/dmu - 1 sur le support de mu (0 hors support)

    Raises:
        DomainError: nu n'est pas absolument continue par rapport à mu
    """
    if np.any((mu.w == 0) & (nu.w > 0)):
        raise DomainError("nu n'est pas absolument continue par rapport à mu")
    out = np.zeros(mu.n)
    keep = mu.w > 0
    out[keep] = nu.w[keep] / mu.w[keep] - 1.0
    return out


def alpha_lipschitz_orlicz(d: CostMatrix, mu: ProbMeasure) -> RateFunction:
    """Inégalité T_1 avec M = ‖d‖_{rho, mu⊗mu}; nulle si mu est une masse de Dirac"""
    norm = orlicz_norm_pair(d, mu).value
    if norm == 0.0:
        # T_d(mu, nu) > 0 impose H(nu|mu) = +inf
        logger.info("‖d‖_{rho,mu⊗mu} = 0: mesure de Dirac, fonction de transport nulle retournée")
        return zero()
    return SqrtForm(norm)


def alpha_t1_integral(d: CostMatrix, mu: ProbMeasure, a: float, gamma: RateFunction,
                      x1: int) -> RateFunction:
    """
    max((sqrt(at + 1) - 1)^2, 2 gamma(t/2) - 2 log B) tronquée à 0

    Args:
        d (CostMatrix): Métrique
        mu (ProbMeasure): Mesure de référence
        a (float): Paramètre a >= 0 avec sum_i mu_i e^{a d(x_o, x_i)} <= 2 pour un x_o
        gamma (RateFunction): Fonction de la classe C
        x1 (int): Point de base de B = sum_i mu_i e^{gamma(d(x1, x_i))}

    Raises:
        DomainError: a < 0 ou condition sur a fausse en tout point de base
    """
    d.require_metric()
    if a < 0:
        raise DomainError(f"a doit être >= 0 (a={a})")
    x1 = mu.space.index_of(x1)
    if a > 0:
        keep = mu.w > 0
        integrals = np.exp(a * d.C[:, keep]) @ mu.w[keep]
        if not np.any(integrals <= 2.0 + get_settings().inequality_margin):
            raise DomainError(f"Aucun point x_o ne vérifie int e^{{a d(x_o, x)}} dmu <= 2 (a={a})")
        small = SqrtForm(1.0 / a)
    else:
        small = zero()
    log_b = _log_integral(gamma(d.C[x1]), mu)
    large = _floor(gamma, 2.0, 0.5, 2.0 * log_b)
    return pointwise_max(small, large)


def alpha_dp(d: CostMatrix, p: float, mu: ProbMeasure, gamma: RateFunction, x_o: int) -> RateFunction:
    """
    Coût c = d^p: max(0, 2 gamma(2^{-p} t) - 2 log B), B = sum_i mu_i e^{gamma(d(x_o, x_i)^p)}

    Raises:
        DomainError: p < 1
    """
    d.require_metric()
    if p < 1:
        raise DomainError(f"p doit être >= 1 (p={p})")
    x_o = mu.space.index_of(x_o)
    log_b = _log_integral(gamma(d.C[x_o] ** p), mu)
    return _floor(gamma, 2.0, 2.0 ** (-p), 2.0 * log_b)


def alpha_chi_envelope(chi, mu: ProbMeasure, gamma: RateFunction, x_o: int) -> RateFunction:
    """
    Coût c <= chi ⊕ chi: 2 max(0, 2 gamma(t/4) - gamma(chi(x_o)) - log B)

    L'inégalité c <= chi ⊕ chi est à la charge de l'appelant.
    """
    chi = _check_chi(chi, mu)
    x_o = mu.space.index_of(x_o)
    log_b = _log_integral(gamma(chi), mu)
    shift = float(gamma(float(chi[x_o]))) + log_b
    return _floor(gamma, 4.0, 0.25, 2.0 * shift)


def alpha_moment(cost: CostMatrix, mu: ProbMeasure, beta: RateFunction) -> RateFunction:
    """
    max(0, beta(t) - log A) avec A = sum_x mu_x e^{beta(sum_y c(x, y) mu_y)}

    Avec beta = Threshold(D) et c <= D on retrouve l'indicatrice de [0, D].
    """
    if cost.shape[0] != mu.n or cost.shape[1] != mu.n:
        raise DimensionMismatchError(f"Coût {cost.shape} pour {mu.n} points")
    c_mu = cost.C @ mu.w
    values = beta(c_mu)
    if not np.all(np.isfinite(values[mu.w > 0])):
        # A = +inf: seule la fonction nulle est garantie
        logger.warning("Intégrale A infinie: constructeur réduit à la fonction nulle")
        return zero()
    log_a = max(_log_integral(values, mu), 0.0)
    return _floor(beta, 1.0, 1.0, log_a)


def tv_entropy_bound(nu: ProbMeasure, mu: ProbMeasure) -> float:
    """Majoration (2 sqrt(H) + H) / log 2 de ‖nu - mu‖_TV, H = H(nu|mu)"""
    entropy = relative_entropy(nu, mu)
    return (2.0 * math.sqrt(entropy) + entropy) / math.log(2.0)


def comparison_gap(u) -> np.ndarray:
    """(sqrt(1+u) - 1)^2 - u^2 / (2(2+u)), positif pour u > 0"""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("comparison_gap requiert u >= 0")
    root = u / (np.sqrt(1.0 + u) + 1.0)
    return root ** 2 - u ** 2 / (2.0 * (2.0 + u))
