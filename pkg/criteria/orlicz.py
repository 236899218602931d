#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Normes d'Orlicz pour la fonction de Young rho(s) = e^{|s|} - 1, norme duale
et inégalité de type Bernstein pour la log-Laplace centrée.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import bisect, brentq, minimize
from scipy.special import logsumexp

from config.settings import get_settings
from measures.errors import DimensionMismatchError, SolverError
from measures.finite_space import ProbMeasure
from transport.cost import CostMatrix

logger = logging.getLogger("tcilab.criteria")

LOG2 = math.log(2.0)


@dataclass(frozen=True)
class OrliczEstimate:
    """
    Norme d'Orlicz calculée et son certificat

    Args:
        value (float): inf {b > 0 : int e^{|phi|/b} dmu <= 2}
        certificate (float): Intégrale int e^{|phi|/b} dmu au point b = value
    """
    value: float
    certificate: float

    def to_dict(self) -> dict:
        return {"value": self.value, "certificate": self.certificate}


def _orlicz_from_values(a: np.ndarray, w: np.ndarray) -> OrliczEstimate:
    keep = w > 0
    a, w = np.abs(a[keep]), w[keep]
    top = float(a.max()) if a.size else 0.0
    if top == 0.0:
        return OrliczEstimate(0.0, 1.0)

    def excess(b):
        return float(logsumexp(a / b, b=w)) - LOG2

    # pour b = max|phi| / log 2 l'intégrale est au plus e^{log 2} = 2
    hi = top / LOG2
    if excess(hi) >= 0.0:
        return OrliczEstimate(hi, math.exp(excess(hi) + LOG2))
    lo = 0.5 * hi
    while excess(lo) <= 0.0:
        hi, lo = lo, 0.5 * lo
    rtol = max(get_settings().orlicz_rtol, 4.0 * np.finfo(float).eps)
    b = bisect(excess, lo, hi, xtol=1e-300, rtol=rtol, maxiter=2000)
    return OrliczEstimate(float(b), math.exp(excess(b) + LOG2))


def orlicz_norm(phi, mu: ProbMeasure) -> OrliczEstimate:
    """
    ‖phi‖_rho = inf {b > 0 : sum_i mu_i e^{|phi_i|/b} <= 2}

    b -> int e^{|phi|/b} dmu décroît strictement, d'où une dichotomie sur b.
    """
    phi = np.asarray(phi, dtype=float)
    if phi.shape[0] != mu.n:
        raise DimensionMismatchError(f"Fonction de taille {phi.shape[0]} sur {mu.n} points")
    return _orlicz_from_values(phi, mu.w)


def orlicz_norm_pair(d: CostMatrix, mu: ProbMeasure) -> OrliczEstimate:
    """‖d‖_{rho, mu⊗mu}: même recherche sur la mesure produit"""
    d.require_metric()
    if d.shape[0] != mu.n:
        raise DimensionMismatchError(f"Métrique {d.shape} pour {mu.n} points")
    return _orlicz_from_values(d.C.ravel(), np.outer(mu.w, mu.w).ravel())


def orlicz_dual_norm(f, mu: ProbMeasure, cross_check: bool = False) -> float:
    """
    Norme duale ‖f‖*_rho = sup {sum_i mu_i f_i phi_i : sum_i mu_i e^{|phi_i|} <= 2}

    À multiplicateur lambda fixé l'optimum est |phi_i| = max(0, log(lambda |f_i|));
    lambda est la racine de sum_i mu_i max(1, lambda |f_i|) = 2.

    Args:
        f: Fonction sur l'espace
        mu (ProbMeasure): Mesure de référence
        cross_check (bool): Compare avec une montée SLSQP sous contrainte

    Returns:
        float: Valeur de la norme duale

    Raises:
        SolverError: Si cross_check et qu'un point admissible de SLSQP dépasse
            la valeur du multiplicateur (optimum contredit). Un SLSQP resté
            en deçà est seulement journalisé.
    """
    f = np.asarray(f, dtype=float)
    if f.shape[0] != mu.n:
        raise DimensionMismatchError(f"Fonction de taille {f.shape[0]} sur {mu.n} points")
    keep = mu.w > 0
    a, w = np.abs(f[keep]), mu.w[keep]
    top = float(a.max())
    if top == 0.0:
        return 0.0

    def excess(log_lam):
        return float(np.dot(w, np.maximum(1.0, math.exp(log_lam) * a))) - 2.0

    lo = -math.log(top)
    hi = math.log(2.0 / float(np.dot(w, a)))
    if excess(hi) <= 0.0:
        log_lam = hi
    else:
        log_lam = brentq(excess, lo, hi, xtol=get_settings().dual_norm_tol, maxiter=500)
    lam = math.exp(log_lam)
    x = np.zeros_like(a)
    positive = lam * a > 1.0
    x[positive] = np.log(lam * a[positive])
    value = float(np.dot(w, a * x))

    if cross_check:
        numeric, feasible = _dual_norm_slsqp(a, w, x)
        tol = 1e-6 * max(1.0, value)
        if feasible and numeric > value + tol:
            raise SolverError(f"Norme duale: SLSQP atteint {numeric:.10g} au-delà du multiplicateur {value:.10g}")
        if abs(numeric - value) > tol:
            logger.warning(f"Norme duale: multiplicateur {value:.10g} contre SLSQP {numeric:.10g}")
    return value


def _dual_norm_slsqp(a: np.ndarray, w: np.ndarray, start: np.ndarray):
    # maximisation directe sur x = |phi| >= 0 sous la contrainte d'intégrabilité
    constraint = {"type": "ineq", "fun": lambda x: 2.0 - float(np.dot(w, np.exp(x)))}
    result = minimize(lambda x: -float(np.dot(w * a, x)), 0.5 * start, method="SLSQP",
                      bounds=[(0.0, None)] * a.size, constraints=[constraint],
                      options={"ftol": 1e-14, "maxiter": 500})
    feasible = bool(np.all(result.x >= -1e-12) and constraint["fun"](result.x) >= -1e-9)
    return float(-result.fun), feasible


def centered_log_laplace(phi, mu: ProbMeasure, s) -> np.ndarray:
    """Lambda_phi(s) = log int e^{s phi} dmu - s <phi, mu>"""
    phi = np.asarray(phi, dtype=float)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    keep = mu.w > 0
    y, w = phi[keep], mu.w[keep]
    y = y - float(np.dot(w, y))
    return logsumexp(s[:, None] * y[None, :], b=w[None, :], axis=1)


def bernstein_bound_check(phi, mu: ProbMeasure, points: Optional[int] = None) -> bool:
    """
    Lambda_phi(s) <= beta^2 s^2 / (1 - beta s) sur [0, 1/beta), beta = ‖phi‖_rho

    La borne utilise la norme de phi lui-même, la log-Laplace est centrée.
    """
    settings = get_settings()
    points = points or settings.s_grid_points
    beta = orlicz_norm(phi, mu).value
    if beta == 0.0:
        return True
    s = np.linspace(0.0, 1.0 / beta, points, endpoint=False)
    lam = centered_log_laplace(phi, mu, s)
    bound = (beta * s) ** 2 / (1.0 - beta * s)
    worst = float(np.max(lam - bound))
    holds = worst <= settings.inequality_margin
    if not holds:
        logger.warning(f"Borne de Bernstein violée de {worst:.3e} (beta={beta:.6g})")
    return holds
