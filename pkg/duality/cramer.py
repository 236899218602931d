#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Transformée de Cramér d'une variable finie par basculement exponentiel.

Pour t entre la moyenne et le maximum de y, le supremum de st - Lambda(s)
est atteint au s solution de Lambda'(s) = t (moyenne de y sous la mesure
basculée); au maximum y_max la valeur limite est -log mu(y = y_max).
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.special import logsumexp, softmax

from config.settings import get_settings
from measures.finite_space import ProbMeasure
from ratefn.functions import IncreasingFunction, Infinite, Sampled, Threshold
from ratefn.legendre import lower_hull

logger = logging.getLogger("tcilab.duality")

BISECTION_STEPS = 200


def _tilted_mean(y: np.ndarray, logw: np.ndarray, s: np.ndarray) -> np.ndarray:
    # moyenne de y sous mu_s proportionnelle à mu e^{s y}, pour chaque s
    weights = softmax(logw[None, :] + s[:, None] * y[None, :], axis=1)
    return weights @ y


def _log_laplace(y: np.ndarray, w: np.ndarray, s: np.ndarray) -> np.ndarray:
    return logsumexp(s[:, None] * y[None, :], b=w[None, :], axis=1)


def solve_tilt(y: np.ndarray, w: np.ndarray, t: np.ndarray) -> np.ndarray:
    """
    s >= 0 tel que Lambda'(s) = t pour chaque t dans (moyenne, y_max)

    Dichotomie vectorisée; la borne supérieure double jusqu'à encadrer tous les t.
    """
    logw = np.log(w)
    lo = np.zeros_like(t)
    hi = np.ones_like(t)
    for _ in range(200):
        short = _tilted_mean(y, logw, hi) < t
        if not np.any(short):
            break
        lo = np.where(short, hi, lo)
        hi = np.where(short, 2.0 * hi, hi)
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        below = _tilted_mean(y, logw, mid) < t
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 1e-13 * np.maximum(1.0, hi)):
            break
    return 0.5 * (lo + hi)


def cramer_from_variable(y, mu: ProbMeasure, points: Optional[int] = None) -> IncreasingFunction:
    """
    J(t) = sup_{s>=0} (st - Lambda(s)) pour t >= 0, Lambda log-Laplace de y sous mu

    Returns:
        IncreasingFunction: Sampled (fini sur [0, y_max]), Threshold ou Infinite
            pour une variable constante
    """
    settings = get_settings()
    points = points or settings.grid_points
    y = np.asarray(y, dtype=float)
    keep = mu.w > 0
    y, w = y[keep], mu.w[keep]
    y_max, y_min = float(y.max()), float(y.min())
    mean = float(np.dot(w, y))
    spread = y_max - y_min

    if spread <= 1e-14 * max(1.0, abs(y_max)):
        if y_max < -1e-14:
            return Infinite()
        return Threshold(max(y_max, 0.0))
    top_mass = float(w[y >= y_max - 1e-14 * max(1.0, abs(y_max))].sum())
    end_value = -math.log(top_mass)
    if y_max < 0.0:
        # J(t) = +inf pour t > y_max, donc partout sur [0, +inf)
        return Infinite()
    if y_max == 0.0:
        return Sampled([0.0], [end_value], None)

    if mean >= 0.0:
        start = mean
        interior = np.linspace(start, y_max, points)[1:-1]
        t_head = np.array([0.0, mean]) if mean > 0.0 else np.array([0.0])
        j_head = np.zeros_like(t_head)
    else:
        interior = np.linspace(0.0, y_max, points)[:-1]
        t_head = np.empty(0)
        j_head = np.empty(0)

    s = solve_tilt(y, w, interior)
    j_interior = s * interior - _log_laplace(y, w, s)

    t = np.concatenate([t_head, interior, [y_max]])
    j = np.concatenate([j_head, j_interior, [end_value]])
    # convexité et croissance au niveau de l'arrondi
    j = np.maximum.accumulate(np.maximum(j, 0.0))
    idx = lower_hull(t, j)
    return Sampled(t[idx], j[idx], None)


def cramer_transform(phi, psi, mu: ProbMeasure, points: Optional[int] = None) -> IncreasingFunction:
    """Transformée de Cramér du couple (psi, phi): variable phi + <psi, mu>"""
    y = np.asarray(phi, dtype=float) + float(np.dot(psi, mu.w))
    return cramer_from_variable(y, mu, points)


def two_sided_cramer(z, mu: ProbMeasure, at) -> np.ndarray:
    """
    h(x) = sup_{s réel} (s x - Lambda_z(s)) aux points demandés

    Utilisé pour E exp[delta h(Z)]: aux atomes extrêmes h vaut -log mu(z = extrême).
    """
    z = np.asarray(z, dtype=float)
    at = np.atleast_1d(np.asarray(at, dtype=float))
    keep = mu.w > 0
    z, w = z[keep], mu.w[keep]
    z_max, z_min = float(z.max()), float(z.min())
    mean = float(np.dot(w, z))
    out = np.full(at.shape, math.inf)
    tol = 1e-12 * max(1.0, abs(z_max), abs(z_min))
    if z_max - z_min <= tol:
        out[np.abs(at - mean) <= tol] = 0.0
        return out

    at_max = np.abs(at - z_max) <= tol
    at_min = np.abs(at - z_min) <= tol
    out[at_max] = -math.log(float(w[np.abs(z - z_max) <= tol].sum()))
    out[at_min] = -math.log(float(w[np.abs(z - z_min) <= tol].sum()))
    out[np.abs(at - mean) <= tol] = 0.0

    upper = (at > mean + tol) & (at < z_max - tol)
    if np.any(upper):
        s = solve_tilt(z, w, at[upper])
        out[upper] = s * at[upper] - _log_laplace(z, w, s)
    lower = (at < mean - tol) & (at > z_min + tol)
    if np.any(lower):
        # symétrie: h_z(x) = h_{-z}(-x)
        s = solve_tilt(-z, w, -at[lower])
        out[lower] = s * (-at[lower]) - _log_laplace(-z, w, s)
    return np.maximum(out, 0.0)
