#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Calcul dans la classe C: conjuguées, inf-convolutions, maxima, inverses
généralisés et régularisation convexe.
"""

import logging
import math
from functools import reduce
from typing import Iterable, Optional

import numpy as np

from config.settings import get_settings
from measures.errors import DomainError, NotInClassError
from ratefn.functions import (
    IncreasingFunction, RateFunction, Quadratic, Linear, MaxOf, ShiftedFloor,
    Sampled, Threshold, is_zero, regularize_points, zero
)

logger = logging.getLogger("tcilab.ratefn")


def _require_class(alpha):
    if not isinstance(alpha, RateFunction):
        raise NotInClassError(f"{type(alpha).__name__} n'est pas dans la classe C")


def monotone_conjugate(alpha: RateFunction) -> RateFunction:
    """
    Conjuguée monotone alpha^⊛(s) = sup_{t>=0} (st - alpha(t))

    Les paires closes (quadratique, sqrt/Bernstein, linéaire/seuil) sont
    exactes; les autres formes passent par la transformée de Legendre discrète.
    """
    _require_class(alpha)
    return alpha.conjugate()


def scale(alpha: RateFunction, c: float) -> RateFunction:
    """c·alpha, c > 0"""
    return rescale(alpha, c, 1.0)


def rescale(alpha: RateFunction, outer: float, inner: float) -> RateFunction:
    """t -> outer·alpha(inner·t)"""
    _require_class(alpha)
    if outer <= 0 or inner <= 0:
        raise DomainError(f"Facteurs non positifs: ({outer}, {inner})")
    if is_zero(alpha):
        return alpha
    if isinstance(alpha, Quadratic):
        return Quadratic(outer * inner ** 2 * alpha.a)
    if isinstance(alpha, Linear):
        return Linear(outer * inner * alpha.a)
    if isinstance(alpha, Threshold):
        return Threshold(alpha.D / inner)
    if isinstance(alpha, ShiftedFloor) and alpha.shift == 0:
        return ShiftedFloor(alpha.base, outer * alpha.outer, inner * alpha.inner, 0.0)
    return ShiftedFloor(alpha, outer, inner, 0.0)


def inf_convolution(alpha1: RateFunction, alpha2: RateFunction) -> RateFunction:
    """
    alpha1 □ alpha2 (t) = inf {alpha1(t1) + alpha2(t2) : t1 + t2 = t}

    Calculée par (alpha1 □ alpha2)^⊛ = alpha1^⊛ + alpha2^⊛ puis conjugaison.
    """
    _require_class(alpha1)
    _require_class(alpha2)
    if is_zero(alpha1) or is_zero(alpha2):
        return zero()
    if isinstance(alpha1, Quadratic) and isinstance(alpha2, Quadratic):
        return Quadratic(alpha1.a * alpha2.a / (alpha1.a + alpha2.a))
    if isinstance(alpha1, Linear) and isinstance(alpha2, Linear):
        return Linear(min(alpha1.a, alpha2.a))
    if isinstance(alpha1, Threshold) and isinstance(alpha2, Threshold):
        return Threshold(alpha1.D + alpha2.D)
    if alpha1 is alpha2 or alpha1 == alpha2:
        # alpha □ alpha (t) = 2 alpha(t/2)
        return rescale(alpha1, 2.0, 0.5)

    total = _conjugate_sum([alpha1.conjugate(), alpha2.conjugate()])
    logger.debug(f"Inf-convolution numérique sur {total.t.size} points duaux")
    return total.conjugate()


def inf_convolution_many(alphas: Iterable[RateFunction]) -> RateFunction:
    alphas = list(alphas)
    if not alphas:
        raise NotInClassError("Inf-convolution d'une liste vide")
    return reduce(inf_convolution, alphas)


def _conjugate_sum(conjugates) -> Sampled:
    settings = get_settings()
    if all(isinstance(c, Sampled) for c in conjugates):
        end = min(c.domain_end for c in conjugates)
        grid = np.unique(np.concatenate([c.t for c in conjugates]))
        grid = grid[grid <= end]
        if math.isfinite(end) and grid[-1] < end:
            grid = np.append(grid, end)
        values = sum(c(grid) for c in conjugates)
        slopes = [c.right_slope for c in conjugates]
        right_slope = None if any(s is None for s in slopes) or math.isfinite(end) else float(sum(slopes))
        return Sampled(grid, values, right_slope)

    end = min(settings.rate_s_max, *[c.domain_end for c in conjugates])
    closed = all(c.closed_end or c.domain_end > end for c in conjugates)
    stop = end if closed else end * (1.0 - 1e-6)
    grid = np.linspace(0.0, stop, settings.grid_points)
    # union avec les points de rupture des formes échantillonnées
    for c in conjugates:
        if isinstance(c, Sampled):
            grid = np.union1d(grid, c.t[c.t <= stop])
    values = sum(c(grid) for c in conjugates)
    finite = np.isfinite(values)
    return Sampled(grid[finite], values[finite], None)


def pointwise_max(alpha0: RateFunction, alpha1: RateFunction) -> RateFunction:
    """t -> max(alpha0(t), alpha1(t))"""
    _require_class(alpha0)
    _require_class(alpha1)
    if is_zero(alpha1) or alpha0 is alpha1 or alpha0 == alpha1:
        return alpha0
    if is_zero(alpha0):
        return alpha1
    parts = []
    for alpha in (alpha0, alpha1):
        parts.extend(alpha.parts if isinstance(alpha, MaxOf) else [alpha])
    return MaxOf(tuple(parts))


def generalized_inverse(alpha: IncreasingFunction, y: float) -> float:
    """
    alpha^{-1}(y) = inf {t >= 0 : alpha(t) >= y}

    Raises:
        DomainError: si y < 0 ou y dépasse sup alpha
    """
    if y < 0:
        raise DomainError(f"Inverse généralisé en y < 0: {y}")
    if y > alpha.sup_value:
        raise DomainError(f"y = {y} dépasse le supremum {alpha.sup_value}")
    if y == 0:
        return 0.0
    return float(alpha.inverse(y))


def sup_value(alpha: IncreasingFunction) -> float:
    return alpha.sup_value


def convex_regularization(f: IncreasingFunction, t_max: Optional[float] = None,
                          points: Optional[int] = None) -> RateFunction:
    """
    Plus grande minorante convexe semi-continue inférieurement de f sur [0, +inf)

    Enveloppe convexe inférieure des points finis du graphe sur [0, t_max];
    au-delà, prolongement par la dernière pente si f y est finie.
    """
    settings = get_settings()
    t_max = t_max if t_max is not None else settings.t_max
    points = points or settings.grid_points
    if isinstance(f, RateFunction) and not isinstance(f, Sampled):
        if f.is_convex:
            return f
    t, v = f.hull_points(t_max, points)
    if t.size == 0:
        raise NotInClassError("Fonction infinie partout")
    window_end = float(t.max())
    finite_beyond = f.domain_end > window_end + 1e-12 * max(1.0, window_end)
    result = regularize_points(t, v, right_slope_from_hull=finite_beyond)
    logger.debug(f"Régularisation convexe: {result.t.size} sommets sur [0, {window_end:.6g}]")
    return result
