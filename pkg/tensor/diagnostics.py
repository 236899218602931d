#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Diagnostic de tensorisation sans dimension.

Une fonction alpha de la classe C vérifie n alpha(T/n) <= H pour tout n
seulement si alpha = 0 ou mu est une masse de Dirac. Le diagnostic teste les
conséquences calculables: nature de mu, nullité de la meilleure fonction et
pente nulle en 0.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from config.settings import get_settings
from duality.best import best_alpha
from duality.family import lipschitz_ball
from measures.finite_space import ProbMeasure, is_dirac
from reports.report_types import DimensionFreeReport, Verdict
from transport.cost import CostMatrix

logger = logging.getLogger("tcilab.tensor")

SLOPE_POINTS = (1e-3, 1e-2)
SLOPE_TOL = 0.05


def dimension_free_diagnostic(mu: ProbMeasure, d: CostMatrix,
                              slope_points: Optional[Sequence[float]] = None) -> DimensionFreeReport:
    """
    Pour mu non Dirac, best_alpha(t)/t doit tendre vers 0 en 0

    Une pente non nulle en 0 signalerait une fonction linéaire non nulle,
    incompatible avec la tensorisation sans dimension.
    """
    d.require_metric()
    settings = get_settings()
    if is_dirac(mu):
        logger.info("Masse de Dirac: toute fonction de la classe C est admissible")
        return DimensionFreeReport(name="dimension-free", verdict=Verdict.PASS, is_dirac=True,
                                   alpha_zero=None, slope_vanishes=True)

    alpha = best_alpha(lipschitz_ball(d, mu), mu)
    t = np.linspace(0.0, d.diameter, 64)
    alpha_zero = bool(np.all(alpha(t) <= settings.inequality_margin))
    points = slope_points if slope_points is not None else SLOPE_POINTS
    slopes = {f"{p:g}": float(alpha(p) / p) for p in points}
    slope_vanishes = slopes[f"{min(points):g}"] < SLOPE_TOL
    logger.info(f"Pentes de best_alpha près de 0: {slopes}")
    return DimensionFreeReport(
        name="dimension-free",
        verdict=Verdict.PASS if slope_vanishes else Verdict.FAIL,
        is_dirac=False,
        alpha_zero=alpha_zero,
        slopes=slopes,
        slope_vanishes=slope_vanishes,
        metadata={"diameter": d.diameter},
    )
