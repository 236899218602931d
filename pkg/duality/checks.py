#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Vérifications numériques du critère dual, de l'inégalité primale et du
plafond quadratique des fonctions de transport.
"""

import logging
import math
from typing import Optional

import numpy as np

from config.settings import get_settings
from duality.best import best_alpha
from duality.family import PotentialFamily
from duality.laplace import lambda_family, lambda_matrix, s_grid
from measures.entropy import entropy_batch
from measures.finite_space import ProbMeasure, is_dirac
from measures.lattice import simplex_lattice
from ratefn.calculus import monotone_conjugate
from ratefn.functions import RateFunction, Sampled
from reports.report_types import BGReport, PrimalReport, QuadraticCapReport, Verdict
from transport.cost import CostMatrix
from transport.vertices import transport_values

logger = logging.getLogger("tcilab.duality")


def bg_check(alpha: RateFunction, family: PotentialFamily, mu: ProbMeasure,
             grid: Optional[np.ndarray] = None) -> BGReport:
    """
    Critère dual: Lambda_{psi,phi}(s) <= alpha^⊛(s) pour tout membre et tout s de la grille

    Le témoin est le couple (s, membre) de plus grand écart.
    """
    settings = get_settings()
    conjugate = monotone_conjugate(alpha)
    s = np.asarray(grid, dtype=float) if grid is not None else s_grid(settings.s_max)
    if isinstance(conjugate, Sampled):
        s = np.union1d(s, conjugate.t[conjugate.t <= s[-1]])
    bound = conjugate(s)
    L = lambda_matrix(family.variables(mu), mu, s)
    gaps = np.where(np.isinf(bound)[None, :], -math.inf, L - np.where(np.isinf(bound), 0.0, bound)[None, :])
    k, j = np.unravel_index(int(np.argmax(gaps)), gaps.shape)
    worst = float(gaps[k, j])
    holds = worst <= settings.inequality_margin

    report = BGReport(
        name="bg-check",
        verdict=Verdict.PASS if holds else Verdict.FAIL,
        holds=holds,
        worst_gap=worst,
        exact=family.exact,
        grid_points=int(s.size),
        metadata={"family": family.kind.value, "members": family.size, "alpha": _spec(alpha)},
    )
    if not holds:
        report.witness_s = float(s[j])
        report.witness_member = int(k)
        report.witness_psi = family.psis[k].tolist()
        report.witness_phi = family.phis[k].tolist()
    logger.info(f"Critère dual: écart maximal {worst:.3e} ({'vérifié' if holds else 'violé'})")
    return report


def primal_check(alpha: RateFunction, mu: ProbMeasure, cost: Optional[CostMatrix] = None,
                 family: Optional[PotentialFamily] = None, h: Optional[float] = None,
                 budget: Optional[int] = None) -> PrimalReport:
    """
    Balayage primal: alpha(T(nu)) <= H(nu|mu) sur la grille de pas h du simplexe

    T est T_C si un coût est donné, sinon le supremum sur la famille.
    """
    settings = get_settings()
    if cost is None and family is None:
        raise ValueError("primal_check requiert un coût ou une famille")
    h = h if h is not None else settings.simplex_step(mu.n)
    nus = simplex_lattice(mu.n, h, budget)
    T = family.transport(mu, nus) if family is not None else transport_values(mu, nus, cost)
    H = entropy_batch(nus, mu)
    A = alpha(T)
    gaps = np.where(np.isinf(H), -math.inf, A - np.where(np.isinf(H), 0.0, H))
    k = int(np.argmax(gaps))
    worst = float(gaps[k])
    holds = worst <= settings.inequality_margin

    report = PrimalReport(
        name="primal-check",
        verdict=Verdict.PASS if holds else Verdict.FAIL,
        holds=holds,
        worst_gap=worst,
        grid_points=int(nus.shape[0]),
        step=float(h),
        metadata={"alpha": _spec(alpha)},
    )
    if not holds:
        report.witness_nu = nus[k].tolist()
        report.witness_transport = float(T[k])
        report.witness_entropy = float(H[k])
    logger.info(f"Balayage primal sur {nus.shape[0]} mesures: écart maximal {worst:.3e}")
    return report


def quadratic_cap_check(family: PotentialFamily, mu: ProbMeasure,
                        alpha: Optional[RateFunction] = None, points: int = 200) -> QuadraticCapReport:
    """
    Plafond quadratique: best_alpha(t) <= t^2 / (2 sigma1^2) pour t <= s1 sigma1^2

    sigma1^2 = 0.9 Var(phi_0) pour le membre de plus grande variance; s1 est
    réduit de moitié jusqu'à ce que theta1 (parabole prolongée par sa tangente
    en s1) reste sous Lambda_Phi.
    """
    settings = get_settings()
    Y = family.variables(mu)
    means = Y @ mu.w
    variances = ((Y - means[:, None]) ** 2) @ mu.w
    k0 = int(np.argmax(variances))
    if is_dirac(mu) or variances[k0] <= 0.0:
        return QuadraticCapReport(name="quadratic-cap", verdict=Verdict.INFO, holds=True,
                                  metadata={"reason": "mesure de Dirac ou famille constante"})

    sigma1_sq = 0.9 * float(variances[k0])
    curve = lambda_family(family, mu)
    s, lam = curve.s, curve.values
    below = lam < sigma1_sq * s ** 2 / 2.0 - 1e-15
    first_bad = int(np.argmax(below)) if np.any(below) else s.size
    s1 = float(s[max(first_bad - 1, 1)])

    def theta(s1_value):
        return np.where(s <= s1_value, sigma1_sq * s ** 2 / 2.0,
                        sigma1_sq * s1_value ** 2 / 2.0 + sigma1_sq * s1_value * (s - s1_value))

    last_chord = (lam[-1] - lam[-2]) / (s[-1] - s[-2])
    for _ in range(200):
        if np.all(theta(s1) <= lam + 1e-12) and sigma1_sq * s1 <= last_chord + 1e-12:
            break
        s1 *= 0.5

    alpha = alpha if alpha is not None else best_alpha(family, mu)
    t_limit = s1 * sigma1_sq
    t = np.linspace(0.0, t_limit, points)
    gaps = alpha(t) - t ** 2 / (2.0 * sigma1_sq)
    j = int(np.argmax(gaps))
    worst = float(gaps[j])
    holds = worst <= settings.inequality_margin
    return QuadraticCapReport(
        name="quadratic-cap",
        verdict=Verdict.PASS if holds else Verdict.FAIL,
        holds=holds,
        sigma1_sq=sigma1_sq,
        s1=s1,
        t_limit=t_limit,
        worst_gap=worst,
        witness_t=None if holds else float(t[j]),
        member=k0,
    )


def _spec(alpha) -> dict:
    try:
        return alpha.to_spec() if not isinstance(alpha, Sampled) else {"form": "sampled", "points": int(alpha.t.size)}
    except NotImplementedError:
        return {"form": type(alpha).__name__}
