#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Transformées log-Laplace des membres d'une famille et leur supremum Lambda_Phi.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from config.settings import get_settings
from duality.family import PotentialFamily
from measures.errors import DomainError
from measures.finite_space import ProbMeasure
from ratefn.functions import Sampled

logger = logging.getLogger("tcilab.duality")


def log_laplace(phi, psi, mu: ProbMeasure, s):
    """
    Lambda(s) = log sum_i mu_i exp[s (phi_i + <psi, mu>)]

    Args:
        phi, psi: Potentiels
        mu (ProbMeasure): Mesure de référence
        s: Réel ou tableau de réels >= 0

    Returns:
        float ou np.ndarray: Valeurs de la log-Laplace
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise DomainError(f"log-Laplace en s < 0: {s}")
    y = np.asarray(phi, dtype=float) + float(np.dot(psi, mu.w))
    values = _log_laplace_rows(y[None, :], mu, np.atleast_1d(s_arr).ravel())[0]
    return float(values[0]) if s_arr.ndim == 0 else values.reshape(s_arr.shape)


def _log_laplace_rows(Y: np.ndarray, mu: ProbMeasure, s: np.ndarray) -> np.ndarray:
    # logsumexp soustrait le maximum avant l'exponentielle
    keep = mu.w > 0
    Y, w = Y[:, keep], mu.w[keep]
    return logsumexp(s[None, :, None] * Y[:, None, :], b=w[None, None, :], axis=2)


def lambda_matrix(Y: np.ndarray, mu: ProbMeasure, s: np.ndarray,
                  batch_size: Optional[int] = None) -> np.ndarray:
    """Lambda_k(s_j) pour chaque ligne y_k de Y, par blocs de membres"""
    batch_size = batch_size or get_settings().batch_size
    s = np.asarray(s, dtype=float)
    rows = max(1, batch_size // max(1, s.size * Y.shape[1]))
    out = np.empty((Y.shape[0], s.size))
    for start in range(0, Y.shape[0], rows):
        out[start:start + rows] = _log_laplace_rows(Y[start:start + rows], mu, s)
    return out


def s_grid(s_max: float, points: Optional[int] = None, s_min: Optional[float] = None) -> np.ndarray:
    """Grille en s: réunion d'une grille uniforme et d'une grille géométrique, avec 0"""
    settings = get_settings()
    points = points or settings.s_grid_points
    s_min = s_min if s_min is not None else settings.s_min
    uniform = np.linspace(0.0, s_max, points)
    geometric = np.geomspace(min(s_min, s_max), s_max, points)
    return np.union1d(uniform, geometric)


@dataclass(frozen=True, eq=False)
class LambdaCurve:
    """
    Lambda_Phi échantillonnée

    Args:
        s (np.ndarray): Grille en s
        values (np.ndarray): sup_k Lambda_k(s)
        argmax (np.ndarray): Indice du membre réalisant le supremum en chaque s
        exact (bool): Famille exacte
        y_max (float): Plus grande valeur des variables, pente asymptotique
    """
    s: np.ndarray
    values: np.ndarray
    argmax: np.ndarray
    exact: bool
    y_max: float

    def as_rate(self) -> Sampled:
        """Interpolation affine prolongée par la pente asymptotique y_max"""
        values = np.maximum.accumulate(np.maximum(self.values, 0.0))
        last = (values[-1] - values[-2]) / (self.s[-1] - self.s[-2]) if self.s.size > 1 else 0.0
        return Sampled(self.s, values, max(self.y_max, last, 0.0))


def lambda_family(family: PotentialFamily, mu: ProbMeasure, grid: Optional[np.ndarray] = None,
                  t_target: Optional[float] = None) -> LambdaCurve:
    """
    Lambda_Phi(s) = sup sur la famille de Lambda_{psi,phi}(s)

    Sans grille fournie, s_max double (jusqu'à s_max_cap) tant que la pente de
    la dernière corde reste sous t_target, par défaut y_max au 1e-6 près.
    """
    settings = get_settings()
    Y = family.variables(mu)
    support = mu.w > 0
    y_max = float(Y[:, support].max())
    y_min = float(Y[:, support].min())

    if grid is not None:
        s = np.asarray(grid, dtype=float)
        if s[0] != 0.0:
            s = np.concatenate([[0.0], s])
        L = lambda_matrix(Y, mu, s)
    else:
        target = t_target if t_target is not None else y_max - 1e-6 * max(1.0, y_max - y_min)
        s_max = settings.s_max
        while True:
            s = s_grid(s_max)
            L = lambda_matrix(Y, mu, s)
            top = L.max(axis=0)
            chord = (top[-1] - top[-2]) / (s[-1] - s[-2])
            if chord >= target or s_max >= settings.s_max_cap:
                if chord < target:
                    logger.warning(f"Grille en s plafonnée à {s_max:g}: pente finale {chord:.6g} < {target:.6g}")
                break
            s_max *= 2.0

    argmax = L.argmax(axis=0)
    values = L[argmax, np.arange(s.size)]
    logger.debug(f"Lambda_Phi sur {s.size} points, s_max={s[-1]:g}, {family.size} membres")
    return LambdaCurve(s, values, argmax, family.exact, max(y_max, 0.0))
