#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Transport optimal discret exact par programmation linéaire (HiGHS).
Primal sur le polytope de transport, dual de Kantorovich et dual de
Kantorovich-Rubinstein pour les métriques.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from config.settings import get_settings
from measures.errors import DimensionMismatchError, DomainError, SolverError
from measures.entropy import weighted_tv
from measures.finite_space import ProbMeasure
from transport.cost import CostMatrix, chi_metric

logger = logging.getLogger("tcilab.transport")


@dataclass(frozen=True, eq=False)
class Coupling:
    """Plan de transport pi (n x m) et son coût réalisé"""
    pi: np.ndarray
    cost: float

    def marginal_residual(self, mu: ProbMeasure, nu: ProbMeasure) -> float:
        """Écart maximal entre les marges de pi et (mu, nu)"""
        rows = np.abs(self.pi.sum(axis=1) - mu.w).max()
        cols = np.abs(self.pi.sum(axis=0) - nu.w).max()
        return float(max(rows, cols))


@dataclass(frozen=True, eq=False)
class DualPotentials:
    """Potentiels (psi, phi) avec psi_i + phi_j <= C_ij"""
    psi: np.ndarray
    phi: np.ndarray
    value: float

    def max_violation(self, cost: CostMatrix) -> float:
        return float((self.psi[:, None] + self.phi[None, :] - cost.C).max())


class OTResult(NamedTuple):
    value: float
    plan: Coupling


def _check_dims(mu: ProbMeasure, nu: ProbMeasure, cost: CostMatrix):
    if cost.shape != (mu.n, nu.n):
        raise DimensionMismatchError(f"Coût {cost.shape} pour des marges de tailles ({mu.n}, {nu.n})")


def _highs_options() -> dict:
    settings = get_settings()
    # HiGHS refuse les tolérances inférieures à 1e-10
    tol = max(settings.feasibility_tol * 1e-1, 1e-10)
    return {"primal_feasibility_tolerance": tol, "dual_feasibility_tolerance": tol}


def _run_linprog(c, **kwargs):
    settings = get_settings()
    result = linprog(c, method=settings.lp_method, options=_highs_options(), **kwargs)
    if result.status != 0:
        raise SolverError(f"Échec du programme linéaire ({result.status}): {result.message}")
    return result


def solve_ot(mu: ProbMeasure, nu: ProbMeasure, cost: CostMatrix) -> OTResult:
    """
    Coût de transport T_c(mu, nu) et un plan optimal

    Les lignes et colonnes de masse nulle sont éliminées avant la résolution.

    Returns:
        OTResult: (valeur, plan)
    """
    _check_dims(mu, nu, cost)
    rows = np.flatnonzero(mu.w > 0)
    cols = np.flatnonzero(nu.w > 0)
    a, b = mu.w[rows], nu.w[cols]
    C = cost.C[np.ix_(rows, cols)]
    n, m = C.shape

    pi = np.zeros(cost.shape)
    if n == 1 or m == 1:
        # un seul plan admissible
        block = np.outer(a, b)
    else:
        A_eq = sp.vstack([
            sp.kron(sp.identity(n), np.ones((1, m))),
            sp.kron(np.ones((1, n)), sp.identity(m)),
        ]).tocsc()
        b_eq = np.concatenate([a, b])
        result = _run_linprog(C.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None))
        block = np.clip(result.x.reshape(n, m), 0.0, None)
    pi[np.ix_(rows, cols)] = block

    value = float((pi * cost.C).sum())
    plan = Coupling(pi, value)
    residual = plan.marginal_residual(mu, nu)
    if residual > get_settings().feasibility_tol:
        logger.warning(f"Résidu de marges {residual:.3e} au-delà de la tolérance")
    logger.debug(f"Transport {cost.shape}: valeur {value:.12g}")
    return OTResult(value, plan)


def solve_dual(mu: ProbMeasure, nu: ProbMeasure, cost: CostMatrix) -> DualPotentials:
    """
    Dual de Kantorovich: max <psi, mu> + <phi, nu> sous psi ⊕ phi <= C

    Les potentiels des points de masse nulle sont prolongés par c-transformée
    pour que les contraintes tiennent partout.
    """
    _check_dims(mu, nu, cost)
    rows = np.flatnonzero(mu.w > 0)
    cols = np.flatnonzero(nu.w > 0)
    a, b = mu.w[rows], nu.w[cols]
    C = cost.C[np.ix_(rows, cols)]
    n, m = C.shape

    # contraintes psi_i + phi_j <= C_ij, psi_0 = 0
    A_ub = sp.hstack([
        sp.kron(sp.identity(n), np.ones((m, 1))),
        sp.kron(np.ones((n, 1)), sp.identity(m)),
    ]).tocsc()
    bounds = [(0.0, 0.0)] + [(None, None)] * (n + m - 1)
    result = _run_linprog(-np.concatenate([a, b]), A_ub=A_ub, b_ub=C.ravel(), bounds=bounds)

    psi = np.zeros(cost.shape[0])
    phi = np.zeros(cost.shape[1])
    psi[rows] = result.x[:n]
    phi_kept = result.x[n:]

    # prolongement: phi_j = min_i (C_ij - psi_i) hors support de nu
    full_phi = (cost.C[rows, :] - psi[rows][:, None]).min(axis=0)
    full_phi[cols] = np.minimum(phi_kept, full_phi[cols])
    phi = full_phi
    # puis psi_i = min_j (C_ij - phi_j) hors support de mu
    outside = np.setdiff1d(np.arange(cost.shape[0]), rows)
    if outside.size:
        psi[outside] = (cost.C[outside, :] - phi[None, :]).min(axis=1)

    value = float(np.dot(psi, mu.w) + np.dot(phi, nu.w))
    return DualPotentials(psi, phi, value)


def kr_dual_norm(nu: ProbMeasure, mu: ProbMeasure, d: CostMatrix) -> float:
    """
    Norme duale de Lipschitz sup { <phi, nu - mu> : |phi_i - phi_j| <= d_ij }
    """
    d.require_metric()
    _check_dims(mu, nu, d)
    n = d.shape[0]
    if n == 1:
        return 0.0
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    data, indices, indptr = [], [], [0]
    for i, j in pairs:
        data.extend([1.0, -1.0])
        indices.extend([i, j])
        indptr.append(len(data))
    A_ub = sp.csr_matrix((data, indices, indptr), shape=(len(pairs), n))
    b_ub = np.array([d.C[i, j] for i, j in pairs])
    bounds = [(0.0, 0.0)] + [(None, None)] * (n - 1)
    result = _run_linprog(-(nu.w - mu.w), A_ub=A_ub, b_ub=b_ub, bounds=bounds)
    return float(max(-result.fun, 0.0))


def c_transform(phi: np.ndarray, cost: CostMatrix) -> np.ndarray:
    """Q^c phi(y) = min_x phi(x) + c(x, y)"""
    phi = np.asarray(phi, dtype=float)
    if phi.shape[0] != cost.shape[0]:
        raise DimensionMismatchError(f"Potentiel de taille {phi.shape[0]} pour un coût {cost.shape}")
    return (phi[:, None] + cost.C).min(axis=0)


def chi_tv_identity_check(mu: ProbMeasure, nu: ProbMeasure, chi, tol: Optional[float] = None) -> bool:
    """Vérifie T_{d_chi}(mu, nu) = ||chi (nu - mu)||_TV à tol près"""
    chi = np.asarray(chi, dtype=float)
    if np.any(chi < 0):
        raise DomainError(f"Poids chi négatif: {chi.min()}")
    tol = tol if tol is not None else get_settings().duality_tol
    value, _ = solve_ot(mu, nu, chi_metric(chi, mu.space))
    return abs(value - weighted_tv(nu, mu, chi)) <= tol
