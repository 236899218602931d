#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Familles de couples de potentiels (psi, phi).

Une famille contient toujours le couple nul. Pour une inégalité de type
norme-entropie les couples sont (-phi, phi); pour un coût c ils vérifient
psi_i + phi_j <= c_ij. Le drapeau exact indique si le pire cas sur la
famille infinie est atteint par les membres énumérés.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from config.settings import get_settings
from measures.errors import DimensionMismatchError, DomainError, InvalidCostError
from measures.finite_space import ProbMeasure
from transport.cost import CostMatrix
from transport.solver import c_transform
from transport.vertices import dual_vertices, lipschitz_vertices

logger = logging.getLogger("tcilab.duality")

# au-delà, les boules sup et chi sont échantillonnées
SIGN_ENUMERATION_MAX_POINTS = 12


class FamilyKind(Enum):
    """Types de familles de potentiels"""
    LIPSCHITZ_BALL = "lipschitz-ball"
    UNIT_SUP_BALL = "unit-sup-ball"
    CHI_BALL = "chi-ball"
    EXPLICIT = "explicit"
    COST_DUAL = "cost-dual"


@dataclass(frozen=True, eq=False)
class PotentialPair:
    """Couple (psi, phi) de potentiels sur un espace fini"""
    psi: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        psi = np.array(self.psi, dtype=float).ravel()
        phi = np.array(self.phi, dtype=float).ravel()
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def nei(cls, phi) -> "PotentialPair":
        """Couple (-phi, phi) d'une inégalité norme-entropie"""
        phi = np.asarray(phi, dtype=float)
        return cls(-phi, phi)

    def variable(self, mu: ProbMeasure) -> np.ndarray:
        """y = phi + <psi, mu>, la variable dont on prend la log-Laplace"""
        return self.phi + float(np.dot(self.psi, mu.w))

    def max_violation(self, cost: CostMatrix) -> float:
        return float((self.psi[:, None] + self.phi[None, :] - cost.C).max())


@dataclass(frozen=True, eq=False)
class PotentialFamily:
    """
    Famille finie de couples, rangés en lignes

    Args:
        kind (FamilyKind): Nature de la famille
        psis (np.ndarray): Potentiels psi (K, n)
        phis (np.ndarray): Potentiels phi (K, m)
        exact (bool): Le pire cas de la famille infinie est-il certifié
        cost (CostMatrix, optional): Coût associé (métrique pour la boule de Lipschitz)
    """
    kind: FamilyKind
    psis: np.ndarray
    phis: np.ndarray
    exact: bool = True
    cost: Optional[CostMatrix] = None

    def __post_init__(self):
        psis = np.atleast_2d(np.array(self.psis, dtype=float))
        phis = np.atleast_2d(np.array(self.phis, dtype=float))
        if psis.shape[0] != phis.shape[0]:
            raise DimensionMismatchError(f"{psis.shape[0]} psi pour {phis.shape[0]} phi")
        # le couple nul fait toujours partie de la famille
        if not np.any(np.all(psis == 0, axis=1) & np.all(phis == 0, axis=1)):
            psis = np.vstack([np.zeros(psis.shape[1]), psis])
            phis = np.vstack([np.zeros(phis.shape[1]), phis])
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        object.__setattr__(self, "psis", psis)
        object.__setattr__(self, "phis", phis)

    @property
    def size(self) -> int:
        return self.psis.shape[0]

    @property
    def members(self) -> List[PotentialPair]:
        return [PotentialPair(psi, phi) for psi, phi in zip(self.psis, self.phis)]

    def member(self, k: int) -> PotentialPair:
        return PotentialPair(self.psis[k], self.phis[k])

    def variables(self, mu: ProbMeasure) -> np.ndarray:
        """Variables y_k = phi_k + <psi_k, mu> en lignes (K, n)"""
        if self.phis.shape[1] != mu.n:
            raise DimensionMismatchError(f"Famille sur {self.phis.shape[1]} points, mesure sur {mu.n}")
        return self.phis + (self.psis @ mu.w)[:, None]

    def extended(self, pairs: Iterable[PotentialPair]) -> "PotentialFamily":
        """Famille enrichie de nouveaux couples (jamais exacte par construction)"""
        pairs = list(pairs)
        psis = np.vstack([self.psis] + [p.psi[None, :] for p in pairs])
        phis = np.vstack([self.phis] + [p.phi[None, :] for p in pairs])
        return PotentialFamily(self.kind, psis, phis, self.exact, self.cost)

    def max_violation(self) -> float:
        """Plus grande violation de psi_i + phi_j <= c_ij, -inf sans coût"""
        if self.cost is None:
            return -np.inf
        return float((self.psis[:, :, None] + self.phis[:, None, :] - self.cost.C[None]).max())

    def transport(self, mu: ProbMeasure, nus: np.ndarray) -> np.ndarray:
        """T(nu_k) = sup sur la famille de <psi, mu> + <phi, nu_k>"""
        nus = np.atleast_2d(np.asarray(nus, dtype=float))
        offsets = self.psis @ mu.w
        return np.maximum((nus @ self.phis.T + offsets[None, :]).max(axis=1), 0.0)

    def to_spec(self) -> dict:
        spec = {"kind": self.kind.value}
        if self.kind is FamilyKind.EXPLICIT:
            spec["pairs"] = [{"psi": p.tolist(), "phi": f.tolist()} for p, f in zip(self.psis, self.phis)]
        return spec


# --- constructeurs ---------------------------------------------------------


def lipschitz_ball(d: CostMatrix, mu: Optional[ProbMeasure] = None,
                   rng: Optional[np.random.Generator] = None) -> PotentialFamily:
    """
    Boule de Lipschitz {(-phi, phi) : |phi_i - phi_j| <= d_ij}

    Exacte par énumération des sommets jusqu'à vertex_enumeration_max_points;
    au-delà, montée par coordonnées multi-départs (non exacte).
    """
    d.require_metric()
    settings = get_settings()
    n = d.shape[0]
    if n <= settings.vertex_enumeration_max_points:
        phis = lipschitz_vertices(d)
        return PotentialFamily(FamilyKind.LIPSCHITZ_BALL, -phis, phis, True, d)

    rng = rng if rng is not None else np.random.default_rng(settings.seed)
    phis = _lipschitz_candidates(d, mu, rng, settings.multistart)
    logger.warning(f"Boule de Lipschitz sur {n} points: {phis.shape[0]} potentiels, famille non exacte")
    return PotentialFamily(FamilyKind.LIPSCHITZ_BALL, -phis, phis, False, d)


def _mcshane(values: np.ndarray, d: np.ndarray) -> np.ndarray:
    # phi(x) = min_y (values(y) + d(y, x)) est 1-lipschitzienne
    return (values[:, None] + d).min(axis=0)


def _lipschitz_candidates(d: CostMatrix, mu: Optional[ProbMeasure], rng: np.random.Generator,
                          starts: int) -> np.ndarray:
    n = d.shape[0]
    candidates = [d.C[k] for k in range(n)] + [-d.C[k] for k in range(n)]
    for _ in range(starts):
        candidates.append(_mcshane(rng.uniform(0.0, d.diameter, n), d.C))
    if mu is not None:
        settings = get_settings()
        s_values = np.geomspace(max(settings.s_min, 1e-2), settings.s_max, 6) / max(d.diameter, 1e-12)
        refined = []
        for phi in candidates:
            for s in s_values:
                refined.append(coordinate_ascent(phi, d, mu, s))
        candidates.extend(refined)
    phis = np.array(candidates)
    phis = phis - phis[:, :1]
    _, keep = np.unique(np.round(phis, 10), axis=0, return_index=True)
    return phis[np.sort(keep)]


def coordinate_ascent(phi: np.ndarray, d: CostMatrix, mu: ProbMeasure, s: float,
                      max_sweeps: int = 100) -> np.ndarray:
    """
    Maximise localement phi -> Lambda_phi(s) sur la boule de Lipschitz

    Lambda est convexe en chaque coordonnée: le maximum sur l'intervalle admissible
    est atteint à une extrémité.
    """
    phi = np.array(phi, dtype=float)
    C = d.C
    n = phi.shape[0]

    def value(p):
        centered = p - np.dot(p, mu.w)
        return logsumexp(s * centered, b=mu.w)

    best = value(phi)
    for _ in range(max_sweeps):
        improved = False
        for i in range(n):
            others = np.arange(n) != i
            lo = (phi[others] - C[others, i]).max()
            hi = (phi[others] + C[i, others]).min()
            for candidate in (lo, hi):
                trial = phi.copy()
                trial[i] = candidate
                v = value(trial)
                if v > best + 1e-14:
                    best, phi, improved = v, trial, True
        if not improved:
            break
    return phi


def unit_sup_ball(n: int, rng: Optional[np.random.Generator] = None,
                  samples: int = 4096) -> PotentialFamily:
    """Boule unité de la norme sup {(-phi, phi) : |phi| <= 1}, sommets ±1"""
    return chi_ball(np.ones(n), rng, samples, kind=FamilyKind.UNIT_SUP_BALL)


def chi_ball(chi: Sequence[float], rng: Optional[np.random.Generator] = None,
             samples: int = 4096, kind: FamilyKind = FamilyKind.CHI_BALL) -> PotentialFamily:
    """Boule {(-phi, phi) : |phi| <= chi}, sommets ±chi"""
    chi = np.asarray(chi, dtype=float)
    if np.any(chi < 0):
        raise DomainError(f"Poids chi négatif: {chi.min()}")
    n = chi.shape[0]
    if n <= SIGN_ENUMERATION_MAX_POINTS:
        signs = np.array(list(product((-1.0, 1.0), repeat=n)))
        exact = True
    else:
        rng = rng if rng is not None else np.random.default_rng(get_settings().seed)
        signs = rng.choice((-1.0, 1.0), size=(samples, n))
        exact = False
        logger.warning(f"Boule sur {n} points: {samples} signes tirés, famille non exacte")
    phis = signs * chi[None, :]
    return PotentialFamily(kind, -phis, phis, exact)


def explicit_family(pairs: Sequence[Tuple[Sequence[float], Sequence[float]]],
                    cost: Optional[CostMatrix] = None) -> PotentialFamily:
    """
    Famille donnée par une liste de couples (psi, phi)

    Raises:
        DomainError: si un couple viole psi_i + phi_j <= c_ij
    """
    if not pairs:
        raise DomainError("Famille explicite vide")
    psis = np.array([p[0] for p in pairs], dtype=float)
    phis = np.array([p[1] for p in pairs], dtype=float)
    family = PotentialFamily(FamilyKind.EXPLICIT, psis, phis, True, cost)
    if cost is not None:
        violation = family.max_violation()
        if violation > get_settings().feasibility_tol:
            raise DomainError(f"Couple hors de la famille duale du coût (violation {violation:.3e})")
    return family


def cost_dual(cost: CostMatrix, rng: Optional[np.random.Generator] = None,
              samples: int = 256) -> PotentialFamily:
    """
    Famille duale d'un coût {(psi, phi) : psi ⊕ phi <= c}

    Sommets duaux exacts sur les petits espaces, sinon réduction aux couples
    (-phi, Q^c phi) avec phi aléatoire.
    """
    settings = get_settings()
    n, m = cost.shape
    if max(n, m) <= settings.vertex_enumeration_max_points:
        psis, phis = dual_vertices(cost)
        return PotentialFamily(FamilyKind.COST_DUAL, psis, phis, True, cost)
    if n != m:
        raise InvalidCostError("La réduction Q^c requiert un coût carré")
    rng = rng if rng is not None else np.random.default_rng(settings.seed)
    raw = [cost.C[:, k] for k in range(m)] + list(rng.uniform(0.0, cost.diameter, (samples, n)))
    psis = np.array([-phi for phi in raw])
    phis = np.array([c_transform(phi, cost) for phi in raw])
    logger.warning(f"Famille duale de coût {n}x{m} réduite à {len(raw)} couples (-phi, Q^c phi), non exacte")
    return PotentialFamily(FamilyKind.COST_DUAL, psis, phis, False, cost)


def family_from_spec(spec: dict, n: int, cost: Optional[CostMatrix] = None,
                     mu: Optional[ProbMeasure] = None) -> PotentialFamily:
    """Construit une famille à partir de sa description de configuration"""
    kind = FamilyKind(spec["kind"])
    if kind is FamilyKind.LIPSCHITZ_BALL:
        if cost is None:
            raise InvalidCostError("La boule de Lipschitz requiert une métrique")
        return lipschitz_ball(cost, mu)
    if kind is FamilyKind.UNIT_SUP_BALL:
        return unit_sup_ball(n)
    if kind is FamilyKind.CHI_BALL:
        return chi_ball(spec["chi"])
    if kind is FamilyKind.COST_DUAL:
        if cost is None:
            raise InvalidCostError("La famille duale requiert un coût")
        return cost_dual(cost)
    pairs = [(p.get("psi", [-x for x in p["phi"]]), p["phi"]) for p in spec["pairs"]]
    return explicit_family(pairs, cost)
