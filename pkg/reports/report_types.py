#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Types de rapports produits par les vérifications et les expériences.
Chaque rapport se sérialise en dictionnaire (JSON) et en lignes (CSV).
"""

import math
from dataclasses import dataclass, field, fields, asdict
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class Verdict(Enum):
    """Issue d'une vérification"""
    PASS = "pass"         # inégalité vérifiée
    FAIL = "fail"         # inégalité falsifiée, témoin fourni
    INFO = "info"         # valeurs seules, sans critère de validité


def _plain(value):
    """Conversion des types numpy et des infinis pour la sérialisation"""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return value
    return value


def _restore(value):
    """Inverse de _plain pour les nombres spéciaux"""
    if isinstance(value, dict):
        return {k: _restore(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_restore(v) for v in value]
    if value == "inf":
        return math.inf
    if value == "-inf":
        return -math.inf
    if value == "nan":
        return math.nan
    return value


@dataclass
class Report:
    """Base commune: verdict, nom de l'opération et métadonnées libres"""
    name: str = ""
    verdict: Verdict = Verdict.INFO
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.verdict, Verdict):
            self.verdict = Verdict(self.verdict)

    @property
    def passed(self) -> bool:
        return self.verdict is not Verdict.FAIL

    def to_dict(self) -> Dict[str, Any]:
        data = _plain(asdict(self))
        data["report_type"] = type(self).__name__
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        data = _restore(dict(data))
        data.pop("report_type", None)
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    def rows(self) -> List[Dict[str, Any]]:
        """Lignes CSV: une seule ligne des champs scalaires par défaut"""
        data = self.to_dict()
        return [{k: v for k, v in data.items() if not isinstance(v, (dict, list))}]


@dataclass
class ValueReport(Report):
    """Résultat d'un calcul (coût de transport, entropie, norme...)"""
    values: Dict[str, Any] = field(default_factory=dict)

    def rows(self):
        row = {"name": self.name}
        row.update({k: v for k, v in _plain(self.values).items() if not isinstance(v, (dict, list))})
        return [row]


@dataclass
class CurveReport(Report):
    """Fonction échantillonnée: abscisses, valeurs et description"""
    x_label: str = "t"
    x: List[float] = field(default_factory=list)
    y: List[float] = field(default_factory=list)
    spec: Dict[str, Any] = field(default_factory=dict)
    exact: bool = True

    def rows(self):
        return [{self.x_label: x, "value": y} for x, y in zip(_plain(self.x), _plain(self.y))]


@dataclass
class BGReport(Report):
    """Critère dual: Lambda_{psi,phi}(s) <= alpha^⊛(s) sur la grille"""
    holds: bool = True
    worst_gap: float = -math.inf
    witness_s: Optional[float] = None
    witness_member: Optional[int] = None
    witness_psi: Optional[List[float]] = None
    witness_phi: Optional[List[float]] = None
    exact: bool = True
    grid_points: int = 0


@dataclass
class PrimalReport(Report):
    """Balayage primal: alpha(T(nu)) <= H(nu|mu) sur la grille du simplexe"""
    holds: bool = True
    worst_gap: float = -math.inf
    witness_nu: Optional[List[float]] = None
    witness_transport: Optional[float] = None
    witness_entropy: Optional[float] = None
    grid_points: int = 0
    step: float = 0.0


@dataclass
class QuadraticCapReport(Report):
    """Plafond quadratique best_alpha(t) <= t^2 / (2 sigma1^2) sur [0, s1 sigma1^2]"""
    holds: bool = True
    sigma1_sq: float = 0.0
    s1: float = 0.0
    t_limit: float = 0.0
    worst_gap: float = -math.inf
    witness_t: Optional[float] = None
    member: Optional[int] = None


@dataclass
class NecessityReport(Report):
    """Intégrales exponentielles par point de base et contrôle des membres de la famille"""
    u: float = 0.0
    p: float = 1.0
    integrals: List[float] = field(default_factory=list)
    deltas: List[float] = field(default_factory=list)
    member_integrals: List[float] = field(default_factory=list)
    member_bounds: List[float] = field(default_factory=list)
    companion_holds: bool = True


@dataclass
class ProductReport(Report):
    """Balayage de l'inégalité tensorisée sur la grille du simplexe produit"""
    holds: bool = True
    worst_gap: float = -math.inf
    witness_nu: Optional[List[float]] = None
    witness_transport: Optional[float] = None
    witness_entropy: Optional[float] = None
    grid_points: int = 0
    factor_holds: List[bool] = field(default_factory=list)


@dataclass
class DimensionFreeReport(Report):
    """Conditions nécessaires de la tensorisation sans dimension (alpha_zero est None pour une masse de Dirac)"""
    is_dirac: bool = False
    alpha_zero: Optional[bool] = False
    slopes: Dict[str, float] = field(default_factory=dict)
    slope_vanishes: bool = True


@dataclass
class MartonReport(Report):
    """Concentration mu(A^r) >= 1 - exp(-alpha(r - r_A)) par énumération des parties"""
    holds: bool = True
    worst_slack: float = math.inf
    witness_set: Optional[List[int]] = None
    witness_r: Optional[float] = None
    cells: int = 0
    basic_lemma_holds: bool = True
    basic_lemma_worst: float = math.inf
    alpha_source: str = ""


@dataclass
class ConcentrationReport(Report):
    """Fonction de concentration theta_mu(r) et sa borne"""
    r: List[float] = field(default_factory=list)
    theta: List[float] = field(default_factory=list)
    bound: List[float] = field(default_factory=list)
    holds: bool = True

    def rows(self):
        bound = self.bound or [None] * len(self.r)
        return [{"r": r, "theta": th, "bound": b}
                for r, th, b in zip(_plain(self.r), _plain(self.theta), _plain(bound))]


@dataclass
class TailCell:
    """Cellule (n, t) d'une expérience de déviation"""
    n: int
    t: float
    p_hat: float
    stderr: float
    bound: float
    verdict: Verdict
    member: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.verdict, Verdict):
            self.verdict = Verdict(self.verdict)


@dataclass
class TailReport(Report):
    """
    Queues empiriques p̂ = P(Z_n >= t) face aux bornes exp(-n alpha(t))

    Le verdict d'une cellule est PASS ssi p̂ <= borne + k·stderr; INFO si la borne n'est pas certifiée.
    """
    seed: int = 0
    replicas: int = 0
    stderr_factor: float = 3.0
    cells: List[TailCell] = field(default_factory=list)
    expectations: Dict[str, float] = field(default_factory=dict)
    norms: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        super().__post_init__()
        self.cells = [c if isinstance(c, TailCell) else TailCell(**c) for c in self.cells]

    def add_cell(self, cell: TailCell):
        self.cells.append(cell)
        if cell.verdict is Verdict.FAIL:
            self.verdict = Verdict.FAIL
        elif cell.verdict is Verdict.PASS and self.verdict is Verdict.INFO:
            self.verdict = Verdict.PASS

    @property
    def failures(self) -> List[TailCell]:
        return [c for c in self.cells if c.verdict is Verdict.FAIL]

    def rows(self):
        rows = []
        for cell in self.cells:
            row = _plain(asdict(cell))
            row["report"] = self.name
            rows.append(row)
        return rows
