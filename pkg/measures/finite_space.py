#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Espaces finis et mesures de probabilité.
Toutes les valeurs sont immuables après construction.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from measures.errors import DimensionMismatchError, InvalidMeasureError

logger = logging.getLogger("tcilab.measures")

# Tolérance d'appartenance au simplexe
SIMPLEX_TOL = 1e-12


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """
    Espace fini indexé par 0..n-1

    Attributes:
        n (int): Nombre de points
        labels (tuple, optional): Noms des points, distincts
        coords (np.ndarray, optional): Coordonnées dans R^q, forme (n, q)
        factors (tuple, optional): Facteurs (X1, X2) lorsque l'espace est un produit
    """
    n: int
    labels: Optional[Tuple[str, ...]] = None
    coords: Optional[np.ndarray] = None
    factors: Optional[Tuple["FiniteSpace", "FiniteSpace"]] = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.n) < 1:
            raise InvalidMeasureError(f"Un espace fini contient au moins un point (n={self.n})")
        object.__setattr__(self, "n", int(self.n))
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if len(labels) != self.n:
                raise DimensionMismatchError(f"{len(labels)} étiquettes pour {self.n} points")
            if len(set(labels)) != len(labels):
                raise InvalidMeasureError("Les étiquettes des points doivent être distinctes")
            object.__setattr__(self, "labels", labels)
        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            if coords.ndim == 1:
                coords = coords[:, None]
            if coords.shape[0] != self.n:
                raise DimensionMismatchError(f"{coords.shape[0]} coordonnées pour {self.n} points")
            object.__setattr__(self, "coords", _frozen(coords))

    @property
    def is_product(self) -> bool:
        return self.factors is not None

    def label(self, i: int) -> str:
        """Nom du point i (son indice à défaut d'étiquette)"""
        return self.labels[i] if self.labels is not None else str(i)

    def index_of(self, point) -> int:
        """Indice d'un point donné par son indice ou son étiquette"""
        if isinstance(point, (int, np.integer)):
            if not 0 <= int(point) < self.n:
                raise DimensionMismatchError(f"Point {point} hors de l'espace à {self.n} points")
            return int(point)
        if self.labels is not None and str(point) in self.labels:
            return self.labels.index(str(point))
        raise DimensionMismatchError(f"Point inconnu: {point}")

    def check_same(self, other: "FiniteSpace"):
        """Vérifie que deux espaces ont la même taille"""
        if self.n != other.n:
            raise DimensionMismatchError(f"Espaces de tailles différentes: {self.n} et {other.n}")


@dataclass(frozen=True, eq=False)
class ProbMeasure:
    """
    Mesure de probabilité sur un espace fini

    Les poids sont validés à 1e-12 près puis renormalisés une seule fois.
    """
    space: FiniteSpace
    w: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=float).ravel()
        if w.shape[0] != self.space.n:
            raise DimensionMismatchError(f"{w.shape[0]} poids pour un espace à {self.space.n} points")
        if not np.all(np.isfinite(w)):
            raise InvalidMeasureError("Poids non finis")
        if np.any(w < -SIMPLEX_TOL):
            raise InvalidMeasureError(f"Poids négatif: {w.min()}")
        total = w.sum()
        if abs(total - 1.0) > SIMPLEX_TOL * max(1, w.shape[0]):
            raise InvalidMeasureError(f"La somme des poids vaut {total!r} au lieu de 1")
        w = np.clip(w, 0.0, None)
        w = w / w.sum()
        object.__setattr__(self, "w", _frozen(w))

    @classmethod
    def from_weights(cls, weights: Iterable[float], space: Optional[FiniteSpace] = None) -> "ProbMeasure":
        """Construit une mesure, sur un espace anonyme si aucun n'est fourni"""
        w = np.asarray(list(weights) if not isinstance(weights, np.ndarray) else weights, dtype=float)
        return cls(space if space is not None else FiniteSpace(len(w)), w)

    @classmethod
    def from_counts(cls, counts: Sequence[int], space: Optional[FiniteSpace] = None) -> "ProbMeasure":
        """Mesure empirique counts/n"""
        counts = np.asarray(counts, dtype=float)
        if counts.sum() <= 0:
            raise InvalidMeasureError("Aucune observation")
        return cls.from_weights(counts / counts.sum(), space)

    @property
    def n(self) -> int:
        return self.space.n

    def __len__(self) -> int:
        return self.space.n

    def __repr__(self) -> str:
        return f"ProbMeasure(n={self.n}, w={np.array2string(self.w, precision=6)})"

    def mass(self, subset: Iterable[int]) -> float:
        """Masse d'un sous-ensemble de points"""
        idx = sorted({self.space.index_of(i) for i in subset})
        return float(self.w[idx].sum()) if idx else 0.0

    def mean(self, values: np.ndarray) -> float:
        """Intégrale d'une fonction sur l'espace"""
        values = np.asarray(values, dtype=float)
        if values.shape[0] != self.n:
            raise DimensionMismatchError(f"Fonction de taille {values.shape[0]} sur {self.n} points")
        support = self.w > 0
        return float(np.dot(self.w[support], values[support]))


def check_same_space(*measures: ProbMeasure):
    """Vérifie que toutes les mesures vivent sur des espaces de même taille"""
    first = measures[0]
    for other in measures[1:]:
        first.space.check_same(other.space)


def dirac(space: FiniteSpace, point) -> ProbMeasure:
    """Masse de Dirac au point donné"""
    w = np.zeros(space.n)
    w[space.index_of(point)] = 1.0
    return ProbMeasure(space, w)


def uniform(space: FiniteSpace) -> ProbMeasure:
    """Mesure uniforme"""
    return ProbMeasure(space, np.full(space.n, 1.0 / space.n))


def support(mu: ProbMeasure) -> np.ndarray:
    """Indices des points de masse strictement positive"""
    return np.flatnonzero(mu.w > 0)


def is_dirac(mu: ProbMeasure) -> bool:
    return len(support(mu)) == 1
