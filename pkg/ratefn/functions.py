#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Fonctions croissantes et fonctions de la classe C.

Une fonction de la classe C est convexe, croissante, continue à gauche sur
[0, +inf), nulle en 0 et à valeurs dans [0, +inf]. Les formes closes portent
leur conjuguée exacte; les autres passent par un échantillonnage affine par
morceaux et la transformée de Legendre discrète.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.settings import get_settings
from measures.errors import DomainError, NotInClassError
from ratefn.legendre import lower_hull, pl_conjugate

logger = logging.getLogger("tcilab.ratefn")

# au-delà d'un domaine fini, un point à 1e-12 près du bord compte comme le bord
EDGE_RTOL = 1e-12


class IncreasingFunction(ABC):
    """
    Fonction croissante, continue à gauche sur [0, +inf)

    Les sous-classes implémentent _evaluate sur des tableaux de t >= 0.
    """

    @abstractmethod
    def _evaluate(self, t: np.ndarray) -> np.ndarray:
        ...

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(np.isnan(arr)) or np.any(arr < 0):
            raise DomainError(f"Évaluation en t < 0 ou NaN: {t}")
        out = np.asarray(self._evaluate(np.atleast_1d(arr).ravel()), dtype=float).reshape(arr.shape)
        return float(out) if arr.ndim == 0 else out

    @property
    def domain_end(self) -> float:
        """Borne du domaine où la fonction est finie"""
        return math.inf

    @property
    def closed_end(self) -> bool:
        """La fonction est-elle finie en domain_end"""
        return False

    @property
    def sup_value(self) -> float:
        """alpha(+inf) = lim_{t -> inf} alpha(t)"""
        return math.inf

    @property
    def is_convex(self) -> bool:
        return False

    def inverse(self, y: float) -> float:
        """inf {t >= 0 : f(t) >= y} par dichotomie"""
        y = float(y)
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        if self(0.0) >= y:
            return 0.0
        if y > self.sup_value:
            raise DomainError(f"y = {y} dépasse le supremum {self.sup_value}")
        tol = get_settings().inverse_tol
        lo = 0.0
        if math.isfinite(self.domain_end):
            hi = self.domain_end
            if self(hi) < y:
                # fonction infinie juste après le bord
                return hi
        else:
            hi = 1.0
            while self(hi) < y:
                lo, hi = hi, 2.0 * hi
                if hi > 1e300:
                    raise DomainError(f"y = {y} non atteint")
        while hi - lo > tol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if self(mid) >= y:
                hi = mid
            else:
                lo = mid
        return hi

    def hull_points(self, t_max: float, points: int) -> Tuple[np.ndarray, np.ndarray]:
        """Points finis du graphe dont l'enveloppe convexe inférieure est la régularisée"""
        grid = _window(self, t_max, points)
        values = self(grid)
        finite = np.isfinite(values)
        return grid[finite], values[finite]

    def to_spec(self) -> dict:
        raise NotImplementedError(f"{type(self).__name__} n'a pas de forme de configuration")


class RateFunction(IncreasingFunction):
    """Fonction de la classe C"""

    @property
    def is_convex(self) -> bool:
        return True

    def in_class(self) -> bool:
        return True

    def conjugate(self) -> "RateFunction":
        """Conjuguée monotone s -> sup_{t>=0} (st - alpha(t))"""
        return self.discretize().conjugate()

    def discretize(self, t_max: Optional[float] = None, points: Optional[int] = None) -> "Sampled":
        """
        Interpolation affine par morceaux sur [0, t_max]

        Au-delà de t_max la fonction est prolongée par la pente de la dernière
        corde si elle y est finie.
        """
        settings = get_settings()
        t_max = t_max if t_max is not None else settings.t_max
        points = points or settings.grid_points
        grid = _window(self, t_max, points)
        values = self(grid)
        if not np.all(np.isfinite(values)):
            keep = np.isfinite(values)
            grid, values = grid[keep], values[keep]
        right_slope = None
        if self.domain_end > t_max and grid.shape[0] > 1:
            right_slope = float((values[-1] - values[-2]) / (grid[-1] - grid[-2]))
        return Sampled(grid, values, right_slope)


def _window(f: IncreasingFunction, t_max: float, points: int) -> np.ndarray:
    end = f.domain_end
    if end <= 0.0:
        return np.array([0.0])
    if end <= t_max:
        if f.closed_end:
            return np.linspace(0.0, end, points)
        return np.linspace(0.0, end * (1.0 - 1e-6), points)
    return np.linspace(0.0, t_max, points)


# --- formes closes -------------------------------------------------------


@dataclass(frozen=True)
class Quadratic(RateFunction):
    """a t^2, a > 0"""
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise NotInClassError(f"Coefficient quadratique non positif: {self.a}")

    def _evaluate(self, t):
        return self.a * t ** 2

    def conjugate(self):
        return Quadratic(1.0 / (4.0 * self.a))

    def inverse(self, y):
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        return math.sqrt(y / self.a)

    def to_spec(self):
        return {"form": "quadratic", "a": self.a}


def pinsker() -> Quadratic:
    """t^2 / 2"""
    return Quadratic(0.5)


@dataclass(frozen=True)
class SqrtForm(RateFunction):
    """(sqrt(t/M + 1) - 1)^2, M > 0"""
    M: float

    def __post_init__(self):
        if not self.M > 0:
            raise NotInClassError(f"Paramètre M non positif: {self.M}")

    def _evaluate(self, t):
        u = t / self.M
        # sqrt(u+1) - 1 = u / (sqrt(u+1) + 1) sans annulation
        return (u / (np.sqrt(u + 1.0) + 1.0)) ** 2

    def conjugate(self):
        return Bernstein(self.M)

    def inverse(self, y):
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        return self.M * (y + 2.0 * math.sqrt(y))

    def to_spec(self):
        return {"form": "sqrt", "M": self.M}


@dataclass(frozen=True)
class Bernstein(RateFunction):
    """(Ms)^2 / (1 - Ms) sur [0, 1/M), +inf au-delà"""
    M: float

    def __post_init__(self):
        if not self.M > 0:
            raise NotInClassError(f"Paramètre M non positif: {self.M}")

    def _evaluate(self, t):
        x = self.M * t
        out = np.full_like(x, math.inf)
        inside = x < 1.0
        out[inside] = x[inside] ** 2 / (1.0 - x[inside])
        return out

    @property
    def domain_end(self):
        return 1.0 / self.M

    def conjugate(self):
        return SqrtForm(self.M)

    def inverse(self, y):
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        return 0.5 * (-y + math.sqrt(y * y + 4.0 * y)) / self.M

    def to_spec(self):
        return {"form": "bernstein", "M": self.M}


@dataclass(frozen=True)
class Linear(RateFunction):
    """a t, a >= 0 (a = 0 donne la fonction nulle)"""
    a: float

    def __post_init__(self):
        if self.a < 0:
            raise NotInClassError(f"Pente négative: {self.a}")

    def _evaluate(self, t):
        return self.a * t

    @property
    def sup_value(self):
        return math.inf if self.a > 0 else 0.0

    def conjugate(self):
        return Threshold(self.a)

    def inverse(self, y):
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        if y == 0:
            return 0.0
        if self.a == 0:
            raise DomainError(f"y = {y} dépasse le supremum 0")
        return y / self.a

    def to_spec(self):
        if self.a == 0:
            return {"form": "zero"}
        return {"form": "linear", "a": self.a}


def zero() -> Linear:
    return Linear(0.0)


def is_zero(f: IncreasingFunction) -> bool:
    return isinstance(f, Linear) and f.a == 0


@dataclass(frozen=True)
class Threshold(RateFunction):
    """0 sur [0, D], +inf au-delà; D = 0 donne l'indicatrice de {0}"""
    D: float

    def __post_init__(self):
        if self.D < 0:
            raise NotInClassError(f"Seuil négatif: {self.D}")

    def _evaluate(self, t):
        edge = self.D + EDGE_RTOL * max(1.0, self.D)
        return np.where(t <= edge, 0.0, math.inf)

    @property
    def domain_end(self):
        return self.D

    @property
    def closed_end(self):
        return True

    def conjugate(self):
        return Linear(self.D)

    def inverse(self, y):
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        return 0.0 if y == 0 else self.D

    def hull_points(self, t_max, points):
        return np.array([0.0, min(self.D, t_max)]), np.zeros(2)

    def to_spec(self):
        return {"form": "threshold", "D": self.D}


@dataclass(frozen=True)
class MaxOf(RateFunction):
    """Maximum ponctuel de fonctions de la classe C"""
    parts: Tuple[RateFunction, ...]

    def __post_init__(self):
        if not self.parts:
            raise NotInClassError("Maximum d'une liste vide")
        object.__setattr__(self, "parts", tuple(self.parts))

    def _evaluate(self, t):
        return np.max(np.vstack([part(t) for part in self.parts]), axis=0)

    @property
    def domain_end(self):
        return min(part.domain_end for part in self.parts)

    @property
    def closed_end(self):
        end = self.domain_end
        return all(part.closed_end for part in self.parts if part.domain_end == end)

    @property
    def sup_value(self):
        return max(part.sup_value for part in self.parts)

    def inverse(self, y):
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        candidates = [part.inverse(y) for part in self.parts if part.sup_value >= y]
        if not candidates:
            raise DomainError(f"y = {y} dépasse le supremum {self.sup_value}")
        return min(candidates)

    def to_spec(self):
        return {"form": "max", "of": [part.to_spec() for part in self.parts]}


@dataclass(frozen=True)
class ShiftedFloor(RateFunction):
    """
    max(0, outer * base(inner * t) - shift)

    Args:
        base (RateFunction): Fonction de base f
        outer (float): Facteur c > 0
        inner (float): Facteur b > 0
        shift (float): Décalage k >= 0
    """
    base: RateFunction
    outer: float = 1.0
    inner: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if not (self.outer > 0 and self.inner > 0):
            raise NotInClassError(f"Facteurs non positifs: ({self.outer}, {self.inner})")
        if self.shift < 0:
            raise NotInClassError(f"Décalage négatif: {self.shift}")

    def _evaluate(self, t):
        return np.maximum(0.0, self.outer * self.base(self.inner * t) - self.shift)

    @property
    def domain_end(self):
        return self.base.domain_end / self.inner

    @property
    def closed_end(self):
        return self.base.closed_end

    @property
    def sup_value(self):
        return max(0.0, self.outer * self.base.sup_value - self.shift)

    def conjugate(self):
        if self.shift == 0:
            # (c f(b.))^⊛(s) = c f^⊛(s / (b c))
            return ShiftedFloor(self.base.conjugate(), self.outer, 1.0 / (self.inner * self.outer), 0.0)
        return super().conjugate()

    def inverse(self, y):
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        if y == 0:
            return 0.0
        return self.base.inverse((y + self.shift) / self.outer) / self.inner

    def to_spec(self):
        return {"form": "shifted", "base": self.base.to_spec(), "outer": self.outer,
                "inner": self.inner, "shift": self.shift}


# --- forme échantillonnée --------------------------------------------------


class Sampled(RateFunction):
    """
    Interpolation affine de points (t_k, v_k), t_0 = 0

    Au-delà de t_K: +inf si right_slope est None, prolongement affine sinon.
    La continuité à gauche au bord est assurée par la valeur finie v_K.
    """

    def __init__(self, t, v, right_slope: Optional[float] = None):
        t = np.array(t, dtype=float).ravel()
        v = np.array(v, dtype=float).ravel()
        if t.shape != v.shape or t.size == 0:
            raise NotInClassError(f"Points de rupture incohérents: {t.shape} vs {v.shape}")
        if t[0] != 0.0:
            raise NotInClassError(f"Le premier point doit être t = 0 (t_0 = {t[0]})")
        if np.any(np.diff(t) <= 0):
            raise NotInClassError("Points de rupture non strictement croissants")
        if not np.all(np.isfinite(v)):
            raise NotInClassError("Valeurs échantillonnées non finies")
        tol = get_settings().convexity_tol
        scale = max(1.0, float(np.abs(v).max()))
        if np.any(np.diff(v) < -tol * scale):
            raise NotInClassError("Fonction échantillonnée décroissante")
        slopes = np.diff(v) / np.diff(t)
        if slopes.size > 1:
            slope_scale = max(1.0, float(np.abs(slopes).max()))
            if np.any(np.diff(slopes) < -tol * slope_scale * 1e3):
                raise NotInClassError(f"Fonction échantillonnée non convexe ({np.diff(slopes).min():.3e})")
        if right_slope is not None:
            right_slope = float(right_slope)
            last = float(slopes[-1]) if slopes.size else 0.0
            if right_slope < 0 or right_slope < last - tol * max(1.0, abs(last)) * 1e3:
                raise NotInClassError(f"Pente à droite {right_slope} incompatible avec la convexité")
        t.setflags(write=False)
        v.setflags(write=False)
        self.t = t
        self.v = v
        self.right_slope = right_slope

    def __repr__(self):
        return f"Sampled(K={self.t.size}, t_end={self.t[-1]:.6g}, right_slope={self.right_slope})"

    def _evaluate(self, t):
        end = self.t[-1]
        out = np.interp(t, self.t, self.v)
        beyond = t > end
        if self.right_slope is None:
            edge = end + EDGE_RTOL * max(1.0, end)
            out[beyond] = np.where(t[beyond] <= edge, self.v[-1], math.inf)
        else:
            out[beyond] = self.v[-1] + self.right_slope * (t[beyond] - end)
        return out

    @property
    def domain_end(self):
        return float(self.t[-1]) if self.right_slope is None else math.inf

    @property
    def closed_end(self):
        return True

    @property
    def sup_value(self):
        if self.right_slope is None or self.right_slope > 0:
            return math.inf
        return float(self.v[-1])

    def in_class(self) -> bool:
        return abs(self.v[0]) <= get_settings().convexity_tol

    def conjugate(self):
        s, values, right_slope = pl_conjugate(self.t, self.v, self.right_slope)
        return Sampled(s, values, right_slope)

    def inverse(self, y):
        y = float(y)
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        if self.v[0] >= y:
            return 0.0
        if y <= self.v[-1]:
            k = int(np.searchsorted(self.v, y, side="left"))
            t0, t1, v0, v1 = self.t[k - 1], self.t[k], self.v[k - 1], self.v[k]
            return float(t0 + (y - v0) * (t1 - t0) / (v1 - v0))
        if self.right_slope is None:
            return float(self.t[-1])
        if self.right_slope <= 0:
            raise DomainError(f"y = {y} dépasse le supremum {self.v[-1]}")
        return float(self.t[-1] + (y - self.v[-1]) / self.right_slope)

    def hull_points(self, t_max, points):
        return self.t, self.v

    def discretize(self, t_max=None, points=None):
        return self

    def to_spec(self):
        spec = {"form": "sampled", "t": self.t.tolist(), "v": self.v.tolist()}
        if self.right_slope is not None:
            spec["right_slope"] = self.right_slope
        return spec


# --- fonctions croissantes non convexes -----------------------------------


class Infinite(IncreasingFunction):
    """Constante +inf, y compris en 0 (transformée de Cramér d'une constante négative)"""

    def _evaluate(self, t):
        return np.full_like(t, math.inf)

    @property
    def domain_end(self):
        return -math.inf

    def inverse(self, y):
        return 0.0

    def hull_points(self, t_max, points):
        return np.empty(0), np.empty(0)

    def __repr__(self):
        return "Infinite()"


class MinOf(IncreasingFunction):
    """Minimum ponctuel exact d'une famille de fonctions croissantes"""

    def __init__(self, members):
        members = tuple(members)
        if not members:
            raise NotInClassError("Minimum d'une famille vide")
        self.members = members

    def __repr__(self):
        return f"MinOf({len(self.members)} membres)"

    def _evaluate(self, t):
        return np.min(np.vstack([member(t) for member in self.members]), axis=0)

    @property
    def domain_end(self):
        return max(member.domain_end for member in self.members)

    @property
    def closed_end(self):
        end = self.domain_end
        return any(member.closed_end for member in self.members if member.domain_end == end)

    @property
    def sup_value(self):
        return min(member.sup_value for member in self.members)

    def hull_points(self, t_max, points):
        # l'épigraphe du minimum est la réunion des épigraphes
        parts = [member.hull_points(t_max, points) for member in self.members]
        t = np.concatenate([p[0] for p in parts])
        v = np.concatenate([p[1] for p in parts])
        return t, v


class StepFunction(IncreasingFunction):
    """
    Fonction en escalier continue à gauche

    f(t) = values[k] pour t dans (levels[k-1], levels[k]], f(t) = values[0]
    pour t <= levels[0] et +inf au-delà de levels[-1].
    """

    def __init__(self, levels, values, tol: float = 1e-12):
        levels = np.array(levels, dtype=float).ravel()
        values = np.array(values, dtype=float).ravel()
        if levels.shape != values.shape or levels.size == 0:
            raise NotInClassError(f"Escalier incohérent: {levels.shape} vs {values.shape}")
        if np.any(np.diff(levels) <= 0):
            raise NotInClassError("Niveaux non strictement croissants")
        if np.any(np.diff(values) < 0):
            raise NotInClassError("Escalier décroissant")
        self.levels = levels
        self.values = values
        self.tol = tol

    def __repr__(self):
        return f"StepFunction({self.levels.size} marches, t_max={self.levels[-1]:.6g})"

    def _evaluate(self, t):
        idx = np.searchsorted(self.levels, t - self.tol, side="left")
        out = np.full(t.shape, math.inf)
        inside = idx < self.levels.size
        out[inside] = self.values[idx[inside]]
        return out

    @property
    def domain_end(self):
        return float(self.levels[-1])

    @property
    def closed_end(self):
        return True

    @property
    def sup_value(self):
        return math.inf

    def hull_points(self, t_max, points):
        # coins droits des marches: (levels[k], values[k]) et le point de départ
        t = np.concatenate([[0.0], self.levels])
        v = np.concatenate([[self.values[0]], self.values])
        return t, v

    def inverse(self, y):
        y = float(y)
        if y < 0:
            raise DomainError(f"Inverse généralisé en y < 0: {y}")
        if self.values[0] >= y:
            return 0.0
        k = int(np.searchsorted(self.values, y, side="left"))
        if k >= self.values.size:
            return float(self.levels[-1])
        return float(self.levels[k - 1])


def regularize_points(t: np.ndarray, v: np.ndarray, right_slope_from_hull: bool) -> Sampled:
    """Enveloppe convexe inférieure de points finis, renvoyée sous forme échantillonnée"""
    order = np.lexsort((v, t))
    t, v = t[order], v[order]
    # un seul point par abscisse: la plus petite valeur
    first = np.concatenate([[True], np.diff(t) > 0])
    t, v = t[first], v[first]
    if t[0] > 0:
        raise NotInClassError("Aucun point fini en t = 0")
    idx = lower_hull(t, v)
    th, vh = t[idx], v[idx]
    right_slope = None
    if right_slope_from_hull:
        right_slope = float((vh[-1] - vh[-2]) / (th[-1] - th[-2])) if th.size > 1 else 0.0
    return Sampled(th, np.maximum.accumulate(vh), right_slope)
