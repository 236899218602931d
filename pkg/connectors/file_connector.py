#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Connecteur pour les fichiers d'entrée JSON.
Valide les descriptions d'espaces, de mesures, de coûts, de fonctions de taux,
de familles et d'expériences, puis construit les objets du domaine.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from devlab.experiment import ExperimentConfig
from duality.family import PotentialFamily, family_from_spec
from measures.errors import ConfigError, TcilabError
from measures.finite_space import FiniteSpace, ProbMeasure, dirac, uniform
from ratefn.functions import RateFunction
from ratefn.spec import rate_from_spec
from transport.cost import (
    CostKind, CostMatrix, chi_metric, euclidean_metric, hamming, line_metric, power_cost, scaled_cost
)

logger = logging.getLogger("tcilab.connectors")

Model = TypeVar("Model", bound=BaseModel)


class SpaceModel(BaseModel):
    """Espace fini: nombre de points, étiquettes et coordonnées facultatives"""
    n: int = Field(ge=1)
    labels: Optional[List[str]] = None
    coords: Optional[List[List[float]]] = None


class MeasureModel(BaseModel):
    """
    Mesure de probabilité, donnée par ses poids, des effectifs ou un nom

    Exactement une des clés weights, counts ou kind doit être présente.
    """
    space: Optional[SpaceModel] = None
    weights: Optional[List[float]] = None
    counts: Optional[List[int]] = None
    kind: Optional[Literal["uniform", "dirac"]] = None
    point: Optional[int] = None

    @model_validator(mode="after")
    def _one_source(self):
        given = [k for k in ("weights", "counts", "kind") if getattr(self, k) is not None]
        if len(given) != 1:
            raise ValueError("une mesure est décrite par exactement une clé parmi weights, counts, kind")
        if self.kind == "dirac" and self.point is None:
            raise ValueError("une masse de Dirac requiert 'point'")
        return self


class CostModel(BaseModel):
    """Coût nommé (hamming, line, euclidean, chi), matrice explicite ou transformation d'un coût de base"""
    form: Literal["hamming", "line", "euclidean", "matrix", "chi", "power", "scaled"]
    n: Optional[int] = Field(default=None, ge=1)
    matrix: Optional[List[List[float]]] = None
    metric: bool = False
    chi: Optional[List[float]] = None
    p: Optional[float] = None
    a: Optional[float] = None
    base: Optional["CostModel"] = None

    @model_validator(mode="after")
    def _required_fields(self):
        if self.form == "matrix" and self.matrix is None:
            raise ValueError("la forme 'matrix' requiert 'matrix'")
        if self.form == "chi" and self.chi is None:
            raise ValueError("la forme 'chi' requiert 'chi'")
        if self.form == "power" and (self.base is None or self.p is None):
            raise ValueError("la forme 'power' requiert 'base' et 'p'")
        if self.form == "scaled" and (self.base is None or self.a is None):
            raise ValueError("la forme 'scaled' requiert 'base' et 'a'")
        return self


CostModel.model_rebuild()


class RateSpecModel(BaseModel):
    """Fonction de taux; les paramètres dépendent de la forme"""
    model_config = ConfigDict(extra="allow")

    form: str


class PairModel(BaseModel):
    phi: List[float]
    psi: Optional[List[float]] = None


class FamilySpecModel(BaseModel):
    """Famille de potentiels (psi, phi)"""
    kind: Literal["lipschitz-ball", "unit-sup-ball", "chi-ball", "explicit", "cost-dual"]
    chi: Optional[List[float]] = None
    pairs: Optional[List[PairModel]] = None

    @model_validator(mode="after")
    def _required_fields(self):
        if self.kind == "chi-ball" and self.chi is None:
            raise ValueError("la famille 'chi-ball' requiert 'chi'")
        if self.kind == "explicit" and not self.pairs:
            raise ValueError("la famille 'explicit' requiert une liste 'pairs' non vide")
        return self


class ExperimentModel(BaseModel):
    """Expérience Monte Carlo; les champs absents prennent les valeurs de la configuration"""
    seed: Optional[int] = Field(default=None, ge=0)
    replicas: Optional[int] = Field(default=None, ge=1)
    sample_sizes: List[int] = Field(default_factory=list)
    t_grid: List[float] = Field(default_factory=list)
    block_size: Optional[int] = Field(default=None, ge=1)
    stderr_factor: Optional[float] = Field(default=None, ge=0)
    expectation_fraction: Optional[float] = None
    references: Dict[str, str] = Field(default_factory=dict)


def read_json(path) -> Any:
    """
    Lit un fichier JSON

    Raises:
        ConfigError: fichier illisible ou JSON mal formé (avec la ligne fautive)
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"JSON invalide: {e.msg}", file=str(path), line=e.lineno)
    except OSError as e:
        raise ConfigError(f"Lecture impossible: {e.strerror or e}", file=str(path))


def validate(model: Type[Model], data: Any, file: Optional[str] = None) -> Model:
    """Valide des données brutes; la première erreur pydantic devient une ConfigError"""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = ".".join(str(part) for part in first.get("loc", ()))
        raise ConfigError(first.get("msg", "valeur invalide"), file=file, field=loc or None)


def _with_file(error: TcilabError, file: Optional[str]) -> ConfigError:
    if isinstance(error, ConfigError):
        if error.file is None:
            error.file = file
        return error
    return ConfigError(str(error), file=file)


def build_space(model: SpaceModel) -> FiniteSpace:
    return FiniteSpace(model.n, labels=model.labels, coords=model.coords)


def parse_space(data: Any, file: Optional[str] = None) -> FiniteSpace:
    try:
        return build_space(validate(SpaceModel, data, file))
    except TcilabError as e:
        raise _with_file(e, file)


def parse_measure(data: Any, space: Optional[FiniteSpace] = None, file: Optional[str] = None) -> ProbMeasure:
    """
    Construit une mesure; un espace décrit dans le fichier l'emporte sur celui fourni

    Raises:
        ConfigError: description invalide ou poids hors du simplexe
    """
    model = validate(MeasureModel, data, file)
    try:
        if model.space is not None:
            space = build_space(model.space)
        if model.kind is not None and space is None:
            raise ConfigError("Une mesure nommée requiert un espace", file=file, field="space")
        if model.kind == "uniform":
            return uniform(space)
        if model.kind == "dirac":
            return dirac(space, model.point)
        if model.counts is not None:
            return ProbMeasure.from_counts(model.counts, space)
        return ProbMeasure.from_weights(model.weights, space)
    except TcilabError as e:
        raise _with_file(e, file)


def build_cost(model: CostModel, space: Optional[FiniteSpace] = None) -> CostMatrix:
    """Construit une matrice de coût, sur l'espace fourni si la forme en a besoin"""
    if model.form in ("hamming", "line"):
        target = space if space is not None else model.n
        if target is None:
            raise ConfigError(f"Le coût '{model.form}' requiert un espace ou 'n'", field="n")
        return hamming(target) if model.form == "hamming" else line_metric(target)
    if model.form == "euclidean":
        if space is None:
            raise ConfigError("Le coût 'euclidean' requiert un espace à coordonnées", field="form")
        return euclidean_metric(space)
    if model.form == "matrix":
        kind = CostKind.METRIC if model.metric else CostKind.GENERAL
        return CostMatrix(model.matrix, kind, space)
    if model.form == "chi":
        return chi_metric(model.chi, space)
    base = build_cost(model.base, space)
    if model.form == "power":
        return power_cost(base, model.p)
    return scaled_cost(base, model.a)


def parse_cost(data: Any, space: Optional[FiniteSpace] = None, file: Optional[str] = None) -> CostMatrix:
    model = validate(CostModel, data, file)
    try:
        return build_cost(model, space)
    except TcilabError as e:
        raise _with_file(e, file)


def parse_alpha(data: Any, file: Optional[str] = None) -> RateFunction:
    validate(RateSpecModel, data, file)
    try:
        return rate_from_spec(data)
    except TcilabError as e:
        raise _with_file(e, file)


def parse_family(data: Any, n: int, cost: Optional[CostMatrix] = None,
                 mu: Optional[ProbMeasure] = None, file: Optional[str] = None) -> PotentialFamily:
    model = validate(FamilySpecModel, data, file)
    try:
        return family_from_spec(model.model_dump(exclude_none=True), n, cost, mu)
    except TcilabError as e:
        raise _with_file(e, file)


def parse_experiment(data: Any, file: Optional[str] = None) -> ExperimentConfig:
    model = validate(ExperimentModel, data, file)
    try:
        return ExperimentConfig.from_dict(model.model_dump())
    except TcilabError as e:
        raise _with_file(e, file)


def load_space(path) -> FiniteSpace:
    """Charge un espace fini depuis un fichier JSON"""
    space = parse_space(read_json(path), str(path))
    logger.debug(f"Espace à {space.n} points chargé depuis {path}")
    return space


def load_measure(path, space: Optional[FiniteSpace] = None) -> ProbMeasure:
    """Charge une mesure depuis un fichier JSON"""
    mu = parse_measure(read_json(path), space, str(path))
    logger.debug(f"Mesure à {mu.n} points chargée depuis {path}")
    return mu


def load_cost(path, space: Optional[FiniteSpace] = None) -> CostMatrix:
    """Charge un coût depuis un fichier JSON"""
    cost = parse_cost(read_json(path), space, str(path))
    logger.debug(f"Coût {cost.shape} ({cost.kind.value}) chargé depuis {path}")
    return cost


def load_alpha(path) -> RateFunction:
    """Charge une fonction de taux depuis un fichier JSON"""
    return parse_alpha(read_json(path), str(path))


def load_family(path, n: int, cost: Optional[CostMatrix] = None,
                mu: Optional[ProbMeasure] = None) -> PotentialFamily:
    """Charge une famille de potentiels depuis un fichier JSON"""
    family = parse_family(read_json(path), n, cost, mu, str(path))
    logger.debug(f"Famille {family.kind.value} de {family.size} membres chargée depuis {path}")
    return family


def load_experiment(path) -> ExperimentConfig:
    """Charge une expérience Monte Carlo depuis un fichier JSON"""
    return parse_experiment(read_json(path), str(path))
