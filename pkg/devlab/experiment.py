#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Paramètres d'une expérience Monte Carlo.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from config.settings import get_settings
from measures.errors import ConfigError


@dataclass
class ExperimentConfig:
    """
    Expérience de déviation: graine, nombre de répliques, tailles et grille en t

    Args:
        seed (int): Graine 64 bits des flux Philox
        replicas (int): Nombre N de répliques par taille d'échantillon
        sample_sizes (List[int]): Tailles n des échantillons
        t_grid (List[float]): Seuils t, croissants
        block_size (int): Répliques par bloc (un flux par bloc)
        stderr_factor (float): Marge en nombre d'écarts-types
        expectation_fraction (float): Part de répliques indépendantes pour estimer E[Z_n]
        references (Dict[str, str]): Fichiers d'espace, de mesure, de coût ou de famille
    """
    seed: Optional[int] = None
    replicas: Optional[int] = None
    sample_sizes: List[int] = field(default_factory=list)
    t_grid: List[float] = field(default_factory=list)
    block_size: Optional[int] = None
    stderr_factor: Optional[float] = None
    expectation_fraction: Optional[float] = None
    references: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        settings = get_settings()
        self.seed = int(settings.seed if self.seed is None else self.seed)
        self.replicas = int(settings.replicas if self.replicas is None else self.replicas)
        self.block_size = int(settings.block_size if self.block_size is None else self.block_size)
        self.stderr_factor = float(settings.stderr_factor if self.stderr_factor is None else self.stderr_factor)
        self.expectation_fraction = float(settings.expectation_fraction if self.expectation_fraction is None
                                          else self.expectation_fraction)
        self.sample_sizes = [int(n) for n in self.sample_sizes]
        self.t_grid = [float(t) for t in self.t_grid]
        self.validate()

    def validate(self):
        """Vérifie les invariants de l'expérience"""
        if self.replicas < 1:
            raise ConfigError(f"Nombre de répliques invalide: {self.replicas}", field="replicas")
        if self.block_size < 1:
            raise ConfigError(f"Taille de bloc invalide: {self.block_size}", field="block_size")
        if any(n < 1 for n in self.sample_sizes):
            raise ConfigError(f"Tailles d'échantillon invalides: {self.sample_sizes}", field="sample_sizes")
        if any(t < 0 for t in self.t_grid):
            raise ConfigError("Seuils t négatifs", field="t_grid")
        if any(b < a for a, b in zip(self.t_grid, self.t_grid[1:])):
            raise ConfigError("La grille en t doit être croissante", field="t_grid")
        if not 0.0 < self.expectation_fraction <= 1.0:
            raise ConfigError(f"Fraction invalide: {self.expectation_fraction}", field="expectation_fraction")

    @property
    def expectation_replicas(self) -> int:
        return max(1, int(round(self.replicas * self.expectation_fraction)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "replicas": self.replicas,
            "sample_sizes": list(self.sample_sizes),
            "t_grid": list(self.t_grid),
            "block_size": self.block_size,
            "stderr_factor": self.stderr_factor,
            "expectation_fraction": self.expectation_fraction,
            "references": dict(self.references),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        return cls(
            seed=data.get("seed"),
            replicas=data.get("replicas"),
            sample_sizes=data.get("sample_sizes", []),
            t_grid=data.get("t_grid", []),
            block_size=data.get("block_size"),
            stderr_factor=data.get("stderr_factor"),
            expectation_fraction=data.get("expectation_fraction"),
            references=data.get("references", {}),
        )

    def with_overrides(self, seed: Optional[int] = None, replicas: Optional[int] = None) -> "ExperimentConfig":
        """Copie avec la graine ou le nombre de répliques remplacés (options de ligne de commande)"""
        data = self.to_dict()
        if seed is not None:
            data["seed"] = seed
        if replicas is not None:
            data["replicas"] = replicas
        return ExperimentConfig.from_dict(data)
