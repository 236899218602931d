#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Module de configuration pour tcilab.
Centralise toutes les tolérances, grilles et budgets numériques.
"""

import os
import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Chargement des variables d'environnement depuis .env s'il existe
load_dotenv()

logger = logging.getLogger("tcilab.config")


class Settings:
    """Classe qui contient tous les paramètres de configuration"""

    def __init__(self, config_file: Optional[str] = None, strict: bool = False):
        """
        Initialise la configuration

        Args:
            config_file (str, optional): Chemin vers un fichier de configuration personnalisé
            strict (bool): Lève ConfigError si le fichier est absent ou mal formé
                au lieu de revenir aux valeurs par défaut (option --config)
        """
        self.strict = strict

        # Chemins de base
        self.base_dir = Path(__file__).parent.parent
        self.config_dir = self.base_dir / "config"

        # Fichier de configuration (par défaut ou personnalisé)
        self.config_file = config_file or os.environ.get(
            "TCILAB_CONFIG", str(self.config_dir / "default_settings.json")
        )
        self._load_config()

        # SECTION NUMERICS
        numerics = self.config.get("numerics", {})
        self.feasibility_tol = float(numerics.get("feasibility_tol", 1e-9))
        self.duality_tol = float(numerics.get("duality_tol", 1e-8))
        self.simplex_tol = float(numerics.get("simplex_tol", 1e-12))
        self.convexity_tol = float(numerics.get("convexity_tol", 1e-10))
        self.inequality_margin = float(numerics.get("inequality_margin", 1e-9))

        # SECTION TRANSPORT
        transport = self.config.get("transport", {})
        self.lp_method = transport.get("lp_method", "highs")
        self.vertex_enumeration_max_points = int(transport.get("vertex_enumeration_max_points", 4))
        self.exact_oracle_max_points = int(transport.get("exact_oracle_max_points", 5))
        self.batch_size = int(transport.get("batch_size", 100000))

        # SECTION RATEFN
        ratefn = self.config.get("ratefn", {})
        self.grid_points = int(ratefn.get("grid_points", 1025))
        self.t_max = float(ratefn.get("t_max", 10.0))
        self.rate_s_max = float(ratefn.get("s_max", 64.0))
        self.inverse_tol = float(ratefn.get("inverse_tol", 1e-10))

        # SECTION DUALITY
        duality = self.config.get("duality", {})
        self.s_grid_points = int(duality.get("s_grid_points", 1025))
        self.s_min = float(duality.get("s_min", 1e-4))
        self.s_max = float(duality.get("s_max", 64.0))
        self.s_max_cap = float(duality.get("s_max_cap", 4096.0))
        self.simplex_steps: Dict[str, float] = duality.get(
            "simplex_steps", {"2": 1e-3, "3": 5e-3, "4": 2e-2}
        )
        self.grid_budget = int(duality.get("grid_budget", 2000000))
        self.multistart = int(duality.get("multistart", 32))
        self.brute_max_points = int(duality.get("brute_max_points", 4))

        # SECTION CRITERIA
        criteria = self.config.get("criteria", {})
        self.orlicz_rtol = float(criteria.get("orlicz_rtol", 1e-12))
        self.dual_norm_tol = float(criteria.get("dual_norm_tol", 1e-10))
        self.deltas: List[float] = [float(d) for d in criteria.get("deltas", [0.25, 0.5, 0.9])]

        # SECTION DEVLAB
        devlab = self.config.get("devlab", {})
        self.seed = int(os.environ.get("TCILAB_SEED", devlab.get("seed", 20240601)))
        self.replicas = int(devlab.get("replicas", 100000))
        self.block_size = int(devlab.get("block_size", 4096))
        self.stderr_factor = float(devlab.get("stderr_factor", 3.0))
        self.expectation_fraction = float(devlab.get("expectation_fraction", 0.1))
        self.max_enumeration_points = int(devlab.get("max_enumeration_points", 20))
        self.marton_max_points = int(devlab.get("marton_max_points", 12))

        # SECTION CLI
        cli = self.config.get("cli", {})
        self.output_dir = cli.get("output_dir", "reports_out")
        self.output_format = cli.get("format", "json")
        self.log_level = os.environ.get("TCILAB_LOG_LEVEL", cli.get("log_level", "INFO"))

        # Validation
        self._validate_settings()

    def _load_config(self):
        """Charge la configuration depuis un fichier JSON"""
        # import local: measures importe déjà config.settings
        from measures.errors import ConfigError

        try:
            if os.path.exists(self.config_file):
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    self.config = json.load(f)
                    logger.debug(f"Configuration chargée depuis {self.config_file}")
            elif self.strict:
                raise ConfigError("Fichier de configuration introuvable", file=str(self.config_file))
            else:
                logger.warning(f"Fichier de configuration {self.config_file} non trouvé, utilisation des valeurs par défaut")
                self.config = {}
        except json.JSONDecodeError as e:
            if self.strict:
                raise ConfigError(f"JSON invalide: {e.msg}", file=str(self.config_file), line=e.lineno)
            logger.error(f"Erreur lors du chargement de la configuration: {e}")
            self.config = {}
        except OSError as e:
            if self.strict:
                raise ConfigError(f"Lecture impossible: {e}", file=str(self.config_file))
            logger.error(f"Erreur lors du chargement de la configuration: {e}")
            self.config = {}
        if not isinstance(self.config, dict):
            if self.strict:
                raise ConfigError("La configuration doit être un objet JSON", file=str(self.config_file))
            self.config = {}

    def _validate_settings(self):
        """Valide les paramètres de configuration"""
        if self.grid_points < 3:
            logger.warning(f"grid_points={self.grid_points} trop petit pour une grille utile")
        if self.s_max > self.s_max_cap:
            logger.warning("s_max dépasse s_max_cap, la grille adaptative ne pourra pas croître")
        if not 0.0 < self.expectation_fraction <= 1.0:
            logger.warning(f"expectation_fraction={self.expectation_fraction} hors de (0, 1]")
        if self.output_format not in ("json", "csv"):
            logger.warning(f"Format de sortie inconnu: {self.output_format}")
        for delta in self.deltas:
            if not 0.0 <= delta < 1.0:
                logger.warning(f"delta={delta} hors de [0, 1)")

    def simplex_step(self, n: int) -> float:
        """
        Pas par défaut de la grille barycentrique pour un espace à n points

        Args:
            n (int): Nombre de points de l'espace

        Returns:
            float: Pas h de la grille
        """
        step = self.simplex_steps.get(str(n))
        if step is None:
            # au-delà des tailles prévues, on garde le pas le plus grossier
            step = max(float(v) for v in self.simplex_steps.values())
        return float(step)

    def to_dict(self) -> Dict[str, Any]:
        """Représentation de la configuration courante, section par section"""
        return {
            "numerics": {
                "feasibility_tol": self.feasibility_tol,
                "duality_tol": self.duality_tol,
                "simplex_tol": self.simplex_tol,
                "convexity_tol": self.convexity_tol,
                "inequality_margin": self.inequality_margin
            },
            "transport": {
                "lp_method": self.lp_method,
                "vertex_enumeration_max_points": self.vertex_enumeration_max_points,
                "exact_oracle_max_points": self.exact_oracle_max_points,
                "batch_size": self.batch_size
            },
            "ratefn": {
                "grid_points": self.grid_points,
                "t_max": self.t_max,
                "s_max": self.rate_s_max,
                "inverse_tol": self.inverse_tol
            },
            "duality": {
                "s_grid_points": self.s_grid_points,
                "s_min": self.s_min,
                "s_max": self.s_max,
                "s_max_cap": self.s_max_cap,
                "simplex_steps": self.simplex_steps,
                "grid_budget": self.grid_budget,
                "multistart": self.multistart,
                "brute_max_points": self.brute_max_points
            },
            "criteria": {
                "orlicz_rtol": self.orlicz_rtol,
                "dual_norm_tol": self.dual_norm_tol,
                "deltas": self.deltas
            },
            "devlab": {
                "seed": self.seed,
                "replicas": self.replicas,
                "block_size": self.block_size,
                "stderr_factor": self.stderr_factor,
                "expectation_fraction": self.expectation_fraction,
                "max_enumeration_points": self.max_enumeration_points,
                "marton_max_points": self.marton_max_points
            },
            "cli": {
                "output_dir": self.output_dir,
                "format": self.output_format,
                "log_level": self.log_level
            }
        }

    def save(self, config_file: Optional[str] = None) -> bool:
        """
        Sauvegarde la configuration actuelle dans un fichier

        Args:
            config_file (str, optional): Chemin vers le fichier de destination

        Returns:
            bool: True si la sauvegarde a réussi
        """
        save_path = config_file or self.config_file

        try:
            # Créer le répertoire parent si nécessaire
            parent = os.path.dirname(save_path)
            if parent:
                os.makedirs(parent, exist_ok=True)

            with open(save_path, 'w', encoding='utf-8') as f:
                json.dump(self.to_dict(), f, indent=4)

            logger.info(f"Configuration sauvegardée dans {save_path}")
            return True
        except Exception as e:
            logger.error(f"Erreur lors de la sauvegarde de la configuration: {e}")
            return False


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Configuration partagée par les fonctions de calcul (chargée une seule fois)"""
    return Settings()
