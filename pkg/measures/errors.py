#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Hiérarchie des exceptions de tcilab.
Les valeurs infinies (entropie sans continuité absolue, fonctions de taux hors
de leur domaine) ne sont jamais signalées par une exception.
"""

from typing import Optional


class TcilabError(Exception):
    """Erreur de base de la bibliothèque"""


class DimensionMismatchError(TcilabError):
    """Mesures ou matrices définies sur des espaces de tailles différentes"""


class InvalidMeasureError(TcilabError):
    """Poids négatifs, somme différente de 1 ou masse nulle là où elle est requise"""


class InvalidCostError(TcilabError):
    """Matrice de coût invalide (entrée négative, diagonale non nulle, pas une métrique)"""


class NotInClassError(TcilabError):
    """Fonction hors de la classe C (non convexe, non croissante, non nulle en 0)"""


class DomainError(TcilabError):
    """Argument hors du domaine d'une opération (t < 0, p < 1, delta hors de [0, 1)...)"""


class BudgetExceededError(TcilabError):
    """Grille ou énumération trop grande pour le budget configuré"""


class SolverError(TcilabError):
    """Échec d'un solveur linéaire ou itératif"""


class ConfigError(TcilabError):
    """
    Fichier de configuration ou d'entrée mal formé

    Args:
        message (str): Description de l'erreur
        file (str, optional): Fichier concerné
        line (int, optional): Ligne fautive (erreurs de syntaxe JSON)
        field (str, optional): Chemin du champ fautif (erreurs de validation)
    """

    def __init__(self, message: str, file: Optional[str] = None,
                 line: Optional[int] = None, field: Optional[str] = None):
        self.file = file
        self.line = line
        self.field = field
        super().__init__(message)

    def __str__(self) -> str:
        location = []
        if self.file:
            location.append(self.file)
        if self.line is not None:
            location.append(f"ligne {self.line}")
        if self.field:
            location.append(f"champ '{self.field}'")
        prefix = ", ".join(location)
        message = super().__str__()
        return f"{prefix}: {message}" if prefix else message
