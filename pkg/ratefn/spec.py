#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Lecture et écriture des fonctions de taux au format de configuration
({"form": "sqrt", "M": 1.0}, {"form": "max", "of": [...]}, ...).
"""

from typing import Any, Dict

from measures.errors import ConfigError, TcilabError
from ratefn.functions import (
    Bernstein, IncreasingFunction, Linear, MaxOf, Quadratic, Sampled, ShiftedFloor,
    SqrtForm, Threshold, pinsker, zero
)


def _param(spec: Dict[str, Any], key: str, field: str) -> float:
    if key not in spec:
        raise ConfigError(f"Paramètre manquant '{key}'", field=f"{field}.{key}")
    try:
        return float(spec[key])
    except (TypeError, ValueError):
        raise ConfigError(f"Paramètre '{key}' non numérique: {spec[key]!r}", field=f"{field}.{key}")


def rate_from_spec(spec: Dict[str, Any], field: str = "alpha"):
    """
    Construit une fonction de taux à partir de sa description

    Args:
        spec (dict): Description avec la clé "form"
        field (str): Chemin du champ, pour les messages d'erreur

    Returns:
        RateFunction: Fonction construite

    Raises:
        ConfigError: forme inconnue ou paramètres invalides
    """
    if not isinstance(spec, dict) or "form" not in spec:
        raise ConfigError("Une fonction de taux est un objet avec une clé 'form'", field=field)
    form = spec["form"]
    try:
        if form == "quadratic":
            return Quadratic(_param(spec, "a", field))
        if form == "pinsker":
            return pinsker()
        if form == "sqrt":
            return SqrtForm(_param(spec, "M", field))
        if form == "bernstein":
            return Bernstein(_param(spec, "M", field))
        if form == "linear":
            return Linear(_param(spec, "a", field))
        if form == "zero":
            return zero()
        if form == "threshold":
            return Threshold(_param(spec, "D", field))
        if form == "max":
            parts = spec.get("of")
            if not isinstance(parts, list) or not parts:
                raise ConfigError("'of' doit être une liste non vide", field=f"{field}.of")
            return MaxOf(tuple(rate_from_spec(p, f"{field}.of[{k}]") for k, p in enumerate(parts)))
        if form == "shifted":
            if "base" not in spec:
                raise ConfigError("Paramètre manquant 'base'", field=f"{field}.base")
            return ShiftedFloor(
                rate_from_spec(spec["base"], f"{field}.base"),
                float(spec.get("outer", 1.0)),
                float(spec.get("inner", 1.0)),
                float(spec.get("shift", 0.0)),
            )
        if form == "sampled":
            if "t" not in spec or "v" not in spec:
                raise ConfigError("Une forme échantillonnée requiert 't' et 'v'", field=field)
            return Sampled(spec["t"], spec["v"], spec.get("right_slope"))
    except ConfigError:
        raise
    except (TcilabError, TypeError, ValueError) as e:
        raise ConfigError(f"Fonction de taux invalide: {e}", field=field)
    raise ConfigError(f"Forme inconnue: {form!r}", field=f"{field}.form")


def rate_to_spec(alpha: IncreasingFunction) -> Dict[str, Any]:
    return alpha.to_spec()
