#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Écriture des rapports: JSON (provenance complète) ou CSV (une ligne par cellule).
"""

import json
import logging
from pathlib import Path
from typing import Dict, Optional, Type

import pandas as pd

from measures.errors import ConfigError
from reports.report_types import (
    Report, ValueReport, CurveReport, BGReport, PrimalReport, QuadraticCapReport,
    NecessityReport, ProductReport, DimensionFreeReport, MartonReport, ConcentrationReport,
    TailReport
)

logger = logging.getLogger("tcilab.reports")

REPORT_TYPES: Dict[str, Type[Report]] = {
    cls.__name__: cls for cls in (
        Report, ValueReport, CurveReport, BGReport, PrimalReport, QuadraticCapReport,
        NecessityReport, ProductReport, DimensionFreeReport, MartonReport,
        ConcentrationReport, TailReport
    )
}


def write_report(report: Report, output_dir, fmt: str = "json", stem: Optional[str] = None) -> Path:
    """
    Écrit un rapport dans output_dir

    Args:
        report (Report): Rapport à écrire
        output_dir: Répertoire de sortie (créé si besoin)
        fmt (str): "json" ou "csv"
        stem (str, optional): Nom de fichier sans extension, par défaut le nom du rapport

    Returns:
        Path: Chemin du fichier écrit
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = stem or report.name or type(report).__name__.lower()

    if fmt == "json":
        path = output_dir / f"{stem}.json"
        with open(path, "w", encoding="utf-8") as f:
            json.dump(report.to_dict(), f, indent=2, ensure_ascii=False)
    elif fmt == "csv":
        path = output_dir / f"{stem}.csv"
        pd.DataFrame(report.rows()).to_csv(path, index=False)
    else:
        raise ConfigError(f"Format de sortie inconnu: {fmt}", field="format")

    logger.info(f"Rapport {type(report).__name__} écrit dans {path}")
    return path


def read_report(path) -> Report:
    """Relit un rapport JSON écrit par write_report"""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"JSON invalide: {e.msg}", file=str(path), line=e.lineno)
    cls = REPORT_TYPES.get(data.get("report_type", "Report"))
    if cls is None:
        raise ConfigError(f"Type de rapport inconnu: {data.get('report_type')}", file=str(path),
                          field="report_type")
    return cls.from_dict(data)


def read_csv_report(path) -> pd.DataFrame:
    return pd.read_csv(path)
