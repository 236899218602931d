# Rapports de vérification et d'expérience
from reports.report_types import (
    Verdict, Report, ValueReport, CurveReport, BGReport, PrimalReport, QuadraticCapReport,
    NecessityReport, ProductReport, DimensionFreeReport, MartonReport, ConcentrationReport,
    TailCell, TailReport
)
from reports.report_writer import write_report, read_report, REPORT_TYPES
