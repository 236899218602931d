# Connecteurs de fichiers: validation des entrées JSON et construction des objets du domaine
from connectors.file_connector import (
    SpaceModel, MeasureModel, CostModel, RateSpecModel, FamilySpecModel, ExperimentModel,
    read_json, validate, parse_space, parse_measure, parse_cost, parse_alpha, parse_family,
    parse_experiment, load_space, load_measure, load_cost, load_alpha, load_family, load_experiment
)
