# Critère dual: familles de potentiels, log-Laplace, Cramér, meilleures fonctions de transport
from duality.family import (
    FamilyKind, PotentialPair, PotentialFamily, lipschitz_ball, unit_sup_ball, chi_ball,
    explicit_family, cost_dual, coordinate_ascent, family_from_spec
)
from duality.laplace import log_laplace, lambda_matrix, lambda_family, s_grid, LambdaCurve
from duality.cramer import cramer_transform, cramer_from_variable, two_sided_cramer, solve_tilt
from duality.best import best_alpha, j_phi, best_transport_brute, transport_functional
from duality.checks import bg_check, primal_check, quadratic_cap_check
