# Coûts, transport optimal discret et oracles exacts
from transport.cost import (
    CostKind, CostMatrix, hamming, line_metric, euclidean_metric, power_cost,
    scaled_cost, chi_metric, tensor_cost
)
from transport.solver import (
    Coupling, DualPotentials, OTResult, solve_ot, solve_dual, kr_dual_norm,
    c_transform, chi_tv_identity_check
)
from transport.exact import solve_ot_exact, to_fraction
from transport.vertices import dual_vertices, lipschitz_vertices, transport_values
