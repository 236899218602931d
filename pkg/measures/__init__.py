# Espaces finis, mesures de probabilité, entropie et produits
from measures.errors import (
    TcilabError, DimensionMismatchError, InvalidMeasureError, InvalidCostError,
    NotInClassError, DomainError, BudgetExceededError, SolverError, ConfigError
)
from measures.finite_space import (
    FiniteSpace, ProbMeasure, check_same_space, dirac, uniform, support, is_dirac
)
from measures.entropy import relative_entropy, entropy_batch, tv_norm, weighted_tv
from measures.products import (
    Disintegration, product_space, product_measure, product_measure_n,
    marginals, disintegrate, restrict
)
from measures.lattice import simplex_lattice, lattice_size
