# Critères intégraux: normes d'Orlicz, borne de Bernstein, constructeurs de fonctions de transport
from criteria.orlicz import (
    OrliczEstimate, orlicz_norm, orlicz_norm_pair, orlicz_dual_norm, centered_log_laplace,
    bernstein_bound_check
)
from criteria.constructors import (
    alpha_weighted_ckp, alpha_small_t, alpha_orlicz_nei, density_deviation, alpha_lipschitz_orlicz,
    alpha_t1_integral, alpha_dp, alpha_chi_envelope, alpha_moment, tv_entropy_bound, comparison_gap
)
from criteria.checks import centered_lipschitz_orlicz_check, necessity_check, cramer_moment_check
