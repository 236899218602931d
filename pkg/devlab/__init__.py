# Laboratoire de déviations: flux aléatoires, queues Monte Carlo, concentration, processus empiriques
from devlab.rng import RngStreams, sample_counts, sample_empirical
from devlab.experiment import ExperimentConfig
from devlab.deviation import (
    run_blocks, exceedances, tail_cell, active_members, union_family, deviation_tail, member_deviation_tail
)
from devlab.concentration import (
    enlargement, concentration_function, concentration_consistency, basic_lemma_check,
    marton_bound_check
)
from devlab.empirical import empirical_process, banach_mean_deviation, yurinskii_exponent
