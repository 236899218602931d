# Calcul dans la classe C: conjuguées, inf-convolutions, régularisations
from ratefn.functions import (
    IncreasingFunction, RateFunction, Quadratic, SqrtForm, Bernstein, Linear, Threshold,
    MaxOf, ShiftedFloor, Sampled, Infinite, MinOf, StepFunction, pinsker, zero, is_zero
)
from ratefn.legendre import lower_hull, pl_conjugate
from ratefn.calculus import (
    monotone_conjugate, scale, rescale, inf_convolution, inf_convolution_many,
    pointwise_max, generalized_inverse, sup_value, convex_regularization
)
from ratefn.spec import rate_from_spec, rate_to_spec
