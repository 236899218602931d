# Tensorisation des inégalités de transport et propriété sans dimension
from tensor.tensorization import (
    tensorize_alpha, tensorize_many, tensorize_n, verify_product_tci, marginal_consistency_check,
    PRODUCT_STEP
)
from tensor.diagnostics import dimension_free_diagnostic
