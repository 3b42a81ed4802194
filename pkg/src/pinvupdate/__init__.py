"""Moore-Penrose inverse of low-rank perturbations ``A - X Y^*``."""

from .matrix_core import (
    DEFAULT_TOL,
    DecompositionError,
    DimensionError,
    NumericalError,
    PreconditionError,
    TolerancePolicy,
    adjoint,
    approx_equal,
    as_matrix,
    numerical_rank,
    penrose_residuals,
    pinv_oracle,
)
from .generate import InfeasibleError, InstanceKind, generate_instance, random_dims
from .projector_ops import (
    complement_orthoproj,
    is_idempotent,
    orthoproj_pinv,
    orthoproj_resolvent,
    pinv_via_inner,
)
from .update_engine import (
    ConditionReport,
    Formula,
    UpdateResult,
    check_conditions,
    check_rank_conditions,
    smw_pinv,
    update,
    update_pinv_general,
    update_pinv_special,
    verify_converse_general,
    verify_converse_special,
)

__version__ = "0.1.0"
