"""Cayley charts, local sections and contractible covers of Stiefel manifolds.

Matrices are numpy arrays: float64 (r, c) for real, complex128 (r, c) for
complex, float64 (r, c, 4) for quaternion entries w + x i + y j + z k.
"""

from ._core import (
    DimensionError,
    Error,
    FieldMismatch,
    InternalError,
    InvalidArgument,
    InvalidTangent,
    NotHermitian,
    NotOnManifold,
    OutsideCayleyOpen,
    RankDeficient,
    ShapeMismatch,
    SingularMatrix,
    adjoint,
    cayley,
    cayley_at,
    complete_lift,
    contraction,
    field_of,
    gamma,
    gamma_inverse,
    in_cayley_open,
    in_injectivity_domain,
    inverse,
    local_section,
    minimize_procrustes,
    minimize_rayleigh,
    multiply,
    random_stiefel_point,
    rho,
    verify_cover,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
