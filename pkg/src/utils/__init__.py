"""
Numerical checks and shared tolerances
"""

from .checks import (
    validate_eigenpairs,
    validate_hermitian,
    validate_normalized,
    validate_orthonormal,
    validate_positive,
    validate_unit_trace,
)

__all__ = [
    'validate_eigenpairs',
    'validate_hermitian',
    'validate_normalized',
    'validate_orthonormal',
    'validate_positive',
    'validate_unit_trace',
]
