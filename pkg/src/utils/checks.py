"""
Numerical Checks and Tolerances

Boolean validators for the matrix invariants shared by every module
(Hermiticity, unit trace, positivity, normalization, orthonormality).
The tolerances are stated once here and imported everywhere else.
"""

from typing import Sequence

import numpy as np


HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
EIGEN_TOL = 1e-9


def validate_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    """
    Check that a square matrix equals its conjugate transpose.

    Args:
        matrix: Square complex matrix
        tol: Maximum allowed entrywise deviation (default: 1e-10)

    Returns:
        True if the matrix is Hermitian within tolerance, False otherwise

    Examples:
        >>> validate_hermitian(np.array([[0, 1j], [-1j, 0]]))
        True
        >>> validate_hermitian(np.array([[0, 1], [0, 0]]))
        False
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    if matrix.size == 0:
        return True
    return bool(np.max(np.abs(matrix - matrix.conj().T)) <= tol)


def validate_unit_trace(matrix: np.ndarray, tol: float = TRACE_TOL) -> bool:
    """
    Check that the trace of a matrix is 1.

    Args:
        matrix: Square matrix
        tol: Allowed deviation of the trace from 1 (default: 1e-10)

    Returns:
        True if |Tr(matrix) - 1| <= tol
    """
    return bool(abs(np.trace(np.asarray(matrix)) - 1.0) <= tol)


def validate_positive(eigenvalues: Sequence[float], tol: float = POSITIVITY_TOL) -> bool:
    """
    Check that a spectrum has no eigenvalue below -tol.

    Args:
        eigenvalues: Real eigenvalues of a Hermitian matrix
        tol: Allowed negative excursion (default: 1e-10)

    Returns:
        True if every eigenvalue is >= -tol
    """
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    if eigenvalues.size == 0:
        return True
    return bool(np.min(eigenvalues) >= -tol)


def validate_normalized(vector: np.ndarray, tol: float = NORM_TOL) -> bool:
    """
    Check that a vector has unit Euclidean norm.

    Args:
        vector: Complex vector
        tol: Allowed deviation of the squared norm from 1 (default: 1e-10)

    Returns:
        True if the vector is normalized within tolerance
    """
    vector = np.asarray(vector)
    return bool(abs(np.vdot(vector, vector).real - 1.0) <= tol)


def validate_eigenpairs(
    matrix: np.ndarray,
    eigenvalues: Sequence[float],
    eigenvectors: np.ndarray,
    tol: float = EIGEN_TOL,
) -> bool:
    """
    Check the residual max |M v - lambda v| of an eigendecomposition.

    Args:
        matrix: Square matrix M
        eigenvalues: Eigenvalues, one per column of eigenvectors
        eigenvectors: Eigenvectors as columns
        tol: Allowed residual relative to max(1, ||M||) (default: 1e-9)

    Returns:
        True if every eigenpair satisfies M v = lambda v within tolerance
    """
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return True
    eigenvectors = np.asarray(eigenvectors)
    residual = matrix @ eigenvectors - eigenvectors * np.asarray(eigenvalues)
    scale = max(1.0, float(np.linalg.norm(matrix)))
    return bool(np.max(np.abs(residual)) <= tol * scale)


def validate_orthonormal(rows: np.ndarray, tol: float = NORM_TOL) -> bool:
    """
    Check that the rows of a matrix form an orthonormal set.

    Args:
        rows: Matrix whose rows are the vectors to check
        tol: Maximum entrywise deviation of the Gram matrix from identity

    Returns:
        True if the Gram matrix equals identity within tolerance

    Examples:
        >>> validate_orthonormal(np.eye(3))
        True
    """
    rows = np.atleast_2d(np.asarray(rows))
    gram = rows.conj() @ rows.T
    return bool(np.max(np.abs(gram - np.eye(rows.shape[0]))) <= tol)
