"""
Linear Algebra Core

Dense complex linear algebra for the small bipartite problems of this package:
kets and density matrices with explicit subsystem dimensions, Kronecker products,
partial transposition, a cyclic Jacobi eigensolver for Hermitian matrices, trace
norm, negativity and pure-state fidelity.

Index convention (used by every module): a bipartite basis state |i>|j> has the
composite index i * dim_b + j, i.e. subsystem A is the slow index.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal, Tuple, Union

import numpy as np

from src.utils.checks import (
    HERMITIAN_TOL,
    NORM_TOL,
    POSITIVITY_TOL,
    TRACE_TOL,
    validate_eigenpairs,
    validate_hermitian,
    validate_normalized,
    validate_positive,
    validate_unit_trace,
)

logger = logging.getLogger(__name__)

Subsystem = Literal["first", "second"]

# Relative off-diagonal norm at which a Jacobi sweep is considered converged.
_JACOBI_OFF_TOL = 1e-13
_JACOBI_MAX_SWEEPS = 50


class EigenConvergenceError(RuntimeError):
    """Raised when the Jacobi iteration does not converge within its sweep budget."""


@dataclass(frozen=True, eq=False)
class Ket:
    """
    A pure state vector.

    Attributes:
        amplitudes: Complex amplitudes (read-only copy)
        normalized: Whether the unit-norm invariant is enforced
    """
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size == 0:
            raise ValueError("Ket must have at least one amplitude")
        if self.normalized and not validate_normalized(amplitudes, NORM_TOL):
            norm = float(np.linalg.norm(amplitudes))
            raise ValueError(f"Ket marked normalized has norm {norm:.15g}")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def inner(self, other: "Ket") -> complex:
        """Return <self|other>."""
        if other.dim != self.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def density(self, dim_a: int, dim_b: int = 1) -> "DensityMatrix":
        """Return the projector |psi><psi| as a density matrix with the given split."""
        return DensityMatrix.from_ket(self, dim_a, dim_b)

    @classmethod
    def basis(cls, dim: int, index: int) -> "Ket":
        """Computational basis ket |index> of C^dim."""
        if not 0 <= index < dim:
            raise ValueError(f"Basis index {index} outside 0..{dim - 1}")
        amplitudes = np.zeros(dim, dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes)


@dataclass(frozen=True, eq=False)
class BipartiteOperator:
    """
    Hermitian operator on C^dim_a (x) C^dim_b.

    Attributes:
        entries: (dim_a*dim_b) x (dim_a*dim_b) complex matrix (read-only copy)
        dim_a: Dimension of subsystem A (slow index)
        dim_b: Dimension of subsystem B (fast index)
    """
    entries: np.ndarray
    dim_a: int
    dim_b: int = 1

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError(f"Subsystem dimensions must be positive, got ({self.dim_a}, {self.dim_b})")
        entries = np.array(self.entries, dtype=complex)
        size = self.dim_a * self.dim_b
        if entries.shape != (size, size):
            raise ValueError(
                f"Dimension mismatch: declared {self.dim_a}x{self.dim_b} needs a "
                f"{size}x{size} matrix, got shape {entries.shape}"
            )
        if not validate_hermitian(entries, HERMITIAN_TOL):
            raise ValueError("Operator is not Hermitian within tolerance")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def dims(self) -> Tuple[int, int]:
        return (self.dim_a, self.dim_b)

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True, eq=False)
class DensityMatrix(BipartiteOperator):
    """
    Hermitian, unit-trace, positive semidefinite operator on C^dim_a (x) C^dim_b.
    """

    def __post_init__(self):
        super().__post_init__()
        if not validate_unit_trace(self.entries, TRACE_TOL):
            raise ValueError(f"Density matrix trace is {np.trace(self.entries).real:.15g}, expected 1")
        if not validate_positive(hermitian_eigenvalues(self.entries), POSITIVITY_TOL):
            raise ValueError("Density matrix has eigenvalues below tolerance")

    @classmethod
    def from_ket(cls, psi: Ket, dim_a: int, dim_b: int = 1) -> "DensityMatrix":
        if psi.dim != dim_a * dim_b:
            raise ValueError(f"Dimension mismatch: ket has dim {psi.dim}, declared {dim_a}x{dim_b}")
        amplitudes = psi.amplitudes
        return cls(np.outer(amplitudes, amplitudes.conj()), dim_a, dim_b)

    @classmethod
    def maximally_mixed(cls, dim_a: int, dim_b: int = 1) -> "DensityMatrix":
        size = dim_a * dim_b
        return cls(np.eye(size, dtype=complex) / size, dim_a, dim_b)

    def purity(self) -> float:
        """Tr(rho^2)."""
        return float(np.trace(self.entries @ self.entries).real)


def _as_matrix(m: Union[np.ndarray, BipartiteOperator]) -> np.ndarray:
    if isinstance(m, BipartiteOperator):
        return m.entries
    return np.asarray(m)


def tensor(a, b):
    """
    Kronecker product of two kets or two density matrices.

    The composite index of (i, j) is i * dim(b) + j. For density matrices the
    result is split as (total dim of a) x (total dim of b).

    Args:
        a: Ket or DensityMatrix
        b: Operand of the same kind

    Returns:
        Ket or DensityMatrix on the product space
    """
    if isinstance(a, Ket) and isinstance(b, Ket):
        return Ket(np.kron(a.amplitudes, b.amplitudes), normalized=a.normalized and b.normalized)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries), a.dim, b.dim)
    raise TypeError(f"tensor expects two Kets or two DensityMatrices, got {type(a).__name__} and {type(b).__name__}")


def partial_transpose(rho: BipartiteOperator, subsystem: Subsystem = "first") -> BipartiteOperator:
    """
    Transpose the indices of one subsystem of a bipartite operator.

    Args:
        rho: Operator with declared subsystem dimensions
        subsystem: "first" (A) or "second" (B)

    Returns:
        Hermitian operator with the same dimensions; positivity is not required
    """
    d_a, d_b = rho.dim_a, rho.dim_b
    blocks = rho.entries.reshape(d_a, d_b, d_a, d_b)
    if subsystem == "first":
        blocks = blocks.transpose(2, 1, 0, 3)
    elif subsystem == "second":
        blocks = blocks.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'first' or 'second', got {subsystem!r}")
    return BipartiteOperator(blocks.reshape(d_a * d_b, d_a * d_b), d_a, d_b)


def partial_trace(rho: BipartiteOperator, keep: Subsystem = "first") -> DensityMatrix:
    """Reduced density matrix of the kept subsystem."""
    d_a, d_b = rho.dim_a, rho.dim_b
    blocks = rho.entries.reshape(d_a, d_b, d_a, d_b)
    if keep == "first":
        reduced = np.einsum("ijkj->ik", blocks)
        return DensityMatrix(reduced, d_a)
    if keep == "second":
        reduced = np.einsum("ijil->jl", blocks)
        return DensityMatrix(reduced, d_b)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def hermitian_eigh(m: Union[np.ndarray, BipartiteOperator]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot a_pq with a diagonal
    unitary, then annihilates the (now real) pivot with a plane rotation.

    Args:
        m: Hermitian matrix (within 1e-10)

    Returns:
        (eigenvalues ascending, eigenvectors as columns)

    Raises:
        ValueError: If the input is not square and Hermitian
        EigenConvergenceError: If the sweep budget is exhausted or the
            eigenpair residual exceeds EIGEN_TOL
    """
    a = np.array(_as_matrix(m), dtype=complex)
    if not validate_hermitian(a, HERMITIAN_TOL):
        raise ValueError("hermitian_eigh requires a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    original = a.copy()
    n = a.shape[0]
    vectors = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))

    for sweep in range(_JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= _JACOBI_OFF_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = (apq / r).conjugate()
                theta = 0.5 * math.atan2(2.0 * r, a[q, q].real - a[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                rotation = np.array([[c, s], [-s * phase, c * phase]], dtype=complex)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rotation
                a[idx, :] = rotation.conj().T @ a[idx, :]
                vectors[:, idx] = vectors[:, idx] @ rotation
    else:
        raise EigenConvergenceError(f"Jacobi did not converge in {_JACOBI_MAX_SWEEPS} sweeps (n={n})")

    logger.debug(f"Jacobi converged after {sweep} sweeps (n={n})")
    eigenvalues = a.diagonal().real
    if not validate_eigenpairs(original, eigenvalues, vectors):
        raise EigenConvergenceError(f"Jacobi eigenpairs exceed the residual tolerance (n={n})")
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], vectors[:, order]


def hermitian_eigenvalues(m: Union[np.ndarray, BipartiteOperator]) -> np.ndarray:
    """
    Eigenvalues of a Hermitian matrix, ascending.

    Examples:
        >>> hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0]))
        array([1., 2., 3.])
    """
    return hermitian_eigh(m)[0]


def trace_norm(op: Union[np.ndarray, BipartiteOperator]) -> float:
    """||op||_1 of a Hermitian operator: the sum of absolute eigenvalues."""
    return float(np.sum(np.abs(hermitian_eigenvalues(op))))


def negativity(rho: BipartiteOperator, subsystem: Subsystem = "first") -> float:
    """
    Negativity (||rho^T||_1 - 1) / 2, evaluated as the absolute sum of the
    negative eigenvalues of the partial transpose.

    Args:
        rho: Bipartite density matrix
        subsystem: Subsystem to transpose (the value does not depend on it)

    Returns:
        Nonnegative negativity
    """
    eigenvalues = hermitian_eigenvalues(partial_transpose(rho, subsystem))
    return float(-np.sum(eigenvalues[eigenvalues < 0.0]))


def fidelity_pure(psi: Ket, rho: BipartiteOperator) -> float:
    """
    Fidelity <psi|rho|psi> between a pure state and a density matrix.

    Args:
        psi: Normalized ket
        rho: Density matrix of the same total dimension

    Returns:
        Fidelity clamped to [0, 1]
    """
    if psi.dim != rho.dim:
        raise ValueError(f"Dimension mismatch: ket dim {psi.dim}, density matrix dim {rho.dim}")
    value = np.vdot(psi.amplitudes, rho.entries @ psi.amplitudes).real
    return float(min(max(value, 0.0), 1.0))


def bell_state(which: Literal["phi+", "phi-", "psi+", "psi-"] = "phi+") -> Ket:
    """One of the four two-qubit Bell states."""
    s = 1.0 / math.sqrt(2.0)
    amplitudes = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    if which not in amplitudes:
        raise ValueError(f"Unknown Bell state {which!r}")
    return Ket(np.array(amplitudes[which], dtype=complex))


__all__ = [
    'Ket',
    'BipartiteOperator',
    'DensityMatrix',
    'EigenConvergenceError',
    'tensor',
    'partial_transpose',
    'partial_trace',
    'hermitian_eigh',
    'hermitian_eigenvalues',
    'trace_norm',
    'negativity',
    'fidelity_pure',
    'bell_state',
]
