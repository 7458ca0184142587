"""
Projector-Based Entanglement Witnesses

Schmidt machinery for bipartite pure states and the witness
W = k(psi) 1 - |psi><psi|, where k(psi) is the largest squared overlap of psi
with a product state (the square of its largest Schmidt coefficient).
Tr(W rho) = k - <psi|rho|psi> is nonnegative on every separable state, so a
negative value certifies entanglement.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.jcwitness.basis import BasisParams, build_basis
from src.jcwitness.linalg_core import (
    BipartiteOperator,
    DensityMatrix,
    Ket,
    fidelity_pure,
    hermitian_eigh,
    partial_trace,
)

logger = logging.getLogger(__name__)

# Schmidt coefficients below this are dropped from the reported rank.
SCHMIDT_CUTOFF = 1e-12


def hyperspherical_coefficients(alphas: Sequence[float]) -> np.ndarray:
    """
    (cos a1, sin a1 cos a2, ..., sin a1 ... sin a_{n-1}) for n-1 angles.

    Examples:
        >>> hyperspherical_coefficients([])
        array([1.])
    """
    alphas = np.asarray(alphas, dtype=float)
    sines = np.concatenate(([1.0], np.cumprod(np.sin(alphas))))
    coefficients = sines.copy()
    coefficients[:-1] *= np.cos(alphas)
    return coefficients


class SchmidtForm(BaseModel):
    """
    Pure state sum_m c_m |Phi^(m)>|Phi'^(m)> with hyperspherical weights c_m
    and the first `rank` vectors of two parametrized bases.
    """
    model_config = ConfigDict(frozen=True)

    n_a: int = Field(..., ge=1, description="Dimension of subsystem A")
    n_b: int = Field(..., ge=1, description="Dimension of subsystem B")
    rank: int = Field(..., ge=1)
    alphas: Tuple[float, ...] = ()
    basis_a: BasisParams
    basis_b: BasisParams

    @model_validator(mode='after')
    def check_shape(self):
        if self.rank > min(self.n_a, self.n_b):
            raise ValueError(f"Schmidt rank {self.rank} exceeds min({self.n_a}, {self.n_b})")
        if len(self.alphas) != self.rank - 1:
            raise ValueError(f"Rank {self.rank} needs {self.rank - 1} alphas, got {len(self.alphas)}")
        if self.basis_a.n != self.n_a or self.basis_b.n != self.n_b:
            raise ValueError(
                f"Basis dimensions ({self.basis_a.n}, {self.basis_b.n}) do not match "
                f"subsystems ({self.n_a}, {self.n_b})"
            )
        if np.any(self.coefficients() < -SCHMIDT_CUTOFF):
            raise ValueError(f"alphas {self.alphas} give negative Schmidt coefficients")
        return self

    def coefficients(self) -> np.ndarray:
        return hyperspherical_coefficients(self.alphas)

    @classmethod
    def generalized_bell(
        cls,
        n_a: int,
        n_b: int,
        rank: Optional[int] = None,
        basis_a: Optional[BasisParams] = None,
        basis_b: Optional[BasisParams] = None,
    ) -> "SchmidtForm":
        """Equal-weight form: alpha_i = arccos(1/sqrt(rank - i + 1)) gives c_m = 1/sqrt(rank)."""
        rank = rank or min(n_a, n_b)
        alphas = tuple(math.acos(1.0 / math.sqrt(rank - i + 1)) for i in range(1, rank))
        return cls(
            n_a=n_a,
            n_b=n_b,
            rank=rank,
            alphas=alphas,
            basis_a=basis_a or BasisParams.identity(n_a),
            basis_b=basis_b or BasisParams.identity(n_b),
        )


class SchmidtDecomposition(NamedTuple):
    coefficients: np.ndarray
    left: List[Ket]
    right: List[Ket]

    @property
    def rank(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    """
    W = k 1 - |psi><psi| on C^dim_a (x) C^dim_b.

    Attributes:
        k: Largest squared product-state overlap of projector_state, in (0, 1]
        projector_state: The pure state the witness is built from
        dim_a: Dimension of subsystem A
        dim_b: Dimension of subsystem B
    """
    k: float
    projector_state: Ket
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if not 0.0 < self.k <= 1.0 + 1e-12:
            raise ValueError(f"Witness constant k must lie in (0, 1], got {self.k}")
        if self.projector_state.dim != self.dim_a * self.dim_b:
            raise ValueError(
                f"Dimension mismatch: projector state dim {self.projector_state.dim}, "
                f"declared {self.dim_a}x{self.dim_b}"
            )

    def matrix(self) -> BipartiteOperator:
        psi = self.projector_state.amplitudes
        entries = self.k * np.eye(psi.size, dtype=complex) - np.outer(psi, psi.conj())
        return BipartiteOperator(entries, self.dim_a, self.dim_b)

    def detects(self, rho: DensityMatrix, tol: float = 0.0) -> bool:
        """True when Tr(W rho) < -tol."""
        return expectation(self, rho) < -tol


def _split(psi: Ket, n_a: int, n_b: int) -> np.ndarray:
    if n_a < 1 or n_b < 1 or psi.dim != n_a * n_b:
        raise ValueError(f"Dimension mismatch: ket has dim {psi.dim}, declared {n_a}x{n_b}")
    return psi.amplitudes.reshape(n_a, n_b)


def schmidt_decompose(psi: Ket, n_a: int, n_b: int) -> SchmidtDecomposition:
    """
    Schmidt decomposition psi = sum_i sqrt(lambda_i) |u_i>|v_i>.

    The left vectors are eigenvectors of the reduced density matrix M M^dagger
    (M the n_a x n_b amplitude matrix); the right vectors are M^T conj(u_i)
    normalized, whose norms are the Schmidt coefficients.

    Args:
        psi: Normalized ket of dimension n_a * n_b
        n_a: Dimension of subsystem A
        n_b: Dimension of subsystem B

    Returns:
        SchmidtDecomposition with descending coefficients sqrt(lambda_i)

    Raises:
        ValueError: If the dimensions do not match
    """
    amplitudes = _split(psi, n_a, n_b)
    _, vectors = hermitian_eigh(amplitudes @ amplitudes.conj().T)
    terms = []
    for i in range(vectors.shape[1]):
        u = vectors[:, i]
        w = amplitudes.T @ u.conj()
        weight = float(np.linalg.norm(w))
        if weight >= SCHMIDT_CUTOFF:
            terms.append((weight, u, w / weight))
    terms.sort(key=lambda term: term[0], reverse=True)
    return SchmidtDecomposition(
        coefficients=np.array([term[0] for term in terms]),
        left=[Ket(term[1]) for term in terms],
        right=[Ket(term[2]) for term in terms],
    )


def schmidt_state(form: SchmidtForm) -> Ket:
    """
    Build sum_m c_m |Phi^(m)>|Phi'^(m)> from a SchmidtForm.

    Args:
        form: Validated Schmidt form

    Returns:
        The normalized composite ket (A slow)
    """
    left = build_basis(form.basis_a)
    right = build_basis(form.basis_b)
    amplitudes = np.zeros(form.n_a * form.n_b, dtype=complex)
    for m, c in enumerate(form.coefficients()):
        amplitudes += c * np.kron(left[m].amplitudes, right[m].amplitudes)
    return Ket(amplitudes)


def concurrence(psi: Ket) -> float:
    """C = 2 |a00 a11 - a01 a10| of a two-qubit pure state."""
    a = _split(psi, 2, 2)
    return float(min(2.0 * abs(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]), 1.0))


def k_two_qubit(psi: Ket) -> float:
    """
    Witness constant of a two-qubit pure state from its concurrence.

    Args:
        psi: Normalized ket on 2 (x) 2

    Returns:
        (1 + sqrt(1 - C^2)) / 2, between 1/2 (Bell) and 1 (product)
    """
    c = concurrence(psi)
    return 0.5 * (1.0 + math.sqrt(max(1.0 - c * c, 0.0)))


def k_general(psi: Ket, n_a: int, n_b: int) -> float:
    """Square of the largest Schmidt coefficient."""
    return float(schmidt_decompose(psi, n_a, n_b).coefficients[0] ** 2)


def max_product_overlap(psi: Ket, n_a: int, n_b: int) -> Tuple[float, Ket]:
    """
    max |<e,f|psi>|^2 over product kets, through the reduced density matrix.

    For fixed |e> the best |f> is proportional to (<e| (x) 1)|psi>, leaving
    <e|rho_A|e>; the maximum is the top eigenvalue of rho_A.

    Returns:
        (maximal overlap, the maximizing product ket)
    """
    amplitudes = _split(psi, n_a, n_b)
    reduced = partial_trace(psi.density(n_a, n_b), keep="first")
    eigenvalues, vectors = hermitian_eigh(reduced)
    e = vectors[:, -1]
    f = amplitudes.T @ e.conj()
    f_norm = float(np.linalg.norm(f))
    if f_norm < SCHMIDT_CUTOFF:
        raise ValueError("Reduced state has no support on its top eigenvector")
    return float(eigenvalues[-1]), Ket(np.kron(e, f / f_norm))


def witness_of(psi: Ket, n_a: int, n_b: int) -> WitnessOperator:
    """
    Projector witness k(psi) 1 - |psi><psi|.

    A product psi gives k = 1, a witness that never detects anything.
    """
    k = min(k_general(psi, n_a, n_b), 1.0)
    if k >= 1.0 - 1e-12:
        logger.debug("witness_of called with a product state; witness is trivial")
    return WitnessOperator(k=k, projector_state=psi, dim_a=n_a, dim_b=n_b)


def expectation(w: WitnessOperator, rho: BipartiteOperator) -> float:
    """
    Tr(W rho) = k - <psi|rho|psi>.

    Args:
        w: Witness operator
        rho: Density matrix with the same subsystem dimensions

    Returns:
        Expectation value; negative certifies entanglement

    Raises:
        ValueError: If the subsystem dimensions differ
    """
    if rho.dims != (w.dim_a, w.dim_b):
        raise ValueError(f"Dimension mismatch: witness is {w.dim_a}x{w.dim_b}, state is {rho.dim_a}x{rho.dim_b}")
    return w.k - fidelity_pure(w.projector_state, rho)


__all__ = [
    'SCHMIDT_CUTOFF',
    'hyperspherical_coefficients',
    'SchmidtForm',
    'SchmidtDecomposition',
    'WitnessOperator',
    'schmidt_decompose',
    'schmidt_state',
    'concurrence',
    'k_two_qubit',
    'k_general',
    'max_product_overlap',
    'witness_of',
    'expectation',
]
