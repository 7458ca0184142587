"""
Parametrized Orthonormal Bases

Builds the general orthonormal basis {|Phi^(0)>, ..., |Phi^(n-1)>} of C^n from
n(n-1)/2 angles and n(n+1)/2 phases. Level m combines the n-m vectors left over
from level m-1 with hyperspherical coefficients; the complement handed to level
m+1 is the set of derivatives of that combination with respect to each angle,
evaluated with all earlier angles at pi/2.

The basis rows form a unitary matrix U with det U = exp(i * sum of all phases).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.jcwitness.linalg_core import Ket

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

LevelBasis = Union[Sequence[Ket], np.ndarray]


class BasisParams(BaseModel):
    """
    Angles and phases of a general orthonormal basis of C^n.

    Level m (0 <= m < n) carries n-m-1 angles theta_1..theta_{n-m-1} and n-m
    phases phi_0..phi_{n-m-1}. Angles are reduced mod 2*pi on construction.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Dimension of the space")
    angles: Tuple[Tuple[float, ...], ...]
    phases: Tuple[Tuple[float, ...], ...]

    @field_validator('angles')
    @classmethod
    def reduce_angles(cls, angles):
        return tuple(tuple(float(a) % TWO_PI for a in level) for level in angles)

    @model_validator(mode='after')
    def check_counts(self):
        if len(self.angles) != self.n or len(self.phases) != self.n:
            raise ValueError(
                f"Expected {self.n} levels of angles and phases, got "
                f"{len(self.angles)} and {len(self.phases)}"
            )
        for m in range(self.n):
            if len(self.angles[m]) != self.n - m - 1:
                raise ValueError(f"Level {m} needs {self.n - m - 1} angles, got {len(self.angles[m])}")
            if len(self.phases[m]) != self.n - m:
                raise ValueError(f"Level {m} needs {self.n - m} phases, got {len(self.phases[m])}")
        return self

    @property
    def angle_count(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def phase_count(self) -> int:
        return self.n * (self.n + 1) // 2

    def determinant_phase(self) -> float:
        """Phase of det U: the sum of every phase at every level."""
        return float(sum(sum(level) for level in self.phases))

    def to_vector(self) -> np.ndarray:
        """Flatten as (angles of level 0, phases of level 0, angles of level 1, ...)."""
        values: List[float] = []
        for m in range(self.n):
            values.extend(self.angles[m])
            values.extend(self.phases[m])
        return np.array(values, dtype=float)

    @classmethod
    def from_vector(cls, n: int, values: Sequence[float]) -> "BasisParams":
        """Inverse of to_vector."""
        values = [float(v) for v in values]
        if len(values) != n * n:
            raise ValueError(f"Basis of C^{n} needs {n * n} parameters, got {len(values)}")
        angles, phases = [], []
        pos = 0
        for m in range(n):
            d = n - m
            angles.append(tuple(values[pos:pos + d - 1]))
            pos += d - 1
            phases.append(tuple(values[pos:pos + d]))
            pos += d
        return cls(n=n, angles=tuple(angles), phases=tuple(phases))

    @classmethod
    def identity(cls, n: int) -> "BasisParams":
        """All angles and phases zero; builds the computational basis."""
        return cls.from_vector(n, np.zeros(n * n))

    @classmethod
    def random(cls, n: int, rng: Optional[np.random.Generator] = None) -> "BasisParams":
        """Angles uniform in [0, pi], phases uniform in [0, 2*pi). Not Haar distributed."""
        rng = rng or np.random.default_rng()
        angles = tuple(tuple(rng.uniform(0.0, math.pi, n - m - 1)) for m in range(n))
        phases = tuple(tuple(rng.uniform(0.0, TWO_PI, n - m)) for m in range(n))
        return cls(n=n, angles=angles, phases=phases)


@dataclass(frozen=True)
class LevelFrame:
    """Head vector |Phi^(m)> and the complement passed on to level m+1."""
    m: int
    head: Ket
    complement: List[Ket] = field(default_factory=list)


def _check_counts(d: int, theta: Sequence[float], phi: Sequence[float]):
    if len(phi) != d:
        raise ValueError(f"Level with {d} vectors needs {d} phases, got {len(phi)}")
    if len(theta) != d - 1:
        raise ValueError(f"Level with {d} vectors needs {d - 1} angles, got {len(theta)}")


def head_coefficients(theta: Sequence[float], phi: Sequence[float]) -> np.ndarray:
    """
    Hyperspherical coefficients of the head vector in its level basis.

    Coefficient j is e^{i phi_j} cos(theta_{j+1}) prod_{l<=j} sin(theta_l) for
    j < d-1 and e^{i phi_{d-1}} prod_{l<=d-1} sin(theta_l) for the last one.
    """
    d = len(phi)
    _check_counts(d, theta, phi)
    th = np.asarray(theta, dtype=float)
    sines = np.concatenate(([1.0], np.cumprod(np.sin(th))))
    radial = sines.copy()
    radial[:-1] *= np.cos(th)
    return radial * np.exp(1j * np.asarray(phi, dtype=float))


def complement_coefficients(theta: Sequence[float], phi: Sequence[float]) -> np.ndarray:
    """
    Coefficients of the complement vectors d|Phi>/d(theta_k), k = 1..d-1, with
    theta_1..theta_{k-1} set to pi/2 after differentiation.

    Returns:
        (d-1) x d array; row k-1 holds the k-th complement vector
    """
    d = len(phi)
    _check_counts(d, theta, phi)
    th = np.asarray(theta, dtype=float)
    phases = np.exp(1j * np.asarray(phi, dtype=float))
    rows = np.zeros((d - 1, d), dtype=complex)
    for k in range(1, d):
        rows[k - 1, k - 1] = -math.sin(th[k - 1]) * phases[k - 1]
        tail = math.cos(th[k - 1])
        for j in range(k, d):
            if j < d - 1:
                rows[k - 1, j] = tail * math.cos(th[j]) * phases[j]
                tail *= math.sin(th[j])
            else:
                rows[k - 1, j] = tail * phases[j]
    return rows


def _as_rows(level_basis: LevelBasis) -> np.ndarray:
    if isinstance(level_basis, np.ndarray):
        return np.atleast_2d(level_basis).astype(complex)
    return np.array([ket.amplitudes for ket in level_basis], dtype=complex)


def head_vector(level_basis: LevelBasis, theta: Sequence[float], phi: Sequence[float]) -> Ket:
    """
    General normalized combination of the level basis.

    Args:
        level_basis: d >= 1 orthonormal kets (or a d x N array of rows)
        theta: d-1 angles
        phi: d phases

    Returns:
        The head vector as a Ket
    """
    rows = _as_rows(level_basis)
    if len(phi) != rows.shape[0]:
        raise ValueError(f"Level basis has {rows.shape[0]} vectors but {len(phi)} phases were given")
    return Ket(head_coefficients(theta, phi) @ rows)


def complement_vectors(level_basis: LevelBasis, theta: Sequence[float], phi: Sequence[float]) -> List[Ket]:
    """
    Orthonormal complement of head_vector inside the span of the level basis.

    Args:
        level_basis: d >= 2 orthonormal kets (or a d x N array of rows)
        theta: d-1 angles
        phi: d phases

    Returns:
        d-1 kets, each orthogonal to the head vector
    """
    rows = _as_rows(level_basis)
    if rows.shape[0] < 2:
        raise ValueError("complement_vectors needs a level basis of at least 2 vectors")
    if len(phi) != rows.shape[0]:
        raise ValueError(f"Level basis has {rows.shape[0]} vectors but {len(phi)} phases were given")
    return [Ket(row) for row in complement_coefficients(theta, phi) @ rows]


def level_frames(params: BasisParams) -> List[LevelFrame]:
    """Run the level recursion and keep every intermediate frame."""
    frames: List[LevelFrame] = []
    working = np.eye(params.n, dtype=complex)
    for m in range(params.n):
        theta, phi = params.angles[m], params.phases[m]
        head = Ket(head_coefficients(theta, phi) @ working)
        if m < params.n - 1:
            working = complement_coefficients(theta, phi) @ working
            complement = [Ket(row) for row in working]
        else:
            complement = []
        frames.append(LevelFrame(m=m, head=head, complement=complement))
    return frames


def build_basis(params: BasisParams) -> List[Ket]:
    """
    The orthonormal basis (|Phi^(0)>, ..., |Phi^(n-1)>) of C^n.

    Args:
        params: Basis parameters

    Returns:
        n pairwise orthonormal kets
    """
    return [frame.head for frame in level_frames(params)]


def unitary_of(params: BasisParams) -> np.ndarray:
    """n x n unitary whose row m holds the coefficients of |Phi^(m)>."""
    return np.array([ket.amplitudes for ket in build_basis(params)])


def su_constraint(params: BasisParams) -> BasisParams:
    """
    Shift the last level's phase so that det U = 1.

    Args:
        params: Basis parameters

    Returns:
        Parameters with the determinant phase removed (unchanged if already special)
    """
    excess = math.remainder(params.determinant_phase(), TWO_PI)
    if abs(excess) <= 1e-15:
        return params
    phases = [list(level) for level in params.phases]
    phases[-1][0] -= excess
    logger.debug(f"su_constraint shifted phi_0^({params.n - 1}) by {-excess:.6g}")
    return BasisParams(
        n=params.n,
        angles=params.angles,
        phases=tuple(tuple(level) for level in phases),
    )


__all__ = [
    'BasisParams',
    'LevelFrame',
    'head_coefficients',
    'complement_coefficients',
    'head_vector',
    'complement_vectors',
    'level_frames',
    'build_basis',
    'unitary_of',
    'su_constraint',
]
