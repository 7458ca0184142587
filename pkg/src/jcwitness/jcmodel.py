"""
Jaynes-Cummings Dynamics

Closed-form evolved states of a two-level atom coupled to one field mode:

  Case 1: excited atom, Fock field |n>, Markovian phase decoherence (gamma).
  Case 2: mixed atom lambda|g><g| + (1 - lambda)|e><e|, Fock field |n>,
          unitary evolution.

plus the truncated-series solution of the phase-decoherence master equation,
which serves as an independent check of the closed forms.

Conventions: hbar = 1, atom is subsystem A (|e> = index 0, |g> = index 1),
field is subsystem B. Case 1 blocks use field levels (n, n+1); Case 2 blocks
use (n-1, n, n+1).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.jcwitness.linalg_core import DensityMatrix, hermitian_eigh

logger = logging.getLogger(__name__)

SERIES_TERM_TOL = 1e-10
SERIES_TRACE_TOL = 1e-8
DEFAULT_K_MAX = 60

ATOM_DIM = 2
EXCITED, GROUND = 0, 1


class SeriesConvergenceError(RuntimeError):
    """Raised when the master-equation series is still significant at its cutoff."""


class JCConfig(BaseModel):
    """
    Jaynes-Cummings parameters.

    The detuning Delta = omega_a - omega_f is derived, never stored.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    g: float = Field(1.0, gt=0.0, description="Atom-field coupling")
    omega_a: float = Field(2.0, description="Atomic transition frequency")
    omega_f: float = Field(1.0, description="Field frequency")
    gamma: float = Field(0.0, ge=0.0, description="Phase-decoherence coefficient")
    n: int = Field(1, ge=0, description="Initial photon number")
    lam: float = Field(0.0, ge=0.0, le=1.0, alias="lambda", description="Ground-state weight of the atom")

    @property
    def delta(self) -> float:
        return self.omega_a - self.omega_f

    @classmethod
    def from_detuning(
        cls,
        delta: float,
        g: float = 1.0,
        gamma: float = 0.0,
        n: int = 1,
        lam: float = 0.0,
        omega_f: float = 1.0,
    ) -> "JCConfig":
        """Build a config from the detuning, placing omega_a = omega_f + delta."""
        return cls(g=g, omega_a=omega_f + delta, omega_f=omega_f, gamma=gamma, n=n, lam=lam)


@dataclass(frozen=True)
class Case1Coefficients:
    """Populations E (|e,n>), F (|g,n+1>) and coherence G of the Case 1 state."""
    E: float
    F: float
    G: complex


@dataclass(frozen=True)
class Case2Coefficients:
    """Branch amplitudes: A|e,n-1> + B|g,n> and C|e,n> + D|g,n+1>."""
    A: complex
    B: complex
    C: complex
    D: complex


def _check_time(t: float):
    if t < 0:
        raise ValueError(f"Time must be nonnegative, got t={t}")


def rabi(n: int, cfg: JCConfig) -> float:
    """
    Generalized Rabi frequency sqrt(Delta^2/4 + g^2 (n+1)).

    Examples:
        >>> rabi(1, JCConfig.from_detuning(1.0))
        1.5
    """
    if n < 0:
        raise ValueError(f"Photon number must be nonnegative, got n={n}")
    return math.sqrt(cfg.delta ** 2 / 4.0 + cfg.g ** 2 * (n + 1))


def _case1_decay(n: int, t: float, cfg: JCConfig):
    omega = rabi(n, cfg)
    decay = math.exp(-2.0 * cfg.gamma * t * omega ** 2)
    return omega, decay * math.cos(2.0 * omega * t), decay * math.sin(2.0 * omega * t)


def case1_coefficients(n: int, t: float, cfg: JCConfig) -> Case1Coefficients:
    """
    Closed-form E_n, F_n, G_n of the decohered Case 1 state.

    Args:
        n: Initial photon number
        t: Time (>= 0)
        cfg: Model parameters (gamma is used)

    Returns:
        Case1Coefficients with E + F = 1
    """
    _check_time(t)
    omega, c, s = _case1_decay(n, t, cfg)
    ratio = cfg.delta ** 2 / (2.0 * omega ** 2)
    e = 0.25 * (2.0 + ratio + (2.0 - ratio) * c)
    f = 0.25 * cfg.g ** 2 * (n + 1) / omega ** 2 * (2.0 - 2.0 * c)
    g = cfg.g * math.sqrt(n + 1) / (4.0 * omega) * complex(cfg.delta / omega * (1.0 - c), 2.0 * s)
    return Case1Coefficients(E=e, F=f, G=g)


def embed_block(rho: DensityMatrix, levels: Sequence[int], fock_cut: int) -> DensityMatrix:
    """
    Place an atom (x) field-block state into the Fock window 0..fock_cut-1.

    Args:
        rho: Density matrix on 2 (x) len(levels)
        levels: Fock level of each block field index
        fock_cut: Field truncation dimension

    Returns:
        Density matrix on 2 (x) fock_cut
    """
    levels = list(levels)
    if rho.dims != (ATOM_DIM, len(levels)):
        raise ValueError(f"Dimension mismatch: block is {rho.dim_a}x{rho.dim_b}, levels give 2x{len(levels)}")
    if min(levels) < 0 or max(levels) >= fock_cut:
        raise ValueError(f"Fock levels {levels} do not fit a window of {fock_cut}")
    index = [a * fock_cut + level for a in range(ATOM_DIM) for level in levels]
    entries = np.zeros((ATOM_DIM * fock_cut, ATOM_DIM * fock_cut), dtype=complex)
    entries[np.ix_(index, index)] = rho.entries
    return DensityMatrix(entries, ATOM_DIM, fock_cut)


def case1_state(n: int, t: float, cfg: JCConfig, fock_cut: Optional[int] = None) -> DensityMatrix:
    """
    Case 1 density matrix on the block {|n>, |n+1>}, or embedded in a Fock window.

    Args:
        n: Initial photon number
        t: Time (>= 0)
        cfg: Model parameters
        fock_cut: If given, embed into 2 (x) fock_cut

    Returns:
        Density matrix with E at |e,n>, F at |g,n+1> and coherence G between them
    """
    coeffs = case1_coefficients(n, t, cfg)
    entries = np.zeros((4, 4), dtype=complex)
    entries[0, 0] = coeffs.E
    entries[3, 3] = coeffs.F
    entries[0, 3] = coeffs.G
    entries[3, 0] = coeffs.G.conjugate()
    block = DensityMatrix(entries, ATOM_DIM, 2)
    if fock_cut is None:
        return block
    return embed_block(block, (n, n + 1), fock_cut)


def case1_negativity_closed(n: int, t: float, cfg: JCConfig) -> float:
    """
    Closed-form negativity of the Case 1 state, |G_n|.

    g sqrt(n+1) / (4 Omega_n) * sqrt(Delta^2/Omega_n^2 (1 - e^{-2 gamma t Omega^2} cos 2 Omega t)^2
    + 4 e^{-4 gamma t Omega^2} sin^2 2 Omega t)
    """
    _check_time(t)
    omega, c, s = _case1_decay(n, t, cfg)
    radicand = (cfg.delta / omega) ** 2 * (1.0 - c) ** 2 + 4.0 * s ** 2
    return cfg.g * math.sqrt(n + 1) / (4.0 * omega) * math.sqrt(radicand)


def case2_coefficients(n: int, t: float, cfg: JCConfig) -> Case2Coefficients:
    """
    Closed-form branch amplitudes of the unitary Case 2 evolution.

    Args:
        n: Initial photon number (>= 1)
        t: Time (>= 0)
        cfg: Model parameters (gamma is ignored)

    Returns:
        Case2Coefficients; A, B use Omega_{n-1}, C, D use Omega_n

    Raises:
        ValueError: If n < 1 or t < 0
    """
    if n < 1:
        raise ValueError(f"Case 2 needs n >= 1 (|n-1> must exist), got n={n}")
    _check_time(t)
    lower, upper = rabi(n - 1, cfg), rabi(n, cfg)
    phase_lower = np.exp(-1j * cfg.omega_f * (n - 0.5) * t)
    phase_upper = np.exp(-1j * cfg.omega_f * (n + 0.5) * t)
    a = -1j * phase_lower * cfg.g * math.sqrt(n) / lower * math.sin(lower * t)
    b = phase_lower * complex(math.cos(lower * t), cfg.delta / (2.0 * lower) * math.sin(lower * t))
    c = phase_upper * complex(math.cos(upper * t), -cfg.delta / (2.0 * upper) * math.sin(upper * t))
    d = -1j * phase_upper * cfg.g * math.sqrt(n + 1) / upper * math.sin(upper * t)
    return Case2Coefficients(A=complex(a), B=complex(b), C=complex(c), D=complex(d))


def case2_state(n: int, t: float, cfg: JCConfig, fock_cut: Optional[int] = None) -> DensityMatrix:
    """
    Case 2 density matrix lambda |psi_g><psi_g| + (1 - lambda) |psi_e><psi_e|
    on the block {|n-1>, |n>, |n+1>}, or embedded in a Fock window.
    """
    coeffs = case2_coefficients(n, t, cfg)
    ground_branch = np.zeros(6, dtype=complex)
    ground_branch[0] = coeffs.A
    ground_branch[4] = coeffs.B
    excited_branch = np.zeros(6, dtype=complex)
    excited_branch[1] = coeffs.C
    excited_branch[5] = coeffs.D
    entries = (
        cfg.lam * np.outer(ground_branch, ground_branch.conj())
        + (1.0 - cfg.lam) * np.outer(excited_branch, excited_branch.conj())
    )
    block = DensityMatrix(entries, ATOM_DIM, 3)
    if fock_cut is None:
        return block
    return embed_block(block, (n - 1, n, n + 1), fock_cut)


def case2_initial_state(n: int, cfg: JCConfig, fock_cut: Optional[int] = None) -> DensityMatrix:
    """(lambda |g><g| + (1 - lambda) |e><e|) (x) |n><n| on the Case 2 block or a Fock window."""
    if n < 1:
        raise ValueError(f"Case 2 needs n >= 1, got n={n}")
    entries = np.zeros((6, 6), dtype=complex)
    entries[1, 1] = 1.0 - cfg.lam
    entries[4, 4] = cfg.lam
    block = DensityMatrix(entries, ATOM_DIM, 3)
    if fock_cut is None:
        return block
    return embed_block(block, (n - 1, n, n + 1), fock_cut)


def case2_negativity_closed(n: int, t: float, cfg: JCConfig) -> float:
    """
    Closed-form negativity of the Case 2 state.

    Args:
        n: Initial photon number (>= 1)
        t: Time (>= 0)
        cfg: Model parameters (lambda is used)

    Returns:
        Sum of the two negative-eigenvalue magnitudes of the partial transpose
    """
    coeffs = case2_coefficients(n, t, cfg)
    lam = cfg.lam
    a2, b2 = abs(coeffs.A) ** 2, abs(coeffs.B) ** 2
    c2, d2 = abs(coeffs.C) ** 2, abs(coeffs.D) ** 2
    first = math.sqrt(lam ** 2 * b2 ** 2 + 4.0 * (1.0 - lam) ** 2 * c2 * d2) - lam * b2
    second = math.sqrt((1.0 - lam) ** 2 * c2 ** 2 + 4.0 * lam ** 2 * a2 * b2) - (1.0 - lam) * c2
    return 0.5 * (first + second)


def jc_hamiltonian(cfg: JCConfig, fock_cut: int) -> np.ndarray:
    """
    H = (omega_a/2) sigma_z (x) 1 + omega_f 1 (x) a^dag a + g (sigma_+ (x) a + sigma_- (x) a^dag)

    on C^2 (x) span{|0>, ..., |fock_cut-1>}.

    Args:
        cfg: Model parameters
        fock_cut: Field truncation dimension (>= 1)

    Returns:
        (2 fock_cut) x (2 fock_cut) Hermitian matrix
    """
    if fock_cut < 1:
        raise ValueError(f"fock_cut must be positive, got {fock_cut}")
    annihilate = np.diag(np.sqrt(np.arange(1, fock_cut, dtype=float)), k=1).astype(complex)
    create = annihilate.conj().T
    sigma_z = np.diag([1.0, -1.0]).astype(complex)
    sigma_plus = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    sigma_minus = sigma_plus.conj().T
    identity_a = np.eye(ATOM_DIM, dtype=complex)
    identity_f = np.eye(fock_cut, dtype=complex)
    return (
        0.5 * cfg.omega_a * np.kron(sigma_z, identity_f)
        + cfg.omega_f * np.kron(identity_a, create @ annihilate)
        + cfg.g * (np.kron(sigma_plus, annihilate) + np.kron(sigma_minus, create))
    )


def master_equation_series(
    n: int,
    t: float,
    cfg: JCConfig,
    fock_cut: Optional[int] = None,
    k_max: int = DEFAULT_K_MAX,
    initial: Optional[DensityMatrix] = None,
) -> DensityMatrix:
    """
    Solve d rho/dt = -i[H, rho] - (gamma/2)[H, [H, rho]] by the series
    rho(t) = sum_k (gamma t)^k / k! M_k rho(0) M_k^dag, M_k = H^k e^{-iHt} e^{-gamma t H^2 / 2}.

    The propagator is built from the eigendecomposition of H; each term is the
    previous one sandwiched by H.

    Args:
        n: Initial photon number
        t: Time (>= 0)
        cfg: Model parameters
        fock_cut: Field truncation (default n + 2, the minimum)
        k_max: Last series index
        initial: Initial state on 2 (x) fock_cut (default |e><e| (x) |n><n|)

    Returns:
        rho(t) on 2 (x) fock_cut

    Raises:
        SeriesConvergenceError: If the last term exceeds 1e-10 or the trace drifts by more than 1e-8
    """
    _check_time(t)
    fock_cut = fock_cut if fock_cut is not None else n + 2
    if fock_cut < n + 2:
        raise ValueError(f"fock_cut must be at least n + 2 = {n + 2}, got {fock_cut}")
    if k_max < 0:
        raise ValueError(f"k_max must be nonnegative, got {k_max}")

    dim = ATOM_DIM * fock_cut
    if initial is None:
        rho0 = np.zeros((dim, dim), dtype=complex)
        rho0[EXCITED * fock_cut + n, EXCITED * fock_cut + n] = 1.0
    else:
        if initial.dims != (ATOM_DIM, fock_cut):
            raise ValueError(f"Initial state must be 2x{fock_cut}, got {initial.dim_a}x{initial.dim_b}")
        rho0 = initial.entries

    h = jc_hamiltonian(cfg, fock_cut)
    energies, vectors = hermitian_eigh(h)
    gt = cfg.gamma * t
    propagator = (vectors * np.exp(-1j * energies * t - 0.5 * gt * energies ** 2)) @ vectors.conj().T

    term = propagator @ rho0 @ propagator.conj().T
    total = term.copy()
    if gt > 0.0:
        last = float(np.max(np.abs(term)))
        for k in range(1, k_max + 1):
            term = (gt / k) * (h @ term @ h)
            total += term
            last = float(np.max(np.abs(term)))
            if last < 1e-18:
                break
        if last > SERIES_TERM_TOL:
            raise SeriesConvergenceError(
                f"Series term {k_max} still has magnitude {last:.3g} (gamma*t={gt:.3g}); raise k_max"
            )
        logger.debug(f"Master-equation series at t={t:.6g} stopped with last term {last:.3g}")

    trace = float(np.trace(total).real)
    if abs(trace - 1.0) > SERIES_TRACE_TOL:
        raise SeriesConvergenceError(f"Series trace is {trace:.12g}, expected 1")
    total = 0.5 * (total + total.conj().T) / trace
    return DensityMatrix(total, ATOM_DIM, fock_cut)


__all__ = [
    'JCConfig',
    'Case1Coefficients',
    'Case2Coefficients',
    'SeriesConvergenceError',
    'DEFAULT_K_MAX',
    'rabi',
    'case1_coefficients',
    'case1_state',
    'case1_negativity_closed',
    'case2_coefficients',
    'case2_state',
    'case2_initial_state',
    'case2_negativity_closed',
    'embed_block',
    'jc_hamiltonian',
    'master_equation_series',
]
