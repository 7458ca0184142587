"""
jcwitness

Entanglement witnesses built from parametrized orthonormal bases, applied to
the Jaynes-Cummings model: basis construction, Schmidt machinery and projector
witnesses, closed-form JC dynamics, and fidelity maximization.
"""

from .linalg_core import (
    BipartiteOperator,
    DensityMatrix,
    EigenConvergenceError,
    Ket,
    negativity,
    partial_transpose,
)
from .basis import BasisParams, build_basis, complement_vectors, head_vector, su_constraint, unitary_of
from .witness import (
    SchmidtForm,
    WitnessOperator,
    expectation,
    k_general,
    k_two_qubit,
    schmidt_decompose,
    schmidt_state,
    witness_of,
)
from .jcmodel import JCConfig, SeriesConvergenceError, master_equation_series, rabi
from .detect import DetectionReport, JCCase, OptimizerSettings, WitnessFamily, maximize_fidelity, sweep

__all__ = [
    'Ket',
    'BipartiteOperator',
    'DensityMatrix',
    'EigenConvergenceError',
    'partial_transpose',
    'negativity',
    'BasisParams',
    'head_vector',
    'complement_vectors',
    'build_basis',
    'unitary_of',
    'su_constraint',
    'SchmidtForm',
    'WitnessOperator',
    'schmidt_decompose',
    'schmidt_state',
    'k_two_qubit',
    'k_general',
    'witness_of',
    'expectation',
    'JCConfig',
    'SeriesConvergenceError',
    'rabi',
    'master_equation_series',
    'JCCase',
    'WitnessFamily',
    'OptimizerSettings',
    'DetectionReport',
    'maximize_fidelity',
    'sweep',
]
