"""
Verification Suite

Property checks run by the `verify` command: basis unitarity and closed forms,
the derivative rule for complements, closed-form negativities against the
eigenvalue computation, the master-equation series against the Case 1 closed
form, witness positivity on product states, k-value consistency, closed-form
fidelities against the generic construction, and the detection claims on small
figure grids. Results export as Markdown.
"""

import cmath
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.jcwitness.basis import (
    BasisParams,
    complement_coefficients,
    head_coefficients,
    unitary_of,
)
from src.jcwitness.detect import (
    JCCase,
    OptimizerSettings,
    WitnessFamily,
    case1_fidelity,
    case2_fidelity,
    sweep,
)
from src.jcwitness.jcmodel import (
    DEFAULT_K_MAX,
    JCConfig,
    case1_negativity_closed,
    case1_state,
    case2_negativity_closed,
    case2_state,
    master_equation_series,
)
from src.jcwitness.linalg_core import Ket, fidelity_pure, negativity
from src.jcwitness.witness import expectation, k_general, k_two_qubit, witness_of

logger = logging.getLogger(__name__)

# Time grid of the figure presets; the mixed-atom claim is checked on its early prefix.
FIGURE_GRID = np.linspace(0.0, 6.0, 200)
FIGURE4_EARLY_POINTS = 40


def explicit_basis_2(theta1: float, phi0: float, phi1: float, xi0: float) -> np.ndarray:
    """Closed-form rows of the n = 2 basis."""
    c, s = math.cos(theta1), math.sin(theta1)
    return np.array([
        [c * cmath.exp(1j * phi0), s * cmath.exp(1j * phi1)],
        [-s * cmath.exp(1j * (phi0 + xi0)), c * cmath.exp(1j * (phi1 + xi0))],
    ])


def explicit_basis_3(
    theta1: float, theta2: float, phi0: float, phi1: float, phi2: float,
    eta1: float, xi0: float, xi1: float, zeta0: float,
) -> np.ndarray:
    """Closed-form rows of the n = 3 basis (eta, xi, zeta are the level 1 and 2 parameters)."""
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)
    ce, se = math.cos(eta1), math.sin(eta1)

    def e(x):
        return cmath.exp(1j * x)

    return np.array([
        [c1 * e(phi0), s1 * c2 * e(phi1), s1 * s2 * e(phi2)],
        [
            -ce * s1 * e(phi0 + xi0),
            ce * c1 * c2 * e(xi0 + phi1) - se * s2 * e(xi1 + phi1),
            ce * c1 * s2 * e(xi0 + phi2) + se * c2 * e(xi1 + phi2),
        ],
        [
            se * s1 * e(zeta0 + phi0 + xi0),
            -(se * c1 * c2 * e(zeta0 + xi0 + phi1) + ce * s2 * e(zeta0 + xi1 + phi1)),
            -se * c1 * s2 * e(zeta0 + xi0 + phi2) + ce * c2 * e(zeta0 + xi1 + phi2),
        ],
    ])


def random_ket(rng: np.random.Generator, dim: int) -> Ket:
    amplitudes = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Ket(amplitudes / np.linalg.norm(amplitudes))


def random_family_params(rng: np.random.Generator, family: WitnessFamily) -> np.ndarray:
    lower, upper = np.array(family.bounds()).T
    return rng.uniform(lower, upper)


@dataclass
class CheckResult:
    """Outcome of one verification check"""
    name: str
    passed: bool
    metrics: Dict[str, float] = field(default_factory=dict)
    detail: str = ""
    seconds: float = 0.0


class VerificationSuite:
    """
    Invariant checks over random draws and small figure grids.

    Supports:
    - Basis construction (unitarity, closed forms, derivative rule)
    - JC closed forms against eigenvalue and master-equation oracles
    - Witness positivity and k consistency
    - Figure detection claims on reduced grids
    """

    def __init__(
        self,
        seed: int = 0,
        draws: int = 100,
        product_states: int = 10_000,
        figure_points: int = 25,
        restarts: int = 8,
        fock_cut: Optional[int] = None,
        k_max: int = DEFAULT_K_MAX,
    ):
        """
        Initialize the suite.

        Args:
            seed: Seed for every random draw
            draws: Random draws per property
            product_states: Product states for the witness positivity check
            figure_points: Grid points for the figure claims
            restarts: Nelder-Mead starts for the figure claims
            fock_cut: Field truncation of the series oracle (default 4)
            k_max: Last index of the series oracle
        """
        self.seed = seed
        self.draws = draws
        self.product_states = product_states
        self.figure_points = figure_points
        self.opt = OptimizerSettings(restarts=restarts, seed=seed)
        self.fock_cut = fock_cut or 4
        self.k_max = k_max
        self.results: List[CheckResult] = []

    def _rng(self, offset: int) -> np.random.Generator:
        return np.random.default_rng(self.seed + offset)

    def _run(self, name: str, check: Callable[[], CheckResult]) -> CheckResult:
        started = time.perf_counter()
        try:
            result = check()
        except Exception as e:
            logger.exception(f"Check {name} raised")
            result = CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e}")
        result.seconds = time.perf_counter() - started
        self.results.append(result)
        logger.info(f"{name}: {'PASS' if result.passed else 'FAIL'} {result.metrics}")
        return result

    def check_basis_unitarity(self) -> CheckResult:
        rng = self._rng(1)
        worst = 0.0
        for n in range(2, 9):
            for _ in range(self.draws):
                u = unitary_of(BasisParams.random(n, rng))
                worst = max(
                    worst,
                    float(np.max(np.abs(u.conj().T @ u - np.eye(n)))),
                    float(np.max(np.abs(u.T @ u.conj() - np.eye(n)))),
                )
        return CheckResult("basis_unitarity", worst < 1e-10, {"max_deviation": worst})

    def check_basis_closed_forms(self) -> CheckResult:
        rng = self._rng(2)
        worst = 0.0
        for _ in range(20):
            x = rng.uniform(0.0, 2.0 * math.pi, 4)
            u = unitary_of(BasisParams.from_vector(2, x))
            worst = max(worst, float(np.max(np.abs(u - explicit_basis_2(*x)))))
            theta1, theta2, phi0, phi1, phi2, eta1, xi0, xi1, zeta0 = rng.uniform(0.0, 2.0 * math.pi, 9)
            params = BasisParams(
                n=3,
                angles=((theta1, theta2), (eta1,), ()),
                phases=((phi0, phi1, phi2), (xi0, xi1), (zeta0,)),
            )
            explicit = explicit_basis_3(theta1, theta2, phi0, phi1, phi2, eta1, xi0, xi1, zeta0)
            worst = max(worst, float(np.max(np.abs(unitary_of(params) - explicit))))
        return CheckResult("basis_closed_forms", worst < 1e-12, {"max_deviation": worst})

    def check_complement_derivatives(self) -> CheckResult:
        rng = self._rng(3)
        step = 1e-5
        worst = 0.0
        for d in range(2, 7):
            for _ in range(10):
                theta = rng.uniform(0.0, math.pi, d - 1)
                phi = rng.uniform(0.0, 2.0 * math.pi, d)
                analytic = complement_coefficients(theta, phi)
                for k in range(1, d):
                    pinned = theta.copy()
                    pinned[:k - 1] = math.pi / 2
                    plus, minus = pinned.copy(), pinned.copy()
                    plus[k - 1] += step
                    minus[k - 1] -= step
                    numeric = (head_coefficients(plus, phi) - head_coefficients(minus, phi)) / (2 * step)
                    worst = max(worst, float(np.max(np.abs(numeric - analytic[k - 1]))))
        return CheckResult("complement_derivatives", worst < 1e-6, {"max_deviation": worst})

    def _random_config(self, rng: np.random.Generator) -> JCConfig:
        return JCConfig.from_detuning(
            delta=float(rng.uniform(-5.0, 5.0)),
            g=float(rng.uniform(0.2, 2.0)),
            gamma=float(rng.uniform(0.0, 1.0)),
            n=int(rng.integers(1, 5)),
            lam=float(rng.uniform(0.0, 1.0)),
        )

    def check_negativity_closed_forms(self) -> CheckResult:
        rng = self._rng(4)
        worst = 0.0
        for _ in range(2 * self.draws):
            cfg = self._random_config(rng)
            t = float(rng.uniform(0.0, 6.0))
            worst = max(
                worst,
                abs(case1_negativity_closed(cfg.n, t, cfg) - negativity(case1_state(cfg.n, t, cfg))),
                abs(case2_negativity_closed(cfg.n, t, cfg) - negativity(case2_state(cfg.n, t, cfg))),
            )
        return CheckResult("negativity_closed_forms", worst < 1e-9, {"max_deviation": worst})

    def check_master_equation_oracle(self) -> CheckResult:
        worst = 0.0
        for t in (0.5, 1.0, 2.0):
            for gamma in (0.0, 0.1, 0.3):
                for delta in (0.0, 1.0, 3.0):
                    cfg = JCConfig.from_detuning(delta=delta, gamma=gamma, n=1)
                    series = master_equation_series(1, t, cfg, fock_cut=self.fock_cut, k_max=self.k_max)
                    closed = case1_state(1, t, cfg, fock_cut=self.fock_cut)
                    worst = max(worst, float(np.max(np.abs(series.entries - closed.entries))))
        return CheckResult("master_equation_oracle", worst < 1e-8, {"max_deviation": worst, "grid_points": 27})

    def check_witness_soundness(self) -> CheckResult:
        rng = self._rng(5)
        lowest, own_error = math.inf, 0.0
        for case in JCCase:
            family = WitnessFamily(case)
            n_b = family.field_dim
            for _ in range(10):
                psi = family.state(random_family_params(rng, family))
                witness = witness_of(psi, 2, n_b)
                own_error = max(own_error, abs(expectation(witness, psi.density(2, n_b)) - (witness.k - 1.0)))
                amplitudes = psi.amplitudes.reshape(2, n_b)
                e = rng.normal(size=(self.product_states, 2)) + 1j * rng.normal(size=(self.product_states, 2))
                f = rng.normal(size=(self.product_states, n_b)) + 1j * rng.normal(size=(self.product_states, n_b))
                e /= np.linalg.norm(e, axis=1, keepdims=True)
                f /= np.linalg.norm(f, axis=1, keepdims=True)
                overlaps = np.einsum('ij,si,sj->s', amplitudes.conj(), e, f)
                lowest = min(lowest, float(np.min(witness.k - np.abs(overlaps) ** 2)))
        return CheckResult(
            "witness_soundness",
            lowest >= -1e-9 and own_error < 1e-12,
            {"min_expectation": lowest, "own_state_error": own_error},
        )

    def check_k_consistency(self) -> CheckResult:
        rng = self._rng(6)
        worst = 0.0
        for _ in range(10 * self.draws):
            psi = random_ket(rng, 4)
            worst = max(worst, abs(k_two_qubit(psi) - k_general(psi, 2, 2)))
        return CheckResult("k_consistency", worst < 1e-10, {"max_deviation": worst})

    def check_fidelity_closed_forms(self) -> CheckResult:
        rng = self._rng(7)
        worst = 0.0
        for case, closed, state in (
            (JCCase.CASE1, case1_fidelity, case1_state),
            (JCCase.CASE2, case2_fidelity, case2_state),
        ):
            family = WitnessFamily(case)
            for _ in range(self.draws):
                cfg = self._random_config(rng)
                t = float(rng.uniform(0.0, 6.0))
                x = random_family_params(rng, family)
                generic = fidelity_pure(family.state(x), state(cfg.n, t, cfg))
                worst = max(worst, abs(closed(x, cfg.n, t, cfg) - generic))
        return CheckResult("fidelity_closed_forms", worst < 1e-10, {"max_deviation": worst})

    def check_figure_claims(self) -> CheckResult:
        grid = np.linspace(0.05, 6.0, self.figure_points)
        figure1 = sweep(JCCase.CASE1, 1, JCConfig.from_detuning(delta=1.0, gamma=0.3, n=1), grid, self.opt)
        figure3 = sweep(JCCase.CASE2, 1, JCConfig.from_detuning(delta=5.0, n=1, lam=0.0), grid, self.opt)
        missed = sum(
            1 for r in figure1 + figure3
            if r.negativity > 1e-3 and r.max_fidelity <= r.k + 1e-6
        )
        false_positives = sum(1 for r in figure1 + figure3 if r.detected and r.negativity <= 1e-9)
        early = FIGURE_GRID[:FIGURE4_EARLY_POINTS]
        figure4 = sweep(JCCase.CASE2, 1, JCConfig.from_detuning(delta=5.0, n=1, lam=0.2), early, self.opt)
        undetected = sum(1 for r in figure4 if r.negativity > 1e-3 and r.max_fidelity <= r.k + 1e-9)
        return CheckResult(
            "figure_claims",
            missed == 0 and false_positives == 0 and undetected > 0,
            {"missed": missed, "false_positives": false_positives, "undetected_entangled": undetected},
        )

    def run_all(self) -> List[CheckResult]:
        """Run every check and return the results in order."""
        self.results = []
        checks = [
            ("basis_unitarity", self.check_basis_unitarity),
            ("basis_closed_forms", self.check_basis_closed_forms),
            ("complement_derivatives", self.check_complement_derivatives),
            ("negativity_closed_forms", self.check_negativity_closed_forms),
            ("master_equation_oracle", self.check_master_equation_oracle),
            ("witness_soundness", self.check_witness_soundness),
            ("k_consistency", self.check_k_consistency),
            ("fidelity_closed_forms", self.check_fidelity_closed_forms),
            ("figure_claims", self.check_figure_claims),
        ]
        for name, check in checks:
            self._run(name, check)
        return self.results

    def summary(self) -> Dict[str, Any]:
        passed = sum(1 for r in self.results if r.passed)
        return {"total": len(self.results), "passed": passed, "failed": len(self.results) - passed}

    def export_markdown(self, filepath: Optional[str] = None) -> str:
        """
        Export results as a Markdown table.

        Args:
            filepath: Optional file path to write results

        Returns:
            Formatted results string
        """
        output = "# Verification Results\n\n"
        if not self.results:
            output += "No checks have been run.\n"
        else:
            output += "| Check | Result | Metrics | Seconds |\n"
            output += "|-------|--------|---------|---------|\n"
            for r in self.results:
                metrics = ", ".join(f"{k}={v:.3g}" for k, v in r.metrics.items()) or r.detail
                output += f"| {r.name} | {'PASS' if r.passed else 'FAIL'} | {metrics} | {r.seconds:.2f} |\n"
            summary = self.summary()
            output += f"\n{summary['passed']}/{summary['total']} checks passed (seed {self.seed})\n"

        if filepath:
            with open(filepath, 'w') as f:
                f.write(output)
        return output


__all__ = [
    'CheckResult',
    'VerificationSuite',
    'explicit_basis_2',
    'explicit_basis_3',
    'random_ket',
    'random_family_params',
]
