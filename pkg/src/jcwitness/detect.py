"""
Witness Detection for the Jaynes-Cummings States

Closed-form fidelities between the evolved JC states and the Bell-form
projector state (1/sqrt 2)(|Phi'^(0)>|Phi^(0)> + |Phi'^(1)>|Phi^(1)>), where
the primed vectors span the atom and the unprimed ones the field block.
The witness k 1 - |Psi><Psi| has k = 1/2, so a state is detected when the
fidelity maximized over every basis parameter exceeds 1/2.

Maximization is a seeded multi-start Nelder-Mead search over the parameter
box (angles in [0, pi], phases in [0, 2 pi]) with scrambled Halton starts.
The phi phases enter only as Re(z e^{i psi}) and are maximized exactly as |z|;
the simplex moves in the remaining 3 (case 1) or 6 (case 2) coordinates.
"""

import cmath
import logging
import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize
from scipy.stats import qmc

from src.jcwitness.basis import BasisParams
from src.jcwitness.jcmodel import (
    JCConfig,
    case1_coefficients,
    case1_negativity_closed,
    case2_coefficients,
    case2_negativity_closed,
)
from src.jcwitness.linalg_core import Ket
from src.jcwitness.witness import SchmidtForm, schmidt_state

logger = logging.getLogger(__name__)

BELL_ALPHA = math.pi / 4
DETECTION_GUARD = 1e-9
TWO_PI = 2.0 * math.pi

ANGLE, PHASE = "angle", "phase"

# Field layout of case 2 -> canonical BasisParams order (theta1, theta2, phi0, phi1, phi2, eta1, xi0, xi1, zeta0).
_CASE2_FIELD_ORDER = (0, 1, 5, 6, 7, 2, 3, 4, 8)


class JCCase(str, Enum):
    CASE1 = "case1"
    CASE2 = "case2"


@dataclass(frozen=True)
class WitnessFamily:
    """
    Parameter layout of the Bell-form projector state for one JC case.

    case1: field (theta1, phi0, phi1, xi0) + atom (theta1', phi0', phi1', xi0'), 8 reals.
    case2: field (theta1, theta2, eta1, xi0, xi1, phi0, phi1, phi2, zeta0)
           + atom (theta1', phi0', phi1', xi0'), 13 reals.
    """
    case: JCCase

    @property
    def field_dim(self) -> int:
        return 2 if self.case == JCCase.CASE1 else 3

    @property
    def field_kinds(self) -> Tuple[str, ...]:
        if self.case == JCCase.CASE1:
            return (ANGLE, PHASE, PHASE, PHASE)
        return (ANGLE, ANGLE, ANGLE) + (PHASE,) * 6

    @property
    def kinds(self) -> Tuple[str, ...]:
        return self.field_kinds + (ANGLE, PHASE, PHASE, PHASE)

    @property
    def dimension(self) -> int:
        return len(self.kinds)

    @property
    def k(self) -> float:
        return math.cos(BELL_ALPHA) ** 2

    def bounds(self) -> List[Tuple[float, float]]:
        return [(0.0, math.pi) if kind == ANGLE else (0.0, TWO_PI) for kind in self.kinds]

    def reduce(self, params: Sequence[float]) -> np.ndarray:
        """
        Coordinates the fidelity depends on beyond the phi phases.

        case1: (theta1, theta1', xi0 + xi0')
        case2: (theta1, theta2, eta1, theta1', xi0 + xi0', xi1 + xi0')
        """
        x = self.check(params)
        if self.case == JCCase.CASE1:
            return np.array([x[0], x[4], x[3] + x[7]])
        return np.array([x[0], x[1], x[2], x[9], x[3] + x[12], x[4] + x[12]])

    def check(self, params: Sequence[float]) -> np.ndarray:
        x = np.asarray(params, dtype=float).reshape(-1)
        if x.size != self.dimension:
            raise ValueError(f"{self.case.value} layout needs {self.dimension} parameters, got {x.size}")
        return x

    def field_params(self, params: Sequence[float]) -> BasisParams:
        x = self.check(params)
        values = x[:len(self.field_kinds)]
        if self.case == JCCase.CASE2:
            values = values[list(_CASE2_FIELD_ORDER)]
        return BasisParams.from_vector(self.field_dim, values)

    def atom_params(self, params: Sequence[float]) -> BasisParams:
        x = self.check(params)
        return BasisParams.from_vector(2, x[len(self.field_kinds):])

    def schmidt_form(self, params: Sequence[float]) -> SchmidtForm:
        """Atom is subsystem A, the field block subsystem B."""
        return SchmidtForm(
            n_a=2,
            n_b=self.field_dim,
            rank=2,
            alphas=(BELL_ALPHA,),
            basis_a=self.atom_params(params),
            basis_b=self.field_params(params),
        )

    def state(self, params: Sequence[float]) -> Ket:
        return schmidt_state(self.schmidt_form(params))


class OptimizerSettings(BaseModel):
    """Multi-start Nelder-Mead controls."""
    model_config = ConfigDict(frozen=True)

    restarts: int = Field(32, ge=1)
    seed: int = Field(0, ge=0)
    xatol: float = Field(1e-9, gt=0.0)
    fatol: float = Field(1e-12, gt=0.0)
    max_evals_per_start: int = Field(2000, ge=10)
    polish: bool = Field(False, description="Restart each local search once from its own optimum")



@dataclass
class DetectionReport:
    """Outcome of one fidelity maximization."""
    time: float
    negativity: float
    max_fidelity: float
    k: float
    detected: bool
    argmax_params: Tuple[float, ...]
    optimizer_evals: int
    converged: bool = True
    seed: int = 0
    extra: Dict[str, float] = field(default_factory=dict)

    def to_row(self) -> Dict[str, object]:
        return {
            "t": self.time,
            "negativity": self.negativity,
            "max_fidelity": self.max_fidelity,
            "k": self.k,
            "detected": self.detected,
            "optimizer_evals": self.optimizer_evals,
        }


def _case1_overlaps(th: float, tha: float, u: float) -> Tuple[complex, complex]:
    """Y1, Y2 with u = xi0 + xi0' the only surviving combination of the xi phases."""
    ct, st = math.cos(th), math.sin(th)
    cta, sta = math.cos(tha), math.sin(tha)
    w = cmath.exp(1j * u)
    return ct * cta + st * sta * w, st * sta + ct * cta * w


def _case1_value(x: Sequence[float], e: float, f: float, g: complex) -> float:
    th, p0, p1, xi, tha, pa0, pa1, xia = x
    y1, y2 = _case1_overlaps(th, tha, xi + xia)
    phase = cmath.exp(1j * (p1 - p0 + pa1 - pa0))
    return 0.5 * (abs(y1) ** 2 * e + abs(y2) ** 2 * f) + (y1.conjugate() * y2 * phase * g).real


def _case1_profile(r: np.ndarray, e: float, f: float, g: complex) -> float:
    """Case 1 fidelity maximized over the phi phase combination: Re(z e^{i psi}) <= |z|."""
    th, tha, u = np.asarray(r, dtype=float).tolist()
    y1, y2 = _case1_overlaps(th, tha, u)
    return 0.5 * (abs(y1) ** 2 * e + abs(y2) ** 2 * f) + abs(y1) * abs(y2) * abs(g)


def _case1_params(r: np.ndarray, e: float, f: float, g: complex) -> np.ndarray:
    """Full 8-parameter point attaining the case 1 profile value at r."""
    th, tha, u = np.asarray(r, dtype=float).tolist()
    y1, y2 = _case1_overlaps(th, tha, u)
    psi = -cmath.phase(y1.conjugate() * y2 * g)
    return np.array([th, 0.0, psi % TWO_PI, u % TWO_PI, tha, 0.0, 0.0, 0.0])


def _case2_overlaps(
    th1: float, th2: float, eta: float, tha: float, u0: float, u1: float
) -> Tuple[complex, complex, complex, complex]:
    """X1..X4 with u0 = xi0 + xi0' and u1 = xi1 + xi0'."""
    c1, s1 = math.cos(th1), math.sin(th1)
    c2, s2 = math.cos(th2), math.sin(th2)
    ce, se = math.cos(eta), math.sin(eta)
    cta, sta = math.cos(tha), math.sin(tha)
    v0, v1 = cmath.exp(1j * u0), cmath.exp(1j * u1)
    mid = ce * c1 * c2 * v0 - se * s2 * v1
    tail = ce * c1 * s2 * v0 + se * c2 * v1
    x1 = c1 * cta + ce * s1 * sta * v0
    x2 = s1 * c2 * sta + mid * cta
    x3 = s1 * c2 * cta - mid * sta
    x4 = s1 * s2 * sta + tail * cta
    return x1, x2, x3, x4


def _case2_value(x: Sequence[float], lam: float, a: complex, b: complex, c: complex, d: complex) -> float:
    th1, th2, eta, xi0, xi1, p0, p1, p2, _zeta, tha, pa0, pa1, xia = x
    x1, x2, x3, x4 = _case2_overlaps(th1, th2, eta, tha, xi0 + xia, xi1 + xia)
    ground = 0.5 * (abs(x1) ** 2 * abs(a) ** 2 + abs(x2) ** 2 * abs(b) ** 2) + (
        x1.conjugate() * x2 * cmath.exp(1j * (p1 - p0 + pa1 - pa0)) * a * b.conjugate()
    ).real
    excited = 0.5 * (abs(x3) ** 2 * abs(c) ** 2 + abs(x4) ** 2 * abs(d) ** 2) + (
        x3.conjugate() * x4 * cmath.exp(1j * (p2 - p1 + pa1 - pa0)) * c * d.conjugate()
    ).real
    return lam * ground + (1.0 - lam) * excited


def _case2_profile(r: np.ndarray, lam: float, a: complex, b: complex, c: complex, d: complex) -> float:
    """Case 2 fidelity maximized over both phi phase combinations, which enter independently."""
    x1, x2, x3, x4 = _case2_overlaps(*np.asarray(r, dtype=float).tolist())
    ground = 0.5 * (abs(x1) ** 2 * abs(a) ** 2 + abs(x2) ** 2 * abs(b) ** 2) + abs(x1) * abs(x2) * abs(a) * abs(b)
    excited = 0.5 * (abs(x3) ** 2 * abs(c) ** 2 + abs(x4) ** 2 * abs(d) ** 2) + abs(x3) * abs(x4) * abs(c) * abs(d)
    return lam * ground + (1.0 - lam) * excited


def _case2_params(r: np.ndarray, lam: float, a: complex, b: complex, c: complex, d: complex) -> np.ndarray:
    """Full 13-parameter point attaining the case 2 profile value at r (zeta0 is inert and set to 0)."""
    th1, th2, eta, tha, u0, u1 = np.asarray(r, dtype=float).tolist()
    x1, x2, x3, x4 = _case2_overlaps(th1, th2, eta, tha, u0, u1)
    psi_ground = -cmath.phase(x1.conjugate() * x2 * a * b.conjugate())
    psi_excited = -cmath.phase(x3.conjugate() * x4 * c * d.conjugate())
    return np.array([
        th1, th2, eta, u0 % TWO_PI, u1 % TWO_PI,
        0.0, psi_ground % TWO_PI, (psi_ground + psi_excited) % TWO_PI, 0.0,
        tha, 0.0, 0.0, 0.0,
    ])



def case1_fidelity(params: Sequence[float], n: int, t: float, cfg: JCConfig) -> float:
    """
    Fidelity of the Case 1 state with the Bell-form projector state.

    (1/2)(|Y1|^2 E + |Y2|^2 F) + Re(Y1* Y2 e^{i(phi1 - phi0 + phi1' - phi0')} G)

    Args:
        params: 8 parameters in the case1 layout
        n: Initial photon number
        t: Time
        cfg: Model parameters

    Returns:
        The fidelity
    """
    x = WitnessFamily(JCCase.CASE1).check(params)
    coeffs = case1_coefficients(n, t, cfg)
    return _case1_value(x, coeffs.E, coeffs.F, coeffs.G)


def case2_fidelity(params: Sequence[float], n: int, t: float, cfg: JCConfig) -> float:
    """
    Fidelity of the Case 2 state with the Bell-form projector state, the
    lambda-weighted sum of the two branch overlaps.

    Args:
        params: 13 parameters in the case2 layout
        n: Initial photon number (>= 1)
        t: Time
        cfg: Model parameters (lambda is used)

    Returns:
        The fidelity
    """
    x = WitnessFamily(JCCase.CASE2).check(params)
    coeffs = case2_coefficients(n, t, cfg)
    return _case2_value(x, cfg.lam, coeffs.A, coeffs.B, coeffs.C, coeffs.D)


def _objective(
    case: JCCase, n: int, t: float, cfg: JCConfig
) -> Tuple[Callable[[np.ndarray], float], Callable[[np.ndarray], np.ndarray], float]:
    """
    Phase-maximized fidelity over the reduced coordinates, the map back to a
    full parameter point, and the closed-form negativity.
    """
    if case == JCCase.CASE1:
        coeffs = case1_coefficients(n, t, cfg)
        bound = dict(e=coeffs.E, f=coeffs.F, g=coeffs.G)
        return (
            partial(_case1_profile, **bound),
            partial(_case1_params, **bound),
            case1_negativity_closed(n, t, cfg),
        )
    coeffs = case2_coefficients(n, t, cfg)
    bound = dict(lam=cfg.lam, a=coeffs.A, b=coeffs.B, c=coeffs.C, d=coeffs.D)
    return (
        partial(_case2_profile, **bound),
        partial(_case2_params, **bound),
        case2_negativity_closed(n, t, cfg),
    )


def start_points(family: WitnessFamily, opt: OptimizerSettings) -> np.ndarray:
    """
    Scrambled Halton starts scaled to the parameter box.

    The first m points do not depend on the restart count, so a larger budget
    always searches a superset of starts.
    """
    sampler = qmc.Halton(d=family.dimension, scramble=True, seed=opt.seed)
    unit = sampler.random(opt.restarts)
    lower, upper = zip(*family.bounds())
    return qmc.scale(unit, lower, upper)


def maximize_fidelity(
    case: JCCase,
    n: int,
    t: float,
    cfg: JCConfig,
    opt: Optional[OptimizerSettings] = None,
) -> DetectionReport:
    """
    Maximize the witness fidelity over every basis parameter and decide detection.

    Every start is mapped to the reduced coordinates of WitnessFamily.reduce;
    the phi phase combinations are maximized exactly, so Nelder-Mead only
    searches directions the fidelity actually depends on.

    Args:
        case: Which JC case
        n: Initial photon number
        t: Time (>= 0)
        cfg: Model parameters
        opt: Optimizer settings (defaults if omitted)

    Returns:
        DetectionReport; detected iff max fidelity > k + 1e-9
    """
    if t < 0:
        raise ValueError(f"Time must be nonnegative, got t={t}")
    case = JCCase(case)
    opt = opt or OptimizerSettings()
    family = WitnessFamily(case)
    profile, full_params, negativity = _objective(case, n, t, cfg)

    def loss(r: np.ndarray) -> float:
        return -profile(r)

    options = {
        "xatol": opt.xatol,
        "fatol": opt.fatol,
        "maxfev": opt.max_evals_per_start,
    }
    best_value, best_r = -math.inf, None
    evaluations = 0
    converged = False
    for x0 in start_points(family, opt):
        result = minimize(loss, family.reduce(x0), method="Nelder-Mead", options=options)
        evaluations += result.nfev
        if opt.polish:
            result = minimize(loss, result.x, method="Nelder-Mead", options=options)
            evaluations += result.nfev
        converged = converged or bool(result.success)
        if -result.fun > best_value:
            best_value, best_r = -float(result.fun), result.x

    if not converged:
        logger.warning(f"No Nelder-Mead start converged at t={t:.6g} ({case.value}); reporting best so far")

    max_fidelity = min(max(best_value, 0.0), 1.0)
    report = DetectionReport(
        time=float(t),
        negativity=float(negativity),
        max_fidelity=max_fidelity,
        k=family.k,
        detected=max_fidelity > family.k + DETECTION_GUARD,
        argmax_params=tuple(float(v) for v in full_params(best_r)),
        optimizer_evals=int(evaluations),
        converged=converged,
        seed=opt.seed,
        extra={"lambda": cfg.lam} if case == JCCase.CASE2 else {},
    )
    logger.debug(
        f"{case.value} t={t:.6g}: negativity={report.negativity:.6g} "
        f"max_fidelity={report.max_fidelity:.9g} detected={report.detected}"
    )
    return report


def check_time_grid(times: Sequence[float]) -> np.ndarray:
    grid = np.asarray(times, dtype=float).reshape(-1)
    if grid.size == 0:
        raise ValueError("Time grid is empty")
    if np.any(grid < 0):
        raise ValueError("Time grid contains negative times")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("Time grid must be strictly ascending")
    return grid


def sweep(
    case: JCCase,
    n: int,
    cfg: JCConfig,
    times: Sequence[float],
    opt: Optional[OptimizerSettings] = None,
    executor: Optional[Executor] = None,
) -> List[DetectionReport]:
    """
    Run maximize_fidelity at every time of an ascending grid.

    Args:
        case: Which JC case
        n: Initial photon number
        cfg: Model parameters
        times: Nonempty, strictly ascending times
        opt: Optimizer settings
        executor: Optional executor to spread grid points over

    Returns:
        One DetectionReport per time, in grid order
    """
    grid = check_time_grid(times)
    case = JCCase(case)
    opt = opt or OptimizerSettings()
    logger.info(f"Sweeping {case.value} over {grid.size} times (restarts={opt.restarts}, seed={opt.seed})")
    task = partial(maximize_fidelity, case, n, cfg=cfg, opt=opt)
    if executor is None:
        reports = [task(float(t)) for t in grid]
    else:
        reports = list(executor.map(task, [float(t) for t in grid]))
    detected = sum(report.detected for report in reports)
    logger.info(f"Sweep finished: {detected}/{len(reports)} points detected")
    return reports


__all__ = [
    'JCCase',
    'WitnessFamily',
    'OptimizerSettings',
    'DetectionReport',
    'case1_fidelity',
    'case2_fidelity',
    'start_points',
    'maximize_fidelity',
    'check_time_grid',
    'sweep',
]
