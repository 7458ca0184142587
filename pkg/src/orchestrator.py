"""
Figure Orchestrator - Sweep Coordinator

Turns a validated RunConfig into data rows: detection sweeps (figure1,
figure3, figure4, sweep) run every grid point through maximize_fidelity
concurrently; figure2 tabulates the closed-form Case 2 negativity over a
(t, lambda) grid. Rows are assembled in grid order after all points finish.
"""

import asyncio
import logging
import os
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Dict, List, Literal, Optional

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.jcwitness.config_manager import ConfigManager
from src.jcwitness.detect import DetectionReport, JCCase, maximize_fidelity
from src.jcwitness.jcmodel import JCConfig, case2_negativity_closed

logger = logging.getLogger(__name__)

COMMANDS = ("figure1", "figure2", "figure3", "figure4", "sweep", "verify")
DETECTION_COLUMNS = ["t", "negativity", "max_fidelity", "k", "detected", "optimizer_evals"]
NEGATIVITY_COLUMNS = ["t", "lambda", "negativity"]

FIGURE2_NOTE = (
    "Figure 2 provenance: the figure caption states g=1, Delta=1 while the "
    "accompanying text states g=1, Delta=5 for the same plot; this run uses Delta={delta:g}."
)

BUILTIN_PRESETS: Dict[str, Dict[str, Any]] = {
    "figure1": {"case": "case1", "g": 1.0, "delta": 1.0, "gamma": 0.3, "lambda": 0.0, "n": 1,
                "t_min": 0.0, "t_max": 6.0, "t_steps": 200},
    "figure2": {"case": "case2", "g": 1.0, "delta": 5.0, "gamma": 0.0, "n": 1,
                "t_min": 0.0, "t_max": 6.0, "t_steps": 200,
                "lambda_min": 0.0, "lambda_max": 0.5, "lambda_steps": 11},
    "figure3": {"case": "case2", "g": 1.0, "delta": 5.0, "gamma": 0.0, "lambda": 0.0, "n": 1,
                "t_min": 0.0, "t_max": 6.0, "t_steps": 200},
    "figure4": {"case": "case2", "g": 1.0, "delta": 5.0, "gamma": 0.0, "lambda": 0.2, "n": 1,
                "t_min": 0.0, "t_max": 6.0, "t_steps": 200},
}


class RunConfig(BaseModel):
    """Validated parameters of one CLI run."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    command: Literal["figure1", "figure2", "figure3", "figure4", "sweep", "verify"]
    case: JCCase = JCCase.CASE1
    g: float = Field(1.0, gt=0.0)
    delta: float = 1.0
    gamma: float = Field(0.0, ge=0.0)
    lam: float = Field(0.0, ge=0.0, le=1.0, alias="lambda")
    n: int = Field(1, ge=0)
    omega_f: float = 1.0
    t_min: float = Field(0.0, ge=0.0)
    t_max: float = 6.0
    t_steps: int = Field(200, ge=2)
    lambda_min: float = Field(0.0, ge=0.0, le=1.0)
    lambda_max: float = Field(0.5, ge=0.0, le=1.0)
    lambda_steps: int = Field(11, ge=1)
    restarts: int = Field(32, ge=1)
    seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)
    output_path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @model_validator(mode='after')
    def check_ranges(self):
        if self.t_min >= self.t_max:
            raise ValueError(f"t_min ({self.t_min}) must be below t_max ({self.t_max})")
        if self.lambda_min > self.lambda_max:
            raise ValueError(f"lambda_min ({self.lambda_min}) exceeds lambda_max ({self.lambda_max})")
        if self.case == JCCase.CASE2 and self.n < 1:
            raise ValueError("Case 2 needs n >= 1")
        return self

    def jc_config(self, lam: Optional[float] = None) -> JCConfig:
        return JCConfig.from_detuning(
            delta=self.delta,
            g=self.g,
            gamma=self.gamma,
            n=self.n,
            lam=self.lam if lam is None else lam,
            omega_f=self.omega_f,
        )

    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    def lambdas(self) -> np.ndarray:
        return np.linspace(self.lambda_min, self.lambda_max, self.lambda_steps)


@dataclass
class FigureResult:
    """Container for one run's data"""
    command: str
    columns: List[str]
    rows: List[Dict[str, Any]]
    parameters: Dict[str, Any]
    note: Optional[str] = None
    reports: List[DetectionReport] = field(default_factory=list)


def _negativity_row(n: int, t: float, cfg: JCConfig) -> Dict[str, Any]:
    return {"t": t, "lambda": cfg.lam, "negativity": case2_negativity_closed(n, t, cfg)}


class FigureOrchestrator:
    """
    Coordinates figure reproduction and parameter sweeps.

    Defaults are layered: ConfigManager values, then the figure preset, then
    explicit overrides.
    """

    def __init__(self, config: Optional[ConfigManager] = None, presets_path: Optional[str] = None):
        """
        Initialize orchestrator with configuration and presets.

        Args:
            config: Run defaults (a fresh ConfigManager if omitted)
            presets_path: Path to a figure preset YAML file
        """
        self.config = config or ConfigManager()
        self.presets = self._load_presets(presets_path)

    def _load_presets(self, presets_path: Optional[str]) -> Dict[str, Dict[str, Any]]:
        """
        Load figure presets from YAML.

        Args:
            presets_path: Path to presets file

        Returns:
            Preset dictionary keyed by figure name
        """
        path = presets_path or os.path.join(os.path.dirname(__file__), 'config', 'figures.yaml')
        if os.path.exists(path):
            with open(path, 'r') as f:
                loaded = yaml.safe_load(f) or {}
            logger.info(f"Loaded figure presets from {path}")
            return {name: dict(values) for name, values in loaded.items()}
        logger.info("Figure preset file not found; using built-in presets")
        return {name: dict(values) for name, values in BUILTIN_PRESETS.items()}

    def preset(self, command: str) -> Dict[str, Any]:
        return dict(self.presets.get(command, {}))

    def build_run_config(self, command: str, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """
        Merge configuration defaults, the figure preset and explicit overrides.

        Args:
            command: CLI command name
            overrides: Explicitly given values (None entries are ignored)

        Returns:
            Validated RunConfig

        Raises:
            pydantic.ValidationError: If the merged values are invalid
        """
        if command not in COMMANDS:
            raise ValueError(f"Unknown command: {command}. Must be one of {list(COMMANDS)}")
        cm = self.config
        values: Dict[str, Any] = {
            "command": command,
            "g": cm.get('physics.g'),
            "delta": cm.get('physics.delta'),
            "gamma": cm.get('physics.gamma'),
            "lambda": cm.get('physics.lambda'),
            "n": cm.get('physics.n'),
            "omega_f": cm.get('physics.omega_f'),
            "t_min": cm.get('grid.t_min'),
            "t_max": cm.get('grid.t_max'),
            "t_steps": cm.get('grid.t_steps'),
            "lambda_steps": cm.get('grid.lambda_steps'),
            "restarts": cm.get('optimizer.restarts'),
            "seed": cm.get('optimizer.seed'),
            "workers": cm.get('optimizer.workers'),
            "format": cm.get('output.format'),
        }
        values.update(self.preset(command))
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return RunConfig(**{k: v for k, v in values.items() if v is not None})

    def _executor(self, run: RunConfig) -> Optional[Executor]:
        return ProcessPoolExecutor(max_workers=run.workers) if run.workers > 1 else None

    async def run(self, run: RunConfig) -> FigureResult:
        """
        Execute a figure or sweep run.

        Args:
            run: Validated run configuration

        Returns:
            FigureResult with rows in grid order
        """
        if run.command == "verify":
            raise ValueError("verify is handled by the verification suite, not the orchestrator")
        parameters = run.model_dump(by_alias=True, exclude={"output_path"}, mode="json")
        logger.info(f"Running {run.command} with {parameters}")
        if run.command == "figure2":
            rows = await self._negativity_grid(run)
            return FigureResult(
                command=run.command,
                columns=list(NEGATIVITY_COLUMNS),
                rows=rows,
                parameters=parameters,
                note=FIGURE2_NOTE.format(delta=run.delta),
            )
        reports = await self._detection_sweep(run)
        return FigureResult(
            command=run.command,
            columns=list(DETECTION_COLUMNS),
            rows=[report.to_row() for report in reports],
            parameters=parameters,
            reports=reports,
        )

    async def _detection_sweep(self, run: RunConfig) -> List[DetectionReport]:
        """
        Maximize the witness fidelity at every grid time concurrently.

        Args:
            run: Run configuration

        Returns:
            Reports in grid order
        """
        opt = self.config.optimizer_settings().model_copy(update={"restarts": run.restarts, "seed": run.seed})
        case = run.case
        task = partial(maximize_fidelity, case, run.n, cfg=run.jc_config(), opt=opt)
        loop = asyncio.get_running_loop()
        executor = self._executor(run)
        try:
            futures = [loop.run_in_executor(executor, task, float(t)) for t in run.times()]
            reports = await asyncio.gather(*futures)
        finally:
            if executor is not None:
                executor.shutdown()
        detected = sum(r.detected for r in reports)
        logger.info(f"{run.command}: {detected}/{len(reports)} grid points detected")
        return list(reports)

    async def _negativity_grid(self, run: RunConfig) -> List[Dict[str, Any]]:
        """
        Closed-form Case 2 negativity over the (t, lambda) grid, t outer.

        Args:
            run: Run configuration

        Returns:
            Rows (t, lambda, negativity)
        """
        loop = asyncio.get_running_loop()
        configs = [run.jc_config(lam=float(lam)) for lam in run.lambdas()]
        futures = [
            loop.run_in_executor(None, _negativity_row, run.n, float(t), cfg)
            for t in run.times()
            for cfg in configs
        ]
        return list(await asyncio.gather(*futures))


__all__ = [
    'RunConfig',
    'FigureResult',
    'FigureOrchestrator',
    'COMMANDS',
    'DETECTION_COLUMNS',
    'NEGATIVITY_COLUMNS',
    'BUILTIN_PRESETS',
]
