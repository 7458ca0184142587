"""
Command-Line Interface Module

Click commands that reproduce the four figures as data files, run parameter
sweeps and the verification suite. Data goes to --out or stdout; status
messages go to stderr.

Exit codes: 0 success, 1 verification failure or runtime error, 2 usage error.
"""

import asyncio
import csv
import io
import json
import logging
import sys
from typing import Any, Dict, List, Optional

import click
from colorama import Fore, Style, init
from pydantic import ValidationError

from src.evaluation.verification import VerificationSuite
from src.jcwitness.config_manager import ConfigManager
from src.orchestrator import FigureOrchestrator, FigureResult, RunConfig

# Initialize colorama for cross-platform colored output
init(autoreset=True)

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Flags that contradict what a command fixes or ignores.
FORBIDDEN_FLAGS = {
    "figure1": {"lambda"},
    "figure2": {"lambda", "gamma", "restarts"},
    "figure3": {"lambda", "gamma"},
    "figure4": {"lambda", "gamma"},
}


def setup_logging(level: str = "WARNING", log_file: Optional[str] = None):
    """Configure root logging to stderr and optionally a file."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def print_header(title: str):
    """Print a formatted header."""
    click.echo(f"\n{Fore.CYAN}{'=' * 70}", err=True)
    click.echo(f"{Fore.CYAN}{title.center(70)}", err=True)
    click.echo(f"{Fore.CYAN}{'=' * 70}{Style.RESET_ALL}\n", err=True)


def print_success(message: str):
    """Print a success message."""
    click.echo(f"{Fore.GREEN}✓ {message}{Style.RESET_ALL}", err=True)


def print_error(message: str):
    """Print an error message."""
    click.echo(f"{Fore.RED}✗ {message}{Style.RESET_ALL}", err=True)


def print_warning(message: str):
    """Print a warning message."""
    click.echo(f"{Fore.YELLOW}⚠ {message}{Style.RESET_ALL}", err=True)


def print_info(message: str):
    """Print an info message."""
    click.echo(f"{Fore.BLUE}ℹ {message}{Style.RESET_ALL}", err=True)


def _format_value(value: Any, precision: int) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{precision}g}"
    return str(value)


def format_csv(result: FigureResult, precision: int = 12) -> str:
    """
    Render rows as CSV with a fixed significant-digit format.

    Args:
        result: Figure or sweep result
        precision: Significant digits for floats

    Returns:
        CSV text with a header line of the result's columns
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_format_value(row[column], precision) for column in result.columns])
    return buffer.getvalue()


def format_json(result: FigureResult) -> str:
    """Render the result as JSON: command, parameters, note, columns and rows."""
    data = {
        "command": result.command,
        "parameters": result.parameters,
        "note": result.note,
        "columns": result.columns,
        "rows": [{column: row[column] for column in result.columns} for row in result.rows],
    }
    return json.dumps(data, indent=2) + "\n"


def write_output(result: FigureResult, run: RunConfig, precision: int = 12):
    text = format_csv(result, precision) if run.format == "csv" else format_json(result)
    if run.output_path:
        with open(run.output_path, 'w', newline='') as f:
            f.write(text)
        print_success(f"Wrote {len(result.rows)} rows to {run.output_path}")
    else:
        click.echo(text, nl=False)


def check_flags(command: str, given: Dict[str, Any]):
    """
    Reject flags that contradict the command.

    Raises:
        click.UsageError: On an invalid flag combination
    """
    forbidden = set(FORBIDDEN_FLAGS.get(command, set()))
    if command == "sweep":
        forbidden = {"lambda"} if given.get("case", "case1") == "case1" else {"gamma"}
    clash = sorted(name for name in forbidden if given.get(name) is not None)
    if clash:
        flags = ", ".join(f"--{name}" for name in clash)
        raise click.UsageError(f"{command} does not accept {flags}")


def run_options(func):
    """Shared physics, grid, optimizer and output flags."""
    options = [
        click.option('--g', type=float, default=None, help='Atom-field coupling'),
        click.option('--delta', type=float, default=None, help='Detuning omega_a - omega_f'),
        click.option('--gamma', type=float, default=None, help='Phase-decoherence coefficient'),
        click.option('--lambda', 'lam', type=float, default=None, help='Ground-state weight of the atom'),
        click.option('--n', type=int, default=None, help='Initial photon number'),
        click.option('--t-min', type=float, default=None, help='First time'),
        click.option('--t-max', type=float, default=None, help='Last time'),
        click.option('--t-steps', type=int, default=None, help='Number of times'),
        click.option('--restarts', type=int, default=None, help='Nelder-Mead starts per point'),
        click.option('--seed', type=int, default=None, help='Seed of the start sequence'),
        click.option('--workers', type=int, default=None, help='Processes for grid points'),
        click.option('--out', 'output_path', type=click.Path(dir_okay=False), default=None,
                     help='Output file (stdout if omitted)'),
        click.option('--format', 'output_format', type=click.Choice(['csv', 'json']), default=None,
                     help='Output format'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _execute(ctx: click.Context, command: str, flags: Dict[str, Any]):
    """Validate flags, run the orchestrator and write the data."""
    flags = dict(flags)
    flags["lambda"] = flags.pop("lam", None)
    flags["format"] = flags.pop("output_format", None)
    check_flags(command, flags)

    config: ConfigManager = ctx.obj["config"]
    orchestrator = FigureOrchestrator(config)
    try:
        run = orchestrator.build_run_config(command, flags)
    except ValidationError as e:
        raise click.UsageError(f"Invalid parameters: {e.errors()[0]['msg']}")

    print_header(f"{command}: {run.case.value}")
    try:
        result = asyncio.run(orchestrator.run(run))
        if result.note:
            print_warning(result.note)
        write_output(result, run, int(config.get('output.precision', 12)))
    except Exception as e:
        print_error(f"Error during {command}: {e}")
        logger.exception(f"Error in {command} command")
        sys.exit(1)


@click.group()
@click.version_option(version='1.1.0', prog_name='jcwitness')
@click.option('--config', 'config_file', type=click.Path(exists=True, dir_okay=False), default=None,
              help='YAML configuration file (default: ./config.yaml if present)')
@click.option('--log-level', type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              default=None, help='Logging level')
@click.pass_context
def cli(ctx, config_file, log_level):
    """
    jcwitness - Entanglement witnesses for the Jaynes-Cummings model.

    Reproduce the negativity and maximal-fidelity curves of the four figures,
    run custom sweeps, and verify the numerical invariants.
    """
    config = ConfigManager(config_file)
    setup_logging(log_level or config.get('logging.level', 'WARNING'), config.get('logging.file'))
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


@cli.command()
@run_options
@click.pass_context
def figure1(ctx, **flags):
    """Case 1 (g=1, gamma=0.3, Delta=1): negativity and maximal witness fidelity."""
    _execute(ctx, "figure1", flags)


@cli.command()
@run_options
@click.option('--lambda-steps', type=int, default=None, help='Number of lambda values in [0, 0.5]')
@click.pass_context
def figure2(ctx, lambda_steps, **flags):
    """Case 2 negativity over the (t, lambda) grid."""
    flags["lambda_steps"] = lambda_steps
    _execute(ctx, "figure2", flags)


@cli.command()
@run_options
@click.pass_context
def figure3(ctx, **flags):
    """Case 2 with a pure atom (lambda=0, Delta=5)."""
    _execute(ctx, "figure3", flags)


@cli.command()
@run_options
@click.pass_context
def figure4(ctx, **flags):
    """Case 2 with a mixed atom (lambda=0.2, Delta=5)."""
    _execute(ctx, "figure4", flags)


@cli.command()
@run_options
@click.option('--case', type=click.Choice(['case1', 'case2']), default='case1', help='Which JC case')
@click.pass_context
def sweep(ctx, case, **flags):
    """Detection sweep with arbitrary parameters."""
    flags["case"] = case
    _execute(ctx, "sweep", flags)


@cli.command()
@click.option('--seed', type=int, default=0, help='Seed for random draws')
@click.option('--draws', type=int, default=100, help='Random draws per property')
@click.option('--report', type=click.Path(dir_okay=False), default=None, help='Write a Markdown report')
@click.pass_context
def verify(ctx, seed, draws, report):
    """Run the invariant suite; exit 1 if any check fails."""
    print_header("Verification")
    config: ConfigManager = ctx.obj["config"]
    suite = VerificationSuite(
        seed=seed,
        draws=draws,
        fock_cut=config.get('series.fock_cut'),
        k_max=int(config.get('series.k_max', 60)),
    )
    try:
        results = suite.run_all()
    except Exception as e:
        print_error(f"Verification aborted: {e}")
        logger.exception("Error in verify command")
        sys.exit(1)

    for r in results:
        if r.passed:
            print_success(f"{r.name} ({r.seconds:.2f}s)")
        else:
            print_error(f"{r.name}: {r.metrics or r.detail}")
    if report:
        suite.export_markdown(report)
        print_info(f"Report written to {report}")

    summary = suite.summary()
    click.echo(f"passed {summary['passed']}/{summary['total']}, failed {summary['failed']}")
    if summary['failed']:
        sys.exit(1)


__all__ = [
    'cli',
    'setup_logging',
    'format_csv',
    'format_json',
    'check_flags',
    'print_header',
    'print_success',
    'print_error',
    'print_warning',
    'print_info',
]
