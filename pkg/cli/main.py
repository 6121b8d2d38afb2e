"""herdlab command line.

    herdlab simulate --config scenario.txt
    herdlab ensemble --config scenario.txt --runs 2000 --threads 0
    herdlab scc networks/four_component.txt
    herdlab verify --quick

Exit codes: 0 success, 1 failed verification, 2 bad input or configuration.
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

import click
import numpy as np
import pandas as pd
from dotenv import load_dotenv

from config.settings import AppConfig
from core.exceptions import HerdlabError, UndecidedRunsError
from core.implementations.storage.csv_tables import standard_metadata, write_table, write_trajectory_csv
from core.implementations.storage.weight_matrix_file import load_weight_matrix
from core.models.scc_poset import SccPoset
from core.models.simulation import MAX_SEED
from core.models.verdict import ConsensusKind
from core.models.weight_matrix import WeightMatrix
from core.services.dynamics_service import SCHEDULES, simulate, time_variant_two_agent
from core.services.graph_service import is_irreducible, strongly_connected_components
from core.services.report_service import consensus_fraction_report, corner_frame, verdict_frame
from core.services.reproduction_service import REFERENCE_FILES
from core.utils.infinite_product import g_function_grid
from core.utils.logging import setup_logging
from cli.schemas import ScenarioFile, load_scenario
from dependency_injection.container import ServiceContainer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2


def _output_dir(out: Optional[str], scenario: Optional[ScenarioFile], config: AppConfig) -> Path:
    if out:
        return Path(out)
    if scenario is not None and scenario.output_dir:
        return Path(scenario.output_dir)
    return Path(config.output.output_dir)


def _container(ctx: click.Context, threads: Optional[int] = None) -> ServiceContainer:
    config: AppConfig = ctx.obj
    if threads is not None:
        config.ensemble.threads = threads
    return ServiceContainer(config)


def _load_network(weights: Optional[str], config_path: Optional[str]) -> WeightMatrix:
    if weights:
        return load_weight_matrix(weights)
    if config_path:
        return load_scenario(config_path)[1]
    raise click.UsageError("give a WEIGHTS file or --config")


def _print_poset(scc: SccPoset) -> None:
    click.echo(f"components: {scc.n_components}")
    for r, members in enumerate(scc.components):
        click.echo(f"  {SccPoset.label(r)}: {' '.join(str(i + 1) for i in members)}")
    covers = " ".join(f"({SccPoset.label(r)},{SccPoset.label(s)})" for r, s in sorted(scc.covers))
    click.echo(f"covers: {covers or '-'}")
    click.echo(f"maximal: {' '.join(SccPoset.label(r) for r in scc.maximal)}")
    click.echo(f"minimal: {' '.join(SccPoset.label(r) for r in scc.minimal)}")


config_option = click.option(
    "--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="Scenario file."
)
seed_option = click.option("--seed", type=click.IntRange(0, MAX_SEED), default=None, help="Master seed.")
out_option = click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory.")
threads_option = click.option(
    "--threads",
    type=click.IntRange(min=0),
    default=None,
    help="Worker threads, 0 = one per CPU. Falls back to HERDLAB_THREADS; never changes results.",
)


@click.group()
@click.option("--log-level", default=None, help="Overrides HERDLAB_LOG_LEVEL.")
@click.version_option(package_name="herdlab", prog_name="herdlab")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]) -> None:
    """Random Actions opinion-dynamics lab."""
    config = AppConfig.from_env()
    setup_logging(log_level or config.log_level)
    ctx.obj = config


@cli.command(name="simulate")
@config_option
@seed_option
@out_option
@click.pass_context
def simulate_command(ctx: click.Context, config_path: Optional[str], seed: Optional[int], out: Optional[str]) -> int:
    """One trajectory of the scenario to trajectory.csv."""
    if not config_path:
        raise click.UsageError("simulate needs --config")
    scenario, W = load_scenario(config_path)
    sim_config = scenario.simulation_config(W, seed)
    traj = simulate(sim_config)
    meta = standard_metadata(sim_config.digest(), sim_config.seed, alpha=sim_config.alpha, t_max=sim_config.t_max)
    path = write_trajectory_csv(traj, _output_dir(out, scenario, ctx.obj) / "trajectory.csv", meta)
    click.echo(f"wrote {path}")
    return EXIT_OK


@cli.command(name="ensemble")
@config_option
@seed_option
@click.option("--runs", type=click.IntRange(min=1), default=None, help="Number of runs.")
@click.option("--delta", type=click.FloatRange(0.0, 0.5, min_open=True, max_open=True), default=None)
@click.option("--window", type=click.IntRange(min=1), default=None)
@threads_option
@out_option
@click.pass_context
def ensemble_command(
    ctx: click.Context,
    config_path: Optional[str],
    seed: Optional[int],
    runs: Optional[int],
    delta: Optional[float],
    window: Optional[int],
    threads: Optional[int],
    out: Optional[str],
) -> int:
    """Monte Carlo ensemble: verdict table and corner probabilities."""
    if not config_path:
        raise click.UsageError("ensemble needs --config")
    scenario, W = load_scenario(config_path)
    sim_config = scenario.simulation_config(W, seed)
    runs = runs or scenario.runs
    delta = delta or scenario.delta or ctx.obj.analysis.delta
    window = window or scenario.window or ctx.obj.analysis.window

    container = _container(ctx, threads)
    ensemble = container.get_ensemble_service().run(sim_config, runs, delta=delta, window=window)
    scc = strongly_connected_components(W)

    # No thread count in the header: the files must not depend on it.
    meta = standard_metadata(sim_config.digest(), sim_config.seed, runs=runs, delta=delta, window=window)
    out_dir = _output_dir(out, scenario, ctx.obj)
    write_table(verdict_frame(ensemble, scc), out_dir / "ensemble_verdicts.csv", meta)
    write_table(corner_frame(ensemble, delta), out_dir / "ensemble_corners.csv", meta)

    counts = ensemble.kind_counts()
    click.echo(" ".join(f"{kind.value}={counts[kind]}" for kind in ConsensusKind))
    if is_irreducible(W):
        try:
            report = consensus_fraction_report(ensemble, container.perron_vector(W), sim_config.x1)
            click.echo(
                f"consensus_1 fraction {report.fraction:.4f}, predicted {report.predicted:.4f}, "
                f"99% CI [{report.ci_low:.4f}, {report.ci_high:.4f}]"
            )
        except UndecidedRunsError as exc:
            click.echo(f"no consensus fraction report: {exc}")
    click.echo(f"wrote {out_dir}")
    return EXIT_OK


@cli.command(name="scc")
@click.argument("weights", required=False, type=click.Path(exists=True, dir_okay=False))
@config_option
def scc_command(weights: Optional[str], config_path: Optional[str]) -> int:
    """Components, Hasse covers and maximal/minimal components of a network."""
    _print_poset(strongly_connected_components(_load_network(weights, config_path)))
    return EXIT_OK


@cli.command(name="analyze")
@click.argument("weights", required=False, type=click.Path(exists=True, dir_okay=False))
@config_option
@click.pass_context
def analyze_command(ctx: click.Context, weights: Optional[str], config_path: Optional[str]) -> int:
    """SCC report plus the Perron left vector when the network is irreducible."""
    W = _load_network(weights, config_path)
    _print_poset(strongly_connected_components(W))
    if not is_irreducible(W):
        click.echo("pi: undefined (network is reducible)")
        return EXIT_OK
    pi = _container(ctx).perron_vector(W)
    click.echo(f"pi: {' '.join(f'{v:.17g}' for v in pi.values)}")
    click.echo(f"residual: {pi.residual:.3e} ({pi.solver}, {pi.iterations} iterations)")
    return EXIT_OK


@cli.command(name="gfunc")
@click.option("--alpha-grid", type=click.IntRange(min=1), default=12, help="Evenly spaced alphas in [0.001, 0.999].")
@click.option("--n", "agents", type=click.IntRange(min=1), default=6, help="Number of agents N.")
@click.option("--gamma-points", type=click.IntRange(min=2), default=101)
@out_option
@click.pass_context
def gfunc_command(ctx: click.Context, alpha_grid: int, agents: int, gamma_points: int, out: Optional[str]) -> int:
    """Grid of g(alpha, N, gamma) to gfunc.csv."""
    alphas = np.linspace(0.001, 0.999, alpha_grid)
    frame = g_function_grid(alphas, agents, np.linspace(0.0, 1.0, gamma_points))
    path = write_table(frame, _output_dir(out, None, ctx.obj) / "gfunc.csv", standard_metadata(N=agents))
    click.echo(f"wrote {path}")
    return EXIT_OK


@cli.command(name="timevariant")
@config_option
@click.option("--beta", type=click.FloatRange(0.0, 0.5), default=None)
@click.option("--schedule", type=click.Choice(SCHEDULES), default=None)
@click.option("--steps", type=click.IntRange(min=0), default=None)
@click.option("--x0", default="1,0", show_default=True, help="Two initial opinions.")
@out_option
@click.pass_context
def timevariant_command(
    ctx: click.Context,
    config_path: Optional[str],
    beta: Optional[float],
    schedule: Optional[str],
    steps: Optional[int],
    x0: str,
    out: Optional[str],
) -> int:
    """Two-agent time-variant averaging; the halving schedule never reaches consensus."""
    scenario = load_scenario(config_path)[0] if config_path else None
    beta = beta if beta is not None else (scenario.beta if scenario else 0.25)
    schedule = schedule or (scenario.schedule if scenario else "constant")
    steps = steps if steps is not None else (scenario.steps if scenario else 60)
    try:
        start = [float(v) for v in x0.replace(",", " ").split()]
    except ValueError:
        raise click.BadParameter(f"not a pair of numbers: {x0!r}", param_hint="--x0") from None

    result = time_variant_two_agent(beta, schedule, start, steps)
    frame = pd.DataFrame(result.trajectory, columns=["x1", "x2"])
    frame.insert(0, "t", np.arange(steps + 1))
    meta = standard_metadata(schedule=schedule, beta=beta, steps=steps)
    path = write_table(frame, _output_dir(out, scenario, ctx.obj) / "timevariant.csv", meta)
    limit = result.limit_matrix
    click.echo(f"terminal gap {result.terminal_gap:.12g}")
    click.echo(f"limit matrix [[{limit[0, 0]:.12g}, {limit[0, 1]:.12g}], [{limit[1, 0]:.12g}, {limit[1, 1]:.12g}]]")
    click.echo(f"wrote {path}")
    return EXIT_OK


@cli.command(name="verify")
@click.option("--quick", is_flag=True, help="Divide Monte Carlo run counts by 10.")
@click.option("--only", multiple=True, help="Run only the named check (repeatable).")
@threads_option
@out_option
@click.pass_context
def verify_command(ctx: click.Context, quick: bool, only: Tuple[str, ...], threads: Optional[int], out: Optional[str]) -> int:
    """Run the property and acceptance checks; exit 1 if any fails."""
    service = _container(ctx, threads).get_verification_service()
    unknown = sorted(set(only) - set(service.check_names()))
    if unknown:
        raise click.BadParameter(f"unknown check(s) {unknown}; choose from {service.check_names()}", param_hint="--only")
    report = service.run(quick=quick, only=only or None)
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        click.echo(f"{status} {check.name} ({check.seconds:.2f}s): {check.detail}")
    path = service.write_report(report, _output_dir(out, None, ctx.obj) / "verify_report.json")
    click.echo(f"{len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed; wrote {path}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


@cli.command(name="reproduce")
@click.option("--only", multiple=True, type=click.Choice(REFERENCE_FILES), help="Write only these files (repeatable).")
@out_option
@click.pass_context
def reproduce_command(ctx: click.Context, only: Tuple[str, ...], out: Optional[str]) -> int:
    """Data files for the g grid and the consensus / split trajectories."""
    result = _container(ctx).get_reproduction_service().run(_output_dir(out, None, ctx.obj), only or None)
    for name, path in result.paths.items():
        seed = f" (seed {result.seeds[name]})" if name in result.seeds else ""
        click.echo(f"{name}: {path}{seed}")
    return EXIT_OK


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="herdlab", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG_ERROR
    except (HerdlabError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG_ERROR
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    load_dotenv()
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
