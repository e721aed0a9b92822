# -*- coding: utf-8 -*-
# ------------------------------------------------------------------------------
#
#   Copyright 2026 Valory AG
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#
# ------------------------------------------------------------------------------
"""CLI implementation."""
import logging
from dataclasses import dataclass
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, Tuple

import click  # type: ignore

from vibent.config_storage import ParamsStorage
from vibent.errors import BaseSimulationError
from vibent.params import ModulationScheme, SystemParams
from vibent.scenarios import (
    RunOutcome,
    RunSettings,
    Scenario,
    ScenarioKind,
    ScenarioRunner,
    SpectrumMethod,
)


LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
PARTIAL_EXIT_CODE = 2

config_option = click.option(
    "--config",
    "-c",
    type=click.Path(dir_okay=False, path_type=Path),
    required=False,
    default=None,
    help="Parameter file (INI)",
)
out_option = click.option(
    "--out",
    "-o",
    type=click.Path(file_okay=False, path_type=Path),
    required=False,
    default=Path("results"),
    help="Output directory",
)
g0_option = click.option(
    "--g0",
    type=float,
    multiple=True,
    help="Coupling g_0 in units of Γ, repeat to sweep",
)


@dataclass()
class ClickAPPObject:
    """Click app context object."""

    storage: ParamsStorage
    out: Path
    full_dims: bool = False
    threads: Optional[int] = None
    seed: Optional[int] = None
    save_trajectories: bool = False

    def load(self) -> Tuple[SystemParams, RunSettings]:
        """
        Load the parameter file with command line overrides applied.

        :return: (SystemParams, RunSettings)
        """
        params, settings = self.storage.load()
        changes: dict = {}
        if self.full_dims:
            changes["full_dims"] = True
        if self.threads is not None:
            changes["threads"] = self.threads
        if self.seed is not None:
            changes["seed"] = self.seed
        if self.save_trajectories:
            changes["save_trajectories"] = True
        return params, settings.replace(**changes)

    def run(self, kind: ScenarioKind, **setting_changes: Any) -> RunOutcome:
        """
        Run one scenario.

        :param kind: ScenarioKind
        :param setting_changes: RunSettings fields set from command options

        :return: RunOutcome
        """
        params, settings = self.load()
        changes = {k: v for k, v in setting_changes.items() if v not in (None, ())}
        settings = settings.replace(**changes)
        scenario = Scenario.build(kind, params, settings, self.out)
        runner = ScenarioRunner(threads=settings.threads, echo=click.echo)
        return runner.run(scenario)


@click.group()
@click.pass_context
@config_option
@out_option
@click.option("--full-dims", is_flag=True, default=False, help="Use the full Fock truncation")
@click.option("--threads", "-t", type=int, required=False, default=None, help="Sweep workers")
@click.option("--seed", type=int, required=False, default=None, help="Seed of the anharmonic spectrum")
@click.option(
    "--save-trajectories",
    is_flag=True,
    default=False,
    help="Also write per-point trajectories and final density matrices",
)
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default="WARNING",
    help="Logging level",
)
def cli(  # pylint: disable=too-many-arguments
    ctx: click.Context,
    config: Optional[Path],
    out: Path,
    full_dims: bool,
    threads: Optional[int],
    seed: Optional[int],
    save_trajectories: bool,
    log_level: str,
) -> None:
    """
    Group commands.

    :param ctx: click context
    :param config: parameter file path
    :param out: output directory
    :param full_dims: use the full Fock truncation
    :param threads: number of sweep workers
    :param seed: seed of the anharmonic spectrum draw
    :param save_trajectories: write per-point trajectory files
    :param log_level: logging level name
    """
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    storage = ParamsStorage()
    if config is not None:
        storage.CONF_PATH = config
    ctx.obj = ClickAPPObject(
        storage=storage,
        out=out,
        full_dims=full_dims,
        threads=threads,
        seed=seed,
        save_trajectories=save_trajectories,
    )


def simulation_error(func: Callable) -> Callable:
    """
    Decorate with simulation errors converted to click error message.

    :param func: function to wrap

    :return: wrapper for func
    """

    @wraps(func)
    def wrap(*args, **kwargs) -> Any:  # type: ignore
        try:
            return func(*args, **kwargs)
        except BaseSimulationError as exc:
            raise click.ClickException(f"{type(exc).__name__}: {exc}") from exc

    return wrap


def report(outcome: RunOutcome) -> None:
    """
    Print written files and exit with code 2 on partial sweeps.

    :param outcome: RunOutcome
    """
    for path in outcome.paths:
        click.echo(f"Written {path}")
    if outcome.partial:
        click.echo(f"ERROR: {len(outcome.failures)} sweep points failed!")
        for label, error in outcome.failures.items():
            click.echo(f"ERROR: [Point {label}]: {error}")
        raise SystemExit(PARTIAL_EXIT_CODE)


def _floats(values: Sequence[float]) -> Optional[Tuple[float, ...]]:
    return tuple(values) or None


@click.command()
@g0_option
@click.option("--rabi", type=float, multiple=True, help="Ω_0 in units of Γ, repeat to sweep")
@click.option("--temperature", type=float, multiple=True, help="Temperature in K, repeat to sweep")
@click.option("--dephasing", type=float, multiple=True, help="Γ̃ in units of Γ, repeat to sweep")
@click.option("--t-end-tau", type=float, required=False, help="Run length in units of τ_FSR")
@click.pass_obj
@simulation_error
def triangle(  # pylint: disable=too-many-arguments
    obj: ClickAPPObject,
    g0: Sequence[float],
    rabi: Sequence[float],
    temperature: Sequence[float],
    dephasing: Sequence[float],
    t_end_tau: Optional[float],
) -> None:
    """
    Exact three-mode tripartite entanglement runs.

    :param obj: ClickAPPObject
    :param g0: coupling sweep
    :param rabi: drive amplitude sweep
    :param temperature: temperature sweep
    :param dephasing: dephasing sweep
    :param t_end_tau: run length
    """
    report(
        obj.run(
            ScenarioKind.TRIANGLE,
            sweep_coupling=_floats(g0),
            sweep_rabi=_floats(rabi),
            sweep_temperature=_floats(temperature),
            sweep_dephasing=_floats(dephasing),
            exact_t_end_tau=t_end_tau,
        )
    )


@click.command()
@g0_option
@click.option("--parties", type=int, multiple=True, help="Party counts N, repeat for several")
@click.option("--modes", type=int, required=False, help="Number of driven modes")
@click.option("--rwa", is_flag=True, default=False, help="Use the static rotating-wave model")
@click.pass_obj
@simulation_error
def multimode(
    obj: ClickAPPObject,
    g0: Sequence[float],
    parties: Sequence[int],
    modes: Optional[int],
    rwa: bool,
) -> None:
    """
    Genuine N-partite entanglement of the Gaussian model.

    :param obj: ClickAPPObject
    :param g0: coupling sweep
    :param parties: party counts
    :param modes: number of driven modes
    :param rwa: static rotating-wave model
    """
    report(
        obj.run(
            ScenarioKind.MULTIMODE,
            multimode_coupling=_floats(g0),
            multimode_parties=tuple(parties) or None,
            multimode_modes=modes,
            rwa=rwa or None,
        )
    )


@click.command(name="depth-scan")
@g0_option
@click.option("--temperature", type=float, multiple=True, help="Temperature in K, repeat to sweep")
@click.option("--max-modes", type=int, required=False, help="Largest mode label k")
@click.option(
    "--full-spectrum",
    is_flag=True,
    default=False,
    help="Simulate every mode up to ω_k instead of the driven pair",
)
@click.pass_obj
@simulation_error
def depth_scan(
    obj: ClickAPPObject,
    g0: Sequence[float],
    temperature: Sequence[float],
    max_modes: Optional[int],
    full_spectrum: bool,
) -> None:
    """
    Bipartite entanglement E^{1|k} under two-tone drives.

    :param obj: ClickAPPObject
    :param g0: coupling sweep
    :param temperature: temperature sweep
    :param max_modes: largest k
    :param full_spectrum: simulate all modes
    """
    report(
        obj.run(
            ScenarioKind.DEPTH_SCAN,
            depth_coupling=_floats(g0),
            depth_temperatures=_floats(temperature),
            depth_modes=max_modes,
            depth_full_spectrum=full_spectrum or None,
        )
    )


@click.command()
@g0_option
@click.option("--rabi", type=float, required=False, help="Ω_0 in units of Γ")
@click.option("--t-end-tau", type=float, required=False, help="Run length in units of τ_FSR")
@click.pass_obj
@simulation_error
def compare(
    obj: ClickAPPObject,
    g0: Sequence[float],
    rabi: Optional[float],
    t_end_tau: Optional[float],
) -> None:
    """
    E^{1|2}(t) of the exact and the Gaussian model side by side.

    :param obj: ClickAPPObject
    :param g0: coupling sweep
    :param rabi: drive amplitude
    :param t_end_tau: run length
    """
    report(
        obj.run(
            ScenarioKind.COMPARE,
            compare_coupling=_floats(g0),
            compare_rabi=rabi,
            compare_t_end_tau=t_end_tau,
        )
    )


@click.command(name="tls-spectrum")
@click.option(
    "--method",
    type=click.Choice([m.value for m in SpectrumMethod]),
    required=False,
    default=None,
    help="Resolvent formula or regression integral",
)
@click.option("--points", type=int, required=False, help="Grid points")
@click.option("--range", "range_", type=float, required=False, help="Grid half width in units of ω_1")
@click.pass_obj
@simulation_error
def tls_spectrum(
    obj: ClickAPPObject,
    method: Optional[str],
    points: Optional[int],
    range_: Optional[float],
) -> None:
    """
    TLS fluctuation spectrum and the induced bath of every mode.

    :param obj: ClickAPPObject
    :param method: spectrum method
    :param points: number of grid points
    :param range_: grid half width
    """
    report(
        obj.run(
            ScenarioKind.TLS_SPECTRUM,
            spectrum_method=method,
            spectrum_points=points,
            spectrum_range=range_,
        )
    )


@click.command()
@click.option("--active", type=int, multiple=True, help="Driven mode label (from 1), repeat")
@click.option("--total", type=int, required=False, help="Modes spanned by the graphs")
@click.pass_obj
@simulation_error
def adjacency(obj: ClickAPPObject, active: Sequence[int], total: Optional[int]) -> None:
    """
    Two-mode-squeezing and state-transfer adjacency matrices.

    :param obj: ClickAPPObject
    :param active: driven mode labels
    :param total: graph size
    """
    report(
        obj.run(
            ScenarioKind.ADJACENCY,
            adjacency_active=tuple(active) or None,
            adjacency_total=total,
        )
    )


@click.command(name="write-config")
@click.option("--defaults", is_flag=True, default=False, help="Write the default parameter set")
@click.option(
    "--scheme",
    type=click.Choice([s.value for s in ModulationScheme]),
    required=False,
    default=None,
    help="Modulation scheme to store",
)
@click.pass_obj
@simulation_error
def write_config(obj: ClickAPPObject, defaults: bool, scheme: Optional[str]) -> None:
    """
    Store a complete parameter file.

    :param obj: ClickAPPObject
    :param defaults: ignore the current file
    :param scheme: modulation scheme override
    """
    if defaults:
        params, settings = SystemParams.reference_defaults(), RunSettings()
    else:
        params, settings = obj.load()
    if scheme is not None:
        params = params.replace(modulation_scheme=scheme)
    obj.storage.store(params, settings)
    click.echo(f"Written {obj.storage.CONF_PATH}")


cli.add_command(triangle)
cli.add_command(multimode)
cli.add_command(depth_scan)
cli.add_command(compare)
cli.add_command(tls_spectrum)
cli.add_command(adjacency)
cli.add_command(write_config)
