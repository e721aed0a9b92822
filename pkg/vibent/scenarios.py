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
"""Scenario runner: parameter sweeps and CSV outputs of the numerical experiments."""
import concurrent.futures
import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from vibent import constants
from vibent.errors import ParameterError
from vibent.fock import (
    HilbertLayout,
    LindbladGenerator,
    evolve_iter,
    expect,
    ground_state,
    mode_state,
    write_density_dump,
)
from vibent.gaussian import (
    CovarianceMatrix,
    CovarianceTrajectory,
    GaussianModel,
    drive_period,
    integrate_lyapunov,
    propagate_periodic,
)
from vibent.measures import (
    VACUUM_NORMALIZED_QFI,
    PartitionSpec,
    check_qfi_bound,
    collective_position,
    genuine_multipartite,
    log_negativity_gaussian,
    negativity_density,
    non_gaussianity,
    normalized_qfi,
)
from vibent.modulation import (
    build_adjacency,
    coupling_matrix,
    default_total_modes,
    interaction_strengths,
    rwa_hamiltonian,
    select_modulation_freqs,
)
from vibent.params import (
    ModeSpectrum,
    SystemParams,
    anharmonic_spectrum,
    hz,
    mode_spectrum,
)
from vibent.tls import effective_bath, fluctuation_spectrum, regression_spectrum
from vibent.utils import (
    header_lines,
    write_csv,
    write_matrix_csv,
    write_trajectory_csv,
    write_trajectory_npz,
)


_logger = logging.getLogger(__name__)

Point = Dict[str, float]
Echo = Callable[[str], None]


class ScenarioKind(str, Enum):
    """Numerical experiment reproduced by a run."""

    TRIANGLE = "triangle"
    MULTIMODE = "multimode"
    DEPTH_SCAN = "depth-scan"
    COMPARE = "compare"
    TLS_SPECTRUM = "tls-spectrum"
    ADJACENCY = "adjacency"


class SpectrumMethod(str, Enum):
    """How the TLS fluctuation spectrum is evaluated."""

    RESOLVENT = "resolvent"
    REGRESSION = "regression"


# sweep values of rates are in units of Γ, temperatures in kelvin
SWEEP_LABELS = {
    "coupling": "g0",
    "rabi_amplitude": "rabi",
    "detuning": "delta",
    "qubit_dephasing": "dephasing",
    "temperature": "T",
}


@dataclass(frozen=True)
class RunSettings:  # pylint: disable=too-many-instance-attributes
    """Run controls that are not physical parameters."""

    t_end_tau: float = constants.DEFAULT_T_END_TAU
    exact_t_end_tau: float = constants.DEFAULT_EXACT_T_END_TAU
    n_snapshots: int = constants.DEFAULT_SNAPSHOTS
    solver_tol: float = constants.DEFAULT_SOLVER_TOL
    full_dims: bool = False
    dims: Optional[Tuple[int, ...]] = None
    threads: int = 1
    seed: int = constants.DEFAULT_SEED
    anharmonicity: float = 0.0
    rwa: bool = False
    detuning_ratio: Optional[float] = constants.DEFAULT_DETUNING_RATIO
    validate_states: bool = True
    save_trajectories: bool = False
    sweep_coupling: Tuple[float, ...] = constants.DEFAULT_SWEEP_COUPLING
    sweep_rabi: Tuple[float, ...] = (constants.DEFAULT_RABI_RATIO,)
    sweep_temperature: Tuple[float, ...] = ()
    sweep_dephasing: Tuple[float, ...] = ()
    multimode_modes: int = constants.DEFAULT_MULTIMODE_MODES
    multimode_total: Optional[int] = None
    multimode_parties: Tuple[int, ...] = constants.DEFAULT_MULTIMODE_PARTIES
    multimode_coupling: Tuple[float, ...] = constants.DEFAULT_MULTIMODE_COUPLING
    depth_modes: int = constants.DEFAULT_MAX_MODES
    depth_coupling: Tuple[float, ...] = constants.DEFAULT_DEPTH_COUPLING
    depth_temperatures: Tuple[float, ...] = constants.DEFAULT_DEPTH_TEMPERATURES_K
    depth_full_spectrum: bool = False
    compare_coupling: Tuple[float, ...] = constants.DEFAULT_COMPARE_COUPLING
    compare_rabi: float = constants.DEFAULT_COMPARE_RABI_RATIO
    compare_dims: Tuple[int, ...] = constants.COMPARE_DIMS
    compare_t_end_tau: float = constants.DEFAULT_COMPARE_T_END_TAU
    spectrum_points: int = constants.DEFAULT_SPECTRUM_POINTS
    spectrum_range: float = constants.DEFAULT_SPECTRUM_RANGE
    spectrum_method: SpectrumMethod = SpectrumMethod.RESOLVENT
    adjacency_active: Tuple[int, ...] = ()
    adjacency_total: Optional[int] = None

    def __post_init__(self) -> None:
        """Validate counts and normalise enum fields."""
        object.__setattr__(self, "spectrum_method", SpectrumMethod(self.spectrum_method))
        for name in ("n_snapshots", "threads", "multimode_modes", "depth_modes", "spectrum_points"):
            if int(getattr(self, name)) < 1:
                raise ParameterError(f"{name} must be >= 1")
        if self.depth_modes < 2:
            raise ParameterError("depth scan needs at least two modes")
        if any(n > self.multimode_modes or n < 3 for n in self.multimode_parties):
            raise ParameterError("multimode parties must lie in [3, multimode_modes]")

    def exact_dims(self) -> Tuple[int, ...]:
        """Truncation of the exact model."""
        if self.dims is not None:
            return tuple(self.dims)
        return constants.FULL_DIMS if self.full_dims else constants.DESK_DIMS

    def replace(self, **changes: Any) -> "RunSettings":
        """Return a copy with fields replaced."""
        return dataclasses.replace(self, **changes)

    def header(self) -> Dict[str, Any]:
        """JSON serialisable description for output headers."""
        data = dataclasses.asdict(self)
        data["spectrum_method"] = self.spectrum_method.value
        return data


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter; rates in units of Γ, temperature in kelvin."""

    name: str
    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        """Check the axis refers to a sweepable parameter."""
        if self.name not in SWEEP_LABELS:
            raise ParameterError(
                f"cannot sweep '{self.name}', choose from {sorted(SWEEP_LABELS)}"
            )
        if not self.values:
            raise ParameterError(f"sweep axis '{self.name}' has no values")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def apply(
        self, params: SystemParams, value: float, detuning_ratio: Optional[float] = None
    ) -> SystemParams:
        """
        Set the swept parameter.

        :param params: SystemParams
        :param value: value in axis units
        :param detuning_ratio: keep Δ = ratio·Ω_0 when sweeping the drive

        :return: SystemParams
        """
        gamma = params.qubit_decay
        if self.name == "coupling":
            return params.with_coupling(value * gamma)
        if self.name == "rabi_amplitude":
            rabi = value * gamma
            if detuning_ratio:
                return params.replace(rabi_amplitude=rabi, detuning=detuning_ratio * rabi)
            return params.replace(rabi_amplitude=rabi)
        if self.name == "temperature":
            return params.replace(temperature=value)
        return params.replace(**{self.name: value * gamma})


def point_label(point: Point) -> str:
    """Label such as ``g0=0.5,rabi=3``."""
    if not point:
        return "base"
    return ",".join(f"{SWEEP_LABELS[name]}={value:g}" for name, value in point.items())


@dataclass(frozen=True)
class Scenario:
    """A numerical experiment: kind, base parameters, sweep and output directory."""

    kind: ScenarioKind
    params: SystemParams
    sweep: Tuple[SweepAxis, ...] = ()
    outputs: Path = Path(".")
    settings: RunSettings = field(default_factory=RunSettings)

    @classmethod
    def build(
        cls,
        kind: ScenarioKind,
        params: SystemParams,
        settings: RunSettings,
        outputs: Path,
    ) -> "Scenario":
        """
        Scenario with the default sweep of its kind.

        :param kind: ScenarioKind
        :param params: base SystemParams
        :param settings: RunSettings
        :param outputs: output directory

        :return: Scenario
        """
        kind = ScenarioKind(kind)
        axes: List[Tuple[str, Sequence[float]]] = []
        if kind is ScenarioKind.TRIANGLE:
            axes = [
                ("coupling", settings.sweep_coupling),
                ("rabi_amplitude", settings.sweep_rabi),
                ("temperature", settings.sweep_temperature),
                ("qubit_dephasing", settings.sweep_dephasing),
            ]
        elif kind is ScenarioKind.MULTIMODE:
            axes = [("coupling", settings.multimode_coupling)]
        elif kind is ScenarioKind.DEPTH_SCAN:
            axes = [
                ("temperature", settings.depth_temperatures),
                ("coupling", settings.depth_coupling),
            ]
        elif kind is ScenarioKind.COMPARE:
            axes = [("coupling", settings.compare_coupling)]
        sweep = tuple(SweepAxis(name, tuple(values)) for name, values in axes if values)
        return cls(kind, params, sweep, Path(outputs), settings)

    def points(self) -> List[Point]:
        """Cartesian product of the sweep axes, a single empty point without sweep."""
        if not self.sweep:
            return [{}]
        names = [axis.name for axis in self.sweep]
        return [dict(zip(names, values)) for values in product(*(a.values for a in self.sweep))]

    def params_at(self, point: Point) -> SystemParams:
        """Parameters of one sweep point."""
        params = self.params
        axes = {axis.name: axis for axis in self.sweep}
        for name, value in point.items():
            params = axes[name].apply(params, value, self.settings.detuning_ratio)
        return params

    def header(self) -> List[str]:
        """Output header block."""
        return header_lines(
            scenario=self.kind.value,
            params=self.params.header(),
            run=self.settings.header(),
            sweep=[{"name": a.name, "values": list(a.values)} for a in self.sweep],
        )


@dataclass
class SweepResult:
    """Per-point results and isolated failures, keyed by point index."""

    points: List[Point]
    results: Dict[int, Any] = field(default_factory=dict)
    failures: Dict[int, BaseException] = field(default_factory=dict)

    def ordered(self) -> List[Tuple[Point, Any]]:
        """Successful points in sweep order."""
        return [(self.points[i], self.results[i]) for i in sorted(self.results)]


@dataclass
class RunOutcome:
    """Files written by a run and the labels of failed sweep points."""

    paths: List[Path] = field(default_factory=list)
    failures: Dict[str, str] = field(default_factory=dict)

    @property
    def partial(self) -> bool:
        """Some sweep points failed."""
        return bool(self.failures)


def run_sweep(
    points: List[Point], fn: Callable[[Point], Any], threads: int = 1, echo: Echo = _logger.info
) -> SweepResult:
    """
    Evaluate ``fn`` on every point, isolating failures.

    :param points: sweep points
    :param fn: work function of one point
    :param threads: worker count
    :param echo: progress reporter

    :return: SweepResult
    """
    sweep = SweepResult(points)
    with ThreadPoolExecutor(max_workers=max(1, min(threads, len(points)))) as executor:
        futures = {executor.submit(fn, point): idx for idx, point in enumerate(points)}
        for future in concurrent.futures.as_completed(futures):
            idx = futures[future]
            label = point_label(points[idx])
            try:
                sweep.results[idx] = future.result()
                echo(f"[Point {label}] done")
            except Exception as exc:  # pylint: disable=broad-except
                echo(f"ERROR: [Point {label}]: {repr(exc)}")
                _logger.debug("point %s failed", label, exc_info=exc)
                sweep.failures[idx] = exc
    return sweep


@dataclass(frozen=True)
class TrianglePoint:
    """Exact-model observables of one triangle run."""

    times_tau: np.ndarray
    tpe: np.ndarray
    normalized_qfi: np.ndarray
    sigma_z: np.ndarray
    final_non_gaussianity: float


@dataclass(frozen=True)
class ComparePoint:
    """E^{1|2}(t) from both models."""

    times_tau: np.ndarray
    exact: np.ndarray
    gaussian: np.ndarray

    @property
    def rms_gap(self) -> float:
        """Root-mean-square difference of the curves."""
        return float(np.sqrt(np.mean((self.exact - self.gaussian) ** 2)))

    @property
    def exact_peak(self) -> float:
        """Peak of the exact curve."""
        return float(self.exact.max())


def _resized(
    params: SystemParams,
    spectrum: ModeSpectrum,
    tones: Sequence[float],
) -> SystemParams:
    """Parameters over a new spectrum with uniform coupling g_1."""
    return params.replace(
        n_modes=spectrum.n_modes,
        coupling=(params.coupling[0],),
        mode_freqs=spectrum.omegas,
        modulation_freqs=tuple(tones),
    )


def gaussian_trajectory(
    model: GaussianModel, params: SystemParams, times: np.ndarray
) -> CovarianceTrajectory:
    """
    Vacuum-started covariance trajectory on an evenly spaced time grid.

    Static models and drives whose period divides the sample spacing use the
    stroboscopic map; anything else integrates the Lyapunov equation.

    :param model: GaussianModel
    :param params: SystemParams the model was built from
    :param times: evenly spaced sample times starting at 0

    :return: CovarianceTrajectory
    """
    v0 = CovarianceMatrix.vacuum(model.n_modes)
    spacing = float(times[1] - times[0])
    n_samples = len(times) - 1
    if model.is_static:
        return propagate_periodic(v0, model, spacing, n_samples)
    period = drive_period(params.modulation_freqs)
    if period is not None:
        ratio = spacing / period
        stride = int(round(ratio))
        if stride >= 1 and abs(ratio - stride) < 1e-9 * max(1.0, ratio):
            return propagate_periodic(
                v0, model, spacing / stride, n_samples * stride, stride=stride
            )
    return integrate_lyapunov(v0, model, float(times[-1]), sample_times=times[1:])


class ScenarioRunner:
    """Runs scenarios and writes their CSV outputs."""

    def __init__(self, threads: int = 1, echo: Echo = _logger.info) -> None:
        """
        Init the runner.

        :param threads: worker threads across sweep points
        :param echo: progress reporter
        """
        self.threads = threads
        self.echo = echo

    def run(self, scenario: Scenario) -> RunOutcome:
        """Dispatch on the scenario kind."""
        handlers = {
            ScenarioKind.TRIANGLE: self.run_triangle,
            ScenarioKind.MULTIMODE: self.run_multimode,
            ScenarioKind.DEPTH_SCAN: self.run_depth_scan,
            ScenarioKind.COMPARE: self.run_compare,
            ScenarioKind.TLS_SPECTRUM: self.run_tls_spectrum,
            ScenarioKind.ADJACENCY: self.run_adjacency,
        }
        scenario.outputs.mkdir(parents=True, exist_ok=True)
        scenario.params.check_regime()
        return handlers[scenario.kind](scenario)

    def _sweep(self, scenario: Scenario, fn: Callable[[Point], Any]) -> SweepResult:
        return run_sweep(scenario.points(), fn, self.threads, self.echo)

    @staticmethod
    def _failures(sweep: SweepResult) -> Dict[str, str]:
        return {point_label(sweep.points[i]): repr(exc) for i, exc in sweep.failures.items()}

    def _spectrum(self, scenario: Scenario, n_modes: int) -> ModeSpectrum:
        settings = scenario.settings
        if settings.anharmonicity > 0:
            return anharmonic_spectrum(
                n_modes, scenario.params.fsr, settings.anharmonicity, settings.seed
            )
        return ModeSpectrum(tuple(k * scenario.params.fsr for k in range(1, n_modes + 1)))

    def _anharmonic_triangle(self, scenario: Scenario, params: SystemParams) -> SystemParams:
        """Swap in the anharmonic spectrum and drive all of its modes on resonance."""
        spectrum = self._spectrum(scenario, params.n_modes)
        tones = select_modulation_freqs(
            spectrum, range(params.n_modes), params.modulation_scheme
        )
        return params.replace(mode_freqs=spectrum.omegas, modulation_freqs=tones)

    def _model(self, params: SystemParams, settings: RunSettings) -> GaussianModel:
        spectrum = mode_spectrum(params)
        rwa = None
        if settings.rwa:
            adjacency = build_adjacency(
                spectrum, params.modulation_freqs, params.modulation_scheme, params.fsr
            )
            rwa = rwa_hamiltonian(adjacency, coupling_matrix(params, spectrum))
        return GaussianModel.from_params(params, spectrum, rwa=rwa)

    def _time_grid(self, params: SystemParams, t_end_tau: float, n_snapshots: int) -> np.ndarray:
        return np.linspace(0.0, t_end_tau * params.tau_fsr, n_snapshots + 1)

    def run_triangle(self, scenario: Scenario) -> RunOutcome:
        """
        Exact three-mode runs: E^{1|2|3}(t), QFI and non-Gaussianity per point.

        :param scenario: Scenario of kind TRIANGLE

        :return: RunOutcome
        """
        settings = scenario.settings
        layout = HilbertLayout(settings.exact_dims())

        def work(point: Point) -> TrianglePoint:
            params = scenario.params_at(point)
            if settings.anharmonicity > 0:
                params = self._anharmonic_triangle(scenario, params)
            dump = None
            if settings.save_trajectories:
                dump = scenario.outputs / f"triangle_rho_{point_label(point)}.bin"
            return self._triangle_point(params, layout, settings, dump)

        sweep = self._sweep(scenario, work)
        header = scenario.header()
        outcome = RunOutcome(failures=self._failures(sweep))
        ordered = sweep.ordered()
        if ordered:
            times = ordered[0][1].times_tau
            outcome.paths.append(
                write_csv(
                    scenario.outputs / "triangle_tpe.csv",
                    header,
                    ["time_tau"] + [f"E[{point_label(p)}]" for p, _ in ordered],
                    (
                        [t] + [r.tpe[i] for _, r in ordered]
                        for i, t in enumerate(times)
                    ),
                )
            )
        names = [axis.name for axis in scenario.sweep]
        outcome.paths.append(
            write_csv(
                scenario.outputs / "triangle_summary.csv",
                header,
                names
                + [
                    "final_tpe",
                    "max_tpe",
                    "max_normalized_qfi",
                    "vacuum_normalized_qfi",
                    "final_non_gaussianity",
                    "final_sigma_z",
                ],
                (
                    [p[n] for n in names]
                    + [
                        r.tpe[-1],
                        r.tpe.max(),
                        r.normalized_qfi.max(),
                        VACUUM_NORMALIZED_QFI,
                        r.final_non_gaussianity,
                        r.sigma_z[-1],
                    ]
                    for p, r in ordered
                ),
            )
        )
        return outcome

    @staticmethod
    def _triangle_point(
        params: SystemParams,
        layout: HilbertLayout,
        settings: RunSettings,
        dump: Optional[Path] = None,
    ) -> TrianglePoint:
        generator = LindbladGenerator(params, layout)
        partition = PartitionSpec.singletons(range(layout.n_modes))
        position = None
        times, tpe, qfis, sigma_z = [], [], [], []
        final = None
        modes = None
        for t, rho in evolve_iter(
            ground_state(layout),
            params,
            settings.exact_t_end_tau * params.tau_fsr,
            tol=settings.solver_tol,
            n_snapshots=settings.n_snapshots,
            generator=generator,
        ):
            if settings.validate_states:
                rho.validate()
            modes = mode_state(rho)
            final = rho
            if position is None:
                position = collective_position(modes.layout).full()
            times.append(t / params.tau_fsr)
            tpe.append(genuine_multipartite(modes, partition).value)
            qfis.append(normalized_qfi(modes, position))
            sigma_z.append(float(np.real(expect(generator.operators.sigma_z, rho))))
        check_qfi_bound(max(qfis), layout.n_modes)
        if dump is not None and final is not None:
            write_density_dump(dump, final)
        return TrianglePoint(
            times_tau=np.asarray(times),
            tpe=np.asarray(tpe),
            normalized_qfi=np.asarray(qfis),
            sigma_z=np.asarray(sigma_z),
            final_non_gaussianity=non_gaussianity(modes),
        )

    def run_multimode(self, scenario: Scenario) -> RunOutcome:
        """
        Gaussian genuine N-partite entanglement at t_end for both mode sets.

        The first set holds the N modes closest to the fundamental, the
        second the N highest active modes.

        :param scenario: Scenario of kind MULTIMODE

        :return: RunOutcome
        """
        settings = scenario.settings
        active = list(range(settings.multimode_modes))
        total = settings.multimode_total or default_total_modes(active)
        spectrum = self._spectrum(scenario, total)
        tones = select_modulation_freqs(
            spectrum, active, scenario.params.modulation_scheme
        )

        def work(point: Point) -> List[Tuple[int, str, str, float]]:
            params = _resized(scenario.params_at(point), spectrum, tones)
            model = self._model(params, settings)
            times = self._time_grid(params, settings.t_end_tau, settings.n_snapshots)
            trajectory = gaussian_trajectory(model, params, times)
            if settings.save_trajectories:
                write_trajectory_npz(
                    scenario.outputs / f"multimode_{point_label(point)}.npz", trajectory
                )
            final = trajectory.final
            rows = []
            n_active = len(active)
            for n in settings.multimode_parties:
                for name, modes in (
                    ("first", range(n)),
                    ("second", range(n_active - n, n_active)),
                ):
                    partition = PartitionSpec.singletons(modes)
                    value = genuine_multipartite(final, partition).value
                    rows.append((n, name, partition.label(), value))
            return rows

        sweep = self._sweep(scenario, work)
        names = [axis.name for axis in scenario.sweep]
        path = write_csv(
            scenario.outputs / "multimode.csv",
            scenario.header(),
            names + ["parties", "set", "modes", "value"],
            (
                [p[n] for n in names] + list(row)
                for p, rows in sweep.ordered()
                for row in rows
            ),
        )
        return RunOutcome([path], self._failures(sweep))

    def run_depth_scan(self, scenario: Scenario) -> RunOutcome:
        """
        E^{1|k} under the two-tone drive {ω_1, ω_k} for k = 2..K.

        Unless the full spectrum is requested each k simulates the pair
        (ω_1, ω_k) only.

        :param scenario: Scenario of kind DEPTH_SCAN

        :return: RunOutcome
        """
        settings = scenario.settings
        full = self._spectrum(scenario, settings.depth_modes)
        omegas = full.as_array()

        def work(point: Point) -> List[Tuple[int, float]]:
            base = scenario.params_at(point)
            values = []
            for k in range(1, settings.depth_modes):
                tones = (omegas[0], omegas[k])
                if settings.depth_full_spectrum:
                    spectrum, index = full, k
                else:
                    spectrum, index = ModeSpectrum(tones), 1
                params = _resized(base, spectrum, tones)
                model = self._model(params, settings)
                times = self._time_grid(params, settings.t_end_tau, 1)
                final = gaussian_trajectory(model, params, times).final
                values.append((k + 1, log_negativity_gaussian(final, [0], [index])))
            return values

        sweep = self._sweep(scenario, work)
        header = scenario.header()
        ordered = sweep.ordered()
        scan = write_csv(
            scenario.outputs / "depth_scan.csv",
            header,
            ["temperature", "g0", "k", "value"],
            (
                [p.get("temperature"), p.get("coupling"), k, value]
                for p, values in ordered
                for k, value in values
            ),
        )
        boundary: Dict[Tuple[float, int], Optional[float]] = {}
        for p, values in ordered:
            for k, value in values:
                key = (p.get("temperature", scenario.params.temperature), k)
                current = boundary.get(key)
                if value > constants.ENTANGLEMENT_TOL:
                    g0 = p.get("coupling", scenario.params.coupling[0] / scenario.params.qubit_decay)
                    boundary[key] = g0 if current is None else min(current, g0)
                else:
                    boundary.setdefault(key, None)
        edge = write_csv(
            scenario.outputs / "depth_boundary.csv",
            header,
            ["temperature", "k", "min_entangling_g0"],
            ([t, k, g0] for (t, k), g0 in sorted(boundary.items())),
        )
        return RunOutcome([scan, edge], self._failures(sweep))

    def run_compare(self, scenario: Scenario) -> RunOutcome:
        """
        E^{1|2}(t) from the exact and the Gaussian model on the same grid.

        :param scenario: Scenario of kind COMPARE

        :return: RunOutcome
        """
        settings = scenario.settings
        layout = HilbertLayout(settings.compare_dims)
        rabi_axis = SweepAxis("rabi_amplitude", (settings.compare_rabi,))

        def work(point: Point) -> ComparePoint:
            params = rabi_axis.apply(
                scenario.params_at(point), settings.compare_rabi, settings.detuning_ratio
            )
            t_end = settings.compare_t_end_tau * params.tau_fsr
            exact = []
            times = []
            for t, rho in evolve_iter(
                ground_state(layout),
                params,
                t_end,
                tol=settings.solver_tol,
                n_snapshots=settings.n_snapshots,
            ):
                times.append(t)
                exact.append(negativity_density(mode_state(rho), [0], [1]))
            grid = np.asarray(times)
            spectrum = mode_spectrum(params).truncated(layout.n_modes)
            params = _resized(params, spectrum, params.modulation_freqs)
            trajectory = gaussian_trajectory(self._model(params, settings), params, grid)
            if settings.save_trajectories:
                write_trajectory_csv(
                    scenario.outputs / f"compare_{point_label(point)}.csv",
                    scenario.header(),
                    trajectory,
                )
            gaussian = [log_negativity_gaussian(v, [0], [1]) for v in trajectory]
            return ComparePoint(grid / params.tau_fsr, np.asarray(exact), np.asarray(gaussian))

        sweep = self._sweep(scenario, work)
        header = scenario.header()
        ordered = sweep.ordered()
        outcome = RunOutcome(failures=self._failures(sweep))
        if ordered:
            times = ordered[0][1].times_tau
            columns = ["time_tau"]
            for p, _ in ordered:
                label = point_label(p)
                columns.extend((f"E12_exact[{label}]", f"E12_gaussian[{label}]"))
            outcome.paths.append(
                write_csv(
                    scenario.outputs / "compare.csv",
                    header,
                    columns,
                    (
                        [t] + [x for _, r in ordered for x in (r.exact[i], r.gaussian[i])]
                        for i, t in enumerate(times)
                    ),
                )
            )
        names = [axis.name for axis in scenario.sweep]
        outcome.paths.append(
            write_csv(
                scenario.outputs / "compare_summary.csv",
                header,
                names + ["rms_gap", "exact_peak", "relative_gap"],
                (
                    [p[n] for n in names]
                    + [
                        r.rms_gap,
                        r.exact_peak,
                        r.rms_gap / r.exact_peak if r.exact_peak > 0 else None,
                    ]
                    for p, r in ordered
                ),
            )
        )
        return outcome

    def run_tls_spectrum(self, scenario: Scenario) -> RunOutcome:
        """
        Fluctuation spectrum over ±range·ω_1 and the induced bath of every mode.

        :param scenario: Scenario of kind TLS_SPECTRUM

        :return: RunOutcome
        """
        settings = scenario.settings
        params = scenario.params
        spectrum = mode_spectrum(params)
        omega_1 = spectrum.omegas[0]
        grid = np.linspace(
            -settings.spectrum_range * omega_1,
            settings.spectrum_range * omega_1,
            settings.spectrum_points,
        )
        if settings.spectrum_method is SpectrumMethod.REGRESSION:
            values = regression_spectrum(grid, params)
        else:
            values = fluctuation_spectrum(grid, params)
        header = scenario.header()
        spectrum_path = write_csv(
            scenario.outputs / "tls_spectrum.csv",
            header,
            ["omega_hz", "spectrum_value"],
            zip((hz(w) for w in grid), np.atleast_1d(values)),
        )
        bath = effective_bath(params, spectrum)
        bath_path = write_csv(
            scenario.outputs / "tls_bath.csv",
            header,
            ["mode", "omega_hz", "induced_damping_hz", "induced_occupancy"],
            (
                [k + 1, hz(w), hz(g), n]
                for k, (w, g, n) in enumerate(
                    zip(spectrum.omegas, bath.induced_damping, bath.induced_occupancy)
                )
            ),
        )
        return RunOutcome([spectrum_path, bath_path])

    def run_adjacency(self, scenario: Scenario) -> RunOutcome:
        """
        B^tms, B^qst and F = G∘B^tms (units of Γ) over the graph modes.

        :param scenario: Scenario of kind ADJACENCY

        :return: RunOutcome
        """
        settings = scenario.settings
        params = scenario.params
        active_labels = settings.adjacency_active or tuple(range(1, params.n_modes + 1))
        active = [k - 1 for k in active_labels]
        if min(active) < 0:
            raise ParameterError("active modes are labelled from 1")
        total = settings.adjacency_total or default_total_modes(active)
        if total <= max(active):
            raise ParameterError(f"{total} graph modes cannot hold mode {max(active) + 1}")
        spectrum = self._spectrum(scenario, total)
        tones = select_modulation_freqs(spectrum, active, params.modulation_scheme)
        params = _resized(params, spectrum, tones)
        adjacency = build_adjacency(spectrum, tones, params.modulation_scheme, params.fsr)
        strengths = interaction_strengths(adjacency, coupling_matrix(params, spectrum))
        header = scenario.header()
        return RunOutcome(
            [
                write_matrix_csv(scenario.outputs / "adjacency_tms.csv", header, adjacency.tms),
                write_matrix_csv(scenario.outputs / "adjacency_qst.csv", header, adjacency.qst),
                write_matrix_csv(
                    scenario.outputs / "adjacency_f.csv",
                    header,
                    strengths / params.qubit_decay,
                ),
            ]
        )
