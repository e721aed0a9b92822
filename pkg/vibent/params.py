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
"""Physical parameters, unit conventions and derived quantities."""
import dataclasses
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from vibent import constants
from vibent.errors import ParameterError, RegimeWarning


ArrayLike = Union[float, np.ndarray]


class ModulationScheme(str, Enum):
    """Drive modulation strategy."""

    MODE_FREQUENCIES = "mode_frequencies"
    HALF_SUM_FREQUENCIES = "half_sum_frequencies"


class DephasingConvention(str, Enum):
    """Sign of the pure dephasing rate on the resolvent diagonal."""

    PRINTED = "printed"
    DAMPING = "damping"


@dataclass(frozen=True)
class ModeSpectrum:
    """Angular frequencies of the simulated mechanical modes."""

    omegas: Tuple[float, ...]

    def __post_init__(self) -> None:
        """Check the spectrum is positive and strictly increasing."""
        omegas = np.asarray(self.omegas, dtype=float)
        if omegas.ndim != 1 or omegas.size == 0:
            raise ParameterError("Mode spectrum needs at least one mode")
        if np.any(omegas <= 0):
            raise ParameterError("Mode frequencies must be positive")
        if np.any(np.diff(omegas) <= 0):
            raise ParameterError("Mode frequencies must be strictly increasing")
        object.__setattr__(self, "omegas", tuple(float(w) for w in omegas))

    @property
    def n_modes(self) -> int:
        """Number of modes."""
        return len(self.omegas)

    def as_array(self) -> np.ndarray:
        """Return the frequencies as a numpy array."""
        return np.asarray(self.omegas, dtype=float)

    def truncated(self, n_modes: int) -> "ModeSpectrum":
        """Return the lowest ``n_modes`` frequencies."""
        return ModeSpectrum(self.omegas[:n_modes])


@dataclass(frozen=True)
class SystemParams:  # pylint: disable=too-many-instance-attributes
    """
    Full physical parameter set.

    All frequencies and rates are angular (rad/s) with hbar = 1; temperature is
    in kelvin and enters only through :func:`thermal_occupation`.
    """

    n_modes: int
    fsr: float
    quality_factor: float
    qubit_freq: float
    qubit_decay: float
    temperature: float
    coupling: Tuple[float, ...]
    rabi_amplitude: float
    detuning: float
    modulation_freqs: Tuple[float, ...]
    modulation_scheme: ModulationScheme = ModulationScheme.MODE_FREQUENCIES
    qubit_dephasing: float = 0.0
    mode_freqs: Optional[Tuple[float, ...]] = None
    dephasing_convention: DephasingConvention = DephasingConvention.PRINTED
    far_detuned_factor: float = constants.DEFAULT_FAR_DETUNED_FACTOR

    def __post_init__(self) -> None:
        """Validate and normalise fields."""
        if int(self.n_modes) < 1:
            raise ParameterError(f"n_modes must be >= 1, got {self.n_modes}")
        coupling = tuple(float(g) for g in np.atleast_1d(self.coupling))
        if len(coupling) == 1 and self.n_modes > 1:
            coupling = coupling * int(self.n_modes)
        if len(coupling) != self.n_modes:
            raise ParameterError(
                f"coupling has {len(coupling)} entries for {self.n_modes} modes"
            )
        object.__setattr__(self, "n_modes", int(self.n_modes))
        object.__setattr__(self, "coupling", coupling)
        object.__setattr__(
            self,
            "modulation_freqs",
            tuple(float(w) for w in np.atleast_1d(self.modulation_freqs)),
        )
        object.__setattr__(
            self, "modulation_scheme", ModulationScheme(self.modulation_scheme)
        )
        object.__setattr__(
            self, "dephasing_convention", DephasingConvention(self.dephasing_convention)
        )
        if self.mode_freqs is not None:
            mode_freqs = tuple(float(w) for w in self.mode_freqs)
            if len(mode_freqs) != self.n_modes:
                raise ParameterError(
                    f"mode_freqs has {len(mode_freqs)} entries for {self.n_modes} modes"
                )
            object.__setattr__(self, "mode_freqs", mode_freqs)

        for name in (
            "fsr",
            "quality_factor",
            "qubit_freq",
            "qubit_decay",
            "detuning",
            "far_detuned_factor",
        ):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if self.rabi_amplitude < 0:
            raise ParameterError("rabi_amplitude must be non-negative")
        if self.qubit_dephasing < 0:
            raise ParameterError("qubit_dephasing must be non-negative")
        if self.temperature < 0:
            raise ParameterError("temperature must be non-negative")
        if any(g < 0 for g in self.coupling):
            raise ParameterError("coupling rates must be non-negative")
        if not self.modulation_freqs:
            raise ParameterError("at least one modulation frequency is required")
        if any(w < 0 for w in self.modulation_freqs):
            raise ParameterError("modulation frequencies must be non-negative")

    @classmethod
    def reference_defaults(
        cls,
        n_modes: int = 3,
        g0_ratio: float = constants.DEFAULT_G0_RATIO,
        rabi_ratio: float = constants.DEFAULT_RABI_RATIO,
        **overrides: Any,
    ) -> "SystemParams":
        """
        Build the parameter set of the triangle study.

        :param n_modes: number of simulated modes
        :param g0_ratio: uniform coupling in units of the qubit decay rate
        :param rabi_ratio: drive amplitude in units of the qubit decay rate
        :param overrides: field values replacing the defaults

        :return: SystemParams
        """
        fsr = constants.TWO_PI * constants.DEFAULT_FSR_HZ
        gamma = constants.TWO_PI * constants.DEFAULT_QUBIT_DECAY_HZ
        rabi = rabi_ratio * gamma
        values: Dict[str, Any] = dict(
            n_modes=n_modes,
            fsr=fsr,
            quality_factor=constants.DEFAULT_QUALITY_FACTOR,
            qubit_freq=constants.TWO_PI * constants.DEFAULT_QUBIT_FREQ_HZ,
            qubit_decay=gamma,
            temperature=constants.DEFAULT_TEMPERATURE_K,
            coupling=(g0_ratio * gamma,),
            rabi_amplitude=rabi,
            detuning=constants.DEFAULT_DETUNING_RATIO * rabi,
            modulation_freqs=tuple(fsr * k for k in range(1, n_modes + 1)),
        )
        values.update(overrides)
        return cls(**values)

    def replace(self, **changes: Any) -> "SystemParams":
        """Return a copy with fields replaced."""
        return dataclasses.replace(self, **changes)

    def with_coupling(self, g0: float) -> "SystemParams":
        """Return a copy with uniform coupling ``g0`` (rad/s)."""
        return self.replace(coupling=(float(g0),) * self.n_modes)

    @property
    def tau_fsr(self) -> float:
        """Longest mechanical period 2π/δ_FSR (s)."""
        return constants.TWO_PI / self.fsr

    @property
    def qubit_occupation(self) -> float:
        """Thermal occupation of the bare qubit transition."""
        return float(thermal_occupation(self.qubit_freq, self.temperature))

    @property
    def is_adiabatic(self) -> bool:
        """Qubit decay dominates every coupling rate."""
        return self.qubit_decay > max(self.coupling)

    @property
    def is_far_detuned(self) -> bool:
        """Detuning dominates decay and drive."""
        return self.detuning > self.far_detuned_factor * max(
            self.qubit_decay, self.rabi_amplitude
        )

    def check_regime(self) -> None:
        """Warn when the effective model assumptions are violated."""
        if not self.is_adiabatic:
            warnings.warn(
                f"Adiabatic elimination invalid: Γ={self.qubit_decay:.4g} <= max g={max(self.coupling):.4g}",
                RegimeWarning,
                stacklevel=2,
            )
        if not self.is_far_detuned:
            warnings.warn(
                f"Not far detuned: Δ={self.detuning:.4g} <= "
                f"{self.far_detuned_factor}·max(Γ, Ω_0)",
                RegimeWarning,
                stacklevel=2,
            )

    def header(self) -> Dict[str, Any]:
        """
        Make a JSON serialisable description for output headers.

        :return: dict
        """
        data = dataclasses.asdict(self)
        data["modulation_scheme"] = self.modulation_scheme.value
        data["dephasing_convention"] = self.dephasing_convention.value
        return data


def mode_spectrum(params: SystemParams) -> ModeSpectrum:
    """
    Build the mode spectrum ω_k = k·δ_FSR, or the explicit override.

    :param params: SystemParams

    :return: ModeSpectrum
    """
    if params.mode_freqs is not None:
        return ModeSpectrum(params.mode_freqs)
    return ModeSpectrum(tuple(k * params.fsr for k in range(1, params.n_modes + 1)))


def anharmonic_spectrum(
    n_modes: int,
    fsr: float,
    epsilon: float = constants.DEFAULT_ANHARMONICITY,
    seed: int = constants.DEFAULT_SEED,
) -> ModeSpectrum:
    """
    Build a reproducible non-commensurate spectrum ω_k = kδ(1 + ε r_k).

    :param n_modes: number of modes
    :param fsr: nominal spacing (rad/s)
    :param epsilon: relative anharmonicity
    :param seed: seed of the r_k draw

    :return: ModeSpectrum
    """
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.0, 1.0, size=n_modes)
    k = np.arange(1, n_modes + 1)
    return ModeSpectrum(tuple(k * fsr * (1.0 + epsilon * r)))


def thermal_occupation(omega: ArrayLike, temperature: float) -> ArrayLike:
    """
    Bose-Einstein occupation 1/(exp(ħω/k_B T) - 1).

    :param omega: angular frequency (rad/s), scalar or array
    :param temperature: kelvin

    :return: occupation, exactly 0 at T = 0
    """
    omega_arr = np.asarray(omega, dtype=float)
    if temperature <= 0:
        result = np.zeros_like(omega_arr)
    else:
        x = constants.HBAR * omega_arr / (constants.K_B * temperature)
        with np.errstate(over="ignore"):
            result = 1.0 / np.expm1(x)
    if np.ndim(omega) == 0:
        return float(result)
    return result


def intrinsic_damping(omega: ArrayLike, q: float) -> ArrayLike:
    """
    Mechanical damping γ = ω/Q.

    :param omega: angular frequency (rad/s)
    :param q: quality factor

    :return: damping rate (rad/s)
    """
    if not q > 0:
        raise ParameterError("quality factor must be positive")
    if np.ndim(omega) == 0:
        return float(omega) / q
    return np.asarray(omega, dtype=float) / q


def hz(value: float) -> float:
    """Convert an angular frequency to Hz."""
    return value / constants.TWO_PI


def rad_per_s(value: float) -> float:
    """Convert a frequency in Hz to rad/s."""
    return value * constants.TWO_PI
