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
"""Parameter file storage."""
import configparser
import dataclasses
import os
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from vibent import constants
from vibent.errors import BaseSimulationError, ConfigError
from vibent.params import SystemParams, hz, rad_per_s
from vibent.scenarios import RunSettings


FILE_HEADER = """\
# vibent parameter file
# keys ending in _hz are ordinary frequencies in Hz, stored internally as rad/s
# keys ending in _k are temperatures in kelvin
# lists are comma separated; sweep values of rates are in units of the qubit
# decay rate, sweep temperatures in kelvin
"""

SYSTEM = "system"
DRIVE = "drive"
NOISE = "noise"
RUN = "run"

_INT_LISTS = {"dims", "multimode_parties", "adjacency_active", "compare_dims"}
_OPTIONAL_INTS = {"multimode_total", "adjacency_total"}
_OPTIONAL_FLOATS = {"detuning_ratio"}


def _float_list(raw: str) -> Tuple[float, ...]:
    return tuple(float(item) for item in raw.split(",") if item.strip())


def _int_list(raw: str) -> Tuple[int, ...]:
    return tuple(int(item) for item in raw.split(",") if item.strip())


def _format_list(values: Any) -> str:
    return ", ".join(repr(v) if isinstance(v, float) else str(v) for v in values)


def _or_default(value: Any, default: Any) -> Any:
    return default if value is None else value


def _is_none(raw: str) -> bool:
    return raw.strip().lower() in ("", "none")


class ParamsStorage:
    """INI file storage of the parameter set and run settings."""

    CONF_PATH: Path = constants.CONFIG_FILE_PATH

    def _ensure_dir(self) -> None:
        """Make parent dirs if needed."""
        os.makedirs(str(Path(self.CONF_PATH).parent), exist_ok=True)

    def store(self, params: SystemParams, settings: Optional[RunSettings] = None) -> None:
        """
        Store a parameter set.

        :param params: SystemParams
        :param settings: RunSettings, defaults when None
        """
        settings = settings or RunSettings()
        config = configparser.ConfigParser()
        config[SYSTEM] = {
            "n_modes": str(params.n_modes),
            "fsr_hz": repr(hz(params.fsr)),
            "quality_factor": repr(params.quality_factor),
            "qubit_freq_hz": repr(hz(params.qubit_freq)),
            "qubit_decay_hz": repr(hz(params.qubit_decay)),
            "temperature_k": repr(params.temperature),
            "mode_freqs_hz": ""
            if params.mode_freqs is None
            else _format_list([hz(w) for w in params.mode_freqs]),
        }
        config[DRIVE] = {
            "coupling_hz": _format_list([hz(g) for g in params.coupling]),
            "rabi_amplitude_hz": repr(hz(params.rabi_amplitude)),
            "detuning_hz": repr(hz(params.detuning)),
            "modulation_freqs_hz": _format_list([hz(w) for w in params.modulation_freqs]),
            "modulation_scheme": params.modulation_scheme.value,
        }
        config[NOISE] = {
            "qubit_dephasing_hz": repr(hz(params.qubit_dephasing)),
            "dephasing_convention": params.dephasing_convention.value,
            "far_detuned_factor": repr(params.far_detuned_factor),
        }
        run: Dict[str, str] = {}
        for item in dataclasses.fields(RunSettings):
            value = getattr(settings, item.name)
            if value is None:
                run[item.name] = ""
            elif isinstance(value, Enum):
                run[item.name] = value.value
            elif isinstance(value, tuple):
                run[item.name] = _format_list(value)
            elif isinstance(value, bool):
                run[item.name] = "true" if value else "false"
            else:
                run[item.name] = repr(value)
        config[RUN] = run

        self._ensure_dir()
        with Path(self.CONF_PATH).open("w", encoding="utf-8") as f:
            f.write(FILE_HEADER)
            config.write(f)

    def load(self) -> Tuple[SystemParams, RunSettings]:
        """
        Load the parameter set.

        Missing keys and a missing file fall back to the default parameter set.

        :return: (SystemParams, RunSettings)
        :raises ConfigError: on unreadable or invalid files
        """
        config = configparser.ConfigParser()
        path = Path(self.CONF_PATH)
        if path.exists():
            try:
                config.read_string(path.read_text(encoding="utf-8"), source=str(path))
            except configparser.Error as e:
                raise ConfigError(f"cannot parse {path}: {e}") from e
        unknown = set(config.sections()) - {SYSTEM, DRIVE, NOISE, RUN}
        if unknown:
            raise ConfigError(f"unknown sections in {path}: {sorted(unknown)}")
        try:
            return self._params(config), self._settings(config)
        except (ValueError, TypeError, BaseSimulationError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(f"invalid value in {path}: {e}") from e

    @staticmethod
    def _get(
        config: configparser.ConfigParser,
        section: str,
        key: str,
        convert: Callable[[str], Any],
    ) -> Any:
        if not config.has_option(section, key):
            return None
        raw = config.get(section, key)
        if _is_none(raw):
            return None
        return convert(raw)

    def _params(self, config: configparser.ConfigParser) -> SystemParams:
        get = self._get
        defaults = SystemParams.reference_defaults()
        n_modes = _or_default(get(config, SYSTEM, "n_modes", int), defaults.n_modes)

        def rate(section: str, key: str, default: float) -> float:
            value = get(config, section, key, float)
            return default if value is None else rad_per_s(value)

        fsr = rate(SYSTEM, "fsr_hz", defaults.fsr)
        gamma = rate(SYSTEM, "qubit_decay_hz", defaults.qubit_decay)
        rabi = rate(DRIVE, "rabi_amplitude_hz", constants.DEFAULT_RABI_RATIO * gamma)
        coupling = get(config, DRIVE, "coupling_hz", _float_list)
        mode_freqs = get(config, SYSTEM, "mode_freqs_hz", _float_list)
        tones = get(config, DRIVE, "modulation_freqs_hz", _float_list)
        if tones is None:
            tones = _or_default(
                mode_freqs, tuple(hz(fsr * k) for k in range(1, n_modes + 1))
            )
        temperature = get(config, SYSTEM, "temperature_k", float)
        quality = get(config, SYSTEM, "quality_factor", float)
        far = get(config, NOISE, "far_detuned_factor", float)

        return SystemParams(
            n_modes=n_modes,
            fsr=fsr,
            quality_factor=_or_default(quality, defaults.quality_factor),
            qubit_freq=rate(SYSTEM, "qubit_freq_hz", defaults.qubit_freq),
            qubit_decay=gamma,
            temperature=_or_default(temperature, defaults.temperature),
            coupling=tuple(rad_per_s(g) for g in coupling)
            if coupling is not None
            else (constants.DEFAULT_G0_RATIO * gamma,),
            rabi_amplitude=rabi,
            detuning=rate(DRIVE, "detuning_hz", constants.DEFAULT_DETUNING_RATIO * rabi),
            modulation_freqs=tuple(rad_per_s(w) for w in tones),
            modulation_scheme=_or_default(
                get(config, DRIVE, "modulation_scheme", str), defaults.modulation_scheme
            ),
            qubit_dephasing=rate(NOISE, "qubit_dephasing_hz", 0.0),
            mode_freqs=None if mode_freqs is None else tuple(rad_per_s(w) for w in mode_freqs),
            dephasing_convention=_or_default(
                get(config, NOISE, "dephasing_convention", str), defaults.dephasing_convention
            ),
            far_detuned_factor=_or_default(far, defaults.far_detuned_factor),
        )

    def _settings(self, config: configparser.ConfigParser) -> RunSettings:
        if not config.has_section(RUN):
            return RunSettings()
        known = {item.name: item for item in dataclasses.fields(RunSettings)}
        unknown = set(config.options(RUN)) - set(known)
        if unknown:
            raise ConfigError(f"unknown run keys: {sorted(unknown)}")
        values: Dict[str, Any] = {}
        for name in config.options(RUN):
            raw = config.get(RUN, name)
            default = known[name].default
            if name in _INT_LISTS:
                values[name] = None if name == "dims" and _is_none(raw) else _int_list(raw)
            elif name in _OPTIONAL_INTS:
                values[name] = None if _is_none(raw) else int(raw)
            elif name in _OPTIONAL_FLOATS:
                values[name] = None if _is_none(raw) else float(raw)
            elif isinstance(default, bool):
                values[name] = config.getboolean(RUN, name)
            elif isinstance(default, Enum):
                values[name] = type(default)(raw.strip())
            elif isinstance(default, int):
                values[name] = int(raw)
            elif isinstance(default, float):
                values[name] = float(raw)
            elif isinstance(default, tuple):
                values[name] = _float_list(raw)
            else:
                raise ConfigError(f"cannot parse run key {name}")
        return RunSettings(**values)
