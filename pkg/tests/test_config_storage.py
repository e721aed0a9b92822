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
"""Tests parameter file storage."""

from contextlib import contextmanager
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Generator
from unittest.mock import patch

import pytest

from vibent import constants
from vibent.config_storage import ParamsStorage
from vibent.errors import ConfigError
from vibent.params import DephasingConvention, ModulationScheme, SystemParams
from vibent.scenarios import RunSettings, SpectrumMethod


@contextmanager
def conf_tmp_file() -> Generator[Path, None, None]:
    """Mock parameter storage file path."""
    with TemporaryDirectory() as tmp_dir:
        conf_path = Path(tmp_dir) / ".vibent/vibent.ini"
        with patch.object(ParamsStorage, "CONF_PATH", conf_path):
            yield conf_path


def assert_params_close(left: SystemParams, right: SystemParams) -> None:
    for name in ("fsr", "qubit_freq", "qubit_decay", "rabi_amplitude", "detuning", "qubit_dephasing"):
        assert getattr(left, name) == pytest.approx(getattr(right, name), rel=1e-12, abs=1e-6)
    assert left.n_modes == right.n_modes
    assert left.temperature == pytest.approx(right.temperature)
    assert left.quality_factor == pytest.approx(right.quality_factor)
    assert left.coupling == pytest.approx(right.coupling, rel=1e-12)
    assert left.modulation_freqs == pytest.approx(right.modulation_freqs, rel=1e-12)
    assert left.modulation_scheme is right.modulation_scheme
    assert left.dephasing_convention is right.dephasing_convention


def test_missing_file_gives_defaults() -> None:
    """Test the default parameter set is used without a file."""
    with conf_tmp_file() as conf_file:
        params, settings = ParamsStorage().load()
        assert not conf_file.exists()
        assert_params_close(params, SystemParams.reference_defaults())
        assert settings == RunSettings()


def test_store_and_load() -> None:
    """Test a stored parameter set is read back."""
    params = SystemParams.reference_defaults(
        n_modes=2,
        g0_ratio=0.3,
        temperature=0.1,
        qubit_dephasing=2e6,
        modulation_scheme=ModulationScheme.HALF_SUM_FREQUENCIES,
        dephasing_convention=DephasingConvention.DAMPING,
    )
    settings = RunSettings(
        t_end_tau=50.0,
        dims=(2, 3, 3),
        rwa=True,
        sweep_coupling=(0.2, 0.4),
        multimode_total=9,
        spectrum_method=SpectrumMethod.REGRESSION,
        detuning_ratio=None,
    )
    with conf_tmp_file() as conf_file:
        ParamsStorage().store(params, settings)
        assert conf_file.exists()
        text = conf_file.read_text()
        assert text.startswith("# vibent parameter file")
        assert "[run]" in text
        loaded, loaded_settings = ParamsStorage().load()
    assert_params_close(loaded, params)
    assert loaded.mode_freqs is None
    assert loaded_settings == settings


def test_hz_keys() -> None:
    """Test frequencies are read in Hz."""
    with conf_tmp_file() as conf_file:
        conf_file.parent.mkdir(parents=True)
        conf_file.write_text(
            "[system]\nn_modes = 2\nfsr_hz = 1e6\nmode_freqs_hz = 1e6, 2.1e6\n"
            "[drive]\ncoupling_hz = 1e5, 2e5\n"
        )
        params, settings = ParamsStorage().load()
    assert params.fsr == pytest.approx(constants.TWO_PI * 1e6)
    assert params.mode_freqs == pytest.approx((constants.TWO_PI * 1e6, constants.TWO_PI * 2.1e6))
    assert params.modulation_freqs == pytest.approx(params.mode_freqs)
    assert params.coupling == pytest.approx((constants.TWO_PI * 1e5, constants.TWO_PI * 2e5))
    assert params.rabi_amplitude == pytest.approx(constants.DEFAULT_RABI_RATIO * params.qubit_decay)
    assert params.detuning == pytest.approx(constants.DEFAULT_DETUNING_RATIO * params.rabi_amplitude)
    assert settings == RunSettings()


def test_run_lists() -> None:
    """Test sweep and mode lists in the run section."""
    with conf_tmp_file() as conf_file:
        conf_file.parent.mkdir(parents=True)
        conf_file.write_text(
            "[run]\nsweep_temperature = 0.01, 0.1\nadjacency_active = 1, 2, 3\n"
            "adjacency_total = none\nfull_dims = yes\nn_snapshots = 20\n"
        )
        _, settings = ParamsStorage().load()
    assert settings.sweep_temperature == (0.01, 0.1)
    assert settings.adjacency_active == (1, 2, 3)
    assert settings.adjacency_total is None
    assert settings.full_dims
    assert settings.n_snapshots == 20


@pytest.mark.parametrize(
    "content",
    [
        "[cavity]\nn_modes = 2\n",
        "[run]\nno_such_key = 1\n",
        "[system]\nn_modes = three\n",
        "[system]\nn_modes = 0\n",
        "[drive]\ncoupling_hz = ,\n",
        "[drive]\nmodulation_scheme = bogus\n",
        "[noise]\ndephasing_convention = flipped\n",
        "[system]\nqubit_decay_hz = -1\n",
        "[run]\nspectrum_method = guess\n",
        "[run]\ndepth_modes = 1\n",
        "no section header\n",
    ],
)
def test_invalid_files(content: str) -> None:
    """Test invalid files raise ConfigError."""
    with conf_tmp_file() as conf_file:
        conf_file.parent.mkdir(parents=True)
        conf_file.write_text(content)
        with pytest.raises(ConfigError):
            ParamsStorage().load()
