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
"""Various constants."""

from pathlib import Path

import numpy as np
from scipy import constants as _codata

HBAR = _codata.hbar
K_B = _codata.k
TWO_PI = 2.0 * np.pi

# reference operating point, frequencies in Hz
DEFAULT_FSR_HZ = 20e6
DEFAULT_QUALITY_FACTOR = 1e7
DEFAULT_QUBIT_FREQ_HZ = 10e9
DEFAULT_QUBIT_DECAY_HZ = 20e6
DEFAULT_TEMPERATURE_K = 10e-3
DEFAULT_G0_RATIO = 0.5
DEFAULT_RABI_RATIO = 3.0
DEFAULT_DETUNING_RATIO = 5.0
DEFAULT_FAR_DETUNED_FACTOR = 3.0
DEFAULT_ANHARMONICITY = 1e-2

# exact model truncations
DESK_DIMS = (2, 6, 5, 4)
FULL_DIMS = (2, 10, 9, 8)
MAX_HILBERT_DIM = 4096

# tolerances
RESONANCE_TOL = 1e-9
SYMMETRY_TOL = 1e-10
PHYSICAL_TOL = 1e-8
LYAPUNOV_PHYSICAL_TOL = 1e-6
TRACE_TOL = 1e-8
HERMITIAN_TOL = 1e-10
QFI_CUTOFF = 1e-12
SPECTRUM_TOL = 1e-14
RESOLVENT_DET_TOL = 1e-12
REGRESSION_DECAY_WINDOWS = 20.0

# integrator safety factors
LYAPUNOV_STEPS_PER_PERIOD = 50
MEAN_FIELD_STEP_FRACTION = 0.05

# runner defaults
DEFAULT_SNAPSHOTS = 200
DEFAULT_T_END_TAU = 1000.0
DEFAULT_SOLVER_TOL = 1e-8
DEFAULT_SEED = 7
DEFAULT_MAX_MODES = 100
DEFAULT_DEPTH_TEMPERATURES_K = (0.01, 0.05, 0.1, 0.5, 1.0)
DEFAULT_SWEEP_COUPLING = (0.1, 0.3, 0.5)

DEFAULT_EXACT_T_END_TAU = 100.0
DEFAULT_MULTIMODE_MODES = 6
DEFAULT_MULTIMODE_PARTIES = (3, 4, 5, 6)
DEFAULT_MULTIMODE_COUPLING = (0.1, 0.2, 0.3, 0.4, 0.5)
DEFAULT_DEPTH_COUPLING = (0.1, 0.25, 0.5, 0.75, 1.0)
DEFAULT_COMPARE_COUPLING = (0.1, 0.3, 0.5)
DEFAULT_COMPARE_RABI_RATIO = 1.0
DEFAULT_COMPARE_T_END_TAU = 200.0
COMPARE_DIMS = (2, 8, 7, 6)
DEFAULT_SPECTRUM_POINTS = 201
DEFAULT_SPECTRUM_RANGE = 6.0
ENTANGLEMENT_TOL = 1e-9

CONFIG_FILE = "vibent.ini"
CONFIG_FILE_PATH = Path(CONFIG_FILE)
