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
"""Tests driven TLS physics."""

from unittest.mock import patch

import numpy as np
import pytest

from vibent import constants
from vibent.errors import (
    NonPositiveDampingError,
    ParameterError,
    ResolventStabilityWarning,
    StepSizeError,
)
from vibent.fock import HilbertLayout, build_operators, evolve, expect, ground_state
from vibent.params import SystemParams, mode_spectrum
from vibent.tls import (
    TlsState,
    effective_bath,
    fluctuation_spectrum,
    fluctuation_vector,
    max_step,
    mean_field_evolve,
    mean_field_rhs,
    params_steady_state,
    regression_spectrum,
    steady_state,
)


GAMMA = constants.TWO_PI * 20e6


class TestSteadyState:
    def test_undriven_ground(self):
        state = steady_state(detuning=GAMMA, rabi=0.0, decay=GAMMA, n_thermal=0.0)
        assert state.sigma_plus == 0
        assert state.sigma_z == pytest.approx(-1.0)
        assert np.allclose(fluctuation_vector(state), 0.0)

    def test_far_detuned_limit(self):
        state = steady_state(detuning=100 * GAMMA, rabi=GAMMA, decay=GAMMA, n_thermal=0.0)
        assert abs(state.sigma_plus) == pytest.approx(0.005, rel=1e-2)
        assert state.sigma_z == pytest.approx(-1.0, rel=1e-2)

    def test_reference_defaults_close_to_ground(self):
        state = params_steady_state(SystemParams.reference_defaults())
        assert state.sigma_z == pytest.approx(-1.0, rel=2e-2)
        assert state.is_physical()

    def test_residual_vanishes(self):
        params = SystemParams.reference_defaults()
        state = params_steady_state(params)
        d_plus, d_z = mean_field_rhs(state, params.rabi_amplitude, params)
        assert abs(d_plus) / GAMMA < 1e-12
        assert abs(d_z) / GAMMA < 1e-12

    def test_residual_vanishes_with_dephasing(self):
        params = SystemParams.reference_defaults(qubit_dephasing=0.2 * GAMMA)
        state = params_steady_state(params)
        d_plus, d_z = mean_field_rhs(state, params.rabi_amplitude, params)
        assert abs(d_plus) / GAMMA < 1e-10
        assert abs(d_z) / GAMMA < 1e-10
        assert state.is_physical()

    def test_phase_rotates_coherence(self):
        base = steady_state(5 * GAMMA, GAMMA, GAMMA, 0.0)
        shifted = steady_state(5 * GAMMA, GAMMA, GAMMA, 0.0, mean_p=0.7)
        assert shifted.sigma_plus == pytest.approx(base.sigma_plus * np.exp(0.7j))
        assert shifted.sigma_z == pytest.approx(base.sigma_z)

    def test_invalid_decay(self):
        with pytest.raises(ParameterError):
            steady_state(GAMMA, GAMMA, 0.0, 0.0)


class TestMeanField:
    def setup_method(self):
        self.params = SystemParams.reference_defaults()

    def test_relaxes_to_steady_state(self):
        dt = max_step(self.params, modulated=False)
        trajectory = mean_field_evolve(
            TlsState.ground(), self.params, 0.0, 40 / GAMMA, dt, modulated=False, record_every=100
        )
        expected = params_steady_state(self.params)
        assert abs(trajectory.final.sigma_plus - expected.sigma_plus) < 1e-6
        assert abs(trajectory.final.sigma_z - expected.sigma_z) < 1e-6
        assert all(state.is_physical(1e-6) for state in trajectory)

    def test_step_size_rejected(self):
        with pytest.raises(StepSizeError):
            mean_field_evolve(TlsState.ground(), self.params, 0.0, 1 / GAMMA, 1 / GAMMA)

    def test_matches_qubit_master_equation(self):
        t_end = 3 / GAMMA
        trajectory = mean_field_evolve(
            TlsState.ground(), self.params, 0.0, t_end, t_end / 3000, record_every=300
        )
        layout = HilbertLayout((2,))
        exact = evolve(ground_state(layout), self.params, t_end, tol=1e-11, n_snapshots=10)
        ops = build_operators(layout)
        assert np.allclose(exact.times, trajectory.times)
        for rho, sp, sz in zip(exact.states, trajectory.sigma_plus, trajectory.sigma_z):
            assert abs(expect(ops.sigma_z, rho) - sz) < 1e-6
            assert abs(expect(ops.sigma_plus, rho) - sp) < 1e-6


class TestSpectrum:
    def setup_method(self):
        self.params = SystemParams.reference_defaults()

    def test_real_values(self):
        omega_1 = mode_spectrum(self.params).omegas[0]
        value = fluctuation_spectrum(omega_1, self.params)
        assert isinstance(value, float)
        values = fluctuation_spectrum(np.array([-omega_1, omega_1]), self.params)
        assert values.dtype == float

    def test_matches_regression(self):
        omega_1 = mode_spectrum(self.params).omegas[0]
        grid = np.linspace(-6 * omega_1, 6 * omega_1, 20)
        resolvent = fluctuation_spectrum(grid, self.params)
        oracle = regression_spectrum(grid, self.params)
        assert np.max(np.abs(resolvent - oracle)) / np.max(np.abs(resolvent)) < 1e-6

    def test_printed_dephasing_sign_warns(self):
        params = self.params.replace(qubit_dephasing=GAMMA)
        with pytest.warns(ResolventStabilityWarning):
            fluctuation_spectrum(params.fsr, params)

    def test_damping_convention_is_stable(self):
        params = self.params.replace(qubit_dephasing=GAMMA, dephasing_convention="damping")
        assert np.isfinite(fluctuation_spectrum(params.fsr, params))


class TestEffectiveBath:
    def setup_method(self):
        self.params = SystemParams.reference_defaults()

    def test_definition(self):
        spectrum = mode_spectrum(self.params)
        bath = effective_bath(self.params, spectrum)
        omegas = spectrum.as_array()
        s_plus = fluctuation_spectrum(omegas, self.params)
        s_minus = fluctuation_spectrum(-omegas, self.params)
        g = np.asarray(self.params.coupling)
        assert np.allclose(bath.damping(), g**2 * (s_plus - s_minus))
        assert np.allclose(bath.occupancy(), s_minus / (s_plus - s_minus))
        assert np.all(bath.damping() > 0)
        assert np.all(bath.occupancy() >= 0)

    def test_uncoupled_mode(self):
        g = self.params.coupling[0]
        params = self.params.replace(coupling=(0.0, g, g))
        bath = effective_bath(params)
        assert bath.induced_damping[0] == 0.0
        assert bath.induced_damping[1] > 0

    def test_damping_scales_with_coupling_squared(self):
        weak = effective_bath(self.params.with_coupling(0.1 * GAMMA)).damping()
        strong = effective_bath(self.params.with_coupling(0.2 * GAMMA)).damping()
        assert np.allclose(strong, 4 * weak)

    def test_non_positive_damping_reported(self):
        def inverted(omega, params):
            return np.where(np.asarray(omega) > 0, 1.0, 2.0)

        with patch("vibent.tls.fluctuation_spectrum", side_effect=inverted):
            with pytest.raises(NonPositiveDampingError) as excinfo:
                effective_bath(self.params)
        assert excinfo.value.mode == 0


class TestUndriven:
    def setup_method(self):
        self.params = SystemParams.reference_defaults(temperature=0.0).replace(rabi_amplitude=0.0)

    def test_no_fluctuations(self):
        omega_1 = mode_spectrum(self.params).omegas[0]
        grid = np.linspace(-6 * omega_1, 6 * omega_1, 13)
        assert np.all(fluctuation_spectrum(grid, self.params) == 0.0)

    def test_no_induced_bath(self):
        bath = effective_bath(self.params)
        assert bath.induced_damping == (0.0, 0.0, 0.0)
        assert bath.induced_occupancy == (0.0, 0.0, 0.0)

    def test_ground_state_is_fixed(self):
        trajectory = mean_field_evolve(
            TlsState.ground(), self.params, 0.0, 10 / GAMMA, max_step(self.params), record_every=50
        )
        assert np.all(trajectory.sigma_z == -1.0)
        assert np.all(trajectory.sigma_plus == 0.0)


def test_bloch_bound_over_sampled_parameters():
    rng = np.random.default_rng(11)
    for sample in range(120):
        dephasing = rng.uniform(0.0, GAMMA) if sample % 6 == 0 else 0.0
        state = steady_state(
            detuning=rng.uniform(-20.0, 20.0) * GAMMA,
            rabi=rng.uniform(0.0, 10.0) * GAMMA,
            decay=rng.uniform(0.1, 2.0) * GAMMA,
            n_thermal=rng.uniform(0.0, 2.0),
            mean_p=rng.uniform(-np.pi, np.pi),
            dephasing=dephasing,
        )
        assert -1.0 <= state.sigma_z <= 1.0
        assert state.bloch_norm <= 1.0 + 1e-9
