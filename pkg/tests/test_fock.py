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
"""Tests the exact Fock-space model."""

from pathlib import Path
from tempfile import TemporaryDirectory

import numpy as np
import pytest
import qutip as qt

from vibent import constants
from vibent.errors import (
    LayoutMismatchError,
    MemoryCeilingError,
    ParameterError,
    PartitionError,
    ToleranceError,
)
from vibent.fock import (
    DensityMatrix,
    HilbertLayout,
    LindbladGenerator,
    build_hamiltonian,
    build_operators,
    collapse_operators,
    covariance_from_rho,
    evolve,
    evolve_iter,
    expect,
    ground_state,
    lindblad_rhs,
    mode_occupations,
    mode_state,
    partial_trace,
    read_density_dump,
    write_density_dump,
)
from vibent.params import SystemParams


class TestLayout:
    def test_dimensions(self):
        layout = HilbertLayout(constants.DESK_DIMS)
        assert layout.dimension == 240
        assert layout.n_modes == 3
        assert layout.mode_dims == (6, 5, 4)
        assert layout.mode_factor(0) == 1
        assert layout.modes_only().dims == (6, 5, 4)
        assert not layout.modes_only().has_tls

    def test_memory_ceiling(self):
        with pytest.raises(MemoryCeilingError) as excinfo:
            HilbertLayout((2, 20, 20, 20))
        assert excinfo.value.dimension == 16000
        assert HilbertLayout(constants.FULL_DIMS).dimension == 1440

    def test_invalid(self):
        with pytest.raises(ParameterError):
            HilbertLayout((3, 4))
        with pytest.raises(ParameterError):
            HilbertLayout(())
        with pytest.raises(LayoutMismatchError):
            HilbertLayout((2, 3)).mode_factor(1)


class TestOperators:
    def test_number_operator(self):
        ops = build_operators(HilbertLayout((2, 3)))
        assert np.allclose(ops.number(0).diag(), [0, 1, 2, 0, 1, 2])

    def test_sigma_z_squares_to_identity(self):
        ops = build_operators(HilbertLayout((2, 3, 2)))
        assert (ops.sigma_z * ops.sigma_z - ops.identity).norm() < 1e-12

    def test_truncated_commutator(self):
        ops = build_operators(HilbertLayout((2, 4)))
        b = ops.annihilators[0]
        deviation = (b * b.dag() - b.dag() * b - ops.identity).full()
        level = np.tile(np.arange(4), 2)
        off_edge = level < 3
        assert np.allclose(deviation[np.ix_(off_edge, off_edge)], 0.0)
        assert np.allclose(np.diag(deviation)[~off_edge], -4.0)

    def test_mode_only_layout(self):
        ops = build_operators(HilbertLayout((3, 3), has_tls=False))
        assert ops.sigma_z is None
        assert len(ops.annihilators) == 2
        assert len(ops.quadratures()) == 4


class TestGenerator:
    def setup_method(self):
        self.params = SystemParams.reference_defaults()
        self.layout = HilbertLayout((2, 3, 3, 2))

    def test_hamiltonian_hermitian(self):
        h = build_hamiltonian(1e-9, self.params, self.layout)
        assert h.isherm
        generator = LindbladGenerator(self.params, self.layout)
        assert (generator.hamiltonian(1e-9) - h).norm() < 1e-6 * h.norm()

    def test_polaron_shift(self):
        gamma = self.params.qubit_decay
        params = SystemParams.reference_defaults(n_modes=1, temperature=0.0).replace(
            rabi_amplitude=0.0, detuning=2.5 * gamma
        )
        omega, g = params.fsr, params.coupling[0]
        levels = np.linalg.eigvalsh(build_hamiltonian(0.0, params, HilbertLayout((2, 24))).full())
        expected = sorted(
            s * 0.5 * params.detuning + omega * n - g**2 / (4 * omega)
            for s in (1, -1)
            for n in range(12)
        )
        assert levels[:8] == pytest.approx(expected[:8], rel=1e-9, abs=1e-6 * omega)

    def test_collapse_rates(self):
        params = self.params.replace(qubit_dephasing=1e6)
        c_ops = collapse_operators(params, self.layout)
        # σ-, σ+, σz and one loss and one gain term per mode
        assert len(c_ops) == 9

    def test_trace_preserving(self):
        generator = LindbladGenerator(self.params, self.layout)
        state = qt.rand_dm(self.layout.dimension, seed=5).full()
        derivative = generator(3e-9, state)
        assert abs(np.trace(derivative)) < 1e-6 * np.abs(derivative).max()
        assert np.allclose(derivative, derivative.conj().T)

    def test_rhs_matches_generator(self):
        rho = ground_state(self.layout)
        generator = LindbladGenerator(self.params, self.layout)
        assert np.allclose(lindblad_rhs(rho, 1e-9, self.params), generator(1e-9, rho.rho))

    def test_layout_mismatch(self):
        generator = LindbladGenerator(self.params, HilbertLayout((2, 2, 2, 2)))
        with pytest.raises(LayoutMismatchError):
            next(evolve_iter(ground_state(self.layout), self.params, 1e-8, generator=generator))


class TestEvolution:
    def setup_method(self):
        self.params = SystemParams.reference_defaults()
        self.layout = HilbertLayout((2, 3, 3, 2))

    def test_states_stay_physical(self):
        trajectory = evolve(
            ground_state(self.layout), self.params, 2 * self.params.tau_fsr, n_snapshots=4
        )
        assert len(trajectory) == 5
        for state in trajectory.states:
            state.validate()
        assert np.all(mode_occupations(mode_state(trajectory.final)) >= -1e-10)

    def test_uncoupled_modes_stay_in_vacuum(self):
        params = self.params.with_coupling(0.0).replace(temperature=0.0)
        trajectory = evolve(ground_state(self.layout), params, self.params.tau_fsr, n_snapshots=2)
        assert np.allclose(mode_occupations(mode_state(trajectory.final)), 0.0, atol=1e-8)

    def test_thermalization(self):
        omega = constants.TWO_PI * 20e6
        n_bar = 0.2
        temperature = constants.HBAR * omega / (constants.K_B * np.log(1 + 1 / n_bar))
        params = self.params.replace(
            quality_factor=10.0, temperature=temperature, n_modes=1, coupling=(0.0,)
        )
        layout = HilbertLayout((10,), has_tls=False)
        gamma = omega / 10.0
        rho0 = DensityMatrix.from_qobj(qt.basis(10, 0), layout)
        trajectory = evolve(rho0, params, 20 / gamma, tol=1e-10, n_snapshots=1)
        assert mode_occupations(trajectory.final)[0] == pytest.approx(n_bar, rel=1e-4)

    def test_energy_conserved_without_dissipation(self):
        params = self.params.replace(modulation_freqs=(0.0,))
        generator = LindbladGenerator(params, self.layout, dissipative=False)
        h = generator.hamiltonian(0.0)
        energies = [
            float(np.real(expect(h, rho)))
            for _, rho in evolve_iter(
                ground_state(self.layout),
                params,
                self.params.tau_fsr,
                tol=1e-10,
                n_snapshots=4,
                generator=generator,
            )
        ]
        assert energies == pytest.approx([energies[0]] * 5, rel=1e-7)

    def test_amplitude_damping(self):
        params = self.params.replace(rabi_amplitude=0.0, temperature=0.0)
        gamma = params.qubit_decay
        layout = HilbertLayout((2,))
        excited = DensityMatrix.from_qobj(qt.basis(2, 0), layout)
        trajectory = evolve(excited, params, 2 / gamma, tol=1e-10, n_snapshots=4)
        for t, state in zip(trajectory.times, trajectory.states):
            assert state.rho[0, 0].real == pytest.approx(np.exp(-gamma * t), abs=1e-8)

    def test_pure_dephasing(self):
        gamma = self.params.qubit_decay
        params = self.params.replace(
            rabi_amplitude=0.0, temperature=0.0, qubit_decay=1e-3 * gamma, qubit_dephasing=gamma
        )
        layout = HilbertLayout((2,))
        plus = DensityMatrix.from_qobj((qt.basis(2, 0) + qt.basis(2, 1)).unit(), layout)
        trajectory = evolve(plus, params, 1 / gamma, tol=1e-10, n_snapshots=4)
        rate = 0.5 * params.qubit_decay + 2 * params.qubit_dephasing
        for t, state in zip(trajectory.times, trajectory.states):
            assert abs(state.rho[0, 1]) == pytest.approx(0.5 * np.exp(-rate * t), rel=1e-6)

    def test_trace_drift_detected(self):
        generator = LindbladGenerator(self.params, self.layout)
        leaky = generator.apply

        def apply(t, vec):
            return leaky(t, vec) - 1e3 * vec

        generator.apply = apply
        with pytest.raises(ToleranceError):
            list(
                evolve_iter(
                    ground_state(self.layout), self.params, 1e-8, n_snapshots=1, generator=generator
                )
            )

    def test_bad_time(self):
        with pytest.raises(ParameterError):
            next(evolve_iter(ground_state(self.layout), self.params, 0.0))


class TestReduction:
    def test_partial_trace(self):
        layout = HilbertLayout((2, 3, 2))
        rho = ground_state(layout)
        modes = mode_state(rho)
        assert modes.layout == HilbertLayout((3, 2), has_tls=False)
        assert modes.trace == pytest.approx(1.0)
        single = partial_trace(rho, [0])
        assert single.layout.has_tls
        assert single.rho[1, 1] == pytest.approx(1.0)
        with pytest.raises(PartitionError):
            partial_trace(rho, [3])

    def test_vacuum_covariance(self):
        layout = HilbertLayout((4, 4), has_tls=False)
        vacuum = DensityMatrix.from_qobj(qt.tensor(qt.basis(4, 0), qt.basis(4, 0)), layout)
        assert np.allclose(covariance_from_rho(vacuum).v, 0.5 * np.eye(4))

    def test_single_phonon_covariance(self):
        layout = HilbertLayout((4,), has_tls=False)
        one = DensityMatrix.from_qobj(qt.basis(4, 1), layout)
        assert np.allclose(covariance_from_rho(one).v, 1.5 * np.eye(2))

    def test_covariance_needs_modes_only(self):
        with pytest.raises(LayoutMismatchError):
            covariance_from_rho(ground_state(HilbertLayout((2, 3))))

    def test_density_dump(self):
        layout = HilbertLayout((2, 3))
        rho = DensityMatrix(qt.rand_dm(6, seed=2).full(), layout)
        with TemporaryDirectory() as tmp_dir:
            path = Path(tmp_dir) / "rho.bin"
            write_density_dump(path, rho)
            raw = path.read_bytes()
            assert len(raw) == 4 * 3 + 16 * 36
            loaded = read_density_dump(path)
        assert loaded.layout == layout
        assert np.array_equal(loaded.rho, rho.rho)
