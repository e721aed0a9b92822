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
"""Tests drive modulation and interaction graphs."""

import numpy as np
import pytest

from vibent.modulation import (
    CouplingMatrix,
    build_adjacency,
    coupling_matrix,
    default_total_modes,
    drive_amplitude,
    effective_coupling,
    interaction_strengths,
    rwa_hamiltonian,
    select_modulation_freqs,
)
from vibent.params import ModeSpectrum, ModulationScheme, SystemParams, mode_spectrum


FSR = 1.0


def harmonic(n_modes: int) -> ModeSpectrum:
    return ModeSpectrum(tuple(FSR * k for k in range(1, n_modes + 1)))


def test_drive_amplitude():
    tones = (1.0, 2.0, 3.0)
    assert drive_amplitude(0.0, 2.0, tones) == pytest.approx(6.0)
    assert drive_amplitude(np.pi, 1.0, (1.0,)) == pytest.approx(-1.0)
    values = drive_amplitude(np.array([0.0, np.pi / 2]), 1.0, (1.0, 2.0))
    assert values == pytest.approx([2.0, -1.0])


def test_select_modulation_freqs():
    spectrum = harmonic(4)
    assert select_modulation_freqs(spectrum, [0, 2], ModulationScheme.MODE_FREQUENCIES) == (
        1.0,
        3.0,
    )
    assert select_modulation_freqs(
        spectrum, [0, 1, 2], ModulationScheme.HALF_SUM_FREQUENCIES
    ) == pytest.approx((1.5, 2.0, 2.5))
    assert select_modulation_freqs(spectrum, [3], ModulationScheme.HALF_SUM_FREQUENCIES) == (4.0,)


class TestAdjacency:
    def test_triangle_counts(self):
        adjacency = build_adjacency(harmonic(3), (1.0, 2.0, 3.0))
        assert adjacency.tms[0, 1] == pytest.approx(0.5)
        assert adjacency.tms[0, 0] == pytest.approx(0.75)
        assert adjacency.tms[0, 2] == pytest.approx(0.75)
        assert adjacency.tms[2, 2] == pytest.approx(0.25)
        assert adjacency.qst[0, 1] == pytest.approx(1.0)
        assert adjacency.qst[0, 2] == pytest.approx(0.5)
        assert adjacency.active_set == (0, 1, 2)
        assert np.allclose(adjacency.tms, adjacency.tms.T)
        assert np.allclose(adjacency.qst, adjacency.qst.T)
        assert np.all(np.diag(adjacency.transfer_graph()) == 0)

    def test_single_tone(self):
        adjacency = build_adjacency(harmonic(3), (1.0,))
        assert adjacency.tms[0, 0] == pytest.approx(0.25)
        assert adjacency.tms[0, 1] == 0
        assert adjacency.qst[0, 0] == pytest.approx(0.5)
        assert adjacency.qst[0, 1] == 0
        assert adjacency.active_set == (0,)

    def test_commensurate_spill_over(self):
        # tones (1, 2) also pump modes 1 and 3 through 2 + 2 = 1 + 3
        adjacency = build_adjacency(harmonic(default_total_modes([0, 1])), (1.0, 2.0))
        assert adjacency.n_modes == 5
        assert adjacency.tms[0, 2] > 0
        assert adjacency.active_set == (0, 1)

    def test_non_commensurate_spectrum_has_no_cross_terms(self):
        spectrum = ModeSpectrum((1.0, 2.0 + np.sqrt(2) * 1e-2, 3.0 + np.sqrt(3) * 1e-2))
        adjacency = build_adjacency(spectrum, spectrum.omegas[:1])
        assert adjacency.tms[0, 1] == 0
        assert adjacency.tms[1, 2] == 0

    @pytest.mark.parametrize(
        "scheme, weight",
        [(ModulationScheme.MODE_FREQUENCIES, 0.5), (ModulationScheme.HALF_SUM_FREQUENCIES, 0.25)],
    )
    def test_non_commensurate_complete_graph(self, scheme, weight):
        spectrum = ModeSpectrum((1.0, 2.0 + np.sqrt(2) * 1e-2, 3.0 + np.sqrt(3) * 1e-2))
        tones = select_modulation_freqs(spectrum, [0, 1, 2], scheme)
        adjacency = build_adjacency(spectrum, tones, scheme)
        off = ~np.eye(3, dtype=bool)
        assert np.allclose(adjacency.tms[off], weight)
        assert adjacency.active_set == (0, 1, 2)

    def test_tone_order_does_not_matter(self):
        tones = (1.0, 2.0, 3.0)
        adjacency = build_adjacency(harmonic(5), tones)
        reordered = build_adjacency(harmonic(5), tones[::-1])
        assert np.array_equal(adjacency.tms, reordered.tms)
        assert np.array_equal(adjacency.qst, reordered.qst)

    def test_sub_spectrum_selects_sub_graphs(self):
        spectrum = ModeSpectrum((1.0, 2.0 + np.sqrt(2) * 1e-2, 3.0 + np.sqrt(3) * 1e-2, 4.3))
        tones = spectrum.omegas[:3]
        full = build_adjacency(spectrum, tones)
        keep = [0, 2, 3]
        sub = build_adjacency(ModeSpectrum(tuple(spectrum.omegas[k] for k in keep)), tones)
        assert np.array_equal(sub.tms, full.tms[np.ix_(keep, keep)])
        assert np.array_equal(sub.qst, full.qst[np.ix_(keep, keep)])

    def test_half_sum_active_set(self):
        spectrum = harmonic(4)
        tones = select_modulation_freqs(spectrum, [0, 1], ModulationScheme.HALF_SUM_FREQUENCIES)
        adjacency = build_adjacency(spectrum, tones, ModulationScheme.HALF_SUM_FREQUENCIES)
        assert adjacency.active_set == (0, 1)
        assert adjacency.tms[0, 1] > 0
        assert adjacency.scheme is ModulationScheme.HALF_SUM_FREQUENCIES

    def test_empty_tones(self):
        with pytest.raises(ValueError):
            build_adjacency(harmonic(2), ())


def test_default_total_modes():
    assert default_total_modes([0, 1, 2]) == 7
    assert default_total_modes([5]) == 13


class TestCoupling:
    def setup_method(self):
        self.params = SystemParams.reference_defaults()

    def test_effective_coupling(self):
        p = self.params
        omegas = mode_spectrum(p).as_array()
        expected = p.rabi_amplitude**2 / (2 * p.detuning * (2 * p.qubit_occupation + 1))
        expected *= p.coupling[0] * p.coupling[1] / (omegas[0] * omegas[1])
        assert effective_coupling(0, 1, p) == pytest.approx(expected)
        assert coupling_matrix(p).g_eff[0, 1] == pytest.approx(expected)

    def test_three_tones_at_origin(self):
        coupling = coupling_matrix(self.params)
        assert coupling.at(0.0)[0, 0] == pytest.approx(9 * coupling.g_eff[0, 0])
        assert effective_coupling(0, 0, self.params, t=0.0) == pytest.approx(
            9 * coupling.g_eff[0, 0]
        )

    def test_quadratic_in_drive(self):
        weak = coupling_matrix(self.params).g_eff
        strong = coupling_matrix(
            self.params.replace(rabi_amplitude=2 * self.params.rabi_amplitude)
        ).g_eff
        assert np.allclose(strong, 4 * weak)

    def test_interaction_strengths(self):
        spectrum = mode_spectrum(self.params)
        adjacency = build_adjacency(spectrum, self.params.modulation_freqs)
        coupling = coupling_matrix(self.params, spectrum)
        strengths = interaction_strengths(adjacency, coupling)
        assert np.allclose(strengths, coupling.g_eff * adjacency.tms)


NON_COMMENSURATE = ModeSpectrum((1.0, 2.0 + np.sqrt(2) * 1e-2, 3.0 + np.sqrt(3) * 1e-2))


def averaged_interaction(omegas, tones, g, period, n_samples=256):
    """Average ½Σ G(t) x_k x_l over a period in the rotating frame, then relabel x' = -p, p' = x."""
    n_modes = len(omegas)
    average = np.zeros((2 * n_modes, 2 * n_modes))
    for t in period * np.arange(n_samples) / n_samples:
        rotation = np.zeros_like(average)
        for k, omega in enumerate(omegas):
            c, s = np.cos(omega * t), np.sin(omega * t)
            rotation[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = [[c, s], [-s, c]]
        lab = np.zeros_like(average)
        lab[0::2, 0::2] = g * drive_amplitude(t, 1.0, tones) ** 2
        average += rotation.T @ lab @ rotation
    average /= n_samples
    relabel = np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    return relabel.T @ average @ relabel


def unit_coupling(omegas, tones):
    ratio = np.array([1.0, 0.5, 0.25][: len(omegas)])
    return CouplingMatrix(g_eff=np.outer(ratio, ratio), rabi_amplitude=1.0, modulation_freqs=tones)


class TestRwaHamiltonian:
    def setup_method(self):
        self.params = SystemParams.reference_defaults()
        spectrum = mode_spectrum(self.params)
        self.adjacency = build_adjacency(spectrum, self.params.modulation_freqs)
        self.coupling = coupling_matrix(self.params, spectrum)

    @pytest.mark.parametrize(
        "tones, scheme",
        [
            ((1.0, 2.0, 3.0), ModulationScheme.MODE_FREQUENCIES),
            ((1.5, 2.0, 2.5), ModulationScheme.HALF_SUM_FREQUENCIES),
            ((1.0, 3.0), ModulationScheme.MODE_FREQUENCIES),
        ],
    )
    def test_matches_period_average(self, tones, scheme):
        spectrum = harmonic(3)
        coupling = unit_coupling(spectrum.omegas, tones)
        form = rwa_hamiltonian(
            build_adjacency(spectrum, tones, scheme), coupling, include_self_transfer=True
        )
        expected = averaged_interaction(spectrum.omegas, tones, coupling.g_eff, 4 * np.pi)
        assert np.allclose(form.h, expected, atol=1e-12)

    def test_structure(self):
        form = rwa_hamiltonian(self.adjacency, self.coupling)
        g = self.coupling.g_eff
        qst = self.adjacency.transfer_graph()
        assert np.allclose(form.h, form.h.T)
        assert np.allclose(form.xp, 0.0)
        assert np.allclose(form.xx, 0.5 * g * (qst - self.adjacency.tms))
        assert np.allclose(form.pp, 0.5 * g * (qst + self.adjacency.tms))

    def test_mode_frequencies_give_momentum_coupling(self):
        tones = NON_COMMENSURATE.omegas
        adjacency = build_adjacency(NON_COMMENSURATE, tones)
        g = unit_coupling(tones, tones).g_eff
        form = rwa_hamiltonian(adjacency, unit_coupling(tones, tones))
        off = ~np.eye(3, dtype=bool)
        # transfer and squeezing weights match between distinct modes
        assert np.allclose(adjacency.qst[off], adjacency.tms[off])
        assert np.allclose(form.xx[off], 0.0)
        assert np.allclose(form.pp[off], 0.5 * g[off])
        assert np.allclose(form.xp, 0.0)
        # what remains on the diagonal is single-mode squeezing
        assert np.allclose(np.diag(form.xx), -np.diag(g) / 8)
        assert np.allclose(np.diag(form.pp), np.diag(g) / 8)

    def test_half_sums_give_two_mode_squeezing(self):
        spectrum = ModeSpectrum(NON_COMMENSURATE.omegas[:2])
        tones = select_modulation_freqs(spectrum, [0, 1], ModulationScheme.HALF_SUM_FREQUENCIES)
        adjacency = build_adjacency(spectrum, tones, ModulationScheme.HALF_SUM_FREQUENCIES)
        g = unit_coupling(spectrum.omegas, tones)
        form = rwa_hamiltonian(adjacency, g)
        g01 = g.g_eff[0, 1]
        assert form.xx[0, 1] == pytest.approx(-g01 / 8)
        assert form.pp[0, 1] == pytest.approx(g01 / 8)
        assert np.allclose(np.diag(form.xx), 0.0)
        assert np.allclose(np.diag(form.pp), 0.0)
        generator = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]])) @ form.h
        eigenvalues = np.linalg.eigvals(generator)
        assert np.abs(eigenvalues.imag).max() < 1e-12
        assert eigenvalues.real.max() == pytest.approx(g01 / 8)

    def test_zero_coupling(self):
        zero = CouplingMatrix(np.zeros((3, 3)), 0.0, self.params.modulation_freqs)
        assert np.allclose(rwa_hamiltonian(self.adjacency, zero).h, 0.0)

    def test_self_transfer(self):
        with_diag = rwa_hamiltonian(self.adjacency, self.coupling, include_self_transfer=True)
        without = rwa_hamiltonian(self.adjacency, self.coupling)
        shift = 0.5 * self.coupling.g_eff[0, 0] * self.adjacency.qst[0, 0]
        assert with_diag.xx[0, 0] == pytest.approx(without.xx[0, 0] + shift)
        assert with_diag.pp[0, 0] == pytest.approx(without.pp[0, 0] + shift)

    def test_spectrum_mismatch(self):
        other = coupling_matrix(self.params, harmonic(2))
        with pytest.raises(ValueError):
            rwa_hamiltonian(self.adjacency, other)
