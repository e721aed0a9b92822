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
"""Multi-tone drive, resonance bookkeeping and RWA interaction graphs."""
from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from vibent import constants
from vibent.params import ModeSpectrum, ModulationScheme, SystemParams, mode_spectrum


@dataclass(frozen=True)
class AdjacencyMatrices:
    """Weighted two-mode-squeezing and state-transfer graphs."""

    tms: np.ndarray
    qst: np.ndarray
    active_set: Tuple[int, ...]
    scheme: ModulationScheme = ModulationScheme.MODE_FREQUENCIES

    @property
    def n_modes(self) -> int:
        """Total number of modes the graphs are built over."""
        return self.tms.shape[0]

    def transfer_graph(self) -> np.ndarray:
        """State-transfer graph without the self-transfer diagonal."""
        graph = self.qst.copy()
        np.fill_diagonal(graph, 0.0)
        return graph


@dataclass(frozen=True)
class CouplingMatrix:
    """
    Effective mode-mode coupling G_{k,l}.

    ``g_eff`` holds the static prefactor evaluated with Ω_0; the instantaneous
    value follows the drive as (Ω(t)/Ω_0)².
    """

    g_eff: np.ndarray
    rabi_amplitude: float
    modulation_freqs: Tuple[float, ...]

    def drive_factor(self, t: float) -> float:
        """Return (Ω(t)/Ω_0)²."""
        return float(drive_amplitude(t, 1.0, self.modulation_freqs)) ** 2

    def at(self, t: float) -> np.ndarray:
        """Return G_{k,l}(t)."""
        return self.g_eff * self.drive_factor(t)


@dataclass(frozen=True)
class QuadraticForm:
    """H = ½ uᵀ h u over u = (x_1, p_1, ..., x_M, p_M)."""

    h: np.ndarray

    @property
    def xx(self) -> np.ndarray:
        """Position-position coefficients."""
        return self.h[0::2, 0::2]

    @property
    def pp(self) -> np.ndarray:
        """Momentum-momentum coefficients."""
        return self.h[1::2, 1::2]

    @property
    def xp(self) -> np.ndarray:
        """Position-momentum coefficients."""
        return self.h[0::2, 1::2]


def drive_amplitude(
    t: Union[float, np.ndarray], rabi_amplitude: float, modulation_freqs: Sequence[float]
) -> Union[float, np.ndarray]:
    """
    Multi-tone Rabi frequency Ω(t) = Ω_0 Σ_i cos(w_i t).

    :param t: time (s), scalar or array
    :param rabi_amplitude: Ω_0 (rad/s)
    :param modulation_freqs: tones w_i (rad/s)

    :return: Ω(t) (rad/s)
    """
    tones = np.asarray(modulation_freqs, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    value = rabi_amplitude * np.cos(np.multiply.outer(t_arr, tones)).sum(axis=-1)
    if np.ndim(t) == 0:
        return float(value)
    return value


def select_modulation_freqs(
    spectrum: ModeSpectrum, active: Sequence[int], scheme: ModulationScheme
) -> Tuple[float, ...]:
    """
    Choose the drive tones activating a set of modes.

    :param spectrum: ModeSpectrum
    :param active: zero-based indices of the target modes
    :param scheme: ModulationScheme

    :return: tuple of tones (rad/s)
    """
    omegas = spectrum.as_array()
    active = sorted(set(active))
    if ModulationScheme(scheme) is ModulationScheme.MODE_FREQUENCIES or len(active) == 1:
        return tuple(float(omegas[k]) for k in active)
    return tuple(
        float(0.5 * (omegas[k] + omegas[l])) for k, l in combinations(active, 2)
    )


def effective_coupling(
    k: int,
    l: int,
    params: SystemParams,
    t: Optional[float] = None,
    spectrum: Optional[ModeSpectrum] = None,
) -> float:
    """
    Effective coupling G_{k,l} = Ω²/(2Δ(2n̄_q+1)) · g_k g_l/(ω_k ω_l).

    :param k: zero-based mode index
    :param l: zero-based mode index
    :param params: SystemParams
    :param t: time for the instantaneous value, None for the Ω_0 prefactor
    :param spectrum: optional spectrum, defaults to the params spectrum

    :return: coupling rate (rad/s)
    """
    spectrum = spectrum or mode_spectrum(params)
    omegas = spectrum.as_array()
    rabi = (
        params.rabi_amplitude
        if t is None
        else drive_amplitude(t, params.rabi_amplitude, params.modulation_freqs)
    )
    prefactor = rabi**2 / (2.0 * params.detuning * (2.0 * params.qubit_occupation + 1.0))
    return float(
        prefactor * params.coupling[k] * params.coupling[l] / (omegas[k] * omegas[l])
    )


def coupling_matrix(
    params: SystemParams, spectrum: Optional[ModeSpectrum] = None
) -> CouplingMatrix:
    """
    Build the static coupling matrix over the spectrum.

    :param params: SystemParams
    :param spectrum: optional spectrum, defaults to the params spectrum

    :return: CouplingMatrix
    """
    spectrum = spectrum or mode_spectrum(params)
    omegas = spectrum.as_array()
    g = np.asarray(params.coupling, dtype=float)
    if g.size < omegas.size:
        g = np.resize(g, omegas.size)
    ratio = g[: omegas.size] / omegas
    prefactor = params.rabi_amplitude**2 / (
        2.0 * params.detuning * (2.0 * params.qubit_occupation + 1.0)
    )
    return CouplingMatrix(
        g_eff=prefactor * np.outer(ratio, ratio),
        rabi_amplitude=params.rabi_amplitude,
        modulation_freqs=params.modulation_freqs,
    )


def _drive_components(modulation_freqs: Sequence[float]) -> np.ndarray:
    """Frequencies of the e^{ift} components of Ω(t)²/Ω_0², each weighing 1/4."""
    components = []
    for w_i, w_j in product(modulation_freqs, repeat=2):
        components.extend((w_i + w_j, w_i - w_j, -(w_i + w_j), -(w_i - w_j)))
    return np.asarray(components, dtype=float)


def _active_modes(
    omegas: np.ndarray, modulation_freqs: Sequence[float], scheme: ModulationScheme, tol: float
) -> Tuple[int, ...]:
    tones = np.asarray(modulation_freqs, dtype=float)
    if ModulationScheme(scheme) is ModulationScheme.MODE_FREQUENCIES:
        hits = np.abs(omegas[:, None] - tones[None, :]) <= tol
        return tuple(int(k) for k in np.flatnonzero(hits.any(axis=1)))
    active = set()
    half_sums = 0.5 * (omegas[:, None] + omegas[None, :])
    for tone in tones:
        for k, l in zip(*np.nonzero(np.abs(half_sums - tone) <= tol)):
            active.update((int(k), int(l)))
    return tuple(sorted(active))


def build_adjacency(
    spectrum: ModeSpectrum,
    modulation_freqs: Sequence[float],
    scheme: ModulationScheme = ModulationScheme.MODE_FREQUENCIES,
    fsr: Optional[float] = None,
) -> AdjacencyMatrices:
    """
    Count the drive components resonant with each mode-pair interaction.

    Every ordered tone pair contributes components at ±(w_i+w_j) and
    ±(w_i-w_j) with weight 1/4. B^tms_{k,l} sums the weight resonant with
    ω_k+ω_l and B^qst_{k,l} the weight resonant with ω_k-ω_l.

    :param spectrum: spectrum of all modes the graphs span
    :param modulation_freqs: drive tones (rad/s)
    :param scheme: scheme the tones were chosen with (sets the active set)
    :param fsr: spacing the resonance tolerance scales with, defaults to ω_1

    :return: AdjacencyMatrices
    """
    if len(modulation_freqs) == 0:
        raise ValueError("modulation_freqs must not be empty")
    omegas = spectrum.as_array()
    tol = constants.RESONANCE_TOL * (fsr if fsr is not None else omegas[0])
    components = _drive_components(modulation_freqs)

    sums = omegas[:, None] + omegas[None, :]
    diffs = omegas[:, None] - omegas[None, :]
    tms = 0.25 * (np.abs(sums[..., None] - components) <= tol).sum(axis=-1)
    qst = 0.25 * (np.abs(diffs[..., None] - components) <= tol).sum(axis=-1)
    return AdjacencyMatrices(
        tms=tms.astype(float),
        qst=qst.astype(float),
        active_set=_active_modes(omegas, modulation_freqs, scheme, tol),
        scheme=ModulationScheme(scheme),
    )


def default_total_modes(active: Sequence[int]) -> int:
    """Graph size covering commensurate spill-over: 2× the largest target label + 1."""
    return 2 * (max(active) + 1) + 1


def interaction_strengths(
    adjacency: AdjacencyMatrices, coupling: CouplingMatrix
) -> np.ndarray:
    """
    Effective two-mode-squeezing strengths F = G ∘ B^tms.

    :param adjacency: AdjacencyMatrices
    :param coupling: CouplingMatrix on the same spectrum

    :return: matrix F (rad/s)
    """
    return coupling.g_eff * adjacency.tms


def rwa_hamiltonian(
    adjacency: AdjacencyMatrices,
    coupling: CouplingMatrix,
    include_self_transfer: bool = False,
) -> QuadraticForm:
    """
    Time-averaged interaction ½Σ G_{k,l}(t) x_k x_l in the frame rotating with the modes.

    In that frame x_k x_l averages to ½B^tms(x_k x_l - p_k p_l) +
    ½B^qst(x_k x_l + p_k p_l) per unit G. The form is returned after a
    quarter-period relabelling x' = -p, p' = x of every mode, where the
    mode-frequency drive of a non-commensurate spectrum leaves pure momentum
    couplings between distinct modes. The qst diagonal is the static
    frequency shift from the DC part of Ω(t)² and is left out unless
    requested; the tms diagonal is single-mode squeezing and always kept.

    :param adjacency: AdjacencyMatrices
    :param coupling: CouplingMatrix on the same spectrum
    :param include_self_transfer: keep the qst diagonal

    :return: QuadraticForm
    """
    if adjacency.n_modes != coupling.g_eff.shape[0]:
        raise ValueError("adjacency and coupling are built on different spectra")
    qst = adjacency.qst if include_self_transfer else adjacency.transfer_graph()
    g = coupling.g_eff
    xx = 0.5 * g * (qst - adjacency.tms)
    pp = 0.5 * g * (qst + adjacency.tms)
    n_modes = g.shape[0]
    h = np.zeros((2 * n_modes, 2 * n_modes))
    h[0::2, 0::2] = 0.5 * (xx + xx.T)
    h[1::2, 1::2] = 0.5 * (pp + pp.T)
    return QuadraticForm(h=h)
