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
"""Driven-dissipative two-level system: mean field, spectrum and induced bath."""
import logging
import warnings
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import root

from vibent import constants
from vibent.errors import (
    NonPositiveDampingError,
    ParameterError,
    ResolventStabilityWarning,
    SingularResolventError,
    StepSizeError,
    ToleranceError,
    UnphysicalStateError,
)
from vibent.modulation import drive_amplitude
from vibent.params import DephasingConvention, ModeSpectrum, SystemParams, mode_spectrum


_logger = logging.getLogger(__name__)

BLOCH_TOL = 1e-9


@dataclass(frozen=True)
class TlsState:
    """Mean-field qubit state ⟨σ+⟩, ⟨σz⟩."""

    sigma_plus: complex
    sigma_z: float

    @property
    def sigma_minus(self) -> complex:
        """⟨σ-⟩, the conjugate of ⟨σ+⟩."""
        return complex(np.conj(self.sigma_plus))

    @property
    def bloch_norm(self) -> float:
        """Squared Bloch vector length 4|⟨σ+⟩|² + ⟨σz⟩²."""
        return 4.0 * abs(self.sigma_plus) ** 2 + self.sigma_z**2

    def is_physical(self, tol: float = BLOCH_TOL) -> bool:
        """Check the state lies inside the Bloch ball."""
        return self.bloch_norm <= 1.0 + tol

    @classmethod
    def ground(cls) -> "TlsState":
        """Undriven zero-temperature state."""
        return cls(sigma_plus=0j, sigma_z=-1.0)


@dataclass(frozen=True)
class TlsTrajectory:
    """Sampled mean-field trajectory."""

    times: np.ndarray
    sigma_plus: np.ndarray
    sigma_z: np.ndarray

    def __len__(self) -> int:
        """Number of samples."""
        return len(self.times)

    def __iter__(self) -> Iterator[TlsState]:
        """Iterate over the sampled states."""
        for sp, sz in zip(self.sigma_plus, self.sigma_z):
            yield TlsState(complex(sp), float(sz))

    @property
    def final(self) -> TlsState:
        """Last sampled state."""
        return TlsState(complex(self.sigma_plus[-1]), float(self.sigma_z[-1]))


@dataclass(frozen=True)
class TlsEffectiveBath:
    """TLS-induced damping γ̃_k (rad/s) and occupancy ñ_k per mode."""

    induced_damping: Tuple[float, ...]
    induced_occupancy: Tuple[float, ...]

    def damping(self) -> np.ndarray:
        """Induced damping as an array."""
        return np.asarray(self.induced_damping, dtype=float)

    def occupancy(self) -> np.ndarray:
        """Induced occupancy as an array."""
        return np.asarray(self.induced_occupancy, dtype=float)

    @classmethod
    def empty(cls, n_modes: int) -> "TlsEffectiveBath":
        """Bath that adds nothing."""
        return cls((0.0,) * n_modes, (0.0,) * n_modes)


def _occupation_factor(n_thermal: float) -> float:
    return 2.0 * n_thermal + 1.0


def _closed_form(
    detuning: float, rabi: float, decay: float, n_thermal: float, mean_p: float
) -> TlsState:
    big_n = _occupation_factor(n_thermal)
    denom = decay**2 * big_n**2 + 4.0 * detuning**2
    sigma_z = -denom / (big_n * (denom + 2.0 * rabi**2))
    c = -1j * rabi / (decay * big_n - 2j * detuning)
    return TlsState(complex(c * sigma_z * np.exp(1j * mean_p)), float(sigma_z))


def steady_state(  # pylint: disable=too-many-arguments
    detuning: float,
    rabi: float,
    decay: float,
    n_thermal: float,
    mean_p: float = 0.0,
    dephasing: float = 0.0,
) -> TlsState:
    """
    Mean-field fixed point of the driven qubit.

    Without dephasing the closed form is returned. With Γ̃ > 0 the fixed point
    is solved numerically starting from the closed form.

    :param detuning: Δ (rad/s)
    :param rabi: Ω (rad/s)
    :param decay: Γ (rad/s)
    :param n_thermal: qubit thermal occupation n̄_q
    :param mean_p: mean polaron phase ⟨P⟩
    :param dephasing: Γ̃ (rad/s)

    :return: TlsState
    """
    if not decay > 0:
        raise ParameterError("qubit decay must be positive")
    guess = _closed_form(detuning, rabi, decay, n_thermal, mean_p)
    if dephasing <= 0:
        return guess

    def residual(y: np.ndarray) -> np.ndarray:
        d_plus, d_z = _rhs(complex(y[0], y[1]), y[2], detuning, rabi, decay, n_thermal, mean_p, dephasing)
        return np.array([d_plus.real, d_plus.imag, d_z]) / decay

    solution = root(
        residual,
        np.array([guess.sigma_plus.real, guess.sigma_plus.imag, guess.sigma_z]),
        method="hybr",
        tol=1e-14,
    )
    if not solution.success:
        raise ToleranceError(f"steady state did not converge: {solution.message}")
    y = solution.x
    return TlsState(complex(y[0], y[1]), float(y[2]))


def _rhs(  # pylint: disable=too-many-arguments
    sigma_plus: complex,
    sigma_z: float,
    detuning: float,
    rabi: float,
    decay: float,
    n_thermal: float,
    mean_p: float,
    dephasing: float,
) -> Tuple[complex, float]:
    big_n = _occupation_factor(n_thermal)
    coherence_decay = 0.5 * decay * big_n + 2.0 * dephasing
    phase = np.exp(1j * mean_p)
    d_plus = -(coherence_decay - 1j * detuning) * sigma_plus - 0.5j * rabi * phase * sigma_z
    d_z = -decay * (1.0 + big_n * sigma_z) - 1j * rabi * (
        sigma_plus * np.conj(phase) - np.conj(sigma_plus) * phase
    )
    return complex(d_plus), float(np.real(d_z))


def mean_field_rhs(
    state: TlsState, rabi: float, params: SystemParams, mean_p: float = 0.0
) -> Tuple[complex, float]:
    """
    Right-hand side of the mean-field equations.

    :param state: current TlsState
    :param rabi: instantaneous Rabi frequency Ω (rad/s)
    :param params: SystemParams
    :param mean_p: mean polaron phase ⟨P⟩

    :return: (d⟨σ+⟩/dt, d⟨σz⟩/dt)
    """
    return _rhs(
        state.sigma_plus,
        state.sigma_z,
        params.detuning,
        rabi,
        params.qubit_decay,
        params.qubit_occupation,
        mean_p,
        params.qubit_dephasing,
    )


def max_step(params: SystemParams, modulated: bool = True) -> float:
    """Largest RK4 step resolving Δ, the peak drive and Γ."""
    peak_rabi = params.rabi_amplitude * (len(params.modulation_freqs) if modulated else 1)
    fastest = max(abs(params.detuning), peak_rabi, params.qubit_decay)
    return constants.MEAN_FIELD_STEP_FRACTION * constants.TWO_PI / fastest


def mean_field_evolve(  # pylint: disable=too-many-arguments,too-many-locals
    initial: TlsState,
    params: SystemParams,
    mean_p: float,
    t_end: float,
    dt: float,
    modulated: bool = True,
    record_every: int = 1,
) -> TlsTrajectory:
    """
    Integrate the mean-field equations with fixed-step RK4.

    :param initial: starting TlsState
    :param params: SystemParams
    :param mean_p: mean polaron phase, held fixed
    :param t_end: final time (s)
    :param dt: requested step (s); shortened so the steps tile [0, t_end]
    :param modulated: follow the multi-tone Ω(t), otherwise hold Ω_0
    :param record_every: store every n-th step

    :return: TlsTrajectory
    """
    limit = max_step(params, modulated)
    if not 0 < dt <= limit * (1.0 + 1e-12):
        raise StepSizeError(f"dt={dt:.3e}s does not resolve the qubit dynamics (max {limit:.3e}s)")
    if t_end <= 0:
        raise ParameterError("t_end must be positive")
    n_steps = int(np.ceil(t_end / dt - 1e-9))
    h = t_end / n_steps

    def rabi_at(t: float) -> float:
        if modulated:
            return float(drive_amplitude(t, params.rabi_amplitude, params.modulation_freqs))
        return params.rabi_amplitude

    def f(t: float, y: np.ndarray) -> np.ndarray:
        d_plus, d_z = mean_field_rhs(TlsState(complex(y[0]), float(y[1].real)), rabi_at(t), params, mean_p)
        return np.array([d_plus, d_z], dtype=complex)

    y = np.array([initial.sigma_plus, initial.sigma_z], dtype=complex)
    times, plus, zs = [0.0], [y[0]], [y[1].real]
    for step in range(1, n_steps + 1):
        t = (step - 1) * h
        k1 = f(t, y)
        k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        y[1] = y[1].real
        state = TlsState(complex(y[0]), float(y[1].real))
        if not state.is_physical(1e-6):
            raise UnphysicalStateError(
                f"mean field left the Bloch ball at t={step * h:.4e}s (|r|²={state.bloch_norm:.8f})"
            )
        if step % record_every == 0 or step == n_steps:
            times.append(step * h)
            plus.append(y[0])
            zs.append(y[1].real)
    return TlsTrajectory(np.asarray(times), np.asarray(plus), np.asarray(zs, dtype=float))


def params_steady_state(params: SystemParams, mean_p: float = 0.0) -> TlsState:
    """Steady state under the static drive Ω_0."""
    return steady_state(
        params.detuning,
        params.rabi_amplitude,
        params.qubit_decay,
        params.qubit_occupation,
        mean_p,
        params.qubit_dephasing,
    )


def resolvent_matrix(params: SystemParams) -> np.ndarray:
    """
    Linear generator of the fluctuation vector (δσ+, δσ-, δσz).

    :param params: SystemParams

    :return: 3x3 complex matrix M
    """
    big_n = _occupation_factor(params.qubit_occupation)
    sign = 1.0 if params.dephasing_convention is DephasingConvention.PRINTED else -1.0
    diagonal = -0.5 * params.qubit_decay * big_n + sign * params.qubit_dephasing
    rabi = params.rabi_amplitude
    return np.array(
        [
            [diagonal + 1j * params.detuning, 0.0, -0.5j * rabi],
            [0.0, diagonal - 1j * params.detuning, 0.5j * rabi],
            [-1j * rabi, 1j * rabi, -params.qubit_decay * big_n],
        ],
        dtype=complex,
    )


def fluctuation_vector(state: TlsState) -> np.ndarray:
    """Equal-time correlations ⟨δσ_i δσz⟩ seeding the regression."""
    return np.array(
        [
            -state.sigma_plus * (1.0 + state.sigma_z),
            state.sigma_minus * (1.0 - state.sigma_z),
            1.0 - state.sigma_z**2,
        ],
        dtype=complex,
    )


def _check_stability(matrix: np.ndarray) -> np.ndarray:
    eigenvalues = np.linalg.eigvals(matrix)
    if np.any(eigenvalues.real >= 0):
        warnings.warn(
            f"Resolvent matrix is not stable: max Re λ = {eigenvalues.real.max():.4g}",
            ResolventStabilityWarning,
            stacklevel=3,
        )
    return eigenvalues


def _resolvent_scale(params: SystemParams) -> float:
    return max(
        params.qubit_decay * _occupation_factor(params.qubit_occupation),
        abs(params.detuning),
        params.rabi_amplitude,
    )


def fluctuation_spectrum(
    omega: Union[float, np.ndarray], params: SystemParams
) -> Union[float, np.ndarray]:
    """
    Steady-state σz fluctuation spectrum S(ω) = ½ Re[(sI - M)⁻¹ v]_z at s = -iω.

    :param omega: frequency (rad/s), scalar or array
    :param params: SystemParams

    :return: S(ω) (s)
    """
    matrix = resolvent_matrix(params)
    _check_stability(matrix)
    vector = fluctuation_vector(params_steady_state(params))
    scale = max(_resolvent_scale(params), float(np.max(np.abs(omega))))
    identity = np.eye(3)

    values = []
    for w in np.atleast_1d(np.asarray(omega, dtype=float)):
        system = -1j * w * identity - matrix
        if abs(np.linalg.det(system)) < constants.RESOLVENT_DET_TOL * scale**3:
            raise SingularResolventError(f"resolvent is singular at ω={w:.6e} rad/s")
        values.append(0.5 * np.linalg.solve(system, vector)[2].real)
    if np.ndim(omega) == 0:
        return float(values[0])
    return np.asarray(values)


def regression_spectrum(
    omega: Union[float, np.ndarray],
    params: SystemParams,
    rtol: float = 1e-10,
) -> Union[float, np.ndarray]:
    """
    Fluctuation spectrum from the time-domain regression of ⟨δσz(s)δσz(0)⟩.

    The correlator is integrated from the steady state with ``solve_ivp`` up to
    s_max = 20/Γ_eff, Γ_eff being the slowest decay rate of the generator.

    :param omega: frequency (rad/s), scalar or array
    :param params: SystemParams
    :param rtol: relative tolerance of the integrator

    :return: S(ω) (s)
    """
    matrix = resolvent_matrix(params)
    eigenvalues = _check_stability(matrix)
    slowest = -eigenvalues.real.max()
    if slowest <= 0:
        raise ToleranceError("correlations do not decay, regression integral diverges")
    s_max = constants.REGRESSION_DECAY_WINDOWS / slowest
    vector = fluctuation_vector(params_steady_state(params))
    atol = rtol * float(np.abs(vector).max() or 1.0) / slowest

    values = []
    for w in np.atleast_1d(np.asarray(omega, dtype=float)):

        def rhs(s: float, y: np.ndarray, w: float = w) -> np.ndarray:
            x = y[:3]
            return np.concatenate((matrix @ x, [np.exp(1j * w * s) * x[2]]))

        solution = solve_ivp(
            rhs,
            (0.0, s_max),
            np.concatenate((vector, [0.0])).astype(complex),
            method="DOP853",
            rtol=rtol,
            atol=atol,
        )
        if not solution.success:
            raise ToleranceError(f"regression integration failed: {solution.message}")
        values.append(0.5 * solution.y[3, -1].real)
    if np.ndim(omega) == 0:
        return float(values[0])
    return np.asarray(values)


def effective_bath(
    params: SystemParams, spectrum: Optional[ModeSpectrum] = None
) -> TlsEffectiveBath:
    """
    TLS-induced damping and occupancy of every mode.

    γ̃_k = g_k²[S(ω_k) - S(-ω_k)] and ñ_k = S(-ω_k)/[S(ω_k) - S(-ω_k)]. When
    both spectrum values vanish the mode gets no induced bath.

    :param params: SystemParams
    :param spectrum: optional spectrum, defaults to the params spectrum

    :return: TlsEffectiveBath
    """
    spectrum = spectrum or mode_spectrum(params)
    omegas = spectrum.as_array()
    couplings = np.resize(np.asarray(params.coupling, dtype=float), omegas.size)
    s_plus = np.atleast_1d(fluctuation_spectrum(omegas, params))
    s_minus = np.atleast_1d(fluctuation_spectrum(-omegas, params))
    floor = constants.SPECTRUM_TOL / params.qubit_decay

    damping, occupancy = [], []
    for k, (g, sp, sm) in enumerate(zip(couplings, s_plus, s_minus)):
        if abs(sp) < floor and abs(sm) < floor:
            damping.append(0.0)
            occupancy.append(0.0)
            continue
        diff = sp - sm
        if g == 0:
            damping.append(0.0)
            occupancy.append(float(sm / diff) if diff > 0 else 0.0)
            continue
        if diff <= 0:
            raise NonPositiveDampingError(
                f"S(ω)={sp:.4e} <= S(-ω)={sm:.4e} for mode {k + 1}", mode=k
            )
        damping.append(float(g**2 * diff))
        occupancy.append(float(sm / diff))
    _logger.debug("induced damping %s, occupancy %s", damping, occupancy)
    return TlsEffectiveBath(tuple(damping), tuple(occupancy))
