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
"""Effective Gaussian model: drift, diffusion and covariance propagation."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm, solve_continuous_lyapunov
from scipy.special import xlogy

from vibent import constants
from vibent.errors import (
    EmptyTrajectoryError,
    LayoutMismatchError,
    ParameterError,
    PartitionError,
    PhysicalityError,
    StepSizeError,
    UnphysicalStateError,
)
from vibent.modulation import CouplingMatrix, QuadraticForm, coupling_matrix
from vibent.params import (
    ModeSpectrum,
    SystemParams,
    intrinsic_damping,
    mode_spectrum,
    thermal_occupation,
)
from vibent.tls import TlsEffectiveBath, effective_bath


_logger = logging.getLogger(__name__)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form ⊕[[0, 1], [-1, 0]] in (x_1, p_1, ...) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _mode_indices(modes: Sequence[int]) -> np.ndarray:
    return np.array([[2 * k, 2 * k + 1] for k in modes], dtype=int).ravel()


@dataclass(frozen=True)
class CovarianceMatrix:
    """Symmetric 2M×2M covariance matrix, vacuum = I/2."""

    v: np.ndarray

    def __post_init__(self) -> None:
        """Check shape and symmetrise."""
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
            raise LayoutMismatchError(f"covariance matrix has shape {v.shape}")
        scale = max(1.0, float(np.abs(v).max()))
        if np.abs(v - v.T).max() > constants.SYMMETRY_TOL * scale:
            raise UnphysicalStateError("covariance matrix is not symmetric")
        object.__setattr__(self, "v", 0.5 * (v + v.T))

    @property
    def n_modes(self) -> int:
        """Number of modes."""
        return self.v.shape[0] // 2

    @classmethod
    def vacuum(cls, n_modes: int) -> "CovarianceMatrix":
        """Vacuum state of ``n_modes`` modes."""
        return cls(0.5 * np.eye(2 * n_modes))

    @classmethod
    def thermal(cls, occupations: Sequence[float]) -> "CovarianceMatrix":
        """Product of thermal states with the given occupations."""
        diag = np.repeat(np.asarray(occupations, dtype=float) + 0.5, 2)
        return cls(np.diag(diag))

    @classmethod
    def two_mode_squeezed(cls, r: float) -> "CovarianceMatrix":
        """Two-mode squeezed vacuum with squeezing parameter ``r``."""
        c, s = np.cosh(2.0 * r), np.sinh(2.0 * r)
        return cls(
            0.5
            * np.array(
                [
                    [c, 0.0, s, 0.0],
                    [0.0, c, 0.0, -s],
                    [s, 0.0, c, 0.0],
                    [0.0, -s, 0.0, c],
                ]
            )
        )

    def reduce(self, modes: Sequence[int]) -> "CovarianceMatrix":
        """Reduced covariance matrix of the given modes (order preserved)."""
        modes = list(modes)
        if not modes or min(modes) < 0 or max(modes) >= self.n_modes:
            raise PartitionError(f"modes {modes} out of range for {self.n_modes} modes")
        idx = _mode_indices(modes)
        return CovarianceMatrix(self.v[np.ix_(idx, idx)])

    def direct_sum(self, other: "CovarianceMatrix") -> "CovarianceMatrix":
        """Block-diagonal composition with ``other``."""
        n = self.v.shape[0]
        m = other.v.shape[0]
        v = np.zeros((n + m, n + m))
        v[:n, :n] = self.v
        v[n:, n:] = other.v
        return CovarianceMatrix(v)

    def occupations(self) -> np.ndarray:
        """Mean phonon numbers (⟨x²⟩ + ⟨p²⟩)/2 - 1/2 per mode."""
        diag = np.diag(self.v)
        return 0.5 * (diag[0::2] + diag[1::2]) - 0.5

    def purity_determinant(self) -> float:
        """det(2V), 1 for pure states."""
        return float(np.linalg.det(2.0 * self.v))

    def min_symplectic_eigenvalue(self) -> float:
        """Smallest symplectic eigenvalue."""
        return float(symplectic_eigenvalues(self)[0])

    def is_physical(self, tol: float = constants.PHYSICAL_TOL) -> bool:
        """Check the uncertainty principle."""
        try:
            return self.min_symplectic_eigenvalue() >= 0.5 - tol
        except UnphysicalStateError:
            return False


@dataclass(frozen=True)
class CovarianceTrajectory:
    """Covariance snapshots at the sample times."""

    times: np.ndarray
    covariances: np.ndarray

    def __post_init__(self) -> None:
        """Reject empty trajectories."""
        if len(self.times) == 0:
            raise EmptyTrajectoryError("trajectory has no snapshots")

    def __len__(self) -> int:
        """Number of snapshots."""
        return len(self.times)

    def __iter__(self) -> Iterator[CovarianceMatrix]:
        """Iterate over the snapshots."""
        for v in self.covariances:
            yield CovarianceMatrix(v)

    def __getitem__(self, index: int) -> CovarianceMatrix:
        """Snapshot at ``index``."""
        return CovarianceMatrix(self.covariances[index])

    @property
    def final(self) -> CovarianceMatrix:
        """Last snapshot."""
        return self[-1]


def symplectic_eigenvalues(cov: CovarianceMatrix) -> np.ndarray:
    """
    Symplectic spectrum of a covariance matrix.

    Evaluated as the moduli of the eigenvalues of the Hermitian matrix
    i V^½ Ω V^½, which share the spectrum of iΩV.

    :param cov: CovarianceMatrix

    :return: M symplectic eigenvalues, ascending
    """
    eigenvalues, vectors = np.linalg.eigh(cov.v)
    if eigenvalues.min() <= 0:
        raise UnphysicalStateError(
            f"covariance matrix is not positive definite (λ_min={eigenvalues.min():.3e})"
        )
    root = (vectors * np.sqrt(eigenvalues)) @ vectors.T
    spectrum = np.linalg.eigvalsh(1j * root @ symplectic_form(cov.n_modes) @ root)
    return np.sort(np.abs(spectrum))[::2]


def gaussian_entropy(cov: CovarianceMatrix) -> float:
    """
    Von Neumann entropy of a Gaussian state (nats).

    :param cov: CovarianceMatrix

    :return: Σ_k (ν_k+½)ln(ν_k+½) - (ν_k-½)ln(ν_k-½)
    """
    nu = symplectic_eigenvalues(cov)
    upper = nu + 0.5
    lower = np.clip(nu - 0.5, 0.0, None)
    return float(np.sum(xlogy(upper, upper) - xlogy(lower, lower)))


def partial_transpose_cm(cov: CovarianceMatrix, party: Sequence[int]) -> CovarianceMatrix:
    """
    Partial transpose as the momentum flip p_k → -p_k of the party modes.

    :param cov: CovarianceMatrix
    :param party: zero-based modes transposed

    :return: CovarianceMatrix
    """
    party = sorted(set(party))
    if not party or len(party) >= cov.n_modes:
        raise PartitionError("party must be a non-empty proper subset of the modes")
    if min(party) < 0 or max(party) >= cov.n_modes:
        raise PartitionError(f"party {party} out of range for {cov.n_modes} modes")
    flip = np.ones(2 * cov.n_modes)
    flip[[2 * k + 1 for k in party]] = -1.0
    return CovarianceMatrix(flip[:, None] * cov.v * flip[None, :])


def drive_period(
    modulation_freqs: Sequence[float], max_denominator: int = 1000
) -> Optional[float]:
    """
    Common period of the drive tones, None when they are not commensurate.

    :param modulation_freqs: tones (rad/s)
    :param max_denominator: largest denominator of the tone ratios

    :return: period (s) or None
    """
    tones = [w for w in modulation_freqs if w > 0]
    if not tones:
        return None
    base = min(tones)
    ratios = []
    for w in tones:
        ratio = Fraction(w / base).limit_denominator(max_denominator)
        if abs(float(ratio) - w / base) > constants.RESONANCE_TOL * max(1.0, w / base):
            return None
        ratios.append(ratio)
    denominator = int(np.lcm.reduce([r.denominator for r in ratios]))
    numerators = [int(r * denominator) for r in ratios]
    common = int(np.gcd.reduce(numerators))
    # tones are base·n_i/denominator, their gcd is the fundamental
    fundamental = base * common / denominator
    return constants.TWO_PI / fundamental


def build_drift(
    t: float,
    params: SystemParams,
    coupling: CouplingMatrix,
    bath: TlsEffectiveBath,
    spectrum: Optional[ModeSpectrum] = None,
) -> np.ndarray:
    """
    Stable drift matrix Ā(t).

    Each 2×2 block is [[-κ/2, ω], [-ω - G_kk(t), -κ/2]]; off-diagonal blocks
    only hold -G_kl(t) in the p-row x-column.

    :param t: time (s)
    :param params: SystemParams
    :param coupling: CouplingMatrix on the same spectrum
    :param bath: TLS-induced bath on the same spectrum
    :param spectrum: optional spectrum, defaults to the params spectrum

    :return: 2M×2M drift
    """
    spectrum = spectrum or mode_spectrum(params)
    omegas = spectrum.as_array()
    kappa = np.asarray(intrinsic_damping(omegas, params.quality_factor)) + bath.damping()
    return _drift(omegas, kappa, coupling.at(t))


def _drift(omegas: np.ndarray, kappa: np.ndarray, g: np.ndarray) -> np.ndarray:
    n_modes = omegas.size
    a = np.diag(np.repeat(-0.5 * kappa, 2))
    a[0::2, 1::2] += np.diag(omegas)
    a[1::2, 0::2] -= np.diag(omegas) + g
    if n_modes != g.shape[0]:
        raise LayoutMismatchError("coupling matrix and spectrum differ in size")
    return a


def build_diffusion(
    params: SystemParams, bath: TlsEffectiveBath, spectrum: Optional[ModeSpectrum] = None
) -> np.ndarray:
    """
    Diagonal diffusion D_k = [γ_k(n̄_k + ½) + γ̃_k(ñ_k + ½)]·I₂.

    :param params: SystemParams
    :param bath: TLS-induced bath on the same spectrum
    :param spectrum: optional spectrum, defaults to the params spectrum

    :return: 2M×2M diffusion
    """
    spectrum = spectrum or mode_spectrum(params)
    omegas = spectrum.as_array()
    gamma = np.asarray(intrinsic_damping(omegas, params.quality_factor))
    n_bar = np.asarray(thermal_occupation(omegas, params.temperature))
    d = gamma * (n_bar + 0.5) + bath.damping() * (bath.occupancy() + 0.5)
    return np.diag(np.repeat(d, 2))


class GaussianModel:
    """
    Linear generator of the covariance dynamics.

    In the default mode the drift follows the full Ω(t)² modulation in the
    lab frame. Passing an RWA quadratic form gives a static drift in the
    frame rotating with the bare mode frequencies.
    """

    def __init__(  # pylint: disable=too-many-arguments
        self,
        spectrum: ModeSpectrum,
        kappa: np.ndarray,
        diffusion: np.ndarray,
        coupling: CouplingMatrix,
        rwa: Optional[QuadraticForm] = None,
    ) -> None:
        """
        Init the model.

        :param spectrum: ModeSpectrum
        :param kappa: total damping κ_k = γ_k + γ̃_k per mode
        :param diffusion: 2M×2M diffusion matrix
        :param coupling: CouplingMatrix on the same spectrum
        :param rwa: static RWA interaction, None for the full time dependence
        """
        self.spectrum = spectrum
        self.kappa = np.asarray(kappa, dtype=float)
        self.diffusion = np.asarray(diffusion, dtype=float)
        self.coupling = coupling
        self.rwa = rwa
        if np.any(self.kappa < 0):
            raise ParameterError("total damping must be non-negative")
        if self.diffusion.shape != (2 * spectrum.n_modes, 2 * spectrum.n_modes):
            raise LayoutMismatchError("diffusion matrix does not match the spectrum")
        if rwa is not None:
            self._static = symplectic_form(spectrum.n_modes) @ rwa.h - np.diag(
                np.repeat(0.5 * self.kappa, 2)
            )

    @classmethod
    def from_params(
        cls,
        params: SystemParams,
        spectrum: Optional[ModeSpectrum] = None,
        bath: Optional[TlsEffectiveBath] = None,
        rwa: Optional[QuadraticForm] = None,
    ) -> "GaussianModel":
        """
        Assemble the model from physical parameters.

        :param params: SystemParams
        :param spectrum: optional spectrum, defaults to the params spectrum
        :param bath: induced bath, evaluated from the TLS spectrum when None
        :param rwa: static RWA interaction

        :return: GaussianModel
        """
        spectrum = spectrum or mode_spectrum(params)
        bath = bath if bath is not None else effective_bath(params, spectrum)
        gamma = np.asarray(intrinsic_damping(spectrum.as_array(), params.quality_factor))
        return cls(
            spectrum=spectrum,
            kappa=gamma + bath.damping(),
            diffusion=build_diffusion(params, bath, spectrum),
            coupling=coupling_matrix(params, spectrum),
            rwa=rwa,
        )

    @property
    def n_modes(self) -> int:
        """Number of modes."""
        return self.spectrum.n_modes

    @property
    def is_static(self) -> bool:
        """Drift does not depend on time."""
        return self.rwa is not None

    @property
    def max_frequency(self) -> float:
        """Fastest frequency of Ā(t): max(ω_k, 2·max w_i)."""
        if self.is_static:
            return float(np.abs(np.linalg.eigvals(self._static)).max())
        tones = self.coupling.modulation_freqs
        return max(float(self.spectrum.as_array().max()), 2.0 * max(tones))

    def max_step(self) -> float:
        """Largest RK4 step allowed for this model."""
        fastest = self.max_frequency
        if fastest <= 0:
            return np.inf
        return constants.TWO_PI / fastest / constants.LYAPUNOV_STEPS_PER_PERIOD

    def drift(self, t: float) -> np.ndarray:
        """Ā(t)."""
        if self.is_static:
            return self._static
        return _drift(self.spectrum.as_array(), self.kappa, self.coupling.at(t))

    def rhs(self, t: float, v: np.ndarray) -> np.ndarray:
        """dV/dt = ĀV + VĀᵀ + D."""
        a = self.drift(t)
        av = a @ v
        return av + av.T + self.diffusion


def _rk4_segment(
    f: Callable[[float, np.ndarray], np.ndarray], y: np.ndarray, t0: float, t1: float, dt: float
) -> np.ndarray:
    n_steps = max(1, int(np.ceil((t1 - t0) / dt - 1e-9)))
    h = (t1 - t0) / n_steps
    t = t0
    for _ in range(n_steps):
        k1 = f(t, y)
        k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return y


def _check_step(model: GaussianModel, dt: Optional[float]) -> float:
    limit = model.max_step()
    if dt is None:
        return limit
    if not 0 < dt <= limit * (1.0 + 1e-12):
        raise StepSizeError(
            f"dt={dt:.3e}s exceeds the resolution limit {limit:.3e}s of the drift"
        )
    return dt


def _check_physical(v: np.ndarray, t: float, tol: float) -> None:
    try:
        nu_min = float(symplectic_eigenvalues(CovarianceMatrix(v))[0])
    except UnphysicalStateError as e:
        raise PhysicalityError(f"covariance lost positivity at t={t:.4e}s", time=t) from e
    if nu_min < 0.5 - tol:
        raise PhysicalityError(
            f"min symplectic eigenvalue {nu_min:.6f} < 1/2 at t={t:.4e}s",
            time=t,
            min_symplectic_eigenvalue=nu_min,
        )


def integrate_lyapunov(  # pylint: disable=too-many-arguments
    v0: CovarianceMatrix,
    model: GaussianModel,
    t_end: float,
    dt: Optional[float] = None,
    n_snapshots: int = constants.DEFAULT_SNAPSHOTS,
    sample_times: Optional[Sequence[float]] = None,
    check_physical: bool = True,
) -> CovarianceTrajectory:
    """
    Integrate dV/dt = ĀV + VĀᵀ + D with fixed-step RK4.

    Steps are shortened inside each interval so that every sample time is hit
    exactly.

    :param v0: initial CovarianceMatrix
    :param model: GaussianModel
    :param t_end: final time (s)
    :param dt: step (s), defaults to the largest allowed step
    :param n_snapshots: number of evenly spaced samples after t = 0
    :param sample_times: explicit sample times, overriding ``n_snapshots``
    :param check_physical: abort when a sample violates the uncertainty principle

    :return: CovarianceTrajectory, including t = 0
    """
    if v0.n_modes != model.n_modes:
        raise LayoutMismatchError("initial state and model differ in mode count")
    step = _check_step(model, dt)
    if sample_times is None:
        if t_end <= 0 or n_snapshots < 1:
            raise ParameterError("t_end and n_snapshots must be positive")
        times = np.linspace(0.0, t_end, n_snapshots + 1)
    else:
        times = np.concatenate(([0.0], np.asarray(sample_times, dtype=float)))
        if np.any(np.diff(times) <= 0):
            raise ParameterError("sample times must be positive and increasing")

    v = v0.v.copy()
    snapshots = [v]
    for t0, t1 in zip(times[:-1], times[1:]):
        v = _rk4_segment(model.rhs, v, t0, t1, step)
        v = 0.5 * (v + v.T)
        if check_physical:
            _check_physical(v, t1, constants.LYAPUNOV_PHYSICAL_TOL)
        snapshots.append(v)
    _logger.debug("integrated %d modes to t=%.4e over %d samples", model.n_modes, times[-1], len(times))
    return CovarianceTrajectory(times, np.asarray(snapshots))


def one_period_map(
    model: GaussianModel, period: float, dt: Optional[float] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stroboscopic map V ↦ ΦVΦᵀ + Q over one period.

    Static models use the exact Van Loan exponential, driven models
    integrate Φ and Q together with RK4.

    :param model: GaussianModel
    :param period: drive period or sampling interval (s)
    :param dt: RK4 step (s), defaults to the largest allowed step

    :return: (Φ, Q)
    """
    size = 2 * model.n_modes
    if model.is_static:
        a = model.drift(0.0)
        block = np.zeros((2 * size, 2 * size))
        block[:size, :size] = -a
        block[:size, size:] = model.diffusion
        block[size:, size:] = a.T
        exp = expm(block * period)
        phi = exp[size:, size:].T
        q = phi @ exp[:size, size:]
        return phi, 0.5 * (q + q.T)

    step = _check_step(model, dt)

    def f(t: float, y: np.ndarray) -> np.ndarray:
        a = model.drift(t)
        phi, q = y[:size], y[size:]
        aq = a @ q
        return np.concatenate((a @ phi, aq + aq.T + model.diffusion))

    y = _rk4_segment(f, np.concatenate((np.eye(size), np.zeros((size, size)))), 0.0, period, step)
    q = y[size:]
    return y[:size], 0.5 * (q + q.T)


def propagate_periodic(  # pylint: disable=too-many-arguments
    v0: CovarianceMatrix,
    model: GaussianModel,
    period: float,
    n_periods: int,
    dt: Optional[float] = None,
    stride: int = 1,
    check_physical: bool = True,
) -> CovarianceTrajectory:
    """
    Propagate a periodically driven model stroboscopically.

    :param v0: initial CovarianceMatrix
    :param model: GaussianModel with drift periodic in ``period``
    :param period: drive period (s)
    :param n_periods: number of periods
    :param dt: RK4 step used for the one-period map
    :param stride: record every ``stride`` periods
    :param check_physical: abort when a sample violates the uncertainty principle

    :return: CovarianceTrajectory at multiples of the period
    """
    if n_periods < 1 or stride < 1:
        raise ParameterError("n_periods and stride must be positive")
    if v0.n_modes != model.n_modes:
        raise LayoutMismatchError("initial state and model differ in mode count")
    phi, q = one_period_map(model, period, dt)
    v = v0.v.copy()
    times, snapshots = [0.0], [v]
    for n in range(1, n_periods + 1):
        v = phi @ v @ phi.T + q
        v = 0.5 * (v + v.T)
        if n % stride == 0 or n == n_periods:
            if check_physical:
                _check_physical(v, n * period, constants.LYAPUNOV_PHYSICAL_TOL)
            times.append(n * period)
            snapshots.append(v)
    return CovarianceTrajectory(np.asarray(times), np.asarray(snapshots))


def steady_state_covariance(model: GaussianModel) -> CovarianceMatrix:
    """
    Stationary covariance of a static model, solving ĀV + VĀᵀ = -D.

    :param model: GaussianModel with a static drift

    :return: CovarianceMatrix
    """
    if not model.is_static:
        raise ParameterError("steady state needs a static (RWA) model")
    a = model.drift(0.0)
    if np.linalg.eigvals(a).real.max() >= 0:
        raise UnphysicalStateError("drift is not stable, no steady state exists")
    return CovarianceMatrix(solve_continuous_lyapunov(a, -model.diffusion))
