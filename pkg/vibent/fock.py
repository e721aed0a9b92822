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
"""Exact model: truncated Fock space, Lindblad generator and evolution."""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import qutip as qt
from scipy import sparse
from scipy.integrate import solve_ivp

from vibent import constants
from vibent.errors import (
    LayoutMismatchError,
    MemoryCeilingError,
    ParameterError,
    PartitionError,
    ToleranceError,
    UnphysicalStateError,
)
from vibent.gaussian import CovarianceMatrix
from vibent.modulation import drive_amplitude
from vibent.params import (
    SystemParams,
    intrinsic_damping,
    mode_spectrum,
    thermal_occupation,
)


_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HilbertLayout:
    """Factor dimensions, TLS first when present."""

    dims: Tuple[int, ...]
    has_tls: bool = True
    max_dim: int = constants.MAX_HILBERT_DIM

    def __post_init__(self) -> None:
        """Validate the factors against the memory ceiling."""
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ParameterError(f"invalid dimensions {self.dims}")
        if self.has_tls and dims[0] != 2:
            raise ParameterError("the TLS factor must have dimension 2")
        object.__setattr__(self, "dims", dims)
        if self.dimension > self.max_dim:
            raise MemoryCeilingError(
                f"Hilbert space dimension {self.dimension} exceeds {self.max_dim}",
                dimension=self.dimension,
            )

    @property
    def dimension(self) -> int:
        """Total dimension."""
        return int(np.prod(self.dims))

    @property
    def n_modes(self) -> int:
        """Number of mechanical modes."""
        return len(self.dims) - int(self.has_tls)

    @property
    def mode_dims(self) -> Tuple[int, ...]:
        """Fock truncations of the modes."""
        return self.dims[int(self.has_tls):]

    def mode_factor(self, mode: int) -> int:
        """Factor index of a zero-based mode."""
        if not 0 <= mode < self.n_modes:
            raise LayoutMismatchError(f"mode {mode} not in layout {self.dims}")
        return mode + int(self.has_tls)

    def modes_only(self) -> "HilbertLayout":
        """Layout after tracing out the TLS."""
        return HilbertLayout(self.mode_dims, has_tls=False, max_dim=self.max_dim)

    def qobj_dims(self) -> List[List[int]]:
        """Dims in the qutip operator convention."""
        return [list(self.dims), list(self.dims)]


@dataclass(frozen=True)
class DensityMatrix:
    """Density matrix on a layout."""

    rho: np.ndarray
    layout: HilbertLayout

    def __post_init__(self) -> None:
        """Check the shape."""
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (self.layout.dimension, self.layout.dimension):
            raise LayoutMismatchError(
                f"density matrix of shape {rho.shape} on layout {self.layout.dims}"
            )
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_qobj(cls, state: qt.Qobj, layout: HilbertLayout) -> "DensityMatrix":
        """Wrap a ket or density Qobj."""
        if state.isket:
            state = qt.ket2dm(state)
        return cls(state.full(), layout)

    def to_qobj(self) -> qt.Qobj:
        """Density matrix as a qutip Qobj."""
        return qt.Qobj(self.rho, dims=self.layout.qobj_dims())

    @property
    def trace(self) -> float:
        """Real part of the trace."""
        return float(np.trace(self.rho).real)

    def normalized(self) -> "DensityMatrix":
        """Hermitian part with unit trace."""
        rho = 0.5 * (self.rho + self.rho.conj().T)
        return DensityMatrix(rho / np.trace(rho).real, self.layout)

    def validate(self) -> None:
        """Raise when the matrix is not a physical state."""
        scale = max(1.0, float(np.abs(self.rho).max()))
        if np.abs(self.rho - self.rho.conj().T).max() > constants.HERMITIAN_TOL * scale:
            raise UnphysicalStateError("density matrix is not Hermitian")
        if abs(self.trace - 1.0) > constants.TRACE_TOL:
            raise UnphysicalStateError(f"density matrix trace {self.trace:.12f} != 1")
        lowest = float(np.linalg.eigvalsh(self.rho).min())
        if lowest < -constants.PHYSICAL_TOL:
            raise UnphysicalStateError(f"density matrix has eigenvalue {lowest:.3e}")


@dataclass(frozen=True)
class FockOperators:  # pylint: disable=too-many-instance-attributes
    """Operators lifted onto the full layout."""

    layout: HilbertLayout
    identity: qt.Qobj
    sigma_x: Optional[qt.Qobj]
    sigma_z: Optional[qt.Qobj]
    sigma_plus: Optional[qt.Qobj]
    sigma_minus: Optional[qt.Qobj]
    annihilators: List[qt.Qobj] = field(default_factory=list)

    @property
    def creators(self) -> List[qt.Qobj]:
        """b_k†."""
        return [b.dag() for b in self.annihilators]

    def number(self, mode: int) -> qt.Qobj:
        """b_k†b_k."""
        b = self.annihilators[mode]
        return b.dag() * b

    def position(self, mode: int) -> qt.Qobj:
        """x_k = (b_k + b_k†)/√2."""
        b = self.annihilators[mode]
        return (b + b.dag()) / np.sqrt(2.0)

    def momentum(self, mode: int) -> qt.Qobj:
        """p_k = -i(b_k - b_k†)/√2."""
        b = self.annihilators[mode]
        return -1j * (b - b.dag()) / np.sqrt(2.0)

    def quadratures(self) -> List[qt.Qobj]:
        """(x_1, p_1, ..., x_M, p_M)."""
        ops = []
        for mode in range(self.layout.n_modes):
            ops.extend((self.position(mode), self.momentum(mode)))
        return ops


def _lift(layout: HilbertLayout, factor: int, op: qt.Qobj) -> qt.Qobj:
    factors = [qt.qeye(d) for d in layout.dims]
    factors[factor] = op
    return qt.tensor(factors)


def build_operators(layout: HilbertLayout) -> FockOperators:
    """
    Lift the TLS and mode operators onto the full space.

    The TLS basis has the excited state first, so σz = diag(1, -1).

    :param layout: HilbertLayout

    :return: FockOperators
    """
    tls_ops: List[Optional[qt.Qobj]] = [None] * 4
    if layout.has_tls:
        tls_ops = [
            _lift(layout, 0, op)
            for op in (qt.sigmax(), qt.sigmaz(), qt.sigmap(), qt.sigmam())
        ]
    return FockOperators(
        layout=layout,
        identity=qt.tensor([qt.qeye(d) for d in layout.dims]),
        sigma_x=tls_ops[0],
        sigma_z=tls_ops[1],
        sigma_plus=tls_ops[2],
        sigma_minus=tls_ops[3],
        annihilators=[
            _lift(layout, layout.mode_factor(k), qt.destroy(d))
            for k, d in enumerate(layout.mode_dims)
        ],
    )


def _mode_parameters(
    params: SystemParams, layout: HilbertLayout
) -> Tuple[np.ndarray, np.ndarray]:
    if layout.n_modes > params.n_modes:
        raise LayoutMismatchError(
            f"layout has {layout.n_modes} modes, parameters describe {params.n_modes}"
        )
    omegas = mode_spectrum(params).as_array()[: layout.n_modes]
    couplings = np.asarray(params.coupling[: layout.n_modes], dtype=float)
    return omegas, couplings


def _static_hamiltonian(params: SystemParams, layout: HilbertLayout, ops: FockOperators) -> qt.Qobj:
    omegas, couplings = _mode_parameters(params, layout)
    h = 0 * ops.identity
    if layout.has_tls:
        h += 0.5 * params.detuning * ops.sigma_z
    for k, b in enumerate(ops.annihilators):
        h += omegas[k] * b.dag() * b
        if layout.has_tls:
            h += 0.5 * couplings[k] * ops.sigma_z * (b + b.dag())
    return h


def build_hamiltonian(t: float, params: SystemParams, layout: HilbertLayout) -> qt.Qobj:
    """
    H = ½(Δσz + Ω(t)σx) + Σ_k [ω_k b_k†b_k + ½g_k σz(b_k + b_k†)].

    :param t: time (s)
    :param params: SystemParams
    :param layout: HilbertLayout

    :return: Hamiltonian Qobj (rad/s)
    """
    ops = build_operators(layout)
    h = _static_hamiltonian(params, layout, ops)
    if layout.has_tls:
        rabi = drive_amplitude(t, params.rabi_amplitude, params.modulation_freqs)
        h += 0.5 * rabi * ops.sigma_x
    return h


def collapse_operators(params: SystemParams, layout: HilbertLayout, ops: Optional[FockOperators] = None) -> List[qt.Qobj]:
    """
    Collapse operators √rate·o for the thermal TLS and mode baths.

    Rates are Γ(n̄_q+1) on σ-, Γn̄_q on σ+, Γ̃ on σz, γ_k(n̄_k+1) on b_k
    and γ_k n̄_k on b_k†; zero rates are skipped.

    :param params: SystemParams
    :param layout: HilbertLayout
    :param ops: prebuilt operators

    :return: list of Qobj
    """
    ops = ops or build_operators(layout)
    terms = []
    if layout.has_tls:
        n_q = params.qubit_occupation
        terms.extend(
            (
                (params.qubit_decay * (n_q + 1.0), ops.sigma_minus),
                (params.qubit_decay * n_q, ops.sigma_plus),
                (params.qubit_dephasing, ops.sigma_z),
            )
        )
    omegas, _ = _mode_parameters(params, layout)
    gammas = np.atleast_1d(intrinsic_damping(omegas, params.quality_factor))
    n_bar = np.atleast_1d(thermal_occupation(omegas, params.temperature))
    for k, b in enumerate(ops.annihilators):
        terms.extend(((gammas[k] * (n_bar[k] + 1.0), b), (gammas[k] * n_bar[k], b.dag())))
    return [np.sqrt(rate) * op for rate, op in terms if rate > 0]


def _csr(superop: qt.Qobj) -> sparse.csr_matrix:
    return sparse.csr_matrix(superop.data_as())


class LindbladGenerator:
    """
    Time-dependent Liouvillian L(t) = L_0 + Ω(t)·L_drive.

    Acts on column-stacked density matrices, the qutip vectorization.
    """

    def __init__(
        self, params: SystemParams, layout: HilbertLayout, dissipative: bool = True
    ) -> None:
        """
        Init the generator.

        :param params: SystemParams
        :param layout: HilbertLayout
        :param dissipative: include the collapse operators
        """
        self.params = params
        self.layout = layout
        self.operators = build_operators(layout)
        self.hamiltonian_0 = _static_hamiltonian(params, layout, self.operators)
        c_ops = collapse_operators(params, layout, self.operators) if dissipative else []
        self._static = _csr(qt.liouvillian(self.hamiltonian_0, c_ops))
        self._drive: Optional[sparse.csr_matrix] = None
        if layout.has_tls:
            self._drive = _csr(qt.liouvillian(0.5 * self.operators.sigma_x))
        _logger.debug(
            "Liouvillian on dims %s: %d non-zeros", layout.dims, self._static.nnz
        )

    def rabi(self, t: float) -> float:
        """Ω(t)."""
        return float(
            drive_amplitude(t, self.params.rabi_amplitude, self.params.modulation_freqs)
        )

    def hamiltonian(self, t: float) -> qt.Qobj:
        """H(t)."""
        if not self.layout.has_tls:
            return self.hamiltonian_0
        return self.hamiltonian_0 + 0.5 * self.rabi(t) * self.operators.sigma_x

    def apply(self, t: float, vec: np.ndarray) -> np.ndarray:
        """L(t) acting on a column-stacked density matrix."""
        out = self._static @ vec
        if self._drive is not None:
            out += self.rabi(t) * (self._drive @ vec)
        return out

    def __call__(self, t: float, rho: np.ndarray) -> np.ndarray:
        """dρ/dt as a matrix."""
        dim = self.layout.dimension
        vec = np.asarray(rho, dtype=complex).ravel(order="F")
        return self.apply(t, vec).reshape((dim, dim), order="F")


@lru_cache(maxsize=8)
def _cached_generator(params: SystemParams, layout: HilbertLayout) -> LindbladGenerator:
    return LindbladGenerator(params, layout)


def lindblad_rhs(rho: DensityMatrix, t: float, params: SystemParams) -> np.ndarray:
    """
    Right-hand side of the master equation.

    :param rho: DensityMatrix
    :param t: time (s)
    :param params: SystemParams

    :return: dρ/dt
    """
    return _cached_generator(params, rho.layout)(t, rho.rho)


def ground_state(layout: HilbertLayout) -> DensityMatrix:
    """TLS ground state ⊗ mode vacua."""
    factors = [qt.basis(d, 0) for d in layout.dims]
    if layout.has_tls:
        factors[0] = qt.basis(2, 1)
    return DensityMatrix.from_qobj(qt.tensor(factors), layout)


@dataclass(frozen=True)
class DensityTrajectory:
    """Density matrices at the sample times."""

    times: np.ndarray
    states: List[DensityMatrix]

    def __len__(self) -> int:
        """Number of snapshots."""
        return len(self.states)

    @property
    def final(self) -> DensityMatrix:
        """Last snapshot."""
        return self.states[-1]


def _sample_grid(
    t_end: float, sample_times: Optional[Sequence[float]], n_snapshots: int
) -> np.ndarray:
    if t_end <= 0:
        raise ParameterError("t_end must be positive")
    if sample_times is None:
        return np.linspace(0.0, t_end, n_snapshots + 1)
    times = np.asarray(sorted(set(float(t) for t in sample_times)), dtype=float)
    if times.size == 0 or times[0] < 0 or times[-1] > t_end * (1.0 + 1e-12):
        raise ParameterError("sample times must lie in [0, t_end]")
    if times[0] > 0:
        times = np.concatenate(([0.0], times))
    return times


def evolve_iter(  # pylint: disable=too-many-arguments
    rho0: DensityMatrix,
    params: SystemParams,
    t_end: float,
    sample_times: Optional[Sequence[float]] = None,
    tol: float = constants.DEFAULT_SOLVER_TOL,
    n_snapshots: int = constants.DEFAULT_SNAPSHOTS,
    generator: Optional[LindbladGenerator] = None,
) -> Iterator[Tuple[float, DensityMatrix]]:
    """
    Integrate the master equation, yielding snapshots as they are reached.

    Each segment between samples runs an adaptive DOP853 integration. The
    trace is checked at every accepted step and the state is hermitized and
    renormalized at every sample.

    :param rho0: initial DensityMatrix
    :param params: SystemParams
    :param t_end: final time (s)
    :param sample_times: snapshot times in [0, t_end], t = 0 is always included
    :param tol: relative tolerance of the integrator
    :param n_snapshots: evenly spaced samples when ``sample_times`` is None
    :param generator: prebuilt LindbladGenerator

    :yield: (t, DensityMatrix)
    """
    layout = rho0.layout
    generator = generator or LindbladGenerator(params, layout)
    if generator.layout != layout:
        raise LayoutMismatchError("generator and state live on different layouts")
    times = _sample_grid(t_end, sample_times, n_snapshots)
    dim = layout.dimension
    diagonal = np.arange(dim) * (dim + 1)

    state = rho0.normalized()
    yield float(times[0]), state
    vec = state.rho.ravel(order="F")
    for t0, t1 in zip(times[:-1], times[1:]):
        solution = solve_ivp(
            generator.apply,
            (t0, t1),
            vec,
            method="DOP853",
            rtol=tol,
            atol=tol * 1e-2,
        )
        if not solution.success:
            raise ToleranceError(f"master equation failed at t={t0:.4e}s: {solution.message}")
        # every accepted step, not only the sample
        traces = np.abs(solution.y[diagonal].sum(axis=0).real - 1.0)
        if traces.max() > constants.TRACE_TOL:
            step = int(np.argmax(traces))
            raise ToleranceError(
                f"trace drifted by {traces[step]:.3e} at t={solution.t[step]:.4e}s"
            )
        rho = solution.y[:, -1].reshape((dim, dim), order="F")
        state = DensityMatrix(rho, layout).normalized()
        vec = state.rho.ravel(order="F")
        yield float(t1), state


def evolve(  # pylint: disable=too-many-arguments
    rho0: DensityMatrix,
    params: SystemParams,
    t_end: float,
    sample_times: Optional[Sequence[float]] = None,
    tol: float = constants.DEFAULT_SOLVER_TOL,
    n_snapshots: int = constants.DEFAULT_SNAPSHOTS,
) -> DensityTrajectory:
    """
    Integrate the master equation and keep every snapshot.

    :param rho0: initial DensityMatrix
    :param params: SystemParams
    :param t_end: final time (s)
    :param sample_times: snapshot times in [0, t_end]
    :param tol: relative tolerance of the integrator
    :param n_snapshots: evenly spaced samples when ``sample_times`` is None

    :return: DensityTrajectory
    """
    times, states = [], []
    for t, state in evolve_iter(rho0, params, t_end, sample_times, tol, n_snapshots):
        times.append(t)
        states.append(state)
    return DensityTrajectory(np.asarray(times), states)


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """
    Reduced state on the kept factors (factor 0 is the TLS when present).

    :param rho: DensityMatrix
    :param keep: factor indices to keep

    :return: DensityMatrix in ascending factor order
    """
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(rho.layout.dims):
        raise PartitionError(f"cannot keep factors {keep} of {rho.layout.dims}")
    reduced = rho.to_qobj().ptrace(keep)
    has_tls = rho.layout.has_tls and keep[0] == 0
    layout = HilbertLayout(
        tuple(rho.layout.dims[k] for k in keep), has_tls=has_tls, max_dim=rho.layout.max_dim
    )
    return DensityMatrix(reduced.full(), layout)


def mode_state(rho: DensityMatrix) -> DensityMatrix:
    """Trace out the TLS."""
    if not rho.layout.has_tls:
        return rho
    return partial_trace(rho, range(1, len(rho.layout.dims)))


def expect(op: qt.Qobj, rho: DensityMatrix) -> Union[float, complex]:
    """
    Tr(op ρ), real for Hermitian ``op``.

    :param op: operator Qobj on the state layout
    :param rho: DensityMatrix

    :return: expectation value
    """
    if op.shape != rho.rho.shape:
        raise LayoutMismatchError("operator and state dimensions differ")
    return qt.expect(op, rho.to_qobj())


def mode_occupations(rho: DensityMatrix) -> np.ndarray:
    """⟨b_k†b_k⟩ for every mode."""
    ops = build_operators(rho.layout)
    return np.array([expect(ops.number(k), rho) for k in range(rho.layout.n_modes)])


def covariance_from_rho(rho: DensityMatrix) -> CovarianceMatrix:
    """
    Covariance V_ij = ½⟨{δu_i, δu_j}⟩ of a mode-only state.

    :param rho: DensityMatrix without the TLS factor

    :return: CovarianceMatrix
    """
    if rho.layout.has_tls:
        raise LayoutMismatchError("trace out the TLS before building the covariance")
    quads = build_operators(rho.layout).quadratures()
    state = rho.to_qobj()
    means = np.array([qt.expect(u, state) for u in quads])
    size = len(quads)
    v = np.empty((size, size))
    for i in range(size):
        for j in range(i, size):
            sym = 0.5 * qt.expect(quads[i] * quads[j] + quads[j] * quads[i], state)
            v[i, j] = v[j, i] = float(np.real(sym)) - means[i] * means[j]
    return CovarianceMatrix(v)


def write_density_dump(path: Path, rho: DensityMatrix) -> None:
    """
    Write a density matrix in the binary dump layout.

    Layout: uint32 factor count, uint32 dims, then row-major float64 (re, im)
    pairs, all little endian.

    :param path: output file
    :param rho: DensityMatrix
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dims = np.asarray(rho.layout.dims, dtype="<u4")
    pairs = np.empty(rho.rho.shape + (2,), dtype="<f8")
    pairs[..., 0] = rho.rho.real
    pairs[..., 1] = rho.rho.imag
    with path.open("wb") as f:
        f.write(np.asarray([dims.size], dtype="<u4").tobytes())
        f.write(dims.tobytes())
        f.write(pairs.tobytes(order="C"))


def read_density_dump(path: Path, has_tls: bool = True) -> DensityMatrix:
    """Read a density matrix written by :func:`write_density_dump`."""
    raw = Path(path).read_bytes()
    count = int(np.frombuffer(raw, dtype="<u4", count=1)[0])
    dims = tuple(int(d) for d in np.frombuffer(raw, dtype="<u4", count=count, offset=4))
    layout = HilbertLayout(dims, has_tls=has_tls)
    pairs = np.frombuffer(raw, dtype="<f8", offset=4 * (count + 1))
    pairs = pairs.reshape((layout.dimension, layout.dimension, 2))
    return DensityMatrix(pairs[..., 0] + 1j * pairs[..., 1], layout)
