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
"""Entanglement, metrology and non-Gaussianity measures."""
import logging
import warnings
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import qutip as qt

from vibent import constants
from vibent.errors import (
    EmptyTrajectoryError,
    LayoutMismatchError,
    NonHermitianObservableError,
    PartitionError,
    QfiBoundWarning,
    UnphysicalStateError,
)
from vibent.fock import (
    DensityMatrix,
    HilbertLayout,
    build_operators,
    covariance_from_rho,
    mode_state,
    partial_trace,
)
from vibent.gaussian import (
    CovarianceMatrix,
    gaussian_entropy,
    partial_transpose_cm,
    symplectic_eigenvalues,
)


_logger = logging.getLogger(__name__)

State = Union[CovarianceMatrix, DensityMatrix]

# F_Q[vacuum, Σx_k]/M with x = (b + b†)/√2
VACUUM_NORMALIZED_QFI = 2.0


class Method(str, Enum):
    """State representation a measure was evaluated on."""

    GAUSSIAN_CM = "gaussian_cm"
    DENSITY_MATRIX = "density_matrix"


@dataclass(frozen=True)
class PartitionSpec:
    """Disjoint parties of modes, with an optional focus party."""

    parties: Tuple[Tuple[int, ...], ...]
    focus: Optional[int] = None

    def __post_init__(self) -> None:
        """Validate the parties."""
        parties = tuple(tuple(sorted(int(k) for k in p)) for p in self.parties)
        if any(not p for p in parties):
            raise PartitionError("parties must be non-empty")
        flat = [k for p in parties for k in p]
        if len(flat) != len(set(flat)):
            raise PartitionError(f"parties {parties} overlap")
        if min(flat) < 0:
            raise PartitionError("mode indices must be non-negative")
        if self.focus is not None and not 0 <= self.focus < len(parties):
            raise PartitionError(f"focus {self.focus} is not a party")
        object.__setattr__(self, "parties", parties)

    @classmethod
    def singletons(cls, modes: Iterable[int]) -> "PartitionSpec":
        """One party per mode."""
        return cls(tuple((k,) for k in modes))

    @property
    def modes(self) -> Tuple[int, ...]:
        """All modes covered by the parties."""
        return tuple(sorted(k for p in self.parties for k in p))

    def label(self) -> str:
        """Label such as ``1|2|3`` with one-based modes."""
        return "|".join(",".join(str(k + 1) for k in p) for p in self.parties)

    def check(self, n_modes: int) -> None:
        """Raise when a party refers to a missing mode."""
        if max(self.modes) >= n_modes:
            raise PartitionError(f"partition {self.label()} exceeds {n_modes} modes")


@dataclass(frozen=True)
class EntanglementReport:
    """Genuine multipartite entanglement with its per-focus residuals."""

    value: float
    partition: PartitionSpec
    method: Method
    residuals: Tuple[float, ...] = ()
    floored: bool = False


def _n_modes(state: State) -> int:
    if isinstance(state, CovarianceMatrix):
        return state.n_modes
    return state.layout.n_modes


def _require_modes_only(rho: DensityMatrix) -> None:
    if rho.layout.has_tls:
        raise LayoutMismatchError("trace out the TLS before evaluating mode measures")


def log_negativity_gaussian(
    cov: CovarianceMatrix, party: Sequence[int], rest: Optional[Sequence[int]] = None
) -> float:
    """
    Logarithmic negativity between ``party`` and the other modes.

    :param cov: CovarianceMatrix
    :param party: modes of the transposed side
    :param rest: modes of the other side, all remaining modes when None

    :return: Σ -ln(2ν̃) over partially transposed symplectic eigenvalues 2ν̃ < 1
    """
    if not cov.is_physical(constants.LYAPUNOV_PHYSICAL_TOL):
        raise UnphysicalStateError("covariance matrix violates the uncertainty principle")
    party = list(party)
    if rest is not None:
        keep = sorted(set(party) | set(rest))
        if set(party) & set(rest):
            raise PartitionError("bipartition sides overlap")
        cov = cov.reduce(keep)
        party = [keep.index(k) for k in party]
    nu = symplectic_eigenvalues(partial_transpose_cm(cov, party))
    small = nu[2.0 * nu < 1.0]
    return float(-np.log(2.0 * small).sum()) if small.size else 0.0


def negativity_density(
    rho: DensityMatrix, party: Sequence[int], rest: Optional[Sequence[int]] = None
) -> float:
    """
    Logarithmic negativity ln‖ρ^{T_A}‖₁ of a mode-only state.

    :param rho: DensityMatrix without the TLS factor
    :param party: modes of the transposed side
    :param rest: modes of the other side, all remaining modes when None

    :return: log-negativity (nats)
    """
    _require_modes_only(rho)
    party = sorted(set(party))
    n_modes = rho.layout.n_modes
    if not party or max(party) >= n_modes:
        raise PartitionError(f"party {party} invalid for {n_modes} modes")
    if rest is not None:
        keep = sorted(set(party) | set(rest))
        if set(party) & set(rest):
            raise PartitionError("bipartition sides overlap")
        if len(keep) < n_modes:
            rho = partial_trace(rho, keep)
        party = [keep.index(k) for k in party]
    if len(party) >= rho.layout.n_modes:
        raise PartitionError("party must be a proper subset of the modes")
    mask = [1 if k in party else 0 for k in range(rho.layout.n_modes)]
    transposed = qt.partial_transpose(rho.to_qobj(), mask)
    eigenvalues = np.linalg.eigvalsh(transposed.full())
    return float(max(np.log(np.abs(eigenvalues).sum()), 0.0))


def _reduce(state: State, modes: Sequence[int]) -> State:
    if isinstance(state, CovarianceMatrix):
        return state.reduce(modes)
    if len(modes) == state.layout.n_modes:
        return state
    return partial_trace(state, modes)


def _contangle(state: State, method: Method, party: Sequence[int], rest: Sequence[int]) -> float:
    keep = sorted(set(party) | set(rest))
    reduced = _reduce(state, keep)
    local = [keep.index(k) for k in party]
    if method is Method.GAUSSIAN_CM:
        value = log_negativity_gaussian(reduced, local)
    else:
        value = negativity_density(reduced, local)
    return value**2


def _residual(
    state: State, method: Method, parties: Sequence[Tuple[int, ...]], focus: int
) -> float:
    others = [i for i in range(len(parties)) if i != focus]
    cache: Dict[FrozenSet[int], float] = {}

    def residual(subset: FrozenSet[int]) -> float:
        if subset not in cache:
            rest = [k for i in subset for k in parties[i]]
            value = _contangle(state, method, parties[focus], rest)
            for size in range(1, len(subset)):
                for lower in combinations(sorted(subset), size):
                    value -= residual(frozenset(lower))
            cache[subset] = value
        return cache[subset]

    return residual(frozenset(others))


def genuine_multipartite(state: State, partition: PartitionSpec) -> EntanglementReport:
    """
    Genuine multipartite entanglement from the monogamy of the contangle.

    For a focus party i the residual removes from τ(i|rest) every
    lower-order residual of i with a proper subset of the rest; τ is the
    squared log-negativity. The reported value is the minimum residual over
    all focus choices, floored at zero.

    :param state: CovarianceMatrix or mode-only DensityMatrix
    :param partition: PartitionSpec with at least three parties

    :return: EntanglementReport
    """
    if len(partition.parties) < 3:
        raise PartitionError("genuine multipartite entanglement needs at least 3 parties")
    partition.check(_n_modes(state))
    if isinstance(state, CovarianceMatrix):
        method = Method.GAUSSIAN_CM
    else:
        _require_modes_only(state)
        method = Method.DENSITY_MATRIX
    residuals = tuple(
        _residual(state, method, partition.parties, focus)
        for focus in range(len(partition.parties))
    )
    focus = int(np.argmin(residuals))
    lowest = residuals[focus]
    floored = lowest < 0
    if floored:
        _logger.debug("negative residual %.3e floored for %s", lowest, partition.label())
    return EntanglementReport(
        value=max(lowest, 0.0),
        partition=PartitionSpec(partition.parties, focus=focus),
        method=method,
        residuals=residuals,
        floored=floored,
    )


def _as_matrix(observable: Union[qt.Qobj, np.ndarray]) -> np.ndarray:
    if isinstance(observable, qt.Qobj):
        return observable.full()
    return np.asarray(observable, dtype=complex)


def qfi(
    rho: DensityMatrix,
    observable: Union[qt.Qobj, np.ndarray],
    cutoff: float = constants.QFI_CUTOFF,
) -> float:
    """
    Quantum Fisher information 2Σ|⟨k|O|l⟩|²(λ_k-λ_l)²/(λ_k+λ_l).

    :param rho: DensityMatrix
    :param observable: Hermitian generator on the state's layout
    :param cutoff: skip eigenpairs with λ_k + λ_l below this value

    :return: F_Q
    """
    op = _as_matrix(observable)
    if op.shape != rho.rho.shape:
        raise LayoutMismatchError("observable and state dimensions differ")
    scale = max(1.0, float(np.abs(op).max()))
    if np.abs(op - op.conj().T).max() > constants.HERMITIAN_TOL * scale:
        raise NonHermitianObservableError("QFI generator must be Hermitian")
    eigenvalues, vectors = np.linalg.eigh(rho.rho)
    elements = np.abs(vectors.conj().T @ op @ vectors) ** 2
    sums = eigenvalues[:, None] + eigenvalues[None, :]
    diffs = eigenvalues[:, None] - eigenvalues[None, :]
    mask = sums > cutoff
    return float(2.0 * np.sum(elements[mask] * diffs[mask] ** 2 / sums[mask]))


def collective_position(layout: HilbertLayout, modes: Optional[Sequence[int]] = None) -> qt.Qobj:
    """
    X = Σ_k x_k over the given modes.

    :param layout: HilbertLayout
    :param modes: zero-based modes, all when None

    :return: Qobj
    """
    ops = build_operators(layout)
    modes = range(layout.n_modes) if modes is None else modes
    total = 0 * ops.identity
    for k in modes:
        total += ops.position(k)
    return total


def normalized_qfi(rho: DensityMatrix, generator: Optional[np.ndarray] = None) -> float:
    """
    F_Q[ρ_m, X_M]/M of one snapshot, the TLS traced out first.

    :param rho: DensityMatrix, with or without the TLS factor
    :param generator: prebuilt X_M matrix on the mode layout

    :return: normalized QFI
    """
    modes = mode_state(rho)
    if generator is None:
        generator = collective_position(modes.layout).full()
    return qfi(modes, generator) / modes.layout.n_modes


def check_qfi_bound(value: float, n_modes: int) -> None:
    """Warn when a normalized QFI exceeds the mode count."""
    if value > n_modes:
        warnings.warn(
            f"normalized QFI {value:.4f} exceeds the mode count {n_modes}",
            QfiBoundWarning,
            stacklevel=3,
        )


def normalized_qfi_max(states: Iterable[DensityMatrix]) -> float:
    """
    Largest F_Q[ρ_m(t), X_M]/M over a trajectory.

    Values above M are reported with a QfiBoundWarning.

    :param states: density-matrix snapshots

    :return: max normalized QFI
    """
    best = None
    generator = None
    n_modes = 0
    for state in states:
        if generator is None:
            layout = mode_state(state).layout
            generator = collective_position(layout).full()
            n_modes = layout.n_modes
        value = normalized_qfi(state, generator)
        best = value if best is None else max(best, value)
    if best is None:
        raise EmptyTrajectoryError("no snapshots to evaluate the QFI on")
    check_qfi_bound(best, n_modes)
    return float(best)


def non_gaussianity(rho: DensityMatrix) -> float:
    """
    Entropy gap S(ρ_G) - S(ρ) to the Gaussian state with the same moments.

    :param rho: DensityMatrix without the TLS factor

    :return: δ_NG (nats)
    """
    _require_modes_only(rho)
    return gaussian_entropy(covariance_from_rho(rho)) - float(qt.entropy_vn(rho.to_qobj()))


@dataclass(frozen=True)
class GhzNullifiers:
    """Variances of the CV GHZ nullifiers."""

    momentum_sum: float
    position_differences: Tuple[float, ...]


def ghz_nullifiers(cov: CovarianceMatrix, center: int = 0) -> GhzNullifiers:
    """
    GHZ nullifier variances after a π/2 phase-space rotation of ``center``.

    The rotation maps x_c → p_c and p_c → -x_c. An ideal GHZ state has
    Var(Σ_k p_k) → 0 and Var(x_k - x_c) → 0.

    :param cov: CovarianceMatrix
    :param center: zero-based mode rotated locally

    :return: GhzNullifiers
    """
    n = cov.n_modes
    if not 0 <= center < n:
        raise PartitionError(f"center {center} not among {n} modes")
    rotation = np.eye(2 * n)
    rotation[2 * center : 2 * center + 2, 2 * center : 2 * center + 2] = [[0.0, 1.0], [-1.0, 0.0]]
    v = rotation @ cov.v @ rotation.T

    def variance(coefficients: np.ndarray) -> float:
        return float(coefficients @ v @ coefficients)

    momenta = np.zeros(2 * n)
    momenta[1::2] = 1.0
    differences = []
    for k in range(n):
        if k == center:
            continue
        c = np.zeros(2 * n)
        c[2 * k] = 1.0
        c[2 * center] = -1.0
        differences.append(variance(c))
    return GhzNullifiers(variance(momenta), tuple(differences))


def measure_series(
    fn: Callable[..., Any], states: Sequence[State], *args: Any, **kwargs: Any
) -> List[Any]:
    """
    Evaluate a measure on every snapshot.

    :param fn: measure taking the state first
    :param states: snapshots
    :param args: extra positional arguments of ``fn``
    :param kwargs: extra keyword arguments of ``fn``

    :return: list of results in snapshot order
    """
    if len(states) == 0:
        raise EmptyTrajectoryError("no snapshots")
    return [fn(state, *args, **kwargs) for state in states]
