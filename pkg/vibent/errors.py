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
"""Simulation exceptions and warning categories."""
from typing import Any, Optional


class BaseSimulationError(Exception):
    """Base simulation exception class."""


class ParameterError(BaseSimulationError):
    """Invalid physical or run parameter."""


class ConfigError(BaseSimulationError):
    """Bad parameter file."""


class StepSizeError(BaseSimulationError):
    """Fixed step does not resolve the fastest frequency."""


class ToleranceError(BaseSimulationError):
    """Adaptive integration failed or drifted out of tolerance."""


class UnphysicalStateError(BaseSimulationError):
    """State violates the uncertainty principle or positivity."""


class PhysicalityError(UnphysicalStateError):
    """Covariance trajectory lost physicality during integration."""

    def __init__(
        self,
        message: str,
        *args: Any,
        time: Optional[float] = None,
        min_symplectic_eigenvalue: Optional[float] = None,
    ) -> None:
        """Init exception."""
        self.time = time
        self.min_symplectic_eigenvalue = min_symplectic_eigenvalue
        super().__init__(message, *args)


class SingularResolventError(BaseSimulationError):
    """Resolvent matrix is singular at the requested frequency."""


class NonPositiveDampingError(BaseSimulationError):
    """TLS-induced damping is not positive for a mode."""

    def __init__(self, message: str, *args: Any, mode: Optional[int] = None) -> None:
        """Init exception."""
        self.mode = mode
        super().__init__(message, *args)


class MemoryCeilingError(BaseSimulationError):
    """Truncated Hilbert space exceeds the configured ceiling."""

    def __init__(
        self, message: str, *args: Any, dimension: Optional[int] = None
    ) -> None:
        """Init exception."""
        self.dimension = dimension
        super().__init__(message, *args)


class LayoutMismatchError(BaseSimulationError):
    """Operator or state does not live on the expected layout."""


class PartitionError(BaseSimulationError):
    """Invalid party specification."""


class NonHermitianObservableError(BaseSimulationError):
    """Observable is not Hermitian."""


class EmptyTrajectoryError(BaseSimulationError):
    """Trajectory without snapshots."""


class RegimeWarning(UserWarning):
    """Parameters outside the adiabatic or far-detuned regime."""


class ResolventStabilityWarning(UserWarning):
    """Resolvent matrix has eigenvalues with non-negative real part."""


class QfiBoundWarning(UserWarning):
    """Normalized QFI exceeds the number of modes."""
