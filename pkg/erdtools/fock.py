# MIT License

# Copyright (c) 2021-present The ERDTools Authors

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.
"""Truncated single-mode Fock space, optionally tensored with a qubit.

Basis ordering on the joint space is field-major: index ``2*n + q`` with
``q = 0`` for the ground state ``|g>`` and ``q = 1`` for ``|e>``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg
from scipy.special import gammaln
from scipy.stats import poisson

from .config import DEFAULT_SETTINGS, Tolerances
from .errors import DimensionMismatch, TruncationTooSmall

__all__ = (
    "StateVector",
    "Operator",
    "default_n_max",
    "coherent_state",
    "fock_state",
    "qubit_state",
    "displacement",
    "ladder_ops",
    "jc_unitary",
    "tensor",
)

_log = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, "Operator", "StateVector"]


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class StateVector:
    """A pure state on the truncated space.

    Attributes
    ----------
    amplitudes : :class:`numpy.ndarray`
        Read-only complex amplitudes in the Fock (or Fock ⊗ qubit) basis.
    n_max : :class:`int`
        The Fock truncation index.
    qubit : :class:`bool`
        Whether the space carries a qubit factor.
    """
    amplitudes: np.ndarray = field(repr=False)
    n_max: int
    qubit: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes).reshape(-1))
        expected = (self.n_max + 1) * (2 if self.qubit else 1)
        if self.amplitudes.size != expected:
            raise DimensionMismatch(f"expected {expected} amplitudes for n_max={self.n_max}, got {self.amplitudes.size}")

    @property
    def dim(self) -> int:
        """:class:`int`: Size of the basis."""
        return self.amplitudes.size

    @property
    def norm_sq(self) -> float:
        """:class:`float`: Squared norm, at most one after truncation."""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def overlap(self, other: StateVector) -> complex:
        """Inner product ``<self|other>``."""
        if other.dim != self.dim:
            raise DimensionMismatch(f"cannot overlap states of dimension {self.dim} and {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalized(self) -> StateVector:
        return StateVector(self.amplitudes / math.sqrt(self.norm_sq), self.n_max, self.qubit)

    def density(self) -> np.ndarray:
        """The projector ``|psi><psi|`` as a dense matrix."""
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class Operator:
    """A dense operator on the truncated space.

    Attributes
    ----------
    matrix : :class:`numpy.ndarray`
        Read-only square complex matrix.
    n_max : :class:`int`
        The Fock truncation index.
    qubit : :class:`bool`
        Whether the operator acts on Fock ⊗ qubit.
    """
    matrix: np.ndarray = field(repr=False)
    n_max: int
    qubit: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        expected = (self.n_max + 1) * (2 if self.qubit else 1)
        if self.matrix.shape != (expected, expected):
            raise DimensionMismatch(f"expected a {expected}x{expected} matrix for n_max={self.n_max}, got {self.matrix.shape}")

    @property
    def dim(self) -> int:
        """:class:`int`: Size of the basis."""
        return self.matrix.shape[0]

    def dagger(self) -> Operator:
        return Operator(self.matrix.conj().T, self.n_max, self.qubit)

    def apply(self, state: StateVector) -> StateVector:
        """Return ``self |state>``."""
        if state.dim != self.dim:
            raise DimensionMismatch(f"operator of dimension {self.dim} applied to state of dimension {state.dim}")
        return StateVector(self.matrix @ state.amplitudes, self.n_max, self.qubit)

    def __matmul__(self, other: Operator) -> Operator:
        if not isinstance(other, Operator):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(f"cannot multiply operators of dimension {self.dim} and {other.dim}")
        return Operator(self.matrix @ other.matrix, self.n_max, self.qubit)

    def unitarity_defect(self, skip_corner: int = 0) -> float:
        """Max-norm of ``U^dagger U - 1``, optionally ignoring the last ``skip_corner`` basis states."""
        gram = self.matrix.conj().T @ self.matrix - np.eye(self.dim)
        keep = self.dim - skip_corner
        return float(np.max(np.abs(gram[:keep, :keep]))) if keep > 0 else 0.0


def default_n_max(mean_photons: float) -> int:
    """Truncation index keeping the Poisson tail of the given mean below ~1e-12.

    ``max(16, ceil(mu + 8*sqrt(mu) + 8))``
    """
    mu = max(float(mean_photons), 0.0)
    return max(16, math.ceil(mu + 8.0 * math.sqrt(mu) + 8.0))


def _coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    r = abs(alpha)
    if r == 0.0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    log_mod = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    return np.exp(log_mod) * np.exp(1j * n * np.angle(alpha))


def coherent_state(alpha: complex, n_max: int, tolerances: Optional[Tolerances] = None) -> StateVector:
    """The coherent state ``|alpha>`` truncated at ``n_max``.

    Amplitudes are ``exp(-|alpha|^2/2) alpha^n / sqrt(n!)``; the state is not renormalized.

    Parameters
    ----------
    alpha : :class:`complex`
        The field amplitude; ``|alpha|^2`` is the mean photon number.
    n_max : :class:`int`
        The truncation index, at least 0.
    tolerances : Optional[:class:`erdtools.config.Tolerances`]
        Uses ``tau_trunc``.

    Raises
    ------
    :exc:`erdtools.errors.TruncationTooSmall`
        The Poisson tail beyond ``n_max`` exceeds ``tau_trunc``.
    """
    tol = tolerances or DEFAULT_SETTINGS.tolerances
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    tail = float(poisson.sf(n_max, abs(alpha) ** 2))
    if tail > tol.tau_trunc:
        raise TruncationTooSmall(n_max, tail, f"coherent state with |alpha|^2={abs(alpha) ** 2:g}")
    return StateVector(_coherent_amplitudes(alpha, n_max), n_max)


def fock_state(n: int, n_max: int) -> StateVector:
    """The number state ``|n>``."""
    if not 0 <= n <= n_max:
        raise ValueError(f"Fock index {n} outside 0..{n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return StateVector(amps, n_max)


def qubit_state(ground: complex, excited: complex) -> np.ndarray:
    """A normalized qubit vector ``ground|g> + excited|e>``."""
    vec = np.array([ground, excited], dtype=complex)
    return vec / np.linalg.norm(vec)


def ladder_ops(n_max: int) -> Tuple[Operator, Operator]:
    """Annihilation and creation operators.

    ``a|n> = sqrt(n)|n-1>``. On the truncated space ``[a, a^dagger]`` is the
    identity except its last diagonal entry, which equals ``-n_max``.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    a = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1)
    return Operator(a, n_max), Operator(a.T, n_max)


def displacement(beta: complex, n_max: int, tolerances: Optional[Tolerances] = None) -> Operator:
    """The displacement operator ``D(beta) = exp(beta a^dagger - beta* a)``.

    The generator is anti-Hermitian on the truncated space as well, so the
    result is unitary to machine precision; truncation shows up only as a
    deviation from the true ``D(beta)`` near ``n_max``.

    Raises
    ------
    :exc:`erdtools.errors.TruncationTooSmall`
        ``||D(beta)|0> - |beta>||`` exceeds ``tau_disp``.
    """
    tol = tolerances or DEFAULT_SETTINGS.tolerances
    a, adag = ladder_ops(n_max)
    generator = beta * adag.matrix - np.conj(beta) * a.matrix
    # scaling-and-squaring Padé
    matrix = scipy.linalg.expm(generator)
    error = float(np.linalg.norm(matrix[:, 0] - _coherent_amplitudes(beta, n_max)))
    if error > tol.tau_disp:
        raise TruncationTooSmall(n_max, error, f"displacement by beta={beta:g}")
    return Operator(matrix, n_max)


def tensor(field_op: ArrayLike, qubit_op: np.ndarray) -> np.ndarray:
    """Kronecker product in the field-major ordering."""
    left = field_op.matrix if isinstance(field_op, Operator) else np.asarray(field_op)
    return np.kron(left, np.asarray(qubit_op))


def jc_unitary(theta: float, n_max: int) -> Operator:
    """Resonant Jaynes-Cummings propagator ``exp(-i theta (a sigma_+ + a^dagger sigma_-))``.

    Built from its 2x2 blocks: on ``span{|n>|e>, |n+1>|g>}`` it is a rotation
    by ``theta*sqrt(n+1)``; ``|0>|g>`` is invariant. The state ``|n_max>|e>``,
    whose partner lies outside the truncation, is left invariant as well.

    Parameters
    ----------
    theta : :class:`float`
        Dimensionless interaction angle ``g*t``.
    n_max : :class:`int`
        The Fock truncation index, at least 1.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    dim = 2 * (n_max + 1)
    u = np.zeros((dim, dim), dtype=complex)
    u[0, 0] = 1.0
    u[dim - 1, dim - 1] = 1.0
    for n in range(n_max):
        angle = theta * math.sqrt(n + 1)
        c, s = math.cos(angle), math.sin(angle)
        ne, n1g = 2 * n + 1, 2 * (n + 1)
        u[ne, ne] = c
        u[n1g, n1g] = c
        u[ne, n1g] = -1j * s
        u[n1g, ne] = -1j * s
    _log.debug("built JC unitary theta=%g n_max=%d", theta, n_max)
    return Operator(u, n_max, qubit=True)
