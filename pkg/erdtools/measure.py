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
"""Signal ensembles, POVMs and measurement instruments.

Pure signal states are kept as vectors and only promoted to density
matrices when a mixed-state formula needs them.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union, overload

import numpy as np

from .config import DEFAULT_SETTINGS, Tolerances
from .errors import (DestructiveMeasurement, DimensionMismatch, IncompleteInstrument, InvalidEnsemble,
                     InvalidPOVM, ZeroProbabilityOutcome)
from .fock import Operator, StateVector

__all__ = (
    "Ensemble",
    "POVM",
    "Instrument",
    "induced_povm",
    "outcome_probabilities",
    "post_measurement_ensemble",
    "statistical_operator",
    "helstrom_povm",
    "projective_instrument",
    "identity_instrument",
    "coarse_grain",
    "sequential_instrument",
)

_log = logging.getLogger(__name__)

StateLike = Union[StateVector, Operator, np.ndarray]
OperatorLike = Union[Operator, np.ndarray]


def _readonly(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex)
    out.setflags(write=False)
    return out


def _as_matrix(op: OperatorLike) -> np.ndarray:
    return op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=complex)


def _as_state(state: StateLike) -> np.ndarray:
    if isinstance(state, StateVector):
        return state.amplitudes
    if isinstance(state, Operator):
        return state.matrix
    return np.asarray(state, dtype=complex)


def _hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return (matrix + matrix.conj().T) / 2


def _expect(state: np.ndarray, op: np.ndarray) -> float:
    """``tr(op rho)`` for a vector or density matrix."""
    if state.ndim == 1:
        return float(np.vdot(state, op @ state).real)
    return float(np.einsum("ij,ji->", op, state).real)


## Types ##

@dataclass(frozen=True)
class Ensemble:
    """Signal states with prior probabilities.

    States may be given as :class:`erdtools.fock.StateVector` (pure),
    :class:`erdtools.fock.Operator` or arrays; 1-D arrays are pure states,
    2-D arrays density matrices. Pure states and density matrices are
    renormalized after validation.

    Attributes
    ----------
    states : Tuple[:class:`numpy.ndarray`, ...]
        Read-only vectors (pure) or density matrices (mixed).
    priors : Tuple[:class:`float`, ...]
        Prior probabilities ``eta_j``.
    labels : Tuple[:class:`int`, ...]
        Index of each state in the ensemble it was derived from; ``range(N)``
        for a fresh ensemble. Post-measurement ensembles drop impossible
        states, so labels keep track of which signal each state came from.
    """
    states: Tuple[np.ndarray, ...]
    priors: Tuple[float, ...]
    labels: Tuple[int, ...] = ()
    tolerances: Tolerances = field(default=DEFAULT_SETTINGS.tolerances, repr=False, compare=False)

    def __post_init__(self) -> None:
        tol = self.tolerances
        states = tuple(_as_state(s) for s in self.states)
        priors = tuple(float(p) for p in self.priors)
        if not states:
            raise InvalidEnsemble("an ensemble needs at least one state")
        if len(states) != len(priors):
            raise InvalidEnsemble(f"{len(states)} states but {len(priors)} priors")
        if min(priors) < 0 or abs(sum(priors) - 1.0) > tol.prior_tol:
            raise InvalidEnsemble(f"priors {priors} are not a probability distribution")
        dim = states[0].shape[0]
        normalized = []
        for j, state in enumerate(states):
            if state.shape[0] != dim or state.ndim not in (1, 2) or (state.ndim == 2 and state.shape != (dim, dim)):
                raise DimensionMismatch(f"state {j} has shape {state.shape}, expected dimension {dim}")
            if state.ndim == 1:
                norm_sq = float(np.vdot(state, state).real)
                if abs(norm_sq - 1.0) > max(tol.trace_tol, tol.tau_trunc):
                    raise InvalidEnsemble(f"state {j} has squared norm {norm_sq!r}")
                normalized.append(_readonly(state / math.sqrt(norm_sq)))
                continue
            if np.max(np.abs(state - state.conj().T)) > tol.trace_tol:
                raise InvalidEnsemble(f"state {j} is not Hermitian")
            herm = _hermitian_part(state)
            lowest = float(np.linalg.eigvalsh(herm)[0])
            if lowest < tol.psd_floor:
                raise InvalidEnsemble(f"state {j} has negative eigenvalue {lowest:.3e}")
            trace = float(np.trace(herm).real)
            if abs(trace - 1.0) > max(tol.trace_tol, tol.tau_trunc):
                raise InvalidEnsemble(f"state {j} has trace {trace!r}")
            normalized.append(_readonly(herm / trace))
        object.__setattr__(self, "states", tuple(normalized))
        object.__setattr__(self, "priors", priors)
        labels = tuple(self.labels) or tuple(range(len(states)))
        if len(labels) != len(states):
            raise InvalidEnsemble(f"{len(labels)} labels for {len(states)} states")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, states: Iterable[StateLike], priors: Iterable[float],
           tolerances: Optional[Tolerances] = None) -> Ensemble:
        """Build an ensemble from any mix of vectors, operators and arrays."""
        return cls(tuple(_as_state(s) for s in states), tuple(priors),
                   tolerances=tolerances or DEFAULT_SETTINGS.tolerances)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        """:class:`int`: Dimension of the underlying space."""
        return self.states[0].shape[0]

    def is_pure(self, j: int) -> bool:
        """Whether state ``j`` is stored as a vector or has unit purity."""
        state = self.states[j]
        if state.ndim == 1:
            return True
        purity = float(np.einsum("ij,ji->", state, state).real)
        return abs(purity - 1.0) <= 1e-9

    def vector(self, j: int) -> np.ndarray:
        """State ``j`` as a vector; mixed states of unit purity are reduced to their top eigenvector."""
        state = self.states[j]
        if state.ndim == 1:
            return state
        if not self.is_pure(j):
            raise InvalidEnsemble(f"state {j} is mixed")
        _, vecs = np.linalg.eigh(state)
        return vecs[:, -1]

    def density(self, j: int) -> np.ndarray:
        state = self.states[j]
        return np.outer(state, state.conj()) if state.ndim == 1 else state

    @property
    def all_pure(self) -> bool:
        return all(self.is_pure(j) for j in range(len(self)))


@dataclass(frozen=True)
class POVM:
    """A positive-operator valued measure.

    Attributes
    ----------
    elements : Tuple[:class:`numpy.ndarray`, ...]
        Read-only Hermitian positive semidefinite elements summing to the identity.
    """
    elements: Tuple[np.ndarray, ...]
    tolerances: Tolerances = field(default=DEFAULT_SETTINGS.tolerances, repr=False, compare=False)

    def __post_init__(self) -> None:
        tol = self.tolerances
        elements = tuple(_hermitian_part(_as_matrix(e)) for e in self.elements)
        if not elements:
            raise InvalidPOVM("a POVM needs at least one element")
        dim = elements[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for k, (raw, elem) in enumerate(zip(self.elements, elements)):
            if elem.shape != (dim, dim):
                raise DimensionMismatch(f"element {k} has shape {elem.shape}, expected {(dim, dim)}")
            if np.max(np.abs(_as_matrix(raw) - elem)) > tol.tau_povm:
                raise InvalidPOVM(f"element {k} is not Hermitian")
            lowest = float(np.linalg.eigvalsh(elem)[0])
            if lowest < tol.psd_floor:
                raise InvalidPOVM(f"element {k} has negative eigenvalue {lowest:.3e}")
            total += elem
        deviation = float(np.max(np.abs(total - np.eye(dim))))
        if deviation > tol.tau_povm:
            raise IncompleteInstrument(deviation)
        object.__setattr__(self, "elements", tuple(_readonly(e) for e in elements))

    @classmethod
    def of(cls, elements: Iterable[OperatorLike], tolerances: Optional[Tolerances] = None) -> POVM:
        return cls(tuple(_as_matrix(e) for e in elements), tolerances=tolerances or DEFAULT_SETTINGS.tolerances)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]


@dataclass(frozen=True)
class Instrument:
    """A measurement with explicit post-measurement states.

    Outcome ``k`` is implemented by the Kraus group ``kraus_groups[k]``;
    the induced POVM element is ``sum_l A_kl^dagger A_kl``. Kraus operators
    may be rectangular when the output space differs from the input space.

    Attributes
    ----------
    kraus_groups : Tuple[Tuple[:class:`numpy.ndarray`, ...], ...]
        Read-only Kraus operators grouped by outcome.
    destructive : :class:`bool`
        The detector leaves no post-measurement state (homodyne, photon counting).
    outcome_labels : Tuple[Tuple[:class:`int`, ...], ...]
        Outcome labels; ``(k,)`` for a single stage, ``(k, m)`` after :func:`sequential_instrument`.
    """
    kraus_groups: Tuple[Tuple[np.ndarray, ...], ...]
    destructive: bool = False
    outcome_labels: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        groups = tuple(tuple(_readonly(_as_matrix(a)) for a in group) for group in self.kraus_groups)
        if not groups or any(not g for g in groups):
            raise InvalidPOVM("an instrument needs at least one non-empty Kraus group")
        dim = groups[0][0].shape[1]
        for k, group in enumerate(groups):
            for a in group:
                if a.ndim != 2 or a.shape[1] != dim:
                    raise DimensionMismatch(f"Kraus operator of outcome {k} has shape {a.shape}, expected input dimension {dim}")
        object.__setattr__(self, "kraus_groups", groups)
        labels = tuple(tuple(l) for l in self.outcome_labels) or tuple((k,) for k in range(len(groups)))
        if len(labels) != len(groups):
            raise InvalidPOVM(f"{len(labels)} outcome labels for {len(groups)} Kraus groups")
        object.__setattr__(self, "outcome_labels", labels)

    @classmethod
    def of(cls, kraus_groups: Iterable[Iterable[OperatorLike]], destructive: bool = False) -> Instrument:
        return cls(tuple(tuple(_as_matrix(a) for a in g) for g in kraus_groups), destructive=destructive)

    def __len__(self) -> int:
        return len(self.kraus_groups)

    @property
    def dim(self) -> int:
        """:class:`int`: Input dimension."""
        return self.kraus_groups[0][0].shape[1]


## Operations ##

def induced_povm(instr: Instrument, tolerances: Optional[Tolerances] = None) -> POVM:
    """The POVM ``Pi_k = sum_l A_kl^dagger A_kl`` of an instrument.

    Raises
    ------
    :exc:`erdtools.errors.IncompleteInstrument`
        The elements do not sum to the identity within ``tau_povm``.
    """
    elements = tuple(sum((a.conj().T @ a for a in group), np.zeros((instr.dim, instr.dim), dtype=complex))
                     for group in instr.kraus_groups)
    return POVM(elements, tolerances=tolerances or DEFAULT_SETTINGS.tolerances)


def outcome_probabilities(ens: Ensemble, povm: POVM) -> np.ndarray:
    """Joint probability table ``P[j, k] = eta_j tr(Pi_k rho_j)``.

    Rows sum to the priors, columns to ``tr(Pi_k rho)``.

    Raises
    ------
    :exc:`erdtools.errors.DimensionMismatch`
        The POVM and the ensemble live on different spaces.
    """
    if povm.dim != ens.dim:
        raise DimensionMismatch(f"POVM of dimension {povm.dim} applied to ensemble of dimension {ens.dim}")
    table = np.empty((len(ens), len(povm)))
    for j, (state, prior) in enumerate(zip(ens.states, ens.priors)):
        for k, elem in enumerate(povm.elements):
            table[j, k] = prior * _expect(state, elem)
    # round-off can push impossible outcomes slightly negative
    return np.clip(table, 0.0, None)


def statistical_operator(ens: Ensemble) -> np.ndarray:
    """The average state ``rho = sum_j eta_j rho_j``."""
    return sum((p * ens.density(j) for j, p in enumerate(ens.priors)),
               np.zeros((ens.dim, ens.dim), dtype=complex))


def post_measurement_ensemble(ens: Ensemble, instr: Instrument, k: int,
                              tolerances: Optional[Tolerances] = None) -> Ensemble:
    """The ensemble conditioned on outcome ``k``.

    States become ``sum_l A_kl rho_j A_kl^dagger / tr(Pi_k rho_j)`` and priors
    ``eta_j tr(Pi_k rho_j) / tr(Pi_k rho)``. States that cannot produce
    outcome ``k`` are dropped; :attr:`Ensemble.labels` records the survivors.
    A pure state hit by a single Kraus operator stays a vector.

    Raises
    ------
    :exc:`erdtools.errors.DestructiveMeasurement`
        The instrument has no post-measurement state.
    :exc:`erdtools.errors.ZeroProbabilityOutcome`
        ``tr(Pi_k rho)`` is at most ``eps_outcome``.
    """
    tol = tolerances or ens.tolerances
    if instr.destructive:
        raise DestructiveMeasurement("the detector destroys the signal; no post-measurement ensemble exists")
    if instr.dim != ens.dim:
        raise DimensionMismatch(f"instrument of dimension {instr.dim} applied to ensemble of dimension {ens.dim}")
    group = instr.kraus_groups[k]
    branch_probs = []
    branch_states = []
    for state in ens.states:
        if state.ndim == 1 and len(group) == 1:
            out = group[0] @ state
            prob = float(np.vdot(out, out).real)
            branch_states.append(out)
        else:
            rho = np.outer(state, state.conj()) if state.ndim == 1 else state
            out = sum((a @ rho @ a.conj().T for a in group),
                      np.zeros((group[0].shape[0],) * 2, dtype=complex))
            prob = float(np.trace(out).real)
            branch_states.append(out)
        branch_probs.append(prob)

    total = sum(p * q for p, q in zip(ens.priors, branch_probs))
    if total <= tol.eps_outcome:
        raise ZeroProbabilityOutcome(k, total)

    kept = [j for j, q in enumerate(branch_probs) if q > tol.eps_outcome and ens.priors[j] > 0]
    weights = [ens.priors[j] * branch_probs[j] for j in kept]
    norm = sum(weights)
    states = []
    for j in kept:
        out = branch_states[j]
        states.append(out / math.sqrt(branch_probs[j]) if out.ndim == 1 else out / branch_probs[j])
    if len(kept) < len(ens):
        _log.debug("outcome %d: dropped states %s with zero probability",
                   k, [ens.labels[j] for j in range(len(ens)) if j not in kept])
    return Ensemble(tuple(states), tuple(w / norm for w in weights),
                    labels=tuple(ens.labels[j] for j in kept), tolerances=tol)


def helstrom_povm(ens: Ensemble, tolerances: Optional[Tolerances] = None) -> POVM:
    """The minimum-error measurement of a binary ensemble.

    Projectors onto the positive and the non-positive eigenspaces of
    ``eta_1 rho_1 - eta_2 rho_2``, in that order (decide 1, decide 2).
    """
    if len(ens) != 2:
        raise InvalidEnsemble(f"the Helstrom measurement needs two states, got {len(ens)}")
    gamma = ens.priors[0] * ens.density(0) - ens.priors[1] * ens.density(1)
    vals, vecs = np.linalg.eigh(_hermitian_part(gamma))
    pos = vecs[:, vals > 1e-12 * max(1.0, float(np.max(np.abs(vals))))]
    first = pos @ pos.conj().T
    return POVM((first, np.eye(ens.dim) - first), tolerances=tolerances or ens.tolerances)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(_hermitian_part(matrix))
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def projective_instrument(povm: POVM) -> Instrument:
    """The Lüders instrument ``A_k = sqrt(Pi_k)``; ``A_k = Pi_k`` for projectors."""
    return Instrument(tuple((_psd_sqrt(e),) for e in povm.elements))


def identity_instrument(dim: int) -> Instrument:
    """The single-outcome instrument that does nothing."""
    return Instrument(((np.eye(dim),),))


@overload
def coarse_grain(measurement: POVM, groups: Sequence[Sequence[int]]) -> POVM: ...
@overload
def coarse_grain(measurement: Instrument, groups: Sequence[Sequence[int]]) -> Instrument: ...

def coarse_grain(measurement, groups):
    """Merge outcomes.

    Parameters
    ----------
    measurement : Union[:class:`POVM`, :class:`Instrument`]
        The measurement whose outcomes are grouped.
    groups : Sequence[Sequence[:class:`int`]]
        A partition of the outcome indices; group ``i`` becomes outcome ``i``.

    Returns
    -------
    Union[:class:`POVM`, :class:`Instrument`]
        Same kind as ``measurement``. Merged Kraus groups are concatenated.
    """
    flat = sorted(k for g in groups for k in g)
    if flat != list(range(len(measurement))):
        raise ValueError(f"groups {groups} do not partition {len(measurement)} outcomes")
    if isinstance(measurement, POVM):
        return POVM(tuple(sum(measurement.elements[k] for k in g) for g in groups),
                    tolerances=measurement.tolerances)
    return Instrument(tuple(tuple(a for k in g for a in measurement.kraus_groups[k]) for g in groups),
                      destructive=measurement.destructive)


def sequential_instrument(first: Instrument, follow_up: Mapping[int, Instrument]) -> Instrument:
    """Compose a measurement with follow-up measurements chosen by its outcome.

    Outcome ``k`` of ``first`` with a follow-up ``B`` splits into outcomes
    ``(k, m)`` with Kraus operators ``B_mi A_kl``; outcomes without a
    follow-up stay as they are. The composite is destructive if any stage
    that is reached is.

    Raises
    ------
    :exc:`erdtools.errors.DestructiveMeasurement`
        A follow-up is attached to a destructive first stage.
    """
    if first.destructive and follow_up:
        raise DestructiveMeasurement("cannot measure again after a destructive detector")
    groups = []
    labels = []
    destructive = first.destructive
    for k, (group, label) in enumerate(zip(first.kraus_groups, first.outcome_labels)):
        second = follow_up.get(k)
        if second is None:
            groups.append(group)
            labels.append(label)
            continue
        out_dim = group[0].shape[0]
        if second.dim != out_dim:
            raise DimensionMismatch(f"follow-up of outcome {k} expects dimension {second.dim}, stage output is {out_dim}")
        destructive = destructive or second.destructive
        for sub_group, sub_label in zip(second.kraus_groups, second.outcome_labels):
            groups.append(tuple(b @ a for b in sub_group for a in group))
            labels.append(label + sub_label)
    return Instrument(tuple(groups), destructive=destructive, outcome_labels=tuple(labels))
