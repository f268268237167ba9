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
"""Entropies, mutual information and the binary closed forms.

All logarithms are base 2.
"""
from __future__ import annotations

import logging
import math
from typing import Sequence, Tuple

import numpy as np
from scipy.special import xlogy

from .errors import DegenerateEnsemble, InvalidDistribution, InvalidEnsemble
from .measure import POVM, Ensemble, outcome_probabilities

__all__ = (
    "shannon_entropy",
    "binary_entropy",
    "von_neumann_entropy",
    "joint_mutual_information",
    "mutual_information",
    "two_element_mutual_info",
    "binary_error_probs",
    "helstrom_error_probs",
    "helstrom_avg_error",
    "accessible_info_binary_pure",
    "binary_pure_overlap_sq",
    "holevo_quantity",
)

_log = logging.getLogger(__name__)

_LN2 = math.log(2.0)

Priors = Tuple[float, float]


def _entropy_bits(p: np.ndarray) -> float:
    return float(-np.sum(xlogy(p, p)) / _LN2)


def shannon_entropy(dist: Sequence[float]) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``.

    Raises
    ------
    :exc:`erdtools.errors.InvalidDistribution`
        Negative entries, or a total differing from one by more than 1e-9.
    """
    p = np.asarray(dist, dtype=float).ravel()
    if p.size == 0 or np.min(p) < 0 or abs(float(p.sum()) - 1.0) > 1e-9:
        raise InvalidDistribution(f"{list(p)} is not a probability distribution")
    return _entropy_bits(p)


def binary_entropy(p: float) -> float:
    """``H(p) = -p log p - (1-p) log(1-p)``."""
    if not 0.0 <= p <= 1.0:
        raise InvalidDistribution(f"binary probability {p} outside [0, 1]")
    return _entropy_bits(np.array([p, 1.0 - p]))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """``S(rho)`` in bits from the eigenvalues, negative round-off clipped to zero."""
    vals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return _entropy_bits(np.clip(vals, 0.0, None))


def joint_mutual_information(table: np.ndarray) -> float:
    """Mutual information of a joint probability table ``P[j, k]``.

    ``H(rows) + H(columns) - H(joint)``, which equals
    ``H(E) - sum_k P_k H(E | k)``.
    """
    table = np.asarray(table, dtype=float)
    return _entropy_bits(table.sum(axis=1)) + _entropy_bits(table.sum(axis=0)) - _entropy_bits(table.ravel())


def mutual_information(ens: Ensemble, povm: POVM) -> float:
    """Information shared between the signal label and the outcome of ``povm``."""
    return joint_mutual_information(outcome_probabilities(ens, povm))


def two_element_mutual_info(r1: float, r2: float, priors: Sequence[float]) -> float:
    """Mutual information of a two-outcome decision with error probabilities ``r1``, ``r2``.

    ``H(eta_1) - P_1 H(eta_2 r_2 / P_1) - P_2 H(eta_1 r_1 / P_2)`` with
    ``P_1 = eta_1 (1 - r_1) + eta_2 r_2``.
    """
    for r in (r1, r2):
        if not 0.0 <= r <= 1.0:
            raise InvalidDistribution(f"error probability {r} outside [0, 1]")
    eta1, eta2 = float(priors[0]), float(priors[1])
    p1 = eta1 * (1.0 - r1) + eta2 * r2
    p2 = 1.0 - p1
    info = binary_entropy(eta1)
    if p1 > 0:
        info -= p1 * binary_entropy(min(max(eta2 * r2 / p1, 0.0), 1.0))
    if p2 > 0:
        info -= p2 * binary_entropy(min(max(eta1 * r1 / p2, 0.0), 1.0))
    return info


def binary_error_probs(ens: Ensemble, povm: POVM) -> Tuple[float, float]:
    """``(r1, r2) = (tr(Pi_2 rho_1), tr(Pi_1 rho_2))`` for a two-outcome POVM.

    The error of a signal with zero prior is reported as 0.
    """
    if len(ens) != 2 or len(povm) != 2:
        raise InvalidEnsemble(f"need a binary ensemble and a two-element POVM, got {len(ens)} and {len(povm)}")
    table = outcome_probabilities(ens, povm)
    eta1, eta2 = ens.priors
    r1 = float(table[0, 1] / eta1) if eta1 > 0 else 0.0
    r2 = float(table[1, 0] / eta2) if eta2 > 0 else 0.0
    return r1, r2


def helstrom_error_probs(overlap_sq: float, priors: Sequence[float], strict: bool = False) -> Tuple[float, float]:
    """Error probabilities of the Helstrom measurement on two pure states.

    ``r_{1,2} = (1 - (1 - 2 eta_{2,1} s) / sqrt(1 - 4 eta_1 eta_2 s)) / 2``
    with ``s = |<psi_1|psi_2>|^2``.

    Parameters
    ----------
    overlap_sq : :class:`float`
        Squared overlap of the two states.
    priors : Sequence[:class:`float`]
        ``(eta_1, eta_2)``.
    strict : :class:`bool`
        Raise instead of returning ``(1/2, 1/2)`` for identical states with equal priors.

    Raises
    ------
    :exc:`erdtools.errors.DegenerateEnsemble`
        Only when ``strict`` and ``4 eta_1 eta_2 s = 1``.
    """
    if not 0.0 <= overlap_sq <= 1.0:
        raise InvalidDistribution(f"squared overlap {overlap_sq} outside [0, 1]")
    eta1, eta2 = float(priors[0]), float(priors[1])
    root_sq = 1.0 - 4.0 * eta1 * eta2 * overlap_sq
    if root_sq <= 1e-15:
        if strict:
            raise DegenerateEnsemble("identical states with equal priors")
        return 0.5, 0.5
    root = math.sqrt(root_sq)
    r1 = 0.5 * (1.0 - (1.0 - 2.0 * eta2 * overlap_sq) / root)
    r2 = 0.5 * (1.0 - (1.0 - 2.0 * eta1 * overlap_sq) / root)
    return min(max(r1, 0.0), 1.0), min(max(r2, 0.0), 1.0)


def helstrom_avg_error(overlap_sq: float, priors: Sequence[float]) -> float:
    """The Helstrom bound ``(1 - sqrt(1 - 4 eta_1 eta_2 s)) / 2``."""
    eta1, eta2 = float(priors[0]), float(priors[1])
    return 0.5 * (1.0 - math.sqrt(max(1.0 - 4.0 * eta1 * eta2 * overlap_sq, 0.0)))


def accessible_info_binary_pure(overlap_sq: float, priors: Sequence[float]) -> float:
    """Accessible information of two pure states: the Helstrom measurement is information-optimal."""
    r1, r2 = helstrom_error_probs(overlap_sq, priors)
    return two_element_mutual_info(r1, r2, priors)


def binary_pure_overlap_sq(ens: Ensemble) -> float:
    """``|<psi_1|psi_2>|^2`` of a binary pure ensemble."""
    if len(ens) != 2 or not ens.all_pure:
        raise InvalidEnsemble("expected two pure states")
    return min(abs(np.vdot(ens.vector(0), ens.vector(1))) ** 2, 1.0)


def holevo_quantity(ens: Ensemble) -> float:
    """``chi = S(rho) - sum_j eta_j S(rho_j)``.

    For pure ensembles ``S(rho)`` is taken from the Gram matrix
    ``sqrt(eta_i eta_j) <psi_i|psi_j>``, which shares its non-zero spectrum
    with ``rho`` and is only ``N x N``.
    """
    if ens.all_pure:
        vecs = np.stack([math.sqrt(p) * ens.vector(j) for j, p in enumerate(ens.priors)], axis=1)
        return von_neumann_entropy(vecs.conj().T @ vecs)
    rho = sum(p * ens.density(j) for j, p in enumerate(ens.priors))
    return von_neumann_entropy(rho) - sum(p * von_neumann_entropy(ens.density(j))
                                          for j, p in enumerate(ens.priors))
