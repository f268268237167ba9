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
"""Accessible information by numerical search over rank-one POVMs.

A rank-one POVM with ``M`` elements on a ``d``-dimensional support is the
set of columns ``w_k`` of a ``d x M`` matrix ``W`` with ``W W^dagger = 1``.
The search does projected gradient ascent on that manifold, returning to
it by the polar decomposition after every step. ``M = d**2`` elements
suffice for the optimum.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
import scipy.linalg

from .config import DEFAULT_SETTINGS, OptimizerConfig, Settings
from .errors import InvalidEnsemble, NotConverged
from .info import accessible_info_binary_pure, binary_pure_overlap_sq, joint_mutual_information
from .measure import POVM, Ensemble, statistical_operator

__all__ = (
    "AccessibleInfoResult",
    "accessible_info_numeric",
    "accessible_information",
    "AccessibleInfoOracle",
)

_log = logging.getLogger(__name__)

_LN2 = math.log(2.0)

AccessibleInfoOracle = Callable[[Ensemble], float]


@dataclass(frozen=True)
class AccessibleInfoResult:
    """Outcome of :func:`accessible_info_numeric`.

    Attributes
    ----------
    value : :class:`float`
        Best mutual information found, a lower bound on the accessible information.
    povm : :class:`erdtools.measure.POVM`
        The POVM attaining ``value``, on the full space of the ensemble.
    converged : :class:`bool`
        Whether the best start reached the gradient tolerance.
    grad_norm : :class:`float`
        Projected gradient norm of the best start when it stopped.
    start : :class:`int`
        Index of the winning start.
    iterations : :class:`int`
        Ascent steps taken by the winning start.
    """
    value: float
    povm: POVM
    converged: bool
    grad_norm: float
    start: int
    iterations: int


def _support(ens: Ensemble) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of the support of ``rho`` and the states restricted to it."""
    rho = statistical_operator(ens)
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    basis = vecs[:, vals > 1e-12 * max(1.0, float(vals[-1]))]
    reduced = np.stack([basis.conj().T @ ens.density(j) @ basis for j in range(len(ens))])
    return basis, reduced


def _project(z: np.ndarray) -> np.ndarray:
    return scipy.linalg.polar(z, side="left")[0]


class _Objective:
    """Mutual information of the columns of ``W`` and its Euclidean gradient."""

    def __init__(self, priors: np.ndarray, states: np.ndarray) -> None:
        self.priors = priors
        self.states = states

    def table(self, w: np.ndarray) -> np.ndarray:
        expect = np.einsum("ak,jab,bk->jk", w.conj(), self.states, w).real
        return np.clip(self.priors[:, None] * expect, 0.0, None)

    def value(self, w: np.ndarray) -> float:
        return joint_mutual_information(self.table(w))

    def gradient(self, w: np.ndarray) -> np.ndarray:
        table = self.table(w)
        marg = np.outer(self.priors, table.sum(axis=0))
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.where((table > 0) & (marg > 0), np.log(table / marg), 0.0) / _LN2
        return 2.0 * np.einsum("jk,j,jab,bk->ak", logs, self.priors, self.states, w)


def _ascend(objective: _Objective, w: np.ndarray, cfg: OptimizerConfig) -> Tuple[np.ndarray, float, float, int, bool]:
    value = objective.value(w)
    step = cfg.initial_step
    grad_norm = float("inf")
    for iteration in range(1, cfg.max_iter + 1):
        grad = objective.gradient(w)
        herm = grad @ w.conj().T
        direction = grad - 0.5 * (herm + herm.conj().T) @ w
        grad_norm = float(np.linalg.norm(direction))
        if grad_norm < cfg.grad_tol:
            return w, value, grad_norm, iteration, True
        # backtracking (Armijo)
        while step > 1e-16:
            trial = _project(w + step * direction)
            trial_value = objective.value(trial)
            if trial_value >= value + 1e-4 * step * grad_norm ** 2:
                w, value = trial, trial_value
                step = min(2.0 * step, 1e3)
                break
            step /= 2.0
        else:
            # no ascent step left at machine precision
            return w, value, grad_norm, iteration, grad_norm < math.sqrt(cfg.grad_tol)
    return w, value, grad_norm, cfg.max_iter, False


def accessible_info_numeric(ens: Ensemble, settings: Optional[Settings] = None,
                            workers: int = 1, strict: bool = False) -> AccessibleInfoResult:
    """Lower bound on the accessible information from the best POVM found.

    Multi-start projected gradient ascent over rank-one POVMs with ``d**2``
    elements, ``d`` being the support dimension of the ensemble. Start ``i``
    is seeded with ``seed + i``; the best value wins, ties going to the
    lower start index, so the result does not depend on ``workers``.

    Parameters
    ----------
    ens : :class:`erdtools.measure.Ensemble`
        The signal ensemble.
    settings : Optional[:class:`erdtools.config.Settings`]
        Uses ``settings.optimizer``.
    workers : :class:`int`
        Starts evaluated concurrently.
    strict : :class:`bool`
        Raise :exc:`erdtools.errors.NotConverged` instead of returning an
        unconverged result.

    Raises
    ------
    :exc:`erdtools.errors.InvalidEnsemble`
        The support dimension exceeds ``max_dim``.
    :exc:`erdtools.errors.NotConverged`
        Only when ``strict``; carries the best value and POVM.
    """
    cfg = (settings or DEFAULT_SETTINGS).optimizer
    basis, reduced = _support(ens)
    dim = basis.shape[1]
    if dim > cfg.max_dim:
        raise InvalidEnsemble(f"support dimension {dim} exceeds max_dim={cfg.max_dim}")
    complement = np.eye(ens.dim) - basis @ basis.conj().T
    if dim <= 1:
        return AccessibleInfoResult(0.0, POVM((np.eye(ens.dim),), tolerances=ens.tolerances),
                                    True, 0.0, 0, 0)

    objective = _Objective(np.asarray(ens.priors), reduced)
    n_elements = dim * dim

    def run(start: int) -> Tuple[np.ndarray, float, float, int, bool]:
        rng = np.random.default_rng(cfg.seed + start)
        z = rng.standard_normal((dim, n_elements)) + 1j * rng.standard_normal((dim, n_elements))
        return _ascend(objective, _project(z), cfg)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results: List[Tuple[np.ndarray, float, float, int, bool]] = list(pool.map(run, range(cfg.starts)))
    else:
        results = [run(i) for i in range(cfg.starts)]

    best = 0
    for i, res in enumerate(results):
        _log.debug("start %d: %.15f bits, |grad|=%.2e after %d steps", i, res[1], res[2], res[3])
        if res[1] > results[best][1]:
            best = i
    w, value, grad_norm, iterations, converged = results[best]

    elements = [basis @ np.outer(w[:, k], w[:, k].conj()) @ basis.conj().T for k in range(n_elements)]
    elements[0] = elements[0] + complement
    povm = POVM(tuple(elements), tolerances=ens.tolerances)
    if not converged:
        _log.warning("accessible information search stopped at %.12f bits (|grad|=%.2e)", value, grad_norm)
        if strict:
            raise NotConverged(value, povm, grad_norm)
    return AccessibleInfoResult(value, povm, converged, grad_norm, best, iterations)


def accessible_information(ens: Ensemble, settings: Optional[Settings] = None) -> float:
    """Accessible information, exact where a closed form exists.

    Single-state ensembles carry none; binary pure ensembles use the
    Helstrom closed form; anything else goes to :func:`accessible_info_numeric`.
    """
    support = [j for j, p in enumerate(ens.priors) if p > 0]
    if len(support) <= 1:
        return 0.0
    if len(ens) == 2 and ens.all_pure:
        return accessible_info_binary_pure(binary_pure_overlap_sq(ens), ens.priors)
    return accessible_info_numeric(ens, settings).value
