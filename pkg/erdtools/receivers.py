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
"""Receivers for the binary coherent signals ``{|alpha>, |-alpha>}``.

The amplitude is taken real and non-negative; a complex ``alpha`` is
rotated onto the real axis, a global phase that carries no information.
Quadratures are ``x = (a + a^dagger) / 2`` so the vacuum has variance 1/4.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad
from scipy.optimize import minimize_scalar
from scipy.special import erfc, expit
from scipy.stats import poisson

from .breakdown import InfoBreakdown, erd_breakdown
from .config import DEFAULT_SETTINGS, QuadratureConfig, Settings
from .errors import InvalidEnsemble, NonUnitary, OptimizationFailed, QuadratureNotConverged
from .fock import Operator, coherent_state, default_n_max, displacement, jc_unitary, qubit_state
from .info import (accessible_info_binary_pure, binary_entropy, helstrom_avg_error, joint_mutual_information,
                   mutual_information, two_element_mutual_info)
from .measure import POVM, Ensemble, Instrument, coarse_grain, induced_povm, outcome_probabilities, sequential_instrument

__all__ = (
    "BinaryCoherentScenario",
    "ReceiverResult",
    "GROUND",
    "EXCITED",
    "PLUS_I",
    "MINUS_I",
    "homodyne_hard",
    "homodyne_soft",
    "homodyne_soft_information",
    "homodyne_threshold_povm",
    "hermite_functions",
    "pnrd_receiver",
    "pnrd_instrument",
    "kennedy",
    "neumark_instrument",
    "atomic_receiver_optimal",
    "atomic_receiver_unambiguous",
)

_log = logging.getLogger(__name__)

GROUND = qubit_state(1, 0)
EXCITED = qubit_state(0, 1)
# (|g> - i|e>)/sqrt(2) and (|g> + i|e>)/sqrt(2)
MINUS_I = qubit_state(1, -1j)
PLUS_I = qubit_state(1, 1j)

Theta = Union[float, str]


@dataclass(frozen=True)
class BinaryCoherentScenario:
    """Binary coherent signals with priors.

    Attributes
    ----------
    alpha : :class:`complex`
        Field amplitude; ``|alpha|^2`` is the mean photon number.
    priors : Tuple[:class:`float`, :class:`float`]
        ``(eta_1, eta_2)`` for ``|alpha>`` and ``|-alpha>``.
    n_max : Optional[:class:`int`]
        Fock truncation; chosen from the largest mean photon number in play when omitted.
    settings : :class:`erdtools.config.Settings`
        Numerical settings.
    """
    alpha: complex
    priors: Tuple[float, float] = (0.5, 0.5)
    n_max: Optional[int] = None
    settings: Settings = field(default=DEFAULT_SETTINGS, repr=False, compare=False)

    def __post_init__(self) -> None:
        priors = tuple(float(p) for p in self.priors)
        if len(priors) != 2 or min(priors) < 0 or abs(sum(priors) - 1.0) > self.settings.tolerances.prior_tol:
            raise InvalidEnsemble(f"priors {self.priors} are not a binary distribution")
        object.__setattr__(self, "priors", priors)

    @classmethod
    def from_mean_photons(cls, alpha_sq: float, priors: Sequence[float] = (0.5, 0.5),
                          n_max: Optional[int] = None, settings: Optional[Settings] = None) -> BinaryCoherentScenario:
        if alpha_sq < 0:
            raise ValueError(f"mean photon number must be non-negative, got {alpha_sq}")
        return cls(math.sqrt(alpha_sq), (priors[0], priors[1]), n_max, settings or DEFAULT_SETTINGS)

    @property
    def amplitude(self) -> float:
        """:class:`float`: ``|alpha|``."""
        return abs(self.alpha)

    @property
    def mean_photons(self) -> float:
        return self.amplitude ** 2

    @property
    def overlap_sq(self) -> float:
        """:class:`float`: ``|<alpha|-alpha>|^2 = exp(-4|alpha|^2)``."""
        return math.exp(-4.0 * self.mean_photons)

    @property
    def i_acc(self) -> float:
        """:class:`float`: Accessible information of the signals, in closed form."""
        return accessible_info_binary_pure(self.overlap_sq, self.priors)

    @property
    def helstrom_error(self) -> float:
        return helstrom_avg_error(self.overlap_sq, self.priors)

    def truncation(self, mean_photons: Optional[float] = None) -> int:
        """The Fock cutoff for states of the given mean photon number (default ``|alpha|^2``)."""
        if self.n_max is not None:
            return self.n_max
        return default_n_max(self.mean_photons if mean_photons is None else mean_photons)

    def ensemble(self, beta: float = 0.0, n_max: Optional[int] = None) -> Ensemble:
        """The signals displaced by a real ``beta``: ``{|alpha + beta>, |beta - alpha>}``.

        For real amplitudes the displacement adds no phase, so this is
        ``D(beta)`` applied exactly.
        """
        a = self.amplitude
        cutoff = n_max if n_max is not None else self.truncation(max((a + beta) ** 2, (beta - a) ** 2))
        tol = self.settings.tolerances
        return Ensemble.of((coherent_state(a + beta, cutoff, tol), coherent_state(beta - a, cutoff, tol)),
                           self.priors, tol)

    def check_overlap(self, n_max: Optional[int] = None) -> float:
        """Deviation of the truncated ``|<alpha|-alpha>|^2`` from the closed form."""
        ens = self.ensemble(n_max=n_max)
        return abs(abs(np.vdot(ens.vector(0), ens.vector(1))) ** 2 - self.overlap_sq)


@dataclass(frozen=True)
class ReceiverResult:
    """What a receiver achieves on one scenario.

    Attributes
    ----------
    scheme : :class:`str`
        Receiver name.
    breakdown : :class:`erdtools.breakdown.InfoBreakdown`
        Extracted / residual / destroyed split.
    error_probs : Tuple[:class:`float`, :class:`float`]
        ``(r1, r2)``; success probabilities are ``1 - r``.
    avg_error : :class:`float`
        ``eta_1 r1 + eta_2 r2``.
    instrument : Optional[:class:`erdtools.measure.Instrument`]
        The instrument, for receivers built from one.
    stage_infos : Tuple[:class:`float`, ...]
        Cumulative mutual information after each stage of sequential schemes.
    thetas : Tuple[:class:`float`, ...]
        Interaction angles of atomic receivers, one per stage.
    beta : Optional[:class:`float`]
        Displacement of photon counting receivers.
    """
    scheme: str
    breakdown: InfoBreakdown
    error_probs: Tuple[float, float]
    avg_error: float
    instrument: Optional[Instrument] = None
    stage_infos: Tuple[float, ...] = ()
    thetas: Tuple[float, ...] = ()
    beta: Optional[float] = None


def _result(scheme: str, scenario: BinaryCoherentScenario, breakdown: InfoBreakdown,
            r1: float, r2: float, **kwargs) -> ReceiverResult:
    eta1, eta2 = scenario.priors
    return ReceiverResult(scheme, breakdown, (r1, r2), eta1 * r1 + eta2 * r2, **kwargs)


def _destructive_breakdown(scenario: BinaryCoherentScenario, info: float) -> InfoBreakdown:
    # no post-measurement state: I'_max = I, so R = 0 exactly
    return InfoBreakdown.from_values(info, scenario.i_acc, info, eps_info=scenario.settings.tolerances.eps_info)


## Homodyne ##

def homodyne_hard(scenario: BinaryCoherentScenario) -> ReceiverResult:
    """Homodyne detection with a decision on the sign of the quadrature.

    ``r1 = r2 = [1 - erf(sqrt(2)|alpha|)] / 2``.

    Raises
    ------
    :exc:`erdtools.errors.ZeroAccessibleInfo`
        ``alpha = 0``.
    """
    r = 0.5 * float(erfc(math.sqrt(2.0) * scenario.amplitude))
    info = two_element_mutual_info(r, r, scenario.priors)
    return _result("homodyne-hard", scenario, _destructive_breakdown(scenario, info), r, r)


def homodyne_soft_information(scenario: BinaryCoherentScenario, quad_cfg: Optional[QuadratureConfig] = None) -> float:
    """Mutual information when every quadrature value is kept.

    ``H(eta) - int dx p(x) H(eta_1 p_1(x) / p(x))`` with likelihoods
    ``p_{1,2}(x) = sqrt(2/pi) exp(-2 (x -+ |alpha|)^2)``.

    Raises
    ------
    :exc:`erdtools.errors.QuadratureNotConverged`
        :func:`scipy.integrate.quad` reported a problem.
    """
    cfg = quad_cfg or scenario.settings.quadrature
    a = scenario.amplitude
    eta1, eta2 = scenario.priors
    if a == 0.0 or eta1 == 0.0 or eta2 == 0.0:
        return 0.0
    log_ratio = math.log(eta1 / eta2)
    norm = math.sqrt(2.0 / math.pi)

    def integrand(x: float) -> float:
        density = norm * (eta1 * math.exp(-2.0 * (x - a) ** 2) + eta2 * math.exp(-2.0 * (x + a) ** 2))
        # posterior of |alpha> is a logistic function of x
        return density * binary_entropy(float(expit(8.0 * a * x + log_ratio)))

    lo, hi = -a - cfg.half_width, a + cfg.half_width
    out = quad(integrand, lo, hi, epsabs=cfg.epsabs, epsrel=1e-12, limit=cfg.limit,
               points=sorted({-a, 0.0, a}), full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3:
        raise QuadratureNotConverged(value, abserr, str(out[3]))
    return binary_entropy(eta1) - value


def homodyne_soft(scenario: BinaryCoherentScenario, quad_cfg: Optional[QuadratureConfig] = None) -> ReceiverResult:
    """Homodyne detection keeping the full quadrature value.

    Error probabilities are those of the sign decision.
    """
    info = homodyne_soft_information(scenario, quad_cfg)
    r = 0.5 * float(erfc(math.sqrt(2.0) * scenario.amplitude))
    return _result("homodyne-soft", scenario, _destructive_breakdown(scenario, info), r, r)


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Quadrature wavefunctions ``<x|n>`` for ``n = 0..n_max``, shape ``(n_max + 1, len(x))``.

    Normalized for ``x = (a + a^dagger)/2``: ``|<x|0>|^2 = sqrt(2/pi) exp(-2 x^2)``.
    """
    y = math.sqrt(2.0) * np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, y.size))
    out[0] = math.pi ** -0.25 * np.exp(-0.5 * y * y)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for n in range(1, n_max):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * y * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return 2.0 ** 0.25 * out


def homodyne_threshold_povm(n_max: int, threshold: float = 0.0, settings: Optional[Settings] = None) -> POVM:
    """``{Pi(x > threshold), Pi(x <= threshold)}`` on the truncated Fock space.

    Matrix elements ``int_threshold^inf <m|x><x|n> dx`` by Gauss-Legendre
    quadrature; the second element is the complement, so the POVM is
    complete by construction.
    """
    reach = math.sqrt(n_max + 1.0) + 8.0
    upper = max(threshold, 0.0) + reach
    lower = threshold
    nodes, weights = leggauss(4 * n_max + 200)
    x = 0.5 * (upper - lower) * nodes + 0.5 * (upper + lower)
    w = 0.5 * (upper - lower) * weights
    psi = hermite_functions(n_max, x)
    above = (psi * w) @ psi.T
    tol = (settings or DEFAULT_SETTINGS).tolerances
    return POVM((above, np.eye(n_max + 1) - above), tolerances=tol)


## Photon counting ##

def pnrd_instrument(beta: float, n_max: int, mode: str = "hard", settings: Optional[Settings] = None) -> Instrument:
    """Displacement by ``beta`` followed by photon counting.

    ``hard`` has outcomes (click, no click); ``soft`` one outcome per Fock
    state ``0..n_max``. The detector absorbs the field, so the instrument is
    destructive.
    """
    disp = displacement(beta, n_max, (settings or DEFAULT_SETTINGS).tolerances).matrix
    vacuum = np.zeros((n_max + 1, n_max + 1))
    vacuum[0, 0] = 1.0
    if mode == "hard":
        return Instrument((((np.eye(n_max + 1) - vacuum) @ disp,), (vacuum @ disp,)), destructive=True)
    if mode == "soft":
        groups = []
        for n in range(n_max + 1):
            proj = np.zeros((n_max + 1, n_max + 1))
            proj[n, n] = 1.0
            groups.append((proj @ disp,))
        return Instrument(tuple(groups), destructive=True)
    raise ValueError(f"mode must be 'hard' or 'soft', got {mode!r}")


def _poisson_table(means: Tuple[float, float], priors: Tuple[float, float], tail: float = 1e-12) -> np.ndarray:
    """Joint table of signal and photon count; the last column holds the tail beyond the cut."""
    cutoff = 1 + max((int(poisson.isf(tail, m)) for m in means if m > 0), default=0)
    counts = np.arange(cutoff + 1)
    rows = []
    for mean, prior in zip(means, priors):
        if mean > 0:
            pmf = poisson.pmf(counts, mean)
            pmf[-1] = poisson.sf(cutoff - 1, mean)
        else:
            pmf = np.zeros(cutoff + 1)
            pmf[0] = 1.0
        rows.append(prior * pmf)
    return np.array(rows)


def pnrd_receiver(scenario: BinaryCoherentScenario, beta: Optional[float] = None, mode: str = "hard") -> ReceiverResult:
    """Photon-number-resolving receiver with displacement ``D(beta)``.

    Parameters
    ----------
    scenario : :class:`BinaryCoherentScenario`
        The signals.
    beta : Optional[:class:`float`]
        Displacement; ``None`` selects the Kennedy point ``beta = |alpha|``.
    mode : :class:`str`
        ``"hard"`` decides on click / no click: ``r1 = exp(-|alpha+beta|^2)``,
        ``r2 = 1 - exp(-|beta-alpha|^2)``. ``"soft"`` keeps the photon count;
        its error probabilities are those of the maximum a-posteriori decision.

    Raises
    ------
    :exc:`erdtools.errors.ZeroAccessibleInfo`
        ``alpha = 0``.
    """
    a = scenario.amplitude
    b = a if beta is None else float(beta)
    means = ((a + b) ** 2, (b - a) ** 2)
    eta1, eta2 = scenario.priors
    if mode == "hard":
        r1, r2 = math.exp(-means[0]), 1.0 - math.exp(-means[1])
        info = two_element_mutual_info(r1, r2, scenario.priors)
    elif mode == "soft":
        table = _poisson_table(means, (eta1, eta2))
        info = joint_mutual_information(table)
        decide_first = table[0] > table[1]
        r1 = float(table[0][~decide_first].sum() / eta1) if eta1 > 0 else 0.0
        r2 = float(table[1][decide_first].sum() / eta2) if eta2 > 0 else 0.0
    else:
        raise ValueError(f"mode must be 'hard' or 'soft', got {mode!r}")
    name = f"pnrd-{mode}"
    return _result(name, scenario, _destructive_breakdown(scenario, info), r1, r2, beta=b)


def kennedy(scenario: BinaryCoherentScenario) -> ReceiverResult:
    """The Kennedy receiver: displace ``|-alpha>`` to vacuum and look for a click.

    ``r2 = 0``; with ``beta = alpha`` every click identifies ``|alpha>``, so
    resolving the photon number adds nothing to the hard decision.
    """
    return replace(pnrd_receiver(scenario, None, "hard"), scheme="kennedy")


## Atomic receivers ##

def neumark_instrument(unitary: Operator, ancilla_init: np.ndarray, ancilla_basis: Sequence[np.ndarray],
                       settings: Optional[Settings] = None) -> Instrument:
    """Measure a qubit ancilla after it interacted with the field.

    ``A_k = (1 ⊗ <b_k|) U (1 ⊗ |i>)``.

    Parameters
    ----------
    unitary : :class:`erdtools.fock.Operator`
        Field ⊗ qubit unitary.
    ancilla_init : :class:`numpy.ndarray`
        Initial ancilla state ``|i>``.
    ancilla_basis : Sequence[:class:`numpy.ndarray`]
        Orthonormal ancilla basis ``{|b_1>, |b_2>}``.

    Raises
    ------
    :exc:`erdtools.errors.NonUnitary`
        ``U`` is not unitary within ``tau_unit``.
    """
    tol = (settings or DEFAULT_SETTINGS).tolerances
    if not unitary.qubit:
        raise ValueError("the unitary must act on field ⊗ qubit")
    defect = unitary.unitarity_defect()
    if defect > tol.tau_unit:
        raise NonUnitary(defect)
    basis = np.array([np.asarray(b, dtype=complex) for b in ancilla_basis])
    if np.max(np.abs(basis.conj() @ basis.T - np.eye(len(basis)))) > tol.tau_unit:
        raise ValueError("ancilla basis is not orthonormal")
    dim = unitary.n_max + 1
    blocks = unitary.matrix.reshape(dim, 2, dim, 2)
    init = np.asarray(ancilla_init, dtype=complex)
    return Instrument(tuple((np.einsum("q,nqmp,p->nm", b.conj(), blocks, init),) for b in basis))


def _ground_amplitudes(theta: float, n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """``cos(theta sqrt n)`` and ``sin(theta sqrt n)``: the JC amplitudes of ``|n>|g>``."""
    root = theta * np.sqrt(np.arange(n_max + 1))
    return np.cos(root), np.sin(root)


def _scan_minimize(func: Callable[[float], float], lo: float, hi: float, points: int = 256,
                   restarts: int = 3, xatol: float = 1e-9) -> Tuple[float, float]:
    """Global minimum of a smooth scalar function on ``[lo, hi]``.

    A grid scan brackets the ``restarts`` lowest local minima, each refined
    by a bounded Brent search; the lowest result wins, ties to smaller x.
    """
    grid = np.linspace(lo, hi, points)
    values = np.array([func(float(x)) for x in grid])
    order = [i for i in np.argsort(values, kind="stable")
             if (i == 0 or values[i] <= values[i - 1]) and (i == points - 1 or values[i] <= values[i + 1])]
    best_x, best_val = float(grid[order[0]]), float(values[order[0]])
    refined = 0
    for i in order[:restarts]:
        left, right = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, points - 1)])
        res = minimize_scalar(func, bounds=(left, right), method="bounded", options={"xatol": xatol})
        if not res.success:
            continue
        refined += 1
        if res.fun < best_val - 1e-15 or (abs(res.fun - best_val) <= 1e-15 and res.x < best_x):
            best_x, best_val = float(res.x), float(res.fun)
    if refined == 0:
        raise OptimizationFailed(f"no bounded search converged on [{lo}, {hi}]")
    return best_x, best_val


def _theta_max(n_max: int) -> float:
    return 8.0 * math.pi / math.sqrt(n_max)


def atomic_receiver_optimal(scenario: BinaryCoherentScenario, theta: Theta = "auto") -> ReceiverResult:
    """Minimum-error atomic receiver.

    The atom starts in ``|g>``, interacts with the field through
    :func:`erdtools.fock.jc_unitary` and is projected onto
    ``(|g> -+ i|e>)/sqrt(2)``; the first outcome decides ``|alpha>``.
    The measurement acts on the atom only, so the field keeps whatever
    information was not extracted.

    Parameters
    ----------
    theta : Union[:class:`float`, :class:`str`]
        Interaction angle, or ``"auto"`` to minimize the average error.

    Raises
    ------
    :exc:`erdtools.errors.OptimizationFailed`
        The angle search failed.
    :exc:`erdtools.errors.ZeroAccessibleInfo`
        ``alpha = 0``.
    """
    n_max = scenario.truncation()
    ens = scenario.ensemble(n_max=n_max)
    amps = ens.vector(0).real
    eta1, eta2 = scenario.priors

    def avg_error(t: float) -> float:
        # <alpha|X|alpha> with X = C S' + S'^dagger C; both errors equal (1 - x)/2
        cos, sin = _ground_amplitudes(t, n_max)
        x = 2.0 * float(np.sum(amps[:-1] * amps[1:] * cos[:-1] * sin[1:]))
        return 0.5 * (1.0 - x)

    if theta == "auto":
        best, err = _scan_minimize(avg_error, 1e-4, _theta_max(n_max))
        _log.debug("atomic optimal |alpha|^2=%g: theta=%.9f error=%.3e", scenario.mean_photons, best, err)
    else:
        best = float(theta)
    instr = neumark_instrument(jc_unitary(best, n_max), GROUND, (MINUS_I, PLUS_I), scenario.settings)
    povm = induced_povm(instr, scenario.settings.tolerances)
    table = outcome_probabilities(ens, povm)
    r1 = float(table[0, 1] / eta1) if eta1 > 0 else 0.0
    r2 = float(table[1, 0] / eta2) if eta2 > 0 else 0.0
    breakdown = erd_breakdown(ens, instr, settings=scenario.settings)
    return _result("atomic-optimal", scenario, breakdown, r1, r2, instrument=instr, thetas=(best,),
                   stage_infos=(breakdown.mutual_info,))


def atomic_receiver_unambiguous(scenario: BinaryCoherentScenario, stages: int = 1,
                                thetas: Union[str, Sequence[float]] = "auto") -> ReceiverResult:
    """Kennedy-type atomic receiver that identifies ``|alpha>`` without error.

    The signals are displaced by ``alpha`` to ``{|2 alpha>, |0>}``. The atom
    starts in ``|g>`` and is measured in ``{|e>, |g>}``; ``|0>|g>`` does not
    evolve, so ``|e>`` can only come from ``|alpha>``. With two stages a
    second atom interacts with the field left behind after ``|g>``, without
    another displacement.

    Parameters
    ----------
    stages : :class:`int`
        1 or 2.
    thetas : Union[:class:`str`, Sequence[:class:`float`]]
        One angle per stage, or ``"auto"``: the first angle minimizes the
        average error, the second maximizes the information after both stages.

    Raises
    ------
    :exc:`erdtools.errors.OptimizationFailed`
        An angle search failed.
    :exc:`erdtools.errors.ZeroAccessibleInfo`
        ``alpha = 0``.
    """
    if stages not in (1, 2):
        raise ValueError(f"stages must be 1 or 2, got {stages}")
    a = scenario.amplitude
    n_max = scenario.truncation(4.0 * a * a)
    ens = scenario.ensemble(beta=a, n_max=n_max)
    weights = np.abs(ens.vector(0)) ** 2
    eta1, eta2 = scenario.priors
    settings = scenario.settings
    if thetas != "auto" and len(thetas) != stages:
        raise ValueError(f"expected {stages} angles, got {len(thetas)}")

    def missed(t: float) -> float:
        return float(np.sum(weights * _ground_amplitudes(t, n_max)[0] ** 2))

    if thetas == "auto":
        theta1, _ = _scan_minimize(missed, 1e-4, _theta_max(n_max))
    else:
        theta1 = float(thetas[0])
    first = neumark_instrument(jc_unitary(theta1, n_max), GROUND, (EXCITED, GROUND), settings)
    info1 = mutual_information(ens, induced_povm(first, settings.tolerances))
    chosen = [theta1]
    instr = first

    if stages == 2:
        left = weights * _ground_amplitudes(theta1, n_max)[0] ** 2

        def lost_info(t: float) -> float:
            detect = float(np.sum(left * _ground_amplitudes(t, n_max)[1] ** 2))
            r1 = min(max(missed(theta1) - detect, 0.0), 1.0)
            return -two_element_mutual_info(r1, 0.0, scenario.priors)

        if thetas == "auto":
            theta2, _ = _scan_minimize(lost_info, 1e-4, _theta_max(n_max))
        else:
            theta2 = float(thetas[1])
        second = neumark_instrument(jc_unitary(theta2, n_max), GROUND, (EXCITED, GROUND), settings)
        instr = sequential_instrument(first, {1: second})
        chosen.append(theta2)
        _log.debug("atomic unambiguous |alpha|^2=%g: thetas=%s", scenario.mean_photons, chosen)

    decisions = coarse_grain(induced_povm(instr, settings.tolerances), [[0], [1]] if stages == 1 else [[0, 1], [2]])
    table = outcome_probabilities(ens, decisions)
    r1 = float(table[0, 1] / eta1) if eta1 > 0 else 0.0
    r2 = float(table[1, 0] / eta2) if eta2 > 0 else 0.0
    breakdown = erd_breakdown(ens, instr, settings=settings)
    stage_infos = (info1,) if stages == 1 else (info1, breakdown.mutual_info)
    return _result("atomic-unambiguous", scenario, breakdown, r1, r2, instrument=instr,
                   stage_infos=stage_infos, thetas=tuple(chosen))
