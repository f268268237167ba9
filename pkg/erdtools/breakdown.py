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
"""Extracted, residual and destroyed fractions of accessible information"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Union

from .accessible import AccessibleInfoOracle, accessible_information
from .config import DEFAULT_SETTINGS, Settings
from .errors import ERDError, OracleFailure, ZeroAccessibleInfo, ZeroProbabilityOutcome
from .info import holevo_quantity, mutual_information, shannon_entropy
from .measure import (POVM, Ensemble, Instrument, helstrom_povm, induced_povm, outcome_probabilities,
                      post_measurement_ensemble)

__all__ = (
    "InfoBreakdown",
    "BoundsChain",
    "i_prime_max",
    "erd_breakdown",
    "bounds_chain",
    "EXACT",
    "HELSTROM",
)

_log = logging.getLogger(__name__)

EXACT = "exact"
HELSTROM = "helstrom"

Reference = Union[str, POVM]


@dataclass(frozen=True)
class InfoBreakdown:
    """How a measurement splits the accessible information.

    Attributes
    ----------
    mutual_info : :class:`float`
        ``I``, bits extracted by the measurement.
    i_acc : :class:`float`
        The normalizer: the accessible information, or the mutual information
        of the reference measurement named by ``reference_label``.
    i_prime_max : :class:`float`
        Best total information after optimal follow-up measurements.
    extracted : :class:`float`
        ``I / i_acc``.
    residual : :class:`float`
        ``(i_prime_max - I) / i_acc``.
    destroyed : :class:`float`
        ``(i_acc - i_prime_max) / i_acc``.
    reference_label : :class:`str`
        ``"exact"`` or the name of the reference measurement.
    """
    mutual_info: float
    i_acc: float
    i_prime_max: float
    extracted: float
    residual: float
    destroyed: float
    reference_label: str = EXACT

    @property
    def conservation_residual(self) -> float:
        """:class:`float`: ``E + R + D - 1``."""
        return self.extracted + self.residual + self.destroyed - 1.0

    def violations(self, slack: float = 1e-9) -> List[str]:
        """Human readable list of broken invariants; empty when all hold."""
        found = []
        for name in ("extracted", "residual", "destroyed"):
            value = getattr(self, name)
            if not -slack <= value <= 1.0 + slack:
                found.append(f"{name}={value!r} outside [0, 1]")
        if abs(self.conservation_residual) > slack:
            found.append(f"E+R+D-1={self.conservation_residual:.3e}")
        if self.mutual_info > self.i_prime_max + slack:
            found.append(f"I={self.mutual_info!r} > I'_max={self.i_prime_max!r}")
        if self.i_prime_max > self.i_acc + slack:
            found.append(f"I'_max={self.i_prime_max!r} > I_acc={self.i_acc!r}")
        return found

    @classmethod
    def from_values(cls, mutual_info: float, i_acc: float, i_prime_max: float,
                    reference_label: str = EXACT, eps_info: float = 1e-12) -> InfoBreakdown:
        """Normalize raw information values.

        Raises
        ------
        :exc:`erdtools.errors.ZeroAccessibleInfo`
            ``i_acc`` is at most ``eps_info``.
        """
        if i_acc <= eps_info:
            raise ZeroAccessibleInfo(i_acc)
        extracted = mutual_info / i_acc
        residual = (i_prime_max - mutual_info) / i_acc
        # by difference, so E + R + D = 1 holds to rounding
        destroyed = 1.0 - extracted - residual
        return cls(mutual_info, i_acc, i_prime_max, extracted, residual, destroyed, reference_label)


@dataclass(frozen=True)
class BoundsChain:
    """The chain ``0 <= I <= I'_max <= I_acc <= chi <= H(E)``."""
    mutual_info: float
    i_prime_max: float
    i_acc: float
    holevo: float
    prior_entropy: float

    def holds(self, slack: float = 1e-9) -> bool:
        chain = (0.0, self.mutual_info, self.i_prime_max, self.i_acc, self.holevo, self.prior_entropy)
        return all(a <= b + slack for a, b in zip(chain, chain[1:]))


def i_prime_max(ens: Ensemble, instr: Instrument, acc: Optional[AccessibleInfoOracle] = None,
                settings: Optional[Settings] = None) -> float:
    """Information reachable with ``instr`` followed by optimal measurements.

    ``H(E) - sum_k P_k [H(E^(k)) - I_acc(E^(k))]``. A destructive instrument
    leaves nothing to measure, so this is its mutual information.

    Parameters
    ----------
    acc : Optional[Callable[[:class:`erdtools.measure.Ensemble`], :class:`float`]]
        Accessible information oracle; defaults to
        :func:`erdtools.accessible.accessible_information`.

    Raises
    ------
    :exc:`erdtools.errors.OracleFailure`
        The oracle raised on a post-measurement ensemble.
    """
    settings = settings or DEFAULT_SETTINGS
    tol = settings.tolerances
    povm = induced_povm(instr, tol)
    if instr.destructive:
        return mutual_information(ens, povm)
    oracle = acc or (lambda e: accessible_information(e, settings))
    outcome_probs = outcome_probabilities(ens, povm).sum(axis=0)
    remaining = 0.0
    for k, prob in enumerate(outcome_probs):
        if prob <= tol.eps_outcome:
            continue
        try:
            post = post_measurement_ensemble(ens, instr, k, tol)
        except ZeroProbabilityOutcome:
            continue
        try:
            post_acc = oracle(post)
        except ERDError as exc:
            raise OracleFailure(f"accessible information of the ensemble after outcome {k} failed: {exc}") from exc
        remaining += prob * (shannon_entropy(post.priors) - post_acc)
    return shannon_entropy(ens.priors) - remaining


def erd_breakdown(ens: Ensemble, instr: Instrument, reference: Reference = EXACT,
                  label: Optional[str] = None, acc: Optional[AccessibleInfoOracle] = None,
                  settings: Optional[Settings] = None) -> InfoBreakdown:
    """Extracted, residual and destroyed fractions of a measurement.

    Parameters
    ----------
    ens : :class:`erdtools.measure.Ensemble`
        The signal ensemble.
    instr : :class:`erdtools.measure.Instrument`
        The first measurement.
    reference : Union[:class:`str`, :class:`erdtools.measure.POVM`]
        ``"exact"`` normalizes by the accessible information, ``"helstrom"``
        by the mutual information of the Helstrom measurement, and a POVM by
        its own mutual information.
    label : Optional[:class:`str`]
        Name recorded for a POVM reference; defaults to ``"reference"``.
    acc : Optional[Callable[[:class:`erdtools.measure.Ensemble`], :class:`float`]]
        Oracle for the post-measurement ensembles and the exact normalizer.

    Raises
    ------
    :exc:`erdtools.errors.ZeroAccessibleInfo`
        The normalizer vanishes, e.g. identical signal states.
    """
    settings = settings or DEFAULT_SETTINGS
    oracle = acc or (lambda e: accessible_information(e, settings))
    info = mutual_information(ens, induced_povm(instr, settings.tolerances))
    if isinstance(reference, POVM):
        norm, ref_label = mutual_information(ens, reference), label or "reference"
    elif reference == HELSTROM:
        norm, ref_label = mutual_information(ens, helstrom_povm(ens)), HELSTROM
    elif reference == EXACT:
        norm, ref_label = oracle(ens), EXACT
    else:
        raise ValueError(f"unknown reference {reference!r}; expected 'exact', 'helstrom' or a POVM")
    if norm <= settings.tolerances.eps_info:
        raise ZeroAccessibleInfo(norm)
    prime = i_prime_max(ens, instr, oracle, settings)
    result = InfoBreakdown.from_values(info, norm, prime, ref_label, settings.tolerances.eps_info)
    if ref_label == EXACT:
        broken = result.violations()
        if broken:
            _log.warning("breakdown invariants violated: %s", "; ".join(broken))
    return result


def bounds_chain(ens: Ensemble, instr: Instrument, acc: Optional[AccessibleInfoOracle] = None,
                 settings: Optional[Settings] = None) -> BoundsChain:
    """Evaluate every quantity of the information bounds chain for one measurement."""
    settings = settings or DEFAULT_SETTINGS
    oracle = acc or (lambda e: accessible_information(e, settings))
    return BoundsChain(
        mutual_info=mutual_information(ens, induced_povm(instr, settings.tolerances)),
        i_prime_max=i_prime_max(ens, instr, oracle, settings),
        i_acc=oracle(ens),
        holevo=holevo_quantity(ens),
        prior_entropy=shannon_entropy(ens.priors),
    )
