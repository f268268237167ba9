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
"""Exceptions raised by erdtools.

Argument problems derive from :exc:`ValueError`, numerical failures from
:exc:`ArithmeticError`; everything derives from :exc:`ERDError`.
"""
from __future__ import annotations

from typing import TYPE_CHECKING, Any, Optional

if TYPE_CHECKING:
    from .measure import POVM

__all__ = (
    "ERDError",
    "ConfigError",
    "TruncationTooSmall",
    "DimensionMismatch",
    "InvalidEnsemble",
    "InvalidPOVM",
    "IncompleteInstrument",
    "ZeroProbabilityOutcome",
    "DestructiveMeasurement",
    "InvalidDistribution",
    "DegenerateEnsemble",
    "NonUnitary",
    "NotConverged",
    "OracleFailure",
    "ZeroAccessibleInfo",
    "QuadratureNotConverged",
    "OptimizationFailed",
)


class ERDError(Exception):
    """Base class of every exception raised by this package."""


## Argument errors ##

class ConfigError(ERDError, ValueError):
    """A configuration key or value is invalid."""


class TruncationTooSmall(ERDError, ValueError):
    """The Fock truncation cuts off more probability than the tolerance allows.

    Attributes
    ----------
    n_max : :class:`int`
        The truncation index that was requested.
    tail : :class:`float`
        The probability (or norm) lost beyond ``n_max``.
    """
    def __init__(self, n_max: int, tail: float, what: str = "state") -> None:
        self.n_max = n_max
        self.tail = tail
        super().__init__(f"n_max={n_max} too small for {what}: truncation error {tail:.3e}")


class DimensionMismatch(ERDError, ValueError):
    """Operators and states live on spaces of different dimension."""


class InvalidEnsemble(ERDError, ValueError):
    """Priors or states violate the ensemble invariants."""


class InvalidPOVM(ERDError, ValueError):
    """POVM elements are not Hermitian positive semidefinite."""


class IncompleteInstrument(InvalidPOVM):
    """The induced POVM elements do not sum to the identity.

    Attributes
    ----------
    deviation : :class:`float`
        Max-norm of ``sum(Pi_k) - 1``.
    """
    def __init__(self, deviation: float) -> None:
        self.deviation = deviation
        super().__init__(f"POVM elements do not sum to identity (max deviation {deviation:.3e})")


class ZeroProbabilityOutcome(ERDError, ValueError):
    """The requested outcome never occurs for the given ensemble."""
    def __init__(self, outcome: int, probability: float) -> None:
        self.outcome = outcome
        self.probability = probability
        super().__init__(f"outcome {outcome} has probability {probability:.3e}; no post-measurement ensemble")


class DestructiveMeasurement(ERDError, ValueError):
    """The detector leaves no post-measurement state."""


class InvalidDistribution(ERDError, ValueError):
    """A probability vector is negative or does not sum to one."""


class DegenerateEnsemble(ERDError, ValueError):
    """Identical binary states with equal priors; the Helstrom expression is 0/0."""


class NonUnitary(ERDError, ValueError):
    """An operator expected to be unitary is not."""
    def __init__(self, deviation: float) -> None:
        self.deviation = deviation
        super().__init__(f"operator is not unitary (max deviation {deviation:.3e})")


class ZeroAccessibleInfo(ERDError, ValueError):
    """The normalizing information is zero, so the fractions are undefined."""
    def __init__(self, value: float) -> None:
        self.value = value
        super().__init__(f"accessible information {value:.3e} bits; extracted/residual/destroyed fractions undefined")


## Numerical errors ##

class NotConverged(ERDError, ArithmeticError):
    """The accessible information optimizer stopped before converging.

    Attributes
    ----------
    value : :class:`float`
        The best mutual information found.
    povm : Optional[:class:`erdtools.measure.POVM`]
        The POVM attaining ``value``.
    """
    def __init__(self, value: float, povm: Optional[POVM] = None, grad_norm: float = float("nan")) -> None:
        self.value = value
        self.povm = povm
        self.grad_norm = grad_norm
        super().__init__(f"optimizer stopped at {value:.12f} bits with gradient norm {grad_norm:.3e}")


class OracleFailure(ERDError, ArithmeticError):
    """The accessible information oracle failed on a post-measurement ensemble."""


class QuadratureNotConverged(ERDError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance."""
    def __init__(self, estimate: Any, abserr: float, detail: str = "") -> None:
        self.estimate = estimate
        self.abserr = abserr
        super().__init__(f"quadrature did not converge (abserr {abserr:.3e}) {detail}".rstrip())


class OptimizationFailed(ERDError, ArithmeticError):
    """A receiver parameter search failed."""
