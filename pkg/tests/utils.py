"""Utils for tests"""
import math
import unittest
from typing import Sequence

import numpy as np

from erdtools import Ensemble, InfoBreakdown, Settings

EQUAL = (0.5, 0.5)

# fewer starts keep the numeric searches quick
FAST = Settings().replace(starts=8)


def pure_pair(overlap: float, priors: Sequence[float] = EQUAL) -> Ensemble:
    """Two real qubit states with the given (real, non-negative) overlap."""
    angle = math.acos(overlap)
    return Ensemble.of((np.array([1.0, 0.0]), np.array([math.cos(angle), math.sin(angle)])), priors)


def trine(priors: Sequence[float] = (1 / 3, 1 / 3, 1 / 3)) -> Ensemble:
    """Three real qubit states at 120 degrees on the Bloch circle."""
    states = [np.array([math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)]) for k in range(3)]
    return Ensemble.of(states, priors)


def assert_valid_breakdown(case: unittest.TestCase, bd: InfoBreakdown, slack: float = 1e-9) -> None:
    case.assertEqual(bd.violations(slack), [])
    case.assertAlmostEqual(bd.extracted + bd.residual + bd.destroyed, 1.0, delta=slack)
