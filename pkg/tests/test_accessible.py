import math
import unittest

import numpy as np

from erdtools import (Ensemble, InvalidEnsemble, NotConverged, accessible_info_binary_pure, accessible_info_numeric,
                      accessible_information, binary_pure_overlap_sq, holevo_quantity, mutual_information)

from .utils import FAST, pure_pair, trine


class NumericSearchTest(unittest.TestCase):
    def test_binary_pure_closed_form(self):
        for overlap in (0.1, 0.3, 0.5, 0.7, 0.9):
            for eta1 in (0.1, 0.3, 0.5, 0.7, 0.9):
                with self.subTest(overlap=overlap, eta1=eta1):
                    priors = (eta1, 1 - eta1)
                    found = accessible_info_numeric(pure_pair(overlap, priors), FAST).value
                    self.assertAlmostEqual(found, accessible_info_binary_pure(overlap ** 2, priors), delta=1e-6)

    def test_trine(self):
        result = accessible_info_numeric(trine(), FAST)
        self.assertAlmostEqual(result.value, math.log2(3) - 1, delta=1e-4)
        self.assertAlmostEqual(mutual_information(trine(), result.povm), result.value, delta=1e-12)

    def test_below_holevo(self):
        for ens in (trine(), trine((0.2, 0.3, 0.5)), pure_pair(0.4, (0.3, 0.7))):
            with self.subTest(priors=ens.priors):
                found = accessible_info_numeric(ens, FAST).value
                self.assertLessEqual(found, holevo_quantity(ens) + 1e-9)

    def test_povm_on_full_space(self):
        # qubit signals embedded in a qutrit
        states = [np.array([1.0, 0.0, 0.0]), np.array([0.6, 0.8, 0.0])]
        result = accessible_info_numeric(Ensemble.of(states, (0.5, 0.5)), FAST)
        self.assertEqual(result.povm.dim, 3)
        self.assertAlmostEqual(result.value, accessible_info_binary_pure(0.36, (0.5, 0.5)), delta=1e-6)

    def test_one_dimensional_support(self):
        same = np.array([0.6, 0.8])
        result = accessible_info_numeric(Ensemble.of((same, same), (0.4, 0.6)), FAST)
        self.assertEqual(result.value, 0.0)
        self.assertTrue(result.converged)

    def test_max_dim(self):
        states = [np.eye(3)[k] for k in range(3)]
        with self.assertRaises(InvalidEnsemble):
            accessible_info_numeric(Ensemble.of(states, (0.2, 0.3, 0.5)), FAST.replace(max_dim=2))

    def test_workers_do_not_change_result(self):
        serial = accessible_info_numeric(trine(), FAST)
        threaded = accessible_info_numeric(trine(), FAST, workers=2)
        self.assertEqual(serial.value, threaded.value)
        self.assertEqual(serial.start, threaded.start)

    def test_seed_is_reproducible(self):
        first = accessible_info_numeric(trine((0.2, 0.3, 0.5)), FAST.replace(seed=5))
        second = accessible_info_numeric(trine((0.2, 0.3, 0.5)), FAST.replace(seed=5))
        self.assertEqual(first.value, second.value)

    def test_strict_not_converged(self):
        with self.assertRaises(NotConverged) as cm:
            accessible_info_numeric(trine(), FAST.replace(max_iter=1), strict=True)
        self.assertIsNotNone(cm.exception.povm)
        self.assertGreaterEqual(cm.exception.value, 0.0)


class DispatchTest(unittest.TestCase):
    def test_single_state(self):
        self.assertEqual(accessible_information(Ensemble.of((np.array([1.0, 0.0]),), (1.0,))), 0.0)

    def test_zero_prior(self):
        self.assertEqual(accessible_information(pure_pair(0.3, (1.0, 0.0))), 0.0)

    def test_binary_pure_uses_closed_form(self):
        ens = pure_pair(0.4, (0.3, 0.7))
        self.assertEqual(accessible_information(ens), accessible_info_binary_pure(binary_pure_overlap_sq(ens), ens.priors))

    def test_mixed_goes_numeric(self):
        # commuting states: the Holevo quantity is attained by measuring in the common eigenbasis
        ens = Ensemble.of((np.diag([1.0, 0.0]), np.eye(2) / 2), (0.5, 0.5))
        self.assertAlmostEqual(accessible_information(ens, FAST), holevo_quantity(ens), delta=1e-6)


if __name__ == "__main__":
    unittest.main()
