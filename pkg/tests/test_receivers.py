import math
import unittest

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import entr, erfc, expit

from erdtools import (EXCITED, GROUND, BinaryCoherentScenario, InvalidEnsemble, NonUnitary, Operator,
                      ZeroAccessibleInfo, accessible_info_binary_pure, atomic_receiver_optimal,
                      atomic_receiver_unambiguous, default_n_max, hermite_functions, homodyne_hard, homodyne_soft,
                      homodyne_soft_information, homodyne_threshold_povm, i_prime_max, induced_povm, jc_unitary,
                      joint_mutual_information, kennedy, neumark_instrument, outcome_probabilities, pnrd_instrument,
                      pnrd_receiver, post_measurement_ensemble, tensor, two_element_mutual_info)

from .utils import assert_valid_breakdown


def scenario(alpha_sq: float, priors=(0.5, 0.5), n_max=None) -> BinaryCoherentScenario:
    return BinaryCoherentScenario.from_mean_photons(alpha_sq, priors, n_max)


class ScenarioTest(unittest.TestCase):
    def test_overlap(self):
        for alpha_sq in (0.05, 0.5, 2.0):
            self.assertLess(scenario(alpha_sq).check_overlap(), 1e-12)
        self.assertAlmostEqual(scenario(0.5).overlap_sq, math.exp(-2.0), delta=1e-15)

    def test_complex_amplitude(self):
        rotated = BinaryCoherentScenario(0.6j)
        self.assertAlmostEqual(rotated.mean_photons, 0.36, delta=1e-15)
        self.assertAlmostEqual(rotated.i_acc, scenario(0.36).i_acc, delta=1e-15)

    def test_priors(self):
        with self.assertRaises(InvalidEnsemble):
            BinaryCoherentScenario(0.5, (0.5, 0.6))
        with self.assertRaises(ValueError):
            scenario(-0.1)

    def test_displaced_ensemble(self):
        ens = scenario(0.3).ensemble(beta=math.sqrt(0.3))
        vacuum = np.zeros(ens.dim)
        vacuum[0] = 1.0
        np.testing.assert_array_equal(ens.vector(1), vacuum)


class HomodyneTest(unittest.TestCase):
    def test_hard_closed_form(self):
        result = homodyne_hard(scenario(0.4))
        r = 0.5 * erfc(math.sqrt(0.8))
        self.assertAlmostEqual(result.error_probs[0], r, delta=1e-15)
        self.assertEqual(result.error_probs[0], result.error_probs[1])
        self.assertAlmostEqual(result.breakdown.mutual_info, 1 - (-r * math.log2(r) - (1 - r) * math.log2(1 - r)),
                               delta=1e-14)
        self.assertEqual(result.breakdown.residual, 0.0)
        self.assertAlmostEqual(result.breakdown.destroyed, 1 - result.breakdown.extracted, delta=1e-15)

    def test_hard_strong_signal(self):
        self.assertGreaterEqual(homodyne_hard(scenario(25.0)).breakdown.extracted, 0.9999)

    def test_vacuum(self):
        with self.assertRaises(ZeroAccessibleInfo):
            homodyne_hard(scenario(0.0))
        self.assertEqual(homodyne_soft_information(scenario(0.0)), 0.0)

    def test_hard_monotone(self):
        grid = [0.05 * k for k in range(1, 81)]
        extracted = [homodyne_hard(scenario(a)).breakdown.extracted for a in grid]
        for lower, upper in zip(extracted, extracted[1:]):
            self.assertLessEqual(lower, upper + 1e-12)

    def test_soft_extracted_fraction_dips(self):
        # near 1 for weak and for strong signals, lower in between
        extracted = {a: homodyne_soft(scenario(a)).breakdown.extracted for a in (0.05, 0.1, 0.5, 4.0)}
        self.assertGreaterEqual(extracted[0.05], 0.96)
        self.assertGreater(extracted[0.05], extracted[0.1])
        self.assertLess(extracted[0.5], extracted[0.05])
        self.assertLess(extracted[0.5], extracted[4.0])
        self.assertGreaterEqual(extracted[4.0], 0.99)

    def test_soft_beats_hard(self):
        gaps = {}
        for alpha_sq in (0.1, 0.5, 1.0, 2.0):
            soft, hard = homodyne_soft(scenario(alpha_sq)), homodyne_hard(scenario(alpha_sq))
            self.assertGreaterEqual(soft.breakdown.mutual_info, hard.breakdown.mutual_info - 1e-12)
            self.assertEqual(soft.error_probs, hard.error_probs)
            assert_valid_breakdown(self, soft.breakdown)
            gaps[alpha_sq] = soft.breakdown.extracted - hard.breakdown.extracted
        self.assertGreater(gaps[0.1], gaps[2.0])

    def test_soft_unequal_priors(self):
        result = homodyne_soft(scenario(0.3, (0.2, 0.8)))
        assert_valid_breakdown(self, result.breakdown)

    def test_soft_monte_carlo(self):
        a, eta1 = math.sqrt(0.2), 0.5
        rng = np.random.default_rng(2021)
        chunks = []
        for _ in range(4):
            first = rng.random(1_000_000) < eta1
            x = np.where(first, a, -a) + 0.5 * rng.standard_normal(first.size)
            post = expit(8 * a * x)
            chunks.append((entr(post) + entr(1 - post)) / math.log(2))
        samples = np.concatenate(chunks)
        estimate = 1.0 - samples.mean()
        sigma = samples.std() / math.sqrt(samples.size)
        self.assertLess(abs(homodyne_soft_information(scenario(0.2)) - estimate), 4 * sigma)

    def test_hermite_functions_orthonormal(self):
        nodes, weights = leggauss(200)
        x, w = 6.0 * nodes, 6.0 * weights
        psi = hermite_functions(12, x)
        np.testing.assert_allclose((psi * w) @ psi.T, np.eye(13), atol=1e-12)
        np.testing.assert_allclose(psi[0] ** 2, math.sqrt(2 / math.pi) * np.exp(-2 * x * x), atol=1e-15)

    def test_threshold_povm_matrix_path(self):
        for alpha_sq in (0.1, 0.5, 1.0, 2.0):
            with self.subTest(alpha_sq=alpha_sq):
                n_max = default_n_max(alpha_sq) + 10
                ens = scenario(alpha_sq).ensemble(n_max=n_max)
                table = outcome_probabilities(ens, homodyne_threshold_povm(n_max))
                r1, r2 = homodyne_hard(scenario(alpha_sq)).error_probs
                self.assertAlmostEqual(table[0, 1] / 0.5, r1, delta=1e-7)
                self.assertAlmostEqual(table[1, 0] / 0.5, r2, delta=1e-7)


class PhotonCountingTest(unittest.TestCase):
    def test_kennedy(self):
        result = kennedy(scenario(0.3))
        self.assertEqual(result.scheme, "kennedy")
        self.assertAlmostEqual(result.error_probs[0], math.exp(-1.2), delta=1e-14)
        self.assertEqual(result.error_probs[1], 0.0)
        self.assertAlmostEqual(result.beta, math.sqrt(0.3), delta=1e-15)

    def test_no_displacement(self):
        result = pnrd_receiver(scenario(0.5), beta=0.0, mode="hard")
        self.assertAlmostEqual(result.breakdown.mutual_info, 0.0, delta=1e-12)
        soft = pnrd_receiver(scenario(0.5), beta=0.0, mode="soft")
        self.assertAlmostEqual(soft.breakdown.mutual_info, 0.0, delta=1e-12)

    def test_soft_beats_hard(self):
        for alpha_sq in (0.1, 0.5, 1.5):
            for beta in (0.2, 0.5, 1.0):
                hard = pnrd_receiver(scenario(alpha_sq), beta, "hard")
                soft = pnrd_receiver(scenario(alpha_sq), beta, "soft")
                self.assertGreaterEqual(soft.breakdown.mutual_info, hard.breakdown.mutual_info - 1e-12)
                self.assertEqual(soft.breakdown.residual, 0.0)

    def test_soft_equals_hard_at_kennedy_point(self):
        for alpha_sq in (0.1, 1.0):
            hard = pnrd_receiver(scenario(alpha_sq), mode="hard")
            soft = pnrd_receiver(scenario(alpha_sq), mode="soft")
            self.assertAlmostEqual(soft.breakdown.mutual_info, hard.breakdown.mutual_info, delta=1e-12)
            self.assertEqual(soft.scheme, "pnrd-soft")

    def test_bad_mode(self):
        with self.assertRaises(ValueError):
            pnrd_receiver(scenario(0.5), mode="fuzzy")
        with self.assertRaises(ValueError):
            pnrd_instrument(0.5, 10, "fuzzy")

    def test_matrix_path(self):
        for alpha_sq in (0.1, 0.5, 1.0, 2.0):
            n_max = default_n_max(4 * alpha_sq) + 10
            ens = scenario(alpha_sq).ensemble(n_max=n_max)
            for beta in (math.sqrt(alpha_sq), 0.3):
                with self.subTest(alpha_sq=alpha_sq, beta=beta):
                    hard = pnrd_receiver(scenario(alpha_sq), beta, "hard")
                    table = outcome_probabilities(ens, induced_povm(pnrd_instrument(beta, n_max, "hard")))
                    self.assertAlmostEqual(table[0, 1] / 0.5, hard.error_probs[0], delta=1e-7)
                    self.assertAlmostEqual(table[1, 0] / 0.5, hard.error_probs[1], delta=1e-7)

                    soft = pnrd_receiver(scenario(alpha_sq), beta, "soft")
                    counts = outcome_probabilities(ens, induced_povm(pnrd_instrument(beta, n_max, "soft")))
                    self.assertAlmostEqual(joint_mutual_information(counts), soft.breakdown.mutual_info, delta=1e-7)

    def test_destructive(self):
        self.assertTrue(pnrd_instrument(0.2, 12).destructive)


class NeumarkTest(unittest.TestCase):
    def test_identity(self):
        n_max = 4
        instr = neumark_instrument(Operator(np.eye(10), n_max, qubit=True), GROUND,
                                   (np.array([1, -1j]) / math.sqrt(2), np.array([1, 1j]) / math.sqrt(2)))
        for group in instr.kraus_groups:
            np.testing.assert_allclose(group[0], np.eye(5) / math.sqrt(2), atol=1e-15)

    def test_non_unitary(self):
        with self.assertRaises(NonUnitary):
            neumark_instrument(Operator(1.01 * np.eye(6), 2, qubit=True), GROUND, (GROUND, EXCITED))
        with self.assertRaises(ValueError):
            neumark_instrument(Operator(np.eye(3), 2), GROUND, (GROUND, EXCITED))
        with self.assertRaises(ValueError):
            neumark_instrument(jc_unitary(0.3, 2), GROUND, (GROUND, GROUND))

    def test_completeness(self):
        for theta in (0.2, 1.1, 3.0):
            povm = induced_povm(neumark_instrument(jc_unitary(theta, 15), GROUND, (EXCITED, GROUND)))
            np.testing.assert_allclose(sum(povm.elements), np.eye(16), atol=1e-10)

    def test_swap_reproduces_click_detector(self):
        n_max = 6
        vacuum = np.zeros((n_max + 1, n_max + 1))
        vacuum[0, 0] = 1.0
        flip = np.array([[0.0, 1.0], [1.0, 0.0]])
        swap = tensor(vacuum, np.eye(2)) + tensor(np.eye(n_max + 1) - vacuum, flip)
        ancilla = induced_povm(neumark_instrument(Operator(swap, n_max, qubit=True), GROUND, (EXCITED, GROUND)))
        clicks = induced_povm(pnrd_instrument(0.0, n_max, "hard"))
        for got, want in zip(ancilla.elements, clicks.elements):
            np.testing.assert_allclose(got, want, atol=1e-14)


class AtomicOptimalTest(unittest.TestCase):
    def test_no_interaction(self):
        result = atomic_receiver_optimal(scenario(0.3), theta=0.0)
        self.assertAlmostEqual(result.breakdown.extracted, 0.0, delta=1e-12)
        self.assertAlmostEqual(result.breakdown.residual, 1.0, delta=1e-12)
        self.assertAlmostEqual(result.breakdown.destroyed, 0.0, delta=1e-12)
        self.assertAlmostEqual(result.avg_error, 0.5, delta=1e-12)

    def test_near_helstrom(self):
        for alpha_sq in (0.05, 0.1, 0.2):
            with self.subTest(alpha_sq=alpha_sq):
                result = atomic_receiver_optimal(scenario(alpha_sq))
                helstrom = scenario(alpha_sq).helstrom_error
                self.assertGreaterEqual(result.avg_error, helstrom - 1e-12)
                self.assertLessEqual(result.avg_error, 1.1 * helstrom)

    def test_weak_signals_fully_extracted(self):
        for alpha_sq in (0.05, 0.1):
            self.assertGreaterEqual(atomic_receiver_optimal(scenario(alpha_sq)).breakdown.extracted, 0.99)

    def test_extracted_fraction_falls_from_one(self):
        extracted = [atomic_receiver_optimal(scenario(a)).breakdown.extracted for a in (0.05, 0.1, 0.15)]
        self.assertGreaterEqual(extracted[0], 0.998)
        self.assertGreater(extracted[0], extracted[1])
        self.assertGreater(extracted[1], extracted[2])

    def test_post_measurement_states_pure(self):
        sc = scenario(0.4, (0.3, 0.7))
        result = atomic_receiver_optimal(sc)
        ens = sc.ensemble(n_max=sc.truncation())
        for k in range(2):
            with self.subTest(outcome=k):
                post = post_measurement_ensemble(ens, result.instrument, k)
                self.assertEqual(len(post), 2)
                self.assertAlmostEqual(sum(post.priors), 1.0, delta=1e-12)
                for j in range(2):
                    rho = post.density(j)
                    self.assertAlmostEqual(float(np.trace(rho @ rho).real), 1.0, delta=1e-10)

    def test_i_prime_max_is_accessible_information(self):
        for alpha_sq in (0.2, 1.0):
            with self.subTest(alpha_sq=alpha_sq):
                sc = scenario(alpha_sq)
                result = atomic_receiver_optimal(sc)
                ens = sc.ensemble(n_max=sc.truncation())
                expected = accessible_info_binary_pure(math.exp(-4 * alpha_sq), sc.priors)
                self.assertAlmostEqual(i_prime_max(ens, result.instrument), expected, delta=1e-6)

    def test_nothing_destroyed(self):
        for alpha_sq in (0.1, 0.5, 1.0, 2.0):
            with self.subTest(alpha_sq=alpha_sq):
                result = atomic_receiver_optimal(scenario(alpha_sq))
                assert_valid_breakdown(self, result.breakdown)
                self.assertLessEqual(abs(result.breakdown.destroyed), 1e-6)

    def test_symmetric_errors(self):
        result = atomic_receiver_optimal(scenario(0.7))
        self.assertAlmostEqual(result.error_probs[0], result.error_probs[1], delta=1e-10)
        self.assertEqual(len(result.thetas), 1)
        self.assertIsNotNone(result.instrument)


class AtomicUnambiguousTest(unittest.TestCase):
    def test_no_false_alarm(self):
        for stages in (1, 2):
            result = atomic_receiver_unambiguous(scenario(0.4), stages=stages)
            self.assertEqual(result.error_probs[1], 0.0)
            self.assertEqual(len(result.thetas), stages)
            self.assertEqual(len(result.stage_infos), stages)

    def test_destroys_information(self):
        result = atomic_receiver_unambiguous(scenario(0.4))
        assert_valid_breakdown(self, result.breakdown)
        self.assertGreater(result.breakdown.destroyed, 1e-6)

    def test_second_stage_helps(self):
        result = atomic_receiver_unambiguous(scenario(0.4), stages=2)
        first, total = result.stage_infos
        self.assertGreaterEqual(total - first, 1e-3)
        self.assertLessEqual(result.error_probs[0], atomic_receiver_unambiguous(scenario(0.4)).error_probs[0])
        self.assertAlmostEqual(total, two_element_mutual_info(result.error_probs[0], 0.0, (0.5, 0.5)), delta=1e-9)

    def test_explicit_angles(self):
        result = atomic_receiver_unambiguous(scenario(0.4), stages=2, thetas=(0.8, 1.3))
        self.assertEqual(result.thetas, (0.8, 1.3))
        with self.assertRaises(ValueError):
            atomic_receiver_unambiguous(scenario(0.4), stages=2, thetas=(0.8,))
        with self.assertRaises(ValueError):
            atomic_receiver_unambiguous(scenario(0.4), stages=3)


if __name__ == "__main__":
    unittest.main()
