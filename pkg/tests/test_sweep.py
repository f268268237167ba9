import io
import json
import unittest
from unittest import mock

from erdtools import BinaryCoherentScenario, ConfigError, pnrd_receiver
from erdtools.sweep import (COLUMNS, PRESETS, SCHEMES, SweepConfig, evaluate, format_value, parse_grid, run_sweep,
                            with_overrides, write_rows)

COARSE = (0.2, 1.0, 0.4)


class GridTest(unittest.TestCase):
    def test_parse(self):
        self.assertEqual(parse_grid("0.02:4:0.02"), (0.02, 4.0, 0.02))
        self.assertEqual(parse_grid("0.5"), (0.5, 0.5, 1.0))

    def test_invalid(self):
        for text in ("0:1:0.1", "1:0.5:0.1", "0.1:1:0", "0.1:1", "a:b:c", "-1"):
            with self.subTest(text=text):
                with self.assertRaises(ConfigError):
                    parse_grid(text)

    def test_points(self):
        points = PRESETS["fig1c"].points()
        self.assertEqual(len(points), 200)
        self.assertEqual(points[0], 0.02)
        self.assertEqual(points[-1], 4.0)
        self.assertEqual(points[9], 0.2)
        self.assertEqual(SweepConfig(("kennedy",), (0.5, 0.5, 1.0)).points(), [0.5])


class SweepConfigTest(unittest.TestCase):
    def test_validation(self):
        bad = [
            dict(schemes=()),
            dict(schemes=("heterodyne",)),
            dict(schemes=("kennedy",), grid=(0.0, 1.0, 0.1)),
            dict(schemes=("kennedy",), prior=1.5),
            dict(schemes=("atomic-unambiguous",), stages=3),
            dict(schemes=("atomic-unambiguous",), stages=2, thetas=(0.5,)),
            dict(schemes=("kennedy",), fmt="xml"),
            dict(schemes=("kennedy",), workers=0),
            dict(schemes=("kennedy",), n_max=0),
        ]
        for kwargs in bad:
            with self.subTest(**{k: str(v) for k, v in kwargs.items()}):
                with self.assertRaises(ConfigError):
                    SweepConfig(**kwargs)

    def test_presets(self):
        self.assertEqual(PRESETS["fig1a"].schemes, ("homodyne-hard", "homodyne-soft"))
        self.assertEqual(PRESETS["fig1b"].schemes, ("pnrd-hard", "pnrd-soft", "kennedy"))
        self.assertEqual(PRESETS["fig1d"].stages, 2)
        self.assertEqual(PRESETS["fig1b"].beta, 0.5)

    def test_overrides(self):
        cfg = with_overrides(PRESETS["fig1c"], grid=COARSE, prior=None, workers=2)
        self.assertEqual(cfg.grid, COARSE)
        self.assertEqual(cfg.prior, 0.5)
        self.assertEqual(cfg.workers, 2)
        self.assertEqual(PRESETS["fig1c"].workers, 1)


class RunSweepTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.cfg = SweepConfig(SCHEMES, COARSE, stages=2)
        cls.rows = run_sweep(cls.cfg)

    def test_order_and_conservation(self):
        expected = [(s, a) for a in (0.2, 0.6, 1.0) for s in SCHEMES
                    for _ in range(2 if s == "atomic-unambiguous" else 1)]
        self.assertEqual([(r["scheme"], r["alpha_sq"]) for r in self.rows], expected)
        for row in self.rows:
            with self.subTest(scheme=row["scheme"], alpha_sq=row["alpha_sq"]):
                self.assertIsNone(row["error"])
                self.assertAlmostEqual(row["E"] + row["R"] + row["D"], 1.0, delta=1e-9)
                for key in ("E", "R", "D"):
                    self.assertGreaterEqual(row[key], -1e-9)

    def test_stage_and_theta_columns(self):
        unambiguous = [r for r in self.rows if r["scheme"] == "atomic-unambiguous"]
        self.assertEqual([r["stage"] for r in unambiguous], [1, 2] * 3)
        for row in unambiguous:
            self.assertEqual(row["r2"], 0.0)
            self.assertIsNotNone(row["theta"])
        homodyne = [r for r in self.rows if r["scheme"] == "homodyne-hard"]
        self.assertTrue(all(r["stage"] is None and r["theta"] is None for r in homodyne))

    def test_matches_direct_call(self):
        row = next(r for r in self.rows if r["scheme"] == "pnrd-hard" and r["alpha_sq"] == 0.6)
        direct = pnrd_receiver(BinaryCoherentScenario.from_mean_photons(0.6), None, "hard")
        self.assertEqual(row["I"], direct.breakdown.mutual_info)
        self.assertEqual(row["E"], direct.breakdown.extracted)
        self.assertEqual(row["avg_error"], direct.avg_error)

    def test_deterministic(self):
        again = run_sweep(self.cfg)
        self.assertEqual(again, self.rows)

    def test_workers(self):
        cfg = SweepConfig(("homodyne-soft", "atomic-optimal"), COARSE, workers=2)
        self.assertEqual(run_sweep(cfg), run_sweep(with_overrides(cfg, workers=1)))

    def test_failures_are_recorded(self):
        cfg = SweepConfig(("atomic-optimal", "homodyne-hard"), (0.5, 0.5, 1.0), n_max=3)
        rows = run_sweep(cfg)
        self.assertEqual(len(rows), 2)
        self.assertTrue(rows[0]["error"].startswith("TruncationTooSmall: "))
        self.assertIsNone(rows[0]["E"])
        self.assertIsNone(rows[1]["error"])

    def test_unexpected_errors_are_recorded(self):
        cfg = SweepConfig(("homodyne-hard", "kennedy"), (0.2, 0.6, 0.4))
        with mock.patch("erdtools.sweep.homodyne_hard", side_effect=ValueError("array must not contain infs")):
            with self.assertLogs("erdtools.sweep", "WARNING"):
                rows = run_sweep(cfg)
        self.assertEqual([r["scheme"] for r in rows], ["homodyne-hard", "kennedy"] * 2)
        self.assertEqual(rows[0]["error"], "ValueError: array must not contain infs")
        self.assertIsNone(rows[1]["error"])

    def test_photon_counting_families_differ(self):
        rows = run_sweep(with_overrides(PRESETS["fig1b"], grid=COARSE))
        by_point = {}
        for row in rows:
            by_point.setdefault(row["alpha_sq"], {})[row["scheme"]] = row
        self.assertEqual(sorted(by_point), [0.2, 0.6, 1.0])
        for alpha_sq, schemes in by_point.items():
            with self.subTest(alpha_sq=alpha_sq):
                hard, soft, kennedy_row = schemes["pnrd-hard"], schemes["pnrd-soft"], schemes["kennedy"]
                self.assertGreater(soft["E"], hard["E"])
                self.assertNotEqual(kennedy_row["E"], hard["E"])
                self.assertEqual(kennedy_row["r2"], 0.0)
                self.assertEqual(soft["R"], 0.0)

    def test_evaluate_unknown(self):
        with self.assertRaises(ConfigError):
            evaluate("heterodyne", BinaryCoherentScenario.from_mean_photons(0.5))


class OutputTest(unittest.TestCase):
    ROWS = [
        {**dict.fromkeys(COLUMNS), "scheme": "kennedy", "alpha_sq": 0.1, "I": 0.1 + 0.2, "stage": None},
        {**dict.fromkeys(COLUMNS), "scheme": "atomic-unambiguous", "alpha_sq": 0.2, "I": 0.5, "stage": 2},
    ]

    def test_format_value(self):
        self.assertEqual(format_value(0.1 + 0.2), "0.30000000000000004")
        self.assertEqual(format_value(None), "")
        self.assertEqual(format_value(2), "2")
        self.assertEqual(format_value("kennedy"), "kennedy")

    def test_csv(self):
        stream = io.StringIO()
        write_rows(self.ROWS, stream, "csv")
        lines = stream.getvalue().split("\n")
        self.assertEqual(lines[0], ",".join(COLUMNS))
        self.assertEqual(lines[1].split(",")[:3], ["kennedy", "0.10000000000000001", "0.30000000000000004"])
        self.assertEqual(lines[2].split(",")[COLUMNS.index("stage")], "2")
        self.assertEqual(lines[-1], "")

    def test_jsonl(self):
        stream = io.StringIO()
        write_rows(self.ROWS, stream, "jsonl")
        decoded = [json.loads(line) for line in stream.getvalue().splitlines()]
        self.assertEqual(list(decoded[0]), list(COLUMNS))
        self.assertEqual(decoded[0]["I"], 0.1 + 0.2)
        self.assertIsNone(decoded[0]["stage"])
        self.assertEqual(decoded[1]["stage"], 2)

    def test_unknown_format(self):
        with self.assertRaises(ConfigError):
            write_rows(self.ROWS, io.StringIO(), "xml")


if __name__ == "__main__":
    unittest.main()
