import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from typing import List, Tuple

from erdtools.cli import EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from erdtools.sweep import COLUMNS


def run(argv: List[str]) -> Tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class CLITest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def path(self, name: str) -> str:
        return os.path.join(self.tmp.name, name)

    def write_config(self, data: dict) -> str:
        path = self.path("config.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f)
        return path

    def test_presets(self):
        code, out, _ = run(["presets"])
        self.assertEqual(code, EXIT_OK)
        for name in ("fig1a", "fig1b", "fig1c", "fig1d"):
            self.assertIn(name, out)
        self.assertIn("beta=0.5", out)

    def test_version(self):
        code, out, _ = run(["version"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("ERDTools", out)
        self.assertIn("numpy", out)

    def test_sweep_stdout(self):
        code, out, _ = run(["sweep", "--scheme", "homodyne-hard", "--alpha2", "0.2:0.6:0.2"])
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(lines[0], ",".join(COLUMNS))
        self.assertEqual([line.split(",")[1] for line in lines[1:]], ["0.20000000000000001", "0.40000000000000002",
                                                                       "0.59999999999999998"])

    def test_sweep_file_jsonl(self):
        out_path = self.path("rows.jsonl")
        code, out, _ = run(["sweep", "--preset", "fig1b", "--alpha2", "0.5", "--format", "jsonl", "--out", out_path])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "")
        with open(out_path, encoding="utf-8") as f:
            rows = [json.loads(line) for line in f]
        self.assertEqual([r["scheme"] for r in rows], ["pnrd-hard", "pnrd-soft", "kennedy"])
        self.assertEqual(rows[2]["r2"], 0.0)

    def test_sweep_deterministic(self):
        argv = ["sweep", "--preset", "fig1c", "--alpha2", "0.02:0.2:0.02", "--seed", "7"]
        first, second = run(argv), run(argv)
        self.assertEqual(first[0], EXIT_OK)
        self.assertEqual(len(first[1].splitlines()), 11)
        self.assertEqual(first[1], second[1])

    def test_sweep_failed_rows(self):
        code, out, err = run(["sweep", "--scheme", "atomic-optimal", "--alpha2", "0.5", "--n-max", "3"])
        self.assertEqual(code, EXIT_NUMERIC)
        self.assertIn("TruncationTooSmall", out.splitlines()[1])

    def test_sweep_usage_errors(self):
        for argv in (["sweep", "--alpha2", "0.5"],
                     ["sweep", "--scheme", "kennedy", "--alpha2", "0:1:0.1"],
                     ["sweep", "--preset", "fig1d", "--alpha2", "0.5", "--workers", "0"]):
            with self.subTest(argv=argv):
                code, _, err = run(argv)
                self.assertEqual(code, EXIT_USAGE)
                self.assertIn("error", err)

    def test_bad_scheme(self):
        with self.assertRaises(SystemExit) as cm:
            run(["sweep", "--scheme", "heterodyne"])
        self.assertEqual(cm.exception.code, 2)

    def test_report(self):
        code, out, _ = run(["report", "--scheme", "atomic-unambiguous", "--alpha2", "0.4", "--stages", "2"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("atomic-unambiguous (stage 2)", out)
        self.assertEqual(out.count("[holds]"), 2)

    def test_report_undefined_fractions(self):
        code, _, err = run(["report", "--scheme", "homodyne-hard", "--alpha2", "0"])
        self.assertEqual(code, EXIT_NUMERIC)
        self.assertIn("undefined fractions", err)

    def test_report_missing_options(self):
        code, _, _ = run(["report", "--scheme", "kennedy"])
        self.assertEqual(code, EXIT_USAGE)

    def test_report_bad_prior(self):
        code, _, err = run(["report", "--scheme", "kennedy", "--alpha2", "0.4", "--priors", "1.5"])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("prior must lie in [0, 1]", err)

    def test_config_precedence(self):
        config = self.write_config({"scheme": "kennedy", "alpha2": "0.2", "priors": 0.3, "starts": 4})
        code, out, _ = run(["sweep", "--config", config, "--alpha2", "0.4"])
        self.assertEqual(code, EXIT_OK)
        row = out.splitlines()[1].split(",")
        self.assertEqual(row[:2], ["kennedy", "0.40000000000000002"])

    def test_config_unknown_key(self):
        config = self.write_config({"scheme": "kennedy", "alpha2": 0.2, "bogus": 1})
        code, _, err = run(["sweep", "--config", config])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("bogus", err)

    def test_config_unreadable(self):
        code, _, _ = run(["sweep", "--scheme", "kennedy", "--alpha2", "0.2", "--config", self.path("missing.json")])
        self.assertEqual(code, EXIT_USAGE)


if __name__ == "__main__":
    unittest.main()
