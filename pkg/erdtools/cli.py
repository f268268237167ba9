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
"""The ``erdtools`` console entry point.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure
(including undefined fractions and sweeps with failed rows).
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, Optional, Sequence, TextIO, Tuple

from . import __version_info__
from .breakdown import BoundsChain
from .commands import Command, CommandGroup, inject
from .config import DEFAULT_SETTINGS, Settings, load_config
from .errors import ConfigError, ERDError, ZeroAccessibleInfo
from .info import holevo_quantity, shannon_entropy
from .receivers import BinaryCoherentScenario, ReceiverResult
from .sweep import (FORMATS, PRESETS, SCHEMES, SweepConfig, evaluate, parse_grid, run_sweep, with_overrides,
                    write_rows)

__all__ = (
    "ERDTools",
    "main",
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_NUMERIC",
)

_log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# config file keys that are not numerical settings
_RUN_KEYS = {"scheme", "alpha2", "priors", "beta", "theta", "stages", "n_max", "out", "format", "workers", "preset"}


def _options(args: argparse.Namespace) -> Tuple[Dict[str, Any], Settings]:
    """Merge flags over the config file over defaults.

    Returns the run options and the numerical settings.
    """
    file_values: Dict[str, Any] = load_config(args.config) if args.config else {}
    run = {k: v for k, v in file_values.items() if k in _RUN_KEYS}
    settings = DEFAULT_SETTINGS.replace(**{k: v for k, v in file_values.items() if k not in _RUN_KEYS})
    for key in _RUN_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            run[key] = value
    if args.seed is not None:
        settings = settings.replace(seed=args.seed)
    return run, settings


def _theta_options(run: Dict[str, Any], stages: int) -> Tuple[Optional[float], Optional[Tuple[float, ...]]]:
    theta = run.get("theta")
    if theta is None:
        return None, None
    values = tuple(float(t) for t in (theta if isinstance(theta, (list, tuple)) else [theta]))
    return values[0], (values if len(values) == stages else None)


def _scenario_arguments(parser: argparse.ArgumentParser, grid: bool) -> None:
    parser.add_argument("--scheme", choices=SCHEMES, help="receiver to evaluate")
    parser.add_argument("--alpha2", help="mean photon number" + (", as start:stop:step" if grid else ""))
    parser.add_argument("--priors", type=float, help="prior of |alpha> (default 0.5)")
    parser.add_argument("--beta", type=float, help="displacement of the photon counting receivers (default: alpha)")
    parser.add_argument("--theta", type=float, nargs="+", help="interaction angle(s) of the atomic receivers (default: optimized)")
    parser.add_argument("--stages", type=int, choices=(1, 2), help="stages of the unambiguous atomic receiver")
    parser.add_argument("--n-max", dest="n_max", type=int, help="Fock truncation override")
    parser.add_argument("--seed", type=int, help="seed of the accessible information search")
    parser.add_argument("--config", help="flat JSON file with defaults; flags take precedence")


def _print_result(stream: TextIO, scheme: str, stage: int, result: ReceiverResult, chain: BoundsChain) -> None:
    bd = result.breakdown
    title = scheme if not stage else f"{scheme} (stage {stage})"
    print(title, file=stream)
    print("=" * len(title), file=stream)
    print(f"I            {bd.mutual_info:.12f} bits", file=stream)
    print(f"I_acc        {bd.i_acc:.12f} bits", file=stream)
    print(f"I'_max       {bd.i_prime_max:.12f} bits", file=stream)
    print(f"E / R / D    {bd.extracted:.9f} / {bd.residual:.9f} / {bd.destroyed:.9f}", file=stream)
    print(f"E+R+D-1      {bd.conservation_residual:.3e}", file=stream)
    print(f"r1 / r2      {result.error_probs[0]:.9e} / {result.error_probs[1]:.9e}", file=stream)
    print(f"avg error    {result.avg_error:.9e}", file=stream)
    if result.thetas:
        print(f"theta        {', '.join(f'{t:.9f}' for t in result.thetas)}", file=stream)
    if result.beta is not None:
        print(f"beta         {result.beta:.9f}", file=stream)
    print("bounds       0 <= I <= I'_max <= I_acc <= chi <= H", file=stream)
    print(f"             {chain.mutual_info:.9f} <= {chain.i_prime_max:.9f} <= {chain.i_acc:.9f}"
          f" <= {chain.holevo:.9f} <= {chain.prior_entropy:.9f}  [{'holds' if chain.holds() else 'VIOLATED'}]",
          file=stream)
    print(file=stream)


class ERDTools(CommandGroup):
    """Extracted, residual and destroyed information of binary coherent-state receivers"""

    def arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("-v", "--verbose", action="count", default=0,
                            help="-v for progress, -vv for debugging output on stderr")

    def subcommand_before_invoke(self, args: argparse.Namespace) -> None:
        level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
        logging.basicConfig(level=level, stream=sys.stderr,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    def on_subcommand_error(self, args: argparse.Namespace, error: Exception) -> Optional[int]:
        if isinstance(error, ConfigError) or (isinstance(error, ValueError) and not isinstance(error, ERDError)):
            print(f"{self.name}: error: {error}", file=sys.stderr)
            return EXIT_USAGE
        if isinstance(error, ERDError):
            print(f"{self.name}: {type(error).__name__}: {error}", file=sys.stderr)
            return EXIT_NUMERIC
        return None

    @inject()
    class Sweep(Command):
        """Evaluate receivers over a grid of mean photon numbers and write one row per point"""

        def arguments(self, parser: argparse.ArgumentParser) -> None:
            _scenario_arguments(parser, grid=True)
            parser.add_argument("--preset", choices=sorted(PRESETS), help="figure panel configuration")
            parser.add_argument("--out", help="output file (default: stdout)")
            parser.add_argument("--format", choices=FORMATS, help="csv (default) or jsonl")
            parser.add_argument("--workers", type=int, help="grid points evaluated in parallel")

        def config(self, args: argparse.Namespace) -> SweepConfig:
            run, settings = _options(args)
            preset = run.get("preset")
            if preset and preset not in PRESETS:
                raise ConfigError(f"unknown preset {preset!r}; expected one of {', '.join(sorted(PRESETS))}")
            cfg = PRESETS[preset] if preset else None
            if cfg is None and "scheme" not in run:
                raise ConfigError("either --scheme or --preset is required")
            stages = int(run.get("stages", cfg.stages if cfg else 1))
            theta, thetas = _theta_options(run, stages)
            changes: Dict[str, Any] = {
                "schemes": (run["scheme"],) if "scheme" in run else None,
                "grid": parse_grid(str(run["alpha2"])) if "alpha2" in run else None,
                "prior": float(run["priors"]) if "priors" in run else None,
                "beta": float(run["beta"]) if "beta" in run else None,
                "theta": theta,
                "thetas": thetas,
                "stages": stages,
                "n_max": int(run["n_max"]) if "n_max" in run else None,
                "out": run.get("out"),
                "fmt": run.get("format"),
                "workers": int(run["workers"]) if "workers" in run else None,
                "settings": settings,
            }
            if cfg is None:
                return SweepConfig(**{k: v for k, v in changes.items() if v is not None})
            return with_overrides(cfg, **changes)

        def main(self, args: argparse.Namespace) -> int:
            cfg = self.config(args)
            rows = run_sweep(cfg)
            if cfg.out:
                with open(cfg.out, "w", encoding="utf-8", newline="") as stream:
                    write_rows(rows, stream, cfg.fmt)
            else:
                write_rows(rows, sys.stdout, cfg.fmt)
            failed = sum(1 for row in rows if row["error"])
            if failed:
                _log.warning("%d of %d rows failed", failed, len(rows))
                return EXIT_NUMERIC
            return EXIT_OK

    @inject()
    class Report(Command):
        """Print the information breakdown and bounds chain of one receiver at one mean photon number"""

        def arguments(self, parser: argparse.ArgumentParser) -> None:
            _scenario_arguments(parser, grid=False)

        def main(self, args: argparse.Namespace) -> int:
            run, settings = _options(args)
            if "scheme" not in run or "alpha2" not in run:
                raise ConfigError("report needs --scheme and --alpha2")
            if run["scheme"] not in SCHEMES:
                raise ConfigError(f"unknown scheme {run['scheme']!r}; expected one of {', '.join(SCHEMES)}")
            try:
                alpha_sq = float(run["alpha2"])
            except ValueError:
                raise ConfigError(f"--alpha2 must be a number, got {run['alpha2']!r}") from None
            stages = int(run.get("stages", 1))
            theta, thetas = _theta_options(run, stages)
            prior = float(run.get("priors", 0.5))
            if not 0.0 <= prior <= 1.0:
                raise ConfigError(f"prior must lie in [0, 1], got {prior}")
            scenario = BinaryCoherentScenario.from_mean_photons(
                alpha_sq, (prior, 1.0 - prior), int(run["n_max"]) if "n_max" in run else None, settings)
            beta = float(run["beta"]) if "beta" in run else None
            results = evaluate(run["scheme"], scenario, beta, theta, thetas, stages)
            signals = scenario.ensemble()
            for stage, result in results:
                bd = result.breakdown
                chain = BoundsChain(bd.mutual_info, bd.i_prime_max, bd.i_acc,
                                    holevo_quantity(signals), shannon_entropy(signals.priors))
                _print_result(sys.stdout, run["scheme"], stage, result, chain)
            return EXIT_OK

        def on_error(self, args: argparse.Namespace, error: Exception) -> Optional[int]:
            if isinstance(error, ZeroAccessibleInfo):
                print("undefined fractions: the signals carry no accessible information "
                      f"({error.value:.3e} bits), so E, R and D cannot be normalized", file=sys.stderr)
                return EXIT_NUMERIC
            return None

    @inject()
    class Presets(Command):
        """List the figure panel configurations"""

        def main(self, args: argparse.Namespace) -> int:
            for name, cfg in sorted(PRESETS.items()):
                start, stop, step = cfg.grid
                extra = f" stages={cfg.stages}" if cfg.stages > 1 else ""
                if cfg.beta is not None:
                    extra += f" beta={cfg.beta:g}"
                print(f"{name}: {', '.join(cfg.schemes)}; alpha^2 {start:g}:{stop:g}:{step:g};"
                      f" priors {cfg.prior:g}/{1 - cfg.prior:g}{extra}")
            return EXIT_OK

    @inject()
    class Version(Command):
        """Print version and platform information"""

        def main(self, args: argparse.Namespace) -> int:
            __version_info__.main()
            return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line interface and return the exit code."""
    return ERDTools(name="erdtools").run(argv)
