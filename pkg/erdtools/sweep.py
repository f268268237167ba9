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
"""Parameter sweeps over the mean photon number and their tabular output"""
from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, List, Optional, TextIO, Tuple

from .config import DEFAULT_SETTINGS, Settings
from .errors import ConfigError, ERDError
from .receivers import (BinaryCoherentScenario, ReceiverResult, atomic_receiver_optimal, atomic_receiver_unambiguous,
                        homodyne_hard, homodyne_soft, kennedy, pnrd_receiver)

__all__ = (
    "SCHEMES",
    "COLUMNS",
    "FORMATS",
    "SweepConfig",
    "PRESETS",
    "parse_grid",
    "evaluate",
    "run_sweep",
    "write_rows",
    "format_value",
    "with_overrides",
)

_log = logging.getLogger(__name__)

SCHEMES = (
    "homodyne-hard",
    "homodyne-soft",
    "pnrd-hard",
    "pnrd-soft",
    "kennedy",
    "atomic-optimal",
    "atomic-unambiguous",
)

COLUMNS = ("scheme", "alpha_sq", "I", "I_acc", "I_prime_max", "E", "R", "D",
           "r1", "r2", "avg_error", "theta", "stage", "error")

FORMATS = ("csv", "jsonl")

Row = Dict[str, Any]


def parse_grid(text: str) -> Tuple[float, float, float]:
    """Parse ``start:stop:step``; a bare number is a one-point grid.

    Raises
    ------
    :exc:`erdtools.errors.ConfigError`
        Malformed text, a non-positive step, ``stop < start`` or ``start <= 0``.
    """
    parts = text.split(":")
    try:
        if len(parts) == 1:
            start = stop = float(parts[0])
            step = 1.0
        elif len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
        else:
            raise ValueError(text)
    except ValueError:
        raise ConfigError(f"grid {text!r} is not 'start:stop:step' or a single number") from None
    if start <= 0:
        raise ConfigError(f"grid start must be positive, got {start}; the fractions are undefined at alpha = 0")
    if step <= 0 or stop < start:
        raise ConfigError(f"grid {text!r} is empty")
    return start, stop, step


@dataclass(frozen=True)
class SweepConfig:
    """Everything a sweep needs.

    Attributes
    ----------
    schemes : Tuple[:class:`str`, ...]
        Receivers evaluated at each grid point, in output order.
    grid : Tuple[:class:`float`, :class:`float`, :class:`float`]
        ``(start, stop, step)`` of ``|alpha|^2``; ``stop`` is included.
    prior : :class:`float`
        ``eta_1``; ``eta_2 = 1 - eta_1``.
    beta : Optional[:class:`float`]
        Displacement of the photon counting receivers; ``None`` is the Kennedy point.
        The ``kennedy`` scheme always sits at the Kennedy point.
    theta : Optional[:class:`float`]
        Fixed angle for atomic-optimal; ``None`` optimizes it.
    thetas : Optional[Tuple[:class:`float`, ...]]
        Fixed angles for atomic-unambiguous, one per stage.
    stages : :class:`int`
        Stages of atomic-unambiguous; each stage gets its own row.
    n_max : Optional[:class:`int`]
        Truncation override.
    out : Optional[:class:`str`]
        Output path; ``None`` writes to stdout.
    fmt : :class:`str`
        ``"csv"`` or ``"jsonl"``.
    workers : :class:`int`
        Grid points evaluated concurrently.
    settings : :class:`erdtools.config.Settings`
        Numerical settings, including the optimizer seed.
    """
    schemes: Tuple[str, ...]
    grid: Tuple[float, float, float] = (0.02, 4.0, 0.02)
    prior: float = 0.5
    beta: Optional[float] = None
    theta: Optional[float] = None
    thetas: Optional[Tuple[float, ...]] = None
    stages: int = 1
    n_max: Optional[int] = None
    out: Optional[str] = None
    fmt: str = "csv"
    workers: int = 1
    settings: Settings = field(default=DEFAULT_SETTINGS, repr=False)

    def __post_init__(self) -> None:
        if not self.schemes:
            raise ConfigError("no scheme selected")
        for scheme in self.schemes:
            if scheme not in SCHEMES:
                raise ConfigError(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}")
        start, stop, step = self.grid
        if start <= 0 or step <= 0 or stop < start:
            raise ConfigError(f"invalid grid {self.grid}")
        if not 0.0 <= self.prior <= 1.0:
            raise ConfigError(f"prior must lie in [0, 1], got {self.prior}")
        if self.stages not in (1, 2):
            raise ConfigError(f"stages must be 1 or 2, got {self.stages}")
        if self.thetas is not None and len(self.thetas) != self.stages:
            raise ConfigError(f"{len(self.thetas)} angles given for {self.stages} stages")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        if self.n_max is not None and self.n_max < 1:
            raise ConfigError(f"n_max must be at least 1, got {self.n_max}")

    @property
    def priors(self) -> Tuple[float, float]:
        return self.prior, 1.0 - self.prior

    def points(self) -> List[float]:
        """The ``|alpha|^2`` grid, rounded to 12 decimals so that repeated steps stay exact."""
        start, stop, step = self.grid
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]


_FIG_GRID = (0.02, 4.0, 0.02)
# fixed displacement of the photon counting families; at beta = alpha they coincide with kennedy
_PNRD_BETA = 0.5

PRESETS: Dict[str, SweepConfig] = {
    "fig1a": SweepConfig(("homodyne-hard", "homodyne-soft"), _FIG_GRID),
    "fig1b": SweepConfig(("pnrd-hard", "pnrd-soft", "kennedy"), _FIG_GRID, beta=_PNRD_BETA),
    "fig1c": SweepConfig(("atomic-optimal",), _FIG_GRID),
    "fig1d": SweepConfig(("atomic-unambiguous",), _FIG_GRID, stages=2),
}


def evaluate(scheme: str, scenario: BinaryCoherentScenario, beta: Optional[float] = None,
             theta: Optional[float] = None, thetas: Optional[Tuple[float, ...]] = None,
             stages: int = 1) -> List[Tuple[int, ReceiverResult]]:
    """Run one receiver; returns ``(stage, result)`` pairs, stage 0 for single-stage schemes.

    A two-stage unambiguous receiver yields a row for each stage count.
    """
    if scheme == "homodyne-hard":
        return [(0, homodyne_hard(scenario))]
    if scheme == "homodyne-soft":
        return [(0, homodyne_soft(scenario))]
    if scheme in ("pnrd-hard", "pnrd-soft"):
        return [(0, pnrd_receiver(scenario, beta, scheme.split("-")[1]))]
    if scheme == "kennedy":
        return [(0, kennedy(scenario))]
    if scheme == "atomic-optimal":
        return [(0, atomic_receiver_optimal(scenario, "auto" if theta is None else theta))]
    if scheme == "atomic-unambiguous":
        out = []
        for count in range(1, stages + 1):
            angles = "auto" if thetas is None else thetas[:count]
            out.append((count, atomic_receiver_unambiguous(scenario, count, angles)))
        return out
    raise ConfigError(f"unknown scheme {scheme!r}; expected one of {', '.join(SCHEMES)}")


def _row(scheme: str, alpha_sq: float, stage: int, result: ReceiverResult) -> Row:
    bd = result.breakdown
    return {
        "scheme": scheme,
        "alpha_sq": alpha_sq,
        "I": bd.mutual_info,
        "I_acc": bd.i_acc,
        "I_prime_max": bd.i_prime_max,
        "E": bd.extracted,
        "R": bd.residual,
        "D": bd.destroyed,
        "r1": result.error_probs[0],
        "r2": result.error_probs[1],
        "avg_error": result.avg_error,
        "theta": result.thetas[-1] if result.thetas else None,
        "stage": stage or None,
        "error": None,
    }


def _error_row(scheme: str, alpha_sq: float, exc: Exception) -> Row:
    row: Row = dict.fromkeys(COLUMNS)
    row.update(scheme=scheme, alpha_sq=alpha_sq, error=f"{type(exc).__name__}: {exc}")
    return row


def _evaluate_point(task: Tuple[SweepConfig, float]) -> List[Row]:
    cfg, alpha_sq = task
    rows = []
    for scheme in cfg.schemes:
        try:
            scenario = BinaryCoherentScenario.from_mean_photons(alpha_sq, cfg.priors, cfg.n_max, cfg.settings)
            for stage, result in evaluate(scheme, scenario, cfg.beta, cfg.theta, cfg.thetas, cfg.stages):
                rows.append(_row(scheme, alpha_sq, stage, result))
        except Exception as exc:
            _log.warning("%s at |alpha|^2=%g failed: %s", scheme, alpha_sq, exc,
                         exc_info=not isinstance(exc, ERDError))
            rows.append(_error_row(scheme, alpha_sq, exc))
    return rows


def run_sweep(cfg: SweepConfig) -> List[Row]:
    """Evaluate every scheme at every grid point.

    Rows come back in grid order whatever the number of workers; a point
    that fails is recorded with its ``error`` column set and the sweep goes on.
    """
    tasks = [(cfg, alpha_sq) for alpha_sq in cfg.points()]
    _log.info("sweeping %s over %d points with %d worker(s)", ",".join(cfg.schemes), len(tasks), cfg.workers)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_evaluate_point, tasks))
    else:
        chunks = []
        for i, task in enumerate(tasks):
            chunks.append(_evaluate_point(task))
            if (i + 1) % 50 == 0:
                _log.info("%d/%d points done", i + 1, len(tasks))
    return [row for chunk in chunks for row in chunk]


def format_value(value: Any) -> str:
    """CSV cell text: floats with 17 significant digits, missing values empty."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_rows(rows: Iterable[Row], stream: TextIO, fmt: str = "csv") -> None:
    """Write rows as CSV with a header line, or as one JSON object per line."""
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in COLUMNS])
    elif fmt == "jsonl":
        for row in rows:
            stream.write(json.dumps({c: row[c] for c in COLUMNS}) + "\n")
    else:
        raise ConfigError(f"format must be one of {FORMATS}, got {fmt!r}")


def with_overrides(cfg: SweepConfig, **changes: Any) -> SweepConfig:
    """A copy of ``cfg`` with the non-``None`` changes applied."""
    return replace(cfg, **{k: v for k, v in changes.items() if v is not None})
