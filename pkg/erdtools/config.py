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
"""Numerical settings shared by every module"""
from __future__ import annotations

import dataclasses
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Union

from .errors import ConfigError

__all__ = (
    "Tolerances",
    "OptimizerConfig",
    "QuadratureConfig",
    "Settings",
    "DEFAULT_SETTINGS",
    "load_config",
)

_log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances.

    Attributes
    ----------
    tau_trunc : :class:`float`
        Largest probability a factory state may lose to the Fock cutoff.
    tau_unit : :class:`float`
        Max-norm slack for unitarity checks.
    tau_disp : :class:`float`
        Largest allowed ``||D(beta)|0> - |beta>||`` on the truncated space.
    tau_povm : :class:`float`
        Max-norm slack for POVM completeness.
    eps_outcome : :class:`float`
        Outcome probabilities at or below this are treated as impossible.
    eps_info : :class:`float`
        Normalizing information at or below this makes fractions undefined.
    psd_floor : :class:`float`
        Smallest eigenvalue still accepted as positive semidefinite.
    trace_tol : :class:`float`
        Slack on unit trace of signal states.
    prior_tol : :class:`float`
        Slack on the prior probabilities summing to one.
    """
    tau_trunc: float = 1e-10
    tau_unit: float = 1e-8
    tau_disp: float = 1e-8
    tau_povm: float = 1e-8
    eps_outcome: float = 1e-14
    eps_info: float = 1e-12
    psd_floor: float = -1e-10
    trace_tol: float = 1e-10
    prior_tol: float = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the accessible information search.

    Attributes
    ----------
    starts : :class:`int`
        Number of random starting POVMs.
    seed : :class:`int`
        Seed of the first start; start ``i`` uses ``seed + i``.
    max_iter : :class:`int`
        Ascent steps per start.
    grad_tol : :class:`float`
        Stop once the projected gradient norm drops below this.
    max_dim : :class:`int`
        Largest ensemble support dimension accepted.
    initial_step : :class:`float`
        First trial step of the backtracking line search.
    """
    starts: int = 32
    seed: int = 0
    max_iter: int = 500
    grad_tol: float = 1e-8
    max_dim: int = 8
    initial_step: float = 1.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings of the homodyne soft-decision integral.

    Attributes
    ----------
    half_width : :class:`float`
        The integral runs over ``[-|alpha| - half_width, |alpha| + half_width]``.
    epsabs : :class:`float`
        Absolute tolerance handed to :func:`scipy.integrate.quad`.
    limit : :class:`int`
        Maximum number of adaptive subintervals.
    """
    half_width: float = 8.0
    epsabs: float = 1e-10
    limit: int = 200


@dataclass(frozen=True)
class Settings:
    """All numerical settings in one immutable bundle."""
    tolerances: Tolerances = field(default_factory=Tolerances)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    def replace(self, **flat: Any) -> Settings:
        """Return a copy with flat keys applied.

        Keys are field names of :class:`Tolerances`, :class:`OptimizerConfig`
        or :class:`QuadratureConfig`; ``seed`` and ``starts`` go to the optimizer.

        Raises
        ------
        :exc:`erdtools.errors.ConfigError`
            An unknown key, or a value of the wrong type.
        """
        groups: Dict[str, Dict[str, Any]] = {"tolerances": {}, "optimizer": {}, "quadrature": {}}
        for key, value in flat.items():
            for group in groups:
                section = getattr(self, group)
                if key in {f.name for f in dataclasses.fields(section)}:
                    expected = type(getattr(section, key))
                    try:
                        groups[group][key] = expected(value)
                    except (TypeError, ValueError) as exc:
                        raise ConfigError(f"{key}={value!r} is not a valid {expected.__name__}") from exc
                    break
            else:
                raise ConfigError(f"unknown setting {key!r}")
        return Settings(
            tolerances=dataclasses.replace(self.tolerances, **groups["tolerances"]),
            optimizer=dataclasses.replace(self.optimizer, **groups["optimizer"]),
            quadrature=dataclasses.replace(self.quadrature, **groups["quadrature"]),
        )


DEFAULT_SETTINGS = Settings()


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a flat key-value JSON document.

    Parameters
    ----------
    path : Union[:class:`str`, :class:`pathlib.Path`]
        The file to read.

    Returns
    -------
    Dict[:class:`str`, Any]
        The keys and values, unvalidated.

    Raises
    ------
    :exc:`erdtools.errors.ConfigError`
        Unreadable file, invalid JSON, or a nested value.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, Mapping):
        raise ConfigError(f"config file {path} must hold a JSON object, got {type(data).__name__}")
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            raise ConfigError(f"config key {key!r} must be a scalar")
    _log.debug("loaded %d keys from %s", len(data), path)
    return dict(data)
