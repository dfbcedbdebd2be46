"""
MIT License

Copyright (c) 2026 The omsense developers

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.

File created: 2026-09-14
Last updated: 2026-10-18
"""

from __future__ import annotations

import json
import logging
from dataclasses import (
    asdict,
    dataclass,
    field,
    fields,
    replace,
)
from enum import Enum
from pathlib import Path
from typing import (
    Any,
    Dict,
    Mapping,
    Optional,
    Union,
)

from omsense.exceptions import ConfigurationError

log = logging.getLogger(__name__)


class BoundaryMode(str, Enum):
    """How samples outside the frame are resolved when filtering."""

    REPLICATE = "replicate"
    ZERO = "zero"

    @property
    def ndimage_mode(self) -> str:
        """The equivalent ``scipy.ndimage`` boundary mode name."""
        return "nearest" if self is BoundaryMode.REPLICATE else "constant"


class OutputFormat(str, Enum):
    PGM = "pgm"
    PNG = "png"
    AER = "aer"
    CSV = "csv"


class RunMode(str, Enum):
    DVS = "dvs"
    OMS = "oms"
    BOTH = "both"


def _coerce_enum(enum_cls, value: Any, name: str):
    """ """

    if isinstance(value, enum_cls):
        return value

    try:
        return enum_cls(str(value).lower())
    except ValueError:
        choices = ", ".join(m.value for m in enum_cls)
        raise ConfigurationError(
            f"Invalid value `{value}` for `{name}`, it has to be one of ({choices})."
        )


def _coerce_number(value: Any, name: str) -> float:
    """ """

    if isinstance(value, bool):
        valid = False
    else:
        try:
            value = float(value)
            valid = True
        except (TypeError, ValueError):
            valid = False

    if not valid:
        raise ConfigurationError(f"`{name}` has to be a number, got `{value}`.")
    return value


def _coerce_integer(value: Any, name: str) -> int:
    """ """

    number = _coerce_number(value, name)
    if not number.is_integer():
        raise ConfigurationError(f"`{name}` has to be an integer, got `{value}`.")
    return int(number)


@dataclass(frozen=True)
class SensorConfig(object):
    """
    Every tunable parameter of the DVS and OMS stages. The defaults are the
    published ones: a temporal contrast threshold of 0.1 in the log domain, an OMS
    threshold of 0.1, a center disk of radius 1 and a surround disk of radius 5.

    Parameters
    ----------
    contrast_threshold : float
        DVS temporal contrast threshold ``C``, strictly positive.
    oms_threshold : float
        Threshold on the center minus surround response, strictly positive.
    center_radius : int
        Radius of the center disk kernel in pixels.
    surround_radius : int
        Radius of the surround disk kernel, must exceed ``center_radius``.
    surround_weight : float
        Scale applied to the surround response, nonnegative.
    boundary_mode : BoundaryMode
        ``replicate`` clamps to the nearest edge pixel, ``zero`` pads with zeros.
    log_epsilon : float
        Offset added before the logarithm so that black pixels stay finite.
    use_log : bool
        Threshold changes of ``ln(I + eps)`` when ``True``, of raw ``I`` otherwise.
    kernel_subsamples : int
        Supersampling resolution per kernel cell used to build disk kernels.

    """

    contrast_threshold: float = 0.1
    oms_threshold: float = 0.1
    center_radius: int = 1
    surround_radius: int = 5
    surround_weight: float = 1.0
    boundary_mode: BoundaryMode = BoundaryMode.REPLICATE
    log_epsilon: float = 1.0 / 255.0
    use_log: bool = True
    kernel_subsamples: int = 64

    def __post_init__(self):
        """ """

        object.__setattr__(
            self,
            "boundary_mode",
            _coerce_enum(BoundaryMode, self.boundary_mode, "boundary_mode"),
        )

        for name in ("center_radius", "surround_radius", "kernel_subsamples"):
            object.__setattr__(self, name, _coerce_integer(getattr(self, name), name))

        for name in (
            "contrast_threshold",
            "oms_threshold",
            "surround_weight",
            "log_epsilon",
        ):
            object.__setattr__(self, name, _coerce_number(getattr(self, name), name))

        if self.center_radius < 1:
            raise ConfigurationError(
                f"The center radius has to be at least 1 pixel, got {self.center_radius}."
            )

        if not self.center_radius < self.surround_radius:
            raise ConfigurationError(
                "The center radius has to be strictly smaller than the surround radius, "
                f"got center_radius={self.center_radius} and "
                f"surround_radius={self.surround_radius}."
            )

        if self.kernel_subsamples < 1:
            raise ConfigurationError(
                f"`kernel_subsamples` has to be at least 1, got {self.kernel_subsamples}."
            )

        if not self.contrast_threshold > 0:
            raise ConfigurationError(
                f"The contrast threshold has to be positive, got {self.contrast_threshold}."
            )

        if not self.oms_threshold > 0:
            raise ConfigurationError(
                f"The OMS threshold has to be positive, got {self.oms_threshold}."
            )

        if not self.surround_weight >= 0:
            raise ConfigurationError(
                f"The surround weight can't be negative, got {self.surround_weight}."
            )

        if not self.log_epsilon > 0:
            raise ConfigurationError(
                f"The log epsilon has to be positive, got {self.log_epsilon}. "
                "A zero epsilon would make ln(0) reachable for black pixels."
            )

        object.__setattr__(self, "use_log", bool(self.use_log))

    def to_dict(self) -> Dict[str, Any]:
        """ """
        d = asdict(self)
        d["boundary_mode"] = self.boundary_mode.value
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> SensorConfig:
        """Build a config from the subset of ``d`` that names sensor fields."""
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names and v is not None})

    def replace(self, **changes: Any) -> SensorConfig:
        """ """
        return replace(self, **changes)


_RUN_FIELDS = (
    "input_path",
    "output_path",
    "output_format",
    "mode",
    "pattern",
    "frame_rate",
    "workers",
    "rgb_bit_depth",
    "event_bit_depth",
    "f1",
)


@dataclass(frozen=True)
class RunConfig(object):
    """
    The effective configuration of one command-line run. Its flat dictionary form,
    see ``to_dict``, is both the config file format and the ``config`` section of
    the run manifest.

    """

    sensor: SensorConfig = field(default_factory=SensorConfig)
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    output_format: OutputFormat = OutputFormat.PGM
    mode: RunMode = RunMode.BOTH
    pattern: str = "*.png"
    frame_rate: float = 5.0
    workers: int = 1
    rgb_bit_depth: int = 24
    event_bit_depth: int = 1
    f1: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        """ """

        object.__setattr__(
            self,
            "output_format",
            _coerce_enum(OutputFormat, self.output_format, "output_format"),
        )
        object.__setattr__(self, "mode", _coerce_enum(RunMode, self.mode, "mode"))

        object.__setattr__(
            self, "frame_rate", _coerce_number(self.frame_rate, "frame_rate")
        )
        for name in ("workers", "rgb_bit_depth", "event_bit_depth"):
            object.__setattr__(self, name, _coerce_integer(getattr(self, name), name))

        if not self.frame_rate > 0:
            raise ConfigurationError(
                f"The frame rate has to be positive, got {self.frame_rate}."
            )

        if self.workers < 1:
            raise ConfigurationError(
                f"The number of workers has to be a positive integer, got {self.workers}."
            )

        for name in ("rgb_bit_depth", "event_bit_depth"):
            if getattr(self, name) < 0:
                raise ConfigurationError(
                    f"`{name}` can't be negative, got {getattr(self, name)}."
                )

        if not isinstance(self.f1 or {}, Mapping):
            raise ConfigurationError(
                f"F1 inputs have to map a representation to a score, got `{self.f1}`."
            )

        f1 = {}
        for key, value in dict(self.f1 or {}).items():
            key = str(key).lower()
            if key not in ("rgb", "dvs", "oms"):
                raise ConfigurationError(
                    f"F1 inputs are keyed by representation (rgb, dvs, oms), got `{key}`."
                )
            value = _coerce_number(value, f"f1.{key}")
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(
                    f"An F1 score lies in [0, 1], got {value} for `{key}`."
                )
            f1[key] = value

        object.__setattr__(self, "f1", f1)

    def to_dict(self) -> Dict[str, Any]:
        """ """

        d = self.sensor.to_dict()
        for name in _RUN_FIELDS:
            value = getattr(self, name)
            d[name] = value.value if isinstance(value, Enum) else value
        d["f1"] = dict(sorted(self.f1.items()))
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> RunConfig:
        """
        Build a ``RunConfig`` from a flat dictionary. A run manifest is accepted as
        well, in which case its ``config`` section is used. Keys that are ``None``
        fall back to the defaults.

        """

        if "config" in d and isinstance(d["config"], Mapping):
            d = d["config"]

        known = set(_RUN_FIELDS) | {f.name for f in fields(SensorConfig)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigurationError(
                f"Unknown configuration keys {unknown}. Valid keys are {sorted(known)}."
            )

        sensor = SensorConfig.from_dict(d)
        run = {k: d[k] for k in _RUN_FIELDS if d.get(k, None) is not None}
        return cls(sensor=sensor, **run)

    @classmethod
    def from_json_file(cls, path: Union[Path, str]) -> RunConfig:
        """ """

        path = Path(path)
        log.debug(f"reading configuration file `{path}`")

        try:
            with open(path, "r") as f:
                d = json.load(f)
        except FileNotFoundError:
            raise ConfigurationError(f"The configuration file {path} does not exist.")
        except json.JSONDecodeError as e:
            raise ConfigurationError(
                f"The configuration file {path} is not valid JSON: {e}."
            )

        if not isinstance(d, dict):
            raise ConfigurationError(
                f"The configuration file {path} has to contain a JSON object."
            )

        return cls.from_dict(d)

    def merged(self, overrides: Mapping[str, Any]) -> RunConfig:
        """
        Return a new config where every non-``None`` value of ``overrides`` replaces
        the current one. This is how command-line flags take precedence over the
        config file.

        """

        d = self.to_dict()
        d.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig.from_dict(d)
