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

File created: 2026-09-22
Last updated: 2026-10-18
"""

from __future__ import annotations

import logging
import math
import numpy as np
import pandas as pd
from dataclasses import (
    asdict,
    dataclass,
    fields,
)
from pathlib import Path
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    TextIO,
    Tuple,
    Union,
)

from omsense.config import SensorConfig
from omsense.dvs import dvs_sequence
from omsense.exceptions import (
    InvalidInputError,
    InvalidSceneSpecError,
    UndefinedFractionError,
    UndefinedRatioError,
    VerificationFailedError,
)
from omsense.frames import FrameSequence
from omsense.metrics import avg_bit_rate
from omsense.oms import oms_sequence
from omsense.scenes.scene import (
    GroundTruth,
    SceneSpec,
    load_scene_json,
    render_scene,
)

log = logging.getLogger(__name__)


def _total_active(seq: FrameSequence) -> int:
    """ """
    return sum(f.count_active() for f in seq)


def suppression_ratio(dvs_seq: FrameSequence, oms_seq: FrameSequence) -> float:
    """
    How many OMS spikes survive per DVS event, summed over the whole sequence.
    Values below one mean the OMS stage removed activity.

    Raises
    ------
    InvalidInputError
        If the sequences differ in length or frame shape.
    UndefinedRatioError
        If the DVS sequence holds no events at all, e.g. for a static scene.

    """

    if len(dvs_seq) != len(oms_seq):
        raise InvalidInputError(
            f"Can't compare {len(dvs_seq)} DVS frames with {len(oms_seq)} OMS frames."
        )

    if len(dvs_seq) and dvs_seq.shape != oms_seq.shape:
        raise InvalidInputError(
            f"DVS frames of shape {dvs_seq.shape} don't match OMS frames of shape "
            f"{oms_seq.shape}."
        )

    events = _total_active(dvs_seq)
    if events == 0:
        raise UndefinedRatioError(
            "no DVS events, the suppression ratio is undefined for a scene "
            "without temporal change"
        )

    return _total_active(oms_seq) / events


def object_spike_fraction(
    seq: FrameSequence,
    truth: GroundTruth,
    dilation: int,
) -> float:
    """
    The share of all active elements that land on the object, where the object
    mask of each frame is first grown by ``dilation`` pixels.

    Parameters
    ----------
    seq : FrameSequence
        DVS events or OMS spikes.
    truth : GroundTruth
        Object masks with one mask per frame of ``seq``.
    dilation : int
        Chebyshev dilation of the masks in pixels.

    Raises
    ------
    UndefinedFractionError
        If ``seq`` holds no active elements.

    """

    if len(seq) != len(truth):
        raise InvalidInputError(
            f"Got {len(seq)} frames but {len(truth)} ground truth masks."
        )

    if len(seq) and seq.shape != truth.shape:
        raise InvalidInputError(
            f"Frames of shape {seq.shape} don't match masks of shape {truth.shape}."
        )

    total = _total_active(seq)
    if total == 0:
        raise UndefinedFractionError(
            "no active elements, the object fraction is undefined"
        )

    grown = truth.dilated(dilation)
    inside = sum(
        int(np.count_nonzero(f.data.astype(np.bool_) & mask))
        for f, mask in zip(seq, grown)
    )

    return inside / total


@dataclass(frozen=True)
class SuppressionBaseline(object):
    """One measured scene, the row format of baseline CSV files."""

    scene: str
    frames: int
    dvs_events: int
    oms_spikes: int
    suppression_ratio: float
    dvs_object_fraction: float
    oms_object_fraction: float
    dvs_avg_bits: float
    oms_avg_bits: float

    def to_dict(self) -> Dict[str, Any]:
        """ """
        return asdict(self)


BASELINE_COLUMNS = [f.name for f in fields(SuppressionBaseline)]


def _fraction_or_nan(seq: FrameSequence, truth: GroundTruth, dilation: int) -> float:
    """ """
    try:
        return object_spike_fraction(seq, truth, dilation)
    except UndefinedFractionError:
        log.warning("no active elements to attribute to the object, recording NaN")
        return math.nan


def measure_scene(
    spec: SceneSpec,
    config: Optional[SensorConfig] = None,
    *,
    dilation: Optional[int] = None,
    bit_depth: int = 1,
    workers: int = 1,
) -> SuppressionBaseline:
    """
    Render a scene, run it through both sensor stages and measure how well the
    OMS stage separates object motion from ego-motion.

    Parameters
    ----------
    spec : SceneSpec
        The scene to measure.
    config : SensorConfig | None
        Sensor parameters, defaults to ``SensorConfig()``.
    dilation : int | None
        Mask dilation for the object fractions, defaults to the surround radius.
    bit_depth : int
        Bits per event used for the average data rates. Defaults to ``1``.
    workers : int
        Threads used by the OMS stage.

    Raises
    ------
    UndefinedRatioError
        If the scene produces no DVS events.

    """

    config = config or SensorConfig()
    dilation = config.surround_radius if dilation is None else dilation

    luminance, truth = render_scene(spec)
    dvs = dvs_sequence(luminance, config)
    oms = oms_sequence(dvs, config, workers=workers)

    ratio = suppression_ratio(dvs, oms)

    baseline = SuppressionBaseline(
        scene=spec.name,
        frames=len(dvs),
        dvs_events=_total_active(dvs),
        oms_spikes=_total_active(oms),
        suppression_ratio=ratio,
        dvs_object_fraction=_fraction_or_nan(dvs, truth, dilation),
        oms_object_fraction=_fraction_or_nan(oms, truth, dilation),
        dvs_avg_bits=avg_bit_rate(dvs, bit_depth),
        oms_avg_bits=avg_bit_rate(oms, bit_depth),
    )

    log.info(
        f"scene `{spec.name}`: {baseline.dvs_events} DVS events, "
        f"{baseline.oms_spikes} OMS spikes, suppression ratio {ratio:.4f}"
    )

    return baseline


def write_baselines_csv(
    baselines: Iterable[SuppressionBaseline],
    path: Union[Path, str, TextIO],
):
    """ """

    df = pd.DataFrame([b.to_dict() for b in baselines], columns=BASELINE_COLUMNS)
    df.to_csv(path, index=False, header=True)


def read_baselines_csv(path: Union[Path, str, TextIO]) -> List[SuppressionBaseline]:
    """ """

    try:
        df = pd.read_csv(path, float_precision="round_trip")
    except FileNotFoundError:
        raise InvalidInputError(f"The baseline file {path} does not exist.")

    missing = [c for c in BASELINE_COLUMNS if c not in df.columns]
    if missing:
        raise InvalidInputError(f"The baseline CSV is missing the columns {missing}.")

    return [
        SuppressionBaseline(
            scene=str(row["scene"]),
            frames=int(row["frames"]),
            dvs_events=int(row["dvs_events"]),
            oms_spikes=int(row["oms_spikes"]),
            suppression_ratio=float(row["suppression_ratio"]),
            dvs_object_fraction=float(row["dvs_object_fraction"]),
            oms_object_fraction=float(row["oms_object_fraction"]),
            dvs_avg_bits=float(row["dvs_avg_bits"]),
            oms_avg_bits=float(row["oms_avg_bits"]),
        )
        for _, row in df.iterrows()
    ]


def baseline_drift(
    measured: SuppressionBaseline,
    recorded: SuppressionBaseline,
    tolerance: float = 0.05,
) -> List[str]:
    """
    Name every numeric field of ``measured`` that deviates from ``recorded`` by
    more than ``tolerance`` relative to the recorded value. A recorded zero
    only matches a measured zero, and NaN only matches NaN.

    """

    drifted = []
    for name in BASELINE_COLUMNS:
        if name == "scene":
            continue

        m = float(getattr(measured, name))
        r = float(getattr(recorded, name))

        if math.isnan(m) or math.isnan(r):
            if math.isnan(m) != math.isnan(r):
                drifted.append(name)
            continue

        if abs(m - r) > tolerance * abs(r):
            drifted.append(name)

    return drifted


class SceneAssertions(object):
    """
    Checks attached to a scene file under its ``assertions`` key.

    Parameters
    ----------
    max_suppression_ratio : float | None
        The measured suppression ratio has to be strictly below this value.
    oms_fraction_at_least_dvs : bool
        The OMS object fraction has to be at least the DVS object fraction.
    oms_bits_below_dvs : bool
        The OMS average data rate has to be strictly below the DVS rate.
    baseline : str | None
        CSV file with recorded measurements, relative to the scene file.
    tolerance : float
        Relative tolerance for the baseline comparison. Defaults to ``0.05``.

    """

    _KEYS = (
        "max_suppression_ratio",
        "oms_fraction_at_least_dvs",
        "oms_bits_below_dvs",
        "baseline",
        "tolerance",
    )

    def __init__(
        self,
        max_suppression_ratio: Optional[float] = None,
        oms_fraction_at_least_dvs: bool = False,
        oms_bits_below_dvs: bool = False,
        baseline: Optional[Union[Path, str]] = None,
        tolerance: float = 0.05,
    ):
        """ """

        if not tolerance >= 0:
            raise InvalidSceneSpecError(
                f"The baseline tolerance can't be negative, got {tolerance}."
            )

        self.max_suppression_ratio = (
            None if max_suppression_ratio is None else float(max_suppression_ratio)
        )
        self.oms_fraction_at_least_dvs = bool(oms_fraction_at_least_dvs)
        self.oms_bits_below_dvs = bool(oms_bits_below_dvs)
        self.baseline = None if baseline is None else Path(baseline)
        self.tolerance = float(tolerance)

    @classmethod
    def from_dict(
        cls,
        d: Mapping[str, Any],
        base_dir: Optional[Union[Path, str]] = None,
    ) -> SceneAssertions:
        """ """

        unknown = sorted(set(d) - set(cls._KEYS))
        if unknown:
            raise InvalidSceneSpecError(
                f"Unknown scene assertions {unknown}. Valid ones are {list(cls._KEYS)}."
            )

        params = dict(d)
        if params.get("baseline") is not None and base_dir is not None:
            params["baseline"] = Path(base_dir) / params["baseline"]

        return cls(**params)

    @property
    def empty(self) -> bool:
        """ """
        return (
            self.max_suppression_ratio is None
            and not self.oms_fraction_at_least_dvs
            and not self.oms_bits_below_dvs
            and self.baseline is None
        )

    def check(self, measured: SuppressionBaseline) -> List[str]:
        """
        Return a message for every assertion that ``measured`` fails, the list is
        empty when all of them hold.

        """

        failures = []

        if (
            self.max_suppression_ratio is not None
            and not measured.suppression_ratio < self.max_suppression_ratio
        ):
            failures.append(
                f"suppression ratio {measured.suppression_ratio:.4f} is not below "
                f"{self.max_suppression_ratio}"
            )

        if self.oms_fraction_at_least_dvs and not (
            measured.oms_object_fraction >= measured.dvs_object_fraction
        ):
            failures.append(
                f"OMS object fraction {measured.oms_object_fraction:.4f} is below "
                f"the DVS object fraction {measured.dvs_object_fraction:.4f}"
            )

        if self.oms_bits_below_dvs and not (
            measured.oms_avg_bits < measured.dvs_avg_bits
        ):
            failures.append(
                f"OMS rate {measured.oms_avg_bits:.1f} bits/frame is not below the "
                f"DVS rate {measured.dvs_avg_bits:.1f} bits/frame"
            )

        if self.baseline is not None:
            recorded = [
                b for b in read_baselines_csv(self.baseline) if b.scene == measured.scene
            ]
            if not recorded:
                failures.append(
                    f"no baseline recorded for scene `{measured.scene}` in "
                    f"{self.baseline}"
                )
            else:
                drifted = baseline_drift(measured, recorded[0], self.tolerance)
                if drifted:
                    failures.append(
                        f"{drifted} drifted more than {self.tolerance:.0%} from "
                        f"the baseline in {self.baseline}"
                    )

        return failures

    def verify(self, measured: SuppressionBaseline) -> SuppressionBaseline:
        """
        Raises
        ------
        VerificationFailedError
            Listing every failed assertion.

        """

        failures = self.check(measured)
        if failures:
            raise VerificationFailedError(
                f"Scene `{measured.scene}` failed its assertions: "
                + "; ".join(failures)
            )
        return measured


def read_scene_file(path: Union[Path, str]) -> Tuple[SceneSpec, SceneAssertions]:
    """
    Load a scene and its optional assertions from a JSON file. Baseline paths
    in the assertions are resolved against the directory of the scene file.

    """

    d = load_scene_json(path)
    spec = SceneSpec.from_dict(d)

    assertions = d.get("assertions") or {}
    if not isinstance(assertions, dict):
        raise InvalidSceneSpecError("The `assertions` of a scene have to be an object.")

    return spec, SceneAssertions.from_dict(assertions, Path(path).parent)
