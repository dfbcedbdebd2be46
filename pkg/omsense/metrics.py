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

File created: 2026-09-18
Last updated: 2026-10-18
"""

from __future__ import annotations

import logging
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import (
    Any,
    Iterable,
    List,
    Optional,
    TextIO,
    Union,
)

from omsense import formulas
from omsense.exceptions import InvalidInputError
from omsense.frames import (
    Frame,
    FrameSequence,
)

log = logging.getLogger(__name__)

Number = Union[int, float]

REPORT_COLUMNS = [
    "representation",
    "frames",
    "height",
    "width",
    "bit_depth",
    "dense_bits_per_frame",
    "avg_sparse_bits_per_frame",
    "f1_input",
    "perf_per_bit",
]


class Representation(str, Enum):
    RGB = "rgb"
    DVS = "dvs"
    OMS = "oms"

    @property
    def basis(self) -> str:
        """``dense`` for frames that always carry every pixel, ``sparse`` otherwise."""
        return "dense" if self is Representation.RGB else "sparse"


def _check_count(value: Any, name: str):
    """ """

    if isinstance(value, bool) or int(value) != value or value < 0:
        raise InvalidInputError(
            f"`{name}` has to be a nonnegative integer, got `{value}`."
        )


def _check_bit_depth(bit_depth: Number):
    """ """

    if not np.isfinite(bit_depth) or bit_depth < 0:
        raise InvalidInputError(
            f"The bit depth has to be a nonnegative number, got `{bit_depth}`."
        )


def _check_f1(f1: float):
    """ """

    if not 0.0 <= f1 <= 1.0:
        raise InvalidInputError(f"An F1 score lies in [0, 1], got {f1}.")


def dense_bit_rate(height: int, width: int, bit_depth: Number) -> Number:
    """
    Bits needed to transmit every pixel of one frame, ``height * width * bit_depth``.
    The product is exact when all arguments are integers.

    Examples
    --------
    >>> dense_bit_rate(720, 1280, 24)
    22118400

    """

    _check_count(height, "height")
    _check_count(width, "width")
    _check_bit_depth(bit_depth)

    return int(height) * int(width) * bit_depth


def sparse_bit_rate(frame: Frame, bit_depth: Number) -> Number:
    """
    Bits needed to transmit only the active elements of one event or spike frame,
    the number of nonzero elements times ``bit_depth``.

    """

    _check_bit_depth(bit_depth)
    return frame.count_active() * bit_depth


def avg_bit_rate(seq: FrameSequence, bit_depth: Number) -> float:
    """
    The mean of ``sparse_bit_rate`` over every frame of a sequence. Counts are
    summed exactly before dividing, so the result does not depend on frame
    order.

    Raises
    ------
    InvalidInputError
        If the sequence is empty or otherwise invalid.

    """

    seq.verify()
    _check_bit_depth(bit_depth)

    total = sum(f.count_active() for f in seq)
    return float(total * bit_depth / len(seq))


def perf_per_bit(f1: float, avg_bits: float) -> float:
    """
    Normalize a task score by the data rate that produced it.

    Parameters
    ----------
    f1 : float
        The F1 score of a detector trained on the representation, in ``[0, 1]``.
    avg_bits : float
        The average number of bits per frame of the representation.

    Returns
    -------
    float
        ``f1 / avg_bits``.

    Raises
    ------
    InvalidInputError
        If ``avg_bits`` is not strictly positive or ``f1`` is out of range.

    """

    _check_f1(f1)

    if not avg_bits > 0:
        raise InvalidInputError(
            f"The average bits per frame has to be positive, got {avg_bits}."
        )

    return f1 / avg_bits


def f1_from_deficit(baseline: float, deficit_percent: float) -> float:
    """
    The F1 score of a representation that scores ``deficit_percent`` percent
    below ``baseline``, e.g. ``f1_from_deficit(0.4177, 62.89)`` is about 0.1550.

    """

    _check_f1(baseline)

    if not 0.0 <= deficit_percent <= 100.0:
        raise InvalidInputError(
            f"A relative deficit lies in [0, 100] percent, got {deficit_percent}."
        )

    return formulas.f1_from_deficit(baseline, deficit_percent)


def relative_deficit(f1: float, baseline: float) -> float:
    """ """

    _check_f1(f1)

    if not 0.0 < baseline <= 1.0:
        raise InvalidInputError(
            f"The baseline F1 score has to lie in (0, 1], got {baseline}."
        )

    return formulas.relative_deficit(f1, baseline)


@dataclass(frozen=True)
class PerfPerBit(object):
    """An F1 score paired with the data rate it was measured at."""

    f1: float
    avg_bits_per_frame: float
    label: str = ""

    def __post_init__(self):
        """ """
        perf_per_bit(self.f1, self.avg_bits_per_frame)

    @property
    def ratio(self) -> float:
        """ """
        return self.f1 / self.avg_bits_per_frame


def ratio_table(entries: Iterable[PerfPerBit]) -> pd.DataFrame:
    """
    Compare how much task performance every bit carries, pairwise.

    Parameters
    ----------
    entries : Iterable[PerfPerBit]
        At least two entries with distinct labels and positive ratios.

    Returns
    -------
    pd.DataFrame
        Square matrix indexed and labeled by entry, where row ``i`` and column
        ``j`` hold ``ratio_i / ratio_j``. The DVS row and RGB column therefore
        state how many times more F1 score a DVS bit carries than an RGB bit.

    """

    entries = list(entries)

    if len(entries) < 2:
        raise InvalidInputError(
            f"A ratio table needs at least two entries, got {len(entries)}."
        )

    labels = [e.label or str(i) for i, e in enumerate(entries)]
    if len(set(labels)) != len(labels):
        raise InvalidInputError(f"Ratio table labels have to be unique, got {labels}.")

    ratios = np.array([e.ratio for e in entries], dtype=np.float64)
    if np.any(ratios <= 0):
        raise InvalidInputError(
            "Every performance per bit ratio has to be positive to be compared, "
            f"got {ratios.tolist()}."
        )

    return pd.DataFrame(
        ratios[:, None] / ratios[None, :],
        index=labels,
        columns=labels,
    )


@dataclass(frozen=True)
class BitRateReport(object):
    """
    Data rate statistics of one representation. RGB frames are always sent in
    full, so their sparse rate equals the dense rate and their performance per
    bit uses the dense rate. Event representations use the sparse rate.

    """

    representation: Representation
    frame_count: int
    height: int
    width: int
    bit_depth: Number
    bits_per_frame_dense: Number
    avg_bits_per_frame_sparse: float
    f1: Optional[float] = None

    def __post_init__(self):
        """ """

        object.__setattr__(self, "representation", Representation(self.representation))

        for name in ("frame_count", "height", "width"):
            _check_count(getattr(self, name), name)

        _check_bit_depth(self.bit_depth)

        if self.avg_bits_per_frame_sparse < 0 or self.bits_per_frame_dense < 0:
            raise InvalidInputError("Bit rates can't be negative.")

        if self.avg_bits_per_frame_sparse > self.bits_per_frame_dense * (1 + 1e-12):
            raise InvalidInputError(
                f"The sparse rate {self.avg_bits_per_frame_sparse} of "
                f"`{self.representation.value}` exceeds its dense rate "
                f"{self.bits_per_frame_dense}."
            )

        if self.f1 is not None:
            _check_f1(self.f1)

    @property
    def basis(self) -> str:
        """ """
        return self.representation.basis

    @property
    def bits_per_frame(self) -> float:
        """The rate on this report's basis."""
        if self.basis == "dense":
            return float(self.bits_per_frame_dense)
        return float(self.avg_bits_per_frame_sparse)

    @property
    def perf_per_bit(self) -> Optional[float]:
        """ """
        if self.f1 is None:
            return None
        return perf_per_bit(self.f1, self.bits_per_frame)

    def to_perf_per_bit(self) -> PerfPerBit:
        """ """
        if self.f1 is None:
            raise InvalidInputError(
                f"No F1 input was given for `{self.representation.value}`."
            )
        return PerfPerBit(self.f1, self.bits_per_frame, self.representation.value)

    def with_f1(self, f1: Optional[float]) -> BitRateReport:
        """ """
        return BitRateReport(
            self.representation,
            self.frame_count,
            self.height,
            self.width,
            self.bit_depth,
            self.bits_per_frame_dense,
            self.avg_bits_per_frame_sparse,
            f1,
        )


def rgb_report(
    height: int,
    width: int,
    frame_count: int,
    bit_depth: Number = 24,
    f1: Optional[float] = None,
) -> BitRateReport:
    """ """

    dense = dense_bit_rate(height, width, bit_depth)
    return BitRateReport(
        Representation.RGB,
        frame_count,
        height,
        width,
        bit_depth,
        dense,
        float(dense),
        f1,
    )


def sequence_report(
    seq: FrameSequence,
    representation: Union[Representation, str],
    bit_depth: Number = 1,
    f1: Optional[float] = None,
) -> BitRateReport:
    """
    Measure the data rate of an event or spike sequence.

    Parameters
    ----------
    seq : FrameSequence
        Nonempty sequence of ``EventFrame`` or ``SpikeFrame`` values.
    representation : Representation | str
        Which representation the sequence holds, ``dvs`` or ``oms``.
    bit_depth : int | float
        Bits per transmitted element. Defaults to ``1``.
    f1 : float | None
        Optional F1 input used for the performance per bit.

    """

    representation = Representation(representation)
    if representation is Representation.RGB:
        raise InvalidInputError(
            "RGB rates are dense by definition, use `rgb_report` instead."
        )

    height, width = seq.verify().shape

    return BitRateReport(
        representation,
        len(seq),
        height,
        width,
        bit_depth,
        dense_bit_rate(height, width, bit_depth),
        avg_bit_rate(seq, bit_depth),
        f1,
    )


def published_report(
    representation: Union[Representation, str],
    height: int,
    width: int,
    avg_bits: Optional[float] = None,
    bit_depth: Number = 1,
    f1: Optional[float] = None,
) -> BitRateReport:
    """
    A report row for a representation whose average rate is known, e.g. from a
    previously published table, without the frames themselves. For RGB the
    dense rate is used when ``avg_bits`` is omitted.

    """

    representation = Representation(representation)
    dense = dense_bit_rate(height, width, bit_depth)

    if avg_bits is None:
        if representation is not Representation.RGB:
            raise InvalidInputError(
                f"The average bits per frame of `{representation.value}` are required."
            )
        avg_bits = dense

    return BitRateReport(
        representation,
        0,
        height,
        width,
        bit_depth,
        dense,
        float(avg_bits),
        f1,
    )


def reports_to_frame(reports: Iterable[BitRateReport]) -> pd.DataFrame:
    """
    Tabulate reports, one row per representation. When any report carries an F1
    input, a ``ratio_vs_<representation>`` column per F1 row is appended holding
    the performance per bit of the row divided by that of the column.

    """

    reports = list(reports)

    rows = [
        {
            "representation": r.representation.value,
            "frames": r.frame_count,
            "height": r.height,
            "width": r.width,
            "bit_depth": r.bit_depth,
            "dense_bits_per_frame": r.bits_per_frame_dense,
            "avg_sparse_bits_per_frame": r.avg_bits_per_frame_sparse,
            "f1_input": np.nan if r.f1 is None else r.f1,
            "perf_per_bit": np.nan if r.f1 is None else r.perf_per_bit,
        }
        for r in reports
    ]

    df = pd.DataFrame(rows, columns=REPORT_COLUMNS)

    scored = [r for r in reports if r.f1 is not None]
    for other in scored:
        other_perf = other.perf_per_bit
        df[f"ratio_vs_{other.representation.value}"] = [
            np.nan if r.f1 is None or not other_perf else r.perf_per_bit / other_perf
            for r in reports
        ]

    return df


def write_reports_csv(
    reports: Iterable[BitRateReport],
    path: Union[Path, str, TextIO],
):
    """
    Save reports as comma separated values with a header row. Floats are written
    at full precision so that ``read_reports_csv`` recovers them exactly.

    """

    df = reports_to_frame(reports)

    if isinstance(path, (str, Path)):
        log.info(f"saving {len(df)} report rows to {path}")

    df.to_csv(path, index=False, header=True)


def _number(value: Any) -> Number:
    """ """
    value = float(value)
    return int(value) if value.is_integer() else value


def read_reports_csv(path: Union[Path, str, TextIO]) -> List[BitRateReport]:
    """ """

    df = pd.read_csv(path, float_precision="round_trip")

    missing = [c for c in REPORT_COLUMNS if c not in df.columns]
    if missing:
        raise InvalidInputError(f"The report CSV is missing the columns {missing}.")

    return [
        BitRateReport(
            Representation(row["representation"]),
            int(row["frames"]),
            int(row["height"]),
            int(row["width"]),
            _number(row["bit_depth"]),
            _number(row["dense_bits_per_frame"]),
            float(row["avg_sparse_bits_per_frame"]),
            None if pd.isna(row["f1_input"]) else float(row["f1_input"]),
        )
        for _, row in df.iterrows()
    ]


def format_ratio(x: float) -> str:
    """Three significant figures, e.g. ``41.9`` or ``1.89e-08``."""
    return f"{x:.3g}"


def format_report(report: BitRateReport) -> str:
    """ """

    line = (
        f"{report.representation.value}: "
        f"{format_ratio(report.bits_per_frame)} bits/frame ({report.basis})"
    )

    if report.f1 is not None:
        line += f", {format_ratio(report.perf_per_bit)} F1/bit"

    return line


def visualize_bit_rates(
    reports: Iterable[BitRateReport],
    *,
    title: str = "Average bits per frame",
    log_scale: bool = True,
    save_path: Optional[Union[Path, str]] = None,
    show: bool = True,
    block: bool = True,
):
    """
    Plot the data rate of every representation as a bar chart, next to its
    performance per bit when F1 inputs are present.

    Parameters
    ----------
    reports : Iterable[BitRateReport]
        The rows to plot.
    title : str
        The header title of the data rate plot.
    log_scale : bool
        ``True`` to draw the y-axes in log scale. Defaults to ``True``.
    save_path : Path | str | None
        The local file to save the generated plot to. Does not save the plot if
        the argument is ``None``.
    show : bool
        ``True`` if the generated plot should be shown on the screen, otherwise
        ``False``. Defaults to ``True``.
    block : bool
        Whether to wait for all figures to be closed before returning.

    """

    reports = list(reports)
    if not reports:
        raise InvalidInputError("There are no reports to plot.")

    scored = [r for r in reports if r.f1 is not None]
    n_axes = 2 if scored else 1

    fig, axes = plt.subplots(1, n_axes, figsize=(5 * n_axes, 4), squeeze=False)

    labels = [r.representation.value.upper() for r in reports]
    ax = axes[0][0]
    ax.bar(labels, [r.bits_per_frame for r in reports])
    ax.set_title(title)
    ax.set_ylabel("Bits per frame")
    if log_scale:
        ax.set_yscale("log")

    if scored:
        ax = axes[0][1]
        ax.bar(
            [r.representation.value.upper() for r in scored],
            [r.perf_per_bit for r in scored],
        )
        ax.set_title("Performance per bit")
        ax.set_ylabel("F1 score per bit")
        if log_scale:
            ax.set_yscale("log")

    fig.tight_layout()

    if save_path:
        log.info(f"saving plot to path {save_path}")
        fig.savefig(save_path)
        log.info("OK!")

    if show:
        plt.show(block=block)

    plt.close(fig)
