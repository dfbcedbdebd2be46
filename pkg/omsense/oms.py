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

File created: 2026-09-16
Last updated: 2026-10-16
"""

from __future__ import annotations

import logging
import numpy as np
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from scipy import ndimage
from typing import (
    Any,
    Optional,
)

from omsense.config import (
    BoundaryMode,
    SensorConfig,
)
from omsense.exceptions import (
    ConfigurationError,
    InvalidInputError,
)
from omsense.formulas import disk_coverage
from omsense.frames import (
    EventFrame,
    FrameSequence,
    SpikeFrame,
)

log = logging.getLogger(__name__)


class DiskKernel(object):
    """
    A feathered circular averaging filter. Cell ``(i, j)`` of the
    ``(2r + 1) x (2r + 1)`` weight matrix is proportional to the area of the
    disk of radius ``r`` that overlaps the unit square of that cell, and all
    weights sum to one.

    """

    def __init__(self, radius: int, weights: np.ndarray, subsamples: int):
        """ """

        weights = np.array(weights, dtype=np.float64, copy=True)
        weights.setflags(write=False)

        self._radius = radius
        self._weights = weights
        self._subsamples = subsamples

    def __eq__(self, other: Any) -> bool:
        """ """
        if isinstance(other, DiskKernel):
            return self._radius == other._radius and bool(
                np.array_equal(self._weights, other._weights)
            )
        return False

    def __hash__(self) -> int:
        """ """
        return hash((self._radius, self._weights.tobytes()))

    def __str__(self) -> str:
        """ """
        return f"<DiskKernel radius={self._radius} side={self.side}>"

    __repr__ = __str__

    @property
    def radius(self) -> int:
        """ """
        return self._radius

    @property
    def side(self) -> int:
        """ """
        return 2 * self._radius + 1

    @property
    def weights(self) -> np.ndarray:
        """ """
        return self._weights

    @property
    def subsamples(self) -> int:
        """ """
        return self._subsamples


@lru_cache(maxsize=64)
def _cached_disk_kernel(radius: int, subsamples: int) -> DiskKernel:
    """ """

    counts = disk_coverage(radius, subsamples)
    weights = counts / counts.sum()
    log.debug(f"built disk kernel of radius {radius} with {subsamples}^2 subsamples")
    return DiskKernel(radius, weights, subsamples)


def make_disk_kernel(radius: int, *, subsamples: int = 64) -> DiskKernel:
    """
    Construct a disk filter by supersampling every kernel cell with a
    ``subsamples x subsamples`` grid of points and counting those inside the
    disk, then normalizing the counts to sum to one. Kernels are cached per
    ``(radius, subsamples)``.

    Parameters
    ----------
    radius : int
        Radius of the disk in pixels, at least 1.
    subsamples : int
        Sample points per cell along each axis. Powers of two keep the weights
        exactly symmetric.

    Returns
    -------
    DiskKernel
        The immutable kernel.

    Raises
    ------
    ConfigurationError
        If ``radius`` or ``subsamples`` is not a positive integer.

    """

    for name, value in (("radius", radius), ("subsamples", subsamples)):
        if isinstance(value, bool) or not float(value).is_integer() or value < 1:
            raise ConfigurationError(
                f"The disk kernel {name} has to be a positive integer, got `{value}`."
            )

    return _cached_disk_kernel(int(radius), int(subsamples))


def convolve2d(
    frame: np.ndarray,
    kernel: DiskKernel,
    boundary: BoundaryMode = BoundaryMode.REPLICATE,
) -> np.ndarray:
    """
    Center ``kernel`` over every pixel of ``frame`` and store the weighted sum in
    that pixel. The output has the same size as the input. Samples outside the
    frame are clamped to the nearest edge pixel for ``replicate`` and read as
    zero for ``zero``.

    Raises
    ------
    InvalidInputError
        If ``frame`` is not 2D or is smaller than the kernel in any dimension.

    """

    frame = np.asarray(frame, dtype=np.float64)
    boundary = BoundaryMode(boundary)

    if frame.ndim != 2:
        raise InvalidInputError(
            f"Only 2D frames can be filtered, got an array with shape {frame.shape}."
        )

    if frame.shape[0] < kernel.side or frame.shape[1] < kernel.side:
        raise InvalidInputError(
            f"A frame of shape {frame.shape} is smaller than the {kernel.side}x"
            f"{kernel.side} kernel of radius {kernel.radius}, use a smaller radius "
            "or larger frames."
        )

    return ndimage.correlate(
        frame,
        kernel.weights,
        mode=boundary.ndimage_mode,
        cval=0.0,
    )


class OmsResponse(object):
    """
    Every intermediate of one OMS step. ``difference`` is the center response
    minus the weighted surround response, and ``spikes`` is where the
    difference strictly exceeds the OMS threshold.

    """

    def __init__(
        self,
        center_response: np.ndarray,
        surround_response: np.ndarray,
        difference: np.ndarray,
        spikes: SpikeFrame,
    ):
        """ """

        for array in (center_response, surround_response, difference):
            array.setflags(write=False)

        self._center_response = center_response
        self._surround_response = surround_response
        self._difference = difference
        self._spikes = spikes

    @property
    def center_response(self) -> np.ndarray:
        """ """
        return self._center_response

    @property
    def surround_response(self) -> np.ndarray:
        """ """
        return self._surround_response

    @property
    def difference(self) -> np.ndarray:
        """ """
        return self._difference

    @property
    def spikes(self) -> SpikeFrame:
        """ """
        return self._spikes

    @property
    def spike_count(self) -> int:
        """ """
        return self._spikes.count_active()


class OmsFilter(object):
    """
    The center and surround disk filters of an object motion sensitive
    circuit. The center stands in for the receptive field of a retinal ganglion
    cell and the surround for the wider amacrine cell field.

    Parameters
    ----------
    config : SensorConfig | None
        Sensor parameters, defaults to ``SensorConfig()``.

    """

    def __init__(self, config: Optional[SensorConfig] = None):
        """ """

        self._config = config or SensorConfig()
        self._center = make_disk_kernel(
            self._config.center_radius,
            subsamples=self._config.kernel_subsamples,
        )
        self._surround = make_disk_kernel(
            self._config.surround_radius,
            subsamples=self._config.kernel_subsamples,
        )

    @property
    def config(self) -> SensorConfig:
        """ """
        return self._config

    @property
    def center(self) -> DiskKernel:
        """ """
        return self._center

    @property
    def surround(self) -> DiskKernel:
        """ """
        return self._surround

    def apply(self, events: EventFrame) -> OmsResponse:
        """
        Rectify the events, filter them with both disks, subtract and threshold.

        Raises
        ------
        InvalidInputError
            If ``events`` is not an ``EventFrame`` or is smaller than the
            surround kernel.

        """

        if not isinstance(events, EventFrame):
            raise InvalidInputError(
                f"OMS consumes EventFrame values, got `{type(events).__name__}`."
            )

        activity = np.abs(events.data).astype(np.float64)
        boundary = self._config.boundary_mode

        center = convolve2d(activity, self._center, boundary)
        surround = self._config.surround_weight * convolve2d(
            activity, self._surround, boundary
        )
        difference = center - surround

        spikes = SpikeFrame(
            difference > self._config.oms_threshold,
            frame_index=events.frame_index,
        )

        return OmsResponse(center, surround, difference, spikes)


def oms_step(events: EventFrame, config: SensorConfig) -> OmsResponse:
    """
    Compute the object motion sensitivity response of one event frame.

    Parameters
    ----------
    events : EventFrame
        DVS events, at least as large as the surround kernel in each dimension.
    config : SensorConfig
        Sensor parameters.

    Returns
    -------
    OmsResponse
        Both filter responses, their difference and the resulting spikes.

    """

    return OmsFilter(config).apply(events)


def oms_sequence(
    events: FrameSequence,
    config: SensorConfig,
    *,
    workers: int = 1,
) -> FrameSequence:
    """
    Map ``oms_step`` over every frame of a validated event sequence. Frames are
    independent, so with ``workers > 1`` they are filtered in a thread pool. The
    output order always matches the input order.

    """

    events.verify()

    if workers < 1:
        raise ConfigurationError(
            f"The number of workers has to be at least 1, got {workers}."
        )

    oms = OmsFilter(config)

    if workers == 1:
        responses = [oms.apply(f) for f in events]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            responses = list(executor.map(oms.apply, events))

    spikes = FrameSequence([r.spikes for r in responses], frame_rate=events.frame_rate)

    log.debug(
        f"emitted {sum(r.spike_count for r in responses)} OMS spikes over "
        f"{len(events)} frames"
    )

    return spikes
