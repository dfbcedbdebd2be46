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

File created: 2026-09-15
Last updated: 2026-10-16
"""

from __future__ import annotations

import logging
import numpy as np
from typing import (
    Optional,
    Tuple,
)

from omsense.config import SensorConfig
from omsense.exceptions import (
    ConfigurationError,
    InvalidInputError,
)
from omsense.formulas import (
    log_intensity,
    temporal_contrast_events,
)
from omsense.frames import (
    EventFrame,
    FrameSequence,
    LuminanceFrame,
)

log = logging.getLogger(__name__)


class DvsState(object):
    """
    The per-pixel reference level that the next frame is differenced against,
    in the log domain unless the sensor is configured with ``use_log=False``.

    """

    def __init__(self, reference: Optional[np.ndarray] = None):
        """ """

        if reference is not None:
            reference = np.array(reference, dtype=np.float64, copy=True)
            reference.setflags(write=False)

        self._reference = reference

    @property
    def reference(self) -> Optional[np.ndarray]:
        """ """
        return self._reference

    @property
    def initialized(self) -> bool:
        """ """
        return self._reference is not None

    @property
    def shape(self) -> Optional[Tuple[int, int]]:
        """ """
        if self._reference is None:
            return None
        return (self._reference.shape[0], self._reference.shape[1])


def log_transform(frame: LuminanceFrame, epsilon: float) -> np.ndarray:
    """
    Map luminance to the log photocurrent ``ln(I + epsilon)`` per pixel.

    Parameters
    ----------
    frame : LuminanceFrame
        The normalized luminance to transform.
    epsilon : float
        Strictly positive offset that keeps black pixels finite.

    Returns
    -------
    np.ndarray
        A float64 array with the same ``(height, width)`` as ``frame``.

    Raises
    ------
    ConfigurationError
        If ``epsilon`` is not strictly positive.

    """

    if not epsilon > 0:
        raise ConfigurationError(
            f"The log epsilon has to be positive, got {epsilon}."
        )

    return log_intensity(frame.data, epsilon)


def _level(frame: LuminanceFrame, config: SensorConfig) -> np.ndarray:
    """ """
    if config.use_log:
        return log_transform(frame, config.log_epsilon)
    return frame.data


def dvs_step(
    state: DvsState,
    frame: LuminanceFrame,
    config: SensorConfig,
) -> Tuple[EventFrame, DvsState]:
    """
    Emit one frame of DVS events by thresholding the change of every pixel
    since the previous frame. The first frame of a stream only initializes the
    reference and produces no events. Afterwards the reference is replaced by
    the current frame on every step, whether or not the pixel fired.

    Raises
    ------
    InvalidInputError
        If ``frame`` is not a ``LuminanceFrame`` or its dimensions differ from
        the reference held by ``state``.

    """

    if not isinstance(frame, LuminanceFrame):
        raise InvalidInputError(
            f"DVS emulation consumes LuminanceFrame values, got `{type(frame).__name__}`."
        )

    level = _level(frame, config)

    if not state.initialized:
        events = np.zeros(frame.shape, dtype=np.int8)
        return EventFrame(events, frame_index=frame.frame_index), DvsState(level)

    if state.shape != frame.shape:
        raise InvalidInputError(
            f"Frame {frame.frame_index} has shape {frame.shape}, but the DVS "
            f"reference has shape {state.shape}."
        )

    events = temporal_contrast_events(level - state.reference, config.contrast_threshold)
    return EventFrame(events, frame_index=frame.frame_index), DvsState(level)


def dvs_sequence(seq: FrameSequence, config: SensorConfig) -> FrameSequence:
    """
    Fold ``dvs_step`` over a validated sequence of luminance frames.

    Parameters
    ----------
    seq : FrameSequence
        Nonempty sequence of ``LuminanceFrame`` values.
    config : SensorConfig
        Sensor parameters, ``contrast_threshold``, ``use_log`` and ``log_epsilon``
        are used.

    Returns
    -------
    FrameSequence
        One ``EventFrame`` per input frame at the same frame rate. The first
        event frame is all zeros.

    """

    seq.verify()

    emulator = DvsEmulator(config)
    events = FrameSequence([emulator.step(f) for f in seq], frame_rate=seq.frame_rate)

    log.debug(
        f"emitted {emulator.events_emitted} DVS events over {len(seq)} frames "
        f"of shape {seq.shape}"
    )

    return events


class DvsEmulator(object):
    """
    A streaming DVS camera, feed it one ``LuminanceFrame`` at a time.

    Parameters
    ----------
    config : SensorConfig | None
        Sensor parameters, defaults to ``SensorConfig()``.

    """

    def __init__(self, config: Optional[SensorConfig] = None):
        """ """
        self._config = config or SensorConfig()
        self._state = DvsState()
        self._events_emitted = 0

    @property
    def config(self) -> SensorConfig:
        """ """
        return self._config

    @property
    def state(self) -> DvsState:
        """ """
        return self._state

    @property
    def events_emitted(self) -> int:
        """The number of ON and OFF events produced since the last reset."""
        return self._events_emitted

    def step(self, frame: LuminanceFrame) -> EventFrame:
        """ """
        events, self._state = dvs_step(self._state, frame, self._config)
        self._events_emitted += events.count_active()
        return events

    def reset(self) -> DvsEmulator:
        """ """
        self._state = DvsState()
        self._events_emitted = 0
        return self
