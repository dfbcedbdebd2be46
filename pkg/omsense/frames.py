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
Last updated: 2026-10-16
"""

from __future__ import annotations

import logging
import numpy as np
from enum import Enum
from typing import (
    Any,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Type,
)

from omsense.exceptions import (
    ConfigurationError,
    InvalidInputError,
)
from omsense.formulas import luma

log = logging.getLogger(__name__)


class Frame(object):
    """
    A dense, row-major, immutable 2D grid of per-pixel values for one time step.
    The wrapped ``np.ndarray`` is copied on construction and marked read-only, so
    frames can be shared between workers without synchronization.

    Parameters
    ----------
    data : array_like
        The per-pixel values, validated and converted by the concrete frame type.
    frame_index : int
        The nonnegative time step of the frame within its sequence.

    """

    _dtype: Any = np.float64

    def __init__(self, data: Any, *, frame_index: int = 0):
        """ """

        if isinstance(frame_index, bool) or int(frame_index) != frame_index:
            raise InvalidInputError(
                f"The frame index has to be an integer, got `{frame_index}`."
            )

        if frame_index < 0:
            raise InvalidInputError(
                f"The frame index can't be negative, got {frame_index}."
            )

        array = self._validate(np.asarray(data))
        array = np.array(array, dtype=self._dtype, copy=True)
        array.setflags(write=False)

        self._data = array
        self._frame_index = int(frame_index)

    def _validate(self, data: np.ndarray) -> np.ndarray:
        """ """

        if data.ndim != 2:
            raise InvalidInputError(
                f"A {self.__class__.__name__} has to be a 2D grid, got an array with "
                f"shape {data.shape}."
            )

        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidInputError(
                f"A {self.__class__.__name__} needs at least one pixel, got shape "
                f"{data.shape}."
            )

        return data

    def __eq__(self, other: Any) -> bool:
        """ """
        if isinstance(other, self.__class__):
            return (
                self._frame_index == other._frame_index
                and self._data.shape == other._data.shape
                and bool(np.array_equal(self._data, other._data))
            )
        return False

    def __hash__(self) -> int:
        """ """
        return hash(
            (
                self.__class__.__name__,
                self._frame_index,
                self._data.shape,
                self._data.tobytes(),
            )
        )

    def __str__(self) -> str:
        """ """
        return (
            f"<{self.__class__.__name__} {self.height}x{self.width} "
            f"at index {self._frame_index}>"
        )

    __repr__ = __str__

    @property
    def data(self) -> np.ndarray:
        """The read-only per-pixel values."""
        return self._data

    @property
    def frame_index(self) -> int:
        """ """
        return self._frame_index

    @property
    def height(self) -> int:
        """ """
        return self._data.shape[0]

    @property
    def width(self) -> int:
        """ """
        return self._data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        """The ``(height, width)`` of the frame in pixels."""
        return (self._data.shape[0], self._data.shape[1])

    def count_active(self) -> int:
        """The number of nonzero (or ``True``) elements."""
        return int(np.count_nonzero(self._data))

    def with_index(self, frame_index: int) -> Frame:
        """ """
        return self.__class__(self._data, frame_index=frame_index)

    def as_numpy(self, dtype: Optional[np.typing.DTypeLike] = None) -> np.ndarray:
        """
        Return a writable copy of the frame data.

        Parameters
        ----------
        dtype : np.typing.DTypeLike | None
            The data type of the copy, defaults to the frame's own dtype.

        """
        return np.array(self._data, dtype=dtype or self._data.dtype, copy=True)


class RGBFrame(Frame):
    """
    An 8-bit color frame of shape ``(height, width, 3)``, the output of a
    conventional active pixel sensor.

    """

    _dtype = np.uint8

    def _validate(self, data: np.ndarray) -> np.ndarray:
        """ """

        if data.ndim != 3 or data.shape[2] != 3:
            raise InvalidInputError(
                "An RGBFrame has to have shape (height, width, 3), got an array with "
                f"shape {data.shape}."
            )

        super(RGBFrame, self)._validate(data[..., 0])

        if data.dtype != np.uint8:
            if not np.issubdtype(data.dtype, np.number):
                raise InvalidInputError(
                    f"RGB data has to be numeric, got dtype `{data.dtype}`."
                )
            if data.size and (data.min() < 0 or data.max() > 255):
                raise InvalidInputError(
                    "Every RGB channel value has to lie in [0, 255], got values in "
                    f"[{data.min()}, {data.max()}]."
                )
            if not np.array_equal(data, np.round(data)):
                raise InvalidInputError("RGB channel values have to be integers.")

        return data

    @property
    def channels(self) -> int:
        """ """
        return 3


class LuminanceFrame(Frame):
    """Normalized scalar luminance, every value in ``[0, 1]``."""

    _dtype = np.float64

    def _validate(self, data: np.ndarray) -> np.ndarray:
        """ """

        data = super(LuminanceFrame, self)._validate(data)

        if not np.issubdtype(data.dtype, np.number) or np.issubdtype(
            data.dtype, np.complexfloating
        ):
            raise InvalidInputError(
                f"Luminance has to be real valued, got dtype `{data.dtype}`."
            )

        if not np.all(np.isfinite(data)):
            raise InvalidInputError("Luminance values have to be finite.")

        if data.min() < 0.0 or data.max() > 1.0:
            raise InvalidInputError(
                "Luminance values have to lie in [0, 1], got values in "
                f"[{data.min()}, {data.max()}]."
            )

        return data


class EventFrame(Frame):
    """
    Ternary DVS events, ``+1`` for an ON event, ``-1`` for an OFF event and ``0``
    where the temporal contrast threshold was not exceeded.

    """

    _dtype = np.int8

    def _validate(self, data: np.ndarray) -> np.ndarray:
        """ """

        data = super(EventFrame, self)._validate(data)

        if not np.all(np.isin(data, (-1, 0, 1))):
            raise InvalidInputError(
                "Every event polarity has to be exactly -1, 0 or +1, got values "
                f"{np.unique(data)[:8].tolist()}."
            )

        return data

    def count_on(self) -> int:
        """ """
        return int(np.count_nonzero(self._data > 0))

    def count_off(self) -> int:
        """ """
        return int(np.count_nonzero(self._data < 0))


class SpikeFrame(Frame):
    """Boolean object motion sensitivity spikes."""

    _dtype = np.bool_

    def _validate(self, data: np.ndarray) -> np.ndarray:
        """ """

        data = super(SpikeFrame, self)._validate(data)

        if data.dtype != np.bool_ and not np.all(np.isin(data, (0, 1))):
            raise InvalidInputError(
                "Spike frames hold Boolean values only, got values "
                f"{np.unique(data)[:8].tolist()}."
            )

        return data


class ViolationKind(str, Enum):
    EMPTY = "empty"
    SHAPE_MISMATCH = "shape_mismatch"
    NON_CONSECUTIVE_INDEX = "non_consecutive_index"
    MIXED_FRAME_TYPES = "mixed_frame_types"


class Violation(object):
    """One reason why a ``FrameSequence`` is not valid."""

    def __init__(
        self,
        kind: ViolationKind,
        message: str,
        position: Optional[int] = None,
    ):
        """ """
        self.kind = kind
        self.message = message
        self.position = position

    def __eq__(self, other: Any) -> bool:
        """ """
        if isinstance(other, Violation):
            return (self.kind, self.position) == (other.kind, other.position)
        return False

    def __hash__(self) -> int:
        """ """
        return hash((self.kind, self.position))

    def __str__(self) -> str:
        """ """
        return f"{self.kind.value}: {self.message}"

    __repr__ = __str__


class FrameSequence(object):
    """
    An ordered list of same-shape frames and the rate they were sampled at.

    The constructor does not enforce the sequence invariants so that broken
    sequences can still be inspected with ``validate_sequence``. Call ``verify``
    before relying on them, every processing stage does.

    Parameters
    ----------
    frames : list
        The frames of the sequence, in time order.
    frame_rate : float
        Frames per second, strictly positive. Defaults to ``5.0``.

    """

    def __init__(self, frames: Sequence[Frame] = (), *, frame_rate: float = 5.0):
        """ """

        if not frame_rate > 0:
            raise ConfigurationError(
                f"The frame rate has to be positive, got {frame_rate}."
            )

        for frame in frames:
            if not isinstance(frame, Frame):
                raise InvalidInputError(
                    f"A FrameSequence holds frames only, got `{type(frame).__name__}`."
                )

        self._frames = tuple(frames)
        self._frame_rate = float(frame_rate)

    def __len__(self) -> int:
        """ """
        return len(self._frames)

    def __iter__(self) -> Iterator[Frame]:
        """ """
        return iter(self._frames)

    def __getitem__(self, key: int) -> Frame:
        """ """
        return self._frames[key]

    def __eq__(self, other: Any) -> bool:
        """ """
        if isinstance(other, FrameSequence):
            return (
                self._frame_rate == other._frame_rate and self._frames == other._frames
            )
        return False

    def __hash__(self) -> int:
        """ """
        return hash((self._frame_rate, self._frames))

    def __str__(self) -> str:
        """ """
        kind = self.frame_type.__name__ if self._frames else "empty"
        return f"<FrameSequence of {len(self)} {kind} frames at {self._frame_rate} fps>"

    __repr__ = __str__

    @property
    def frames(self) -> Tuple[Frame, ...]:
        """ """
        return self._frames

    @property
    def frame_rate(self) -> float:
        """ """
        return self._frame_rate

    @property
    def frame_type(self) -> Type[Frame]:
        """ """
        if not self._frames:
            raise InvalidInputError("An empty sequence has no frame type.")
        return type(self._frames[0])

    @property
    def shape(self) -> Tuple[int, int]:
        """The shared ``(height, width)`` of the frames."""
        if not self._frames:
            raise InvalidInputError("An empty sequence has no shape.")
        return self._frames[0].shape

    @property
    def duration(self) -> float:
        """The duration of the sequence in seconds."""
        return len(self._frames) / self._frame_rate

    def timestamps(self) -> np.ndarray:
        """The capture time in seconds of every frame, relative to the first."""
        return np.array([f.frame_index for f in self._frames]) / self._frame_rate

    def verify(self) -> FrameSequence:
        """
        Raise if the sequence breaks any of its invariants.

        Returns
        -------
        FrameSequence
            The instance of ``self`` when it is valid.

        Raises
        ------
        InvalidInputError
            Listing every violation found.

        """

        violations = validate_sequence(self)
        if violations:
            raise InvalidInputError(
                "Invalid frame sequence: " + "; ".join(str(v) for v in violations)
            )

        return self

    def reindexed(self) -> FrameSequence:
        """A copy whose frame indices are 0, 1, 2, ... in sequence order."""
        return FrameSequence(
            [f.with_index(i) for i, f in enumerate(self._frames)],
            frame_rate=self._frame_rate,
        )

    def resample(self, frame_rate: float) -> FrameSequence:
        """
        Temporally subsample the sequence to ``frame_rate``, e.g. a 30 fps
        recording down to 5 fps. Target instant ``k`` takes the source frame at or
        immediately before it, and the result is re-indexed from zero.

        Raises
        ------
        ConfigurationError
            If ``frame_rate`` is not positive or exceeds the current rate.

        """

        if not frame_rate > 0:
            raise ConfigurationError(
                f"The frame rate has to be positive, got {frame_rate}."
            )

        if frame_rate > self._frame_rate:
            raise ConfigurationError(
                f"Can't resample from {self._frame_rate} fps up to {frame_rate} fps, "
                "only temporal subsampling is supported."
            )

        step = self._frame_rate / frame_rate
        n = int(np.floor(len(self._frames) / step + 1e-9))
        picks = [int(np.floor(k * step + 1e-9)) for k in range(n)]

        log.debug(
            f"resampling {len(self._frames)} frames from {self._frame_rate} to "
            f"{frame_rate} fps, keeping {len(picks)}"
        )

        return FrameSequence(
            [self._frames[p].with_index(k) for k, p in enumerate(picks)],
            frame_rate=frame_rate,
        )

    def as_numpy(self, dtype: Optional[np.typing.DTypeLike] = None) -> np.ndarray:
        """Stack the frames into one array of shape ``(n_frames, height, width)``."""
        return np.stack([f.as_numpy(dtype) for f in self._frames])


def validate_sequence(seq: FrameSequence) -> List[Violation]:
    """
    Report every violation of the sequence invariants: the sequence is non-empty,
    all frames share one frame type and one ``(height, width)``, and frame indices
    are consecutive starting at zero.

    Returns
    -------
    list
        The violations found, empty if and only if the sequence is valid.

    """

    if len(seq) == 0:
        return [Violation(ViolationKind.EMPTY, "the sequence has no frames")]

    violations = []
    first = seq[0]

    for position, frame in enumerate(seq):
        if type(frame) is not type(first):
            violations.append(
                Violation(
                    ViolationKind.MIXED_FRAME_TYPES,
                    f"frame {position} is a {type(frame).__name__}, "
                    f"frame 0 is a {type(first).__name__}",
                    position,
                )
            )

        if frame.shape != first.shape:
            violations.append(
                Violation(
                    ViolationKind.SHAPE_MISMATCH,
                    f"frame {position} has shape {frame.shape}, "
                    f"frame 0 has shape {first.shape}",
                    position,
                )
            )

        if frame.frame_index != position:
            violations.append(
                Violation(
                    ViolationKind.NON_CONSECUTIVE_INDEX,
                    f"frame {position} has index {frame.frame_index}",
                    position,
                )
            )

    return violations


def rgb_to_luminance(frame: RGBFrame) -> LuminanceFrame:
    """
    Convert an 8-bit color frame to normalized luminance with the BT.601 weights,
    ``(0.299 R + 0.587 G + 0.114 B) / 255``.

    Raises
    ------
    InvalidInputError
        If ``frame`` is not an ``RGBFrame``.

    """

    if not isinstance(frame, RGBFrame):
        raise InvalidInputError(
            f"Expected an RGBFrame with 3 channels, got `{type(frame).__name__}`."
        )

    return LuminanceFrame(luma(frame.data), frame_index=frame.frame_index)


def sequence_to_luminance(seq: FrameSequence) -> FrameSequence:
    """ """

    return FrameSequence(
        [rgb_to_luminance(f) for f in seq.verify()],
        frame_rate=seq.frame_rate,
    )
