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

File created: 2026-09-26
Last updated: 2026-10-18
"""

from __future__ import annotations

import logging
import numpy as np
from pathlib import Path
from typing import (
    Any,
    Optional,
    Union,
)

from omsense.exceptions import (
    CapacityError,
    CorruptionError,
    FormatError,
    FramesNotFoundError,
    InvalidInputError,
    OutputDirectoryError,
)
from omsense.frames import (
    EventFrame,
    FrameSequence,
    SpikeFrame,
)

log = logging.getLogger(__name__)

AER_MAGIC = b"AER1"
AER_VERSION = 1

# Flag bit 0, records carry a -1/+1 polarity (DVS events) instead of +1 only.
FLAG_POLARITY = 0x0001

HEADER_DTYPE = np.dtype(
    [
        ("magic", "S4"),
        ("version", "<u2"),
        ("height", "<u2"),
        ("width", "<u2"),
        ("flags", "<u2"),
    ]
)

RECORD_DTYPE = np.dtype(
    [
        ("x", "<u2"),
        ("y", "<u2"),
        ("t", "<u4"),
        ("p", "i1"),
    ]
)

_U16_MAX = np.iinfo(np.uint16).max
_U32_MAX = np.iinfo(np.uint32).max


class AerStream(object):
    """
    An address event representation of a frame sequence, a 12 byte header
    followed by one 9 byte record per active pixel. Every field is little-endian
    without padding. Records are sorted by ``(t, y, x)`` and unique.

    Parameters
    ----------
    height : int
        Frame height in pixels.
    width : int
        Frame width in pixels.
    flags : int
        Header flags, ``FLAG_POLARITY`` for event streams.
    records : np.ndarray
        Structured array with dtype ``RECORD_DTYPE``.

    """

    def __init__(self, height: int, width: int, flags: int, records: np.ndarray):
        """ """

        records = np.asarray(records, dtype=RECORD_DTYPE)
        records.setflags(write=False)

        self._height = int(height)
        self._width = int(width)
        self._flags = int(flags)
        self._records = records

    def __len__(self) -> int:
        """ """
        return self._records.shape[0]

    def __eq__(self, other: Any) -> bool:
        """ """
        if isinstance(other, AerStream):
            return (
                (self._height, self._width, self._flags)
                == (other._height, other._width, other._flags)
                and self._records.tobytes() == other._records.tobytes()
            )
        return False

    def __hash__(self) -> int:
        """ """
        return hash((self._height, self._width, self._flags, self._records.tobytes()))

    def __str__(self) -> str:
        """ """
        return (
            f"<AerStream {self._height}x{self._width} with {len(self)} records, "
            f"flags=0x{self._flags:04x}>"
        )

    __repr__ = __str__

    @property
    def height(self) -> int:
        """ """
        return self._height

    @property
    def width(self) -> int:
        """ """
        return self._width

    @property
    def flags(self) -> int:
        """ """
        return self._flags

    @property
    def polarity_present(self) -> bool:
        """ """
        return bool(self._flags & FLAG_POLARITY)

    @property
    def records(self) -> np.ndarray:
        """ """
        return self._records

    @classmethod
    def from_sequence(cls, seq: FrameSequence) -> AerStream:
        """
        Collect one record per nonzero element of every frame.

        Raises
        ------
        InvalidInputError
            If the sequence is invalid or holds neither events nor spikes.
        CapacityError
            If the frame dimensions exceed 65535 or a frame index exceeds the
            32-bit range.

        """

        seq.verify()

        if seq.frame_type not in (EventFrame, SpikeFrame):
            raise InvalidInputError(
                "Only EventFrame and SpikeFrame sequences can be encoded as AER, "
                f"got {seq.frame_type.__name__} frames."
            )

        height, width = seq.shape
        if height > _U16_MAX or width > _U16_MAX:
            raise CapacityError(
                f"AER coordinates are 16 bit, a {height}x{width} frame doesn't fit."
            )

        last = seq[len(seq) - 1].frame_index
        if last > _U32_MAX:
            raise CapacityError(f"AER frame indices are 32 bit, got index {last}.")

        chunks = []
        for frame in seq:
            ys, xs = np.nonzero(frame.data)
            chunk = np.empty(ys.size, dtype=RECORD_DTYPE)
            chunk["x"] = xs
            chunk["y"] = ys
            chunk["t"] = frame.frame_index
            chunk["p"] = frame.data[ys, xs] if seq.frame_type is EventFrame else 1
            chunks.append(chunk)

        flags = FLAG_POLARITY if seq.frame_type is EventFrame else 0
        return cls(height, width, flags, np.concatenate(chunks))

    def to_bytes(self) -> bytes:
        """ """

        header = np.array(
            [(AER_MAGIC, AER_VERSION, self._height, self._width, self._flags)],
            dtype=HEADER_DTYPE,
        )
        return header.tobytes() + self._records.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> AerStream:
        """
        Parse and verify a byte stream.

        Raises
        ------
        FormatError
            If the magic number, version or flags are not recognized.
        CorruptionError
            If the header or a record is truncated, a coordinate is out of
            bounds, records are out of order or duplicated, or a polarity is
            invalid. The byte ``offset`` of the offending record is attached.

        """

        if len(data) < HEADER_DTYPE.itemsize:
            raise CorruptionError(
                f"The AER stream is {len(data)} bytes long, shorter than its "
                f"{HEADER_DTYPE.itemsize} byte header.",
                offset=0,
            )

        header = np.frombuffer(data, dtype=HEADER_DTYPE, count=1)[0]

        if header["magic"] != AER_MAGIC:
            raise FormatError(
                f"Not an AER stream, the magic number is {bytes(header['magic'])!r} "
                f"instead of {AER_MAGIC!r}."
            )

        if header["version"] != AER_VERSION:
            raise FormatError(
                f"Unsupported AER version {header['version']}, expected {AER_VERSION}."
            )

        flags = int(header["flags"])
        if flags & ~FLAG_POLARITY:
            raise FormatError(f"Unknown AER header flags 0x{flags:04x}.")

        height, width = int(header["height"]), int(header["width"])
        if height == 0 or width == 0:
            raise FormatError(
                f"The AER header declares an empty {height}x{width} frame size."
            )

        payload = len(data) - HEADER_DTYPE.itemsize
        n_records, remainder = divmod(payload, RECORD_DTYPE.itemsize)

        if remainder:
            offset = HEADER_DTYPE.itemsize + n_records * RECORD_DTYPE.itemsize
            raise CorruptionError(
                f"The AER stream ends with a truncated record at byte offset {offset}.",
                offset=offset,
            )

        records = np.frombuffer(
            data,
            dtype=RECORD_DTYPE,
            count=n_records,
            offset=HEADER_DTYPE.itemsize,
        )

        _verify_records(records, height, width, bool(flags & FLAG_POLARITY))

        return cls(height, width, flags, records.copy())

    def to_sequence(
        self,
        frame_count: Optional[int] = None,
        *,
        frame_rate: float = 5.0,
    ) -> FrameSequence:
        """
        Materialize dense frames, as many as ``frame_count`` or up to the highest
        frame index present.

        """

        last = int(self._records["t"].max()) if len(self) else -1

        if frame_count is None:
            frame_count = last + 1

        if last >= frame_count:
            bad = int(np.argmax(self._records["t"] >= frame_count))
            raise CorruptionError(
                f"Record {bad} has frame index {self._records['t'][bad]}, but the "
                f"stream declares {frame_count} frames.",
                offset=_record_offset(bad),
            )

        dense = np.zeros((frame_count, self._height, self._width), dtype=np.int8)
        r = self._records
        dense[r["t"], r["y"], r["x"]] = r["p"]

        if self.polarity_present:
            frames = [EventFrame(f, frame_index=t) for t, f in enumerate(dense)]
        else:
            frames = [SpikeFrame(f != 0, frame_index=t) for t, f in enumerate(dense)]

        return FrameSequence(frames, frame_rate=frame_rate)


def _record_offset(i: int) -> int:
    """ """
    return HEADER_DTYPE.itemsize + i * RECORD_DTYPE.itemsize


def _verify_records(records: np.ndarray, height: int, width: int, polarity: bool):
    """ """

    def _first(mask: np.ndarray) -> Optional[int]:
        hits = np.flatnonzero(mask)
        return int(hits[0]) if hits.size else None

    bad = _first((records["x"] >= width) | (records["y"] >= height))
    if bad is not None:
        raise CorruptionError(
            f"Record {bad} at ({records['x'][bad]}, {records['y'][bad]}) lies outside "
            f"the {height}x{width} frame.",
            offset=_record_offset(bad),
        )

    p = records["p"]
    bad = _first((p != 1) & (p != -1) if polarity else p != 1)
    if bad is not None:
        raise CorruptionError(
            f"Record {bad} has invalid polarity {p[bad]}.",
            offset=_record_offset(bad),
        )

    t = records["t"].astype(np.int64)
    y = records["y"].astype(np.int64)
    x = records["x"].astype(np.int64)
    dt, dy, dx = np.diff(t), np.diff(y), np.diff(x)
    ascending = (dt > 0) | ((dt == 0) & ((dy > 0) | ((dy == 0) & (dx > 0))))

    bad = _first(~ascending)
    if bad is not None:
        raise CorruptionError(
            f"Record {bad + 1} is out of order or duplicates record {bad}, records "
            "have to be strictly sorted by (frame, y, x).",
            offset=_record_offset(bad + 1),
        )


def encode_aer(seq: FrameSequence) -> bytes:
    """Serialize an event or spike sequence to AER bytes."""
    return AerStream.from_sequence(seq).to_bytes()


def decode_aer(
    data: bytes,
    *,
    frame_count: Optional[int] = None,
    frame_rate: float = 5.0,
) -> FrameSequence:
    """
    Parse AER bytes back into dense frames. Event streams decode to
    ``EventFrame`` values and spike streams to ``SpikeFrame`` values.

    Parameters
    ----------
    data : bytes
        The serialized stream.
    frame_count : int | None
        Number of frames to materialize. Defaults to one past the highest frame
        index present, so trailing empty frames are only kept when declared.
    frame_rate : float
        Frame rate of the returned sequence. Defaults to ``5.0``.

    """

    return AerStream.from_bytes(data).to_sequence(frame_count, frame_rate=frame_rate)


def write_aer(path: Union[Path, str], seq: FrameSequence):
    """ """

    data = encode_aer(seq)

    try:
        with open(path, "wb") as f:
            f.write(data)
    except OSError as e:
        raise OutputDirectoryError(f"Could not write the AER file {path}: {e}.")

    log.debug(f"wrote {len(data)} bytes to {path}")


def read_aer(
    path: Union[Path, str],
    *,
    frame_count: Optional[int] = None,
    frame_rate: float = 5.0,
) -> FrameSequence:
    """ """

    try:
        with open(path, "rb") as f:
            data = f.read()
    except FileNotFoundError:
        raise FramesNotFoundError(f"The AER file {path} does not exist.")

    return decode_aer(data, frame_count=frame_count, frame_rate=frame_rate)
