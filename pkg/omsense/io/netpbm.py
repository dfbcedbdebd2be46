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

File created: 2026-09-25
Last updated: 2026-10-15
"""

import logging
import numpy as np
import re
from typing import (
    Tuple,
    Union,
)

from omsense.exceptions import FormatError
from omsense.frames import (
    EventFrame,
    SpikeFrame,
)

log = logging.getLogger(__name__)

# Event polarity to gray level and back.
_EVENT_TO_GRAY = {-1: 0, 0: 128, 1: 255}
_GRAY_LUT = np.array([0, 128, 255], dtype=np.uint8)

_TOKEN = re.compile(rb"(?:\s|#[^\n\r]*[\n\r])*([^\s#]+)")


def encode_pbm(frame: SpikeFrame) -> bytes:
    """
    Serialize a spike frame as a binary portable bitmap (``P4``). Every row is
    padded to a whole number of bytes, and a set bit is a black pixel, i.e. a
    spike.

    """

    header = f"P4\n{frame.width} {frame.height}\n".encode("ascii")
    return header + np.packbits(frame.data, axis=1).tobytes()


def encode_pgm(frame: EventFrame) -> bytes:
    """
    Serialize an event frame as a binary 8-bit graymap (``P5``) where OFF events
    are black (0), no event is mid gray (128) and ON events are white (255).

    """

    header = f"P5\n{frame.width} {frame.height}\n255\n".encode("ascii")
    return header + _GRAY_LUT[frame.data.astype(np.int64) + 1].tobytes()


def _parse_header(data: bytes, n_fields: int) -> Tuple[bytes, list, int]:
    """
    Read the magic number and ``n_fields`` integer fields, skipping whitespace
    and ``#`` comments. Returns the magic, the fields and the payload offset.

    """

    tokens = []
    offset = 0
    for _ in range(n_fields + 1):
        match = _TOKEN.match(data, offset)
        if match is None:
            raise FormatError("The netpbm header is truncated.")
        tokens.append(match.group(1))
        offset = match.end()

    if data[offset : offset + 1] not in (b" ", b"\t", b"\n", b"\r"):
        raise FormatError("The netpbm header has to end with a single whitespace byte.")

    try:
        values = [int(t) for t in tokens[1:]]
    except ValueError:
        raise FormatError(f"Invalid netpbm header fields {tokens[1:]}.")

    return tokens[0], values, offset + 1


def decode_netpbm(data: bytes) -> Union[SpikeFrame, EventFrame]:
    """
    Parse a ``P4`` bitmap into a ``SpikeFrame`` or a ``P5`` graymap written by
    ``encode_pgm`` into an ``EventFrame``.

    Raises
    ------
    FormatError
        If the magic number is not ``P4`` or ``P5``, the header is malformed, the
        payload is truncated, or a graymap holds gray levels other than 0, 128 and
        255.

    """

    magic = data[:2]

    if magic == b"P4":
        _, (width, height), offset = _parse_header(data, 2)
        row_bytes = (width + 7) // 8
        payload = np.frombuffer(data, dtype=np.uint8, offset=offset)
        if payload.size < row_bytes * height:
            raise FormatError(
                f"The bitmap payload holds {payload.size} bytes, expected "
                f"{row_bytes * height}."
            )
        rows = payload[: row_bytes * height].reshape(height, row_bytes)
        bits = np.unpackbits(rows, axis=1, count=width)
        return SpikeFrame(bits.astype(np.bool_))

    if magic == b"P5":
        _, (width, height, maxval), offset = _parse_header(data, 3)
        if maxval != 255:
            raise FormatError(f"Only 8-bit graymaps are supported, got maxval {maxval}.")
        payload = np.frombuffer(data, dtype=np.uint8, offset=offset)
        if payload.size < width * height:
            raise FormatError(
                f"The graymap payload holds {payload.size} bytes, expected "
                f"{width * height}."
            )
        gray = payload[: width * height].reshape(height, width)
        if not np.all(np.isin(gray, _GRAY_LUT)):
            raise FormatError(
                "An event graymap holds gray levels 0, 128 and 255 only, got "
                f"{np.unique(gray)[:8].tolist()}."
            )
        events = np.zeros(gray.shape, dtype=np.int8)
        events[gray == _EVENT_TO_GRAY[-1]] = -1
        events[gray == _EVENT_TO_GRAY[1]] = 1
        return EventFrame(events)

    raise FormatError(f"Unsupported netpbm magic number {magic!r}, expected P4 or P5.")
