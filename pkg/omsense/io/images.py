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
Last updated: 2026-10-18
"""

import logging
import numpy as np
from PIL import (
    Image,
    UnidentifiedImageError,
)
from pathlib import Path
from tqdm import tqdm
from typing import (
    List,
    Optional,
    Union,
)

from omsense.config import OutputFormat
from omsense.exceptions import (
    ConfigurationError,
    DirectoryNotFoundError,
    FormatError,
    FramesNotFoundError,
    InvalidInputError,
    OutputDirectoryError,
)
from omsense.frames import (
    EventFrame,
    FrameSequence,
    RGBFrame,
    SpikeFrame,
)
from omsense.io.netpbm import (
    decode_netpbm,
    encode_pbm,
    encode_pgm,
)
from omsense.io.path_utils import setup_output_path

log = logging.getLogger(__name__)

_EXTENSIONS = {
    (SpikeFrame, OutputFormat.PGM): ".pbm",
    (SpikeFrame, OutputFormat.PNG): ".png",
    (EventFrame, OutputFormat.PGM): ".pgm",
    (EventFrame, OutputFormat.PNG): ".png",
}


def frame_filename(frame_index: int, extension: str) -> str:
    """Zero padded frame index, e.g. ``000042.pgm``."""
    return f"{frame_index:06d}{extension}"


def _index_from_name(path: Path) -> int:
    """ """
    return int(path.stem) if path.stem.isdigit() else 0


def read_image_sequence(
    directory: Union[Path, str],
    pattern: str = "*.png",
    *,
    frame_rate: float = 5.0,
) -> FrameSequence:
    """
    Decode every image in ``directory`` that matches ``pattern`` into an 8-bit
    RGB frame. Frames are ordered lexicographically by filename and indexed
    from zero. Grayscale and palette images are expanded to three channels.

    Parameters
    ----------
    directory : Path | str
        The local directory holding the frames of one sequence.
    pattern : str
        Glob pattern selecting the frame files. Defaults to ``*.png``.
    frame_rate : float
        The rate the frames were captured at. Defaults to ``5.0``.

    Returns
    -------
    FrameSequence
        A validated sequence of ``RGBFrame`` values.

    Raises
    ------
    DirectoryNotFoundError
        If ``directory`` does not exist.
    FramesNotFoundError
        If no file matches ``pattern``.
    FormatError
        If a file can't be decoded as an image, the error names the file.
    InvalidInputError
        If the images don't all share the same dimensions.

    """

    if isinstance(directory, str):
        directory = Path(directory)

    if not directory.is_dir():
        raise DirectoryNotFoundError(
            f"The frame directory {directory} does not exist or is not a directory."
        )

    paths = sorted(p for p in directory.glob(pattern) if p.is_file())
    if not paths:
        raise FramesNotFoundError(
            f"No frames in {directory} match the pattern `{pattern}`."
        )

    frames = []
    for i, path in enumerate(bar := tqdm(paths, leave=False)):
        bar.set_description(f"Decoding frame {path.name}")

        try:
            with Image.open(path) as image:
                rgb = np.asarray(image.convert("RGB"), dtype=np.uint8)
        except (UnidentifiedImageError, OSError) as e:
            raise FormatError(f"Could not decode the image {path}: {e}.")

        if frames and rgb.shape[:2] != frames[0].shape:
            raise InvalidInputError(
                f"The image {path.name} is {rgb.shape[1]}x{rgb.shape[0]} pixels, but "
                f"{paths[0].name} is {frames[0].width}x{frames[0].height}, every frame "
                "of a sequence has to share the same dimensions."
            )

        frames.append(RGBFrame(rgb, frame_index=i))

    log.debug(f"read {len(frames)} frames from {directory}")

    return FrameSequence(frames, frame_rate=frame_rate).verify()


def write_image_sequence(
    seq: FrameSequence,
    directory: Union[Path, str],
    format: Union[OutputFormat, str] = OutputFormat.PNG,
) -> List[Path]:
    """
    Encode every ``RGBFrame`` of ``seq`` losslessly as PNG.

    Returns
    -------
    list
        The written file paths, in frame order.

    """

    if OutputFormat(format) is not OutputFormat.PNG:
        raise ConfigurationError(
            f"RGB frames can only be written as png, got `{OutputFormat(format).value}`."
        )

    seq.verify()
    if seq.frame_type is not RGBFrame:
        raise InvalidInputError(
            f"Expected RGBFrame values, got {seq.frame_type.__name__} frames."
        )

    directory = setup_output_path(directory)

    paths = []
    for frame in seq:
        path = directory / frame_filename(frame.frame_index, ".png")
        try:
            Image.fromarray(frame.as_numpy(), mode="RGB").save(path)
        except OSError as e:
            raise OutputDirectoryError(f"Could not write the image {path}: {e}.")
        paths.append(path)

    return paths


def _encode_png(frame: Union[SpikeFrame, EventFrame], path: Path):
    """ """

    if isinstance(frame, SpikeFrame):
        gray = np.where(frame.data, 0, 255).astype(np.uint8)
    else:
        gray = np.array([0, 128, 255], dtype=np.uint8)[frame.data.astype(np.int64) + 1]

    Image.fromarray(gray, mode="L").save(path)


def write_spike_frames(
    seq: FrameSequence,
    directory: Union[Path, str],
    format: Union[OutputFormat, str] = OutputFormat.PGM,
) -> List[Path]:
    """
    Write one image per frame of an event or spike sequence. With the ``pgm``
    format spike frames become ``P4`` bitmaps (``.pbm``, a spike is black) and
    event frames become ``P5`` graymaps (``.pgm``, OFF 0, none 128, ON 255). The
    ``png`` format uses the same gray levels in 8-bit grayscale.

    Parameters
    ----------
    seq : FrameSequence
        A valid sequence of ``SpikeFrame`` or ``EventFrame`` values.
    directory : Path | str
        The local directory to write to, created if missing.
    format : OutputFormat | str
        Either ``pgm`` or ``png``. Defaults to ``pgm``.

    Returns
    -------
    list
        The written file paths, named by zero padded frame index.

    Raises
    ------
    OutputDirectoryError
        If the directory or a file can't be written.

    """

    format = OutputFormat(format)
    seq.verify()

    key = (seq.frame_type, format)
    if key not in _EXTENSIONS:
        raise ConfigurationError(
            f"Can't write {seq.frame_type.__name__} frames as `{format.value}`, use "
            "pgm or png."
        )

    directory = setup_output_path(directory)
    extension = _EXTENSIONS[key]

    paths = []
    for frame in (bar := tqdm(seq, leave=False)):
        path = directory / frame_filename(frame.frame_index, extension)
        bar.set_description(f"Writing {path.name}")

        try:
            if format is OutputFormat.PNG:
                _encode_png(frame, path)
            else:
                if isinstance(frame, SpikeFrame):
                    encoded = encode_pbm(frame)
                else:
                    encoded = encode_pgm(frame)
                with open(path, "wb") as f:
                    f.write(encoded)
        except OSError as e:
            raise OutputDirectoryError(f"Could not write the frame {path}: {e}.")

        paths.append(path)

    return paths


def _read_gray_png(path: Path) -> np.ndarray:
    """ """

    try:
        with Image.open(path) as image:
            return np.asarray(image.convert("L"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as e:
        raise FormatError(f"Could not decode the image {path}: {e}.")


def _read_netpbm(path: Path) -> Union[SpikeFrame, EventFrame]:
    """ """

    try:
        with open(path, "rb") as f:
            return decode_netpbm(f.read())
    except FileNotFoundError:
        raise FramesNotFoundError(f"The frame file {path} does not exist.")
    except FormatError as e:
        raise FormatError(f"Could not decode {path}: {e}")


def read_spike_frame(
    path: Union[Path, str],
    frame_index: Optional[int] = None,
) -> SpikeFrame:
    """
    Read a spike frame written by ``write_spike_frames``. The frame index is
    taken from the file name unless given.

    """

    path = Path(path)
    index = _index_from_name(path) if frame_index is None else frame_index

    if path.suffix.lower() == ".png":
        return SpikeFrame(_read_gray_png(path) < 128, frame_index=index)

    frame = _read_netpbm(path)
    if not isinstance(frame, SpikeFrame):
        raise FormatError(f"{path} holds an event graymap, not a spike bitmap.")

    return frame.with_index(index)


def read_event_frame(
    path: Union[Path, str],
    frame_index: Optional[int] = None,
) -> EventFrame:
    """ """

    path = Path(path)
    index = _index_from_name(path) if frame_index is None else frame_index

    if path.suffix.lower() == ".png":
        gray = _read_gray_png(path)
        if not np.all(np.isin(gray, (0, 128, 255))):
            raise FormatError(f"{path} holds gray levels other than 0, 128 and 255.")
        events = np.zeros(gray.shape, dtype=np.int8)
        events[gray == 0] = -1
        events[gray == 255] = 1
        return EventFrame(events, frame_index=index)

    frame = _read_netpbm(path)
    if not isinstance(frame, EventFrame):
        raise FormatError(f"{path} holds a spike bitmap, not an event graymap.")

    return frame.with_index(index)
