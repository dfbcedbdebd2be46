import numpy as np
from pathlib import Path
from PIL import Image
from typing import (
    List,
    Sequence,
    Tuple,
)

from omsense import (
    EventFrame,
    FrameSequence,
    LuminanceFrame,
    SpikeFrame,
)


def _random_events(
    rng: np.random.Generator,
    shape: Tuple[int, int],
    density: float = 0.2,
) -> np.ndarray:
    """Ternary events where roughly ``density`` of the pixels fire."""

    active = rng.random(shape) < density
    polarity = rng.choice(np.array([-1, 1], dtype=np.int8), size=shape)
    return np.where(active, polarity, 0).astype(np.int8)


def _event_sequence(arrays: Sequence[np.ndarray], frame_rate: float = 5.0):
    """ """
    return FrameSequence(
        [EventFrame(a, frame_index=i) for i, a in enumerate(arrays)],
        frame_rate=frame_rate,
    )


def _spike_sequence(arrays: Sequence[np.ndarray], frame_rate: float = 5.0):
    """ """
    return FrameSequence(
        [SpikeFrame(a, frame_index=i) for i, a in enumerate(arrays)],
        frame_rate=frame_rate,
    )


def _luminance_sequence(arrays: Sequence[np.ndarray], frame_rate: float = 5.0):
    """ """
    return FrameSequence(
        [LuminanceFrame(a, frame_index=i) for i, a in enumerate(arrays)],
        frame_rate=frame_rate,
    )


def _write_png_frames(directory: Path, arrays: Sequence[np.ndarray]) -> List[Path]:
    """Save uint8 RGB arrays as ``frame_000.png``, ``frame_001.png``, ..."""

    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, a in enumerate(arrays):
        path = directory / f"frame_{i:03d}.png"
        Image.fromarray(np.asarray(a, dtype=np.uint8), mode="RGB").save(path)
        paths.append(path)
    return paths


def _moving_square_rgb(
    n_frames: int = 4,
    size: int = 32,
    square: int = 8,
) -> List[np.ndarray]:
    """A bright square moving one pixel per frame over a dark background."""

    frames = []
    for t in range(n_frames):
        a = np.full((size, size, 3), 30, dtype=np.uint8)
        a[10 : 10 + square, 5 + t : 5 + t + square] = 220
        frames.append(a)
    return frames
