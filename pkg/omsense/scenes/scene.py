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

File created: 2026-09-20
Last updated: 2026-10-18
"""

from __future__ import annotations

import json
import logging
import numpy as np
from pathlib import Path
from scipy import ndimage
from typing import (
    Any,
    Dict,
    Iterator,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from omsense.exceptions import (
    InvalidInputError,
    InvalidSceneSpecError,
)
from omsense.frames import (
    FrameSequence,
    LuminanceFrame,
)

log = logging.getLogger(__name__)

Vector = Tuple[float, float]
Rect = Tuple[int, int, int, int]

_SPEC_FIELDS = (
    "name",
    "height",
    "width",
    "background_seed",
    "texture_scale",
    "ego_velocity",
    "object_rect",
    "object_velocity",
    "object_intensity_delta",
    "frame_count",
)


def _integer(value: Any, name: str, minimum: int) -> int:
    """ """

    try:
        valid = not isinstance(value, bool) and float(value).is_integer()
    except (TypeError, ValueError):
        valid = False

    if not valid or value < minimum:
        raise InvalidSceneSpecError(
            f"`{name}` has to be an integer of at least {minimum}, got `{value}`."
        )
    return int(value)


def _real(value: Any, name: str) -> float:
    """ """

    try:
        valid = not isinstance(value, bool) and np.isfinite(float(value))
    except (TypeError, ValueError):
        valid = False

    if not valid:
        raise InvalidSceneSpecError(
            f"`{name}` has to be a finite number, got `{value}`."
        )
    return float(value)


def _vector(value: Any, name: str) -> Vector:
    """ """

    try:
        dx, dy = (float(v) for v in value)
    except (TypeError, ValueError):
        raise InvalidSceneSpecError(
            f"`{name}` has to be a pair (dx, dy) of pixels per frame, got `{value}`."
        )

    if not (np.isfinite(dx) and np.isfinite(dy)):
        raise InvalidSceneSpecError(f"`{name}` has to be finite, got `{value}`.")

    return (dx, dy)


def frame_shift(t: int, velocity: Vector) -> Tuple[int, int]:
    """
    The integer ``(dx, dy)`` displacement after ``t`` frames at a constant
    subpixel velocity. The fractional part accumulates and a whole pixel step
    happens whenever the accumulator crosses an integer.

    """

    return (int(np.floor(t * velocity[0])), int(np.floor(t * velocity[1])))


class SceneSpec(object):
    """
    A synthetic scene with a known split between ego-motion and object motion.

    A smooth value-noise texture fills the frame and is translated by
    ``ego_velocity`` with toroidal wrap, as if the camera panned over an infinite
    periodic wall. An optional flat rectangle, brighter or darker than mid gray
    by ``object_intensity_delta``, rides along with the background and moves
    additionally by ``object_velocity``.

    Parameters
    ----------
    height : int
        Frame height in pixels.
    width : int
        Frame width in pixels.
    background_seed : int
        Seed of the texture generator, identical seeds render identical scenes.
    texture_scale : float
        Approximate size in pixels of one texture blob.
    ego_velocity : tuple
        Background ``(dx, dy)`` in pixels per frame.
    object_rect : tuple | None
        ``(x, y, w, h)`` of the object at frame zero, or ``None`` for no object.
    object_velocity : tuple
        Object ``(dx, dy)`` in pixels per frame relative to the background.
    object_intensity_delta : float
        Offset of the object luminance from 0.5.
    frame_count : int
        Number of frames, at least 2.
    name : str
        Label used in measurement tables.

    """

    def __init__(
        self,
        height: int = 128,
        width: int = 128,
        background_seed: int = 0,
        texture_scale: float = 6.0,
        ego_velocity: Vector = (0.0, 0.0),
        object_rect: Optional[Rect] = None,
        object_velocity: Vector = (0.0, 0.0),
        object_intensity_delta: float = 0.0,
        frame_count: int = 20,
        name: str = "scene",
    ):
        """ """

        self._height = _integer(height, "height", 1)
        self._width = _integer(width, "width", 1)
        self._background_seed = _integer(background_seed, "background_seed", 0)
        self._frame_count = _integer(frame_count, "frame_count", 2)

        texture_scale = _real(texture_scale, "texture_scale")
        if not texture_scale > 0:
            raise InvalidSceneSpecError(
                f"The texture scale has to be a positive number of pixels, got "
                f"`{texture_scale}`."
            )
        self._texture_scale = texture_scale

        self._ego_velocity = _vector(ego_velocity, "ego_velocity")
        self._object_velocity = _vector(object_velocity, "object_velocity")

        self._object_intensity_delta = _real(
            object_intensity_delta, "object_intensity_delta"
        )

        self._object_rect: Optional[Rect] = None
        if object_rect is not None:
            try:
                x, y, w, h = object_rect
            except (TypeError, ValueError):
                raise InvalidSceneSpecError(
                    f"`object_rect` has to be (x, y, w, h) in pixels, got `{object_rect}`."
                )
            self._object_rect = (
                _integer(x, "object_rect.x", 0),
                _integer(y, "object_rect.y", 0),
                _integer(w, "object_rect.w", 1),
                _integer(h, "object_rect.h", 1),
            )
            self._verify_object_in_bounds()

        self._name = str(name)

    def _verify_object_in_bounds(self):
        """ """

        _, _, w, h = self._object_rect
        for t in range(self._frame_count):
            x, y = self.object_position(t)
            if x < 0 or y < 0 or x + w > self._width or y + h > self._height:
                raise InvalidSceneSpecError(
                    f"The object leaves the {self._height}x{self._width} frame at "
                    f"frame {t}, where it spans x in [{x}, {x + w}) and y in "
                    f"[{y}, {y + h}). Move the object or shorten the scene."
                )

    def __eq__(self, other: Any) -> bool:
        """ """
        if isinstance(other, SceneSpec):
            return self.to_dict() == other.to_dict()
        return False

    def __hash__(self) -> int:
        """ """
        return hash(json.dumps(self.to_dict(), sort_keys=True))

    def __str__(self) -> str:
        """ """
        return (
            f"<{self.__class__.__name__} `{self._name}` {self._height}x{self._width} "
            f"with {self._frame_count} frames>"
        )

    __repr__ = __str__

    @property
    def name(self) -> str:
        """ """
        return self._name

    @property
    def height(self) -> int:
        """ """
        return self._height

    @property
    def width(self) -> int:
        """ """
        return self._width

    @property
    def background_seed(self) -> int:
        """ """
        return self._background_seed

    @property
    def texture_scale(self) -> float:
        """ """
        return self._texture_scale

    @property
    def ego_velocity(self) -> Vector:
        """ """
        return self._ego_velocity

    @property
    def object_rect(self) -> Optional[Rect]:
        """ """
        return self._object_rect

    @property
    def object_velocity(self) -> Vector:
        """ """
        return self._object_velocity

    @property
    def object_intensity_delta(self) -> float:
        """ """
        return self._object_intensity_delta

    @property
    def frame_count(self) -> int:
        """ """
        return self._frame_count

    @property
    def object_luminance(self) -> float:
        """ """
        return float(np.clip(0.5 + self._object_intensity_delta, 0.0, 1.0))

    def object_position(self, t: int) -> Tuple[int, int]:
        """The top left ``(x, y)`` of the object at frame ``t``."""

        if self._object_rect is None:
            raise InvalidSceneSpecError(f"The scene `{self._name}` has no object.")

        x, y, _, _ = self._object_rect
        ex, ey = frame_shift(t, self._ego_velocity)
        ox, oy = frame_shift(t, self._object_velocity)
        return (x + ex + ox, y + ey + oy)

    def to_dict(self) -> Dict[str, Any]:
        """ """
        return {
            "name": self._name,
            "height": self._height,
            "width": self._width,
            "background_seed": self._background_seed,
            "texture_scale": self._texture_scale,
            "ego_velocity": list(self._ego_velocity),
            "object_rect": (
                None if self._object_rect is None else list(self._object_rect)
            ),
            "object_velocity": list(self._object_velocity),
            "object_intensity_delta": self._object_intensity_delta,
            "frame_count": self._frame_count,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> SceneSpec:
        """
        Build a plain ``SceneSpec`` from its dictionary form. An ``assertions``
        entry is ignored here, see ``omsense.scenes.read_scene_file``.

        """

        unknown = sorted(set(d) - set(_SPEC_FIELDS) - {"assertions"})
        if unknown:
            raise InvalidSceneSpecError(
                f"Unknown scene fields {unknown}. Valid fields are {list(_SPEC_FIELDS)}."
            )

        return SceneSpec(**{k: d[k] for k in _SPEC_FIELDS if k in d})

    @classmethod
    def from_json_file(cls, path: Union[Path, str]) -> SceneSpec:
        """ """
        return cls.from_dict(load_scene_json(path))


def load_scene_json(path: Union[Path, str]) -> Dict[str, Any]:
    """ """

    path = Path(path)
    log.debug(f"reading scene file `{path}`")

    try:
        with open(path, "r") as f:
            d = json.load(f)
    except FileNotFoundError:
        raise InvalidSceneSpecError(f"The scene file {path} does not exist.")
    except json.JSONDecodeError as e:
        raise InvalidSceneSpecError(f"The scene file {path} is not valid JSON: {e}.")

    if not isinstance(d, dict):
        raise InvalidSceneSpecError(f"The scene file {path} has to hold a JSON object.")

    return d


def value_noise(height: int, width: int, scale: float, seed: int) -> np.ndarray:
    """
    A smooth periodic texture with values in ``[0.1, 0.9]``. Uniform random values
    on a coarse lattice with roughly ``scale`` pixels between nodes are
    interpolated with a smoothstep bilinear blend. The lattice wraps around in
    both directions, so the texture tiles seamlessly.

    """

    gy = max(1, int(round(height / scale)))
    gx = max(1, int(round(width / scale)))

    rng = np.random.default_rng(seed)
    lattice = rng.uniform(0.1, 0.9, size=(gy, gx))

    def _axis(n: int, g: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        u = np.arange(n, dtype=np.float64) * g / n
        i0 = np.floor(u).astype(np.int64)
        f = u - i0
        return i0 % g, (i0 + 1) % g, f * f * (3.0 - 2.0 * f)

    y0, y1, sy = _axis(height, gy)
    x0, x1, sx = _axis(width, gx)

    top = lattice[np.ix_(y0, x0)] * (1 - sx) + lattice[np.ix_(y0, x1)] * sx
    bottom = lattice[np.ix_(y1, x0)] * (1 - sx) + lattice[np.ix_(y1, x1)] * sx
    texture = top * (1 - sy)[:, None] + bottom * sy[:, None]

    return np.clip(texture, 0.1, 0.9)


class GroundTruth(object):
    """Per-frame Boolean masks of the pixels covered by the moving object."""

    def __init__(self, masks: Any):
        """ """

        masks = np.array(masks, dtype=np.bool_, copy=True)
        if masks.ndim != 3:
            raise InvalidInputError(
                f"Ground truth masks have shape (frames, height, width), got "
                f"{masks.shape}."
            )
        masks.setflags(write=False)
        self._masks = masks

    def __len__(self) -> int:
        """ """
        return self._masks.shape[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        """ """
        return iter(self._masks)

    def __getitem__(self, t: int) -> np.ndarray:
        """ """
        return self._masks[t]

    @property
    def masks(self) -> np.ndarray:
        """ """
        return self._masks

    @property
    def shape(self) -> Tuple[int, int]:
        """ """
        return (self._masks.shape[1], self._masks.shape[2])

    def area(self, t: int) -> int:
        """ """
        return int(np.count_nonzero(self._masks[t]))

    def dilated(self, dilation: int) -> GroundTruth:
        """
        Grow every mask by ``dilation`` pixels in Chebyshev distance, i.e. with a
        ``(2d + 1) x (2d + 1)`` square structuring element.

        """

        if isinstance(dilation, bool) or int(dilation) != dilation or dilation < 0:
            raise InvalidInputError(
                f"The dilation has to be a nonnegative integer, got `{dilation}`."
            )

        if dilation == 0:
            return self

        structure = np.ones((2 * int(dilation) + 1,) * 2, dtype=np.bool_)
        return GroundTruth(
            [ndimage.binary_dilation(m, structure=structure) for m in self._masks]
        )


def render_scene(
    spec: SceneSpec,
    *,
    frame_rate: float = 5.0,
) -> Tuple[FrameSequence, GroundTruth]:
    """
    Render every frame of a scene together with its object masks.

    Parameters
    ----------
    spec : SceneSpec
        The scene to render.
    frame_rate : float
        Frame rate assigned to the output sequence. Defaults to ``5.0``.

    Returns
    -------
    tuple
        The ``FrameSequence`` of ``LuminanceFrame`` values and its ``GroundTruth``.

    """

    texture = value_noise(
        spec.height,
        spec.width,
        spec.texture_scale,
        spec.background_seed,
    )

    frames = []
    masks = np.zeros((spec.frame_count, spec.height, spec.width), dtype=np.bool_)

    for t in range(spec.frame_count):
        dx, dy = frame_shift(t, spec.ego_velocity)
        frame = np.roll(texture, shift=(dy, dx), axis=(0, 1))

        if spec.object_rect is not None:
            x, y = spec.object_position(t)
            _, _, w, h = spec.object_rect
            frame[y : y + h, x : x + w] = spec.object_luminance
            masks[t, y : y + h, x : x + w] = True

        frames.append(LuminanceFrame(frame, frame_index=t))

    log.debug(f"rendered {spec}")

    return FrameSequence(frames, frame_rate=frame_rate), GroundTruth(masks)
