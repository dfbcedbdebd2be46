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

File created: 2026-09-21
Last updated: 2026-10-12
"""

from typing import Any

from omsense.scenes.scene import SceneSpec


class MixedMotionScene(SceneSpec):
    """
    The ego-motion scene with a bright 24x24 object that drifts diagonally
    against the panning background.

    """

    def __init__(self, **kwargs: Any):
        """ """

        params = {
            "name": "mixed",
            "height": 128,
            "width": 128,
            "background_seed": 7,
            "texture_scale": 6.0,
            "ego_velocity": (2.0, 0.0),
            "object_rect": (40, 48, 24, 24),
            "object_velocity": (-1.0, 1.0),
            "object_intensity_delta": 0.35,
            "frame_count": 20,
        }
        params.update(kwargs)

        super(MixedMotionScene, self).__init__(**params)
