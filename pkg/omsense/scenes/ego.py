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
Last updated: 2026-10-12
"""

from typing import Any

from omsense.scenes.scene import SceneSpec


class EgoMotionScene(SceneSpec):
    """
    The camera pans right over a static textured wall at 2 pixels per frame.
    Every DVS event is caused by ego-motion.

    """

    def __init__(self, **kwargs: Any):
        """ """

        params = {
            "name": "ego",
            "height": 128,
            "width": 128,
            "background_seed": 7,
            "texture_scale": 6.0,
            "ego_velocity": (2.0, 0.0),
            "object_rect": None,
            "object_velocity": (0.0, 0.0),
            "object_intensity_delta": 0.0,
            "frame_count": 20,
        }
        params.update(kwargs)

        super(EgoMotionScene, self).__init__(**params)
