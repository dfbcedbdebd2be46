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
Last updated: 2026-10-11
"""

import numpy as np

# ITU-R BT.601 luma weights for R, G, B.
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)


def luma(rgb: np.ndarray) -> np.ndarray:
    """ """

    y = np.tensordot(rgb.astype(np.float64), LUMA_WEIGHTS, axes=([-1], [0])) / 255.0
    return np.clip(y, 0.0, 1.0)


def log_intensity(x: np.ndarray, epsilon: float) -> np.ndarray:
    """ """

    return np.log(x + epsilon)


def temporal_contrast_events(delta: np.ndarray, threshold: float) -> np.ndarray:
    """
    Ternary events from a per-pixel change: +1 above ``+threshold``, -1 below
    ``-threshold``, 0 otherwise. Both comparisons are strict.

    """

    events = np.zeros(delta.shape, dtype=np.int8)
    events[delta > threshold] = 1
    events[delta < -threshold] = -1
    return events


def disk_coverage(radius: int, subsamples: int = 64) -> np.ndarray:
    """
    Count, for every cell of a ``(2r + 1) x (2r + 1)`` grid centered on the origin,
    how many of its ``subsamples x subsamples`` regularly spaced sample points fall
    inside the closed disk of the given radius.

    Sample coordinates are dyadic fractions when ``subsamples`` is a power of two,
    which keeps the counts exactly symmetric under flips and transposition.

    """

    side = 2 * radius + 1
    n = side * subsamples

    coords = (np.arange(n, dtype=np.float64) + 0.5) / subsamples - (radius + 0.5)
    sq = coords**2
    r2 = float(radius) ** 2

    counts = np.empty((side, side), dtype=np.int64)
    for i in range(side):
        rows = sq[i * subsamples : (i + 1) * subsamples]
        inside = (rows[:, None] + sq[None, :]) <= r2
        counts[i] = inside.reshape(subsamples, side, subsamples).sum(axis=(0, 2))

    return counts


def f1_from_deficit(baseline: float, deficit_percent: float) -> float:
    """F1 of a representation reported as ``deficit_percent`` % below ``baseline``."""

    return baseline * (1.0 - deficit_percent / 100.0)


def relative_deficit(f1: float, baseline: float) -> float:
    """ """

    return 100.0 * (baseline - f1) / baseline
