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

import math
import unittest
import numpy as np
from hypothesis import (
    given,
    settings,
    strategies as st,
)
from hypothesis.extra.numpy import arrays

from omsense import (
    ConfigurationError,
    DvsEmulator,
    DvsState,
    EventFrame,
    FrameSequence,
    InvalidInputError,
    LuminanceFrame,
    SensorConfig,
    dvs_sequence,
    dvs_step,
    log_transform,
)

from .mock_frames import _luminance_sequence

EPS = 1.0 / 255.0


@st.composite
def _frame_pairs(draw, min_value: float = 0.0, max_side: int = 8):
    """Two luminance arrays of the same random shape."""

    shape = draw(
        st.tuples(
            st.integers(min_value=1, max_value=max_side),
            st.integers(min_value=1, max_value=max_side),
        )
    )
    elements = st.floats(
        min_value=min_value,
        max_value=1.0,
        allow_nan=False,
        allow_infinity=False,
    )
    a = draw(arrays(np.float64, shape, elements=elements))
    b = draw(arrays(np.float64, shape, elements=elements))
    return a, b


def _oracle_events(before: np.ndarray, after: np.ndarray, config: SensorConfig):
    """Threshold every pixel's change one at a time."""

    if config.use_log:
        before = np.log(before + config.log_epsilon)
        after = np.log(after + config.log_epsilon)

    c = config.contrast_threshold
    events = np.zeros(before.shape, dtype=np.int8)
    for y in range(before.shape[0]):
        for x in range(before.shape[1]):
            delta = after[y, x] - before[y, x]
            if delta > c:
                events[y, x] = 1
            elif delta < -c:
                events[y, x] = -1
    return events


def _step_pair(a: np.ndarray, b: np.ndarray, config: SensorConfig) -> EventFrame:
    """ """
    _, state = dvs_step(DvsState(), LuminanceFrame(a, frame_index=0), config)
    events, _ = dvs_step(state, LuminanceFrame(b, frame_index=1), config)
    return events


class LogTransformTests(unittest.TestCase):
    """ """

    def test_black(self):
        """ """

        out = log_transform(LuminanceFrame(np.zeros((2, 2))), EPS)

        self.assertEqual((2, 2), out.shape)
        np.testing.assert_allclose(out, math.log(1.0 / 255.0))
        self.assertAlmostEqual(-5.5413, out[0, 0], places=4)

    def test_nonpositive_epsilon(self):
        """ """

        with self.assertRaises(ConfigurationError):
            log_transform(LuminanceFrame(np.ones((2, 2))), 0.0)

        with self.assertRaises(ConfigurationError):
            log_transform(LuminanceFrame(np.ones((2, 2))), -1.0)

    def test_scaling_is_a_constant_offset(self):
        """ """

        x = np.linspace(0.5, 1.0, 12).reshape(3, 4)
        k = 0.6

        diff = log_transform(LuminanceFrame(x), 1e-9) - log_transform(
            LuminanceFrame(k * x), 1e-9
        )

        np.testing.assert_allclose(diff, -math.log(k), atol=1e-8)


class DvsStepTests(unittest.TestCase):
    """ """

    def test_first_frame_initializes(self):
        """ """

        state = DvsState()
        self.assertFalse(state.initialized)

        events, state = dvs_step(
            state, LuminanceFrame(np.full((3, 3), 0.5)), SensorConfig()
        )

        self.assertEqual(0, events.count_active())
        self.assertTrue(state.initialized)
        self.assertEqual((3, 3), state.shape)

    def test_identical_frames(self):
        """ """

        a = np.random.default_rng(1).uniform(0.0, 1.0, (6, 6))
        events = _step_pair(a, a, SensorConfig())

        self.assertEqual(0, events.count_active())

    def test_single_on_event(self):
        """ """

        a = np.full((5, 5), 0.5)
        b = a.copy()
        b[2, 3] = (0.5 + EPS) * math.exp(0.2) - EPS

        events = _step_pair(a, b, SensorConfig())

        expected = np.zeros((5, 5), dtype=np.int8)
        expected[2, 3] = 1
        np.testing.assert_array_equal(expected, events.data)

    def test_single_off_event(self):
        """ """

        a = np.full((5, 5), 0.5)
        b = a.copy()
        b[1, 1] = (0.5 + EPS) * math.exp(-0.15) - EPS

        events = _step_pair(a, b, SensorConfig())

        expected = np.zeros((5, 5), dtype=np.int8)
        expected[1, 1] = -1
        np.testing.assert_array_equal(expected, events.data)

    def test_tie_produces_no_event(self):
        """ """

        config = SensorConfig(contrast_threshold=0.25, use_log=False)

        a = np.full((2, 2), 0.5)
        b = np.array([[0.75, 0.25], [0.5, 0.5]])

        events = _step_pair(a, b, config)
        self.assertEqual(0, events.count_active())

        b = np.array([[0.76, 0.24], [0.5, 0.5]])
        events = _step_pair(a, b, config)
        np.testing.assert_array_equal([[1, -1], [0, 0]], events.data)

    def test_linear_mode(self):
        """ """

        config = SensorConfig(use_log=False)

        a = np.full((2, 2), 0.05)
        b = np.full((2, 2), 0.10)

        self.assertEqual(0, _step_pair(a, b, config).count_active())
        self.assertEqual(4, _step_pair(a, b, SensorConfig()).count_active())

    def test_reference_resets_every_frame(self):
        """ """

        config = SensorConfig()
        emulator = DvsEmulator(config)

        # A slow ramp never fires when every step stays below threshold.
        for i, v in enumerate(np.linspace(0.5, 0.9, 20)):
            events = emulator.step(LuminanceFrame(np.full((2, 2), v), frame_index=i))
            self.assertEqual(0, events.count_active())

    def test_shape_mismatch(self):
        """ """

        _, state = dvs_step(DvsState(), LuminanceFrame(np.zeros((3, 3))), SensorConfig())

        with self.assertRaises(InvalidInputError):
            dvs_step(state, LuminanceFrame(np.zeros((3, 4))), SensorConfig())

    def test_keeps_frame_index(self):
        """ """

        events = _step_pair(np.zeros((2, 2)), np.ones((2, 2)), SensorConfig())
        self.assertEqual(1, events.frame_index)

    @settings(max_examples=500)
    @given(_frame_pairs(), st.booleans())
    def test_matches_pixel_oracle(self, pair, use_log):
        """ """

        a, b = pair
        config = SensorConfig(use_log=use_log)

        events = _step_pair(a, b, config)

        np.testing.assert_array_equal(_oracle_events(a, b, config), events.data)
        self.assertTrue(np.all(np.isin(events.data, (-1, 0, 1))))

    @given(_frame_pairs())
    def test_zero_change_twice(self, pair):
        """ """

        a, _ = pair
        config = SensorConfig()

        _, state = dvs_step(DvsState(), LuminanceFrame(a), config)
        _, state = dvs_step(state, LuminanceFrame(a), config)
        events, _ = dvs_step(state, LuminanceFrame(a), config)

        self.assertEqual(0, events.count_active())

    @given(_frame_pairs())
    def test_polarity_antisymmetry(self, pair):
        """ """

        a, b = pair
        config = SensorConfig()

        forward = _step_pair(a, b, config)
        backward = _step_pair(b, a, config)

        np.testing.assert_array_equal(forward.data, -backward.data)

    @given(
        _frame_pairs(min_value=10 * EPS),
        st.floats(min_value=0.8, max_value=1.0),
    )
    def test_log_invariance(self, pair, k):
        """ """

        a, b = pair
        config = SensorConfig()

        original = _step_pair(a, b, config)
        scaled = _step_pair(k * a, k * b, config)

        delta = np.log(b + EPS) - np.log(a + EPS)
        slack = 2 * EPS * (1 - k) / (k * min(a.min(), b.min()))
        far = np.abs(np.abs(delta) - config.contrast_threshold) > slack + 1e-9

        np.testing.assert_array_equal(original.data[far], scaled.data[far])


class DvsSequenceTests(unittest.TestCase):
    """ """

    def test_empty(self):
        """ """

        with self.assertRaises(InvalidInputError):
            dvs_sequence(FrameSequence([]), SensorConfig())

    def test_identical_frames(self):
        """ """

        seq = _luminance_sequence([np.full((4, 4), 0.3)] * 5)
        events = dvs_sequence(seq, SensorConfig())

        self.assertEqual(5, len(events))
        self.assertTrue(all(f.count_active() == 0 for f in events))
        self.assertEqual(seq.frame_rate, events.frame_rate)

    def test_global_brightening(self):
        """ """

        seq = _luminance_sequence([np.full((4, 4), 0.2 * 1.5**t) for t in range(4)])
        events = dvs_sequence(seq, SensorConfig())

        self.assertEqual(0, events[0].count_active())
        for f in list(events)[1:]:
            np.testing.assert_array_equal(np.ones((4, 4)), f.data)

    def test_translated_checkerboard(self):
        """ """

        y, x = np.mgrid[0:16, 0:20]
        boards = [np.where(((x + t) // 2 + y // 2) % 2 == 0, 0.9, 0.1) for t in range(4)]

        config = SensorConfig()
        events = dvs_sequence(_luminance_sequence(boards), config)

        self.assertEqual(0, events[0].count_active())
        for t in range(1, 4):
            np.testing.assert_array_equal(
                _oracle_events(boards[t - 1], boards[t], config),
                events[t].data,
            )
            self.assertGreater(events[t].count_active(), 0)

    def test_stream_equals_batch(self):
        """ """

        rng = np.random.default_rng(3)
        seq = _luminance_sequence([rng.uniform(0, 1, (6, 7)) for _ in range(6)])
        config = SensorConfig(contrast_threshold=0.3)

        batch = dvs_sequence(seq, config)

        emulator = DvsEmulator(config)
        stream = [emulator.step(f) for f in seq]

        self.assertEqual(list(batch), stream)
        self.assertEqual(sum(f.count_active() for f in stream), emulator.events_emitted)

        state = DvsState()
        for frame, expected in zip(seq, batch):
            events, state = dvs_step(state, frame, config)
            self.assertEqual(expected, events)

    def test_emulator_reset(self):
        """ """

        emulator = DvsEmulator()
        emulator.step(LuminanceFrame(np.zeros((2, 2))))
        emulator.step(LuminanceFrame(np.ones((2, 2)), frame_index=1))

        self.assertEqual(4, emulator.events_emitted)

        emulator.reset()
        self.assertEqual(0, emulator.events_emitted)
        self.assertFalse(emulator.state.initialized)

        events = emulator.step(LuminanceFrame(np.ones((2, 2))))
        self.assertEqual(0, events.count_active())
