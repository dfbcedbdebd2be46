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

File created: 2026-10-04
Last updated: 2026-10-18
"""

import io
import json
import math
import unittest
import numpy as np
from dataclasses import replace
from pathlib import Path
from tempfile import TemporaryDirectory

from omsense import (
    InvalidInputError,
    InvalidSceneSpecError,
    SensorConfig,
    UndefinedFractionError,
    UndefinedRatioError,
    VerificationFailedError,
)
from omsense.scenes import (
    EgoMotionScene,
    GroundTruth,
    MixedMotionScene,
    SceneAssertions,
    StaticScene,
    SuppressionBaseline,
    baseline_drift,
    measure_scene,
    object_spike_fraction,
    read_baselines_csv,
    read_scene_file,
    suppression_ratio,
    write_baselines_csv,
)

from ..mock_frames import (
    _event_sequence,
    _spike_sequence,
)


def _baseline(**changes) -> SuppressionBaseline:
    """ """

    b = SuppressionBaseline(
        scene="mixed",
        frames=20,
        dvs_events=4000,
        oms_spikes=1000,
        suppression_ratio=0.25,
        dvs_object_fraction=0.2,
        oms_object_fraction=0.4,
        dvs_avg_bits=200.0,
        oms_avg_bits=50.0,
    )
    return replace(b, **changes)


class SuppressionRatioTests(unittest.TestCase):
    """ """

    def test_ratio(self):
        """ """

        dvs = _event_sequence([np.zeros((4, 4)), np.eye(4), -np.eye(4)])
        oms = _spike_sequence([np.zeros((4, 4)), np.eye(4), np.zeros((4, 4))])

        self.assertAlmostEqual(0.5, suppression_ratio(dvs, oms))

    def test_no_spikes(self):
        """ """

        dvs = _event_sequence([np.zeros((4, 4)), np.eye(4)])
        oms = _spike_sequence([np.zeros((4, 4))] * 2)

        self.assertEqual(0.0, suppression_ratio(dvs, oms))

    def test_no_events(self):
        """ """

        dvs = _event_sequence([np.zeros((4, 4))] * 2)
        oms = _spike_sequence([np.zeros((4, 4))] * 2)

        with self.assertRaises(UndefinedRatioError):
            suppression_ratio(dvs, oms)

    def test_mismatch(self):
        """ """

        dvs = _event_sequence([np.eye(4)] * 2)

        with self.assertRaises(InvalidInputError):
            suppression_ratio(dvs, _spike_sequence([np.eye(4)]))

        with self.assertRaises(InvalidInputError):
            suppression_ratio(dvs, _spike_sequence([np.eye(5)] * 2))


class ObjectFractionTests(unittest.TestCase):
    """ """

    def _truth(self) -> GroundTruth:
        """ """

        masks = np.zeros((2, 12, 12), dtype=bool)
        masks[:, 4:8, 4:8] = True
        return GroundTruth(masks)

    def test_inside(self):
        """ """

        spikes = np.zeros((12, 12), dtype=bool)
        spikes[5, 5] = spikes[6, 7] = True

        seq = _spike_sequence([spikes, spikes])
        self.assertEqual(1.0, object_spike_fraction(seq, self._truth(), 0))

    def test_outside(self):
        """ """

        spikes = np.zeros((12, 12), dtype=bool)
        spikes[0, 0] = spikes[11, 11] = True

        seq = _spike_sequence([spikes, spikes])
        self.assertEqual(0.0, object_spike_fraction(seq, self._truth(), 3))

    def test_dilation(self):
        """ """

        spikes = np.zeros((12, 12), dtype=bool)
        spikes[5, 5] = True
        spikes[2, 2] = True
        spikes[0, 11] = True

        seq = _spike_sequence([spikes, np.zeros((12, 12))])

        self.assertAlmostEqual(1 / 3, object_spike_fraction(seq, self._truth(), 0))
        self.assertAlmostEqual(1 / 3, object_spike_fraction(seq, self._truth(), 1))
        self.assertAlmostEqual(2 / 3, object_spike_fraction(seq, self._truth(), 2))

    def test_events_count_both_polarities(self):
        """ """

        events = np.zeros((12, 12), dtype=np.int8)
        events[5, 5] = -1
        events[0, 0] = 1

        seq = _event_sequence([events, np.zeros((12, 12))])
        self.assertEqual(0.5, object_spike_fraction(seq, self._truth(), 0))

    def test_no_spikes(self):
        """ """

        seq = _spike_sequence([np.zeros((12, 12))] * 2)

        with self.assertRaises(UndefinedFractionError) as ctx:
            object_spike_fraction(seq, self._truth(), 0)

        self.assertIsInstance(ctx.exception, UndefinedRatioError)

    def test_mismatch(self):
        """ """

        with self.assertRaises(InvalidInputError):
            object_spike_fraction(_spike_sequence([np.eye(12)]), self._truth(), 0)


class MeasureSceneTests(unittest.TestCase):
    """ """

    def test_static_scene(self):
        """ """

        with self.assertRaises(UndefinedRatioError):
            measure_scene(StaticScene())

    def test_ego_motion_is_suppressed(self):
        """ """

        measured = measure_scene(EgoMotionScene())

        self.assertEqual("ego", measured.scene)
        self.assertEqual(20, measured.frames)
        self.assertGreater(measured.dvs_events, 0)
        self.assertLess(measured.suppression_ratio, 1.0)
        self.assertLess(measured.oms_avg_bits, measured.dvs_avg_bits)
        self.assertEqual(0.0, measured.dvs_object_fraction)

    def test_object_motion_is_kept(self):
        """ """

        measured = measure_scene(MixedMotionScene())

        self.assertGreater(measured.oms_spikes, 0)
        self.assertGreaterEqual(
            measured.oms_object_fraction, measured.dvs_object_fraction
        )
        self.assertLess(measured.oms_avg_bits, measured.dvs_avg_bits)
        self.assertAlmostEqual(
            measured.dvs_events / measured.frames, measured.dvs_avg_bits
        )

    def test_deterministic(self):
        """ """

        spec = MixedMotionScene(frame_count=6)

        self.assertEqual(measure_scene(spec), measure_scene(spec, workers=3))

    def test_recorded_baselines(self):
        """
        Every preset scene recorded in ``baselines.csv`` has to measure within 5% of
        its recorded row with the default sensor configuration.

        """

        presets = {"ego": EgoMotionScene(), "mixed": MixedMotionScene()}
        recorded = read_baselines_csv(Path(__file__).parent / "baselines.csv")

        self.assertIn("ego", [r.scene for r in recorded])
        for row in recorded:
            with self.subTest(scene=row.scene):
                measured = measure_scene(presets[row.scene])
                self.assertEqual([], baseline_drift(measured, row, 0.05))

    def test_bit_depth_and_dilation(self):
        """ """

        spec = MixedMotionScene(frame_count=6)
        config = SensorConfig()

        one = measure_scene(spec, config)
        two = measure_scene(spec, config, bit_depth=2, dilation=0)

        self.assertAlmostEqual(2 * one.dvs_avg_bits, two.dvs_avg_bits)
        self.assertLessEqual(two.dvs_object_fraction, one.dvs_object_fraction)


class BaselineTests(unittest.TestCase):
    """ """

    def test_csv_round_trip(self):
        """ """

        baselines = [_baseline(), _baseline(scene="ego", dvs_object_fraction=0.0)]

        buffer = io.StringIO()
        write_baselines_csv(baselines, buffer)
        buffer.seek(0)

        self.assertEqual(baselines, read_baselines_csv(buffer))

    def test_csv_nan(self):
        """ """

        buffer = io.StringIO()
        write_baselines_csv([_baseline(oms_object_fraction=math.nan)], buffer)
        buffer.seek(0)

        loaded = read_baselines_csv(buffer)[0]
        self.assertTrue(math.isnan(loaded.oms_object_fraction))

    def test_csv_missing(self):
        """ """

        with TemporaryDirectory() as tmp:
            with self.assertRaises(InvalidInputError):
                read_baselines_csv(Path(tmp) / "baseline.csv")

        with self.assertRaises(InvalidInputError):
            read_baselines_csv(io.StringIO("scene,frames\nmixed,20\n"))

    def test_drift(self):
        """ """

        recorded = _baseline()

        self.assertEqual([], baseline_drift(recorded, recorded))
        self.assertEqual([], baseline_drift(_baseline(oms_spikes=1040), recorded))
        self.assertEqual(
            ["oms_spikes", "suppression_ratio"],
            baseline_drift(
                _baseline(oms_spikes=1100, suppression_ratio=0.275), recorded
            ),
        )
        self.assertEqual(
            ["oms_spikes"], baseline_drift(_baseline(oms_spikes=1100), recorded, 0.05)
        )
        self.assertEqual([], baseline_drift(_baseline(oms_spikes=1100), recorded, 0.2))

    def test_drift_nan(self):
        """ """

        nan = _baseline(oms_object_fraction=math.nan)

        self.assertEqual([], baseline_drift(nan, nan))
        self.assertEqual(["oms_object_fraction"], baseline_drift(nan, _baseline()))


class SceneAssertionsTests(unittest.TestCase):
    """ """

    def test_empty(self):
        """ """

        assertions = SceneAssertions()

        self.assertTrue(assertions.empty)
        self.assertEqual([], assertions.check(_baseline()))

    def test_passing(self):
        """ """

        assertions = SceneAssertions.from_dict(
            {
                "max_suppression_ratio": 1.0,
                "oms_fraction_at_least_dvs": True,
                "oms_bits_below_dvs": True,
            }
        )

        self.assertFalse(assertions.empty)
        self.assertEqual(_baseline(), assertions.verify(_baseline()))

    def test_failing(self):
        """ """

        assertions = SceneAssertions(
            max_suppression_ratio=0.25,
            oms_fraction_at_least_dvs=True,
            oms_bits_below_dvs=True,
        )
        measured = _baseline(oms_object_fraction=0.1, oms_avg_bits=250.0)

        self.assertEqual(3, len(assertions.check(measured)))

        with self.assertRaises(VerificationFailedError) as ctx:
            assertions.verify(measured)

        self.assertIn("mixed", str(ctx.exception))

    def test_baseline(self):
        """ """

        with TemporaryDirectory() as tmp:
            write_baselines_csv([_baseline()], Path(tmp) / "baseline.csv")

            assertions = SceneAssertions.from_dict(
                {"baseline": "baseline.csv", "tolerance": 0.05}, tmp
            )

            self.assertEqual(Path(tmp) / "baseline.csv", assertions.baseline)
            self.assertEqual([], assertions.check(_baseline(oms_spikes=1020)))
            self.assertEqual(1, len(assertions.check(_baseline(oms_spikes=2000))))
            self.assertEqual(1, len(assertions.check(_baseline(scene="other"))))

    def test_invalid(self):
        """ """

        with self.assertRaises(InvalidSceneSpecError):
            SceneAssertions.from_dict({"max_ratio": 1.0})

        with self.assertRaises(InvalidSceneSpecError):
            SceneAssertions(tolerance=-0.1)

    def test_scene_file(self):
        """ """

        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "ego.json"
            d = EgoMotionScene().to_dict()
            d["assertions"] = {"max_suppression_ratio": 1.0, "baseline": "ego.csv"}
            path.write_text(json.dumps(d))

            spec, assertions = read_scene_file(path)

            self.assertEqual(EgoMotionScene(), spec)
            self.assertEqual(1.0, assertions.max_suppression_ratio)
            self.assertEqual(Path(tmp) / "ego.csv", assertions.baseline)

            d["assertions"] = [1.0]
            path.write_text(json.dumps(d))

            with self.assertRaises(InvalidSceneSpecError):
                read_scene_file(path)

            path.write_text(json.dumps(EgoMotionScene().to_dict()))
            self.assertTrue(read_scene_file(path)[1].empty)
