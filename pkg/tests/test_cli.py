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

File created: 2026-10-07
Last updated: 2026-10-18
"""

import io
import json
import logging
import re
import unittest
import pandas as pd
from contextlib import (
    redirect_stderr,
    redirect_stdout,
)
from pathlib import Path
from tempfile import TemporaryDirectory

import omsense
from omsense import (
    BoundaryMode,
    ConfigurationError,
)
from omsense.cli import (
    build_parser,
    effective_config,
    main,
    parse_assignment,
    parse_frame_size,
)
from omsense.metrics import read_reports_csv
from omsense.scenes import (
    EgoMotionScene,
    MixedMotionScene,
    StaticScene,
    read_baselines_csv,
)

from .mock_frames import (
    _moving_square_rgb,
    _write_png_frames,
)


def _main(*argv):
    """Run the CLI, returning the exit status, standard output and standard error."""

    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        status = main(list(argv))
    return status, out.getvalue(), err.getvalue()


def _write_scene(path: Path, scene, **assertions) -> Path:
    """ """

    d = scene.to_dict()
    if assertions:
        d["assertions"] = assertions
    path.write_text(json.dumps(d))
    return path


class ParseTests(unittest.TestCase):
    """ """

    def test_frame_size(self):
        """ """

        self.assertEqual((720, 1280), parse_frame_size("1280x720"))
        self.assertEqual((2, 3), parse_frame_size("3X2"))

        for text in ("1280", "1280x", "ax720", "0x720", "1280x720x3"):
            with self.assertRaises(ConfigurationError):
                parse_frame_size(text)

    def test_assignment(self):
        """ """

        rep, value = parse_assignment("DVS=0.155", "--f1")
        self.assertEqual("dvs", rep.value)
        self.assertEqual(0.155, value)

        for text in ("dvs", "lidar=0.1", "oms=high"):
            with self.assertRaises(ConfigurationError):
                parse_assignment(text, "--f1")

    def test_help_shows_defaults(self):
        """ """

        out = io.StringIO()
        with redirect_stdout(out), self.assertRaises(SystemExit) as cm:
            main(["convert", "--help"])

        self.assertEqual(0, cm.exception.code)
        text = out.getvalue()
        self.assertIn("--contrast-threshold", text)
        self.assertRegex(text, r"\(default:\s+0\.1\)")
        self.assertRegex(text, r"\(default:\s+replicate\)")

    def test_config_precedence(self):
        """ """

        parser = build_parser()

        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "config.json"
            path.write_text(
                json.dumps(
                    {
                        "contrast_threshold": 0.3,
                        "boundary_mode": "zero",
                        "workers": 2,
                        "f1": {"rgb": 0.5},
                    }
                )
            )

            from_file = effective_config(
                parser.parse_args(["convert", "--config", str(path)])
            )
            flagged = effective_config(
                parser.parse_args(
                    [
                        "convert",
                        "--config",
                        str(path),
                        "--contrast-threshold",
                        "0.2",
                        "--f1",
                        "dvs=0.25",
                    ]
                )
            )

        self.assertEqual(0.3, from_file.sensor.contrast_threshold)
        self.assertEqual(BoundaryMode.ZERO, from_file.sensor.boundary_mode)
        self.assertEqual(2, from_file.workers)

        self.assertEqual(0.2, flagged.sensor.contrast_threshold)
        self.assertEqual(BoundaryMode.ZERO, flagged.sensor.boundary_mode)
        self.assertEqual({"rgb": 0.5, "dvs": 0.25}, flagged.f1)

    def test_defaults(self):
        """ """

        config = effective_config(build_parser().parse_args(["convert"]))
        self.assertEqual(omsense.RunConfig(), config)


class ConvertTests(unittest.TestCase):
    """ """

    def tearDown(self):
        """ """
        omsense.set_log_level(logging.INFO)

    def test_convert(self):
        """ """

        with TemporaryDirectory() as tmp:
            frames = Path(tmp) / "frames"
            out = Path(tmp) / "out"
            _write_png_frames(frames, _moving_square_rgb())

            status, stdout, _ = _main(
                "convert", "-i", str(frames), "-o", str(out), "--format", "aer", "-q"
            )

            self.assertEqual(0, status)
            self.assertRegex(stdout, r"^frames: 4 frames, dvs \S+ avg bits/frame")
            self.assertTrue((out / "frames" / "dvs.aer").is_file())
            self.assertTrue((out / "manifest.json").is_file())

            rows = read_reports_csv(out / "report.csv")
            self.assertEqual(
                ["rgb", "dvs", "oms"], [r.representation.value for r in rows]
            )

    def test_missing_input(self):
        """ """

        status, _, stderr = _main("convert")

        self.assertEqual(2, status)
        self.assertIn("error[CONFIGURATION_ERROR]", stderr)

    def test_input_not_found(self):
        """ """

        with TemporaryDirectory() as tmp:
            status, _, stderr = _main("convert", "-i", str(Path(tmp) / "missing"))

        self.assertEqual(3, status)
        self.assertIn("error[NOT_FOUND]", stderr)

    def test_unknown_config_key(self):
        """ """

        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "config.json"
            path.write_text(json.dumps({"threshold": 0.2}))

            status, _, stderr = _main("convert", "-i", tmp, "--config", str(path))

        self.assertEqual(2, status)
        self.assertIn("threshold", stderr)

    def test_non_numeric_config_value(self):
        """ """

        for config in (
            {"center_radius": "one"},
            {"contrast_threshold": "high"},
            {"workers": "two"},
            {"f1": {"rgb": "high"}},
        ):
            with self.subTest(config=config), TemporaryDirectory() as tmp:
                path = Path(tmp) / "config.json"
                path.write_text(json.dumps(config))

                status, _, stderr = _main("convert", "-i", tmp, "--config", str(path))

                self.assertEqual(2, status)
                self.assertIn("error[CONFIGURATION_ERROR]", stderr)

    def test_invalid_sensor_value(self):
        """ """

        with TemporaryDirectory() as tmp:
            status, _, _ = _main("convert", "-i", tmp, "--contrast-threshold", "0")

        self.assertEqual(2, status)


class MetricsTests(unittest.TestCase):
    """ """

    _PUBLISHED = (
        "metrics",
        "--frame-size",
        "1280x720",
        "--avg-bits",
        "dvs=1.96e5",
        "--avg-bits",
        "oms=3.77e4",
    )

    def _assert_within(self, expected: float, actual: float, tolerance: float):
        """ """
        self.assertLessEqual(abs(actual - expected) / expected, tolerance)

    def test_published(self):
        """ """

        status, stdout, _ = _main(
            *self._PUBLISHED,
            "--f1",
            "rgb=0.4177",
            "--f1",
            "dvs=0.155",
            "--f1",
            "oms=0.126",
        )

        self.assertEqual(0, status)

        df = pd.read_csv(io.StringIO(stdout)).set_index("representation")
        self.assertEqual(["rgb", "dvs", "oms"], list(df.index))
        self.assertEqual(1280 * 720 * 24, df.loc["rgb", "dense_bits_per_frame"])
        self.assertEqual(1280 * 720, df.loc["dvs", "dense_bits_per_frame"])
        self.assertEqual(0, df.loc["dvs", "frames"])

        ppb = df["perf_per_bit"]
        self._assert_within(41.07, ppb["dvs"] / ppb["rgb"], 0.03)
        self._assert_within(178.25, ppb["oms"] / ppb["rgb"], 0.03)

    def test_without_f1(self):
        """ """

        status, stdout, _ = _main(*self._PUBLISHED)

        self.assertEqual(0, status)
        df = pd.read_csv(io.StringIO(stdout))
        self.assertTrue(df["perf_per_bit"].isna().all())

    def test_partial_f1(self):
        """ """

        status, stdout, stderr = _main(*self._PUBLISHED, "--f1", "rgb=0.4177")

        self.assertEqual(2, status)
        self.assertEqual("", stdout)
        self.assertIn("error[CONFIGURATION_ERROR]", stderr)
        self.assertIn("dvs", stderr)

    def test_avg_bits_without_frame_size(self):
        """ """

        status, _, _ = _main("metrics", "--avg-bits", "dvs=1.96e5")
        self.assertEqual(2, status)

    def test_duplicate_rows(self):
        """ """

        status, _, _ = _main(*self._PUBLISHED, "--avg-bits", "dvs=1.0e5")
        self.assertEqual(2, status)

    def test_sparse_exceeds_dense(self):
        """ """

        status, _, stderr = _main(
            "metrics", "--frame-size", "4x4", "--avg-bits", "dvs=17"
        )

        self.assertEqual(3, status)
        self.assertIn("error[INVALID_INPUT]", stderr)

    def test_convert_outputs(self):
        """ """

        with TemporaryDirectory() as tmp:
            frames = Path(tmp) / "frames"
            out = Path(tmp) / "out"
            csv = Path(tmp) / "metrics.csv"
            plot = Path(tmp) / "rates.png"
            _write_png_frames(frames, _moving_square_rgb())

            self.assertEqual(0, _main("convert", "-i", str(frames), "-o", str(out))[0])

            status, stdout, _ = _main(
                "metrics",
                "-i",
                str(out),
                "-o",
                str(csv),
                "--plot",
                str(plot),
                "--f1",
                "rgb=0.5",
                "--f1",
                "dvs=0.25",
                "--f1",
                "oms=0.25",
            )

            self.assertEqual(0, status)
            self.assertTrue(plot.is_file())

            rows = read_reports_csv(csv)
            converted = read_reports_csv(out / "report.csv")

        self.assertEqual(["rgb", "dvs", "oms"], [r.representation.value for r in rows])
        self.assertEqual(
            [r.avg_bits_per_frame_sparse for r in converted[1:]],
            [r.avg_bits_per_frame_sparse for r in rows[1:]],
        )
        self.assertEqual(4, rows[0].frame_count)
        self.assertEqual(0.5, rows[0].f1)
        self.assertEqual(3, len(stdout.strip().splitlines()))
        self.assertIn("F1/bit", stdout)

    def test_input_without_outputs(self):
        """ """

        with TemporaryDirectory() as tmp:
            status, _, stderr = _main("metrics", "-i", tmp)

        self.assertEqual(3, status)
        self.assertIn("error[NOT_FOUND]", stderr)


class SynthTests(unittest.TestCase):
    """ """

    def _summary(self, stdout: str) -> dict:
        """ """
        pairs = (line.split(": ", 1) for line in stdout.strip().splitlines())
        return {k: v for k, v in pairs}

    def test_static(self):
        """ """

        with TemporaryDirectory() as tmp:
            path = _write_scene(Path(tmp) / "static.json", StaticScene())
            status, _, stderr = _main("synth", str(path))

        self.assertEqual(6, status)
        self.assertIn("error[NO_SIGNAL]", stderr)

    def test_ego(self):
        """ """

        with TemporaryDirectory() as tmp:
            path = _write_scene(
                Path(tmp) / "ego.json",
                EgoMotionScene(),
                max_suppression_ratio=1.0,
                oms_bits_below_dvs=True,
            )
            baseline = Path(tmp) / "ego.csv"

            status, stdout, _ = _main("synth", str(path), "-o", str(baseline))

            self.assertEqual(0, status)
            summary = self._summary(stdout)
            self.assertEqual("ego", summary["scene"])
            self.assertLess(float(summary["suppression ratio"]), 1.0)
            self.assertEqual("0.0000", summary["dvs object fraction"])

            (recorded,) = read_baselines_csv(baseline)
            self.assertEqual(int(summary["dvs events"]), recorded.dvs_events)
            self.assertEqual(int(summary["oms spikes"]), recorded.oms_spikes)

            _write_scene(path, EgoMotionScene(), baseline="ego.csv", tolerance=0.0)
            self.assertEqual(0, _main("synth", str(path))[0])

    def test_mixed(self):
        """ """

        with TemporaryDirectory() as tmp:
            path = _write_scene(
                Path(tmp) / "mixed.json",
                MixedMotionScene(),
                max_suppression_ratio=1.0,
                oms_fraction_at_least_dvs=True,
                oms_bits_below_dvs=True,
            )
            status, stdout, _ = _main("synth", str(path))

        self.assertEqual(0, status)
        summary = self._summary(stdout)
        self.assertGreaterEqual(
            float(summary["oms object fraction"]),
            float(summary["dvs object fraction"]),
        )

    def test_failed_assertion(self):
        """ """

        with TemporaryDirectory() as tmp:
            path = _write_scene(
                Path(tmp) / "ego.json", EgoMotionScene(), max_suppression_ratio=0.0
            )
            status, _, stderr = _main("synth", str(path))

        self.assertEqual(4, status)
        self.assertIn("error[ASSERTION_FAILED]", stderr)

    def test_invalid_scene(self):
        """ """

        with TemporaryDirectory() as tmp:
            d = EgoMotionScene().to_dict()
            d["object_rect"] = [120, 120, 24, 24]
            path = Path(tmp) / "bad.json"
            path.write_text(json.dumps(d))

            status, _, stderr = _main("synth", str(path))
            missing = _main("synth", str(Path(tmp) / "missing.json"))

        self.assertEqual(2, status)
        self.assertIn("error[INVALID_SCENE_SPEC]", stderr)
        self.assertEqual(2, missing[0])

    def test_non_numeric_scene_value(self):
        """ """

        for key, value in (("texture_scale", "big"), ("object_intensity_delta", "x")):
            with self.subTest(key=key), TemporaryDirectory() as tmp:
                d = MixedMotionScene().to_dict()
                d[key] = value
                path = Path(tmp) / "bad.json"
                path.write_text(json.dumps(d))

                status, _, stderr = _main("synth", str(path))

                self.assertEqual(2, status)
                self.assertIn("error[INVALID_SCENE_SPEC]", stderr)

    def test_sensor_flags(self):
        """ """

        with TemporaryDirectory() as tmp:
            path = _write_scene(Path(tmp) / "ego.json", EgoMotionScene())
            low = self._summary(_main("synth", str(path))[1])
            high = self._summary(
                _main("synth", str(path), "--contrast-threshold", "0.3")[1]
            )

        self.assertLessEqual(int(high["dvs events"]), int(low["dvs events"]))
        self.assertTrue(re.fullmatch(r"\d+\.\d{4}", low["suppression ratio"]))
