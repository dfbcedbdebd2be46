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

File created: 2026-09-30
Last updated: 2026-10-18
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
)

import omsense
from omsense.__version__ import __version__
from omsense.config import (
    BoundaryMode,
    OutputFormat,
    RunConfig,
    RunMode,
    SensorConfig,
)
from omsense.exceptions import (
    ConfigurationError,
    OmsenseError,
)
from omsense.io import default_output_path
from omsense.metrics import (
    BitRateReport,
    Representation,
    format_report,
    published_report,
    visualize_bit_rates,
    write_reports_csv,
)
from omsense.pipeline import (
    Pipeline,
    build_reports,
    concatenate,
    load_event_outputs,
)
from omsense.scenes import (
    measure_scene,
    read_scene_file,
    write_baselines_csv,
)

log = logging.getLogger(__name__)

_SENSOR = SensorConfig()
_RUN = RunConfig()

# Flag destinations that map one to one onto flat ``RunConfig`` keys.
_CONFIG_FLAGS = (
    "contrast_threshold",
    "oms_threshold",
    "center_radius",
    "surround_radius",
    "surround_weight",
    "boundary_mode",
    "use_log",
    "log_epsilon",
    "kernel_subsamples",
    "input_path",
    "output_path",
    "output_format",
    "mode",
    "pattern",
    "frame_rate",
    "workers",
    "rgb_bit_depth",
    "event_bit_depth",
)


def _common_parser() -> argparse.ArgumentParser:
    """ """

    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("logging")
    group.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        help="log debug messages to standard error",
    )
    group.add_argument(
        "-q",
        "--quiet",
        action="store_true",
        help="only log warnings and errors",
    )
    group.add_argument(
        "--log-file",
        metavar="PATH",
        default=None,
        help="also write log messages to this file",
    )
    parser.add_argument(
        "--config",
        metavar="PATH",
        default=None,
        help="JSON config file, or the manifest.json of an earlier run; flags "
        "override its values",
    )
    return parser


def _sensor_parser() -> argparse.ArgumentParser:
    """ """

    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("sensor")
    group.add_argument(
        "--contrast-threshold",
        dest="contrast_threshold",
        type=float,
        default=None,
        metavar="C",
        help=f"DVS temporal contrast threshold (default: {_SENSOR.contrast_threshold})",
    )
    group.add_argument(
        "--oms-threshold",
        dest="oms_threshold",
        type=float,
        default=None,
        metavar="T",
        help=f"threshold on center minus surround activity (default: "
        f"{_SENSOR.oms_threshold})",
    )
    group.add_argument(
        "--center-radius",
        dest="center_radius",
        type=int,
        default=None,
        metavar="PX",
        help=f"radius of the center disk filter (default: {_SENSOR.center_radius})",
    )
    group.add_argument(
        "--surround-radius",
        dest="surround_radius",
        type=int,
        default=None,
        metavar="PX",
        help=f"radius of the surround disk filter (default: {_SENSOR.surround_radius})",
    )
    group.add_argument(
        "--surround-weight",
        dest="surround_weight",
        type=float,
        default=None,
        metavar="W",
        help=f"scale of the surround response (default: {_SENSOR.surround_weight})",
    )
    group.add_argument(
        "--boundary",
        dest="boundary_mode",
        choices=[m.value for m in BoundaryMode],
        default=None,
        help=f"filter boundary handling (default: {_SENSOR.boundary_mode.value})",
    )
    group.add_argument(
        "--use-log",
        dest="use_log",
        action=argparse.BooleanOptionalAction,
        default=None,
        help=f"threshold log luminance changes instead of raw ones (default: "
        f"{_SENSOR.use_log})",
    )
    group.add_argument(
        "--log-epsilon",
        dest="log_epsilon",
        type=float,
        default=None,
        metavar="EPS",
        help=f"offset added before the logarithm (default: {_SENSOR.log_epsilon:.6g})",
    )
    group.add_argument(
        "--kernel-subsamples",
        dest="kernel_subsamples",
        type=int,
        default=None,
        metavar="N",
        help=f"supersampling per disk kernel cell (default: {_SENSOR.kernel_subsamples})",
    )
    return parser


def _report_parser() -> argparse.ArgumentParser:
    """ """

    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group("report")
    group.add_argument(
        "--f1",
        action="append",
        default=[],
        metavar="REP=VALUE",
        help="F1 score of a detector trained on representation REP (rgb, dvs or "
        "oms), repeatable",
    )
    group.add_argument(
        "--rgb-bit-depth",
        dest="rgb_bit_depth",
        type=int,
        default=None,
        metavar="BITS",
        help=f"bits per RGB pixel (default: {_RUN.rgb_bit_depth})",
    )
    group.add_argument(
        "--event-bit-depth",
        dest="event_bit_depth",
        type=int,
        default=None,
        metavar="BITS",
        help=f"bits per DVS event or OMS spike (default: {_RUN.event_bit_depth})",
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    """ """

    common = _common_parser()
    sensor = _sensor_parser()
    report = _report_parser()

    parser = argparse.ArgumentParser(
        prog="omsense",
        description="Emulate DVS events and object motion sensitive spikes from "
        "frame sequences and compare their data rates.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    convert = subparsers.add_parser(
        "convert",
        parents=[common, sensor, report],
        help="convert directories of RGB frames to DVS and OMS outputs",
        description="Convert every sequence of RGB frames under --input into DVS "
        "events and OMS spikes, and write them with a report and a run manifest.",
    )
    convert.add_argument(
        "-i",
        "--input",
        dest="input_path",
        default=None,
        metavar="DIR",
        help="directory of frames, or of one subdirectory of frames per sequence",
    )
    convert.add_argument(
        "-o",
        "--output",
        dest="output_path",
        default=None,
        metavar="DIR",
        help=f"output directory (default: {default_output_path()})",
    )
    convert.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=None,
        help=f"output format (default: {_RUN.output_format.value})",
    )
    convert.add_argument(
        "--mode",
        choices=[m.value for m in RunMode],
        default=None,
        help=f"which outputs to write (default: {_RUN.mode.value})",
    )
    convert.add_argument(
        "--pattern",
        default=None,
        help=f"glob pattern of the frame files (default: {_RUN.pattern})",
    )
    convert.add_argument(
        "--frame-rate",
        dest="frame_rate",
        type=float,
        default=None,
        metavar="FPS",
        help=f"frame rate of the input sequences (default: {_RUN.frame_rate})",
    )
    convert.add_argument(
        "-j",
        "--workers",
        type=int,
        default=None,
        help=f"number of worker threads (default: {_RUN.workers})",
    )
    convert.set_defaults(handler=cmd_convert)

    metrics = subparsers.add_parser(
        "metrics",
        parents=[common, report],
        help="tabulate data rates and performance per bit",
        description="Compute the average bits per frame of RGB, DVS and OMS "
        "representations and, given F1 inputs, their performance per bit.",
    )
    metrics.add_argument(
        "-i",
        "--input",
        dest="input_path",
        default=None,
        metavar="DIR",
        help="output directory of `omsense convert` to measure",
    )
    metrics.add_argument(
        "--frame-size",
        default=None,
        metavar="WxH",
        help="frame dimensions for rows without frames, e.g. 1280x720",
    )
    metrics.add_argument(
        "--avg-bits",
        action="append",
        default=[],
        metavar="REP=BITS",
        help="known average bits per frame of a representation, repeatable",
    )
    metrics.add_argument(
        "-o",
        "--output",
        dest="output_path",
        default=None,
        metavar="PATH",
        help="CSV file to write (default: standard output)",
    )
    metrics.add_argument(
        "--plot",
        default=None,
        metavar="PATH",
        help="save a bar chart of the data rates to this image file",
    )
    metrics.set_defaults(handler=cmd_metrics)

    synth = subparsers.add_parser(
        "synth",
        parents=[common, sensor],
        help="measure ego-motion suppression on a synthetic scene",
        description="Render a synthetic scene, run both sensor stages, report how "
        "well OMS suppresses ego-motion and check the scene's assertions.",
    )
    synth.add_argument("scene", metavar="SCENE", help="JSON scene file")
    synth.add_argument(
        "-o",
        "--output",
        dest="baseline_path",
        default=None,
        metavar="PATH",
        help="write the measurements to this baseline CSV file",
    )
    synth.add_argument(
        "--dilation",
        type=int,
        default=None,
        metavar="PX",
        help="object mask dilation (default: the surround radius)",
    )
    synth.add_argument(
        "--event-bit-depth",
        dest="event_bit_depth",
        type=int,
        default=None,
        metavar="BITS",
        help=f"bits per DVS event or OMS spike (default: {_RUN.event_bit_depth})",
    )
    synth.set_defaults(handler=cmd_synth)

    return parser


def parse_assignment(text: str, flag: str) -> Tuple[Representation, float]:
    """Parse ``REP=NUMBER``, e.g. ``dvs=0.155``."""

    try:
        key, value = text.split("=", 1)
        return Representation(key.strip().lower()), float(value)
    except ValueError:
        raise ConfigurationError(
            f"Invalid `{flag} {text}`, expected REP=NUMBER with REP one of "
            "(rgb, dvs, oms)."
        )


def parse_frame_size(text: str) -> Tuple[int, int]:
    """Parse ``WxH`` into ``(height, width)``."""

    try:
        width, height = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise ConfigurationError(
            f"Invalid `--frame-size {text}`, expected WIDTHxHEIGHT, e.g. 1280x720."
        )

    if width < 1 or height < 1:
        raise ConfigurationError(f"The frame size has to be positive, got {text}.")

    return height, width


def effective_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge the defaults, the config file and the flags, in increasing order of
    precedence.

    """

    base = RunConfig.from_json_file(args.config) if args.config else RunConfig()

    overrides: Dict[str, Any] = {
        k: getattr(args, k) for k in _CONFIG_FLAGS if hasattr(args, k)
    }

    f1 = dict(base.f1)
    for text in getattr(args, "f1", []):
        representation, value = parse_assignment(text, "--f1")
        f1[representation.value] = value
    overrides["f1"] = f1

    return base.merged(overrides)


def _setup_logging(args: argparse.Namespace):
    """ """

    if args.verbose:
        omsense.set_log_level(logging.DEBUG)
    elif args.quiet:
        omsense.set_log_level(logging.WARNING)

    if args.log_file:
        omsense.log_to_file(args.log_file)


def cmd_convert(args: argparse.Namespace) -> int:
    """ """

    config = effective_config(args)

    if not config.input_path:
        raise ConfigurationError("`convert` needs an input directory, use `--input`.")

    if not config.output_path:
        config = config.merged({"output_path": str(default_output_path())})

    pipeline = Pipeline(config).load().run().save()

    for line in pipeline.summaries():
        print(line)

    return 0


def _check_f1_inputs(reports: List[BitRateReport]):
    """ """

    scored = [r.representation.value for r in reports if r.f1 is not None]
    missing = [r.representation.value for r in reports if r.f1 is None]

    if scored and missing:
        raise ConfigurationError(
            f"F1 inputs were given for {scored} but not for {missing}, performance "
            "per bit ratios need an F1 score for every row. Add `--f1 REP=VALUE`."
        )


def cmd_metrics(args: argparse.Namespace) -> int:
    """ """

    config = effective_config(args)
    reports: List[BitRateReport] = []

    if args.input_path:
        found = load_event_outputs(Path(args.input_path), frame_rate=config.frame_rate)
        events = {rep: concatenate(seqs) for rep, seqs in found.items()}
        first = next(iter(events.values()))
        reports.extend(build_reports(len(first), first.shape, events, config))

    avg_bits = [parse_assignment(text, "--avg-bits") for text in args.avg_bits]

    if args.frame_size:
        height, width = parse_frame_size(args.frame_size)
        given = {rep for rep, _ in avg_bits}

        if not reports and Representation.RGB not in given:
            avg_bits.insert(0, (Representation.RGB, None))

        for representation, bits in avg_bits:
            depth = (
                config.rgb_bit_depth
                if representation is Representation.RGB
                else config.event_bit_depth
            )
            reports.append(
                published_report(
                    representation,
                    height,
                    width,
                    bits,
                    depth,
                    config.f1.get(representation.value),
                )
            )
    elif avg_bits:
        raise ConfigurationError("`--avg-bits` needs the `--frame-size` of the frames.")

    names = [r.representation.value for r in reports]
    if len(set(names)) != len(names):
        raise ConfigurationError(
            f"Every representation can only appear once in a report, got {names}."
        )

    _check_f1_inputs(reports)

    write_reports_csv(reports, args.output_path or sys.stdout)

    if args.output_path:
        for report in reports:
            print(format_report(report))

    if args.plot:
        if reports:
            visualize_bit_rates(reports, save_path=args.plot, show=False)
        else:
            log.warning("there are no report rows to plot, skipping the plot")

    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    """ """

    config = effective_config(args)
    spec, assertions = read_scene_file(args.scene)

    baseline = measure_scene(
        spec,
        config.sensor,
        dilation=args.dilation,
        bit_depth=config.event_bit_depth,
    )

    print(f"scene: {baseline.scene}")
    print(f"dvs events: {baseline.dvs_events}")
    print(f"oms spikes: {baseline.oms_spikes}")
    print(f"suppression ratio: {baseline.suppression_ratio:.4f}")
    print(f"dvs object fraction: {baseline.dvs_object_fraction:.4f}")
    print(f"oms object fraction: {baseline.oms_object_fraction:.4f}")
    print(f"dvs avg bits/frame: {baseline.dvs_avg_bits:.1f}")
    print(f"oms avg bits/frame: {baseline.oms_avg_bits:.1f}")

    if args.baseline_path:
        write_baselines_csv([baseline], args.baseline_path)
        log.info(f"saved baseline to {args.baseline_path}")

    if not assertions.empty:
        assertions.verify(baseline)
        log.info("all scene assertions hold")

    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line interface and return the process exit status: ``0`` on
    success, otherwise the ``exit_code`` of the error that stopped the run.

    """

    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        _setup_logging(args)
        return args.handler(args)
    except OmsenseError as e:
        print(f"omsense: error[{e.code}] {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        log.debug("unexpected error", exc_info=True)
        print(f"omsense: error[{OmsenseError.code}] {e}", file=sys.stderr)
        return OmsenseError.exit_code
