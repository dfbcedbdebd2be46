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

File created: 2026-09-29
Last updated: 2026-10-18
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from tqdm import tqdm
from typing import (
    Dict,
    List,
    Optional,
    Sequence,
)

from omsense.config import (
    OutputFormat,
    RunConfig,
    RunMode,
)
from omsense.dvs import dvs_sequence
from omsense.exceptions import (
    ConfigurationError,
    FramesNotFoundError,
    InvalidInputError,
)
from omsense.frames import (
    FrameSequence,
    sequence_to_luminance,
)
from omsense.io import (
    discover_sequences,
    read_aer,
    read_event_frame,
    read_image_sequence,
    read_spike_frame,
    setup_output_path,
    write_aer,
    write_manifest,
    write_spike_frames,
)
from omsense.metrics import (
    BitRateReport,
    Representation,
    format_ratio,
    read_reports_csv,
    rgb_report,
    sequence_report,
    write_reports_csv,
)
from omsense.oms import oms_sequence

log = logging.getLogger(__name__)

REPORT_FILENAME = "report.csv"
MANIFEST_FILENAME = "manifest.json"


def concatenate(sequences: Sequence[FrameSequence]) -> FrameSequence:
    """Join sequences of same-shape frames end to end, re-indexed from zero."""

    if not sequences:
        raise InvalidInputError("There are no sequences to join.")

    shapes = {s.verify().shape for s in sequences}
    if len(shapes) > 1:
        raise InvalidInputError(
            f"Sequences with different frame dimensions {sorted(shapes)} can't be "
            "summarized together, convert them in separate runs."
        )

    frames = [f for s in sequences for f in s]
    return FrameSequence(
        [f.with_index(i) for i, f in enumerate(frames)],
        frame_rate=sequences[0].frame_rate,
    )


def build_reports(
    rgb_frames: int,
    shape: tuple,
    events: Dict[Representation, FrameSequence],
    config: RunConfig,
) -> List[BitRateReport]:
    """
    One report row for RGB and for every event representation present, with
    the F1 inputs of ``config`` attached where given.

    """

    height, width = shape
    reports = [
        rgb_report(
            height,
            width,
            rgb_frames,
            config.rgb_bit_depth,
            config.f1.get(Representation.RGB.value),
        )
    ]

    for representation in (Representation.DVS, Representation.OMS):
        if representation in events:
            reports.append(
                sequence_report(
                    events[representation],
                    representation,
                    config.event_bit_depth,
                    config.f1.get(representation.value),
                )
            )

    return reports


class SequenceResult(object):
    """The outputs of one converted sequence."""

    def __init__(
        self,
        name: str,
        input_paths: List[Path],
        frame_count: int,
        shape: tuple,
        dvs: FrameSequence,
        oms: Optional[FrameSequence],
    ):
        """ """
        self.name = name
        self.input_paths = input_paths
        self.frame_count = frame_count
        self.shape = shape
        self.dvs = dvs
        self.oms = oms

    def events(self, mode: RunMode) -> Dict[Representation, FrameSequence]:
        """The event sequences that ``mode`` asks to keep."""

        events = {}
        if mode in (RunMode.DVS, RunMode.BOTH):
            events[Representation.DVS] = self.dvs
        if mode in (RunMode.OMS, RunMode.BOTH) and self.oms is not None:
            events[Representation.OMS] = self.oms
        return events

    def summary(self, config: RunConfig) -> str:
        """ """

        parts = [f"{self.name}: {self.frame_count} frames"]
        for representation, seq in self.events(config.mode).items():
            report = sequence_report(seq, representation, config.event_bit_depth)
            parts.append(
                f"{representation.value} {format_ratio(report.avg_bits_per_frame_sparse)} "
                "avg bits/frame"
            )
        return ", ".join(parts)


class Pipeline(object):
    """
    Convert directories of RGB frames into DVS events and OMS spikes.

    Every sequence runs DVS emulation first, strictly in frame order, and then
    the OMS stage on the resulting events. Sequences are independent, so with
    ``workers > 1`` they are converted in a thread pool. With a single sequence
    the workers filter its OMS frames instead. Results are always kept in
    sorted sequence order.

    Typical usage::

        Pipeline(config).load().run().save()

    Parameters
    ----------
    config : RunConfig
        The effective configuration of the run.

    """

    def __init__(self, config: RunConfig):
        """ """

        if not config.input_path:
            raise ConfigurationError("No input path was given, use `--input`.")

        self._config = config
        self._sequence_dirs: List[Path] = []
        self._results: List[SequenceResult] = []
        self._written: List[Path] = []

    @property
    def config(self) -> RunConfig:
        """ """
        return self._config

    @property
    def results(self) -> List[SequenceResult]:
        """ """
        return self._results

    @property
    def output_path(self) -> Path:
        """ """
        if not self._config.output_path:
            raise ConfigurationError("No output path was given, use `--output`.")
        return Path(self._config.output_path)

    def load(self) -> Pipeline:
        """
        Discover the sequences under the input path.

        Raises
        ------
        FramesNotFoundError
            If no directory holds frames matching the configured pattern.

        """

        root = Path(self._config.input_path)
        self._sequence_dirs = discover_sequences(root, self._config.pattern)

        if not self._sequence_dirs:
            raise FramesNotFoundError(
                f"No frames matching `{self._config.pattern}` were found in {root} "
                "or its subdirectories."
            )

        log.info(f"found {len(self._sequence_dirs)} sequences in {root}")
        return self

    def _convert(self, directory: Path, oms_workers: int) -> SequenceResult:
        """ """

        sensor = self._config.sensor
        rgb = read_image_sequence(
            directory,
            self._config.pattern,
            frame_rate=self._config.frame_rate,
        )

        dvs = dvs_sequence(sequence_to_luminance(rgb), sensor)

        oms = None
        if self._config.mode in (RunMode.OMS, RunMode.BOTH):
            oms = oms_sequence(dvs, sensor, workers=oms_workers)

        return SequenceResult(
            directory.name,
            sorted(p for p in directory.glob(self._config.pattern) if p.is_file()),
            len(rgb),
            rgb.shape,
            dvs,
            oms,
        )

    def run(self) -> Pipeline:
        """ """

        if not self._sequence_dirs:
            self.load()

        workers = self._config.workers
        dirs = self._sequence_dirs

        log.info(f"converting {len(dirs)} sequences with {workers} workers...")

        if len(dirs) == 1 or workers == 1:
            self._results = []
            for directory in (bar := tqdm(dirs, leave=False)):
                bar.set_description(f"Converting sequence {directory.name}")
                oms_workers = workers if len(dirs) == 1 else 1
                self._results.append(self._convert(directory, oms_workers))
        else:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                self._results = list(
                    tqdm(
                        executor.map(lambda d: self._convert(d, 1), dirs),
                        total=len(dirs),
                        desc="Converting sequences",
                        leave=False,
                    )
                )

        log.info("OK!")
        return self

    def reports(self) -> List[BitRateReport]:
        """Report rows over all converted sequences together."""

        if not self._results:
            raise InvalidInputError("Nothing was converted yet, call `run` first.")

        shapes = {r.shape for r in self._results}
        if len(shapes) > 1:
            raise InvalidInputError(
                f"Sequences with different frame dimensions {sorted(shapes)} can't be "
                "summarized together, convert them in separate runs."
            )

        events = {}
        for representation in self._results[0].events(self._config.mode):
            events[representation] = concatenate(
                [r.events(self._config.mode)[representation] for r in self._results]
            )

        return build_reports(
            sum(r.frame_count for r in self._results),
            self._results[0].shape,
            events,
            self._config,
        )

    def summaries(self) -> List[str]:
        """ """
        return [r.summary(self._config) for r in self._results]

    def _save_sequence(self, result: SequenceResult, root: Path) -> List[Path]:
        """ """

        fmt = self._config.output_format
        events = result.events(self._config.mode)
        directory = root / result.name
        written = []

        if fmt is not OutputFormat.CSV:
            setup_output_path(directory)

        for representation, seq in events.items():
            if fmt is OutputFormat.AER:
                path = directory / f"{representation.value}.aer"
                write_aer(path, seq)
                written.append(path)
            elif fmt in (OutputFormat.PGM, OutputFormat.PNG):
                written.extend(
                    write_spike_frames(seq, directory / representation.value, fmt)
                )

        if fmt is not OutputFormat.CSV:
            path = directory / REPORT_FILENAME
            write_reports_csv(
                build_reports(result.frame_count, result.shape, events, self._config),
                path,
            )
            written.append(path)

        return written

    def save(self) -> Pipeline:
        """
        Write every converted sequence, the combined ``report.csv`` and the run
        ``manifest.json`` to the output path.

        """

        if not self._results:
            raise InvalidInputError("Nothing was converted yet, call `run` first.")

        root = setup_output_path(self.output_path)
        log.info(f"saving outputs to {root}...")

        written = []
        for result in self._results:
            written.extend(self._save_sequence(result, root))

        report = root / REPORT_FILENAME
        write_reports_csv(self.reports(), report)
        written.append(report)

        inputs = [p for r in self._results for p in r.input_paths]
        write_manifest(root / MANIFEST_FILENAME, self._config, inputs, written)

        self._written = written
        log.info("OK!")
        return self

    @property
    def written(self) -> List[Path]:
        """ """
        return self._written


def _declared_frames(directory: Path) -> Optional[int]:
    """The frame count recorded in a sequence report next to AER outputs."""

    path = directory / REPORT_FILENAME
    if not path.is_file():
        return None

    frames = [r.frame_count for r in read_reports_csv(path)]
    return max(frames) if frames else None


def _read_frames_dir(
    directory: Path,
    representation: Representation,
    frame_rate: float,
) -> FrameSequence:
    """ """

    paths = sorted(
        p
        for p in directory.iterdir()
        if p.is_file() and p.suffix.lower() in (".pgm", ".pbm", ".png")
    )
    if not paths:
        raise FramesNotFoundError(f"No event or spike frames were found in {directory}.")

    read = read_event_frame if representation is Representation.DVS else read_spike_frame
    return FrameSequence(
        [read(p, i) for i, p in enumerate(paths)],
        frame_rate=frame_rate,
    ).verify()


def load_event_outputs(
    root: Path,
    *,
    frame_rate: float = 5.0,
) -> Dict[Representation, List[FrameSequence]]:
    """
    Read back the DVS and OMS outputs that ``convert`` wrote to ``root``, either
    a single sequence directory or an output root with one directory per
    sequence. AER files are decoded with the frame count of the sequence report
    written next to them.

    """

    root = Path(root)
    if not root.is_dir():
        raise FramesNotFoundError(f"The directory {root} does not exist.")

    candidates = [root] + sorted(p for p in root.iterdir() if p.is_dir())
    found: Dict[Representation, List[FrameSequence]] = {}

    for directory in candidates:
        for representation in (Representation.DVS, Representation.OMS):
            aer = directory / f"{representation.value}.aer"
            frames_dir = directory / representation.value

            if aer.is_file():
                seq = read_aer(
                    aer,
                    frame_count=_declared_frames(directory),
                    frame_rate=frame_rate,
                )
            elif frames_dir.is_dir():
                seq = _read_frames_dir(frames_dir, representation, frame_rate)
            else:
                continue

            if len(seq):
                found.setdefault(representation, []).append(seq)

    if not found:
        raise FramesNotFoundError(
            f"No DVS or OMS outputs were found in {root}, point `--input` at the "
            "output directory of `omsense convert`."
        )

    return found
