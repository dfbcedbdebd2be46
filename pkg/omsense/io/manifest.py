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

File created: 2026-09-27
Last updated: 2026-10-17
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import (
    Any,
    Dict,
    Iterable,
    Optional,
    Union,
)

from omsense.__version__ import __version__
from omsense.config import RunConfig
from omsense.exceptions import (
    FormatError,
    FramesNotFoundError,
    OutputDirectoryError,
)

log = logging.getLogger(__name__)


def sha256_file(path: Union[Path, str], chunk_size: int = 1 << 20) -> str:
    """ """

    digest = hashlib.sha256()
    with open(path, "rb") as f:
        while chunk := f.read(chunk_size):
            digest.update(chunk)
    return digest.hexdigest()


def _relative_key(path: Path, root: Optional[Path]) -> str:
    """ """

    if root is not None:
        try:
            return path.resolve().relative_to(root.resolve()).as_posix()
        except ValueError:
            pass
    return path.as_posix()


def _digests(paths: Iterable[Path], root: Optional[Path]) -> Dict[str, str]:
    """ """
    return {_relative_key(Path(p), root): sha256_file(p) for p in paths}


def write_manifest(
    path: Union[Path, str],
    config: RunConfig,
    inputs: Iterable[Union[Path, str]],
    outputs: Iterable[Union[Path, str]],
) -> Dict[str, Any]:
    """
    Record what a run did: the effective configuration, the package version and
    the SHA-256 digest of every input and output file. Inputs are keyed relative
    to the configured input path and outputs relative to the manifest directory.
    The JSON is written with sorted keys and without timestamps, so identical
    runs produce identical manifests.

    Returns
    -------
    dict
        The manifest as written.

    """

    path = Path(path)
    input_root = Path(config.input_path) if config.input_path else None

    manifest = {
        "config": config.to_dict(),
        "inputs": _digests((Path(p) for p in inputs), input_root),
        "outputs": _digests((Path(p) for p in outputs), path.parent),
        "version": __version__,
    }

    try:
        with open(path, "w") as f:
            json.dump(manifest, f, sort_keys=True, indent=2)
            f.write("\n")
    except OSError as e:
        raise OutputDirectoryError(f"Could not write the run manifest {path}: {e}.")

    log.debug(f"wrote manifest with {len(manifest['outputs'])} outputs to {path}")

    return manifest


def read_manifest(path: Union[Path, str]) -> Dict[str, Any]:
    """
    Load a run manifest. Its ``config`` section can be passed to
    ``RunConfig.from_dict`` to reproduce the run.

    """

    try:
        with open(path, "r") as f:
            manifest = json.load(f)
    except FileNotFoundError:
        raise FramesNotFoundError(f"The manifest {path} does not exist.")
    except json.JSONDecodeError as e:
        raise FormatError(f"The manifest {path} is not valid JSON: {e}.")

    if not isinstance(manifest, dict) or "config" not in manifest:
        raise FormatError(f"The manifest {path} has no `config` section.")

    return manifest
