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

File created: 2026-09-24
Last updated: 2026-10-15
"""

import logging
from pathlib import Path
from typing import (
    List,
    Union,
)

from omsense.exceptions import (
    DirectoryNotFoundError,
    OutputDirectoryError,
)

log = logging.getLogger(__name__)


def default_output_path() -> Path:
    """
    Get the default absolute path to write converted sequences to. Default
    behaviour is a path to the home directory of the user.

    Returns
    -------
    Path
        The absolute path to the ``omsense`` output directory.

    """

    return Path.home() / ".omsense" / "output"


def setup_output_path(path: Union[Path, str]) -> Path:
    """
    Create the local directory that outputs of a run are written to.

    Parameters
    ----------
    path : Path | str
        The local path to create, parents included.

    Returns
    -------
    Path
        The created directory.

    Raises
    ------
    OutputDirectoryError
        If the path already exists but is not a directory, or can't be created.

    """

    if isinstance(path, str):
        path = Path(path)

    if path.exists():
        if not path.is_dir():
            raise OutputDirectoryError(
                f"Your specified output path {path} is not a directory, maybe you "
                "provided a path to a file that you want to create?"
            )

        log.warning(f"path {path} already exists, will overwrite existing outputs...")

    log.debug(f"creating {path}...")

    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputDirectoryError(f"Could not create the output path {path}: {e}.")

    return path


def has_matching_files(path: Union[Path, str], pattern: str) -> bool:
    """ """

    return any(p.is_file() for p in Path(path).glob(pattern))


def discover_sequences(root: Union[Path, str], pattern: str = "*.png") -> List[Path]:
    """
    Find the directories that hold one frame sequence each. ``root`` is itself
    the only sequence when it contains files matching ``pattern``, otherwise every
    subdirectory that does is a sequence, in sorted order.

    Raises
    ------
    DirectoryNotFoundError
        If ``root`` does not exist or is not a directory.

    """

    if isinstance(root, str):
        root = Path(root)

    if not root.is_dir():
        raise DirectoryNotFoundError(
            f"The input directory {root} does not exist or is not a directory."
        )

    if has_matching_files(root, pattern):
        return [root]

    return sorted(
        p for p in root.iterdir() if p.is_dir() and has_matching_files(p, pattern)
    )
