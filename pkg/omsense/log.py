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

File created: 2026-09-12
Last updated: 2026-10-03
"""

import logging
import os
import sys
from enum import Enum
from typing import (
    Optional,
    TextIO,
)


class Color(Enum):
    BLACK = "\x1b[0;30m"
    RED = "\x1b[0;31m"
    GREEN = "\x1b[0;32m"
    YELLOW = "\x1b[0;33m"
    BLUE = "\x1b[0;34m"
    CYAN = "\x1b[0;36m"
    WHITE = "\x1b[0;37m"

    BOLD_RED = "\x1b[1;31m"

    RESET = "\x1b[0m"


_LEVEL_COLORS = {
    logging.DEBUG: Color.CYAN,
    logging.INFO: Color.WHITE,
    logging.WARNING: Color.YELLOW,
    logging.ERROR: Color.RED,
    logging.CRITICAL: Color.BOLD_RED,
}


def stream_supports_color(stream: Optional[TextIO] = None) -> bool:
    """
    Decide whether ANSI colors should be written to ``stream``. Honors the
    ``NO_COLOR`` convention and never colors pipes or files, so progress output
    redirected by a batch job stays plain text.

    """

    if os.getenv("NO_COLOR"):
        return False

    stream = sys.stderr if stream is None else stream
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


class ColoredFormatter(logging.Formatter):
    """
    A ``logging.Formatter`` that wraps every record in the ANSI color of its level.

    Parameters
    ----------
    format : str
        The ``logging`` format string to use for every level.
    use_color : bool | None
        Force colors on or off. ``None`` colors only when standard error is a TTY.

    """

    def __init__(self, format: str, use_color: Optional[bool] = None):
        """ """
        super(ColoredFormatter, self).__init__()

        if use_color is None:
            use_color = stream_supports_color()

        self._use_color = use_color
        self._formatters = {
            level: logging.Formatter(
                color.value + format + Color.RESET.value if use_color else format
            )
            for level, color in _LEVEL_COLORS.items()
        }

    def format(self, record: logging.LogRecord) -> str:
        """ """

        formatter = self._formatters.get(record.levelno, None)
        if formatter is None:
            raise ValueError(
                f"Unexpected log level found in provided LogRecord, `{record.levelno}`.",
            )

        return formatter.format(record)
