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
Last updated: 2026-10-16
"""

from typing import Optional


class OmsenseError(Exception):
    """
    Base class for all errors raised by ``omsense``. Every subclass carries a
    machine-readable ``code`` and the process ``exit_code`` that the command-line
    interface terminates with when the error reaches it.

    """

    code: str = "INTERNAL_ERROR"
    exit_code: int = 5


class ConfigurationError(OmsenseError):
    """ """

    code = "CONFIGURATION_ERROR"
    exit_code = 2


class InvalidSceneSpecError(ConfigurationError):
    """ """

    code = "INVALID_SCENE_SPEC"


class InvalidInputError(OmsenseError):
    """ """

    code = "INVALID_INPUT"
    exit_code = 3


class DirectoryNotFoundError(InvalidInputError):
    """ """

    code = "NOT_FOUND"


class FramesNotFoundError(InvalidInputError):
    """ """

    code = "NOT_FOUND"


class FormatError(InvalidInputError):
    """ """

    code = "FORMAT_ERROR"


class CorruptionError(FormatError):
    """
    A byte stream that starts out well-formed but breaks its own layout somewhere,
    the byte ``offset`` of the first offending record is kept on the error.

    """

    code = "CORRUPTED_STREAM"

    def __init__(self, message: str, offset: Optional[int] = None):
        """ """
        super(CorruptionError, self).__init__(message)
        self.offset = offset


class CapacityError(InvalidInputError):
    """ """

    code = "CAPACITY_EXCEEDED"


class OutputDirectoryError(OmsenseError):
    """ """

    code = "IO_ERROR"
    exit_code = 3


class UndefinedRatioError(OmsenseError):
    """ """

    code = "NO_SIGNAL"
    exit_code = 6


class UndefinedFractionError(UndefinedRatioError):
    """ """

    pass


class VerificationFailedError(OmsenseError):
    """ """

    code = "ASSERTION_FAILED"
    exit_code = 4
