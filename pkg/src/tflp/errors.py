"""Error taxonomy shared by the library and the command line front end.

ParameterError covers invalid domain parameters and malformed inputs
(CLI exit code 2); ToleranceError covers numeric tolerance and
truncation failures (CLI exit code 3).  Module code also raises plain
ValueError for parameter misuse; the CLI treats those as ParameterError.
"""

__all__ = ["ParameterError", "ToleranceError"]


class ParameterError(ValueError):
    """A parameter is outside its documented domain."""


class ToleranceError(RuntimeError):
    """A numeric tolerance or truncation budget could not be met."""
