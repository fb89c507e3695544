"""
Exception hierarchy for the toolkit.

Every error raised on purpose derives from ToolkitError so the CLI can map
it to an exit status; library errors are wrapped with the original chained.
"""

from typing import Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors"""

    def __init__(self, message: str, detail: Optional[str] = None):
        self.detail = detail
        super().__init__(f"{message}: {detail}" if detail else message)


class ParameterError(ToolkitError, ValueError):
    """Parameter out of range or unknown catalog name"""


class DomainError(ToolkitError, ValueError):
    """Argument outside the domain where a moment generating function is finite"""

    def __init__(self, message: str, argument: float, domain: Optional[tuple] = None):
        self.argument = argument
        self.domain = domain
        detail = f"argument {argument!r} outside {domain!r}" if domain is not None else f"argument {argument!r}"
        super().__init__(message, detail)


class IntegrationError(ToolkitError, ArithmeticError):
    """Quadrature or summation failed to reach the requested tolerance"""

    def __init__(self, message: str, achieved: float, requested: float):
        self.achieved = achieved
        self.requested = requested
        super().__init__(message, f"achieved error {achieved:.3e} > requested {requested:.3e}")


class OptimizationError(ToolkitError, ArithmeticError):
    """Objective evaluation failed inside a one-dimensional search"""


class SimulationError(ToolkitError):
    """Degenerate model or failing event predicate"""

    def __init__(self, message: str, path_index: Optional[int] = None, detail: Optional[str] = None):
        self.path_index = path_index
        if path_index is not None:
            message = f"{message} (path {path_index})"
        super().__init__(message, detail)


class ConfigError(ToolkitError):
    """Invalid experiment configuration"""

    def __init__(self, field: str, detail: str, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = f"{field} (line {line})" if line is not None else field
        super().__init__(f"Invalid config field {where}", detail)


__all__ = [
    "ToolkitError",
    "ParameterError",
    "DomainError",
    "IntegrationError",
    "OptimizationError",
    "SimulationError",
    "ConfigError",
]
