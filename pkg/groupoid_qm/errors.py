"""Exception hierarchy shared by the services and the CLI."""

from __future__ import annotations

from typing import Optional, Sequence


class GroupoidQMError(Exception):
    """Base class for every error raised by groupoid_qm."""


class InvalidSpecError(GroupoidQMError, ValueError):
    """A groupoid specification or serialized document is malformed."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)


class BindingError(GroupoidQMError, ValueError):
    """Two objects bound to different groupoids were combined."""


class RangeError(GroupoidQMError, IndexError):
    """An event or transition id lies outside the groupoid."""


class PreconditionError(GroupoidQMError, ValueError):
    """An input violates the contract of the operation (not a state, not an observable, ...)."""


class ComponentError(GroupoidQMError, ValueError):
    """The groupoid is not connected where connectedness is required."""

    def __init__(self, message: str, events: Sequence[int] = ()):
        self.events = tuple(events)
        super().__init__(message)


class ParameterError(GroupoidQMError, ValueError):
    """A numeric parameter is out of its admissible range."""


class UnsupportedFrameError(GroupoidQMError, ValueError):
    """Frame changes need a pair groupoid so that conjugated matrices pull back."""


__all__ = [
    "GroupoidQMError",
    "InvalidSpecError",
    "BindingError",
    "RangeError",
    "PreconditionError",
    "ComponentError",
    "ParameterError",
    "UnsupportedFrameError",
]
