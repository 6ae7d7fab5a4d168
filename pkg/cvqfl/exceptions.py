"""Exceptions raised by the simulator."""
from __future__ import annotations


class CvQflError(Exception):
    """Base class for every simulator failure."""


class InvalidSize(CvQflError):
    """A size is zero, negative or not a power of two where one is needed."""


class InvalidParameter(CvQflError):
    """A gate or encoding parameter is outside its allowed range."""


class InvalidTargets(CvQflError):
    """Gate targets repeat or fall outside the register."""


class InvalidState(CvQflError):
    """A Gaussian state or register layout is malformed or mismatched."""


class PhysicalityError(CvQflError):
    """Input that must be unitary (or physical) is not."""

    def __init__(self, message: str, deviation: float) -> None:
        """Keep the measured deviation next to the message."""
        super().__init__(f"{message} (deviation {deviation:.3e})")
        self.deviation = deviation


class ConvergenceError(CvQflError):
    """An iterative routine hit its iteration cap."""


class NotSeparableError(CvQflError):
    """A non-separable mask was requested on the optical path."""


class InvalidGate(CvQflError):
    """A gate cannot be used in the requested way."""


class InvalidConfig(CvQflError):
    """A configuration file does not match its schema."""
