"""Exception types shared across the package."""

from __future__ import annotations


class LrsError(Exception):
    """Base class for package errors."""


class EndpointRootError(LrsError):
    """A Sturm query endpoint is itself a root."""

    def __init__(self, point):
        super().__init__(f"polynomial vanishes at the endpoint {point}")
        self.point = point


class PrecisionError(LrsError):
    """Interval enclosures did not separate the quantities within the bit budget."""


class Undecided(LrsError):
    """A certified answer could not be reached within the configured budget."""


class DegreeCapExceeded(LrsError):
    def __init__(self, degree, cap):
        super().__init__(f"composed degree {degree} exceeds the cap {cap}")
        self.degree = degree
        self.cap = cap


class LoopSyntaxError(LrsError):
    def __init__(self, msg, line, col):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col
