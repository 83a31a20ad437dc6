"""Exception hierarchy shared by every icpkit module."""

from __future__ import annotations

from fractions import Fraction


class IcpError(Exception):
    """Base class for all library errors."""


class NotMember(IcpError):
    """The target vector is not in ``k * P`` (or the queried point is not in ``P``)."""


class EmptyPolyhedron(IcpError):
    """An operation that needs a point was handed an empty polyhedron."""


class NotBoxIntegral(IcpError):
    """A coordinate optimum over a polyhedron that should be box-integer is fractional.

    ``coordinate`` is 0-based.
    """

    def __init__(self, coordinate: int, value: Fraction, message: str | None = None):
        self.coordinate = coordinate
        self.value = value
        super().__init__(
            message
            or f"polyhedron is not box-integral: coordinate {coordinate} has fractional extreme value {value}"
        )


class AffineDependence(IcpError):
    """Internal consistency failure: a decomposition produced affinely dependent points."""


class ResourceCapExceeded(IcpError):
    """An exhaustive routine would exceed its configured resource cap."""


class InvalidInstance(IcpError, ValueError):
    """Malformed or inconsistent problem instance."""
