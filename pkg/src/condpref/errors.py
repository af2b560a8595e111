"""Exception types shared across the package.

Every error raised by library code derives from CondprefError so callers can
catch package failures without also swallowing programming errors.
"""

from __future__ import annotations


class CondprefError(Exception):
    """Base class for all condpref errors."""


class StructuralError(CondprefError):
    """An object is malformed or two objects cannot be combined.

    Raised for mixed-algebra operands, non-partition event families,
    overlapping concatenation pieces, and similar shape violations.
    """


class DomainError(CondprefError):
    """A value lies outside the domain an operation was given.

    Raised when an element uses a value unknown to a preference, an index
    is missing from a sequence, or a point falls outside a piecewise map.
    """


class ConfigurationError(CondprefError):
    """A constructor argument violates a documented bound or constraint."""


class OrderingError(CondprefError):
    """Interval or chain data is not ordered the way an operation requires."""


class DegenerateInstanceError(CondprefError):
    """An instance carries no usable information for the requested task.

    Examples: no strictly best/worst outcome at some atom, or all probe
    utilities equal at an atom so an affine fit is underdetermined.
    """


class PreconditionError(CondprefError):
    """A stated mathematical precondition fails on the given input.

    The message names a concrete witness (an atom, a value, or an event)
    so the caller can see exactly where the input broke the contract.
    """
