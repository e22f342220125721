"""Exception and warning types shared across the package."""

from __future__ import annotations


class InvalidArgument(ValueError):
    pass


class OutOfDomain(ValueError):
    """Evaluation point outside the range a gridded object was built on."""


class SingularMatrix(ArithmeticError):
    pass


class NoConvergence(RuntimeError):
    pass


class UnknownIdentity(KeyError):
    pass


class AccuracyWarning(UserWarning):
    """The requested parameters are outside the validated accuracy range."""
