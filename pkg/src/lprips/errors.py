"""Exception hierarchy.  Every error carries the datum that witnesses it."""

from __future__ import annotations


class LpripsError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class MetricError(LpripsError, ValueError):
    """Input matrix violates a (pseudo)metric axiom."""

    exit_code = 2


class InputError(LpripsError, ValueError):
    """Malformed input file or argument."""

    exit_code = 2


class CapExceededError(LpripsError):
    """A size guard (permutation search, basis explosion, brute force) tripped."""

    exit_code = 3


class CoverError(LpripsError):
    """A cover does not cover, or a Mayer-Vietoris hypothesis fails."""


class MapError(LpripsError):
    """A vertex map sends a simplex outside its declared target."""


class FiltrationError(LpripsError, ValueError):
    """A filtration is not monotone under faces."""
