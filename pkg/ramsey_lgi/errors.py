#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Exception hierarchy for the Ramsey / Leggett-Garg simulator.

The CLI turns these into exit codes through ``exit_code``.
"""

from typing import Optional


class RamseyLgiError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class ArgumentError(RamseyLgiError, ValueError):
    """An argument is outside the domain of the operation."""


class UnsupportedStateError(ArgumentError):
    """The oscillator state variant is not handled by this operation."""


class CapacityError(ArgumentError):
    """The request is larger than the engine is allowed to expand."""


class PreconditionError(ArgumentError):
    """A documented precondition of an operation does not hold."""


class DomainError(ArgumentError):
    """A scan parameter makes the requested quantity undefined."""


class ConfigError(RamseyLgiError):
    """Invalid configuration file or command-line flags."""

    exit_code = 1


class VerificationError(RamseyLgiError):
    """Two engines disagree by more than the configured tolerance."""

    exit_code = 2


class TruncationError(RamseyLgiError):
    """The Fock space is too small for the requested displacements."""

    exit_code = 3

    def __init__(self, message: str, required_dim: Optional[int] = None):
        super().__init__(message)
        self.required_dim = required_dim


class BoundWarning(UserWarning):
    """A soft physical bound was exceeded (for example W > 3/2)."""
