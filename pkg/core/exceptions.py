"""
Exception hierarchy shared by every app, and the handler that turns
exceptions into command exit codes.
"""
import logging

from django.core.management.base import CommandError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_INVARIANT_VIOLATION = 2


class NonlocalError(Exception):
    """Base class for all errors raised by the library."""

    exit_code = EXIT_CONFIG_ERROR


class ConfigurationError(NonlocalError, ValueError):
    """Invalid arguments or run configuration."""


class InvalidDistributionError(ConfigurationError):
    """A probability vector or conditional pmf is not stochastic."""


class InvalidBoxError(ConfigurationError):
    """A correlation box table is malformed."""


class InvalidPovmError(ConfigurationError):
    """POVM elements are malformed or do not sum to the identity."""


class InvalidStrategyError(ConfigurationError):
    """A coding strategy or encoder table is malformed."""


class HemisphereEmptyError(NonlocalError, LookupError):
    """No POVM element lies in the requested hemisphere."""


class InvariantViolation(NonlocalError, AssertionError):
    """A mathematical invariant failed while a run was in progress."""

    exit_code = EXIT_INVARIANT_VIOLATION


class DecodeError(InvariantViolation):
    """A strategy expected to be error-free decoded a message wrongly."""


class RateModelError(InvariantViolation):
    """Erasure-channel accounting requested for stats containing errors."""


def command_exception_handler(exc: BaseException) -> CommandError:
    """
    Map an exception to a CommandError with the matching return code.

    Unknown exceptions are logged and reported generically.
    """
    if isinstance(exc, CommandError):
        return exc

    if isinstance(exc, NonlocalError):
        return CommandError(str(exc), returncode=exc.exit_code)

    logger.exception('Unhandled error during command run')
    return CommandError('Internal error', returncode=EXIT_CONFIG_ERROR)
