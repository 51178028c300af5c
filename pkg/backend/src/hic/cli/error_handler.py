"""
Centralized error handling for the command-line surface

Turns pipeline exceptions into a JSON error document on stderr and the
matching process exit code.
"""

import functools
import json
import sys
from typing import Any, Callable

import click
from pydantic import ValidationError as PydanticValidationError

from ..utils.exceptions import (
    BaseHICException, MultipleValidationErrors, create_error_response, get_exit_code
)
from ..utils.logging_utils import LoggingUtils

logger = LoggingUtils.get_logger(__name__)


def _from_pydantic(error: PydanticValidationError) -> MultipleValidationErrors:
    return MultipleValidationErrors([
        {'field': '.'.join(str(part) for part in item['loc']) or None, 'message': item['msg']}
        for item in error.errors()
    ])


def report_error(error: Exception) -> int:
    """Log an exception, write its error document to stderr and return the exit code"""
    if isinstance(error, PydanticValidationError):
        error = _from_pydantic(error)
    if isinstance(error, BaseHICException):
        logger.warning("Command failed", extra={'error_code': error.error_code.value})
    else:
        LoggingUtils.log_exception(logger, "Unexpected error", extra={'error_type': type(error).__name__})
    document = create_error_response(error, include_traceback=not isinstance(error, BaseHICException))
    click.echo(json.dumps(document, indent=2, default=str), err=True)
    return get_exit_code(error)


def handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """Command decorator mapping exceptions to exit codes"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except Exception as e:
            sys.exit(report_error(e))

    return wrapper
