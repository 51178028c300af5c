#!/usr/bin/env python3
"""
Centralized Exception Classes for the HIC pipeline

This module defines custom exception classes and error handling utilities
for consistent error management across parsing, search, scoring, simulation
and the command-line surface.
"""

from typing import Dict, Any, Optional, List
from enum import Enum
import traceback
from datetime import datetime, timezone


class ErrorCode(Enum):
    """Standardized error codes for the pipeline"""

    # Input validation
    VALIDATION_ERROR = "VALIDATION_ERROR"
    INVALID_PARAMETER = "INVALID_PARAMETER"

    # Circuit input
    QASM_SYNTAX_ERROR = "QASM_SYNTAX_ERROR"
    UNSUPPORTED_GATE = "UNSUPPORTED_GATE"
    QUBIT_OUT_OF_RANGE = "QUBIT_OUT_OF_RANGE"

    # Hardware input
    CALIBRATION_SCHEMA_ERROR = "CALIBRATION_SCHEMA_ERROR"
    RATE_OUT_OF_RANGE = "RATE_OUT_OF_RANGE"
    DISCONNECTED_MAP = "DISCONNECTED_MAP"
    NO_COMPONENTS = "NO_COMPONENTS"

    # Cutting
    INVALID_STRATEGY = "INVALID_STRATEGY"
    UNSUPPORTED_CUT = "UNSUPPORTED_CUT"
    ORACLE_BUDGET_EXCEEDED = "ORACLE_BUDGET_EXCEEDED"
    NO_STRATEGY_FOUND = "NO_STRATEGY_FOUND"

    # Layout and scoring
    UNMAPPED_OP = "UNMAPPED_OP"
    EMPTY_INPUT = "EMPTY_INPUT"
    DEGENERATE_VARIANCE = "DEGENERATE_VARIANCE"

    # Reconstruction and simulation
    OBSERVABLE_CROSSING = "OBSERVABLE_CROSSING"
    MISSING_RESULT = "MISSING_RESULT"
    SIMULATION_CAP_EXCEEDED = "SIMULATION_CAP_EXCEEDED"

    # Files & configuration
    FILE_NOT_FOUND = "FILE_NOT_FOUND"
    FIXTURE_MISSING = "FIXTURE_MISSING"
    INVALID_FILE_TYPE = "INVALID_FILE_TYPE"
    CONFIGURATION_ERROR = "CONFIGURATION_ERROR"

    # System
    INTERNAL_ERROR = "INTERNAL_ERROR"


class ExitCode:
    """Process exit codes used by the command-line surface"""
    SUCCESS = 0
    INTERNAL = 1
    INPUT = 2
    NO_STRATEGY = 3
    LIMIT = 4


class BaseHICException(Exception):
    """Base exception class for all pipeline exceptions"""

    def __init__(
        self,
        message: str,
        error_code: ErrorCode,
        exit_code: int = ExitCode.INPUT,
        details: Optional[Dict[str, Any]] = None,
        field: Optional[str] = None,
        user_message: Optional[str] = None
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.exit_code = exit_code
        self.details = details or {}
        self.field = field
        self.user_message = user_message or message
        self.timestamp = datetime.now(timezone.utc).isoformat()

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for the JSON error document"""
        result = {
            'success': False,
            'error': self.error_code.value,
            'message': self.user_message,
            'timestamp': self.timestamp
        }

        if self.field:
            result['field'] = self.field

        if self.details:
            result['details'] = self.details

        return result


class ValidationError(BaseHICException):
    """Exception for validation errors"""

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        user_message: Optional[str] = None
    ):
        super().__init__(
            message=message,
            error_code=ErrorCode.VALIDATION_ERROR,
            details=details,
            field=field,
            user_message=user_message
        )


class InvalidParameterError(BaseHICException):
    """Exception for out-of-domain operation parameters"""

    def __init__(self, parameter: str, message: str, value: Any = None):
        super().__init__(
            message=f"Invalid parameter '{parameter}': {message}",
            error_code=ErrorCode.INVALID_PARAMETER,
            details={'parameter': parameter, 'value': value},
            field=parameter
        )


class QasmSyntaxError(BaseHICException):
    """Exception for QASM text that does not match the grammar"""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(
            message=f"QASM syntax error at line {line}, column {column}: {message}",
            error_code=ErrorCode.QASM_SYNTAX_ERROR,
            details={'line': line, 'column': column}
        )


class UnsupportedGateError(BaseHICException):
    """Exception for gate names outside the supported subset"""

    def __init__(self, gate: str, line: Optional[int] = None):
        self.gate = gate
        location = f" at line {line}" if line is not None else ""
        super().__init__(
            message=f"Unsupported gate '{gate}'{location}",
            error_code=ErrorCode.UNSUPPORTED_GATE,
            details={'gate': gate, 'line': line}
        )


class QubitOutOfRangeError(BaseHICException):
    """Exception for qubit indices outside the register"""

    def __init__(self, qubit: int, num_qubits: int, line: Optional[int] = None):
        location = f" at line {line}" if line is not None else ""
        super().__init__(
            message=f"Qubit index {qubit} out of range for {num_qubits} qubits{location}",
            error_code=ErrorCode.QUBIT_OUT_OF_RANGE,
            details={'qubit': qubit, 'num_qubits': num_qubits, 'line': line}
        )


class CalibrationSchemaError(BaseHICException):
    """Exception for calibration documents that violate the schema"""

    def __init__(self, message: str, field: Optional[str] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=f"Calibration schema error ({field or 'document'}): {message}",
            error_code=ErrorCode.CALIBRATION_SCHEMA_ERROR,
            details=details,
            field=field
        )


class RateOutOfRangeError(BaseHICException):
    """Exception for error rates outside [0, 1]"""

    def __init__(self, field: str, value: float):
        super().__init__(
            message=f"Error rate {field}={value} is outside [0, 1]",
            error_code=ErrorCode.RATE_OUT_OF_RANGE,
            details={'value': value},
            field=field
        )


class DisconnectedMapError(BaseHICException):
    """Exception for coupling maps that are not connected as loaded"""

    def __init__(self, num_components: int):
        super().__init__(
            message=f"Coupling map is disconnected ({num_components} components)",
            error_code=ErrorCode.DISCONNECTED_MAP,
            details={'num_components': num_components}
        )


class NoComponentsError(BaseHICException):
    """Exception for punctured maps with nothing left to place on"""

    def __init__(self, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message="Punctured coupling map has no connected components",
            error_code=ErrorCode.NO_COMPONENTS,
            details=details,
            user_message="Puncturing removed every qubit; relax z_V / z_E"
        )


class InvalidStrategyError(BaseHICException):
    """Exception for cut actions that do not fit the circuit"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=f"Invalid cut strategy: {message}",
            error_code=ErrorCode.INVALID_STRATEGY,
            details=details
        )


class UnsupportedCutError(BaseHICException):
    """Exception for gate cuts on gates without a decomposition"""

    def __init__(self, gate_kind: str):
        super().__init__(
            message=f"No quasi-probability decomposition for gate '{gate_kind}'",
            error_code=ErrorCode.UNSUPPORTED_CUT,
            details={'gate': gate_kind}
        )


class OracleBudgetExceededError(BaseHICException):
    """Exception for exhaustive searches over the configured cap"""

    def __init__(self, space: int, cap: int):
        super().__init__(
            message=f"Exhaustive enumeration space {space} exceeds cap {cap}",
            error_code=ErrorCode.ORACLE_BUDGET_EXCEEDED,
            exit_code=ExitCode.LIMIT,
            details={'space': space, 'cap': cap}
        )


class NoStrategyFoundError(BaseHICException):
    """Exception raised by the CLI when selection yields no winner"""

    def __init__(self, message: str = "No cut strategy satisfies the budget",
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(
            message=message,
            error_code=ErrorCode.NO_STRATEGY_FOUND,
            exit_code=ExitCode.NO_STRATEGY,
            details=details
        )


class UnmappedOpError(BaseHICException):
    """Exception for routed ops outside the layout"""

    def __init__(self, message: str, gate: Optional[str] = None):
        super().__init__(
            message=message,
            error_code=ErrorCode.UNMAPPED_OP,
            details={'gate': gate} if gate else None
        )


class EmptyInputError(BaseHICException):
    """Exception for aggregations over empty inputs"""

    def __init__(self, operation: str):
        super().__init__(
            message=f"{operation} requires at least one input",
            error_code=ErrorCode.EMPTY_INPUT,
            details={'operation': operation}
        )


class DegenerateVarianceError(BaseHICException):
    """Exception for correlation inputs with zero variance"""

    def __init__(self, coordinate: str):
        super().__init__(
            message=f"Correlation undefined: zero variance in {coordinate}",
            error_code=ErrorCode.DEGENERATE_VARIANCE,
            details={'coordinate': coordinate}
        )


class ObservableCrossingError(BaseHICException):
    """Exception for observables that cannot be split across subcircuits"""

    def __init__(self, message: str):
        super().__init__(
            message=message,
            error_code=ErrorCode.OBSERVABLE_CROSSING
        )


class MissingResultError(BaseHICException):
    """Exception for reconstructions with an unexecuted variant"""

    def __init__(self, subcircuit: int, variant: str):
        super().__init__(
            message=f"Missing result for subcircuit {subcircuit} variant {variant}",
            error_code=ErrorCode.MISSING_RESULT,
            details={'subcircuit': subcircuit, 'variant': variant}
        )


class SimulationCapError(BaseHICException):
    """Exception for circuits wider than the simulator cap"""

    def __init__(self, num_qubits: int, cap: int):
        super().__init__(
            message=f"Circuit has {num_qubits} qubits; simulator cap is {cap}",
            error_code=ErrorCode.SIMULATION_CAP_EXCEEDED,
            exit_code=ExitCode.LIMIT,
            details={'num_qubits': num_qubits, 'cap': cap}
        )


class FileError(BaseHICException):
    """Exception for file-related errors"""

    def __init__(
        self,
        message: str,
        error_code: ErrorCode,
        filename: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        user_message: Optional[str] = None
    ):
        details = details or {}
        if filename:
            details['filename'] = filename

        super().__init__(
            message=message,
            error_code=error_code,
            details=details,
            user_message=user_message or message
        )


class ConfigurationError(BaseHICException):
    """Exception for configuration errors"""

    def __init__(
        self,
        setting: str,
        message: str,
        details: Optional[Dict[str, Any]] = None
    ):
        details = details or {}
        details['setting'] = setting

        super().__init__(
            message=f"Configuration error ({setting}): {message}",
            error_code=ErrorCode.CONFIGURATION_ERROR,
            details=details,
            field=setting
        )


class MultipleValidationErrors(BaseHICException):
    """Exception for multiple validation errors"""

    def __init__(self, errors: List[Dict[str, Any]]):
        self.errors = errors

        error_count = len(errors)
        message = f"Validation failed with {error_count} error{'s' if error_count != 1 else ''}"

        super().__init__(
            message=message,
            error_code=ErrorCode.VALIDATION_ERROR,
            details={'errors': errors},
            user_message="Please correct the validation errors and try again"
        )

    def to_dict(self) -> Dict[str, Any]:
        """Override to include individual errors"""
        result = super().to_dict()
        result['errors'] = self.errors
        return result


class ErrorContext:
    """Context manager for capturing and enriching errors"""

    def __init__(
        self,
        operation: str,
        additional_context: Optional[Dict[str, Any]] = None
    ):
        self.operation = operation
        self.additional_context = additional_context or {}

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type and issubclass(exc_type, BaseHICException):
            exc_val.details = exc_val.details or {}
            exc_val.details.setdefault('operation', self.operation)
            for key, value in self.additional_context.items():
                exc_val.details.setdefault(key, value)
        return False


def create_error_response(
    error: Exception,
    include_traceback: bool = False
) -> Dict[str, Any]:
    """Create a standardized error document from any exception"""

    if isinstance(error, BaseHICException):
        return error.to_dict()

    response = {
        'success': False,
        'error': ErrorCode.INTERNAL_ERROR.value,
        'message': 'An unexpected error occurred',
        'timestamp': datetime.now(timezone.utc).isoformat()
    }

    if include_traceback:
        response['details'] = {
            'original_error': str(error),
            'error_type': type(error).__name__,
            'traceback': traceback.format_exc()
        }

    return response


def get_exit_code(error: Exception) -> int:
    """Get the process exit code for an exception"""

    if isinstance(error, BaseHICException):
        return error.exit_code

    if isinstance(error, (ValueError, TypeError, FileNotFoundError)):
        return ExitCode.INPUT
    return ExitCode.INTERNAL
