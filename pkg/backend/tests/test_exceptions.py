"""Tests for the exception hierarchy and error documents"""

import pytest

from hic.utils.exceptions import (
    BaseHICException, ConfigurationError, ErrorCode, ErrorContext, ExitCode, MultipleValidationErrors,
    NoStrategyFoundError, OracleBudgetExceededError, QasmSyntaxError, SimulationCapError,
    create_error_response, get_exit_code
)


@pytest.mark.unit
class TestExceptions:

    @pytest.mark.parametrize('error, code', [
        (QasmSyntaxError("unexpected token", 3, 5), ExitCode.INPUT),
        (ConfigurationError('puncture.z_v', "required"), ExitCode.INPUT),
        (NoStrategyFoundError(), ExitCode.NO_STRATEGY),
        (OracleBudgetExceededError(10 ** 8, 10 ** 6), ExitCode.LIMIT),
        (SimulationCapError(20, 14), ExitCode.LIMIT),
        (ValueError("bad"), ExitCode.INPUT),
        (RuntimeError("boom"), ExitCode.INTERNAL),
    ])
    def test_exit_codes(self, error, code):
        assert get_exit_code(error) == code

    def test_error_document(self):
        document = ConfigurationError('selection.alpha', "must lie in [0, 1]").to_dict()
        assert document['success'] is False
        assert document['error'] == ErrorCode.CONFIGURATION_ERROR.value
        assert document['field'] == 'selection.alpha'
        assert document['details']['setting'] == 'selection.alpha'

    def test_multiple_errors(self):
        error = MultipleValidationErrors([{'field': 'z_v', 'message': 'required'}])
        document = create_error_response(error)
        assert document['errors'] == [{'field': 'z_v', 'message': 'required'}]

    def test_unexpected_error_response(self):
        try:
            raise RuntimeError("boom")
        except RuntimeError as e:
            document = create_error_response(e, include_traceback=True)
        assert document['error'] == ErrorCode.INTERNAL_ERROR.value
        assert document['details']['error_type'] == 'RuntimeError'

    def test_error_context_adds_operation(self):
        with pytest.raises(BaseHICException) as info:
            with ErrorContext('reproduce', {'experiment': 'min_cut_table'}):
                raise NoStrategyFoundError()
        assert info.value.details['operation'] == 'reproduce'
        assert info.value.details['experiment'] == 'min_cut_table'
