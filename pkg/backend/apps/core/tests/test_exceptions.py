import pytest

from apps.core.exceptions import (
    BootstrapFailureError,
    DatasetError,
    InputError,
    NumericError,
    ParameterDomainError,
    RecalError,
)


@pytest.mark.parametrize(
    "error, exit_code, builtin",
    [
        (ParameterDomainError("x"), 2, ValueError),
        (DatasetError("x"), 2, ValueError),
        (BootstrapFailureError("x"), 3, ArithmeticError),
    ],
)
def test_exit_codes(error, exit_code, builtin):
    assert isinstance(error, RecalError)
    assert isinstance(error, builtin)
    assert error.exit_code == exit_code


def test_families_are_disjoint():
    assert not issubclass(InputError, NumericError)
    assert not issubclass(NumericError, InputError)


def test_dataset_error_line():
    error = DatasetError("bad value", line=7)

    assert str(error) == "line 7: bad value"
    assert error.line == 7
    assert DatasetError("bad").line is None
