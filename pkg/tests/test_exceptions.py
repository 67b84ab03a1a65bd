"""Tests for custom exception hierarchy."""

import pytest

from nuresource.core.exceptions import (
    EXIT_CAPACITY,
    EXIT_NUMERICAL,
    EXIT_VALIDATION,
    AnalysisError,
    CapacityError,
    ConfigurationError,
    FormatterError,
    NuResourceError,
    NumericalError,
    ValidationError,
)


class TestNuResourceError:
    """Tests for base NuResourceError."""

    def test_basic_message(self):
        """Test exception with basic message."""
        error = NuResourceError("Test error")
        assert str(error) == "Test error"
        assert error.message == "Test error"
        assert error.details is None

    def test_message_with_details(self):
        """Test exception with message and details."""
        error = NuResourceError("Test error", details="additional context")
        assert str(error) == "Test error: additional context"
        assert error.details == "additional context"

    def test_default_exit_code(self):
        assert NuResourceError("x").exit_code == EXIT_VALIDATION

    def test_can_be_raised_and_caught(self):
        """Test raising and catching the exception."""
        with pytest.raises(NuResourceError) as exc_info:
            raise NuResourceError("Test error", "details")
        assert "Test error" in str(exc_info.value)


class TestConfigurationError:
    """Tests for ConfigurationError."""

    def test_inherits_from_base(self):
        error = ConfigurationError("Invalid config")
        assert isinstance(error, NuResourceError)

    def test_errors_are_listed(self):
        """Every field error appears in the message."""
        error = ConfigurationError("Invalid configuration", ["evolution.dt: bad", "coupling.mu0: bad"])
        assert error.errors == ["evolution.dt: bad", "coupling.mu0: bad"]
        assert "evolution.dt: bad" in str(error)
        assert "coupling.mu0: bad" in str(error)

    def test_no_errors(self):
        error = ConfigurationError("Invalid configuration")
        assert error.errors == []
        assert str(error) == "Invalid configuration"

    def test_exit_code(self):
        assert ConfigurationError("x").exit_code == EXIT_VALIDATION


class TestValidationError:
    """Tests for ValidationError."""

    def test_inherits_from_base(self):
        error = ValidationError("Site index out of range")
        assert isinstance(error, NuResourceError)
        assert "Site index out of range" in str(error)


class TestCapacityError:
    """Tests for CapacityError."""

    def test_attributes(self):
        error = CapacityError("Too many sites", limit=14, requested=16, advice="use engine=mps")
        assert error.limit == 14
        assert error.requested == 16
        assert error.advice == "use engine=mps"
        assert "requested=16" in str(error)
        assert "limit=14" in str(error)
        assert "use engine=mps" in str(error)

    def test_exit_code(self):
        assert CapacityError("x", 1, 2).exit_code == EXIT_CAPACITY == 3


class TestNumericalError:
    """Tests for NumericalError."""

    def test_reports_step_and_site(self):
        error = NumericalError("Non-finite tensor", step=12, site=3)
        assert error.step == 12
        assert error.site == 3
        assert "step=12" in str(error)
        assert "site=3" in str(error)

    def test_without_location(self):
        error = NumericalError("SVD failed")
        assert str(error) == "SVD failed"

    def test_exit_code(self):
        assert NumericalError("x").exit_code == EXIT_NUMERICAL == 4


class TestAnalysisError:
    """Tests for AnalysisError."""

    def test_inherits_from_base(self):
        assert isinstance(AnalysisError("Records are missing modes"), NuResourceError)


class TestFormatterError:
    """Tests for FormatterError."""

    def test_format_name(self):
        error = FormatterError("Unknown output format", "xml")
        assert error.format_name == "xml"
        assert "format=xml" in str(error)


class TestExceptionHierarchy:
    """Tests for overall exception hierarchy."""

    @pytest.mark.parametrize(
        "error",
        [
            ConfigurationError("x"),
            ValidationError("x"),
            CapacityError("x", 1, 2),
            NumericalError("x"),
            AnalysisError("x"),
            FormatterError("x"),
        ],
    )
    def test_all_catchable_by_base(self, error):
        """Test that all exceptions can be caught by base class."""
        with pytest.raises(NuResourceError):
            raise error
