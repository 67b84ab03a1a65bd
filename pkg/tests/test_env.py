"""Tests for environment variable utilities."""

import os
from pathlib import Path

import pytest

from nuresource.utils.env import ENV_PREFIX, get_env, output_dir_override


class TestGetEnv:
    """Tests for get_env function."""

    def test_get_existing_var(self):
        """Test getting an existing environment variable."""
        os.environ["NURESOURCE_TEST_VAR"] = "test_value"
        result = get_env("TEST_VAR")
        assert result == "test_value"
        os.environ.pop("NURESOURCE_TEST_VAR", None)

    def test_get_with_default(self):
        """Test getting nonexistent var with default."""
        os.environ.pop("NURESOURCE_NONEXISTENT", None)
        result = get_env("NONEXISTENT", default="default_value")
        assert result == "default_value"

    def test_empty_value_uses_default(self):
        """An empty variable counts as unset."""
        os.environ["NURESOURCE_EMPTY_VAR"] = ""
        assert get_env("EMPTY_VAR", default="fallback") == "fallback"
        os.environ.pop("NURESOURCE_EMPTY_VAR", None)

    def test_get_required_missing(self):
        """Test that required=True raises error for missing var."""
        os.environ.pop("NURESOURCE_REQUIRED_VAR", None)
        with pytest.raises(ValueError, match="Required environment variable"):
            get_env("REQUIRED_VAR", required=True)

    def test_get_without_prefix(self):
        """Test getting var without prefix."""
        os.environ["CUSTOM_VAR"] = "custom_value"
        result = get_env("CUSTOM_VAR", prefix=False)
        assert result == "custom_value"
        os.environ.pop("CUSTOM_VAR", None)

    def test_prefix_value(self):
        assert ENV_PREFIX == "NURESOURCE_"


class TestOutputDirOverride:
    """Tests for the output directory override."""

    def test_unset_returns_none(self, monkeypatch):
        monkeypatch.delenv("NURESOURCE_OUTPUT_DIR", raising=False)
        assert output_dir_override() is None

    def test_set_returns_path(self, monkeypatch, tmp_path):
        monkeypatch.setenv("NURESOURCE_OUTPUT_DIR", str(tmp_path))
        assert output_dir_override() == Path(str(tmp_path))
