"""Tests for tool settings."""

import pytest

from shapeopt.core.config import Settings


class TestSettings:
    def test_only_presentation_fields(self) -> None:
        """Settings hold log presentation and nothing numerical."""
        assert set(Settings.model_fields) == {"environment", "log_level"}

    def test_defaults(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("SHAPEOPT_ENVIRONMENT", raising=False)
        monkeypatch.delenv("SHAPEOPT_LOG_LEVEL", raising=False)

        settings = Settings(_env_file=None)

        assert settings.environment == "development"
        assert settings.log_level == "INFO"

    def test_prefixed_environment_overrides(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("SHAPEOPT_ENVIRONMENT", "production")
        monkeypatch.setenv("SHAPEOPT_LOG_LEVEL", "WARNING")

        settings = Settings(_env_file=None)

        assert (settings.environment, settings.log_level) == ("production", "WARNING")
