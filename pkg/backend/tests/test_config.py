"""
Unit tests for settings and structured logging
"""
import json
import logging
from fractions import Fraction

import pytest

from app.config import Settings, get_settings, parse_window
from app.utils.logger import RationalFormattingFilter, setup_logging


class TestWindow:
    @pytest.mark.parametrize(
        "value, expected",
        [("-5:5", (-5.0, 5.0)), ("[-4, 4.5]", (-4.0, 4.5)), ((1, 2), (1.0, 2.0))],
    )
    def test_formats(self, value, expected):
        assert parse_window(value) == expected

    @pytest.mark.parametrize("value", ["4", "1:2:3", "a:b", "[1,", 7])
    def test_rejects(self, value):
        with pytest.raises(ValueError):
            parse_window(value)


class TestSettings:
    def test_defaults(self):
        settings = get_settings()
        assert settings.amoeba_window == (-5.0, 5.0)
        assert settings.amoeba_grid == 200
        assert settings.fourier_height == 2

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("TROPICAL_AMOEBA_WINDOW", "-4:4")
        monkeypatch.setenv("TROPICAL_LOG_LEVEL", "debug")
        settings = get_settings()
        assert settings.amoeba_window == (-4.0, 4.0)
        assert settings.log_level == "DEBUG"

    def test_collects_every_violation(self):
        settings = Settings(amoeba_window="3:1", amoeba_grid=1, amoeba_log_base=1.0)
        with pytest.raises(ValueError) as excinfo:
            settings.validate_ranges()
        message = str(excinfo.value)
        assert "TROPICAL_AMOEBA_WINDOW" in message
        assert "TROPICAL_AMOEBA_GRID" in message
        assert "TROPICAL_AMOEBA_LOG_BASE" in message

    def test_debug_mode_continues(self, monkeypatch):
        monkeypatch.setenv("TROPICAL_DEBUG", "true")
        monkeypatch.setenv("TROPICAL_AMOEBA_GRID", "1")
        assert get_settings().amoeba_grid == 1

    def test_invalid_configuration_fails(self, monkeypatch):
        monkeypatch.setenv("TROPICAL_AMOEBA_GRID", "1")
        with pytest.raises(ValueError):
            get_settings()


class TestLogging:
    def test_fraction_extras_are_rendered(self):
        record = logging.LogRecord(
            "t", logging.INFO, __file__, 1, "mass %s", (Fraction(1, 2),), None
        )
        record.count = Fraction(3, 4)
        record.point = (Fraction(1, 3), Fraction(0))
        RationalFormattingFilter().filter(record)
        assert record.getMessage() == "mass 1/2"
        assert record.count == "3/4"
        assert record.point == "(1/3, 0)"

    def test_json_lines_on_stderr(self, capsys):
        setup_logging("INFO", json_format=True)
        logging.getLogger("app.test").info("Built weighted complex", extra={"cells": 3})
        line = capsys.readouterr().err.strip().splitlines()[-1]
        entry = json.loads(line)
        assert entry["message"] == "Built weighted complex"
        assert entry["cells"] == 3
        assert entry["level"] == "INFO"
        assert entry["logger"] == "app.test"

    def test_setup_is_idempotent(self):
        setup_logging("WARNING")
        root = setup_logging("WARNING")
        assert [h.get_name() for h in root.handlers].count("tropical") == 1
