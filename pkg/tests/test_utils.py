"""Tests for logging setup and number formatting."""

import logging
from datetime import date
from fractions import Fraction

import pytest
from mpmath import mp

from k33_enum.utils import (
    LOGGER_NAME,
    digits_for_precision,
    format_float,
    format_rational,
    parse_rational,
    setup_logging,
)


@pytest.fixture
def restore_handlers():
    logger = logging.getLogger(LOGGER_NAME)
    saved = (list(logger.handlers), logger.level)
    yield
    for handler in logger.handlers:
        handler.close()
    logger.handlers[:] = saved[0]
    logger.setLevel(saved[1])


class TestSetupLogging:
    """Tests for setup_logging."""

    def test_log_file_named_after_command(self, tmp_path, restore_handlers):
        """Each command writes to its own dated file."""
        logger = setup_logging(tmp_path, level="DEBUG", command="verify")
        logger.info("hello")
        for handler in logger.handlers:
            handler.flush()
        log_file = tmp_path / f"verify_{date.today():%Y-%m-%d}.log"
        assert log_file.exists()
        assert "k33_enum - INFO - hello" in log_file.read_text(encoding="utf-8")

    def test_handlers_replaced(self, tmp_path, restore_handlers):
        """Calling twice leaves one file handler and one console handler."""
        setup_logging(tmp_path, command="count")
        logger = setup_logging(tmp_path, command="count")
        kinds = sorted(type(h).__name__ for h in logger.handlers)
        assert kinds == ["FileHandler", "StreamHandler"]

    def test_level_from_environment(self, tmp_path, monkeypatch, restore_handlers):
        monkeypatch.setenv("LOG_LEVEL", "warning")
        logger = setup_logging(tmp_path)
        assert logger.level == logging.WARNING
        assert (tmp_path / f"run_{date.today():%Y-%m-%d}.log").exists()


class TestNumbers:
    """Tests for rational parsing and float formatting."""

    def test_parse_rational(self):
        assert parse_rational("1/2") == Fraction(1, 2)
        assert parse_rational("0.25") == Fraction(1, 4)
        assert parse_rational(3) == 3

    def test_parse_rational_rejects_text(self):
        with pytest.raises(ValueError):
            parse_rational("half")

    def test_format_rational(self):
        assert format_rational(3) == "3"
        assert format_rational(-1, 4) == "-1/4"

    def test_digits_grow_with_precision(self):
        """About half the working precision is printed, never fewer than 6 digits."""
        assert digits_for_precision(16) == 6
        assert digits_for_precision(256) == 38
        assert digits_for_precision(512) > digits_for_precision(256)

    def test_format_float(self):
        with mp.workprec(256):
            text = format_float(mp.pi, 256)
        assert text.startswith("3.14159265358979")
        assert len(text.replace(".", "")) == 38
