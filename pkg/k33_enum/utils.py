"""Logging setup, rational parsing and precision-aware number formatting."""

import logging
import math
import os
from datetime import date
from fractions import Fraction
from pathlib import Path

from mpmath import mp

LOGGER_NAME = "k33_enum"
FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
CONSOLE_FORMAT = "%(levelname)s: %(message)s"


def setup_logging(
    log_dir: Path | str = "logs", level: str | None = None, command: str = "run"
) -> logging.Logger:
    """
    Send package logs to a dated file per command and to stderr.

    Args:
        log_dir: Directory for log files
        level: Logging level (defaults to LOG_LEVEL env var or INFO)
        command: CLI command, used as the log file prefix

    Returns:
        The k33_enum logger
    """
    level_name = (level or os.getenv("LOG_LEVEL", "INFO")).upper()
    log_level = getattr(logging, level_name, logging.INFO)

    logger = get_logger()
    logger.setLevel(log_level)
    logger.handlers.clear()

    log_file = ensure_directory(log_dir) / f"{command}_{date.today():%Y-%m-%d}.log"
    handlers = (
        (logging.FileHandler(log_file, encoding="utf-8"), FILE_FORMAT),
        (logging.StreamHandler(), CONSOLE_FORMAT),
    )
    for handler, pattern in handlers:
        handler.setLevel(log_level)
        handler.setFormatter(logging.Formatter(pattern))
        logger.addHandler(handler)
    return logger


def get_logger() -> logging.Logger:
    return logging.getLogger(LOGGER_NAME)


def ensure_directory(path: Path | str) -> Path:
    """Ensure a directory exists, creating it if necessary."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse '1', '0', '1/2' or '0.25' into an exact fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not a rational number: {text!r}") from e


def format_rational(numerator: int, denominator: int = 1) -> str:
    """Render an exact rational as 'num/den' ('num' when the denominator is 1)."""
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def digits_for_precision(precision_bits: int) -> int:
    """Decimal digits worth printing for a value computed at the given precision.

    Roughly half the working precision is trusted: root finders stop at a
    residual of 2^(-p/2) and finite differences lose the rest.
    """
    return max(6, int(precision_bits * math.log10(2) / 2))


def format_float(value, precision_bits: int) -> str:
    """Format an mpmath number with a precision-derived digit count."""
    return mp.nstr(value, digits_for_precision(precision_bits), strip_zeros=False)
