"""Tests for k33_enum."""
