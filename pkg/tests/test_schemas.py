"""Tests for configuration and output schemas."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from k33_enum.schemas import (
    CheckResult,
    ClassSpec,
    Connectivity,
    ConstantsReport,
    GraphClass,
    OracleCounts,
    RunConfig,
    VerificationReport,
)


class TestRunConfig:
    """Tests for RunConfig validation."""

    def test_defaults(self):
        """Default run counts K33-free graphs up to n = 7."""
        config = RunConfig()
        assert config.graph_class == GraphClass.K33
        assert config.max_n == 7
        assert config.q_value == 1

    def test_default_order(self):
        """Rational runs truncate at order 60 unless told otherwise."""
        assert RunConfig().series_order == 60

    def test_q_normalized(self):
        """Rational marker values are stored canonically."""
        assert RunConfig(q="2/4").q == "1/2"
        assert RunConfig(q="0.25").q_value == Fraction(1, 4)

    def test_bad_q(self):
        """Non-numeric q is rejected."""
        with pytest.raises(ValidationError):
            RunConfig(q="many")

    def test_order_below_max_n(self):
        """The series must reach max_n."""
        with pytest.raises(ValidationError):
            RunConfig(max_n=10, series_order=5)

    def test_low_precision(self):
        with pytest.raises(ValidationError):
            RunConfig(precision_bits=32)

    def test_jobs_positive(self):
        with pytest.raises(ValidationError):
            RunConfig(jobs=0)

    def test_class_spec(self):
        """Markers are passed through to the class spec."""
        spec = RunConfig(q="0").class_spec(track_edges=True)
        assert spec.track_edges
        assert spec.q_value == 0


class TestClassSpec:
    """Tests for ClassSpec consistency rules."""

    def test_maximal_has_no_k5_marker(self):
        with pytest.raises(ValidationError):
            ClassSpec(graph_class=GraphClass.MAXIMAL, track_k5=True)

    def test_maximal_has_no_connectivity(self):
        """Maximal graphs are counted as a single family."""
        with pytest.raises(ValidationError):
            ClassSpec(graph_class=GraphClass.MAXIMAL, connectivity=Connectivity.CONNECTED)

    def test_plus_keeps_q_one(self):
        """K33+ has no K5 marker."""
        with pytest.raises(ValidationError):
            ClassSpec(graph_class=GraphClass.K33PLUS, q="0")

    def test_frozen(self):
        spec = ClassSpec(graph_class=GraphClass.K33)
        with pytest.raises(ValidationError):
            spec.q = "0"


class TestOracleCounts:
    """Tests for OracleCounts consistency."""

    def test_valid(self):
        counts = OracleCounts(n=4, graph_class=GraphClass.K33, g=64, c=38, b=10, m=1)
        assert counts.m == 1

    def test_connected_exceeds_all(self):
        """c > g is impossible."""
        with pytest.raises(ValidationError):
            OracleCounts(n=4, graph_class=GraphClass.K33, g=10, c=38, b=10)

    def test_maximal_exceeds_all(self):
        with pytest.raises(ValidationError):
            OracleCounts(n=3, graph_class=GraphClass.K33, g=8, c=4, b=1, m=9)


class TestReports:
    """Tests for the report models."""

    def test_empty_report_does_not_pass(self):
        """A report with no checks proves nothing."""
        assert not VerificationReport(max_n=3).passed

    def test_failures(self):
        report = VerificationReport(
            max_n=3,
            checks=[
                CheckResult(name="a", passed=True),
                CheckResult(name="b", passed=False, expected="1", actual="2"),
            ],
        )
        assert not report.passed
        assert [check.name for check in report.failures] == ["b"]

    def test_constants_alias(self):
        """The class field is serialized as 'class'."""
        report = ConstantsReport(graph_class=GraphClass.K33, rho_inv="27.22935", precision_bits=256)
        data = report.model_dump(by_alias=True, exclude_none=True)
        assert data == {"class": GraphClass.K33, "rho_inv": "27.22935", "precision_bits": 256}
