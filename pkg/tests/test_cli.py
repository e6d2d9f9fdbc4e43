"""Tests for the command-line interface."""

import json

import pytest

from k33_enum import asymptotics, cli
from k33_enum.cli import build_parser, main
from k33_enum.errors import ExpansionError


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    """Run every command in a scratch directory (logs and golden files land there)."""
    monkeypatch.chdir(tmp_path)
    return tmp_path


class TestParser:
    """Tests for argument parsing."""

    def test_series_order_alias(self):
        args = build_parser().parse_args(["count", "--order", "9"])
        assert args.series_order == 9

    def test_defaults(self):
        args = build_parser().parse_args(["count"])
        assert args.max_n == 7
        assert args.series_order is None
        assert args.graph_class == "k33"

    def test_no_command(self):
        """Without a command the help is printed."""
        assert main([]) == 1


class TestCount:
    """Tests for the count command."""

    def test_all_graphs(self, capsys):
        """Up to five vertices every graph is counted."""
        assert main(["count", "--max-n", "5", "--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert out == "n,count\n1,1\n2,2\n3,8\n4,64\n5,1024\n"

    def test_maximal(self, capsys):
        assert main(["count", "--class", "maximal", "--max-n", "5", "--format", "csv"]) == 0
        assert capsys.readouterr().out == "n,count\n3,1\n4,1\n5,1\n"

    def test_default_order_fixes_counts(self, capsys):
        """Raising the order past max n leaves the reported counts unchanged."""
        args = ["count", "--class", "k33plus", "--max-n", "6", "--format", "csv"]
        assert main(args) == 0
        default = capsys.readouterr().out
        assert main(args + ["--series-order", "20"]) == 0
        assert capsys.readouterr().out == default

    def test_order_below_max_n(self):
        """An order smaller than max n is a configuration error."""
        assert main(["count", "--max-n", "10", "--series-order", "5"]) == 2

    def test_plus_rejects_q(self):
        assert main(["count", "--class", "k33plus", "--q", "0", "--max-n", "3"]) == 2

    def test_out_file(self, workdir):
        """--out writes the rendered table to a file."""
        path = workdir / "counts.csv"
        assert main(["count", "--max-n", "3", "--format", "csv", "--out", str(path)]) == 0
        assert path.read_text(encoding="utf-8") == "n,count\n1,1\n2,2\n3,8\n"


class TestSeries:
    """Tests for the series command."""

    def test_theta(self, capsys):
        assert main(["series", "--gf", "theta", "--order", "4", "--format", "csv"]) == 0
        assert capsys.readouterr().out == "k,coefficient\n0,0\n1,1\n2,3\n3,15\n4,91\n"

    def test_unknown_series(self):
        assert main(["series", "--gf", "bogus", "--order", "4"]) == 2

    def test_tower_series_needs_tower_class(self):
        assert main(["series", "--gf", "D", "--class", "maximal", "--order", "4"]) == 2


class TestOracle:
    def test_row(self, capsys):
        """The brute-force row for four vertices."""
        assert main(["oracle", "--n", "4", "--format", "csv"]) == 0
        assert capsys.readouterr().out == "n,graph_class,g,c,b,m\n4,k33,64,38,10,1\n"

    def test_too_large(self):
        assert main(["oracle", "--n", "9"]) == 2

    def test_n8_needs_flag(self):
        assert main(["oracle", "--n", "8"]) == 2

    def test_maximal_class_rejected(self):
        """Maximal counts come from the k33 sweep."""
        assert main(["oracle", "--n", "4", "--class", "maximal"]) == 2


class TestConstants:
    def test_maximal_reports_all_readings(self, capsys):
        """a from the local expansion next to the closed-form and printed readings."""
        args = ["constants", "--class", "maximal", "--format", "json", "--precision", "128"]
        assert main(args) == 0
        data = json.loads(capsys.readouterr().out)
        assert float(data["a"]) == pytest.approx(0.4057e-4, rel=2e-2)
        assert float(data["a_closed_form"]) == pytest.approx(0.25354e-3, rel=1e-4)
        assert float(data["gamma"]) < 9.49629


class TestExitCodes:
    """Failures inside the computation exit with 3, configuration problems with 2."""

    def test_expansion_failure(self, monkeypatch):
        def fail(*args, **kwargs):
            raise ExpansionError("x has no maximum along the level curve")

        monkeypatch.setattr(asymptotics, "solve_maximal_singularity", fail)
        assert main(["constants", "--class", "maximal"]) == 3

    def test_bare_value_error(self, monkeypatch):
        """An unexpected ValueError from a library is a computation failure."""
        def fail(*args, **kwargs):
            raise ValueError("math domain error")

        monkeypatch.setattr(cli, "build_counts", fail)
        assert main(["count", "--max-n", "3"]) == 3

    def test_config_error(self):
        assert main(["count", "--precision", "32"]) == 2

    def test_log_file_per_command(self, workdir):
        assert main(["count", "--max-n", "3"]) == 0
        assert list((workdir / "logs").glob("count_*.log"))


class TestVerify:
    """Tests for the verify command."""

    def test_passes(self):
        assert main(["verify", "--max-n", "3", "--identity-order", "5"]) == 0

    def test_injected_fault(self, capsys):
        """A perturbed coefficient fails with exit code 1."""
        code = main(
            ["verify", "--max-n", "3", "--skip-identities", "--inject-fault", "k33:connected:3"]
        )
        assert code == 1
        assert "FAIL  k33 connected n=3" in capsys.readouterr().out

    def test_bad_fault(self):
        assert main(["verify", "--max-n", "3", "--inject-fault", "k33:nope:3"]) == 2

    def test_oracle_bound(self):
        """n = 8 needs --allow-n8."""
        assert main(["verify", "--max-n", "8", "--skip-identities"]) == 2


class TestGolden:
    """Tests for golden files."""

    def test_write_then_check(self, workdir):
        args = ["golden", "--max-n", "4", "--golden-dir", str(workdir / "golden")]
        assert main(args + ["--write"]) == 0
        assert main(args + ["--check"]) == 0

    def test_check_without_entry(self, workdir):
        args = ["golden", "--check", "--max-n", "4", "--golden-dir", str(workdir / "golden")]
        assert main(args) == 1

    def test_config_changes_key(self, workdir):
        """A different class has its own entry."""
        golden = str(workdir / "golden")
        assert main(["golden", "--write", "--max-n", "4", "--golden-dir", golden]) == 0
        check = ["golden", "--check", "--max-n", "4", "--class", "k33plus", "--golden-dir", golden]
        assert main(check) == 1
