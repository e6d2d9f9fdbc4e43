"""CLI entry point for the enumeration engine."""

import argparse
import sys
from fractions import Fraction

from mpmath import mp
from pydantic import ValidationError

from . import asymptotics
from .cache import GoldenStore
from .core import Verifier
from .errors import ConfigError, NumericError, OracleError, SeriesError
from .maximal import MaximalPipeline
from .minorfree import MinorFreeTower
from .oracle import count_all
from .render import (
    render_constants,
    render_counts,
    render_oracle,
    render_report,
    render_series,
    write_output,
)
from .schemas import (
    DEFAULT_PRECISION,
    ORACLE_MAX_N,
    ConstantsReport,
    Connectivity,
    CountRow,
    CountTable,
    GraphClass,
    OutputFormat,
    RunConfig,
    SeriesDump,
    Statistic,
)
from .series import TruncatedSeries
from .utils import format_float, format_rational, get_logger, setup_logging

MAXIMAL_SERIES = ("theta", "t", "T0", "F", "H", "A")
TOWER_SERIES = ("M", "D", "B", "Cdot", "C", "G")


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--class",
        dest="graph_class",
        choices=[c.value for c in GraphClass],
        default=GraphClass.K33.value,
        help="Graph class (default: k33)",
    )
    common.add_argument(
        "--connectivity",
        choices=[c.value for c in Connectivity],
        default=Connectivity.ALL.value,
        help="Connectivity level (default: any)",
    )
    common.add_argument("--max-n", type=int, default=ORACLE_MAX_N, help="Largest n (default: 7)")
    common.add_argument(
        "--series-order",
        "--order",
        dest="series_order",
        type=int,
        default=None,
        help="Truncation order N (default: max n, which fixes every reported count)",
    )
    common.add_argument(
        "--precision",
        dest="precision_bits",
        type=int,
        default=DEFAULT_PRECISION,
        help="Working precision in bits (default: 256)",
    )
    common.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TABLE.value,
        help="Output format (default: table)",
    )
    common.add_argument("--out", dest="output_path", default=None, help="Write output to PATH")
    common.add_argument("--jobs", type=int, default=1, help="Oracle worker processes")
    common.add_argument("--q", default="1", help="Value of the K5 marker (default: 1)")
    common.add_argument(
        "--allow-n8", action="store_true", help="Permit the long-running n = 8 oracle sweep"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k33-enum",
        description="Exact and asymptotic enumeration of K33-minor-free graph classes.",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: LOG_LEVEL or INFO)",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    common = _common_arguments()

    subparsers.add_parser("count", parents=[common], help="Exact counts from the series")
    subparsers.add_parser("constants", parents=[common], help="Asymptotic constants")

    verify_parser = subparsers.add_parser(
        "verify", parents=[common], help="Check the series against the oracle and identities"
    )
    verify_parser.add_argument(
        "--identity-order",
        type=int,
        default=None,
        help="Order of the bivariate identity suite (default: 30)",
    )
    verify_parser.add_argument(
        "--skip-identities", action="store_true", help="Only compare counts"
    )
    verify_parser.add_argument(
        "--inject-fault",
        default=None,
        metavar="CLASS:CONNECTIVITY:N",
        help="Perturb one series count to exercise the harness",
    )

    series_parser = subparsers.add_parser("series", parents=[common], help="Dump one series")
    series_parser.add_argument("--gf", required=True, help="Series name")

    oracle_parser = subparsers.add_parser("oracle", parents=[common], help="Brute-force row")
    oracle_parser.add_argument("--n", type=int, required=True, help="Number of vertices")

    golden_parser = subparsers.add_parser(
        "golden", parents=[common], help="Write or check golden outputs"
    )
    action = golden_parser.add_mutually_exclusive_group(required=True)
    action.add_argument("--write", action="store_true", help="Store fresh output")
    action.add_argument("--check", action="store_true", help="Compare with stored output")
    golden_parser.add_argument(
        "--what", choices=["count", "constants"], default="count", help="Output to persist"
    )
    golden_parser.add_argument("--golden-dir", default="golden", help="Golden file directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 1

    setup_logging(level=args.log_level, command=args.command)
    commands = {
        "count": run_count,
        "constants": run_constants,
        "verify": run_verify,
        "series": run_series,
        "oracle": run_oracle,
        "golden": run_golden,
    }
    return _guarded(commands[args.command], args)


def _status(text: str) -> None:
    print(text, file=sys.stderr)


def _guarded(command, args) -> int:
    """Map exceptions to exit codes: 2 configuration, 3 any failure of the computation."""
    try:
        return command(args)
    except (ConfigError, ValidationError) as e:
        _status(f"❌ Configuration error: {e}")
        return 2
    except (NumericError, SeriesError, OracleError) as e:
        _status(f"❌ Computation failed: {e}")
        return 3
    except Exception as e:
        get_logger().exception("Unexpected failure")
        _status(f"❌ Error: {e}")
        return 3


def config_from_args(args) -> RunConfig:
    max_n = args.max_n
    if args.command == "series" and args.series_order is not None:
        max_n = args.series_order
    # counts up to max n only need order max n; RunConfig alone defaults to RATIONAL_ORDER
    series_order = args.series_order if args.series_order is not None else max_n
    try:
        config = RunConfig(
            graph_class=args.graph_class,
            connectivity=args.connectivity,
            max_n=max_n,
            series_order=series_order,
            precision_bits=args.precision_bits,
            jobs=args.jobs,
            output_format=args.output_format,
            output_path=args.output_path,
            q=args.q,
            allow_n8=args.allow_n8,
        )
        config.class_spec()
    except ValidationError as e:
        raise ConfigError(str(e)) from e
    return config


def _emit(text: str, config: RunConfig) -> None:
    if config.output_path:
        write_output(text, config.output_path)
    else:
        print(text, end="")


# builders shared by commands and golden files


def build_counts(config: RunConfig) -> CountTable:
    if config.graph_class == GraphClass.MAXIMAL:
        counts = MaximalPipeline(config.series_order).run().counts()
        first = 3
    else:
        tower = MinorFreeTower(config.graph_class, config.series_order, q=config.q_value)
        counts = tower.run().counts(config.connectivity)
        first = 1
    rows = [CountRow(n=n, count=counts[n]) for n in range(first, config.max_n + 1)]
    return CountTable(
        graph_class=config.graph_class,
        connectivity=config.connectivity,
        q=config.q,
        series_order=config.series_order,
        rows=rows,
    )


def build_constants(config: RunConfig) -> ConstantsReport:
    bits = config.precision_bits

    def fmt(value) -> str:
        return format_float(value, bits)

    if config.graph_class == GraphClass.MAXIMAL:
        data = asymptotics.solve_maximal_singularity(bits)
        with mp.workprec(bits):
            branch = asymptotics.branch_check(data)
        return ConstantsReport(
            graph_class=config.graph_class,
            gamma=fmt(data.gamma),
            a=fmt(data.a),
            a_closed_form=fmt(data.closed_form.a),
            a_printed_formula=fmt(data.closed_form.a_printed),
            t=fmt(data.t),
            branch_check=fmt(branch),
            precision_bits=bits,
        )

    q = config.q_value
    with mp.workprec(bits):
        q_mp = mp.mpf(q.numerator) / q.denominator
    data = asymptotics.solve_tower_singularity(config.graph_class, q=q_mp, precision_bits=bits)
    alphas = asymptotics.subexponential_constants(data)
    fields = {
        "q": config.q,
        "rho_inv": fmt(data.rho_inv),
        "R_inv": fmt(data.R_inv),
        "t": fmt(data.t_star),
        "alpha_all": fmt(alphas["alpha_all"]),
        "alpha_connected": fmt(alphas["alpha_connected"]),
        "alpha_biconnected": fmt(alphas["alpha_biconnected"]),
    }
    if q == Fraction(1):
        edges = asymptotics.limit_law(Statistic.EDGES, config.graph_class, bits)
        fields["kappa_edges"] = fmt(edges.kappa)
        fields["lambda_edges"] = fmt(edges.lam)
        if config.graph_class == GraphClass.K33:
            k5 = asymptotics.limit_law(Statistic.K5_COUNT, config.graph_class, bits)
            fields["kappa_k5"] = fmt(k5.kappa)
            fields["lambda_k5"] = fmt(k5.lam)
    return ConstantsReport(graph_class=config.graph_class, precision_bits=bits, **fields)


def build_series(config: RunConfig, name: str) -> SeriesDump:
    order = config.series_order
    if name in MAXIMAL_SERIES:
        pipeline = MaximalPipeline(order).run()
        one = TruncatedSeries.constant(pipeline.ring, 1, order)
        series = {
            "theta": pipeline.theta,
            "t": pipeline.t_series,
            "T0": pipeline.T0_of(one),
            "F": pipeline.F,
            "H": pipeline.H,
            "A": pipeline.A,
        }[name]
    elif name in TOWER_SERIES:
        if config.graph_class == GraphClass.MAXIMAL:
            raise ConfigError(f"series {name} belongs to the k33 and k33plus classes")
        tower = MinorFreeTower(config.graph_class, order, q=config.q_value).run()
        if name == "M":
            series = tower.M_of(TruncatedSeries.constant(tower.ring, 1, order))
        else:
            series = {
                "D": tower.D,
                "B": tower.B,
                "Cdot": tower.Cdot,
                "C": tower.C,
                "G": tower.G,
            }[name]
    else:
        known = ", ".join(MAXIMAL_SERIES + TOWER_SERIES)
        raise ConfigError(f"unknown series {name!r} (known: {known})")
    coefficients = [format_rational(c.numerator, c.denominator) for c in series.to_fractions()]
    return SeriesDump(gf=name, order=order, coefficients=coefficients)


# commands


def run_count(args) -> int:
    config = config_from_args(args)
    target = f"{config.graph_class.value} ({config.connectivity.value})"
    _status(f"🚀 Counting {target} to n={config.max_n}")
    table = build_counts(config)
    _emit(render_counts(table, config.output_format), config)
    _status("✅ Done")
    return 0


def run_constants(args) -> int:
    config = config_from_args(args)
    _status(f"🚀 Constants for {config.graph_class.value} at {config.precision_bits} bits")
    report = build_constants(config)
    _emit(render_constants(report, config.output_format), config)
    _status("✅ Done")
    return 0


def _parse_fault(text: str | None) -> dict | None:
    if not text:
        return None
    try:
        class_value, connectivity_value, n = text.split(":")
        return {
            "class": GraphClass(class_value),
            "connectivity": Connectivity(connectivity_value),
            "n": int(n),
        }
    except ValueError as e:
        raise ConfigError(f"bad fault specification {text!r}: {e}") from e


def run_verify(args) -> int:
    config = config_from_args(args)
    if config.max_n > ORACLE_MAX_N and not config.allow_n8:
        raise ConfigError(f"verify beyond n={ORACLE_MAX_N} needs --allow-n8")
    goal = {
        "max_n": config.max_n,
        "jobs": config.jobs,
        "allow_n8": config.allow_n8,
        "identities": not args.skip_identities,
        "fault": _parse_fault(args.inject_fault),
    }
    if args.identity_order is not None:
        goal["identity_order"] = args.identity_order

    _status(f"🚀 Verifying up to n={config.max_n}")
    report = Verifier().run(goal)
    _emit(render_report(report, config.output_format), config)
    if report.passed:
        _status("✅ All checks passed")
        return 0
    _status(f"❌ {len(report.failures)} checks failed")
    return 1


def run_series(args) -> int:
    config = config_from_args(args)
    dump = build_series(config, args.gf)
    _emit(render_series(dump, config.output_format), config)
    return 0


def run_oracle(args) -> int:
    config = config_from_args(args)
    if config.graph_class == GraphClass.MAXIMAL:
        raise ConfigError("maximal graphs are counted by the k33 oracle (column m)")
    if args.n < 1 or args.n > ORACLE_MAX_N + 1:
        raise ConfigError(f"oracle runs for 1 <= n <= {ORACLE_MAX_N + 1}")
    if args.n > ORACLE_MAX_N and not config.allow_n8:
        raise ConfigError(f"oracle beyond n={ORACLE_MAX_N} needs --allow-n8")
    counts = count_all(args.n, config.graph_class, jobs=config.jobs, allow_n8=config.allow_n8)
    _emit(render_oracle(counts, config.output_format), config)
    return 0


def run_golden(args) -> int:
    config = config_from_args(args)
    store = GoldenStore(args.golden_dir)
    if args.what == "count":
        value = build_counts(config).model_dump(mode="json")
    else:
        value = build_constants(config).model_dump(mode="json", by_alias=True)
    key = store.canonical_key(
        args.what,
        config.model_dump(mode="json", exclude={"output_path", "output_format", "jobs"}),
    )
    if args.write:
        path = store.set(key, value)
        _status(f"✅ Golden entry written: {path}")
        return 0
    differences = store.compare(key, value)
    if differences:
        for line in differences:
            _status(f"   {line}")
        _status(f"❌ {len(differences)} differences from golden output")
        return 1
    _status("✅ Output matches golden entry")
    return 0


if __name__ == "__main__":
    sys.exit(main())
