"""Verification loop implementing Plan -> Act -> Reflect."""

import math
from typing import Any

from . import derive
from .errors import K33EnumError
from .maximal import MaximalPipeline
from .minorfree import MinorFreeTower, exponential_formula
from .oracle import count_all
from .planner import TOWER_CLASSES, Planner, PlanStep, StepType
from .schemas import CheckResult, ClassSpec, Connectivity, GraphClass, VerificationReport
from .series import Marker, MarkerRing, TruncatedSeries, lagrange_inversion
from .utils import get_logger

ORACLE_FIELDS = {
    Connectivity.ALL: "g",
    Connectivity.CONNECTED: "c",
    Connectivity.BICONNECTED: "b",
}


def _check(name: str, expected, actual, detail: str | None = None) -> CheckResult:
    passed = expected == actual
    return CheckResult(
        name=name,
        passed=passed,
        expected=None if passed else str(expected),
        actual=None if passed else str(actual),
        detail=detail,
    )


def _identity(name: str, lhs: TruncatedSeries, rhs: TruncatedSeries) -> CheckResult:
    agreement = lhs.agreement(rhs)
    order = min(lhs.order, rhs.order)
    if lhs.equals(rhs):
        return CheckResult(name=name, passed=True)
    return CheckResult(
        name=name,
        passed=False,
        expected=str(rhs[agreement]),
        actual=str(lhs[agreement]),
        detail=f"first difference at x^{agreement} (order {order})",
    )


class Verifier:
    """
    Runs the verification plan and collects a report.

    Every count check compares exact integers; every identity check compares
    exact series coefficients.
    """

    def __init__(self):
        self.logger = get_logger()
        self.planner = Planner()
        self.context: dict[str, Any] = {}

    def run(self, goal: dict[str, Any]) -> VerificationReport:
        """
        Verify series counts and identities.

        Args:
            goal: see Planner.plan

        Returns:
            VerificationReport with one entry per check
        """
        self.logger.info("=== Starting Verification Run ===")
        self.logger.info(f"Max n: {goal['max_n']}")

        self.context = {"oracle": {}, "gf": {}, "maximal": [], "triangulations": [], "checks": []}

        # PLAN phase
        self.logger.info("--- PLAN Phase ---")
        steps = self.planner.plan(goal)

        # ACT phase
        self.logger.info("--- ACT Phase ---")
        for i, step in enumerate(steps, 1):
            self.logger.info(f"Executing step {i}/{len(steps)}: {step}")
            try:
                self._execute_step(step)
            except K33EnumError as e:
                self.logger.error(f"Step failed: {e}")
                raise

        # REFLECT phase
        self.logger.info("--- REFLECT Phase ---")
        report = VerificationReport(max_n=goal["max_n"], checks=self.context["checks"])
        for failure in report.failures:
            self.logger.warning(
                f"FAIL {failure.name}: expected {failure.expected}, got {failure.actual}"
            )
        passed = len(report.checks) - len(report.failures)
        self.logger.info(f"{passed}/{len(report.checks)} checks passed")
        self.logger.info("=== Verification Run Complete ===")
        return report

    def _record(self, *checks: CheckResult) -> None:
        self.context["checks"].extend(checks)

    def _execute_step(self, step: PlanStep) -> None:
        """Execute a single plan step."""
        match step.step_type:
            case StepType.ORACLE_ROWS:
                graph_class = step.params["graph_class"]
                for n in step.params["sizes"]:
                    self.context["oracle"][(graph_class, n)] = count_all(
                        n,
                        graph_class,
                        jobs=step.params["jobs"],
                        allow_n8=step.params["allow_n8"],
                    )

            case StepType.GF_ROWS:
                graph_class = step.params["graph_class"]
                order = step.params["order"]
                if graph_class == GraphClass.MAXIMAL:
                    pipeline = MaximalPipeline(order).run()
                    self.context["maximal"] = pipeline.counts()
                    self.context["triangulations"] = pipeline.triangulation_counts()
                    self.context["theta"] = pipeline.theta
                else:
                    tower = MinorFreeTower(graph_class, order).run()
                    self.context["gf"][graph_class] = {
                        connectivity: tower.counts(connectivity) for connectivity in Connectivity
                    }

            case StepType.INJECT_FAULT:
                graph_class = step.params["class"]
                n = step.params["n"]
                if graph_class == GraphClass.MAXIMAL:
                    self.context["maximal"][n] += 1
                else:
                    connectivity = step.params.get("connectivity", Connectivity.ALL)
                    self.context["gf"][graph_class][connectivity][n] += 1
                self.logger.warning(f"Injected fault into {graph_class.value} at n={n}")

            case StepType.COMPARE_COUNTS:
                self._compare_counts(step.params["sizes"])

            case StepType.CLOSED_FORMS:
                self._closed_forms(step.params["max_n"])

            case StepType.IDENTITIES:
                self._identities(step.params["order"])

    def _compare_counts(self, sizes: list[int]) -> None:
        oracle = self.context["oracle"]
        for graph_class in TOWER_CLASSES:
            rows = self.context["gf"][graph_class]
            for connectivity, letter in ORACLE_FIELDS.items():
                for n in sizes:
                    expected = getattr(oracle[(graph_class, n)], letter)
                    self._record(
                        _check(
                            f"{graph_class.value} {connectivity.value} n={n}",
                            expected,
                            rows[connectivity][n],
                        )
                    )
        for n in sizes:
            expected = oracle[(GraphClass.K33, n)].m
            self._record(_check(f"maximal n={n}", expected, self.context["maximal"][n]))

    def _closed_forms(self, max_n: int) -> None:
        for graph_class in TOWER_CLASSES:
            g = self.context["gf"][graph_class][Connectivity.ALL]
            for n in range(1, min(max_n, 5) + 1):
                self._record(
                    _check(f"{graph_class.value} all graphs n={n}", 2 ** math.comb(n, 2), g[n])
                )
            c = self.context["gf"][graph_class][Connectivity.CONNECTED]
            self._record(
                _check(
                    f"{graph_class.value} exponential formula",
                    g,
                    exponential_formula(c),
                )
            )
        b = self.context["gf"][GraphClass.K33][Connectivity.BICONNECTED]
        self._record(_check("k33 biconnected n=3", 1, b[3]))

        T = [row.T_n for row in self.context["triangulations"] if row.n <= 5]
        self._record(_check("labelled triangulations n=3..5", [1, 1, 10], T))

        theta = self.context["theta"]
        u = TruncatedSeries.variable(theta.ring, theta.order)
        phi = ((1 - u) ** 3).inverse()
        self._record(
            _identity("theta by Lagrange inversion", theta, lagrange_inversion(phi, theta.order))
        )

    def _identities(self, order: int) -> None:
        self._record(
            _check("parametrization identity", 0, derive.parametrization_residual())
        )

        ring = MarkerRing([Marker("y", cap=3 * order + 3)])
        pipeline = MaximalPipeline(order, ring=ring).run()
        F, H = pipeline.solve_FH()
        self._record(
            _identity("rooting identity", *pipeline.rooting_identity()),
            _identity("T0 derivative identity", *pipeline.T0_derivative_identity()),
            _identity("H from L", pipeline.H_from_L(), H),
            _identity(
                "psi(F) = y", pipeline.psi(F), TruncatedSeries.constant(ring, pipeline.y, order)
            ),
        )

        spec = ClassSpec(graph_class=GraphClass.K33, track_edges=True)
        tower = MinorFreeTower.from_spec(spec, order)
        tower.build_B()
        self._record(
            _identity("edge derivative identity", *tower.edge_derivative_identity()),
            _identity(
                "network equation",
                tower.network_residual(),
                TruncatedSeries.zero(tower.ring, order),
            ),
        )
