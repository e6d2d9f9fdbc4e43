"""Planner module for generating verification steps."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .schemas import BIVARIATE_ORDER, GraphClass
from .utils import get_logger

TOWER_CLASSES = (GraphClass.K33, GraphClass.K33PLUS)


class StepType(Enum):
    """Types of verification steps."""

    ORACLE_ROWS = "oracle_rows"
    GF_ROWS = "gf_rows"
    INJECT_FAULT = "inject_fault"
    COMPARE_COUNTS = "compare_counts"
    CLOSED_FORMS = "closed_forms"
    IDENTITIES = "identities"


@dataclass
class PlanStep:
    """A single step in the verification plan."""

    step_type: StepType
    description: str
    params: dict[str, Any] = field(default_factory=dict)

    def __str__(self) -> str:
        return f"[{self.step_type.value}] {self.description}"


class Planner:
    """
    Turns a verification goal into ordered steps.

    Oracle sweeps come first so that a failing sweep stops the run before
    the slower series pipelines start.
    """

    def __init__(self):
        self.logger = get_logger()

    def plan(self, goal: dict[str, Any]) -> list[PlanStep]:
        """
        Generate a verification plan.

        Args:
            goal: 'max_n', and optionally 'identity_order', 'jobs', 'allow_n8',
                'identities' (bool) and 'fault' ({'class', 'connectivity', 'n'})

        Returns:
            Ordered list of PlanStep objects
        """
        max_n = goal["max_n"]
        jobs = goal.get("jobs", 1)
        identity_order = goal.get("identity_order", BIVARIATE_ORDER)
        fault = goal.get("fault")

        self.logger.info(f"Planning verification up to n={max_n}")

        steps = []
        sizes = list(range(3, max_n + 1))
        if sizes:
            for graph_class in TOWER_CLASSES:
                steps.append(
                    PlanStep(
                        step_type=StepType.ORACLE_ROWS,
                        description=f"Oracle {graph_class.value} counts, n={sizes[0]}..{max_n}",
                        params={
                            "graph_class": graph_class,
                            "sizes": sizes,
                            "jobs": jobs,
                            "allow_n8": goal.get("allow_n8", False),
                        },
                    )
                )
        for graph_class in (*TOWER_CLASSES, GraphClass.MAXIMAL):
            steps.append(
                PlanStep(
                    step_type=StepType.GF_ROWS,
                    description=f"Series counts for {graph_class.value} to order {max(max_n, 5)}",
                    params={"graph_class": graph_class, "order": max(max_n, 5)},
                )
            )
        if fault:
            steps.append(
                PlanStep(
                    step_type=StepType.INJECT_FAULT,
                    description=f"Perturb one {fault['class'].value} coefficient at n={fault['n']}",
                    params=fault,
                )
            )
        if sizes:
            steps.append(
                PlanStep(
                    step_type=StepType.COMPARE_COUNTS,
                    description="Compare series counts with the oracle",
                    params={"sizes": sizes},
                )
            )
        steps.append(
            PlanStep(
                step_type=StepType.CLOSED_FORMS,
                description="Check small closed forms and the exponential formula",
                params={"max_n": max_n},
            )
        )
        if goal.get("identities", True):
            steps.append(
                PlanStep(
                    step_type=StepType.IDENTITIES,
                    description=f"Bivariate identity suite at order {identity_order}",
                    params={"order": identity_order},
                )
            )

        self.logger.info(f"Generated plan with {len(steps)} steps")
        for i, step in enumerate(steps, 1):
            self.logger.debug(f"  Step {i}: {step}")

        return steps
