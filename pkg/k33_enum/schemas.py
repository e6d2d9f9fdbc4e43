"""Pydantic schemas for run configuration and JSON output."""

from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .utils import parse_rational

RATIONAL_ORDER = 60
BIVARIATE_ORDER = 30
DEFAULT_PRECISION = 256
ORACLE_MAX_N = 7


class GraphClass(str, Enum):
    """Enumeration targets."""

    K33 = "k33"
    K33PLUS = "k33plus"
    MAXIMAL = "maximal"


class Connectivity(str, Enum):
    """Connectivity level of the counted graphs."""

    ALL = "any"
    CONNECTED = "connected"
    BICONNECTED = "biconnected"


class Statistic(str, Enum):
    """Parameters with a Gaussian limit law."""

    EDGES = "edges"
    K5_COUNT = "k5"


class OutputFormat(str, Enum):
    TABLE = "table"
    CSV = "csv"
    JSON = "json"


class ClassSpec(BaseModel):
    """Enumeration target: class, connectivity and tracked markers."""

    graph_class: GraphClass = Field(..., description="Excluded-minor class")
    connectivity: Connectivity = Field(Connectivity.ALL, description="Connectivity level")
    track_edges: bool = Field(False, description="Keep the edge marker y symbolic")
    track_k5: bool = Field(False, description="Keep the K5 marker q symbolic")
    q: str = Field("1", description="Value of the K5 marker when it is not tracked")

    model_config = ConfigDict(frozen=True)

    @field_validator("q", mode="before")
    @classmethod
    def _normalize_q(cls, value) -> str:
        return str(parse_rational(value))

    @property
    def q_value(self) -> Fraction:
        return Fraction(self.q)

    @model_validator(mode="after")
    def _check_markers(self) -> "ClassSpec":
        if self.graph_class == GraphClass.MAXIMAL:
            if self.track_k5:
                raise ValueError("the maximal class has no K5 marker")
            if self.connectivity != Connectivity.ALL:
                raise ValueError("the maximal class is counted without a connectivity split")
        if self.graph_class == GraphClass.K33PLUS and self.q_value != 1:
            raise ValueError("the K5 marker is fixed to 1 for K33PLUS")
        return self


class RunConfig(BaseModel):
    """Validated configuration shared by all CLI commands."""

    graph_class: GraphClass = Field(GraphClass.K33, description="Excluded-minor class")
    connectivity: Connectivity = Field(Connectivity.ALL, description="Connectivity level")
    max_n: int = Field(7, ge=1, description="Largest vertex count reported")
    series_order: int = Field(RATIONAL_ORDER, ge=1, description="Truncation order N")
    precision_bits: int = Field(DEFAULT_PRECISION, description="Binary working precision")
    jobs: int = Field(1, description="Worker processes for the oracle sweep")
    output_format: OutputFormat = Field(OutputFormat.TABLE, description="Output format")
    output_path: Optional[Path] = Field(None, description="Write output here instead of stdout")
    q: str = Field("1", description="Value of the K5 marker")
    allow_n8: bool = Field(False, description="Permit the long-running n = 8 oracle sweep")

    @field_validator("q", mode="before")
    @classmethod
    def _normalize_q(cls, value) -> str:
        return str(parse_rational(value))

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if self.series_order < self.max_n:
            raise ValueError(
                f"series order {self.series_order} is smaller than max n {self.max_n}"
            )
        if self.precision_bits < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        return self

    @property
    def q_value(self) -> Fraction:
        return Fraction(self.q)

    def class_spec(self, **markers: bool) -> ClassSpec:
        return ClassSpec(
            graph_class=self.graph_class,
            connectivity=self.connectivity,
            q=self.q,
            **markers,
        )


class CountRow(BaseModel):
    """One row of an exact count table."""

    n: int = Field(..., description="Number of labelled vertices")
    count: int = Field(..., description="Number of graphs")


class CountTable(BaseModel):
    """Exact counts from the generating-function pipeline."""

    graph_class: GraphClass
    connectivity: Connectivity
    q: str = "1"
    series_order: int
    rows: list[CountRow]


class SeriesDump(BaseModel):
    """Raw coefficients of one generating function as exact rationals."""

    gf: str = Field(..., description="Series name")
    order: int = Field(..., description="Truncation order")
    coefficients: list[str] = Field(..., description="Coefficient of x^k as 'num/den'")


class ConstantsReport(BaseModel):
    """Asymptotic constants of one class, formatted at working precision."""

    graph_class: GraphClass = Field(..., alias="class")
    q: Optional[str] = None
    rho_inv: Optional[str] = Field(None, description="Growth constant of all/connected graphs")
    R_inv: Optional[str] = Field(None, description="Growth constant of 2-connected graphs")
    alpha_all: Optional[str] = None
    alpha_connected: Optional[str] = None
    alpha_biconnected: Optional[str] = None
    gamma: Optional[str] = Field(None, description="Growth constant of maximal graphs")
    a: Optional[str] = Field(None, description="Subexponential constant of maximal graphs")
    a_closed_form: Optional[str] = Field(
        None, description="Transfer of the closed-form X^5 coefficient of the maximal class"
    )
    a_printed_formula: Optional[str] = None
    t: Optional[str] = None
    branch_check: Optional[str] = None
    kappa_edges: Optional[str] = None
    lambda_edges: Optional[str] = None
    kappa_k5: Optional[str] = None
    lambda_k5: Optional[str] = None
    precision_bits: int

    model_config = ConfigDict(
        populate_by_name=True,
        json_schema_extra={
            "example": {"class": "k33", "rho_inv": "27.22935", "precision_bits": 256}
        },
    )


class OracleCounts(BaseModel):
    """Brute-force counts on n labelled vertices."""

    n: int
    graph_class: GraphClass
    g: int = Field(..., description="All graphs in the class")
    c: int = Field(..., description="Connected graphs")
    b: int = Field(..., description="2-connected graphs (n >= 3)")
    m: Optional[int] = Field(None, description="Maximal graphs (K33 class only)")

    @model_validator(mode="after")
    def _check_order(self) -> "OracleCounts":
        if not self.g >= self.c >= self.b >= 0:
            raise ValueError(f"inconsistent counts g={self.g} c={self.c} b={self.b}")
        if self.m is not None and self.m > self.g:
            raise ValueError(f"maximal count {self.m} exceeds {self.g}")
        return self


class CheckResult(BaseModel):
    """Outcome of one verification check."""

    name: str
    passed: bool
    expected: Optional[str] = None
    actual: Optional[str] = None
    detail: Optional[str] = None


class VerificationReport(BaseModel):
    """All checks run by `verify`."""

    max_n: int
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]
