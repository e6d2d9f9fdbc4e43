"""Maximal K33-minor-free graphs.

Planar triangulations (through the Tutte series) and K5 are glued along
edges; the edge-rooted series F and H solve a fixed-point system, and the
unrooted series A(x, y) is an explicit expression in F, H and
L = theta(x F^3).

Triangulations on five vertices (K5 minus an edge) are left out of the
pieces by default: any graph built from one becomes K5, or a 2-sum of K5s,
once the missing edge is added, so it is never maximal.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, NonIntegerCount
from .series import (
    CoefficientRing,
    PolynomialRelation,
    RationalRing,
    SeriesKind,
    TruncatedSeries,
    extract_counts,
    solve_algebraic,
    solve_fixed_point,
)
from .utils import get_logger

HALF = Fraction(1, 2)


@dataclass
class TriangulationCounts:
    """Rooted (t_n) and labelled (T_n) triangulations on n vertices."""

    n: int
    t_n: int
    T_n: int


class MaximalPipeline:
    """
    Series pipeline for maximal K33-minor-free graphs.

    The ring decides how the edge marker y is handled: the rational ring
    fixes y = 1, a MarkerRing with a "y" marker keeps it symbolic.
    With with_k5_minus_edge the five-vertex triangulation stays among the
    pieces, which overcounts m_5 and m_n for n >= 8.
    """

    def __init__(
        self,
        order: int,
        ring: CoefficientRing | None = None,
        with_k5_minus_edge: bool = False,
    ):
        if order < 3:
            raise ConfigError("the maximal pipeline needs order >= 3")
        self.order = order
        self.ring = ring or RationalRing()
        self.with_k5_minus_edge = with_k5_minus_edge
        self.logger = get_logger()
        self.x = TruncatedSeries.variable(self.ring, order)
        self.y = self.ring.marker("y")

        self.theta: TruncatedSeries | None = None
        self.t_series: TruncatedSeries | None = None
        self.F: TruncatedSeries | None = None
        self.H: TruncatedSeries | None = None
        self.L: TruncatedSeries | None = None
        self.A: TruncatedSeries | None = None

    def _const(self, value) -> TruncatedSeries:
        return TruncatedSeries.constant(self.ring, value, self.order)

    def build_theta_and_t(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        """theta(1 - theta)^3 = x and rooted triangulations t = x^2 theta (1 - 2 theta)."""
        if self.theta is None:
            # S - 3S^2 + 3S^3 - S^4 - x
            relation = PolynomialRelation(
                (-self.x, self._const(1), self._const(-3), self._const(3), self._const(-1))
            )
            self.theta = solve_algebraic(relation, 0, self.order)
            t = self.x**2 * self.theta * (1 - 2 * self.theta)
            t.kind = SeriesKind.OGF
            self.t_series = t
            self.logger.debug(f"Built theta and t to order {self.order}")
        return self.theta, self.t_series

    def triangulation_counts(self) -> list[TriangulationCounts]:
        """Labelled triangulations from the rooting relation t_n n! = 4(3n - 6) T_n."""
        _, t = self.build_theta_and_t()
        rooted = extract_counts(t, SeriesKind.OGF)
        rows = [TriangulationCounts(n=3, t_n=rooted[3], T_n=1)]
        for n in range(4, self.order + 1):
            total = rooted[n] * math.factorial(n)
            rootings = 4 * (3 * n - 6)
            if total % rootings:
                raise NonIntegerCount(n, f"{total}/{rootings}")
            rows.append(TriangulationCounts(n=n, t_n=rooted[n], T_n=total // rootings))
        return rows

    def L_of(self, u: TruncatedSeries) -> TruncatedSeries:
        """L(x, u) = theta(x u^3)."""
        theta, _ = self.build_theta_and_t()
        return theta.compose(self.x * u**3)

    def T0_of(self, u: TruncatedSeries) -> TruncatedSeries:
        """Edge-rooted triangulations with edges substituted by u."""
        u3 = u**3
        L = self.L_of(u)
        return u3 * self.x * HALF + L * (1 - 2 * L) * HALF

    def _k5_minus_edge(self, u: TruncatedSeries) -> TruncatedSeries:
        """Edge-rooted five-vertex triangulations: (3/2) x^3 u^9."""
        return self.x**3 * u**9 * Fraction(3, 2)

    def T0_pieces(self, u: TruncatedSeries) -> TruncatedSeries:
        """T0 restricted to the triangulations that can sit inside a maximal graph."""
        if self.with_k5_minus_edge:
            return self.T0_of(u)
        return self.T0_of(u) - self._k5_minus_edge(u)

    def K0_of(self, u: TruncatedSeries) -> TruncatedSeries:
        """Edge-rooted K5 with the nine other edges substituted by u."""
        return self.x**3 * u**9 / 6

    def psi(self, u: TruncatedSeries) -> TruncatedSeries:
        """Functional inverse of F in its y-argument: psi(F(x, y)) = y."""
        return u * (-self.K0_of(u + self.T0_pieces(u))).exp()

    def solve_FH(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        """F = y exp(K0(x, F + T0(x, F))) and H = T0(x, F), with T0 over the allowed pieces."""
        if self.F is None:

            def phi(s: TruncatedSeries) -> TruncatedSeries:
                return self.K0_of(s + self.T0_pieces(s)).exp() * self.y

            self.F = solve_fixed_point(phi, self._const(self.y), self.order)
            self.H = self.T0_pieces(self.F)
            self.logger.info(f"Solved F and H to order {self.order} over {self.ring.name}")
        return self.F, self.H

    def _divide_by_y(self, s: TruncatedSeries) -> TruncatedSeries:
        if self.ring.has_marker("y"):
            return s.divide_by_marker("y")
        return s / self.y

    def build_A(self) -> TruncatedSeries:
        """A(x, y) directly in terms of H and F."""
        if self.A is None:
            F, H = self.solve_FH()
            x = self.x
            L = self.L_of(F)
            self.L = L
            log_ratio = self._divide_by_y(F).log()
            log_one_minus_L = (1 - L).log()
            inner = (
                27 * (H + F) * log_ratio
                + 10 * L
                + 20 * L**2
                + 15 * log_one_minus_L
                - 30 * F
                - 5 * x * F**3
            )
            A = inner * x**2 / -60
            if not self.with_k5_minus_edge:
                A = A - x**5 * F**9 / 12
            self.A = A
            self.logger.info(f"Built A to order {self.order}")
        return self.A

    def run(self) -> "MaximalPipeline":
        self.build_theta_and_t()
        self.solve_FH()
        self.build_A()
        return self

    def counts(self) -> list[int]:
        """m_n = n! [x^n] A(x, 1)."""
        return extract_counts(self.build_A())

    # identities

    def H_from_L(self) -> TruncatedSeries:
        """H = (-L^4 + 3L^3 - 5L^2 + 2L) / 2 with L = theta(x F^3), less (3/2) x^3 F^9."""
        F, _ = self.solve_FH()
        L = self.L_of(F)
        H = (-(L**4) + 3 * L**3 - 5 * L**2 + 2 * L) * HALF
        if self.with_k5_minus_edge:
            return H
        return H - self._k5_minus_edge(F)

    def T0_derivative_identity(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        """Both sides of dT0/du = (3u^2 x / 2)(1 + 1/(1 - L)^2) at u = y (needs the y marker)."""
        if not self.ring.has_marker("y"):
            raise ConfigError("the derivative identity needs a tracked y marker")
        u = self._const(self.y)
        lhs = self.T0_of(u).marker_derivative("y")
        L = self.L_of(u)
        rhs = 3 * u**2 * self.x * HALF * (1 + 1 / (1 - L) ** 2)
        return lhs, rhs

    def rooting_identity(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        """Both sides of (2 / x^2) y dA/dy = H + F (needs the y marker)."""
        if not self.ring.has_marker("y"):
            raise ConfigError("the rooting identity needs a tracked y marker")
        A = self.build_A()
        F, H = self.solve_FH()
        lhs = (A.marker_derivative("y") * self.y * 2).divide_x(2)
        return lhs, (H + F).truncate(lhs.order)
