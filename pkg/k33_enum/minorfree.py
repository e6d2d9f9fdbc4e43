"""Connectivity tower M -> D -> B -> C -> G for K33- and K33+-minor-free graphs.

The 3-connected components are planar 3-connected maps (through U and V)
and K5; 2-connected graphs come from networks D, and connected and
general graphs follow from the block decomposition and the exponential
formula.
"""

import math
from fractions import Fraction

from .errors import BadConstantTerm, ConfigError
from .schemas import ClassSpec, Connectivity, GraphClass
from .series import (
    CoefficientRing,
    LogLedger,
    Marker,
    MarkerRing,
    PolynomialRelation,
    RationalRing,
    TruncatedSeries,
    extract_counts,
    solve_algebraic,
    solve_fixed_point,
    to_fraction,
)
from .utils import get_logger

logger = get_logger()

NUMERATOR_READINGS = ("xz", "printed")


def ring_for(spec: ClassSpec, order: int) -> CoefficientRing:
    """Coefficient ring for a class spec: rationals, or polynomials in the tracked markers."""
    markers = []
    if spec.track_edges:
        # a graph on n vertices in these classes has at most 3n - 5 edges; networks add two poles
        markers.append(Marker("y", cap=3 * order + 3))
    if spec.track_k5:
        markers.append(Marker("q", cap=order // 3 + 2))
    if not markers:
        return RationalRing()
    return MarkerRing(markers)


def jet_ring(name: str = "y", degree: int = 2) -> MarkerRing:
    """Marker kept as a jet around 1: exact derivatives at 1 up to ``degree``."""
    return MarkerRing([Marker(name, cap=degree, base=1)])


def exponential_formula(connected: list[int]) -> list[int]:
    """All-graph counts from connected counts: g_n = sum_k C(n-1, k-1) c_k g_{n-k}."""
    g = [1]
    for n in range(1, len(connected)):
        g.append(
            sum(math.comb(n - 1, k - 1) * connected[k] * g[n - k] for k in range(1, n + 1))
        )
    return g


class MinorFreeTower:
    """
    Generating functions of one minor-closed class up to x^order.

    Args:
        graph_class: K33 or K33PLUS
        order: Truncation order N
        ring: Coefficient ring (rationals by default)
        q: Value of the K5 marker when the ring does not track it
        numerator_reading: How the first log argument of beta_2 is read
    """

    def __init__(
        self,
        graph_class: GraphClass,
        order: int,
        ring: CoefficientRing | None = None,
        q: Fraction | int = 1,
        numerator_reading: str = "xz",
    ):
        if graph_class not in (GraphClass.K33, GraphClass.K33PLUS):
            raise ConfigError(f"no connectivity tower for class {graph_class.value}")
        if numerator_reading not in NUMERATOR_READINGS:
            raise ConfigError(f"unknown numerator reading {numerator_reading!r}")
        self.graph_class = graph_class
        self.order = order
        self.ring = ring or RationalRing()
        self.numerator_reading = numerator_reading
        if graph_class == GraphClass.K33PLUS and (self.ring.has_marker("q") or q != 1):
            raise ConfigError("the K5 marker is fixed to 1 for K33PLUS")

        self.x = TruncatedSeries.variable(self.ring, order)
        self.y = self.ring.marker("y")
        self.q = self.ring.marker("q", default=q)

        self.D: TruncatedSeries | None = None
        self.Uc: TruncatedSeries | None = None
        self.Vc: TruncatedSeries | None = None
        self.Wc: TruncatedSeries | None = None
        self.B: TruncatedSeries | None = None
        self.Cdot: TruncatedSeries | None = None
        self.C: TruncatedSeries | None = None
        self.G: TruncatedSeries | None = None
        self.ledger: LogLedger | None = None

    @classmethod
    def from_spec(cls, spec: ClassSpec, order: int) -> "MinorFreeTower":
        return cls(spec.graph_class, order, ring=ring_for(spec, order), q=spec.q_value)

    def _const(self, value) -> TruncatedSeries:
        return TruncatedSeries.constant(self.ring, value, self.order)

    # planar 3-connected maps

    def solve_UV_at(self, z: TruncatedSeries) -> tuple[TruncatedSeries, TruncatedSeries]:
        """U = xz(1 + V)^2, V = z(1 + U)^2 with z substituted.

        V is the root with V(0) = z(0) of the quartic obtained by eliminating U.
        """
        a = self.x * z
        relation = PolynomialRelation(
            (
                z * (1 + a) ** 2,
                4 * z * a * (1 + a) - 1,
                z * (6 * a * a + 2 * a),
                4 * z * a * a,
                z * a * a,
            )
        )
        V = solve_algebraic(relation, z[0], self.order)
        U = a * (1 + V) ** 2
        return U, V

    def map_quotient(self, z: TruncatedSeries) -> TruncatedSeries:
        """M(x, z) / (x^2 z^2)."""
        U, V = self.solve_UV_at(z)
        xz = self.x * z
        return (
            1 / (1 + xz)
            + 1 / (1 + z)
            - 1
            - (1 + U) ** 2 * (1 + V) ** 2 / (1 + U + V) ** 3
        )

    def M_of(self, z: TruncatedSeries) -> TruncatedSeries:
        """Rooted 3-connected planar maps, x marking vertices and z edges."""
        return self.x**2 * z**2 * self.map_quotient(z)

    # networks

    def network_exponent(self, d: TruncatedSeries) -> TruncatedSeries:
        """log((1 + D)/(1 + y)) as a function of D; zero exactly at the network series."""
        x = self.x
        psi = d * self.map_quotient(d) / 2 + self.q * x**3 * d**9 / 6 + x * d**2 / (1 + x * d)
        if self.graph_class == GraphClass.K33PLUS:
            psi = psi + x**4 * d**8 / 4
        return psi

    def solve_D(self) -> TruncatedSeries:
        if self.D is None:
            one_plus_y = 1 + self._const(self.y)

            def phi(d: TruncatedSeries) -> TruncatedSeries:
                return one_plus_y * self.network_exponent(d).exp() - 1

            self.D = solve_fixed_point(phi, self._const(self.y), self.order)
            self.Uc, self.Vc = self.solve_UV_at(self.D)
            self.Wc = self.D * (1 + self.Uc)
            logger.info(
                f"Solved networks for {self.graph_class.value} to order {self.order} "
                f"over {self.ring.name}"
            )
        return self.D

    def network_residual(self) -> TruncatedSeries:
        D = self.solve_D()
        one_plus_y = 1 + self._const(self.y)
        return self.network_exponent(D) - ((1 + D) / one_plus_y).log()

    # 2-connected graphs

    def _numerator(self, z: TruncatedSeries, w: TruncatedSeries) -> TruncatedSeries:
        x = self.x
        if self.numerator_reading == "xz":
            return 1 - x + x * z - x * w + x * w**2
        return 1 - x + w * z - x * w + x * w**2

    def build_B(self) -> TruncatedSeries:
        """B = beta(x, y, D, W) plus the K5 (and K33+ block) terms."""
        if self.B is not None:
            return self.B
        z = self.solve_D()
        w = self.Wc
        x = self.x
        ledger = LogLedger()
        one_plus_y = 1 + self._const(self.y)

        # (x^2 beta_1) / 2
        beta = x * z * (6 * x - 2 + x * z) / 8
        beta += ledger.weighted_log(one_plus_y, x**2 * (1 + z) / 2)
        beta += ledger.weighted_log(1 + z, -(x**2 * (1 + z) + x**2 / 2) / 2)
        beta += ledger.weighted_log(1 + x * z, Fraction(1, 4))

        # -(x beta_2) / 4
        t1 = (2 * (1 + x) * (1 + w) * (z + w**2) + 3 * (w - z)) / (2 * (1 + w) ** 2)
        beta -= x * t1 / 4
        beta += ledger.weighted_log(1 + x * (z + w + w**2), Fraction(1, 8))
        beta += ledger.weighted_log(1 + w, -(1 - 4 * x) / 8)
        ratio_weight = -(1 - 4 * x + 2 * x**2) / 16
        beta += ledger.weighted_log(self._numerator(z, w), ratio_weight)
        beta += ledger.weighted_log(1 - x, -ratio_weight)
        beta += ledger.weighted_log(z + w**2 + 1 + w, -ratio_weight)

        ledger.require_cancelled("2-connected series")
        self.ledger = ledger

        B = beta + self.q * x**5 * z**10 / 120
        if self.graph_class == GraphClass.K33PLUS:
            B = B + x**6 * z**9 / 72
        for k in (0, 1):
            if not self.ring.is_zero(B[k]):
                raise BadConstantTerm(f"2-connected series has nonzero x^{k} coefficient {B[k]}")
        self.B = B
        logger.info(f"Built 2-connected series for {self.graph_class.value}")
        return B

    def edge_derivative_identity(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        """Both sides of dB/dy = (x^2/2)(1 + D)/(1 + y) (needs the y marker)."""
        if not self.ring.has_marker("y"):
            raise ConfigError("the edge-derivative identity needs a tracked y marker")
        B = self.build_B()
        one_plus_y = 1 + self._const(self.y)
        rhs = self.x**2 * (1 + self.D) / one_plus_y / 2
        return B.marker_derivative("y"), rhs

    # connected and general graphs

    def build_CG(self) -> tuple[TruncatedSeries, TruncatedSeries]:
        if self.G is not None:
            return self.C, self.G
        B = self.build_B()
        dB = B.derivative()
        x_exp = TruncatedSeries.zero(self.ring, self.order)

        def phi(s: TruncatedSeries) -> TruncatedSeries:
            return dB.compose(s).exp().shift(1)

        self.Cdot = solve_fixed_point(phi, x_exp, self.order)
        coeffs = [self.ring.zero] + [
            self.ring.scale(self.Cdot[n], Fraction(1, n)) for n in range(1, self.order + 1)
        ]
        self.C = TruncatedSeries(self.ring, coeffs)
        self.G = self.C.exp()
        logger.info(f"Built connected and general series for {self.graph_class.value}")
        return self.C, self.G

    def run(self) -> "MinorFreeTower":
        self.build_CG()
        return self

    def series(self, connectivity: Connectivity) -> TruncatedSeries:
        if connectivity == Connectivity.BICONNECTED:
            return self.build_B()
        C, G = self.build_CG()
        return C if connectivity == Connectivity.CONNECTED else G

    def counts(self, connectivity: Connectivity) -> list[int]:
        """n! [x^n] of the chosen series with markers at 1."""
        return extract_counts(self.series(connectivity))

    def k5_distribution(self, n: int) -> dict[int, int]:
        """Labelled graphs on n vertices by number of K5 blocks (needs the q marker)."""
        if not self.ring.has_marker("q"):
            raise ConfigError("the K5 distribution needs a tracked q marker")
        _, G = self.build_CG()
        weights = self.ring.collect(G[n], "q")
        return {k: int(to_fraction(v) * math.factorial(n)) for k, v in weights.items()}

    def edge_moments(self, n: int) -> tuple[Fraction, Fraction]:
        """Exact mean and variance of the edge count on n vertices (needs a y jet of degree 2)."""
        ring = self.ring
        if not isinstance(ring, MarkerRing) or not ring.has_marker("y"):
            raise ConfigError("edge moments need the y marker kept as a jet")
        if ring.markers[ring.index["y"]].base != 1:
            raise ConfigError("edge moments need the y marker expanded around 1")
        _, G = self.build_CG()
        jet = {k: to_fraction(v) for k, v in self.ring.collect(G[n], "y").items()}
        total = jet[0]
        mean = jet.get(1, Fraction(0)) / total
        variance = 2 * jet.get(2, Fraction(0)) / total + mean - mean**2
        return mean, variance
