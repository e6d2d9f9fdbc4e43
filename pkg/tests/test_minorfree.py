"""Tests for the K33 and K33+ connectivity tower."""

from fractions import Fraction
from math import comb

import pytest

from k33_enum.errors import BadConstantTerm, ConfigError
from k33_enum.minorfree import MinorFreeTower, exponential_formula, jet_ring, ring_for
from k33_enum.schemas import ClassSpec, Connectivity, GraphClass
from k33_enum.series import MarkerRing, RationalRing, TruncatedSeries

CONNECTED_SMALL = [0, 1, 1, 4, 38, 728]
BICONNECTED_SMALL = [0, 0, 1, 1, 10, 238]


class TestSmallCounts:
    """On at most five vertices every graph avoids both minors."""

    @pytest.mark.parametrize("graph_class", [GraphClass.K33, GraphClass.K33PLUS])
    def test_all_graphs(self, graph_class):
        """g_n = 2^C(n,2) for n <= 5."""
        tower = MinorFreeTower(graph_class, 5).run()
        assert tower.counts(Connectivity.ALL) == [2 ** comb(n, 2) for n in range(6)]

    @pytest.mark.parametrize("graph_class", [GraphClass.K33, GraphClass.K33PLUS])
    def test_connected_graphs(self, graph_class):
        """c_n are the connected labelled graph counts."""
        tower = MinorFreeTower(graph_class, 5).run()
        assert tower.counts(Connectivity.CONNECTED) == CONNECTED_SMALL

    def test_biconnected_graphs(self):
        """b_3 = 1, b_4 = 10, b_5 = 238."""
        tower = MinorFreeTower(GraphClass.K33, 5)
        assert tower.counts(Connectivity.BICONNECTED) == BICONNECTED_SMALL

    def test_planar_specialization(self):
        """q = 0 removes K5 blocks: 1023 planar graphs on five vertices."""
        tower = MinorFreeTower(GraphClass.K33, 5, q=0).run()
        assert tower.counts(Connectivity.ALL)[5] == 1023
        assert tower.counts(Connectivity.CONNECTED)[5] == 727


class TestExponentialFormula:
    """Tests for the integer exponential formula."""

    def test_recovers_all_graphs(self):
        """Connected counts give 2^C(n,2)."""
        assert exponential_formula(CONNECTED_SMALL) == [2 ** comb(n, 2) for n in range(6)]

    def test_matches_series(self):
        """The series G and C satisfy the recurrence at order 7."""
        tower = MinorFreeTower(GraphClass.K33, 7).run()
        c = tower.counts(Connectivity.CONNECTED)
        assert exponential_formula(c) == tower.counts(Connectivity.ALL)


class TestMarkers:
    """Tests for the edge and K5 markers."""

    def test_ring_for_rationals(self):
        """Nothing tracked means plain rationals."""
        spec = ClassSpec(graph_class=GraphClass.K33)
        assert isinstance(ring_for(spec, 6), RationalRing)

    def test_ring_for_markers(self):
        """Tracked markers get caps from the order."""
        spec = ClassSpec(graph_class=GraphClass.K33, track_edges=True, track_k5=True)
        ring = ring_for(spec, 6)
        assert isinstance(ring, MarkerRing)
        assert ring.caps == (21, 4)

    def test_k5_distribution(self):
        """Exactly one graph on five vertices has a K5 block."""
        spec = ClassSpec(graph_class=GraphClass.K33, track_k5=True)
        tower = MinorFreeTower.from_spec(spec, 5)
        assert tower.k5_distribution(5) == {0: 1023, 1: 1}

    def test_edge_moments(self):
        """On four vertices the edge count is Binomial(6, 1/2)."""
        tower = MinorFreeTower(GraphClass.K33, 4, ring=jet_ring())
        mean, variance = tower.edge_moments(4)
        assert mean == 3
        assert variance == Fraction(3, 2)

    def test_mean_edges_at_25(self):
        """The exact mean edge count at n = 25 is within 10% of 2.21338 n."""
        tower = MinorFreeTower(GraphClass.K33, 25, ring=jet_ring())
        mean, variance = tower.edge_moments(25)
        expected = Fraction(221338, 100000) * 25
        assert abs(mean - expected) < expected / 10
        assert variance > 0

    def test_edge_moments_need_jet(self):
        """A rational ring has no edge marker."""
        with pytest.raises(ConfigError):
            MinorFreeTower(GraphClass.K33, 4).edge_moments(4)

    def test_k5_marker_rejected_for_plus(self):
        """The K33+ class keeps q = 1."""
        with pytest.raises(ConfigError):
            MinorFreeTower(GraphClass.K33PLUS, 4, q=0)


class TestTowerIdentities:
    """Exact identities of the tower."""

    def test_edge_derivative(self):
        """dB/dy = (x^2/2)(1 + D)/(1 + y)."""
        spec = ClassSpec(graph_class=GraphClass.K33, track_edges=True)
        tower = MinorFreeTower.from_spec(spec, 6)
        lhs, rhs = tower.edge_derivative_identity()
        assert lhs.equals(rhs)

    def test_network_equation(self):
        """D solves its defining equation exactly."""
        spec = ClassSpec(graph_class=GraphClass.K33, track_edges=True)
        tower = MinorFreeTower.from_spec(spec, 6)
        assert tower.network_residual().is_zero()

    def test_printed_numerator_reading_fails(self):
        """Reading the first beta_2 log argument with wz leaves log constants behind."""
        tower = MinorFreeTower(GraphClass.K33, 5, numerator_reading="printed")
        with pytest.raises(BadConstantTerm):
            tower.build_B()

    def test_two_connected_starts_at_x2(self):
        """B = x^2 y/2 + ..."""
        B = MinorFreeTower(GraphClass.K33, 4).build_B()
        assert B.to_fractions()[:3] == [0, 0, Fraction(1, 2)]

    def test_M_of_has_no_small_terms(self):
        """3-connected maps need at least four vertices: x^4 is the first term."""
        tower = MinorFreeTower(GraphClass.K33, 5)
        one = TruncatedSeries.constant(tower.ring, 1, 5)
        assert tower.M_of(one).valuation() == 4

    def test_maximal_has_no_tower(self):
        """The maximal class is handled by its own pipeline."""
        with pytest.raises(ConfigError):
            MinorFreeTower(GraphClass.MAXIMAL, 4)
