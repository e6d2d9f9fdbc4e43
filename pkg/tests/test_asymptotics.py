"""Tests for singularities and asymptotic constants."""

import pytest
from mpmath import mp

from k33_enum.asymptotics import (
    branch_check,
    branch_monotonicity,
    empirical_ratio,
    limit_law,
    maximal_closed_form,
    solve_maximal_singularity,
    solve_tower_singularity,
    subexponential_constants,
)
from k33_enum.errors import ConfigError, ExpansionError
from k33_enum.maximal import MaximalPipeline
from k33_enum.minorfree import MinorFreeTower
from k33_enum.schemas import Connectivity, GraphClass, Statistic


def approx(value, expected: str, rel: str = "1e-5") -> bool:
    expected = mp.mpf(expected)
    return abs(value - expected) <= mp.mpf(rel) * abs(expected)


@pytest.fixture(scope="module")
def maximal():
    return solve_maximal_singularity(256)


@pytest.fixture(scope="module")
def maximal_loose():
    return solve_maximal_singularity(256, with_k5_minus_edge=True)


@pytest.fixture(scope="module")
def k33():
    return solve_tower_singularity(GraphClass.K33, precision_bits=256)


class TestMaximalClosedForm:
    """Closed-form expansion with five-vertex triangulations among the pieces."""

    @pytest.fixture(scope="class")
    def closed(self):
        return maximal_closed_form(256)

    def test_singular_point(self, closed):
        """t = F(rho) = 1.0005216 and rho = 0.10530385."""
        assert approx(closed.t, "1.0005216", "1e-7")
        assert approx(closed.rho, "0.10530385", "1e-7")

    def test_rho_formula(self, closed):
        """rho = 27 / (256 t^3)."""
        with mp.workprec(256):
            assert mp.almosteq(closed.rho, mp.mpf(27) / (256 * closed.t**3))

    def test_closed_form_constant(self, closed):
        """The transfer of the closed-form A5 gives 0.25354e-3."""
        assert approx(closed.a, "0.25354e-3", "5e-5")

    def test_printed_reading_differs(self, closed):
        """Dividing by 8 pi instead of 8 sqrt(pi) is off by sqrt(pi)."""
        with mp.workprec(256):
            assert mp.almosteq(closed.a / closed.a_printed, mp.sqrt(mp.pi))


class TestMaximalSingularity:
    """Constants of the maximal class from the local expansion of A."""

    def test_matches_closed_form_with_same_pieces(self, maximal_loose):
        """With K5 minus an edge kept, t, rho, A0 and A2 agree with the closed form."""
        closed = maximal_loose.closed_form
        with mp.workprec(256):
            assert abs(maximal_loose.t - closed.t) < mp.mpf("1e-40")
            assert mp.almosteq(maximal_loose.rho, closed.rho, rel_eps=mp.mpf("1e-40"))
            assert mp.almosteq(maximal_loose.A[0], closed.A0, rel_eps=mp.mpf("1e-20"))
            assert mp.almosteq(maximal_loose.A[2], closed.A2, rel_eps=mp.mpf("1e-10"))
        assert approx(maximal_loose.gamma, "9.49629")

    def test_odd_terms_vanish(self, maximal):
        """A has no X and no X^3 term."""
        scale = abs(maximal.A[0])
        assert abs(maximal.A[1]) < mp.mpf("1e-8") * scale
        assert abs(maximal.A[3]) < mp.mpf("1e-8") * scale

    def test_subexponential_constant(self, maximal, maximal_loose):
        """a is about 0.4057e-4, 4/25 of the closed-form transfer."""
        assert approx(maximal.a, "0.4057e-4", "2e-2")
        assert approx(maximal_loose.a, "0.4057e-4", "2e-2")
        ratio = maximal_loose.a / maximal_loose.closed_form.a
        assert approx(ratio, "0.16", "2e-2")
        assert subexponential_constants(maximal) == {"alpha_maximal": maximal.a}

    def test_excluding_five_vertex_pieces_moves_rho(self, maximal, maximal_loose):
        """Dropping (3/2) s0^3 from H0 gives t = 1.000514 and a slightly larger rho."""
        assert approx(maximal.t, "1.000514", "2e-6")
        with mp.workprec(256):
            assert mp.almosteq(maximal.rho, mp.mpf(27) / (256 * maximal.t**3))
            shift = (maximal_loose.gamma - maximal.gamma) / maximal_loose.gamma
        assert 1e-5 < shift < 4e-5

    def test_branch_check(self, maximal):
        """dPhi/dF at (rho, t, 1/4) is about -0.9939."""
        assert approx(branch_check(maximal), "-0.9939", "1e-3")

    def test_branch_monotone(self, maximal):
        assert branch_monotonicity(maximal.rho, maximal.t)

class TestTowerSingularity:
    """Growth constants of the K33-free towers."""

    def test_k33(self, k33):
        """1/rho = 27.22935 and 1/R = 26.18659."""
        assert abs(k33.rho_inv - mp.mpf("27.22935")) < mp.mpf("1e-5")
        assert abs(k33.R_inv - mp.mpf("26.18659")) < mp.mpf("1e-5")
        assert k33.source == "appendix"

    def test_t_star(self, k33):
        assert approx(k33.t_star, "0.6263", "1e-3")

    def test_planar_regression(self):
        """q = 0 gives the planar constants 1/rho = 27.22688 and 1/R = 26.18411."""
        data = solve_tower_singularity(GraphClass.K33, q=0, expansion=False)
        assert abs(data.rho_inv - mp.mpf("27.22688")) < mp.mpf("1e-5")
        assert abs(data.R_inv - mp.mpf("26.18411")) < mp.mpf("1e-5")

    def test_planar_needs_direct_k5_term(self):
        """Without the q term of B the planar growth constant is missed by about 4e-5."""
        data = solve_tower_singularity(GraphClass.K33, q=0, expansion=False, q_in_h_only=True)
        assert abs(data.rho_inv - mp.mpf("27.22688")) > mp.mpf("2e-5")
        assert abs(data.R_inv - mp.mpf("26.18411")) < mp.mpf("1e-5")

    def test_k33plus(self):
        """1/rho = 27.22948 and 1/R = 26.18672."""
        data = solve_tower_singularity(GraphClass.K33PLUS, expansion=False)
        assert abs(data.rho_inv - mp.mpf("27.22948")) < mp.mpf("1e-5")
        assert abs(data.R_inv - mp.mpf("26.18672")) < mp.mpf("1e-5")

    def test_growth_ordering(self, k33):
        """Removing K5 blocks lowers the growth; rho < R."""
        planar = solve_tower_singularity(GraphClass.K33, q=0, expansion=False)
        assert planar.rho_inv < k33.rho_inv
        assert k33.rho < k33.R

    def test_subexponential_constants(self, k33):
        """alpha_g, alpha_c and alpha_b of the K33-free class."""
        alphas = subexponential_constants(k33)
        assert approx(alphas["alpha_all"], "0.42643e-5", "1e-4")
        assert approx(alphas["alpha_connected"], "0.41076e-5", "1e-4")
        assert approx(alphas["alpha_biconnected"], "0.37074e-5", "1e-4")

    def test_constants_need_expansion(self):
        """Without the expansion there is no X^5 coefficient."""
        data = solve_tower_singularity(GraphClass.K33, expansion=False)
        with pytest.raises(ExpansionError):
            subexponential_constants(data)


class TestLimitLaws:
    """Mean and variance slopes of the normal limit laws."""

    def test_edges(self):
        """Edges: kappa = 2.21338, lambda = 0.43044."""
        law = limit_law(Statistic.EDGES)
        assert approx(law.kappa, "2.21338", "1e-4")
        assert approx(law.lam, "0.43044", "1e-4")

    def test_k5_blocks(self):
        """K5 blocks: kappa = 0.909399e-4, lambda = 0.90951e-4."""
        law = limit_law(Statistic.K5_COUNT)
        assert approx(law.kappa, "0.909399e-4", "1e-5")
        assert approx(law.lam, "0.90951e-4", "1e-4")

    def test_k5_blocks_marker_in_h_only(self):
        """Dropping the q shift of B0 and B2 raises kappa to 0.92391e-4."""
        law = limit_law(Statistic.K5_COUNT, q_in_h_only=True)
        assert approx(law.kappa, "0.92391e-4", "1e-3")

    def test_k5_not_tracked_for_plus(self):
        with pytest.raises(ConfigError):
            limit_law(Statistic.K5_COUNT, GraphClass.K33PLUS)


@pytest.fixture(scope="module")
def tower_counts():
    tower = MinorFreeTower(GraphClass.K33, 60).run()
    return {connectivity: tower.counts(connectivity) for connectivity in Connectivity}


class TestEmpiricalRatio:
    """Exact counts against the asymptotic estimate."""

    def test_exact_asymptotic_gives_one(self):
        """A count equal to alpha Gamma(n - 5/2) rho^(-n) has ratio 1."""
        with mp.workprec(128):
            alpha, rho, n = mp.mpf("0.5"), mp.mpf("0.25"), 10
            count = alpha * mp.gamma(n - mp.mpf(5) / 2) * rho ** (-n)
            assert mp.almosteq(empirical_ratio(mp.nint(count), n, alpha, rho), 1, rel_eps=1e-6)

    def test_leading_form_gives_one(self):
        """With leading=True the estimate is alpha n^(-7/2) rho^(-n) n!."""
        with mp.workprec(128):
            alpha, rho, n = mp.mpf("0.5"), mp.mpf("0.25"), 10
            count = alpha * mp.mpf(n) ** (-mp.mpf(7) / 2) * rho ** (-n) * mp.factorial(n)
            ratio = empirical_ratio(mp.nint(count), n, alpha, rho, leading=True)
            assert mp.almosteq(ratio, 1, rel_eps=1e-6)

    def test_leading_form_overshoots_at_forty(self, k33, tower_counts):
        """The n^(-7/2) form is short by about 35/(8n), enough to leave the band at n = 40."""
        alpha = subexponential_constants(k33)["alpha_all"]
        g = tower_counts[Connectivity.ALL]
        with mp.workprec(256):
            leading = empirical_ratio(g[40], 40, alpha, k33.rho, leading=True)
            refined = empirical_ratio(g[40], 40, alpha, k33.rho)
        assert leading > 1.2
        assert 1.1 < leading / refined < 1.13

    @pytest.mark.parametrize(
        "connectivity, alpha_key",
        [
            (Connectivity.ALL, "alpha_all"),
            (Connectivity.CONNECTED, "alpha_connected"),
            (Connectivity.BICONNECTED, "alpha_biconnected"),
        ],
    )
    def test_tower_counts_approach_estimate(self, k33, tower_counts, connectivity, alpha_key):
        """g_n, c_n (growth 1/rho) and b_n (growth 1/R) are near the estimate and improve."""
        alpha = subexponential_constants(k33)[alpha_key]
        singularity = k33.R if connectivity == Connectivity.BICONNECTED else k33.rho
        counts = tower_counts[connectivity]
        with mp.workprec(256):
            r40 = empirical_ratio(counts[40], 40, alpha, singularity)
            r60 = empirical_ratio(counts[60], 60, alpha, singularity)
        assert 0.8 <= r40 <= 1.2
        assert 0.8 <= r60 <= 1.2
        assert abs(r60 - 1) < abs(r40 - 1)

    @pytest.mark.parametrize("with_k5_minus_edge", [False, True])
    def test_maximal_counts_approach_estimate(self, with_k5_minus_edge):
        """m_n against a Gamma(n - 5/2) rho^(-n) for matching pieces."""
        counts = MaximalPipeline(60, with_k5_minus_edge=with_k5_minus_edge).counts()
        data = solve_maximal_singularity(256, with_k5_minus_edge=with_k5_minus_edge)
        with mp.workprec(256):
            r40 = empirical_ratio(counts[40], 40, data.a, data.rho)
            r60 = empirical_ratio(counts[60], 60, data.a, data.rho)
        assert 0.8 <= r40 <= 1.2
        assert 0.8 <= r60 <= 1.2
        assert abs(r60 - 1) < abs(r40 - 1)


class TestPrecisionStability:
    """Doubling the working precision leaves the first 10 digits alone."""

    @staticmethod
    def agree(a, b) -> bool:
        with mp.workprec(512):
            return abs(a - b) <= mp.mpf("1e-10") * abs(b)

    def test_maximal(self, maximal):
        finer = solve_maximal_singularity(512)
        assert self.agree(maximal.t, finer.t)
        assert self.agree(maximal.rho, finer.rho)
        assert self.agree(maximal.a, finer.a)
        assert self.agree(maximal.closed_form.a, finer.closed_form.a)

    @pytest.mark.parametrize("graph_class", [GraphClass.K33, GraphClass.K33PLUS])
    def test_tower_constants(self, graph_class):
        """rho_inv, R_inv and the three alpha constants."""
        coarse = solve_tower_singularity(graph_class, precision_bits=256)
        fine = solve_tower_singularity(graph_class, precision_bits=512)
        assert self.agree(coarse.rho_inv, fine.rho_inv)
        assert self.agree(coarse.R_inv, fine.R_inv)
        coarse_alphas = subexponential_constants(coarse)
        fine_alphas = subexponential_constants(fine)
        for key, value in fine_alphas.items():
            assert self.agree(coarse_alphas[key], value), key

    @pytest.mark.parametrize(
        "stat, graph_class",
        [
            (Statistic.EDGES, GraphClass.K33),
            (Statistic.K5_COUNT, GraphClass.K33),
            (Statistic.EDGES, GraphClass.K33PLUS),
        ],
    )
    def test_limit_laws(self, stat, graph_class):
        """kappa and lambda."""
        coarse = limit_law(stat, graph_class, 256)
        fine = limit_law(stat, graph_class, 512)
        assert self.agree(coarse.kappa, fine.kappa)
        assert self.agree(coarse.lam, fine.lam)
