"""High-precision singularities, singular expansions and limit-law constants."""

from dataclasses import dataclass, field
from itertools import product

from mpmath import mp

from . import appendix
from .derive import local_expansion, maximal_local_expansion, tower_corrections
from .errors import (
    AmbiguousRoot,
    ConfigError,
    ExpansionError,
    NoConvergence,
    NoRootInBracket,
    NumericError,
)
from .schemas import DEFAULT_PRECISION, GraphClass, Statistic
from .utils import get_logger

logger = get_logger()

SCAN_POINTS = 400


def _transfer(coefficient):
    """Constant of n^(-7/2) rho^(-n) for a coefficient of X^5 = (1 - x/rho)^(5/2)."""
    return coefficient / mp.gamma(-mp.mpf(5) / 2)


def _residual_tolerance():
    return mp.mpf(2) ** (-mp.prec // 2)


# maximal graphs

PIECE_SIZE = mp.mpf(27) / 256
PIECE_H = mp.mpf(59) / 512


@dataclass
class MaximalClosedForm:
    """Closed-form expansion of A at rho, written for pieces that include K5 minus an edge."""

    t: object
    rho: object
    M: object
    Q: object
    F2: object
    F3: object
    C: object
    A0: object
    A2: object
    A4: object
    A5: object
    a: object
    a_printed: object


@dataclass
class MaximalSingularData:
    t: object
    rho: object
    gamma: object
    A: list
    a: object
    with_k5_minus_edge: bool
    closed_form: MaximalClosedForm
    precision_bits: int


def _maximal_t(h0):
    """Root of t = exp(s0^3 (1 + h0/t)^9 / 6) near 1, with s0 = 27/256."""
    c = PIECE_SIZE**3 / 6

    def f(t):
        return t - mp.exp(c * (1 + h0 / t) ** 9)

    def df(t):
        inner = 1 + h0 / t
        return 1 + mp.exp(c * inner**9) * c * 9 * inner**8 * h0 / t**2

    try:
        t = mp.findroot(f, mp.one, solver="newton", df=df)
    except ValueError as e:
        raise NoConvergence(f"maximal singularity: {e}") from e
    if abs(f(t)) > _residual_tolerance():
        raise NoConvergence(f"maximal singularity residual {mp.nstr(f(t), 5)}")
    return t


def maximal_closed_form(precision_bits: int = DEFAULT_PRECISION) -> MaximalClosedForm:
    """t = F(rho), rho = 27/(256 t^3) and the closed-form coefficients A0, A2, A4, A5."""
    with mp.workprec(precision_bits):
        t = _maximal_t(PIECE_H)
        rho = PIECE_SIZE / t**3

        log_t = mp.log(t)
        M = 531 * log_t + 512 * t + 59
        Q = 9 * (225 + 512 * t) * log_t - 512 * t - 59
        if Q >= 0 or M <= 0:
            raise NumericError("unexpected signs in the singular expansion of F")
        F2 = 12 * t * (128 * t + 71) * log_t / Q
        F3 = 96 * mp.sqrt(6) * t * log_t * M ** mp.mpf(1.5) / abs(Q) ** mp.mpf(2.5)

        C = mp.mpf(3) ** 5 / mp.mpf(2) ** 25
        log34 = mp.log(mp.mpf(3) / 4)
        A0 = -3 * C / (20 * t**6) * (4608 * log_t * t + 531 * log_t + 2560 * log34 - 5120 * t + 550)
        A2 = C / (4 * t**6) * (4608 * log_t * t + 531 * log_t + 3072 * log34 - 6144 * t + 542)
        A4 = (
            3
            * C
            / t**6
            * (
                16 / Q * log_t * (128 * t + 71) ** 2
                + 59 * log_t
                + 2**9 * (log_t * t - 2 * t + log34)
                + 26
            )
        )
        A5 = -40 * mp.sqrt(6) * C / (3 * t**6) * (M / abs(Q)) ** mp.mpf(2.5)
        return MaximalClosedForm(
            t=t, rho=rho, M=M, Q=Q, F2=F2, F3=F3, C=C,
            A0=A0, A2=A2, A4=A4, A5=A5,
            a=_transfer(A5), a_printed=-15 * A5 / (8 * mp.pi),
        )  # fmt: skip


def solve_maximal_singularity(
    precision_bits: int = DEFAULT_PRECISION, with_k5_minus_edge: bool = False
) -> MaximalSingularData:
    """
    Singularity and X^5 constant of A(x, 1).

    Without five-vertex triangulations among the pieces the singular value of
    H drops by (3/2) s0^3, which moves t and rho slightly. The constant a is
    taken from the local expansion of A; the closed form is kept alongside.
    """
    with mp.workprec(precision_bits):
        closed = maximal_closed_form(precision_bits)
        h0 = PIECE_H if with_k5_minus_edge else PIECE_H - 3 * PIECE_SIZE**3 / 2
        t = _maximal_t(h0)
        rho = PIECE_SIZE / t**3

        local = maximal_local_expansion(with_k5_minus_edge)
        if abs(local.t - t) > _residual_tolerance():
            raise NoConvergence(
                f"local expansion sits at t={mp.nstr(local.t, 12)}, expected {mp.nstr(t, 12)}"
            )
        a = _transfer(local.A[5])

        logger.info(f"Maximal singularity t={mp.nstr(t, 12)} rho={mp.nstr(rho, 12)}")
        logger.warning(
            f"Subexponential constant: local expansion gives {mp.nstr(a, 8)}, "
            f"closed form {mp.nstr(closed.a, 8)}, "
            f"-15 A5/(8 pi) reading {mp.nstr(closed.a_printed, 8)}"
        )
        return MaximalSingularData(
            t=t, rho=rho, gamma=1 / rho, A=local.A, a=a,
            with_k5_minus_edge=with_k5_minus_edge, closed_form=closed,
            precision_bits=precision_bits,
        )  # fmt: skip


def branch_derivative(x, F, L):
    """dPhi/dF along the solution, as a function of independent x, F and L."""
    return (
        mp.mpf(3)
        / 1024
        * (-3 * L**2 + 3 * L + 2 * F + 3 * x * F**3)
        * x**3
        * (2 * F + x * F**3 + L - 2 * L**2) ** 8
        - 1
    )


def branch_check(data: MaximalSingularData):
    """dPhi/dF at (rho, t, 1/4); negative means no branch point before rho."""
    with mp.workprec(data.precision_bits):
        value = branch_derivative(data.rho, data.t, mp.mpf(1) / 4)
    if value >= 0:
        raise NumericError(f"branch check is {mp.nstr(value, 6)}, expected a negative value")
    return value


def branch_monotonicity(rho, t) -> bool:
    """dPhi/dF is nondecreasing in each of x, F and L on a small grid."""
    xs = [rho / 4, rho / 2, rho]
    Fs = [mp.one, t, mp.mpf(11) / 10]
    Ls = [mp.zero, mp.mpf(1) / 8, mp.mpf(1) / 4]
    grid = {p: branch_derivative(*p) for p in product(xs, Fs, Ls)}
    for (i, x), (j, F), (k, L) in product(enumerate(xs), enumerate(Fs), enumerate(Ls)):
        here = grid[(x, F, L)]
        if i + 1 < len(xs) and grid[(xs[i + 1], F, L)] < here:
            return False
        if j + 1 < len(Fs) and grid[(x, Fs[j + 1], L)] < here:
            return False
        if k + 1 < len(Ls) and grid[(x, F, Ls[k + 1])] < here:
            return False
    return True


# connectivity tower


def tower_h(t, q, graph_class: GraphClass):
    """h(t) with the K5 marker and the class-dependent extra terms."""
    return appendix.h_direct(t, 1) + tower_corrections(graph_class).delta_h(t, q)


def tower_Y(t, q, graph_class: GraphClass):
    return appendix.Y_direct(t, h=tower_h(t, q, graph_class))


def _t_lower():
    """t in (1/3, 1) with zeta(t) = 27/256."""
    target = mp.mpf(27) / 256
    return mp.findroot(
        lambda s: appendix.zeta_direct(s) - target, (mp.mpf(1) / 3, mp.one), solver="anderson"
    )


def solve_singular_t(y, q, graph_class: GraphClass):
    """The unique t in (t_lo, 1) with Y(t) = y."""
    lo = _t_lower()
    width = 1 - lo
    grid = [lo + width * k / SCAN_POINTS for k in range(1, SCAN_POINTS)]
    values = [tower_Y(s, q, graph_class) - y for s in grid]
    brackets = [
        (grid[k], grid[k + 1]) for k in range(len(grid) - 1) if values[k] * values[k + 1] <= 0
    ]
    if not brackets:
        raise NoRootInBracket(f"Y(t) = {mp.nstr(y, 8)} has no root in ({mp.nstr(lo, 8)}, 1)")
    if len(brackets) > 1:
        raise AmbiguousRoot(f"Y(t) = {mp.nstr(y, 8)} has {len(brackets)} roots in the scan")
    try:
        t = mp.findroot(lambda s: tower_Y(s, q, graph_class) - y, brackets[0], solver="anderson")
    except ValueError as e:
        raise NoConvergence(f"tower singularity: {e}") from e
    if abs(tower_Y(t, q, graph_class) - y) > _residual_tolerance():
        raise NoConvergence("tower singularity did not reach the residual tolerance")
    return t


@dataclass
class TowerSingularData:
    graph_class: GraphClass
    q: object
    y: object
    t_star: object
    R: object
    rho: object
    h: object
    B: list
    composite: appendix.CompositeCoefficients | None
    values: appendix.AppendixValues | None
    source: str
    precision_bits: int
    U: list = field(default_factory=list)
    D: list = field(default_factory=list)

    @property
    def R_inv(self):
        return 1 / self.R

    @property
    def rho_inv(self):
        return 1 / self.rho


def _low_order_coefficients(t, q, graph_class: GraphClass, q_in_h_only: bool = False):
    """
    B0 and B2 at t: closed-form values shifted by the derived corrections.

    The K5 marker shifts both, through h and through the term q x^5 z^10 / 120
    of B. With q_in_h_only B0 and B2 keep their q = 1 values and the marker
    acts on the singular curve only.
    """
    corrections = tower_corrections(graph_class)
    printed = appendix.direct(t, 1)
    q_b = 1 if q_in_h_only else q
    return (
        printed.B0 + corrections.delta_B0(t, q_b),
        printed.B2 + corrections.delta_B2(t, q_b),
    )


def tower_rho(graph_class: GraphClass, q=1, y=1, q_in_h_only: bool = False):
    """(R, rho) at the current precision: rho = R exp(B2 / R)."""
    t = solve_singular_t(y, q, graph_class)
    R = appendix.zeta_direct(t)
    _, B2 = _low_order_coefficients(t, q, graph_class, q_in_h_only)
    return R, R * mp.exp(B2 / R)


def solve_tower_singularity(
    graph_class: GraphClass,
    q=1,
    y=1,
    precision_bits: int = DEFAULT_PRECISION,
    expansion: bool = True,
    q_in_h_only: bool = False,
) -> TowerSingularData:
    """
    Singularities R (2-connected) and rho (connected, general) and the singular
    coefficients B_i, C_i, G_i.

    K33 at q = 1 uses the closed-form coefficients; every other case takes B4 and
    B5 from the local expansion along the singular curve.
    """
    with mp.workprec(precision_bits):
        q = mp.mpf(q)
        y = mp.mpf(y)
        t = solve_singular_t(y, q, graph_class)
        R = appendix.zeta_direct(t)
        B0, B2 = _low_order_coefficients(t, q, graph_class, q_in_h_only)
        rho = R * mp.exp(B2 / R)
        values = None
        U: list = []
        D: list = []
        composite = None
        source = "closed-form"
        B = [B0, mp.zero, B2, mp.zero]

        if expansion:
            printed_case = graph_class == GraphClass.K33 and q == 1
            if printed_case:
                values = appendix.evaluate(t, q)
                B = [values.B0, values.B1, values.B2, values.B3, values.B4, values.B5]
                U = [values.U0, values.U1, values.U2]
                D = [values.D0, values.D1, values.D2, values.D3]
                source = "appendix"
            else:
                local = local_expansion(t, q, graph_class)
                B = [B0, mp.zero, B2, mp.zero, local.B[4], local.B[5]]
                U = local.U[:3]
                D = local.D[:4]
                source = "local-expansion"
            composite = appendix.composite_coefficients(R, B[0], B[2], B[4], B[5])

        logger.info(
            f"{graph_class.value} q={mp.nstr(q, 6)} y={mp.nstr(y, 6)}: "
            f"t*={mp.nstr(t, 12)} 1/R={mp.nstr(1 / R, 10)} 1/rho={mp.nstr(1 / rho, 10)}"
        )
        return TowerSingularData(
            graph_class=graph_class, q=q, y=y, t_star=t, R=R, rho=rho,
            h=tower_h(t, q, graph_class), B=B, composite=composite, values=values,
            source=source, precision_bits=precision_bits, U=U, D=D,
        )  # fmt: skip


def subexponential_constants(data: TowerSingularData | MaximalSingularData) -> dict[str, object]:
    """alpha constants from the X^5 coefficients."""
    if isinstance(data, MaximalSingularData):
        return {"alpha_maximal": data.a}
    if data.composite is None:
        raise ExpansionError("singular coefficients were not expanded")
    with mp.workprec(data.precision_bits):
        return {
            "alpha_biconnected": _transfer(data.B[5]),
            "alpha_connected": _transfer(data.composite.C5),
            "alpha_all": _transfer(data.composite.G5),
        }


@dataclass
class LimitLawConstants:
    stat: Statistic
    kappa: object
    lam: object


def limit_law(
    stat: Statistic,
    graph_class: GraphClass = GraphClass.K33,
    precision_bits: int = DEFAULT_PRECISION,
    q_in_h_only: bool = False,
) -> LimitLawConstants:
    """Mean and variance slopes from rho as a function of the marker, by central differences."""
    if stat == Statistic.K5_COUNT and graph_class == GraphClass.K33PLUS:
        raise ConfigError("the K5 count is not tracked for K33PLUS")
    with mp.workprec(precision_bits):
        step = mp.mpf(2) ** (-precision_bits // 4)

        def rho_at(value):
            if stat == Statistic.EDGES:
                return tower_rho(graph_class, q=1, y=value, q_in_h_only=q_in_h_only)[1]
            return tower_rho(graph_class, q=value, y=1, q_in_h_only=q_in_h_only)[1]

        below, centre, above = (rho_at(1 - step), rho_at(mp.one), rho_at(1 + step))
        first = (above - below) / (2 * step) / centre
        second = (above - 2 * centre + below) / step**2 / centre
        kappa = -first
        lam = -second - first + first**2
        if lam <= 0:
            raise NumericError(f"variance slope {mp.nstr(lam, 6)} is not positive")
        logger.info(f"Limit law {stat.value}: kappa={mp.nstr(kappa, 10)} lambda={mp.nstr(lam, 10)}")
        return LimitLawConstants(stat=stat, kappa=kappa, lam=lam)


def empirical_ratio(count: int, n: int, alpha, rho, leading: bool = False):
    """
    count / (alpha Gamma(n - 5/2) rho^(-n)); tends to 1 as n grows.

    alpha Gamma(n - 5/2) rho^(-n) is n! [x^n] of alpha Gamma(-5/2) (1 - x/rho)^(5/2)
    exactly. With leading=True the estimate is alpha n^(-7/2) rho^(-n) n!,
    which is larger by about 35/(8n).
    """
    n_mp = mp.mpf(n)
    if leading:
        estimate = alpha * n_mp ** (-mp.mpf(7) / 2) * mp.factorial(n)
    else:
        estimate = alpha * mp.gamma(n_mp - mp.mpf(5) / 2)
    return mp.mpf(count) / (estimate * rho ** (-n_mp))
