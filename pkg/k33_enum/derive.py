"""Symbolic corrections and numerical local expansions at the singular curve.

The closed forms in appendix.py cover K33 at q = 1. Other cases differ by the
extra terms E_D (in the network equation) and E_B (in the 2-connected
series); their effect on h, B0 and B2 is derived here with sympy. The
remaining coefficients come from a high-precision Taylor expansion along
the level curve of y through the singular point of the map system.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import sympy
from mpmath import mp

from .errors import ExpansionError, NoConvergence
from .schemas import GraphClass
from .utils import get_logger

logger = get_logger()

t_sym, q_sym, x_sym, z_sym = sympy.symbols("t q x z")
ZETA = -((t_sym - 1) ** 3) * (3 * t_sym + 1) / (16 * t_sym**3)
D0 = -3 * t_sym**2 / ((3 * t_sym + 1) * (t_sym - 1))


def parametrization_residual() -> sympy.Expr:
    """lambda(1 - lambda)^3 - x xi^3 for the polynomial parametrization; cancels to 0."""
    lam = -(t_sym**3) / x_sym**2
    xi = -(t_sym**4 + x_sym**2 * t_sym) / x_sym**3
    return sympy.cancel(lam * (1 - lam) ** 3 - x_sym * xi**3)


def extra_terms(graph_class: GraphClass) -> tuple[sympy.Expr, sympy.Expr]:
    """(E_D, E_B): additions to the network equation and to B relative to K33 at q = 1."""
    e_d = (q_sym - 1) * x_sym**3 * z_sym**9 / 6
    e_b = (q_sym - 1) * x_sym**5 * z_sym**10 / 120
    if graph_class == GraphClass.K33PLUS:
        e_d += x_sym**4 * z_sym**8 / 4
        e_b += x_sym**6 * z_sym**9 / 72
    return e_d, e_b


@lru_cache(maxsize=None)
def correction_expressions(graph_class: GraphClass) -> dict[str, sympy.Expr]:
    """Closed forms of the shifts in h, B0 and B2 as rational functions of (t, q)."""
    e_d, e_b = extra_terms(graph_class)
    at_point = {x_sym: ZETA, z_sym: D0}
    delta_h = e_d.subs(at_point)
    weight = ZETA**2 * (1 + D0)
    delta_b0 = -weight / 2 * delta_h + e_b.subs(at_point)
    delta_b2 = weight * delta_h - ZETA * sympy.diff(e_b, x_sym).subs(at_point)
    return {
        name: sympy.factor(sympy.cancel(expr))
        for name, expr in (("h", delta_h), ("B0", delta_b0), ("B2", delta_b2))
    }


@dataclass(frozen=True)
class TowerCorrections:
    delta_h: Callable
    delta_B0: Callable
    delta_B2: Callable


@lru_cache(maxsize=None)
def tower_corrections(graph_class: GraphClass) -> TowerCorrections:
    exprs = correction_expressions(graph_class)

    def compile_(expr):
        return sympy.lambdify((t_sym, q_sym), expr, modules="mpmath")

    logger.debug(f"Compiled tower corrections for {graph_class.value}")
    return TowerCorrections(
        delta_h=compile_(exprs["h"]),
        delta_B0=compile_(exprs["B0"]),
        delta_B2=compile_(exprs["B2"]),
    )


# numeric model of the tower in map coordinates (u, v) = (U, V)


def map_point(u, v):
    """(x, z) with U = u, V = v solving U = xz(1 + V)^2, V = z(1 + U)^2."""
    z = v / (1 + u) ** 2
    x = u / (z * (1 + v) ** 2)
    return x, z


def singular_point(t):
    """(U0, V0) on the branch curve of the map system."""
    t = mp.mpf(t)
    return 1 / (3 * t), (3 * t + 1) / (3 * (1 - t))


def network_exponent(x, z, u, v, q, graph_class: GraphClass):
    stuff = 1 / (1 + x * z) + 1 / (1 + z) - 1 - (1 + u) ** 2 * (1 + v) ** 2 / (1 + u + v) ** 3
    psi = z * stuff / 2 + q * x**3 * z**9 / 6 + x * z**2 / (1 + x * z)
    if graph_class == GraphClass.K33PLUS:
        psi += x**4 * z**8 / 4
    return psi


def log_gap(u, v, q, graph_class: GraphClass):
    """log(1 + y) as a function of the map coordinates."""
    x, z = map_point(u, v)
    return mp.log(1 + z) - network_exponent(x, z, u, v, q, graph_class)


def singular_y(t, q=1, graph_class: GraphClass = GraphClass.K33):
    u0, v0 = singular_point(t)
    return mp.exp(log_gap(u0, v0, q, graph_class)) - 1


def two_connected_value(x, y, z, w, q, graph_class: GraphClass):
    """B(x, y) evaluated from x, y and the composed values z = D, w = W."""
    log1y, log1z = mp.log(1 + y), mp.log(1 + z)
    x2_beta1 = (
        x * z * (6 * x - 2 + x * z) / 4
        + x**2 * (1 + z) * (log1y - log1z)
        - x**2 * log1z / 2
        + mp.log(1 + x * z) / 2
    )
    t1 = (2 * (1 + x) * (1 + w) * (z + w**2) + 3 * (w - z)) / (2 * (1 + w) ** 2)
    numerator = 1 - x + x * z - x * w + x * w**2
    denominator = (1 - x) * (z + w**2 + 1 + w)
    x_beta2 = (
        x * t1
        - mp.log(1 + x * (z + w + w**2)) / 2
        + (1 - 4 * x) / 2 * mp.log(1 + w)
        + (1 - 4 * x + 2 * x**2) / 4 * (mp.log(numerator) - mp.log(denominator))
    )
    value = x2_beta1 / 2 - x_beta2 / 4 + q * x**5 * z**10 / 120
    if graph_class == GraphClass.K33PLUS:
        value += x**6 * z**9 / 72
    return value


# small series helpers on mpmath coefficient lists


def _mul(a, b, n):
    out = [mp.zero] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        for j, bj in enumerate(b[: n + 1 - i]):
            out[i + j] += ai * bj
    return out


def _compose(outer, inner, n):
    """outer(inner(X)) to X^n; inner has zero constant term."""
    result = [mp.zero] * (n + 1)
    for c in reversed(outer[: n + 1]):
        result = _mul(result, inner, n)
        result[0] += c
    return result


def _sqrt1p(c, n):
    """sqrt(1 + c) with c[0] = 0."""
    r = [mp.one] + [mp.zero] * n
    for k in range(1, n + 1):
        acc = c[k] if k < len(c) else mp.zero
        acc -= sum(r[i] * r[k - i] for i in range(1, k))
        r[k] = acc / 2
    return r


def _revert(g, n):
    """Compositional inverse of g with g[0] = 0 and g[1] != 0."""
    sigma = [mp.zero, 1 / g[1]] + [mp.zero] * (n - 1)
    for k in range(2, n + 1):
        sigma[k] = -_compose(g, sigma, k)[k] / g[1]
    return sigma


def _invert_level(xs, order):
    """
    (R, sigma, stationarity) for a stationary maximum x(s) with Taylor coefficients xs.

    1 - x/R = a2 s^2 + ... is written as X^2 and reverted to s = sigma(X),
    with sigma[1] < 0 so that X > 0 lies before the maximum.
    """
    R = xs[0]
    a = [mp.zero] + [-xk / R for xk in xs[1:]]
    tolerance = mp.mpf(2) ** (-mp.prec // 2)
    if abs(a[1]) > tolerance:
        raise ExpansionError(f"x is not stationary at the singular point (a1 = {mp.nstr(a[1], 5)})")
    if a[2] <= 0:
        raise ExpansionError("x has no maximum along the level curve")

    n = order - 1
    c = [mp.zero] + [a[k + 2] / a[2] for k in range(1, order - 1)]
    root = _sqrt1p(c, n - 1)
    g = [mp.zero] + [mp.sqrt(a[2]) * r for r in root]
    sigma = _revert(g, n)
    if sigma[1] > 0:
        sigma = [(-1) ** k * s for k, s in enumerate(sigma)]
    return R, sigma, abs(a[1])


@dataclass
class LocalExpansion:
    """Coefficients in X = sqrt(1 - x/R) at fixed y along the singular curve."""

    t: object
    y: object
    R: object
    U: list
    D: list
    B: list
    stationarity: object


def local_expansion(
    t, q=1, graph_class: GraphClass = GraphClass.K33, order: int = 6
) -> LocalExpansion:
    """
    Expand U, D and B in X at the singular point parametrized by t.

    The level curve of y through (U0, V0) is followed as V(s) with
    U = U0 + s; x(s) is stationary at s = 0 and 1 - x/R = a2 s^2 + ...,
    which is reverted to s(X) and composed.
    """
    if order < 2:
        raise ExpansionError("local expansion needs order >= 2")
    t = mp.mpf(t)
    q = mp.mpf(q)
    u0, v0 = singular_point(t)
    gap0 = log_gap(u0, v0, q, graph_class)
    y = mp.exp(gap0) - 1
    cache: dict = {}

    def v_of(s):
        key = (s, mp.prec)
        if key not in cache:
            try:
                cache[key] = mp.findroot(
                    lambda v: log_gap(u0 + s, v, q, graph_class) - gap0, v0
                )
            except ValueError as e:
                raise NoConvergence(f"level curve lost at s = {mp.nstr(s, 8)}: {e}") from e
        return cache[key]

    def x_of(s):
        return map_point(u0 + s, v_of(s))[0]

    def z_of(s):
        return map_point(u0 + s, v_of(s))[1]

    def b_of(s):
        u = u0 + s
        x, z = map_point(u, v_of(s))
        return two_connected_value(x, y, z, z * (1 + u), q, graph_class)

    xs = mp.taylor(x_of, 0, order, chop=False)
    zs = mp.taylor(z_of, 0, order, chop=False)
    bs = mp.taylor(b_of, 0, order, chop=False)

    R, sigma, stationarity = _invert_level(xs, order)
    n = order - 1
    U = [u0] + sigma[1:]
    D = _compose(zs, sigma, n)
    B = _compose(bs, sigma, n)
    logger.debug(f"Local expansion at t={mp.nstr(t, 10)}: R={mp.nstr(R, 12)}")
    return LocalExpansion(t=t, y=y, R=R, U=U, D=D, B=B, stationarity=stationarity)


# maximal graphs, parametrized by L = theta(x F^3) = 1/4 + l


@dataclass
class MaximalLocalExpansion:
    """Coefficients of A in X = sqrt(1 - x/rho) at y = 1."""

    rho: object
    t: object
    A: list
    stationarity: object


def maximal_local_expansion(
    with_k5_minus_edge: bool = False, order: int = 6
) -> MaximalLocalExpansion:
    """
    Expand A(x, 1) at its dominant singularity.

    Along L the edge-rooted system is explicit: s = x F^3 = L(1 - L)^3,
    H = (s + L(1 - 2L)) / 2 and log F = s^3 (1 + H/F)^9 / 6, so x = s / F^3
    is stationary at L = 1/4 and the same reversion as for the tower applies.
    """
    if order < 2:
        raise ExpansionError("local expansion needs order >= 2")
    quarter = mp.mpf(1) / 4
    cache: dict = {}

    def state(l):
        key = (l, mp.prec)
        if key not in cache:
            L = quarter + l
            s = L * (1 - L) ** 3
            H = (s + L * (1 - 2 * L)) / 2
            if not with_k5_minus_edge:
                H -= 3 * s**3 / 2
            try:
                F = mp.findroot(lambda f: mp.log(f) - s**3 * (1 + H / f) ** 9 / 6, mp.one)
            except ValueError as e:
                raise NoConvergence(f"edge-rooted series lost at l = {mp.nstr(l, 8)}: {e}") from e
            cache[key] = (L, s, H, F)
        return cache[key]

    def x_of(l):
        _, s, _, F = state(l)
        return s / F**3

    def a_of(l):
        L, s, H, F = state(l)
        x = s / F**3
        inner = (
            27 * (H + F) * mp.log(F) + 10 * L + 20 * L**2 + 15 * mp.log(1 - L) - 30 * F - 5 * s
        )
        value = -(x**2) * inner / 60
        if not with_k5_minus_edge:
            value -= x**2 * s**3 / 12
        return value

    xs = mp.taylor(x_of, 0, order, chop=False)
    a_series = mp.taylor(a_of, 0, order, chop=False)
    rho, sigma, stationarity = _invert_level(xs, order)
    A = _compose(a_series, sigma, order - 1)
    t = state(mp.zero)[3]
    logger.debug(f"Maximal local expansion: t={mp.nstr(t, 12)} rho={mp.nstr(rho, 12)}")
    return MaximalLocalExpansion(rho=rho, t=t, A=A, stationarity=stationarity)


def b2_from_rooting(t, b0: Callable, h: Callable):
    """
    B2 recovered from B0(t) and h(t) through dB/dy = (x^2/2)(1 + D)/(1 + y).

    At x = R(y) this gives B2 = (R / R')(R^2 (1 + D0) y' / (2(1 + y)) - B0'),
    with every derivative taken along t.
    """
    t = mp.mpf(t)

    def zeta(s):
        return -((s - 1) ** 3) * (3 * s + 1) / (16 * s**3)

    def log1y(s):
        return mp.log(-(2 * s + 1) / ((3 * s + 1) * (s - 1))) - h(s)

    d0 = -3 * t**2 / ((3 * t + 1) * (t - 1))
    R = zeta(t)
    dR = mp.diff(zeta, t)
    return R / dR * (R**2 * (1 + d0) / 2 * mp.diff(log1y, t) - mp.diff(b0, t))
