"""Closed-form singular coefficients of the K33 tower, parametrized by t.

Every quantity is entered twice: once as a literal expression, once as an
integer coefficient table evaluated with ``mp.polyval``. The two readings
must agree at working precision before any value is used.

q enters only through h; B0 and B2 are the q = 1 values (see derive.py
for their q dependence).
"""

from dataclasses import dataclass, fields

from mpmath import mp

from .errors import NumericError
from .utils import get_logger

logger = get_logger()


@dataclass
class AppendixValues:
    t: object
    q: object
    h: object
    Y: object
    zeta: object
    Q: object
    K: object
    U0: object
    U1: object
    U2: object
    D0: object
    D1: object
    D2: object
    D3: object
    P1: object
    P2: object
    B0: object
    B1: object
    B2: object
    B3: object
    B4: object
    B5: object


@dataclass
class CompositeCoefficients:
    """Singular coefficients of C and G at the 2-connected singularity."""

    C0: object
    C1: object
    C2: object
    C3: object
    C4: object
    C5: object
    G0: object
    G1: object
    G2: object
    G3: object
    G4: object
    G5: object


def _require_positive(name: str, radicand) -> None:
    if radicand <= 0:
        raise NumericError(f"radicand of {name} is {mp.nstr(radicand, 8)}, not positive")


# first reading: literal expressions


def h_direct(t, q=1):
    t = mp.mpf(t)
    q = mp.mpf(q)
    return (
        t**2
        / (8192 * (3 * t + 1) ** 6 * (2 * t + 1) * (t + 3))
        * (
            13122 * q * t**9
            + 45927 * q * t**8
            - 1658880 * t**7
            + 19683 * q * t**7
            - 12496896 * t**6
            - 8847360 * t**5
            + 6832128 * t**4
            + 10399744 * t**3
            + 4739072 * t**2
            + 958464 * t
            + 73728
        )
    )


def Y_direct(t, q=1, h=None):
    t = mp.mpf(t)
    h = h_direct(t, q) if h is None else h
    return -(2 * t + 1) / ((3 * t + 1) * (t - 1)) * mp.exp(-h) - 1


def zeta_direct(t):
    t = mp.mpf(t)
    return -((t - 1) ** 3) * (3 * t + 1) / (16 * t**3)


def Q_direct(t):
    return (
        78732 * t**9
        - 1328940 * t**8
        - 26889705 * t**7
        - 153744066 * t**6
        - 415828997 * t**5
        - 522964992 * t**4
        - 342073344 * t**3
        - 121237504 * t**2
        - 22151168 * t
        - 1638400
    )


def K_direct(t):
    return (
        78732 * t**11
        + 472392 * t**10
        - 2668221 * t**9
        - 816345 * t**8
        + 92026557 * t**7
        + 562023429 * t**6
        + 1040556032 * t**5
        + 926367744 * t**4
        + 455663616 * t**3
        + 127336448 * t**2
        + 19005440 * t
        + 1179648
    )


def P1_direct(t):
    return (
        1549681956 * t**19
        - 60580022472 * t**18
        - 965388262815 * t**17
        - 2822075181459 * t**16
        - 63004687280883 * t**15
        - 1326793976317287 * t**14
        - 11608693177471470 * t**13
        - 55082955555464994 * t**12
        - 157459666865762304 * t**11
        - 279393068914421760 * t**10
        - 323288788914892800 * t**9
        - 254483996115259392 * t**8
        - 139939270751358976 * t**7
        - 54299625067175936 * t**6
        - 14753365577572352 * t**5
        - 2718756694392832 * t**4
        - 314310035243008 * t**3
        - 18285655490560 * t**2
        - 5905580032 * t
        + 40265318400
    )


def P2_direct(t):
    return (
        -472392 * t**12
        - 2991816 * t**11
        + 15064542 * t**10
        + 10234512 * t**9
        - 550526652 * t**8
        - 3556193688 * t**7
        - 7367383050 * t**6
        - 7639318528 * t**5
        - 4586717184 * t**4
        - 1675345920 * t**3
        - 368705536 * t**2
        - 45088768 * t
        - 2359296
    )


def direct(t, q=1) -> AppendixValues:
    """All appendix quantities at t from the literal expressions."""
    t = mp.mpf(t)
    q = mp.mpf(q)
    h = h_direct(t, q)
    Q = Q_direct(t)
    K = K_direct(t)
    P1 = P1_direct(t)
    P2 = P2_direct(t)

    u1_radicand = -mp.mpf(2) / 27 * (3 * t + 1) * K / (t**3 * (t + 1) * Q)
    _require_positive("U1", u1_radicand)
    U1 = -mp.sqrt(u1_radicand)
    U2 = (
        -((3 * t + 1) ** 2)
        / (54 * t**2 * (t + 1) ** 2 * Q**2)
        * (
            6198727824 * t**20
            + 180231719760 * t**19
            + 891036025560 * t**18
            - 12902936763600 * t**17
            - 197722264231071 * t**16
            - 1821396525148269 * t**15
            - 13816272361145022 * t**14
            - 79424397121737354 * t**13
            - 324711461744767867 * t**12
            - 931873748086896665 * t**11
            - 1881275802907541504 * t**10
            - 2713502925437276160 * t**9
            - 2843653010633469952 * t**8
            - 2190731661037666304 * t**7
            - 1246514524950953984 * t**6
            - 521994799964094464 * t**5
            - 158674913803108352 * t**4
            - 34025665074298880 * t**3
            - 4876321721155584 * t**2
            - 418948289921024 * t
            - 16312285790208
        )
    )

    D0 = -3 * t**2 / ((3 * t + 1) * (t - 1))
    D2 = (
        -t
        * (2 * t + 1) ** 2
        / ((3 * t + 1) * (t - 1) * Q)
        * (
            19683 * t**8
            + 118098 * t**7
            - 1592325 * t**6
            - 10616832 * t**5
            - 30670848 * t**4
            + 7602176 * t**3
            + 24444928 * t**2
            + 9830400 * t
            + 1179648
        )
    )
    d3_radicand = -(3 * t + 1) * K / (t**3 * (t + 1) * Q)
    _require_positive("D3", d3_radicand)
    D3 = (
        131072
        / (9 * Q**2)
        * (
            mp.sqrt(d3_radicand)
            * mp.sqrt(6)
            * t**2
            * (3 * t + 1)
            * (t + 3) ** 2
            * (2 * t + 1) ** 2
            * K
        )
    )

    B0 = (
        mp.log(3 + t) / 4
        - (3 * t + 1) ** 2 * (t - 1) ** 6 * mp.log(2 * t + 1) / (1024 * t**6)
        - (3 * t**4 - 16 * t**3 + 6 * t**2 - 1) * mp.log(3 * t + 1) / (32 * t**3)
        - mp.log(t) / 2
        - 3 * mp.log(2) / 2
        + (3 * t - 1) ** 2 * (1 + t) ** 6 * mp.log(1 + t) / (512 * t**6)
        - (t - 1) ** 2
        / (41943040 * t**4 * (3 * t + 1) ** 5 * (t + 3))
        * (
            19683 * t**13
            - 131220 * t**12
            - 183708 * t**11
            + 360921744 * t**10
            + 2005423731 * t**9
            + 3887177580 * t**8
            + 5603033310 * t**7
            + 4821770240 * t**6
            + 2013921280 * t**5
            + 229048320 * t**4
            - 97157120 * t**3
            - 31436800 * t**2
            - 2048000 * t
            + 122880
        )
    )
    B2 = (
        -(3 * t - 1) * (3 * t + 1) * (1 + t) ** 3 * (t - 1) ** 3 * mp.log(1 + t) / (256 * t**6)
        + (3 * t + 1) ** 2 * (t - 1) ** 6 * mp.log(2 * t + 1) / (512 * t**6)
        + (3 * t + 1) * (t - 1) ** 3 * mp.log(3 * t + 1) / (32 * t**3)
        + (t - 1) ** 4
        / (8388608 * t**4 * (t + 3) * (3 * t + 1) ** 5)
        * (
            19683 * t**11
            - 13122 * t**10
            - 190269 * t**9
            + 122862096 * t**8
            + 626914188 * t**7
            + 555393024 * t**6
            + 28803072 * t**5
            - 163438592 * t**4
            - 81084416 * t**3
            - 14852096 * t**2
            - 720896 * t
            + 49152
        )
    )
    B4 = -((t - 1) ** 5) * P1 / (8388608 * t**4 * (t + 3) * (3 * t + 1) ** 5 * Q) - 9 * (
        t + mp.mpf(1) / 3
    ) ** 2 * (t - 1) ** 6 * (-2 * mp.log(t + 1) + mp.log(2 * t + 1)) / (1024 * t**6)
    b5_radicand = 3 * P2 / (t**3 * (t + 1) * Q)
    _require_positive("B5", b5_radicand)
    B5 = -mp.sqrt(b5_radicand) * P2**2 * (t - 1) ** 6 / (
        2880 * (3 * t + 1) ** 5 * (t + 1) * t * Q**2
    )

    zero = mp.zero
    return AppendixValues(
        t=t, q=q, h=h, Y=Y_direct(t, q, h), zeta=zeta_direct(t), Q=Q, K=K,
        U0=1 / (3 * t), U1=U1, U2=U2,
        D0=D0, D1=zero, D2=D2, D3=D3,
        P1=P1, P2=P2,
        B0=B0, B1=zero, B2=B2, B3=zero, B4=B4, B5=B5,
    )  # fmt: skip


# second reading: coefficient tables, highest power first

H_Q0 = [0, 0, -1658880, -12496896, -8847360, 6832128, 10399744, 4739072, 958464, 73728]
H_Q1 = [13122, 45927, 19683, 0, 0, 0, 0, 0, 0, 0]
Q_TABLE = [
    78732, -1328940, -26889705, -153744066, -415828997,
    -522964992, -342073344, -121237504, -22151168, -1638400,
]  # fmt: skip
K_TABLE = [
    78732, 472392, -2668221, -816345, 92026557, 562023429,
    1040556032, 926367744, 455663616, 127336448, 19005440, 1179648,
]  # fmt: skip
U2_TABLE = [
    6198727824, 180231719760, 891036025560, -12902936763600,
    -197722264231071, -1821396525148269, -13816272361145022,
    -79424397121737354, -324711461744767867, -931873748086896665,
    -1881275802907541504, -2713502925437276160, -2843653010633469952,
    -2190731661037666304, -1246514524950953984, -521994799964094464,
    -158674913803108352, -34025665074298880, -4876321721155584,
    -418948289921024, -16312285790208,
]  # fmt: skip
D2_TABLE = [19683, 118098, -1592325, -10616832, -30670848, 7602176, 24444928, 9830400, 1179648]
P1_TABLE = [
    1549681956, -60580022472, -965388262815, -2822075181459,
    -63004687280883, -1326793976317287, -11608693177471470,
    -55082955555464994, -157459666865762304, -279393068914421760,
    -323288788914892800, -254483996115259392, -139939270751358976,
    -54299625067175936, -14753365577572352, -2718756694392832,
    -314310035243008, -18285655490560, -5905580032, 40265318400,
]  # fmt: skip
P2_TABLE = [
    -472392, -2991816, 15064542, 10234512, -550526652, -3556193688,
    -7367383050, -7639318528, -4586717184, -1675345920, -368705536,
    -45088768, -2359296,
]  # fmt: skip
B0_TABLE = [
    19683, -131220, -183708, 360921744, 2005423731, 3887177580, 5603033310,
    4821770240, 2013921280, 229048320, -97157120, -31436800, -2048000, 122880,
]  # fmt: skip
B2_TABLE = [
    19683, -13122, -190269, 122862096, 626914188, 555393024, 28803072,
    -163438592, -81084416, -14852096, -720896, 49152,
]  # fmt: skip
# 3t^4 - 16t^3 + 6t^2 - 1
B0_LOG3_TABLE = [3, -16, 6, 0, -1]


def tabulated(t, q=1) -> AppendixValues:
    """All appendix quantities at t from the coefficient tables."""
    t = mp.mpf(t)
    q = mp.mpf(q)
    poly = mp.polyval
    a, b, c = 3 * t + 1, 2 * t + 1, t + 3
    s, m = t + 1, t - 1

    h = t**2 * (poly(H_Q0, t) + q * poly(H_Q1, t)) / (8192 * a**6 * b * c)
    Q = poly(Q_TABLE, t)
    K = poly(K_TABLE, t)
    P1 = poly(P1_TABLE, t)
    P2 = poly(P2_TABLE, t)
    base = t**3 * s * Q

    u1_radicand = -2 * a * K / (27 * base)
    _require_positive("U1", u1_radicand)
    d3_radicand = -a * K / base
    _require_positive("D3", d3_radicand)
    b5_radicand = 3 * P2 / base
    _require_positive("B5", b5_radicand)

    logs = {"s": mp.log(s), "b": mp.log(b), "a": mp.log(a)}
    B0 = (
        mp.log(c) / 4
        - a**2 * m**6 * logs["b"] / (1024 * t**6)
        - poly(B0_LOG3_TABLE, t) * logs["a"] / (32 * t**3)
        - mp.log(t) / 2
        - 3 * mp.ln2 / 2
        + (3 * t - 1) ** 2 * s**6 * logs["s"] / (512 * t**6)
        - m**2 * poly(B0_TABLE, t) / (41943040 * t**4 * a**5 * c)
    )
    B2 = (
        -(3 * t - 1) * a * s**3 * m**3 * logs["s"] / (256 * t**6)
        + a**2 * m**6 * logs["b"] / (512 * t**6)
        + a * m**3 * logs["a"] / (32 * t**3)
        + m**4 * poly(B2_TABLE, t) / (8388608 * t**4 * c * a**5)
    )
    B4 = -(m**5) * P1 / (8388608 * t**4 * c * a**5 * Q) - a**2 * m**6 * (
        logs["b"] - 2 * logs["s"]
    ) / (1024 * t**6)

    zero = mp.zero
    return AppendixValues(
        t=t, q=q, h=h,
        Y=-b / (a * m) * mp.exp(-h) - 1,
        zeta=-(m**3) * a / (16 * t**3),
        Q=Q, K=K,
        U0=1 / (3 * t),
        U1=-mp.sqrt(u1_radicand),
        U2=-(a**2) * poly(U2_TABLE, t) / (54 * t**2 * s**2 * Q**2),
        D0=-3 * t**2 / (a * m),
        D1=zero,
        D2=-t * b**2 * poly(D2_TABLE, t) / (a * m * Q),
        D3=131072 * mp.sqrt(6 * d3_radicand) * t**2 * a * c**2 * b**2 * K / (9 * Q**2),
        P1=P1, P2=P2,
        B0=B0, B1=zero, B2=B2, B3=zero, B4=B4,
        B5=-mp.sqrt(b5_radicand) * P2**2 * m**6 / (2880 * a**5 * s * t * Q**2),
    )  # fmt: skip


def compare_readings(t, q=1, tolerance_bits: int | None = None) -> list[str]:
    """Names of quantities on which the two readings disagree beyond 2^-(p - 16)."""
    bits = tolerance_bits if tolerance_bits is not None else mp.prec - 16
    tol = mp.mpf(2) ** (-bits)
    first, second = direct(t, q), tabulated(t, q)
    mismatched = []
    for f in fields(AppendixValues):
        u, v = getattr(first, f.name), getattr(second, f.name)
        scale = max(abs(u), abs(v), mp.one)
        if abs(u - v) > tol * scale:
            mismatched.append(f.name)
    if mismatched:
        logger.warning(f"Appendix readings disagree on {', '.join(mismatched)}")
    return mismatched


def evaluate(t, q=1) -> AppendixValues:
    """Appendix values after checking both readings agree."""
    mismatched = compare_readings(t, q)
    if mismatched:
        raise NumericError(f"appendix transcriptions disagree on {', '.join(mismatched)}")
    return direct(t, q)


def composite_coefficients(R, B0, B2, B4, B5) -> CompositeCoefficients:
    """C_i and G_i from the 2-connected coefficients at the singularity R."""
    C0 = R + B0 + B2
    C2 = -R
    C4 = -(R + R**2 / (2 * B4 - R)) / 2
    C5 = B5 * (1 - 2 * B4 / R) ** (-mp.mpf(5) / 2)
    G0 = mp.exp(C0)
    zero = mp.zero
    return CompositeCoefficients(
        C0=C0, C1=zero, C2=C2, C3=zero, C4=C4, C5=C5,
        G0=G0, G1=zero, G2=G0 * C2, G3=zero, G4=G0 * (C4 + C2**2 / 2), G5=G0 * C5,
    )  # fmt: skip
