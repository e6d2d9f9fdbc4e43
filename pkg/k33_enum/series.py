"""Exact truncated power series in x over pluggable coefficient rings.

Coefficients are sympy ``QQ`` rationals, or sparse sympy polynomials in the
markers (y for edges, q for K5 blocks) truncated at fixed degree caps.
Truncating markers at a cap is a ring homomorphism, so every identity that
holds for the untruncated series holds coefficientwise below the caps.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from sympy import factorint
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement
from sympy.polys.rings import ring as polynomial_ring

from .errors import (
    BadConstantTerm,
    DivisionByNonUnit,
    NegativeCount,
    NoContraction,
    NonIntegerCount,
    NonNilpotentComposition,
    NoRoot,
    SingularJacobian,
)
from .utils import format_rational, get_logger

logger = get_logger()


def to_rational(value) -> Any:
    """Convert int, Fraction or a QQ element to a QQ element."""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ.convert(value)


def rational_parts(value) -> tuple[int, int]:
    """Numerator and denominator of a QQ element as Python ints."""
    return int(QQ.numer(value)), int(QQ.denom(value))


def to_fraction(value) -> Fraction:
    num, den = rational_parts(value)
    return Fraction(num, den)


class CoefficientRing(ABC):
    """Exact commutative ring of series coefficients."""

    name = "ring"
    zero: Any
    one: Any

    @abstractmethod
    def convert(self, value) -> Any:
        """Coerce an int, Fraction, rational or ring element into the ring."""

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    @abstractmethod
    def mul(self, a, b): ...

    @abstractmethod
    def scale(self, a, c):
        """Multiply ``a`` by the rational ``c``."""

    def is_zero(self, a) -> bool:
        return not a

    @abstractmethod
    def scalar_part(self, a):
        """Rational value of ``a`` with every marker generator set to 0."""

    def is_unit(self, a) -> bool:
        return self.scalar_part(a) != 0

    @abstractmethod
    def inverse(self, a): ...

    @abstractmethod
    def log_unit(self, a):
        """Logarithm of an element whose scalar part is 1."""

    @abstractmethod
    def evaluate(self, a, **values):
        """Specialize markers (default value 1) and return a rational."""

    def has_marker(self, name: str) -> bool:
        return False

    def marker(self, name: str, default=1):
        """The ring element standing for marker ``name`` (or its fixed value)."""
        return self.convert(default)


class RationalRing(CoefficientRing):
    """Exact rationals; the fast path with all markers specialized."""

    name = "QQ"

    def __init__(self):
        self.zero = QQ.zero
        self.one = QQ.one

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalRing)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "RationalRing()"

    def convert(self, value):
        if isinstance(value, PolyElement):
            raise TypeError("polynomial coefficient given to the rational ring")
        return to_rational(value)

    def mul(self, a, b):
        return a * b

    def scale(self, a, c):
        return a * c

    def is_zero(self, a) -> bool:
        return a == 0

    def scalar_part(self, a):
        return a

    def inverse(self, a):
        if a == 0:
            raise DivisionByNonUnit("constant term is 0")
        return QQ.one / a

    def log_unit(self, a):
        if a != 1:
            raise BadConstantTerm(f"log needs constant term 1, got {a}")
        return QQ.zero

    def evaluate(self, a, **values):
        return a


@dataclass(frozen=True)
class Marker:
    """A marker kept symbolic: the generator stands for ``value - base``.

    ``base=0`` gives the polynomial ring in the marker; ``base=1`` gives a
    jet around 1 (exact marker derivatives at 1 up to order ``cap``).
    """

    name: str
    cap: int
    base: int = 0


class MarkerRing(CoefficientRing):
    """Polynomials in one or two markers over QQ, truncated at per-marker caps."""

    def __init__(self, markers: Sequence[Marker]):
        if not markers:
            raise ValueError("MarkerRing needs at least one marker")
        self.markers = tuple(markers)
        self.poly_ring, *gens = polynomial_ring(",".join(m.name for m in self.markers), QQ)
        self.gens = {m.name: g for m, g in zip(self.markers, gens)}
        self.index = {m.name: i for i, m in enumerate(self.markers)}
        self.caps = tuple(m.cap for m in self.markers)
        self.zero = self.poly_ring.zero
        self.one = self.poly_ring.one
        self.name = "QQ[" + ",".join(f"{m.name}<={m.cap}" for m in self.markers) + "]"
        self._nilpotency = sum(self.caps) + 1

    def __eq__(self, other) -> bool:
        return isinstance(other, MarkerRing) and other.markers == self.markers

    def __hash__(self) -> int:
        return hash(self.markers)

    def __repr__(self) -> str:
        return f"MarkerRing({list(self.markers)!r})"

    def convert(self, value):
        if isinstance(value, PolyElement):
            if value.ring != self.poly_ring:
                raise TypeError(f"element of {value.ring} given to {self.name}")
            return value
        return self.poly_ring.ground_new(to_rational(value))

    def _fits(self, monom) -> bool:
        return all(e <= c for e, c in zip(monom, self.caps))

    def mul(self, a, b):
        if not a or not b:
            return self.zero
        caps = self.caps
        terms: dict[tuple, Any] = {}
        zero = QQ.zero
        for ma, ca in a.items():
            for mb, cb in b.items():
                monom = tuple(i + j for i, j in zip(ma, mb))
                if any(e > c for e, c in zip(monom, caps)):
                    continue
                terms[monom] = terms.get(monom, zero) + ca * cb
        return self.poly_ring.from_dict(terms)

    def scale(self, a, c):
        return a.mul_ground(to_rational(c))

    def scalar_part(self, a):
        return a.get(self.poly_ring.zero_monom, QQ.zero)

    def inverse(self, a):
        c = self.scalar_part(a)
        if c == 0:
            raise DivisionByNonUnit(f"scalar part of {a} is 0")
        c_inv = QQ.one / c
        nilpotent = self.scale(a, c_inv) - self.one
        result = self.one
        term = self.one
        for _ in range(self._nilpotency):
            term = -self.mul(term, nilpotent)
            if not term:
                break
            result = result + term
        return self.scale(result, c_inv)

    def log_unit(self, a):
        if self.scalar_part(a) != 1:
            raise BadConstantTerm(f"log needs scalar part 1, got {a}")
        nilpotent = a - self.one
        result = self.zero
        power = self.one
        for k in range(1, self._nilpotency + 1):
            power = self.mul(power, nilpotent)
            if not power:
                break
            result = result + power.mul_ground(QQ((-1) ** (k + 1), k))
        return result

    def evaluate(self, a, **values):
        points = [to_rational(values.get(m.name, 1)) - m.base for m in self.markers]
        total = QQ.zero
        for monom, coeff in a.items():
            term = coeff
            for point, exponent in zip(points, monom):
                if exponent:
                    term = term * point**exponent
            total += term
        return total

    def has_marker(self, name: str) -> bool:
        return name in self.index

    def marker(self, name: str, default=1):
        if name not in self.index:
            return self.convert(default)
        base = self.markers[self.index[name]].base
        return self.gens[name] + base

    def derivative(self, a, name: str):
        """Partial derivative in the marker (generator and value differ by a constant)."""
        return a.diff(self.gens[name])

    def divide_by_marker(self, a, name: str):
        """Exact division by a polynomial marker (base 0)."""
        i = self.index[name]
        if self.markers[i].base != 0:
            return self.mul(a, self.inverse(self.marker(name)))
        terms = {}
        for monom, coeff in a.items():
            if monom[i] == 0:
                raise DivisionByNonUnit(f"{a} is not divisible by {name}")
            shifted = list(monom)
            shifted[i] -= 1
            terms[tuple(shifted)] = coeff
        return self.poly_ring.from_dict(terms)

    def collect(self, a, name: str, **values) -> dict[int, Any]:
        """Coefficients of powers of one marker with the other markers specialized."""
        i = self.index[name]
        points = [to_rational(values.get(m.name, 1)) - m.base for m in self.markers]
        out: dict[int, Any] = {}
        for monom, coeff in a.items():
            term = coeff
            for j, (point, exponent) in enumerate(zip(points, monom)):
                if j != i and exponent:
                    term = term * point**exponent
            out[monom[i]] = out.get(monom[i], QQ.zero) + term
        return {k: v for k, v in sorted(out.items()) if v != 0}


class SeriesKind(str, Enum):
    """Counting convention; the n! factor is applied only at extraction."""

    EGF = "egf"
    OGF = "ogf"


class TruncatedSeries:
    """Power series in x known exactly up to x^order.

    ``polynomial`` marks a series whose coefficients beyond the stored ones
    are exactly zero; only such series may be composed with an inner series
    that has a nonzero constant term.
    """

    __slots__ = ("ring", "coeffs", "kind", "polynomial")

    def __init__(
        self,
        ring: CoefficientRing,
        coeffs: list,
        kind: SeriesKind = SeriesKind.EGF,
        polynomial: bool = False,
    ):
        if not coeffs:
            raise ValueError("a truncated series needs at least the constant coefficient")
        self.ring = ring
        self.coeffs = coeffs
        self.kind = kind
        self.polynomial = polynomial

    # construction

    @classmethod
    def from_values(
        cls,
        ring: CoefficientRing,
        values: Iterable,
        order: int | None = None,
        kind: SeriesKind = SeriesKind.EGF,
        polynomial: bool = False,
    ) -> "TruncatedSeries":
        coeffs = [ring.convert(v) for v in values]
        if order is not None:
            if len(coeffs) > order + 1:
                if polynomial and any(not ring.is_zero(c) for c in coeffs[order + 1 :]):
                    polynomial = False
                coeffs = coeffs[: order + 1]
            coeffs += [ring.zero] * (order + 1 - len(coeffs))
        return cls(ring, coeffs, kind=kind, polynomial=polynomial)

    @classmethod
    def zero(cls, ring: CoefficientRing, order: int) -> "TruncatedSeries":
        return cls(ring, [ring.zero] * (order + 1), polynomial=True)

    @classmethod
    def constant(cls, ring: CoefficientRing, value, order: int) -> "TruncatedSeries":
        return cls(ring, [ring.convert(value)] + [ring.zero] * order, polynomial=True)

    @classmethod
    def monomial(cls, ring: CoefficientRing, k: int, order: int, coeff=1) -> "TruncatedSeries":
        coeffs = [ring.zero] * (order + 1)
        if k <= order:
            coeffs[k] = ring.convert(coeff)
        return cls(ring, coeffs, polynomial=k <= order)

    @classmethod
    def variable(cls, ring: CoefficientRing, order: int) -> "TruncatedSeries":
        """The series x."""
        return cls.monomial(ring, 1, order)

    # basic access

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int):
        if k < 0 or k > self.order:
            raise IndexError(f"coefficient {k} outside 0..{self.order}")
        return self.coeffs[k]

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"TruncatedSeries({self.ring.name}, order={self.order}, [{shown}{more}])"

    def degree(self) -> int:
        """Index of the last nonzero stored coefficient (-1 for zero)."""
        for k in range(self.order, -1, -1):
            if not self.ring.is_zero(self.coeffs[k]):
                return k
        return -1

    def valuation(self) -> int:
        """Index of the first nonzero coefficient (order + 1 for zero)."""
        for k, c in enumerate(self.coeffs):
            if not self.ring.is_zero(c):
                return k
        return self.order + 1

    def is_zero(self) -> bool:
        return self.valuation() > self.order

    def equals(self, other: "TruncatedSeries") -> bool:
        """Coefficientwise equality up to the smaller order."""
        return self.agreement(other) > min(self.order, other.order)

    def agreement(self, other: "TruncatedSeries") -> int:
        """Number of leading coefficients on which both series agree."""
        n = min(self.order, other.order)
        for k in range(n + 1):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return n + 1

    def to_fractions(self, **values) -> list[Fraction]:
        """Coefficients with markers specialized (default 1) as Fractions."""
        return [to_fraction(self.ring.evaluate(c, **values)) for c in self.coeffs]

    # coercion

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.ring != self.ring:
                raise TypeError(f"cannot combine {self.ring.name} with {other.ring.name}")
            return other
        return TruncatedSeries.constant(self.ring, other, self.order)

    def _like(self, coeffs: list, polynomial: bool = False) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, coeffs, kind=self.kind, polynomial=polynomial)

    # arithmetic

    def __add__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        n = min(self.order, other.order)
        add = self.ring.add
        coeffs = [add(self.coeffs[k], other.coeffs[k]) for k in range(n + 1)]
        return self._like(coeffs, self._polynomial_with(other, n))

    __radd__ = __add__

    def __sub__(self, other) -> "TruncatedSeries":
        other = self._coerce(other)
        n = min(self.order, other.order)
        sub = self.ring.sub
        coeffs = [sub(self.coeffs[k], other.coeffs[k]) for k in range(n + 1)]
        return self._like(coeffs, self._polynomial_with(other, n))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._coerce(other) - self

    def __neg__(self) -> "TruncatedSeries":
        return self._like([self.ring.neg(c) for c in self.coeffs], self.polynomial)

    def _polynomial_with(self, other: "TruncatedSeries", n: int) -> bool:
        return (
            self.polynomial
            and other.polynomial
            and self.degree() <= n
            and other.degree() <= n
        )

    def _scaled(self, scalar) -> "TruncatedSeries":
        ring = self.ring
        if isinstance(scalar, PolyElement):
            element = ring.convert(scalar)
            coeffs = [ring.mul(c, element) for c in self.coeffs]
        else:
            c_rat = to_rational(scalar)
            coeffs = [ring.scale(c, c_rat) for c in self.coeffs]
        return self._like(coeffs, self.polynomial)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self._scaled(other)
        other = self._coerce(other)
        ring = self.ring
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [ring.zero] * (n + 1)
        b_terms = [(j, c) for j, c in enumerate(b[: n + 1]) if not ring.is_zero(c)]
        for i in range(n + 1):
            ai = a[i]
            if ring.is_zero(ai):
                continue
            for j, bj in b_terms:
                if i + j > n:
                    break
                out[i + j] = ring.add(out[i + j], ring.mul(ai, bj))
        polynomial = (
            self.polynomial and other.polynomial and self.degree() + other.degree() <= n
        )
        return self._like(out, polynomial)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        ring = self.ring
        inv0 = ring.inverse(self.coeffs[0])
        n = self.order
        out = [inv0] + [ring.zero] * n
        for k in range(1, n + 1):
            acc = ring.zero
            for i in range(1, k + 1):
                if not ring.is_zero(self.coeffs[i]):
                    acc = ring.add(acc, ring.mul(self.coeffs[i], out[k - i]))
            out[k] = ring.neg(ring.mul(acc, inv0))
        return self._like(out)

    def __truediv__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, PolyElement):
                return self._scaled(self.ring.inverse(other))
            c = to_rational(other)
            if c == 0:
                raise DivisionByNonUnit("division by the constant 0")
            return self._scaled(QQ.one / c)
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "TruncatedSeries":
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "TruncatedSeries":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = TruncatedSeries.constant(self.ring, 1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # transcendental operations

    def exp(self) -> "TruncatedSeries":
        """Formal exponential; the constant term must be 0."""
        ring = self.ring
        if not ring.is_zero(self.coeffs[0]):
            raise BadConstantTerm("exp needs a zero constant term")
        n = self.order
        weighted = [ring.scale(c, QQ(k)) for k, c in enumerate(self.coeffs)]
        out = [ring.one] + [ring.zero] * n
        for m in range(1, n + 1):
            acc = ring.zero
            for k in range(1, m + 1):
                if not ring.is_zero(weighted[k]):
                    acc = ring.add(acc, ring.mul(weighted[k], out[m - k]))
            out[m] = ring.scale(acc, QQ(1, m))
        return self._like(out)

    def log(self) -> "TruncatedSeries":
        """Formal logarithm; the constant term must have scalar part 1."""
        ring = self.ring
        s = self.coeffs
        n = self.order
        out = [ring.log_unit(s[0])] + [ring.zero] * n
        inv0 = ring.inverse(s[0])
        weighted = [ring.zero] * (n + 1)
        for m in range(1, n + 1):
            acc = ring.scale(s[m], QQ(m))
            for k in range(1, m):
                if not ring.is_zero(weighted[k]):
                    acc = ring.sub(acc, ring.mul(weighted[k], s[m - k]))
            weighted[m] = ring.mul(acc, inv0)
            out[m] = ring.scale(weighted[m], QQ(1, m))
        return self._like(out)

    def split_log(self) -> tuple[Any, "TruncatedSeries"]:
        """Return (c0, log(s / c0)) where c0 > 0 is the rational scalar part of s(0)."""
        c0 = self.ring.scalar_part(self.coeffs[0])
        if c0 <= 0:
            raise BadConstantTerm(f"log of a series with scalar part {c0}")
        return c0, self._scaled(QQ.one / c0).log()

    # calculus and shifts

    def derivative(self) -> "TruncatedSeries":
        """d/dx, known to order - 1."""
        ring = self.ring
        if self.order == 0:
            return self._like([ring.zero], True)
        coeffs = [ring.scale(self.coeffs[k], QQ(k)) for k in range(1, self.order + 1)]
        return self._like(coeffs, self.polynomial)

    def primitive(self, constant=0) -> "TruncatedSeries":
        """Integral from 0 plus ``constant``, known to order + 1."""
        ring = self.ring
        coeffs = [ring.convert(constant)]
        coeffs += [ring.scale(c, QQ(1, k + 1)) for k, c in enumerate(self.coeffs)]
        return self._like(coeffs, self.polynomial)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by x^k; the result is known to order + k."""
        return self._like([self.ring.zero] * k + list(self.coeffs), self.polynomial)

    def divide_x(self, k: int) -> "TruncatedSeries":
        """Divide by x^k; the first k coefficients must vanish."""
        if self.valuation() < k:
            raise DivisionByNonUnit(f"series is not divisible by x^{k}")
        if k > self.order:
            raise ValueError(f"cannot divide an order-{self.order} series by x^{k}")
        return self._like(list(self.coeffs[k:]), self.polynomial)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot raise order {self.order} to {order} by truncation")
        return self._like(
            list(self.coeffs[: order + 1]), self.polynomial and self.degree() <= order
        )

    def padded(self, order: int) -> "TruncatedSeries":
        """Truncate, or extend with zero coefficients (an approximation unless polynomial)."""
        if order <= self.order:
            return self.truncate(order)
        extra = [self.ring.zero] * (order - self.order)
        return self._like(list(self.coeffs) + extra, self.polynomial)

    def with_order(self, order: int) -> "TruncatedSeries":
        """Same series viewed at a different order; raising it requires a polynomial."""
        if order > self.order and not self.polynomial:
            raise ValueError("only polynomial series can be extended")
        return self.padded(order)

    # substitution

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """outer(inner(x)) by Horner's rule."""
        inner = self._coerce(inner)
        ring = self.ring
        if ring.is_zero(inner.coeffs[0]):
            n = inner.order if self.polynomial else min(self.order, inner.order)
            d = min(self.degree(), n) if not self.polynomial else self.degree()
        elif self.polynomial:
            n = inner.order
            d = self.degree()
        else:
            raise NonNilpotentComposition("inner series has a nonzero constant term")
        if d < 0:
            return TruncatedSeries.zero(ring, n)
        x_part = inner.truncate(n)
        result = TruncatedSeries.constant(ring, self.coeffs[d], n)
        for k in range(d - 1, -1, -1):
            result = result * x_part + self.coeffs[k]
        result.kind = self.kind
        return result

    # markers

    def map_coefficients(self, fn: Callable[[Any], Any], ring: CoefficientRing | None = None):
        ring = ring or self.ring
        return TruncatedSeries(ring, [fn(c) for c in self.coeffs], kind=self.kind)

    def marker_derivative(self, name: str) -> "TruncatedSeries":
        """Partial derivative with respect to a tracked marker."""
        return self.map_coefficients(lambda c: self.ring.derivative(c, name))

    def divide_by_marker(self, name: str) -> "TruncatedSeries":
        return self.map_coefficients(lambda c: self.ring.divide_by_marker(c, name))

    def specialize(self, **values) -> "TruncatedSeries":
        """Evaluate markers (default 1) and return a series over the rationals."""
        rationals = RationalRing()
        return self.map_coefficients(lambda c: self.ring.evaluate(c, **values), rationals)


@dataclass(frozen=True)
class PolynomialRelation:
    """P(S, x) = sum_k coefficients[k] * S**k with series coefficients."""

    coefficients: tuple[TruncatedSeries, ...]

    @property
    def ring(self) -> CoefficientRing:
        return self.coefficients[0].ring

    @property
    def order(self) -> int:
        return min(c.order for c in self.coefficients)

    def __call__(self, s: TruncatedSeries) -> TruncatedSeries:
        result = self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            result = result * s + c
        return result.truncate(min(result.order, s.order))

    def derivative(self) -> "PolynomialRelation":
        if len(self.coefficients) == 1:
            return PolynomialRelation((self.coefficients[0] * 0,))
        return PolynomialRelation(
            tuple(c * k for k, c in enumerate(self.coefficients) if k >= 1)
        )

    def at_origin(self, s0):
        """P(s0, 0) in the coefficient ring."""
        ring = self.ring
        value = ring.zero
        for c in reversed(self.coefficients):
            value = ring.add(ring.mul(value, s0), c.coeffs[0])
        return value


def solve_algebraic(relation: PolynomialRelation, s0, order: int) -> TruncatedSeries:
    """Series root S with S(0) = s0 by Newton iteration with order doubling."""
    ring = relation.ring
    s0 = ring.convert(s0)
    if relation.order < order:
        raise ValueError(f"relation known to order {relation.order} < {order}")
    if not ring.is_zero(relation.at_origin(s0)):
        raise NoRoot(f"P({s0}, 0) != 0")
    slope = relation.derivative()
    if not ring.is_unit(slope.at_origin(s0)):
        raise SingularJacobian(f"dP/dS({s0}, 0) is not invertible")

    root = TruncatedSeries.constant(ring, s0, 0)
    precision = 0
    while precision < order:
        precision = min(2 * precision + 1, order)
        root = root.padded(precision)
        root = root - relation(root) / slope(root)
        logger.debug(f"Newton step reached order {precision}")
    root.polynomial = False
    return root


def solve_fixed_point(
    phi: Callable[[TruncatedSeries], TruncatedSeries],
    init: TruncatedSeries,
    order: int,
    max_iterations: int | None = None,
) -> TruncatedSeries:
    """Iterate S -> phi(S) until two successive iterates agree to ``order``."""
    current = init.padded(order)
    best = -1
    limit = max_iterations or order + 3
    for iteration in range(1, limit + 1):
        following = phi(current)
        if following.order < order:
            raise ValueError(f"map lost precision: order {following.order} < {order}")
        following = following.truncate(order)
        agreement = current.agreement(following)
        logger.debug(f"Fixed-point iteration {iteration}: {agreement}/{order + 1} coefficients")
        if agreement > order:
            following.polynomial = False
            return following
        if agreement <= best:
            raise NoContraction(agreement, order)
        best = agreement
        current = following
    raise NoContraction(best, order)


def extract_counts(s: TruncatedSeries, kind: SeriesKind | None = None) -> list[int]:
    """Integer counts n! [x^n] s (EGF) or [x^n] s (OGF) with markers at 1."""
    kind = kind or s.kind
    counts = []
    factorial = 1
    for n, c in enumerate(s.coeffs):
        if n:
            factorial *= n
        value = s.ring.evaluate(c)
        if kind == SeriesKind.EGF:
            value = value * factorial
        num, den = rational_parts(value)
        if den != 1:
            raise NonIntegerCount(n, format_rational(num, den))
        if num < 0:
            raise NegativeCount(n, num)
        counts.append(num)
    return counts


def lagrange_inversion(phi: TruncatedSeries, order: int) -> TruncatedSeries:
    """The series S = x * phi(S), from [x^n] S = [u^(n-1)] phi(u)^n / n."""
    if phi.order < order - 1:
        raise ValueError(f"phi known to order {phi.order}, need {order - 1}")
    ring = phi.ring
    base = phi.truncate(max(order - 1, 0))
    coeffs = [ring.zero] * (order + 1)
    power = base
    for n in range(1, order + 1):
        coeffs[n] = ring.scale(power.coeffs[n - 1], QQ(1, n))
        power = power * base
    return TruncatedSeries(ring, coeffs, kind=phi.kind)


class LogLedger:
    """Exact bookkeeping of log(c) terms for positive rational constants c.

    A logarithm with a non-unit constant term is split as
    ``log(c0) + log(s / c0)``; the ``log(c0)`` parts are collected here per
    prime factor with their series weights. An expression built this way is
    an exact rational series exactly when every prime's weight vanishes.
    """

    def __init__(self):
        self.weights: dict[int, TruncatedSeries] = {}

    def add(self, constant, weight: TruncatedSeries) -> None:
        num, den = rational_parts(constant)
        for p, e in factorint(num).items():
            self._accumulate(p, weight * e)
        for p, e in factorint(den).items():
            self._accumulate(p, weight * (-e))

    def _accumulate(self, prime: int, weight: TruncatedSeries) -> None:
        if prime in self.weights:
            self.weights[prime] = self.weights[prime] + weight
        else:
            self.weights[prime] = weight

    def weighted_log(self, s: TruncatedSeries, weight: TruncatedSeries | int = 1):
        """weight * log(s) as a series, with log(c0) * weight recorded here."""
        c0, log_part = s.split_log()
        if not isinstance(weight, TruncatedSeries):
            weight = TruncatedSeries.constant(s.ring, weight, s.order)
        self.add(c0, weight)
        return weight * log_part

    def residual(self) -> dict[int, TruncatedSeries]:
        return {p: w for p, w in self.weights.items() if not w.is_zero()}

    def require_cancelled(self, what: str) -> None:
        left = self.residual()
        if left:
            primes = ", ".join(f"log({p})" for p in sorted(left))
            raise BadConstantTerm(f"{what}: {primes} does not cancel")
