"""Exact arithmetic in definite quaternion algebras over Q and in M_2 of them.

Elements are stored as four integer numerators over one positive common
denominator in the (1, i, j, k) basis. This keeps products integral until a
single gcd normalisation at the end, which matters because the trace
computations multiply tens of thousands of 2x2 quaternionic matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Rational = Fraction


class AlgebraMismatchError(ValueError):
    pass


class SimilitudeError(ArithmeticError):
    """Raised when a matrix fails g * conj(g)^T = mu * I."""


@dataclass(frozen=True)
class QuaternionAlgebra:
    """The algebra (a, b / Q) with i^2 = a, j^2 = b, k = ij."""

    a: int
    b: int
    ramified_prime: int

    def __post_init__(self):
        if self.a >= 0 or self.b >= 0:
            raise ValueError("only definite algebras (a, b < 0) are supported")

    def element(self, coords: Sequence) -> "Quaternion":
        return Quaternion.from_rationals(self, coords)

    def scalar(self, x) -> "Quaternion":
        return Quaternion.from_rationals(self, (x, 0, 0, 0))

    def zero(self) -> "Quaternion":
        return Quaternion(self, (0, 0, 0, 0), 1)

    def one(self) -> "Quaternion":
        return Quaternion(self, (1, 0, 0, 0), 1)

    def gens(self):
        return tuple(
            Quaternion(self, tuple(int(i == n) for i in range(4)), 1) for n in range(4)
        )

    def __str__(self):
        return f"({self.a},{self.b}/Q)"


def _normalise(c0: int, c1: int, c2: int, c3: int, den: int):
    if den < 0:
        c0, c1, c2, c3, den = -c0, -c1, -c2, -c3, -den
    g = gcd(gcd(gcd(c0, c1), gcd(c2, c3)), den)
    if g > 1:
        return (c0 // g, c1 // g, c2 // g, c3 // g), den // g
    return (c0, c1, c2, c3), den


class Quaternion:
    __slots__ = ("algebra", "num", "den", "_hash")

    def __init__(self, algebra: QuaternionAlgebra, num, den: int = 1, *, reduced=False):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if reduced:
            self.num, self.den = tuple(num), den
        else:
            self.num, self.den = _normalise(*num, den)
        self.algebra = algebra
        self._hash = None

    @classmethod
    def from_rationals(cls, algebra, coords):
        fr = [Fraction(x) for x in coords]
        if len(fr) != 4:
            raise ValueError("a quaternion needs exactly four coordinates")
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        return cls(algebra, tuple(int(x * den) for x in fr), den)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def _check(self, other):
        if self.algebra != other.algebra:
            raise AlgebraMismatchError(f"{self.algebra} vs {other.algebra}")

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            other = self.algebra.scalar(other)
        self._check(other)
        x, y = self.num, other.num
        dx, dy = self.den, other.den
        if dx == dy:
            return Quaternion(self.algebra, (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]), dx)
        return Quaternion(
            self.algebra,
            tuple(xi * dy + yi * dx for xi, yi in zip(x, y)),
            dx * dy,
        )

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(self.algebra, tuple(-c for c in self.num), self.den, reduced=True)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            s = Fraction(other)
            return Quaternion(
                self.algebra,
                tuple(c * s.numerator for c in self.num),
                self.den * s.denominator,
            )
        self._check(other)
        a, b = self.algebra.a, self.algebra.b
        x0, x1, x2, x3 = self.num
        y0, y1, y2, y3 = other.num
        return Quaternion(
            self.algebra,
            (
                x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
                x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
                x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
                x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
            ),
            self.den * other.den,
        )

    def __rmul__(self, other):
        # scalars are central
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Quaternion):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def conj(self) -> "Quaternion":
        c0, c1, c2, c3 = self.num
        return Quaternion(self.algebra, (c0, -c1, -c2, -c3), self.den, reduced=True)

    def norm(self) -> Fraction:
        a, b = self.algebra.a, self.algebra.b
        c0, c1, c2, c3 = self.num
        return Fraction(c0 * c0 - a * c1 * c1 - b * c2 * c2 + a * b * c3 * c3, self.den * self.den)

    def trace(self) -> Fraction:
        return Fraction(2 * self.num[0], self.den)

    def inverse(self) -> "Quaternion":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion is not invertible")
        return self.conj() * (1 / n)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __eq__(self, other):
        if isinstance(other, Quaternion):
            return self.algebra == other.algebra and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            o = Fraction(other)
            return self.num[1:] == (0, 0, 0) and Fraction(self.num[0], self.den) == o
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def sort_key(self):
        return self.coords

    def __repr__(self):
        parts = []
        for c, name in zip(self.coords, ("", "i", "j", "k")):
            if c:
                parts.append(f"{c}{'*' + name if name else ''}")
        return "Quaternion(" + (" + ".join(parts) if parts else "0") + ")"

    def __getstate__(self):
        return (self.algebra, self.num, self.den)

    def __setstate__(self, state):
        self.algebra, self.num, self.den = state
        self._hash = None


def trace_of_product(x: Quaternion, y: Quaternion) -> Fraction:
    """trd(x*y) without forming the product."""
    a, b = x.algebra.a, x.algebra.b
    p, q = x.num, y.num
    s = p[0] * q[0] + a * p[1] * q[1] + b * p[2] * q[2] - a * b * p[3] * q[3]
    return Fraction(2 * s, x.den * y.den)


class GU2Matrix:
    """A 2x2 matrix over a quaternion algebra.

    ``similitude`` is the scalar mu with g * conj(g)^T = mu * I, or None when
    the matrix is not a unitary similitude (e.g. the lattice matrix g of the
    non-principal genus). Construct checked elements with :meth:`unitary`.
    """

    __slots__ = ("entries", "similitude", "_hash")

    def __init__(self, entries: Sequence[Quaternion], similitude: Fraction | None = None):
        if len(entries) != 4:
            raise ValueError("expected four entries (row-major)")
        self.entries = tuple(entries)
        self.similitude = similitude
        self._hash = None

    @classmethod
    def unitary(cls, entries, similitude=None) -> "GU2Matrix":
        m = cls(entries)
        mu = m.compute_similitude()
        if mu is None:
            raise SimilitudeError(f"not a unitary similitude: {m!r}")
        if similitude is not None and mu != similitude:
            raise SimilitudeError(f"similitude {mu} != expected {similitude}")
        m.similitude = mu
        return m

    @classmethod
    def identity(cls, algebra) -> "GU2Matrix":
        o, z = algebra.one(), algebra.zero()
        return cls((o, z, z, o), Fraction(1))

    @classmethod
    def diag(cls, x, y) -> "GU2Matrix":
        z = x.algebra.zero()
        return cls((x, z, z, y))

    @property
    def algebra(self):
        return self.entries[0].algebra

    def __getitem__(self, idx):
        r, c = idx
        return self.entries[2 * r + c]

    def __mul__(self, other: "GU2Matrix") -> "GU2Matrix":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        mu = None
        if self.similitude is not None and other.similitude is not None:
            mu = self.similitude * other.similitude
        return GU2Matrix((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), mu)

    def scale(self, s) -> "GU2Matrix":
        s = Fraction(s)
        mu = None if self.similitude is None else self.similitude * s * s
        return GU2Matrix(tuple(x * s for x in self.entries), mu)

    def __neg__(self):
        return GU2Matrix(tuple(-x for x in self.entries), self.similitude)

    def conj(self) -> "GU2Matrix":
        """Entrywise conjugate (no transpose)."""
        return GU2Matrix(tuple(x.conj() for x in self.entries), self.similitude)

    def conj_transpose(self) -> "GU2Matrix":
        a, b, c, d = self.entries
        return GU2Matrix((a.conj(), c.conj(), b.conj(), d.conj()), self.similitude)

    def compute_similitude(self) -> Fraction | None:
        """Return mu if g * conj(g)^T = mu * I, else None."""
        a, b, c, d = self.entries
        top = a.norm() + b.norm()
        bottom = c.norm() + d.norm()
        off = a * c.conj() + b * d.conj()
        if top != bottom or not off.is_zero():
            return None
        return top

    def verify(self) -> None:
        mu = self.compute_similitude()
        if mu is None or (self.similitude is not None and mu != self.similitude):
            raise SimilitudeError(f"similitude identity fails for {self!r}")

    def inverse(self) -> "GU2Matrix":
        if self.similitude is not None:
            return self.conj_transpose().scale(1 / self.similitude)
        return general_inverse(self)

    def power_sums(self) -> tuple[Fraction, Fraction]:
        return embed_gsp4_power_sums(self)

    def __eq__(self, other):
        if not isinstance(other, GU2Matrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.entries)
        return self._hash

    def sort_key(self):
        return tuple(x.sort_key() for x in self.entries)

    def __repr__(self):
        a, b, c, d = self.entries
        return f"GU2Matrix([[{a}, {b}], [{c}, {d}]], mu={self.similitude})"

    def __getstate__(self):
        return (self.entries, self.similitude)

    def __setstate__(self, state):
        self.entries, self.similitude = state
        self._hash = None


def general_inverse(m: GU2Matrix) -> GU2Matrix:
    """Inverse of an invertible 2x2 quaternionic matrix (block elimination)."""
    a, b, c, d = m.entries
    if not a.is_zero():
        ai = a.inverse()
        s = d - c * ai * b  # Schur complement
        si = s.inverse()
        return GU2Matrix(
            (ai + ai * b * si * c * ai, -(ai * b * si), -(si * c * ai), si)
        )
    # a == 0: need b, c invertible
    bi, ci = b.inverse(), c.inverse()
    return GU2Matrix((-(ci * d * bi), ci, bi, a))


def embed_gsp4_power_sums(g: GU2Matrix) -> tuple[Fraction, Fraction]:
    """tr(A) and tr(A^2) for the 4x4 complex image A of g.

    The image is block-structured over the 2x2 image of D, so both traces
    are reduced traces of quaternion expressions; the sqrt(a) parts cancel.
    """
    al, be, ga, de = g.entries
    r1 = al.trace() + de.trace()
    r2 = trace_of_product(al, al) + 2 * trace_of_product(be, ga) + trace_of_product(de, de)
    return r1, r2


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = s * f^2 with s squarefree; returns (s, f)."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, f = 1, 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            f *= d
        if n % d == 0:
            n //= d
            s *= d
        d += 1
    return s * n, f


@dataclass(frozen=True)
class QuadraticSurd:
    """rational + surd * sqrt(radicand), radicand a fixed squarefree integer > 1."""

    rational: Fraction
    surd: Fraction
    radicand: int

    def __post_init__(self):
        object.__setattr__(self, "rational", Fraction(self.rational))
        object.__setattr__(self, "surd", Fraction(self.surd))
        if self.radicand < 2 or squarefree_part(self.radicand)[0] != self.radicand:
            raise ValueError(f"radicand must be squarefree and > 1, got {self.radicand}")

    @classmethod
    def sqrt_of(cls, x, radicand: int | None = None) -> "QuadraticSurd":
        """sqrt(x) for positive rational x, as s*sqrt(d)."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError("sqrt_of needs a positive rational")
        num = x.numerator * x.denominator
        d, f = squarefree_part(num)
        coeff = Fraction(f, x.denominator)
        if d == 1:
            if radicand is None:
                raise ValueError(f"sqrt({x}) is rational; pass a radicand for the field")
            return cls(coeff, 0, radicand)
        if radicand is not None and radicand != d:
            raise ValueError(f"sqrt({x}) does not lie in Q(sqrt({radicand}))")
        return cls(0, coeff, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.radicand != self.radicand:
                raise ValueError("radicand mismatch")
            return other
        return QuadraticSurd(Fraction(other), 0, self.radicand)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticSurd(self.rational + o.rational, self.surd + o.surd, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.rational, -self.surd, self.radicand)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.radicand
        return QuadraticSurd(
            self.rational * o.rational + d * self.surd * o.surd,
            self.rational * o.surd + self.surd * o.rational,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticSurd(self.rational, -self.surd, self.radicand)

    def norm(self) -> Fraction:
        return self.rational**2 - self.radicand * self.surd**2

    def trace(self) -> Fraction:
        return 2 * self.rational

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero surd")
        c = self.conjugate()
        return QuadraticSurd(c.rational / n, c.surd / n, self.radicand)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def is_rational(self):
        return self.surd == 0

    def __float__(self):
        return float(self.rational) + float(self.surd) * self.radicand**0.5


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
