"""Maximal orders, norm-list enumeration and unit-orbit representatives."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from math import isqrt
from typing import Sequence

from .quaternion import Quaternion, QuaternionAlgebra

SUPPORTED_PRIMES = (2, 3, 5, 7, 11)

Vec = tuple[int, int, int, int]


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve M x = rhs for square invertible M by Gauss-Jordan over Q."""
    n = len(rows)
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _floor_sqrt(x: Fraction) -> int:
    return isqrt(x.numerator * x.denominator) // x.denominator


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


class MaximalOrder:
    """A rank-4 Z-lattice in a definite quaternion algebra, closed under products.

    Maximality is taken on trust from the bundled table; closure under
    multiplication and integrality of the norm form are checked on construction.
    """

    def __init__(self, algebra: QuaternionAlgebra, basis: Sequence[Quaternion]):
        self.algebra = algebra
        self.basis = tuple(basis)
        if len(self.basis) != 4:
            raise ValueError("an order basis has four elements")
        if self.basis[0] != algebra.one():
            raise ValueError("the first basis element must be 1")
        # column a holds the (1,i,j,k) coordinates of basis element a
        self._coords_T = [[b.coords[r] for b in self.basis] for r in range(4)]
        self.gram = tuple(
            tuple((x * y.conj()).trace() / 2 for y in self.basis) for x in self.basis
        )
        for a in range(4):
            if self.gram[a][a].denominator != 1:
                raise ValueError("basis element with non-integral norm")
            for b in range(4):
                if (2 * self.gram[a][b]).denominator != 1:
                    raise ValueError("norm form is not integral on the basis")
        self._gram2 = tuple(tuple(int(2 * v) for v in row) for row in self.gram)
        self._mult = self._structure_constants()
        self._conj = tuple(self.coordinates_int(b.conj()) for b in self.basis)
        self.mul_vec = self._compile_mul()
        self.conj_vec = self._compile_conj()

    @property
    def prime(self) -> int:
        return self.algebra.ramified_prime

    def _structure_constants(self):
        terms = []
        for a, x in enumerate(self.basis):
            for b, y in enumerate(self.basis):
                c = self.coordinates(x * y)
                if any(v.denominator != 1 for v in c):
                    raise ValueError("basis is not closed under multiplication")
                for idx, v in enumerate(c):
                    if v:
                        terms.append((a, b, idx, int(v)))
        return tuple(terms)

    # -- coordinates ------------------------------------------------------------
    def coordinates(self, x: Quaternion) -> tuple[Fraction, ...]:
        """Coordinates of x in the order basis (rational)."""
        return tuple(_solve_rational(self._coords_T, list(x.coords)))

    def coordinates_int(self, x: Quaternion) -> Vec:
        c = self.coordinates(x)
        if any(v.denominator != 1 for v in c):
            raise ValueError(f"{x!r} is not in the order")
        return tuple(int(v) for v in c)

    def contains(self, x: Quaternion) -> bool:
        return all(v.denominator == 1 for v in self.coordinates(x))

    def element(self, v: Sequence[int]) -> Quaternion:
        out = self.algebra.zero()
        for c, b in zip(v, self.basis):
            if c:
                out = out + b * c
        return out

    # -- integer-coordinate arithmetic (hot path) ------------------------------
    def norm_vec(self, v: Sequence[int]) -> int:
        g = self._gram2
        s = 0
        for a in range(4):
            va = v[a]
            if va:
                row = g[a]
                s += va * (row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3])
        return s // 2

    def _compile_mul(self):
        # straight-line code from the structure constants; this is the inner
        # loop of every norm-list screen
        comps = [[] for _ in range(4)]
        for a, b, c, coef in self._mult:
            comps[c].append(f"{coef}*x{a}*y{b}")
        body = ", ".join("(" + (" + ".join(t) or "0") + ")" for t in comps)
        src = f"def mul_vec(x, y):\n    x0, x1, x2, x3 = x\n    y0, y1, y2, y3 = y\n    return ({body})\n"
        ns: dict = {}
        exec(src, ns)
        return ns["mul_vec"]

    def _compile_conj(self):
        comps = [[] for _ in range(4)]
        for a, row in enumerate(self._conj):
            for c, v in enumerate(row):
                if v:
                    comps[c].append(f"{v}*x{a}")
        body = ", ".join("(" + (" + ".join(t) or "0") + ")" for t in comps)
        ns: dict = {}
        exec(f"def conj_vec(x):\n    x0, x1, x2, x3 = x\n    return ({body})\n", ns)
        return ns["conj_vec"]

    def trace_vec(self, x: Sequence[int]) -> int:
        return sum(xa * (2 * self.gram[a][0]) for a, xa in enumerate(x))

    @cached_property
    def _ldl(self):
        """Q with N(x) = sum_i Q[i][i] (x_i + sum_{j>i} Q[i][j] x_j)^2."""
        n = 4
        q = [list(row) for row in self.gram]
        for i in range(n):
            if q[i][i] <= 0:
                raise ValueError("norm form is not positive definite")
            for j in range(i + 1, n):
                q[j][i] = q[i][j]
                q[i][j] = q[i][j] / q[i][i]
            for k in range(i + 1, n):
                for l in range(k, n):
                    q[k][l] -= q[k][i] * q[i][l]
        return q

    def __repr__(self):
        return f"MaximalOrder(p={self.prime}, algebra={self.algebra})"

    def __getstate__(self):
        return (self.algebra, self.basis)

    def __setstate__(self, state):
        self.__init__(*state)

    def __eq__(self, other):
        return isinstance(other, MaximalOrder) and (self.algebra, self.basis) == (other.algebra, other.basis)

    def __hash__(self):
        return hash((self.algebra, self.basis))


@dataclass
class NormList:
    """All order elements of a given reduced norm, as integer basis coordinates."""

    norm: int
    vectors: list[Vec]
    order: MaximalOrder = field(repr=False)

    @property
    def elements(self) -> list[Quaternion]:
        return [self.order.element(v) for v in self.vectors]

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)


def enumerate_norm(order: MaximalOrder, n: int) -> NormList:
    """Return every x in the order with N(x) = n, sorted lexicographically.

    Exact Fincke-Pohst search on the LDL^T form of the Gram matrix; the last
    coordinate is solved for rather than scanned.
    """
    if n < 0:
        raise ValueError("norm must be non-negative")
    return NormList(n, list(_enumerate_norm_cached(order, n)), order)


@lru_cache(maxsize=4096)
def _enumerate_norm_cached(order: MaximalOrder, n: int) -> tuple[Vec, ...]:
    if n == 0:
        return ((0, 0, 0, 0),)
    q = order._ldl
    found: list[Vec] = []
    x = [0, 0, 0, 0]
    target = Fraction(n)

    def rec(i: int, remaining: Fraction):
        c = -sum((q[i][j] * x[j] for j in range(i + 1, 4)), Fraction(0))
        if i == 0:
            s = _rational_sqrt(remaining / q[0][0])
            if s is None:
                return
            for cand in {c + s, c - s}:
                if cand.denominator == 1:
                    x[0] = int(cand)
                    found.append(tuple(x))
            return
        bound = remaining / q[i][i]
        r = _floor_sqrt(bound)
        fc = c.numerator // c.denominator
        hi = fc + r + 1
        while hi > c and (hi - c) ** 2 > bound:
            hi -= 1
        lo = fc - r - 1
        while lo < c and (lo - c) ** 2 > bound:
            lo += 1
        for xi in range(lo, hi + 1):
            x[i] = xi
            rec(i - 1, remaining - q[i][i] * (xi - c) ** 2)
        x[i] = 0

    rec(3, target)
    out = sorted(set(found))
    for v in out:
        assert order.norm_vec(v) == n
    return tuple(out)


def unit_group(order: MaximalOrder) -> list[Vec]:
    """The units of the order: exactly the elements of norm 1."""
    return list(enumerate_norm(order, 1).vectors)


def orbit_reps(vectors, units, order: MaximalOrder, side: str = "right") -> list[Vec]:
    """One representative (the lexicographically least) per unit orbit.

    ``side='right'`` partitions by x -> x*u, ``'left'`` by x -> u*x.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    seen: set[Vec] = set()
    reps = []
    members = set(vectors)
    for v in sorted(vectors):
        if v in seen:
            continue
        if side == "right":
            orbit = {order.mul_vec(v, u) for u in units}
        else:
            orbit = {order.mul_vec(u, v) for u in units}
        if not orbit <= members:
            raise ValueError("vector list is not closed under the unit action")
        seen |= orbit
        reps.append(min(orbit))
    return sorted(reps)


# -- bundled configuration -------------------------------------------------------


@dataclass(frozen=True)
class AlgebraRecord:
    p: int
    algebra: QuaternionAlgebra
    order: MaximalOrder
    lam: Quaternion
    mu: Quaternion


def _parse_record(raw) -> AlgebraRecord:
    p = int(raw["p"])
    alg = QuaternionAlgebra(int(raw["a"]), int(raw["b"]), p)
    basis = [alg.element([Fraction(c) for c in v]) for v in raw["basis"]]
    order = MaximalOrder(alg, basis)
    lam = alg.element([Fraction(c) for c in raw["lambda"]])
    mu = alg.element([Fraction(c) for c in raw["mu"]])
    return AlgebraRecord(p, alg, order, lam, mu)


def load_algebra_records(path=None) -> dict[int, AlgebraRecord]:
    if path is None:
        text = resources.files("paramodular.data").joinpath("algebras.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    return {rec.p: rec for rec in map(_parse_record, data["algebras"])}


@lru_cache(maxsize=None)
def bundled_record(p: int) -> AlgebraRecord:
    records = load_algebra_records()
    if p not in records:
        raise ValueError(f"no bundled algebra for p={p}; supported: {SUPPORTED_PRIMES}")
    return records[p]
