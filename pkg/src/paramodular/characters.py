"""Characters of USp(4) and SU(2) as exact invariant polynomials.

The USp(4) character with highest weight (j+k-3, k-3) is obtained once per
(j, k) by dividing the Weyl numerator by the Weyl denominator in Z[z, w] and
rewriting the quotient in the invariants E = e1^2 and F = e2 of the
eigenvalues z, 1/z, w, 1/w.  Evaluation on a quaternionic matrix then only
needs tr(A), tr(A^2) and the similitude, all rational.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .quaternion import GU2Matrix, Quaternion

Poly2 = dict  # {(exp_z, exp_w): int}


class CharacterError(ArithmeticError):
    pass


class InvalidSimilitudeError(ValueError):
    pass


# -- bivariate integer polynomials ----------------------------------------------------


def _mul(p: Poly2, q: Poly2) -> Poly2:
    out: Poly2 = {}
    for (a, b), c in p.items():
        for (d, e), f in q.items():
            key = (a + d, b + e)
            out[key] = out.get(key, 0) + c * f
    return {k: v for k, v in out.items() if v}


def _sub(p: Poly2, q: Poly2) -> Poly2:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


def _binomial(m1, m2, c1=1, c2=-1) -> Poly2:
    return {m1: c1, m2: c2}


def exact_divide(num: Poly2, den: Poly2) -> Poly2:
    """Quotient of num by den in Z[z, w], raising if the division is not exact.

    Lexicographic long division (z > w).  If num = q * den then the leading
    term of den divides the leading term of every intermediate remainder.
    """
    rem = {k: v for k, v in num.items() if v}
    lead = max(den)
    lc = den[lead]
    heap = [(-a, -b) for a, b in rem]
    heapq.heapify(heap)
    quot: Poly2 = {}
    while heap:
        na, nb = heapq.heappop(heap)
        key = (-na, -nb)
        c = rem.pop(key, 0)
        if not c:
            continue
        qa, qb = key[0] - lead[0], key[1] - lead[1]
        if qa < 0 or qb < 0 or c % lc:
            raise CharacterError("Weyl numerator is not divisible by the denominator")
        qc = c // lc
        quot[(qa, qb)] = quot.get((qa, qb), 0) + qc
        for (da, db), dc in den.items():
            if (da, db) == lead:
                continue
            t = (qa + da, qb + db)
            v = rem.get(t, 0) - qc * dc
            if v:
                if t not in rem:
                    heapq.heappush(heap, (-t[0], -t[1]))
                rem[t] = v
            else:
                rem.pop(t, None)
    return {k: v for k, v in quot.items() if v}


def weyl_laurent(j: int, k: int) -> dict[tuple[int, int], int]:
    """The USp(4) character chi_{j,k-3} as a Laurent polynomial in z, w."""
    _check_weight(j, k)
    e1 = j + 1
    e2 = 2 * (k - 2)
    e3 = 2 * (j + k - 1)
    # w^{j+1}(w^{2(k-2)} - 1)(z^{2(j+k-1)} - 1)
    t1 = _mul(_mul({(0, e1): 1}, _binomial((0, e2), (0, 0))), _binomial((e3, 0), (0, 0)))
    # z^{j+1}(z^{2(k-2)} - 1)(w^{2(j+k-1)} - 1)
    t2 = _mul(_mul({(e1, 0): 1}, _binomial((e2, 0), (0, 0))), _binomial((0, e3), (0, 0)))
    num = _sub(t1, t2)
    for factor in (
        _binomial((2, 0), (0, 0)),
        _binomial((0, 2), (0, 0)),
        _binomial((1, 1), (0, 0)),
        _binomial((1, 0), (0, 1)),
    ):
        num = exact_divide(num, factor)
    shift = j + k - 3
    return {(a - shift, b - shift): c for (a, b), c in num.items()}


# -- invariant rewriting ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cheb(n: int) -> tuple[int, ...]:
    """Coefficients in s = z + 1/z of z^n + z^-n (n >= 1); _cheb(0) = 2."""
    if n == 0:
        return (2,)
    if n == 1:
        return (0, 1)
    a, b = _cheb(n - 1), _cheb(n - 2)
    out = [0] * (n + 1)
    for i, c in enumerate(a):
        out[i + 1] += c
    for i, c in enumerate(b):
        out[i] -= c
    return tuple(out)


def _orbit_sum(n: int) -> tuple[int, ...]:
    # z^0 occurs once, z^{+-n} pair up
    return (1,) if n == 0 else _cheb(n)


def _to_st(laurent: dict) -> Poly2:
    """Rewrite a sign-symmetric Laurent polynomial in s = z+1/z, t = w+1/w."""
    out: Poly2 = {}
    for (a, b), c in laurent.items():
        if a < 0 or b < 0:
            if laurent.get((abs(a), abs(b))) != c:
                raise CharacterError("Laurent polynomial is not sign-symmetric")
            continue
        za, wb = _orbit_sum(a), _orbit_sum(b)
        for i, ci in enumerate(za):
            if not ci:
                continue
            for m, cm in enumerate(wb):
                if cm:
                    out[(i, m)] = out.get((i, m), 0) + c * ci * cm
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _power_sum_e(m: int) -> tuple[tuple[tuple[int, int], int], ...]:
    """s^m + t^m as a polynomial in (e1, sigma) = (s + t, s t)."""
    if m == 0:
        return (((0, 0), 2),)
    if m == 1:
        return (((1, 0), 1),)
    a = dict(_power_sum_e(m - 1))
    b = dict(_power_sum_e(m - 2))
    out: dict = {}
    for (x, y), c in a.items():
        out[(x + 1, y)] = out.get((x + 1, y), 0) + c
    for (x, y), c in b.items():
        out[(x, y + 1)] = out.get((x, y + 1), 0) - c
    return tuple(sorted((k, v) for k, v in out.items() if v))


def _symmetric_to_elementary(st: Poly2) -> Poly2:
    """Symmetric polynomial in (s, t) -> polynomial in (e1, sigma)."""
    out: Poly2 = {}
    for (a, b), c in st.items():
        if st.get((b, a)) != c:
            raise CharacterError("polynomial in (s, t) is not symmetric")
        if a < b:
            continue
        if a == b:
            terms = (((0, 0), 1),)
        else:
            terms = _power_sum_e(a - b)
        for (x, y), cc in terms:
            key = (x, y + b)
            out[key] = out.get(key, 0) + c * cc
    return {k: v for k, v in out.items() if v}


def _shift_sigma(poly: Poly2) -> Poly2:
    """Substitute sigma = F - 2 (since e2 = 2 + s t)."""
    out: Poly2 = {}
    for (x, y), c in poly.items():
        # (F - 2)^y
        binom = 1
        for i in range(y + 1):
            coeff = binom * (-2) ** (y - i)
            key = (x, i)
            out[key] = out.get(key, 0) + c * coeff
            binom = binom * (y - i) // (i + 1)
    return {k: v for k, v in out.items() if v}


# -- public types ----------------------------------------------------------------------------


def _check_weight(j: int, k: int) -> None:
    if j < 0 or j % 2:
        raise ValueError(f"j must be a non-negative even integer, got {j}")
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")


def weyl_dimension(j: int, k: int) -> int:
    """dim V_{j,k-3} for highest weight (l1, l2) = (j+k-3, k-3) of Sp(4)."""
    l1, l2 = j + k - 3, k - 3
    num = (l1 - l2 + 1) * (l2 + 1) * (l1 + 2) * (l1 + l2 + 3)
    assert num % 6 == 0
    return num // 6


@dataclass(frozen=True)
class CharacterPolynomial:
    """chi_{j,k-3} = sum coeffs[(a, b)] * E^a * F^b with E = e1^2, F = e2."""

    j: int
    k: int
    coeffs: tuple[tuple[tuple[int, int], int], ...]

    @property
    def half_weight(self) -> int:
        return (self.j + 2 * self.k - 6) // 2

    def value_EF(self, E, F):
        return sum(c * E**a * F**b for (a, b), c in self.coeffs)

    def dimension(self) -> int:
        return self.value_EF(16, 6)

    def evaluate_power_sums(self, r1, r2, theta) -> Fraction:
        """chi(g) from tr(A), tr(A^2) and mu(g), homogenised to avoid division."""
        theta = Fraction(theta)
        if theta <= 0:
            raise InvalidSimilitudeError(f"similitude must be positive, got {theta}")
        r1, r2 = Fraction(r1), Fraction(r2)
        e1sq = r1 * r1
        e2 = (e1sq - r2) / 2
        n = self.half_weight
        tpow = [Fraction(1)]
        for _ in range(n):
            tpow.append(tpow[-1] * theta)
        total = Fraction(0)
        for (a, b), c in self.coeffs:
            total += c * e1sq**a * e2**b * tpow[n - a - b]
        return total


def build_sp4_character(j: int, k: int) -> CharacterPolynomial:
    laurent = weyl_laurent(j, k)
    st = _to_st(laurent)
    e_sigma = _symmetric_to_elementary(st)
    ef = _shift_sigma(e_sigma)
    coeffs = {}
    for (x, y), c in ef.items():
        if x % 2:
            raise CharacterError(f"odd power of e1 in chi_({j},{k - 3})")
        coeffs[(x // 2, y)] = c
    chi = CharacterPolynomial(j, k, tuple(sorted(coeffs.items())))
    n = chi.half_weight
    if any(a + b > n for (a, b), _ in chi.coeffs):
        raise CharacterError("character polynomial exceeds its weight")
    dim = chi.dimension()
    if dim != weyl_dimension(j, k) or dim <= 0:
        raise CharacterError(f"chi(I) = {dim} but dim V = {weyl_dimension(j, k)}")
    return chi


def eval_character(chi: CharacterPolynomial, g: GU2Matrix) -> Fraction:
    mu = g.similitude if g.similitude is not None else g.compute_similitude()
    if mu is None:
        raise InvalidSimilitudeError("matrix is not in GU_2(D)")
    r1, r2 = g.power_sums()
    return chi.evaluate_power_sums(r1, r2, mu)


# -- SU(2) ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class SU2CharacterPolynomial:
    """chi_j = sum coeffs[a] * T^a with T = (z + 1/z)^2."""

    j: int
    coeffs: tuple[int, ...]

    def value_T(self, T):
        return sum(c * T**a for a, c in enumerate(self.coeffs))

    def evaluate(self, trd, nrd) -> Fraction:
        trd, nrd = Fraction(trd), Fraction(nrd)
        h = self.j // 2
        total = Fraction(0)
        for a, c in enumerate(self.coeffs):
            total += c * trd ** (2 * a) * nrd ** (h - a)
        return total


def build_su2_character(j: int) -> SU2CharacterPolynomial:
    if j < 0 or j % 2:
        raise ValueError(f"j must be a non-negative even integer, got {j}")
    # z^j + z^{j-2} + ... + z^{-j}
    poly = [0] * (j + 1)
    poly[0] = 1
    for n in range(2, j + 1, 2):
        for i, c in enumerate(_cheb(n)):
            poly[i] += c
    if any(poly[i] for i in range(1, j + 1, 2)):
        raise CharacterError("odd power of s in an even SU(2) character")
    chi = SU2CharacterPolynomial(j, tuple(poly[0::2]))
    assert chi.value_T(4) == j + 1
    return chi


def eval_su2(chi: SU2CharacterPolynomial, x: Quaternion) -> Fraction:
    if x.is_zero():
        raise ValueError("the zero quaternion has no character value")
    return chi.evaluate(x.trace(), x.norm())
