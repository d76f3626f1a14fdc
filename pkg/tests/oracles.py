"""Independent reference computations used only by the tests.

Each routine here reaches its answer by a different road than the library:
explicit 4x4 complex matrices, brute-force boxes, q-expansions built from
product formulas, and the Weyl quotient formula evaluated exactly.
"""

from fractions import Fraction
from itertools import product
from math import isqrt

import numpy as np


# -- the 4x4 complex image of a 2x2 quaternionic matrix ----------------------------------


def gsp4_image(g):
    """The 4x4 complex matrix of g, with i -> sqrt(a) in the 2x2 image of D."""
    alg = g.algebra
    ra = np.sqrt(complex(alg.a))
    b = alg.b

    def parts(x):
        c = [float(t) for t in x.coords]
        return c[0] + c[1] * ra, c[0] - c[1] * ra, c[2] + c[3] * ra, c[2] - c[3] * ra

    al, be, ga, de = (parts(x) for x in g.entries)
    # parts: (x1 + x2 r, x1 - x2 r, x3 + x4 r, x3 - x4 r)
    return np.array(
        [
            [al[0], be[0], al[2], be[2]],
            [ga[0], de[0], ga[2], de[2]],
            [b * al[3], b * be[3], al[1], be[1]],
            [b * ga[3], b * de[3], ga[1], de[1]],
        ],
        dtype=complex,
    )


def numeric_power_sums(g):
    eig = np.linalg.eigvals(gsp4_image(g))
    return complex(eig.sum()), complex((eig**2).sum())


# -- brute-force norm enumeration --------------------------------------------------------


def gram_matrix(order):
    """G with N(sum x_i e_i) = x^T G x, from norms of basis vectors and their sums."""
    e = order.basis
    G = [[Fraction(0)] * 4 for _ in range(4)]
    for i in range(4):
        G[i][i] = e[i].norm()
    for i, j in product(range(4), repeat=2):
        if i < j:
            G[i][j] = G[j][i] = ((e[i] + e[j]).norm() - e[i].norm() - e[j].norm()) / 2
    return G


def brute_norm_vectors(order, n):
    """All integer vectors of norm n, by scanning a box |x_i| <= sqrt(n * (G^-1)_ii)."""
    G = np.array([[float(x) for x in row] for row in gram_matrix(order)])
    Ginv = np.linalg.inv(G)
    radius = [isqrt(int(n * Ginv[i][i]) + 1) + 1 for i in range(4)]
    found = []
    for v in product(*(range(-r, r + 1) for r in radius)):
        x = sum((c * e for c, e in zip(v[1:], order.basis[1:])), v[0] * order.basis[0])
        if x.norm() == n:
            found.append(tuple(v))
    return sorted(found)


# -- characteristic polynomials from power traces -----------------------------------------


def charpoly_from_power_traces(traces):
    """Monic polynomial (highest first) whose roots have the given power sums."""
    e = [Fraction(1)]
    for m in range(1, len(traces) + 1):
        e.append(sum((-1) ** (i - 1) * e[m - i] * Fraction(traces[i - 1]) for i in range(1, m + 1)) / m)
    return [(-1) ** i * e[i] for i in range(len(e))]


def poly_eval(f, x):
    acc = 0
    for c in f:
        acc = acc * x + c
    return acc


# -- level-one q-expansions ----------------------------------------------------------------


def _series_mul(f, g, n):
    out = [0] * n
    for i, a in enumerate(f[:n]):
        if a:
            for j, b in enumerate(g[: n - i]):
                out[i + j] += a * b
    return out


def delta_qexp(n):
    """q * prod (1 - q^m)^24 to n terms."""
    f = [0] * n
    f[1 % n] = 1
    for m in range(1, n):
        for _ in range(24):
            g = f[:]
            for i in range(m, n):
                g[i] -= f[i - m]
            f = g
    return f


def eisenstein(k, n):
    """E_k normalised with constant term 1, for k = 4 or 6."""
    c = {4: 240, 6: -504}[k]
    return [1] + [c * sum(d ** (k - 1) for d in range(1, m + 1) if m % d == 0) for m in range(1, n)]


def level1_hecke_matrix(weight, q):
    """Matrix of T_q on S_weight(SL_2(Z)) in a basis echelonised at q^1..q^m."""
    m = weight // 12 - (1 if weight % 12 == 2 else 0)
    if m <= 0:
        return []
    n = q * m + 2
    D, E4, E6 = delta_qexp(n), eisenstein(4, n), eisenstein(6, n)
    basis = []
    for i in range(1, m + 1):
        rest = weight - 12 * i
        for a in range(rest // 4 + 1):
            if (rest - 4 * a) % 6 == 0:
                b = (rest - 4 * a) // 6
                break
        else:
            raise AssertionError(f"no E4^a E6^b of weight {rest}")
        f = [1] + [0] * (n - 1)
        for _ in range(i):
            f = _series_mul(f, D, n)
        for _ in range(a):
            f = _series_mul(f, E4, n)
        for _ in range(b):
            f = _series_mul(f, E6, n)
        basis.append([Fraction(x) for x in f])
    # Delta^i starts at q^i, so the basis is already triangular; clear above the diagonal
    for i in range(m - 1, -1, -1):
        basis[i] = [x / basis[i][i + 1] for x in basis[i]]
        for r in range(i):
            c = basis[r][i + 1]
            basis[r] = [x - c * y for x, y in zip(basis[r], basis[i])]

    def hecke(f):
        return [f[q * t] + (q ** (weight - 1) * f[t // q] if t % q == 0 else 0) for t in range(m + 1)]

    # T_q f_i = sum_r (T_q f_i)_{r+1} f_r
    return [[hecke(f)[r + 1] for f in basis] for r in range(m)]


# -- characters ----------------------------------------------------------------------------


def _det(M):
    M = [row[:] for row in M]
    n, det = len(M), Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return det


def weyl_character_exact(j, k, y1, y2):
    """chi_{(j+k-3, k-3)} of Sp_4 at the torus point diag(y1, y2, 1/y1, 1/y2), rational y."""
    l = (j + k - 1, k - 2)  # lambda + rho
    ys = (Fraction(y1), Fraction(y2))
    num = [[y**e - y**-e for e in l] for y in ys]
    den = [[y**e - y**-e for e in (2, 1)] for y in ys]
    return _det(num) / _det(den)


def su2_character_numeric(j, trd, nrd):
    """sum_{i=0}^{j} z1^i z2^(j-i) over the roots z of X^2 - trd X + nrd."""
    z1, z2 = np.roots([1.0, -float(trd), float(nrd)])
    return sum(z1**i * z2 ** (j - i) for i in range(j + 1))


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_rem(a, f):
    """Remainder of a modulo monic f, both highest first."""
    a = [Fraction(x) for x in a]
    while len(a) >= len(f):
        c = a[0]
        for i in range(len(f)):
            a[i] -= c * f[i]
        a.pop(0)
    return a


def compose_mod(F, g, f):
    """F(g(x)) mod f(x), all highest first; all zero iff F(g(alpha)) = 0 for a root alpha of f."""
    acc = [Fraction(0)]
    for c in F:
        acc = _poly_mul(acc, list(g))
        acc[-1] += c
        acc = _poly_rem(acc, f)
    return acc
