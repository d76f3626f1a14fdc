"""Regenerate src/paramodular/data/level1.txt.

Hecke eigenvalues of level-one cusp forms at q = 2, 3 for weights 12..26,
computed from exact q-expansions of E4, E6 and Delta.  One record per Galois
orbit; a_3 is written as a polynomial in the root alpha = a_2.
"""

import sys
from fractions import Fraction

import sympy

PREC = 40


def sigma(n, k):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def mul(f, g):
    out = [0] * PREC
    for i, a in enumerate(f):
        if a:
            for j in range(PREC - i):
                out[i + j] += a * g[j]
    return out


def power(f, e):
    out = [1] + [0] * (PREC - 1)
    for _ in range(e):
        out = mul(out, f)
    return out


E4 = [1] + [240 * sigma(n, 3) for n in range(1, PREC)]
E6 = [1] + [-504 * sigma(n, 5) for n in range(1, PREC)]
DELTA = [0] + [(a - b) // 1728 for a, b in zip(power(E4, 3)[1:], power(E6, 2)[1:])]


def eis(w):
    for a in range(w // 4 + 1):
        if (w - 4 * a) % 6 == 0:
            return mul(power(E4, a), power(E6, (w - 4 * a) // 6))
    raise ValueError(w)


def basis(k):
    d = k // 12 - 1 if k % 12 == 2 else k // 12
    return [mul(power(DELTA, i), eis(k - 12 * i)) for i in range(1, d + 1)]


def hecke_matrix(k, q):
    B = basis(k)
    d = len(B)
    # coefficients 1..d of T_q f, then solve in the echelon basis
    M = sympy.Matrix([[B[i][m] for m in range(1, d + 1)] for i in range(d)])
    rows = []
    for f in B:
        tf = [f[q * m] + (q ** (k - 1) * f[m // q] if m % q == 0 else 0) for m in range(1, d + 1)]
        rows.append(sympy.Matrix([tf]) * M.inv())
    return sympy.Matrix.vstack(*rows).T


def main(out=sys.stdout):
    x = sympy.Symbol("x")
    print("# level-one eigenforms, weights 12..26; generated by scripts/gen_level1.py", file=out)
    for k in range(12, 27, 2):
        if not basis(k):
            continue
        T2, T3 = hecke_matrix(k, 2), hecke_matrix(k, 3)
        assert T2 * T3 == T3 * T2
        cp = sympy.Poly(T2.charpoly(x).as_expr(), x)
        assert cp.is_irreducible
        d = cp.degree()
        # T3 = c(T2) with deg c < d, since T2 has distinct eigenvalues
        cs = sympy.symbols(f"c0:{d}")
        expr = sum((c * T2**i for i, c in enumerate(cs)), sympy.zeros(d)) - T3
        sol = sympy.solve(list(expr), cs, dict=True)[0]
        a3 = [Fraction(str(sol[c])) for c in cs]
        print("", file=out)
        print("level 1", file=out)
        print(f"weight {k}", file=out)
        print(f"label {k}.a", file=out)
        print("minpoly " + " ".join(str(c) for c in cp.all_coeffs()), file=out)
        # eigenvalues as polynomials in alpha = a_2, highest degree first
        if d == 1:
            print(f"a 2 {-cp.all_coeffs()[1]}", file=out)
            print(f"a 3 {a3[0]}", file=out)
        else:
            print("a 2 " + " ".join(["1"] + ["0"] * (d - 1)), file=out)
            print("a 3 " + " ".join(str(c) for c in reversed(a3)), file=out)


if __name__ == "__main__":
    main()
