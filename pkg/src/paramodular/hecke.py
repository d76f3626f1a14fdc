"""Left-coset representatives for the Hecke operators T_{u,q}.

Matrices on the hot path are kept as 4-tuples of integer coordinate vectors
(alpha, beta, gamma, delta) in the order basis.  For the non-principal genus
this is the conjugated picture W = g Y g^-1, where everything is integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .genus import (
    GenusData,
    FiniteGroup,
    W_to_Y,
    compute_W_theta_vectors,
    vectors_to_matrix,
)
from .lattice import MaximalOrder, Vec, enumerate_norm, orbit_reps, unit_group
from .quaternion import GU2Matrix, Quaternion

VecMatrix = tuple  # (alpha, beta, gamma, delta), each a Vec


class DegreeMismatchError(RuntimeError):
    pass


def hecke_degree(q: int) -> int:
    """deg T_{u,q} = (q+1)(q^2+1)."""
    return (q + 1) * (q * q + 1)


# -- integer matrix arithmetic ------------------------------------------------------------


def _add(x: Vec, y: Vec) -> Vec:
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3])


def vm_mul(order: MaximalOrder, x: VecMatrix, y: VecMatrix) -> VecMatrix:
    mul = order.mul_vec
    a, b, c, d = x
    e, f, g, h = y
    return (
        _add(mul(a, e), mul(b, g)),
        _add(mul(a, f), mul(b, h)),
        _add(mul(c, e), mul(d, g)),
        _add(mul(c, f), mul(d, h)),
    )


def vm_power_sums(order: MaximalOrder, x: VecMatrix) -> tuple[int, int]:
    """(tr A, tr A^2) of the 4x4 image, read off the quaternion entries.

    Both are invariant under conjugation in GL_2(D), so they can be taken in
    the integral picture.
    """
    mul, tr = order.mul_vec, order.trace_vec
    a, b, c, d = x
    r1 = tr(a) + tr(d)
    r2 = tr(mul(a, a)) + 2 * tr(mul(b, c)) + tr(mul(d, d))
    return r1, r2


def vm_to_gu2(order: MaximalOrder, x: VecMatrix, similitude=None) -> GU2Matrix:
    m = vectors_to_matrix(order, x)
    m.similitude = Fraction(similitude) if similitude is not None else m.compute_similitude()
    return m


# -- coset partition ---------------------------------------------------------------------


def partition_cosets(elements, group, mul, key=None) -> list:
    """Split ``elements`` into orbits x*group; return the least member of each.

    Asserts the orbits are free (size |group|) and stay inside ``elements``.
    """
    key = key or (lambda v: v)
    pool = {key(e): e for e in elements}
    if len(pool) != len(elements):
        raise ValueError("duplicate elements in coset partition")
    seen = set()
    reps = []
    for k in sorted(pool):
        if k in seen:
            continue
        e = pool[k]
        orbit = {key(mul(e, g)) for g in group}
        if len(orbit) != len(group):
            raise DegreeMismatchError("right action of the group is not free")
        if not orbit <= pool.keys():
            raise DegreeMismatchError("set is not closed under right multiplication by the group")
        seen |= orbit
        reps.append(pool[min(orbit)])
    return reps


@dataclass
class HeckeRepSet:
    """Representatives u_i with U u U = disjoint union of u_i U."""

    p: int
    q: int
    reps: list[GU2Matrix]
    group: str
    vec_reps: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.reps)

    def check_degree(self) -> None:
        if len(self.reps) != hecke_degree(self.q):
            raise DegreeMismatchError(
                f"{len(self.reps)} representatives for q={self.q}, expected {hecke_degree(self.q)}"
            )
        for u in self.reps:
            if u.similitude != self.q:
                raise DegreeMismatchError(f"representative with similitude {u.similitude}")


def reps_from_Y(Y_q: list[GU2Matrix], gamma2: FiniteGroup, q: int) -> HeckeRepSet:
    """Reduce Y_q modulo right multiplication by Gamma^(2)."""
    reps = partition_cosets(Y_q, gamma2.elements, lambda x, y: x * y, key=GU2Matrix.sort_key)
    out = HeckeRepSet(gamma2.prime, q, reps, gamma2.label)
    out.check_degree()
    return out


def reps_from_W(genus: GenusData, q: int, W_q=None, W_1=None) -> HeckeRepSet:
    """Same coset system as reps_from_Y, computed on the integral side.

    x Gamma^(2) = y Gamma^(2) iff g x g^-1 W_1 = g y g^-1 W_1, so the partition
    can be done with integer arithmetic and mapped back at the end.
    """
    order = genus.order
    if W_q is None:
        W_q = compute_W_theta_vectors(genus, q)
    if W_1 is None:
        W_1 = compute_W_theta_vectors(genus, 1)
    vec_reps = partition_cosets(W_q, W_1, lambda x, y: vm_mul(order, x, y))
    reps = W_to_Y(genus, vec_reps, q)
    out = HeckeRepSet(genus.p, q, reps, "Gamma2", vec_reps)
    out.check_degree()
    return out


# -- principal genus -------------------------------------------------------------------------


def gamma1_vectors(order: MaximalOrder) -> list[VecMatrix]:
    zero = (0, 0, 0, 0)
    units = unit_group(order)
    out = []
    for a, b in product(units, repeat=2):
        out.append((a, zero, zero, b))
        out.append((zero, a, b, zero))
    return sorted(out)


def principal_Y_vectors(order: MaximalOrder, n: int) -> list[VecMatrix]:
    """GU_2(D)_n with integral entries: N(a)+N(b) = N(c)+N(d) = n, a c' + b d' = 0.

    (The primes denote conjugation.)  Such rows force N(a) = N(d), N(b) = N(c).
    """
    mul, conj = order.mul_vec, order.conj_vec
    zero = (0, 0, 0, 0)
    out = []
    for ka in range(n + 1):
        kb = n - ka
        Xa = enumerate_norm(order, ka).vectors
        Xb = enumerate_norm(order, kb).vectors
        for a, b in product(Xa, Xb):
            for c in Xb:
                ac = mul(a, conj(c))
                for d in Xa:
                    if _add(ac, mul(b, conj(d))) == zero:
                        out.append((a, b, c, d))
    out.sort()
    return out


def reps_corollary_S_vectors(order: MaximalOrder, n: int) -> list[VecMatrix]:
    """Explicit representatives of (GU_2(D)_n cap M_2(O)^x) / Gamma^(1)."""
    if n < 1:
        raise ValueError("n must be positive")
    mul, conj = order.mul_vec, order.conj_vec
    units = unit_group(order)
    zero = (0, 0, 0, 0)

    def R(k):
        xs = orbit_reps(enumerate_norm(order, k).vectors, units, order, "right")
        others = enumerate_norm(order, n - k).vectors
        out = []
        for xi, xj in product(xs, repeat=2):
            xjb = conj(xj)
            for v, w in product(others, repeat=2):
                if _add(mul(xi, conj(w)), mul(v, xjb)) == zero:
                    out.append((xi, v, w, xj))
        return out, xs

    m = n // 2
    reps = []
    for k in range(m + 1, n + 1):
        reps.extend(R(k)[0])
    if n % 2 == 0:
        reps.extend(_R_prime(order, m, *R(m)))
    return sorted(reps)


def _R_prime(order: MaximalOrder, m: int, mats, xs) -> list[VecMatrix]:
    """One matrix from each anti-diagonal equivalence pair in R_m."""
    mul, conj = order.mul_vec, order.conj_vec
    units = unit_group(order)
    rep_of = {}
    for x in xs:
        for u in units:
            rep_of[mul(x, u)] = x

    def div(v):
        if any(c % m for c in v):
            raise ArithmeticError("pairing partner is not integral")
        return tuple(c // m for c in v)

    chosen = []
    done = set()
    for M in sorted(mats):
        if M in done:
            continue
        xi, v, w, xj = M
        xs_, xt = rep_of[v], rep_of[w]
        partner = (
            xs_,
            div(mul(mul(xi, conj(w)), xt)),
            div(mul(mul(xj, conj(v)), xs_)),
            xt,
        )
        done.add(M)
        done.add(partner)
        chosen.append(min(M, partner))
    return chosen


def reps_corollary_S(order: MaximalOrder, n: int) -> list[GU2Matrix]:
    return [vm_to_gu2(order, x, n) for x in reps_corollary_S_vectors(order, n)]


def reps_equivalent(set_a, set_b, group, mul, key=None) -> bool:
    """True iff the two sets give the same left cosets x*group, bijectively."""
    key = key or (lambda v: v)

    def canon(x):
        return min(key(mul(x, g)) for g in group)

    ca = [canon(x) for x in set_a]
    cb = [canon(x) for x in set_b]
    return len(set(ca)) == len(ca) and sorted(ca) == sorted(cb)


# -- D^x side --------------------------------------------------------------------------------


def quat_hecke_reps_vectors(order: MaximalOrder, q: int) -> list[Vec]:
    reps = orbit_reps(enumerate_norm(order, q).vectors, unit_group(order), order, "right")
    if len(reps) != q + 1:
        raise DegreeMismatchError(f"{len(reps)} classes in X_{q}/O^x, expected {q + 1}")
    return reps


def quat_hecke_reps(order: MaximalOrder, q: int) -> list[Quaternion]:
    """Representatives of X_q / O^x (right action); there are q+1 of them."""
    return [order.element(v) for v in quat_hecke_reps_vectors(order, q)]
