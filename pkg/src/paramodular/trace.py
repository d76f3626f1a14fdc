"""Trace formula for T_{u,q} on A_{j,k-3}(D), dimensions and oldform subtraction.

With class number one the trace of T_{u,q} is

    tr T_{u,q} = (1/|Gamma|) * sum over i, gamma of chi(u_i gamma)

and since the cosets u_i Gamma^(2) tile Y_q, the double sum is a sum over Y_q,
or after conjugating by g, over W_q.  Characters only see (tr A, tr A^2, mu),
so each sum is first collapsed to a multiset of power sums.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cache import DiskCache
from .characters import (
    CharacterPolynomial,
    SU2CharacterPolynomial,
    build_sp4_character,
    build_su2_character,
)
from .genus import FiniteGroup, GenusData, compute_W_theta_vectors, mass_check
from .hecke import HeckeRepSet, reps_from_W, vm_mul, vm_power_sums
from .lattice import bundled_record, enumerate_norm, unit_group

log = logging.getLogger(__name__)


class InternalConsistencyError(ArithmeticError):
    pass


class UnsupportedCaseError(ValueError):
    pass


class DataMissingError(LookupError):
    pass


class AmbiguousEigenvalueError(ValueError):
    def __init__(self, msg, dims=None, power_traces=None):
        super().__init__(msg)
        self.dims = dims
        self.power_traces = power_traces or {}


# -- elliptic dimension formulas ----------------------------------------------------------------


def level1_cusp_dim(k: int) -> int:
    """dim S_k(SL_2(Z))."""
    if k < 12 or k % 2:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def gamma0_cusp_dim(k: int, p: int) -> int:
    """dim S_k(Gamma_0(p)) for a prime p and even k >= 2."""
    if k < 2 or k % 2:
        return 0
    # elliptic points of order 2 and 3
    nu2 = 1 if p == 2 else 1 + _legendre(-1, p)
    nu3 = {2: 0, 3: 1}.get(p) if p in (2, 3) else 1 + _legendre(-3, p)
    d = (
        Fraction((k - 1) * (p + 1), 12)
        + (Fraction(k // 4) - Fraction(k - 1, 4)) * nu2
        + (Fraction(k // 3) - Fraction(k - 1, 3)) * nu3
        - 1
    )
    if k == 2:
        d += 1
    assert d.denominator == 1
    return int(d)


def gamma0_new_dim(k: int, p: int) -> int:
    """dim S_k^new(Gamma_0(p)) = dim S_k(Gamma_0(p)) - 2 dim S_k(SL_2(Z))."""
    return gamma0_cusp_dim(k, p) - 2 * level1_cusp_dim(k)


# -- power-sum profiles ---------------------------------------------------------------------------


def _profile_chunk(order, mats, left=None):
    prof = Counter()
    if left is None:
        for x in mats:
            prof[vm_power_sums(order, x)] += 1
    else:
        for x in mats:
            prof[vm_power_sums(order, vm_mul(order, left, x))] += 1
    return prof


def _chunks(seq, n):
    size = max(1, -(-len(seq) // n))
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def matrix_profile(order, mats, left=None, threads: int = 1) -> Counter:
    """Counter of (tr A, tr A^2) over ``mats`` (optionally premultiplied by ``left``).

    Chunks are merged by Counter addition, so the result does not depend on
    the number of workers.
    """
    mats = list(mats)
    if threads <= 1 or len(mats) < 2000:
        return _profile_chunk(order, mats, left)
    total = Counter()
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_profile_chunk, order, c, left) for c in _chunks(mats, 4 * threads)]
        for f in futures:
            total.update(f.result())
    return total


def trace_from_profile(profile: Counter, chi: CharacterPolynomial, theta, group_size: int) -> Fraction:
    total = Fraction(0)
    for (r1, r2), count in sorted(profile.items()):
        total += count * chi.evaluate_power_sums(r1, r2, theta)
    return total / group_size


def gu2_profile(mats) -> Counter:
    return Counter((*m.power_sums(), m.similitude if m.similitude is not None else m.compute_similitude()) for m in mats)


# -- literal trace formula on GU_2 matrices ----------------------------------------------


def dim_space(gamma: FiniteGroup, chi: CharacterPolynomial) -> int:
    """(1/|Gamma|) sum chi(gamma); must be a non-negative integer."""
    prof = gamma.power_sum_profile()
    total = Fraction(0)
    for (r1, r2, mu), count in sorted(prof.items()):
        total += count * chi.evaluate_power_sums(r1, r2, mu)
    total /= len(gamma)
    if total.denominator != 1 or total < 0:
        raise InternalConsistencyError(f"dimension {total} is not a non-negative integer")
    return int(total)


def trace_Tq(gamma2: FiniteGroup, reps: HeckeRepSet, chi: CharacterPolynomial) -> Fraction:
    """(1/|Gamma|) sum_{i, gamma} chi(u_i gamma), by explicit products."""
    prof = Counter()
    for u in reps.reps:
        for g in gamma2.elements:
            x = u * g
            prof[x.power_sums()] += 1
    return trace_from_profile(prof, chi, reps.q, len(gamma2))


def trace_Tq_power(gamma2: FiniteGroup, reps: HeckeRepSet, chi: CharacterPolynomial, d: int) -> Fraction:
    """tr(T^d) = (1/|Gamma|) sum over d-tuples of reps and gamma of chi(u_i1 ... u_id gamma)."""
    if d < 1:
        raise ValueError("power must be at least 1")
    prof = Counter()
    for tup in product(reps.reps, repeat=d):
        left = tup[0]
        for u in tup[1:]:
            left = left * u
        for g in gamma2.elements:
            prof[(left * g).power_sums()] += 1
    return trace_from_profile(prof, chi, reps.q**d, len(gamma2))


# -- D^x side ------------------------------------------------------------------------------------


def dim_quat_space(units, chi_j: SU2CharacterPolynomial) -> int:
    """(1/|O^x|) sum_u chi_j(u) for a list of unit quaternions."""
    total = sum((chi_j.evaluate(u.trace(), u.norm()) for u in units), Fraction(0)) / len(units)
    if total.denominator != 1 or total < 0:
        raise InternalConsistencyError(f"quaternionic dimension {total} is not an integer")
    return int(total)


def quat_trace_Tq(units, quat_reps, chi_j: SU2CharacterPolynomial) -> Fraction:
    """(1/|O^x|) sum_{i, u} chi_j(x_i u)."""
    total = Fraction(0)
    for x in quat_reps:
        for u in units:
            y = x * u
            total += chi_j.evaluate(y.trace(), y.norm())
    return total / len(units)


# -- per-prime context -----------------------------------------------------------------------------


# Eichler mass (p-1)/12 of O^x/{+-1}; the D^x class number is one iff it equals 2/|O^x|
def quaternion_class_number_one(p: int, unit_count: int) -> bool:
    return Fraction(p - 1, 12) == Fraction(2, unit_count)


class PrimeContext:
    """Everything the trace engine needs for one ramified prime, built lazily."""

    def __init__(self, p: int, cache: DiskCache | None = None, threads: int = 1):
        self.p = p
        self.cache = cache or DiskCache()
        self.threads = threads
        rec = bundled_record(p)
        self.order = rec.order
        self.genus = GenusData(rec.order, rec.lam, rec.mu)
        self._chars: dict = {}

    # Gamma^(2) and Y_theta, in the integral picture
    def W(self, theta: int):
        return self.cache.get(("W", self.p, theta), lambda: compute_W_theta_vectors(self.genus, theta))

    @property
    def gamma2_size(self) -> int:
        n = len(self.W(1))
        mass_check(self.p, None, n)
        return n

    def profile(self, theta: int) -> Counter:
        return self.cache.get(
            ("profile", self.p, theta),
            lambda: matrix_profile(self.order, self.W(theta), threads=self.threads),
        )

    def hecke_reps(self, q: int) -> HeckeRepSet:
        if q == self.p:
            raise UnsupportedCaseError("no Hecke operator at the ramified prime")
        return self.cache.get(
            ("reps", self.p, q), lambda: reps_from_W(self.genus, q, self.W(q), self.W(1))
        )

    def character(self, j: int, k: int) -> CharacterPolynomial:
        if (j, k) not in self._chars:
            self._chars[(j, k)] = self.cache.get(("chi", j, k), lambda: build_sp4_character(j, k))
        return self._chars[(j, k)]

    # traces and dimensions
    def dim_full(self, j: int, k: int) -> int:
        t = trace_from_profile(self.profile(1), self.character(j, k), 1, self.gamma2_size)
        if t.denominator != 1 or t < 0:
            raise InternalConsistencyError(f"dim A_{j},{k - 3} = {t} is not a non-negative integer")
        return int(t)

    def trace(self, q: int, j: int, k: int, power: int = 1) -> Fraction:
        chi = self.character(j, k)
        if q == self.p:
            raise UnsupportedCaseError("no Hecke operator at the ramified prime")
        if power == 1:
            t = trace_from_profile(self.profile(q), chi, q, self.gamma2_size)
        else:
            t = trace_from_profile(self.power_profile(q, power), chi, q**power, self.gamma2_size)
        if t.denominator != 1:
            raise InternalConsistencyError(f"trace {t} is not integral")
        return t

    def power_profile(self, q: int, d: int) -> Counter:
        def build():
            reps = self.hecke_reps(q).vec_reps
            Wq = self.W(q)
            prof = Counter()
            for tup in product(reps, repeat=d - 1):
                left = tup[0]
                for u in tup[1:]:
                    left = vm_mul(self.order, left, u)
                prof.update(matrix_profile(self.order, Wq, left, self.threads))
            return prof

        return self.cache.get(("power-profile", self.p, q, d), build)

    # Eichler side
    @property
    def units(self):
        return [self.order.element(v) for v in unit_group(self.order)]

    @property
    def quat_class_number_one(self) -> bool:
        return quaternion_class_number_one(self.p, len(unit_group(self.order)))

    def quat_new_dim(self, j: int) -> int:
        """n = dim S_{j+2}^new(Gamma_0(p))."""
        if j > 0 and self.quat_class_number_one:
            return dim_quat_space(self.units, build_su2_character(j))
        return gamma0_new_dim(j + 2, self.p)

    def quat_trace(self, q: int, j: int) -> Fraction:
        """Sum of a_q over the newforms in S_{j+2}^new(Gamma_0(p))."""
        if not self.quat_class_number_one:
            raise UnsupportedCaseError(
                f"O^x has class number > 1 for p={self.p}; the single-class trace formula does not apply"
            )
        chi = build_su2_character(j)
        Xq = [self.order.element(v) for v in enumerate_norm(self.order, q).vectors]
        units = self.units
        total = sum((chi.evaluate(x.trace(), x.norm()) for x in Xq), Fraction(0)) / len(units)
        return total

    def old_dim(self, j: int, k: int) -> int | None:
        return oldform_dimension(self, j, k)


def oldform_dimension(ctx: PrimeContext, j: int, k: int) -> int | None:
    """m*n, or None for (j, k) = (0, 3) where no old-space rule is available.

    For j = 0 the D^x side only carries constants, which match Eisenstein
    series rather than newforms, so n = dim S_2^new(Gamma_0(p)).
    """
    if (j, k) == (0, 3):
        return None
    m = level1_cusp_dim(j + 2 * k - 2)
    if m == 0:
        return 0
    return m * ctx.quat_new_dim(j)


def oldform_trace(ctx: PrimeContext, q: int, j: int, k: int, level1_traces) -> tuple[Fraction, int, int]:
    """tr(T_q)^old = n * sum a_q(g_i) + m * q^(k-2) * sum a_q(h_i).

    ``level1_traces`` maps (weight, q) to the trace of T_q on S_weight(SL_2(Z)).
    """
    if j <= 0 or j + 2 * k - 6 == 0:
        raise UnsupportedCaseError(f"oldform trace needs j > 0 and j+2k-6 != 0, got (j,k)=({j},{k})")
    if q == ctx.p:
        raise UnsupportedCaseError("q must differ from p")
    weight = j + 2 * k - 2
    m = level1_cusp_dim(weight)
    n = ctx.quat_new_dim(j)
    if m == 0 or n == 0:
        return Fraction(0), m, n
    if (weight, q) not in level1_traces:
        raise DataMissingError(f"no level-1 eigenvalue data for weight {weight} at q={q}")
    sum_g = Fraction(level1_traces[(weight, q)])
    sum_h = ctx.quat_trace(q, j)
    return n * sum_g + m * Fraction(q) ** (k - 2) * sum_h, m, n


@dataclass
class TraceResult:
    p: int
    q: int
    j: int
    k: int
    power: int
    total_trace: Fraction
    old_trace: Fraction | None
    new_trace: Fraction | None
    dims: tuple  # (full, old, new); old/new None when undefined

    @property
    def b_q(self) -> Fraction | None:
        return self.new_trace if self.dims[2] == 1 and self.power == 1 else None


def compute_trace(ctx: PrimeContext, q: int, j: int, k: int, level1_traces=None, power: int = 1) -> TraceResult:
    full = ctx.dim_full(j, k)
    total = ctx.trace(q, j, k, power)
    old_dim = oldform_dimension(ctx, j, k)
    new_dim = None if old_dim is None else full - old_dim
    old = None
    if old_dim == 0:
        old = Fraction(0)
    elif old_dim is not None and power == 1:
        old = oldform_trace(ctx, q, j, k, level1_traces or {})[0]
    new = None if old is None else total - old
    return TraceResult(ctx.p, q, j, k, power, total, old, new, (full, old_dim, new_dim))


def new_eigenvalue(ctx: PrimeContext, q: int, j: int, k: int, level1_traces=None) -> TraceResult:
    res = compute_trace(ctx, q, j, k, level1_traces)
    full, old_dim, new_dim = res.dims
    if new_dim != 1:
        hints = {}
        if full <= 3:
            hints = {d: ctx.trace(q, j, k, d) for d in range(1, full + 1)}
        raise AmbiguousEigenvalueError(
            f"new space has dimension {new_dim} (full {full}, old {old_dim}); b_q is not a single trace",
            res.dims,
            hints,
        )
    if res.new_trace.denominator != 1:
        raise InternalConsistencyError(f"eigenvalue {res.new_trace} is not integral")
    return res

