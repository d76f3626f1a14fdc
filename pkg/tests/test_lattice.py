from fractions import Fraction

import pytest

from paramodular.lattice import (
    SUPPORTED_PRIMES,
    bundled_record,
    enumerate_norm,
    load_algebra_records,
    orbit_reps,
    unit_group,
)

from oracles import brute_norm_vectors

ORDERS = {p: bundled_record(p).order for p in SUPPORTED_PRIMES}


@pytest.mark.parametrize("p", SUPPORTED_PRIMES)
@pytest.mark.parametrize("n", range(7))
def test_enumeration_matches_brute_force(p, n):
    order = ORDERS[p]
    assert list(enumerate_norm(order, n).vectors) == brute_norm_vectors(order, n)


def test_zero_norm():
    nl = enumerate_norm(ORDERS[2], 0)
    assert list(nl.vectors) == [(0, 0, 0, 0)]
    with pytest.raises(ValueError):
        enumerate_norm(ORDERS[2], -1)


def test_hurwitz_theta_series():
    counts = [len(enumerate_norm(ORDERS[2], n)) for n in range(4)]
    assert counts == [1, 24, 24, 96]


@pytest.mark.parametrize("p,size", [(2, 24), (3, 12), (5, 6), (7, 4), (11, 4)])
def test_unit_group(p, size):
    order = ORDERS[p]
    units = unit_group(order)
    assert len(units) == size
    one = order.coordinates_int(order.algebra.one())
    s = set(units)
    for u in units:
        assert any(order.mul_vec(u, v) == one for v in units)
        for v in units:
            assert order.mul_vec(u, v) in s


def test_hurwitz_norm3_classes():
    order = ORDERS[2]
    X3 = enumerate_norm(order, 3).vectors
    units = unit_group(order)
    reps = orbit_reps(X3, units, order, "right")
    assert len(reps) == 4
    # each class contains exactly one of 1 +- i +- j
    H = order.algebra
    one, i, j, _ = H.gens()
    named = {order.coordinates_int(one + s * i + t * j) for s in (1, -1) for t in (1, -1)}
    for r in reps:
        orbit = {order.mul_vec(r, u) for u in units}
        assert len(orbit & named) == 1


@pytest.mark.parametrize("p", SUPPORTED_PRIMES)
def test_orbits_are_free(p):
    order = ORDERS[p]
    units = unit_group(order)
    for n in (1, 2, 3, 4):
        X = enumerate_norm(order, n).vectors
        assert len(X) % len(units) == 0
        assert len(orbit_reps(X, units, order, "right")) * len(units) == len(X)
        assert len(orbit_reps(X, units, order, "left")) * len(units) == len(X)


def test_norm1_classes_are_trivial():
    order = ORDERS[3]
    reps = orbit_reps(unit_group(order), unit_group(order), order)
    # one class, represented by its least member -1
    assert reps == [(-1, 0, 0, 0)]


@pytest.mark.parametrize("p", SUPPORTED_PRIMES)
def test_norm_divisible_by_p_squared(p):
    # an element of norm p^2 n lies in pO, so X_{p^2 n} = p X_n
    order = ORDERS[p]
    for n in (1, 2):
        big = set(enumerate_norm(order, p * p * n).vectors)
        assert big == {tuple(p * c for c in v) for v in enumerate_norm(order, n).vectors}


def test_orbit_reps_rejects_bad_input():
    order = ORDERS[2]
    X = enumerate_norm(order, 1).vectors
    with pytest.raises(ValueError):
        orbit_reps(X[:3], unit_group(order), order)
    with pytest.raises(ValueError):
        orbit_reps(X, unit_group(order), order, side="middle")


def test_order_closure_and_membership():
    order = ORDERS[5]
    alg = order.algebra
    for x in order.basis:
        for y in order.basis:
            assert order.contains(x * y)
        assert x.norm().denominator == 1 and x.trace().denominator == 1
    assert not order.contains(alg.element([Fraction(1, 3), 0, 0, 0]))


@pytest.mark.parametrize("p", SUPPORTED_PRIMES)
def test_bundled_pairs(p):
    rec = load_algebra_records()[p]
    assert rec.lam.norm() == p - 1
    assert rec.mu.norm() == p
    assert (rec.lam * rec.mu.conj()).trace() == 0


def test_bundled_pairs_examples():
    H = bundled_record(2).algebra
    one, i, j, k = H.gens()
    assert bundled_record(2).lam == one and bundled_record(2).mu == i - k
    one, i, j, k = bundled_record(3).algebra.gens()
    assert bundled_record(3).lam == one + i and bundled_record(3).mu == j
    one, i, j, k = bundled_record(7).algebra.gens()
    assert bundled_record(7).lam == one * 2 + i * Fraction(1, 2) - k * Fraction(1, 2)


def test_unknown_prime():
    with pytest.raises(ValueError):
        bundled_record(13)
