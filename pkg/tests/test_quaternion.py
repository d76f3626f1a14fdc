from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from paramodular.lattice import bundled_record
from paramodular.quaternion import (
    AlgebraMismatchError,
    GU2Matrix,
    QuadraticSurd,
    QuaternionAlgebra,
    SimilitudeError,
    embed_gsp4_power_sums,
    general_inverse,
    squarefree_part,
)

from oracles import numeric_power_sums

ALGEBRAS = [bundled_record(p).algebra for p in (2, 3, 5, 7, 11)]

coord = st.fractions(min_value=-20, max_value=20, max_denominator=6)
quat_coords = st.tuples(coord, coord, coord, coord)


def test_basis_relations():
    H = QuaternionAlgebra(-1, -1, 2)
    one, i, j, k = H.gens()
    assert i * j == k
    assert j * i == -k
    assert i * i == H.scalar(-1)
    assert k * k == H.scalar(-1)


def test_hurwitz_norm_of_mu():
    H = QuaternionAlgebra(-1, -1, 2)
    _, i, _, k = H.gens()
    mu = i - k
    assert mu * mu.conj() == H.scalar(2)
    assert mu.norm() == 2


def test_norm_of_lambda_for_p3():
    D = QuaternionAlgebra(-1, -3, 3)
    one, i, _, _ = D.gens()
    assert (one + i).norm() == 2


@pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: str(a))
@settings(max_examples=40, deadline=None)
@given(x=quat_coords, y=quat_coords)
def test_norm_multiplicative(alg, x, y):
    a, b = alg.element(x), alg.element(y)
    assert (a * b).norm() == a.norm() * b.norm()


@pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: str(a))
@settings(max_examples=40, deadline=None)
@given(x=quat_coords, y=quat_coords)
def test_conjugation_reverses_products(alg, x, y):
    a, b = alg.element(x), alg.element(y)
    assert (a * b).conj() == b.conj() * a.conj()


@pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: str(a))
@settings(max_examples=40, deadline=None)
@given(x=quat_coords)
def test_cayley_hamilton(alg, x):
    a = alg.element(x)
    assert (a * a - a * a.trace() + a.norm()).is_zero()


@settings(max_examples=30, deadline=None)
@given(x=quat_coords)
def test_inverse(x):
    alg = ALGEBRAS[1]
    a = alg.element(x)
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == alg.one()


def test_mixing_algebras_is_an_error():
    a, b = ALGEBRAS[0].one(), ALGEBRAS[1].one()
    with pytest.raises(AlgebraMismatchError):
        a * b


def test_identity_power_sums():
    I = GU2Matrix.identity(ALGEBRAS[0])
    assert I * I == I
    assert I.similitude == 1
    assert embed_gsp4_power_sums(I) == (4, 4)


def test_diag_unit_power_sums():
    # u = (1 + i + j + k)/2 in the Hurwitz order has trd 1, nrd 1
    H = ALGEBRAS[0]
    u = H.element([Fraction(1, 2)] * 4)
    assert (u.trace(), u.norm()) == (1, 1)
    g = GU2Matrix.unitary((u, H.zero(), H.zero(), u))
    r1, r2 = g.power_sums()
    assert (r1, r2) == (2, -2)
    n1, n2 = numeric_power_sums(g)
    assert abs(n1 - 2) < 1e-9 and abs(n2 + 2) < 1e-9


@pytest.mark.parametrize("alg", ALGEBRAS, ids=lambda a: str(a))
def test_power_sums_match_complex_matrix(alg):
    rng = random.Random(alg.ramified_prime)
    for _ in range(20):
        entries = [alg.element([rng.randint(-4, 4) for _ in range(4)]) for _ in range(4)]
        g = GU2Matrix(entries)
        r1, r2 = embed_gsp4_power_sums(g)
        n1, n2 = numeric_power_sums(g)
        assert abs(n1 - float(r1)) < 1e-9 * (1 + abs(n1))
        assert abs(n2 - float(r2)) < 1e-9 * (1 + abs(n2))


def test_complex_image_is_multiplicative():
    from oracles import gsp4_image
    import numpy as np

    alg = ALGEBRAS[3]
    rng = random.Random(5)
    for _ in range(10):
        x = GU2Matrix([alg.element([rng.randint(-3, 3) for _ in range(4)]) for _ in range(4)])
        y = GU2Matrix([alg.element([rng.randint(-3, 3) for _ in range(4)]) for _ in range(4)])
        assert np.allclose(gsp4_image(x * y), gsp4_image(x) @ gsp4_image(y))


def test_similitude_checks():
    alg = ALGEBRAS[1]
    one, i, j, k = alg.gens()
    g = GU2Matrix.unitary((one, i, i, one))
    assert g.similitude == 2
    assert g * g.conj_transpose() == GU2Matrix.diag(alg.scalar(2), alg.scalar(2))
    h = g * GU2Matrix.unitary((j, alg.zero(), alg.zero(), j))
    assert h.similitude == 6 and h.compute_similitude() == 6
    with pytest.raises(SimilitudeError):
        GU2Matrix.unitary((one, one, alg.zero(), one))
    with pytest.raises(SimilitudeError):
        GU2Matrix.unitary((one, i, i, one), similitude=3)


def test_inverse_of_unitary_and_general():
    alg = ALGEBRAS[2]
    one, i, j, k = alg.gens()
    g = GU2Matrix.unitary((one, i, i, one))
    assert g * g.inverse() == GU2Matrix.identity(alg)
    m = GU2Matrix((one + j, k, i, one))
    assert m * general_inverse(m) == GU2Matrix.identity(alg)
    z = GU2Matrix((alg.zero(), i, j, one))
    assert z * general_inverse(z) == GU2Matrix.identity(alg)


def test_squarefree_part():
    assert squarefree_part(72) == (2, 6)
    assert squarefree_part(1969) == (1969, 1)
    assert squarefree_part(1) == (1, 1)


def test_quadratic_surd_arithmetic():
    r = QuadraticSurd.sqrt_of(1969 * 9)
    assert (r.rational, r.surd, r.radicand) == (0, 3, 1969)
    a = -27 + r
    b = -27 - r
    assert (a * b).is_rational()
    assert (a * b).rational == 27**2 - 9 * 1969
    assert (a + b).rational == -54
    assert (a / a).rational == 1 and (a / a).surd == 0
    with pytest.raises(ValueError):
        QuadraticSurd(1, 1, 4)
