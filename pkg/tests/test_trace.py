import json
from pathlib import Path

import pytest

from paramodular.cache import DiskCache
from paramodular.genus import gamma1, gamma2
from paramodular.hecke import HeckeRepSet, quat_hecke_reps
from paramodular.characters import build_su2_character
from paramodular.quaternion import GU2Matrix
from paramodular.trace import (
    AmbiguousEigenvalueError,
    DataMissingError,
    PrimeContext,
    UnsupportedCaseError,
    compute_trace,
    dim_quat_space,
    dim_space,
    gamma0_cusp_dim,
    gamma0_new_dim,
    level1_cusp_dim,
    matrix_profile,
    new_eigenvalue,
    oldform_dimension,
    oldform_trace,
    quat_trace_Tq,
    quaternion_class_number_one,
    trace_Tq,
)

from oracles import charpoly_from_power_traces, level1_hecke_matrix


# -- elliptic dimensions -----------------------------------------------------------------


def test_level1_dimensions():
    for k in range(0, 60, 2):
        assert level1_cusp_dim(k) == len(level1_hecke_matrix(k, 2))
    assert [level1_cusp_dim(k) for k in (12, 14, 24, 26, 36)] == [1, 0, 2, 1, 3]


@pytest.mark.parametrize("p,k,dim", [(3, 10, 2), (3, 14, 3), (3, 16, 2), (11, 2, 1), (2, 2, 0), (7, 2, 0)])
def test_gamma0_new_dims(p, k, dim):
    assert gamma0_new_dim(k, p) == dim


def test_gamma0_dims_known_values():
    # S_2(Gamma_0(p)) has the genus of X_0(p) as its dimension
    assert [gamma0_cusp_dim(2, p) for p in (2, 3, 5, 7, 11, 13, 37)] == [0, 0, 0, 0, 1, 0, 2]
    assert gamma0_cusp_dim(12, 2) == 2
    assert gamma0_cusp_dim(3, 5) == 0


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_quaternionic_dims_match_gamma0_new(p, ctx):
    c = ctx(p)
    units = c.units
    for j in range(2, 31, 2):
        assert dim_quat_space(units, build_su2_character(j)) == gamma0_new_dim(j + 2, p)


def test_class_number_one():
    assert [quaternion_class_number_one(p, n) for p, n in ((2, 24), (3, 12), (5, 6), (7, 4), (11, 4))] == [
        True, True, True, True, False,
    ]


# -- the worked examples at p = 3 -----------------------------------------------------------


@pytest.mark.parametrize("j,k,trace", [(2, 8, -312), (8, 5, 300), (6, 5, 72)])
def test_p3_traces(j, k, trace, ctx):
    assert ctx(3).trace(2, j, k) == trace


def test_p3_dimensions(ctx):
    c = ctx(3)
    assert c.dim_full(2, 8) == 1 and c.old_dim(2, 8) == 0
    assert c.dim_full(8, 5) == 3 and c.old_dim(8, 5) == 2
    assert c.dim_full(6, 5) == 1


@pytest.mark.parametrize("j,dim", [(8, 2), (12, 3), (14, 2)])
def test_p3_quaternionic_dims(j, dim, ctx):
    assert dim_quat_space(ctx(3).units, build_su2_character(j)) == dim


@pytest.mark.parametrize("j,trace", [(8, -18), (12, -66), (14, -306)])
def test_p3_quaternionic_traces(j, trace, ctx):
    c = ctx(3)
    assert c.quat_trace(2, j) == trace
    reps = quat_hecke_reps(c.order, 2)
    assert quat_trace_Tq(c.units, reps, build_su2_character(j)) == trace


def test_p3_oldform_subtraction(ctx, l1):
    c = ctx(3)
    old, m, n = oldform_trace(c, 2, 8, 5, l1)
    assert (m, n) == (1, 2)
    assert old == 2 * 216 + 1 * 2**3 * (-36 + 18) == 288
    res = new_eigenvalue(c, 2, 8, 5, l1)
    assert res.dims == (3, 2, 1)
    assert res.b_q == 12
    assert new_eigenvalue(c, 2, 2, 8, l1).b_q == -312
    assert new_eigenvalue(c, 2, 6, 5, l1).b_q == 72


def test_power_two_on_one_dimensional_space(ctx):
    c = ctx(3)
    assert c.trace(2, 2, 8, power=2) == 312**2
    assert c.trace(2, 2, 8, power=1) == c.trace(2, 2, 8)


def test_literal_sum_matches_profile_route(ctx):
    c = ctx(3)
    G2 = gamma2(c.genus)
    reps = c.hecke_reps(2)
    assert trace_Tq(G2, reps, c.character(2, 8)) == -312
    assert trace_Tq(G2, reps, c.character(6, 5)) == 72


def test_identity_specialisation(ctx):
    c = ctx(7)
    G2 = gamma2(c.genus)
    ident = HeckeRepSet(7, 1, [GU2Matrix.identity(c.order.algebra)], "Gamma2")
    for j, k in [(0, 3), (2, 5), (4, 4), (8, 6)]:
        chi = c.character(j, k)
        assert trace_Tq(G2, ident, chi) == dim_space(G2, chi) == c.dim_full(j, k)


def test_trivial_representation_counts_constants(ctx):
    for p in (2, 3, 5, 7, 11):
        assert ctx(p).dim_full(0, 3) == 1
    assert dim_space(gamma1(ctx(3).order), ctx(3).character(0, 3)) == 1


def test_dimensions_integral_over_grid(ctx):
    for p in (2, 3, 5, 7, 11):
        c = ctx(p)
        for j in range(0, 21, 2):
            for k in range(3, 19):
                assert c.dim_full(j, k) >= 0


def test_traces_integral(ctx):
    c = ctx(5)
    for j in range(0, 13, 2):
        for k in range(3, 9):
            assert c.trace(2, j, k).denominator == 1


def test_schedule_independence():
    c1 = PrimeContext(3, cache=DiskCache(), threads=1)
    c3 = PrimeContext(3, cache=DiskCache(), threads=3)
    W = c1.W(2)
    assert matrix_profile(c1.order, W, threads=1) == matrix_profile(c1.order, W, threads=3)
    assert c1.trace(2, 8, 5) == c3.trace(2, 8, 5) == 300


def test_ambiguous_eigenvalue_reports_power_traces(ctx, l1):
    c = ctx(11)
    with pytest.raises(AmbiguousEigenvalueError) as info:
        new_eigenvalue(c, 2, 2, 5, l1)
    err = info.value
    assert err.dims == (2, 0, 2)
    t = err.power_traces
    assert sorted(t) == [1, 2]
    # eigenvalues of a Hecke operator are algebraic integers
    f = charpoly_from_power_traces([t[1], t[2]])
    assert all(x.denominator == 1 for x in f)


def test_unsupported_cases(ctx, l1):
    c3, c11 = ctx(3), ctx(11)
    with pytest.raises(UnsupportedCaseError):
        c3.trace(3, 2, 8)
    with pytest.raises(UnsupportedCaseError):
        c3.hecke_reps(3)
    with pytest.raises(UnsupportedCaseError):
        oldform_trace(c3, 2, 0, 10, l1)
    with pytest.raises(UnsupportedCaseError):
        oldform_trace(c3, 3, 8, 5, l1)
    with pytest.raises(UnsupportedCaseError):
        c11.quat_trace(2, 2)
    assert oldform_dimension(c3, 0, 3) is None
    res = compute_trace(c3, 2, 0, 3)
    assert res.dims == (1, None, None) and res.new_trace is None


def test_missing_level1_data(ctx):
    with pytest.raises(DataMissingError):
        oldform_trace(ctx(3), 2, 8, 5, {})


def test_p11_traces_without_quaternionic_input(ctx, l1):
    # the old space is empty for (2,4), so p = 11 needs no D^x trace
    res = new_eigenvalue(ctx(11), 2, 2, 4, l1)
    assert res.total_trace == -20 and res.b_q == -20
    assert ctx(11).quat_new_dim(0) == 1


def test_j0_rule_reproduces_printed_new_dims(ctx):
    """With n = dim S_2^new(Gamma_0(p)) every printed j = 0 cell comes out, (0,3) included as full."""
    tables = json.loads((Path(__file__).parent / "data" / "a1_newdims.json").read_text())["tables"]
    for p in (2, 3, 5, 7, 11):
        c = ctx(p)
        for kk, want in enumerate(tables[str(p)]["0"]):
            k = kk + 3
            old = c.old_dim(0, k)
            assert c.dim_full(0, k) - (old or 0) == want, (p, k)
