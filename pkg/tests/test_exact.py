from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from toricgit.exact import (
    Cone,
    ResourceLimitError,
    check_witness,
    cone_contains,
    cone_intersect,
    determinant,
    dual_cone,
    feasible,
    has_nonzero_point,
    hermite_normal_form,
    in_generator_hull,
    in_lattice,
    integer_kernel,
    is_saturated,
    is_zero,
    mat_mul,
    mat_vec,
    primitive,
    rank,
    same_lattice,
    satisfies_facets,
)

small = st.integers(-4, 4)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def is_row_hnf(H):
    last = -1
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            last = len(row)
            continue
        p = nz[0]
        if p <= last or row[p] <= 0:
            return False
        last = p
    return True


def test_hnf_small_example():
    H, U = hermite_normal_form([[2, 4], [1, 3]])
    assert mat_mul(U, [[2, 4], [1, 3]]) == H
    assert H == [[1, 1], [0, 2]]
    assert abs(determinant(U)) == 1


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hnf_is_unimodular_and_echelon(M):
    H, U = hermite_normal_form(M)
    assert mat_mul(U, M) == H
    assert abs(determinant(U)) == 1
    assert is_row_hnf(H)
    # entries above pivots are reduced
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            p = nz[0]
            assert all(0 <= H[k][p] < row[p] for k in range(i))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_is_saturated_basis(M):
    n = len(M[0])
    K = integer_kernel(M)
    assert len(K) == n - rank(M)
    for v in K:
        assert list(mat_vec(M, v)) == [0] * len(M)
    if K:
        assert is_saturated(K)


def test_kernel_saturation_oracle():
    # every small integer kernel vector lies in the lattice spanned by the basis
    M = [[2, 4, 6], [1, 2, 3]]
    K = integer_kernel(M)
    for v in product(range(-3, 4), repeat=3):
        if list(mat_vec(M, v)) == [0, 0]:
            assert in_lattice(K, v)


def test_same_lattice_and_membership():
    assert same_lattice([[1, 2], [0, 3]], [[1, -1], [0, 3]])
    assert not in_lattice([[2, 0], [0, 2]], (1, 1))
    assert in_lattice([[2, 0], [0, 2]], (2, -4))


def test_primitive_and_float_rejection():
    assert primitive([Fraction(1, 2), Fraction(3, 2)]) == (1, 3)
    assert primitive([0, -4, 6]) == (0, -2, 3)
    with pytest.raises(TypeError):
        feasible(1, weak=[([1.0], 0)])


def test_feasible_strict_and_infeasible():
    assert feasible(2, strict=[(1, 0), (0, 1)]) is not None
    assert feasible(1, strict=[(1,), (-1,)]) is None
    x = feasible(2, equalities=[((1, 1), 3)], weak=[((1, -1), 1)], nonneg=[0, 1])
    assert check_witness(x, equalities=[((1, 1), 3)], weak=[((1, -1), 1)], nonneg=[0, 1])
    assert list(feasible(3)) == [0, 0, 0]


def test_cone_facets_of_quadrant_and_ray():
    C = Cone(2, ((1, 0), (0, 1)))
    assert {f.normal for f in C.facets} == {(1, 0), (0, 1)}
    R = Cone(2, ((2, 4),))
    assert R.generators == ((1, 2),)
    assert R.dim == 1
    assert cone_contains(R, (3, 6))
    assert not cone_contains(R, (3, 5))
    assert not cone_contains(R, (0, 0), "relative_interior")


def test_membership_examples():
    C = Cone(3, ((1, 2, 0), (0, 1, 0), (0, 0, 1)))
    assert {f.normal for f in C.facets} == {(1, 0, 0), (-2, 1, 0), (0, 0, 1)}
    assert cone_contains(C, (1, 2, 1))
    assert not cone_contains(C, (1, 1, 0))
    assert cone_contains(C, (0, 0, 0))
    with pytest.raises(ValueError):
        cone_contains(C, (1, 1))
    empty = Cone(2, ())
    assert is_zero(empty) and len(empty.equations) == 2


def test_intersection_and_dual():
    A = Cone(2, ((1, 0), (1, 1)))
    B = Cone(2, ((0, 1), (1, 1)))
    inter = cone_intersect([A, B])
    assert inter.generators == ((1, 1),)
    assert set(dual_cone(Cone(2, ((1, 0), (0, 1)))).generators) == {(1, 0), (0, 1)}
    assert is_zero(cone_intersect([Cone(1, ((1,),)), Cone(1, ((-1,),))]))
    assert has_nonzero_point(inter) is not None


def test_resource_limit():
    with pytest.raises(ResourceLimitError):
        Cone(13, tuple(tuple(int(i == j) for j in range(13)) for i in range(13))).facets


vectors3 = st.lists(small, min_size=3, max_size=3)


@settings(max_examples=120, deadline=None)
@given(st.lists(vectors3, min_size=1, max_size=5), vectors3)
def test_facet_route_matches_lp_route(gens, v):
    C = Cone(3, tuple(tuple(g) for g in gens))
    assert satisfies_facets(C, v) == in_generator_hull(C, v)
    for g in C.generators:
        assert cone_contains(C, g)


@settings(max_examples=80, deadline=None)
@given(st.lists(vectors3, min_size=1, max_size=5))
def test_double_dual(gens):
    C = Cone(3, tuple(tuple(g) for g in gens))
    CC = dual_cone(dual_cone(C))
    assert all(cone_contains(CC, g) for g in C.generators)
    assert all(cone_contains(C, g) for g in CC.generators)
