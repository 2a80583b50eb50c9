from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ctxlogic.errors import DimensionMismatch, InvalidInput
from ctxlogic.gaussian import GaussianRational as G, parse
from ctxlogic.geometry import (
    Operator,
    Projector,
    Ray,
    apply_function,
    are_orthogonal,
    as_matrix,
    mat_mul,
    projector_from_ray,
    sum_is_identity,
)


def P(*rows):
    return Projector(as_matrix(rows))


def diag(*xs):
    n = len(xs)
    return P(*[[xs[i] if i == j else 0 for j in range(n)] for i in range(n)])


class TestProjectorFromRay:
    def test_standard_basis(self):
        assert projector_from_ray(Ray([1, 0])) == P([1, 0], [0, 0])

    def test_diagonal_ray(self):
        assert projector_from_ray(Ray([1, 1])) == P(["1/2", "1/2"], ["1/2", "1/2"])

    def test_complex_ray(self):
        assert projector_from_ray(Ray(["1", "i"])) == P(["1/2", "-1/2*i"], ["1/2*i", "1/2"])

    def test_zero_ray(self):
        with pytest.raises(InvalidInput):
            Ray([0, 0])

    def test_rank_one(self):
        assert projector_from_ray(Ray([1, "i", "2-i"])).rank == 1


class TestOrthogonality:
    def test_diagonal(self):
        assert are_orthogonal(diag(1, 0), diag(0, 1))

    def test_self(self):
        p = projector_from_ray(Ray([1, 2]))
        assert not are_orthogonal(p, p)

    def test_plus_minus(self):
        assert are_orthogonal(projector_from_ray(Ray([1, 1])), projector_from_ray(Ray([1, -1])))

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            are_orthogonal(diag(1, 0), diag(1, 0, 0))


class TestSumIsIdentity:
    def test_complete(self):
        assert sum_is_identity([diag(1, 0), diag(0, 1)])

    def test_incomplete(self):
        assert not sum_is_identity([diag(1, 0)])

    def test_dim4_basis(self):
        rays = [[1, 1, 0, 0], [1, -1, 0, 0], [0, 0, 1, "i"], [0, 0, 1, "-i"]]
        assert sum_is_identity([projector_from_ray(Ray(r)) for r in rays])

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sum_is_identity([diag(1, 0), diag(0, 0, 1)])


def test_projector_validation():
    with pytest.raises(InvalidInput):
        P([1, 1], [0, 0])  # idempotent but not self-adjoint
    with pytest.raises(InvalidInput):
        P([2, 0], [0, 0])


class TestApplyFunction:
    def test_identity(self):
        a = Operator([(1, diag(1, 0)), (2, diag(0, 1))])
        assert apply_function(a, lambda x: x) == a

    def test_square_collapses(self):
        a = Operator([(1, diag(1, 0)), (-1, diag(0, 1))])
        b = apply_function(a, lambda x: x * x)
        assert b.eigenvalues == (1,)
        assert b.projectors == (diag(1, 1),)

    def test_min_coarsening(self):
        p0, p1, p2 = diag(1, 0, 0), diag(0, 1, 0), diag(0, 0, 1)
        a = Operator([(0, p0), (1, p1), (2, p2)])
        b = apply_function(a, lambda x: min(x, 1))
        # hand evaluation: 0 -> 0, 1 -> 1, 2 -> 1, so P1 and P2 merge
        assert b.spectrum == ((0, p0), (1, diag(0, 1, 1)))

    def test_mapping_argument(self):
        a = Operator([(0, diag(1, 0)), (5, diag(0, 1))])
        assert apply_function(a, {0: 3, 5: 3}).eigenvalues == (3,)


def test_operator_invariants():
    with pytest.raises(InvalidInput):
        Operator([(1, diag(1, 0)), (1, diag(0, 1))])
    with pytest.raises(InvalidInput):
        Operator([(1, diag(1, 0)), (2, diag(1, 0))])
    with pytest.raises(InvalidInput):
        Operator([(1, diag(1, 0, 0)), (2, diag(0, 1, 0))])


# -- properties ---------------------------------------------------------------

small = st.fractions(min_value=-4, max_value=4, max_denominator=6)
gauss = st.builds(G, small, small)


def matrices(n):
    return st.lists(st.lists(gauss, min_size=n, max_size=n).map(tuple), min_size=n, max_size=n).map(tuple)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(matrices(n), matrices(n), matrices(n))))
def test_matrix_product_associative(mats):
    p, q, r = mats
    assert mat_mul(mat_mul(p, q), r) == mat_mul(p, mat_mul(q, r))


rays = st.integers(2, 4).flatmap(lambda n: st.lists(gauss, min_size=n, max_size=n)).filter(any)


@settings(max_examples=60, deadline=None)
@given(rays, gauss.filter(bool))
def test_projector_scale_invariant(entries, c):
    v = Ray(entries)
    p = projector_from_ray(v)
    assert projector_from_ray(v.scaled(c)) == p
    assert mat_mul(p.matrix, p.matrix) == p.matrix
    assert p == Projector(p.matrix)  # passes the validating constructor


def _spectral_operator(values, n):
    basis = [diag(*[1 if i == j else 0 for j in range(n)]) for i in range(n)]
    groups = {}
    for v, p in zip(values, basis):
        groups[v] = groups[v] + p if v in groups else p
    return Operator(groups.items())


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-3, 3), min_size=2, max_size=4),
    st.dictionaries(st.integers(-3, 3), st.integers(-2, 2), min_size=7, max_size=7),
    st.dictionaries(st.integers(-2, 2), st.integers(-2, 2), min_size=5, max_size=5),
)
def test_apply_function_composes(values, f, g):
    a = _spectral_operator(values, len(values))
    fa = apply_function(a, lambda x: f[int(x)])
    assert apply_function(fa, lambda x: g[int(x)]) == apply_function(a, lambda x: g[f[int(x)]])
    projs = fa.projectors
    assert sum_is_identity(projs)
    assert all(are_orthogonal(p, q) for i, p in enumerate(projs) for q in projs[i + 1:])
