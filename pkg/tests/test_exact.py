import os

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from zwork.exact import (
    GF,
    QQ,
    DualRing,
    DualScalar,
    field_from_spec,
    free_rank_dual,
    kernel_basis,
    mat_mul,
    mat_vec,
    SparseEchelon,
    rank,
    rref,
    solve,
    sparse_solve,
)

small = st.integers(min_value=-4, max_value=4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@given(matrices())
def test_rank_matches_sympy(m):
    # [DERIVED] sympy is the independent oracle
    q = [[QQ(x) for x in row] for row in m]
    assert rank(q) == sympy.Matrix(m).rank()
    assert rref(q, len(m[0]))[1] == sympy.Matrix(m).rank()


@given(matrices())
def test_rref_pivots_match_sympy(m):
    q = [[QQ(x) for x in row] for row in m]
    R, rk, piv = rref(q, len(m[0]))
    S, spiv = sympy.Matrix(m).rref()
    assert tuple(piv) == spiv
    for i, row in enumerate(R):
        assert [sympy.Rational(str(x)) for x in row] == list(S.row(i))


@given(matrices())
def test_kernel_is_kernel_and_complete(m):
    q = [[QQ(x) for x in row] for row in m]
    n = len(m[0])
    K = kernel_basis(q, n, QQ)
    assert len(K) == n - sympy.Matrix(m).rank()
    for v in K:
        assert all(x == 0 for x in mat_vec(q, v))


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(m, x):
    q = [[QQ(v) for v in row] for row in m]
    x = [QQ(v) for v in x[: len(m[0])]]
    b = mat_vec(q, x)
    y = solve(q, b, len(m[0]), QQ)
    assert y is not None and mat_vec(q, y) == b


def test_solve_inconsistent_and_mismatch():
    q = [[QQ(1), QQ(1)], [QQ(1), QQ(1)]]
    assert solve(q, [QQ(0), QQ(1)], 2, QQ) is None  # [TRIVIAL]
    with pytest.raises(ValueError):
        solve(q, [QQ(0)], 2, QQ)
    with pytest.raises(ValueError):
        mat_vec(q, [QQ(1)])


@given(st.integers(0, 12), st.integers(1, 12))
def test_gf_field_axioms(a, b):
    F = GF(13)
    x, y = F(a), F(b)
    assert (x / y) * y == x
    assert x - x == F.zero and x + F.zero == x
    assert F(a * b) == x * y


def test_gf_rejects_composite_and_spec(monkeypatch):
    with pytest.raises(ValueError):
        GF(12)
    assert field_from_spec("GF(7)").characteristic == 7
    monkeypatch.setenv("ZWORK_FIELD", "GF(5)")
    assert field_from_spec(None).characteristic == 5


def test_rank_over_gf_differs_from_q():
    # [TRIVIAL] det = 6 vanishes mod 2 and mod 3
    m = [[2, 0], [0, 3]]
    assert rank([[GF(2)(x) for x in r] for r in m]) == 1
    assert rank([[QQ(x) for x in r] for r in m]) == 2


@given(small, small, small, small, small, small)
def test_dual_numbers_ring_axioms(a, b, c, d, e, f):
    x, y, z = DualScalar(QQ(a), QQ(b)), DualScalar(QQ(c), QQ(d)), DualScalar(QQ(e), QQ(f))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    eps = DualRing(QQ).eps
    assert eps * eps == 0
    if a != 0:
        assert (y / x) * x == y


def test_free_rank_dual():
    R = DualRing(QQ)
    one, eps = R.one, R.eps
    # R^2 / (eps e1): eps-torsion, not free  [TRIVIAL]
    assert free_rank_dual(2, [[eps, R.zero]], QQ) is None
    # R^2 / (e1 + eps e2): free of rank 1  [TRIVIAL]
    assert free_rank_dual(2, [[one, eps]], QQ) == 1
    assert free_rank_dual(3, [], QQ) == 3


def test_mat_mul_identity():
    a = [[QQ(1), QQ(2)], [QQ(3), QQ(4)]]
    i = [[QQ(1), QQ(0)], [QQ(0), QQ(1)]]
    assert mat_mul(a, i) == a


small_matrices = st.integers(1, 6).flatmap(
    lambda m: st.lists(st.lists(st.integers(-2, 2), min_size=m, max_size=m), min_size=1, max_size=6))


@given(small_matrices)
def test_sparse_echelon_matches_dense(rows):
    # [DERIVED] dense elimination is the oracle
    m = len(rows[0])
    M = [[QQ(x) for x in r] for r in rows]
    E = SparseEchelon(QQ)
    for r in M:
        E.add({j: x for j, x in enumerate(r) if x != 0})
    assert E.rank == rank(M, m)
    K = E.kernel(m)
    assert len(K) == m - E.rank
    for k in K:
        assert all(sum((r[j] * x for j, x in k.items()), QQ.zero) == 0 for r in M)
    b = [sum((r[j] * QQ(j + 1) for j in range(m)), QQ.zero) for r in M]
    x = sparse_solve([{j: v for j, v in enumerate(r) if v != 0} for r in M], b, m, QQ)
    assert [sum((r[j] * x[j] for j in range(m)), QQ.zero) for r in M] == b
    # the equation 0 = 1 makes the system inconsistent
    assert sparse_solve([{j: v for j, v in enumerate(r) if v != 0} for r in M] + [{}], b + [QQ(1)], m, QQ) is None
