import pytest
from hypothesis import given
from hypothesis import strategies as st

from zwork.algebra import WindowAlgebra
from zwork.builtins import projective_space
from zwork.complexes import (
    ChainMap,
    Complex,
    ComplexError,
    cartan_pairing,
    composite_mutation,
    cone,
    direct_sum,
    hom_complex,
    identity_map,
    iso_in_derived,
    left_mutation,
    materialize,
    minimize,
    projective,
    rhom,
    right_mutation,
    sequence_report,
    shift,
    verify_helix,
)
from zwork.status import Status
from zwork.thread import extract_thread

P1W = WindowAlgebra(projective_space(1), -3, 3)
P2W = WindowAlgebra(projective_space(2), -4, 3)
KRON = extract_thread(P1W, 0, 1)  # objects -1, 0: P_0 = O, P_-1 = O(1)
BEIL = extract_thread(P2W, 0, 2)  # objects -2, -1, 0


def O(T, j, degree=0):
    return projective(T, -j, degree)


def var(T, label, c, r):
    """Coordinates of the variable ``label`` in ``hom(c, r)``, located by its word."""
    return {T.basis(c, r).index((label,)): T.field.one}


def koszul_p1_minus_one_shifted():
    # O(-1)[1] = [O^2 -> O(1)] with O(1) in degree 0 (Euler sequence)
    T = KRON
    d = {-1: {(0, 0): var(T, "x0", 0, -1), (0, 1): var(T, "x1", 0, -1)}}
    return Complex(T, {-1: (0, 0), 0: (-1,)}, d)


def koszul_p2_three():
    # O(3) = [O -> O(1)^3 -> O(2)^3] with O(2)^3 in degree 0
    T = BEIL
    x = [lambda c, r, i=i: var(T, f"x{i}", c, r) for i in range(3)]
    neg = lambda v: {k: -a for k, a in v.items()}
    d0 = {(i, 0): x[i](0, -1) for i in range(3)}
    X = [x[i](-1, -2) for i in range(3)]
    d1 = {(0, 1): neg(X[2]), (0, 2): X[1], (1, 0): X[2], (1, 2): neg(X[0]), (2, 0): neg(X[1]), (2, 1): X[0]}
    return Complex(T, {-2: (0,), -1: (-1, -1, -1), 0: (-2, -2, -2)}, {-2: d0, -1: d1})


def test_thread_dimensions():
    # [DERIVED] Kronecker 1+1+2, Beilinson 3*1 + 2*3 + 6
    assert KRON.total_dim() == 4
    assert BEIL.total_dim() == 15
    assert len(BEIL.idempotents()) == 3


def test_thread_outside_window_rejected():
    with pytest.raises(ValueError):
        extract_thread(P1W, 5, 1)


def test_dd_zero_enforced():
    T = KRON
    bad = Complex(T, {-1: (0,), 0: (-1,), 1: (-1,)}, {}, check=False)
    d = {-1: {(0, 0): var(T, "x0", 0, -1)}, 0: {(0, 0): {0: T.field.one}}}
    with pytest.raises(ComplexError):
        Complex(T, bad.terms, d)


def test_koszul_oracle_rhom():
    # [DERIVED] RHom(O, O(-1)[1]) = 0 and RHom(O(1), O(-1)[1]) = k in degree 0
    K = koszul_p1_minus_one_shifted()
    assert rhom(O(KRON, 0), K) == {}
    assert rhom(O(KRON, 1), K) == {0: 1}


def test_left_mutation_matches_koszul_oracle():
    L = left_mutation(O(KRON, 0), O(KRON, 1))
    assert iso_in_derived(L, koszul_p1_minus_one_shifted())["status"] is Status.TRUE


def test_materialized_twist_matches_koszul():
    assert iso_in_derived(materialize(BEIL, -3), koszul_p2_three())["status"] is Status.TRUE


def test_beilinson_composite_mutation():
    # [DERIVED] L_(O(1), O(2)) O(3) = O[2]
    X = composite_mutation([O(BEIL, 1), O(BEIL, 2)], materialize(BEIL, -3))
    assert iso_in_derived(X, O(BEIL, 0, -2))["status"] is Status.TRUE


def test_cone_of_identity_is_contractible():
    K = koszul_p2_three()
    assert minimize(cone(identity_map(K))).is_zero()


def test_iso_rejects_shift():
    r = iso_in_derived(O(KRON, 0), O(KRON, 0, 1))
    assert r["status"] is Status.FALSE and r["reason"] == "shift mismatch"


@given(st.integers(0, 1), st.integers(0, 1), st.integers(-1, 1))
def test_shift_rhom(a, b, s):
    # RHom(X, Y[s]) is RHom(X, Y) moved by s
    X, Y = O(KRON, a), O(KRON, b)
    base = rhom(X, Y)
    assert rhom(X, shift(Y, s)) == {k - s: v for k, v in base.items()}


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_triangle_euler_additivity(a, b, z):
    # chi(Z, cone f) = chi(Z, Y) - chi(Z, X) for any chain map f
    X, Y, Z = O(BEIL, a), O(BEIL, b), O(BEIL, z)
    H = hom_complex(X, Y)
    reps = H.cocycles(0)
    comps = H.to_map(0, reps[0]) if reps else {}
    C = cone(ChainMap(X, Y, comps))
    assert cartan_pairing(Z, C) == cartan_pairing(Z, Y) - cartan_pairing(Z, X)
    hz = rhom(Z, C)
    assert sum((-1) ** k * v for k, v in hz.items()) == cartan_pairing(Z, C)


def test_right_undoes_left_on_exceptional_pair():
    E, C = O(KRON, 0), O(KRON, 1)
    back = right_mutation(E, left_mutation(E, C))
    assert iso_in_derived(back, C)["status"] is Status.TRUE


def test_left_mutation_lands_in_perpendicular():
    E = O(BEIL, 0)
    L = left_mutation(E, O(BEIL, 2))
    assert rhom(E, L) == {}


def test_beilinson_strong_tables():
    # [DERIVED] backward zero, diagonal k, forward (3, 3, 6) in degree 0
    r = sequence_report([O(BEIL, 0), O(BEIL, 1), O(BEIL, 2)])
    t = r["tables"]
    assert r["exceptional"] is Status.TRUE and r["strong"] is Status.TRUE
    assert [t[f"{i},{i}"] for i in range(3)] == [{"0": 1}] * 3
    assert all(t[f"{i},{j}"] == {} for i in range(3) for j in range(i))
    assert (t["0,1"], t["1,2"], t["0,2"]) == ({"0": 3}, {"0": 3}, {"0": 6})


def test_reversed_sequence_not_exceptional():
    r = sequence_report([O(KRON, 1), O(KRON, 0)])
    assert r["exceptional"] is Status.FALSE


def test_direct_sum_not_exceptional():
    S = direct_sum([O(KRON, 0), O(KRON, 0)])
    assert rhom(S, S) == {0: 4}


@pytest.mark.parametrize("T,d,ok", [(KRON, 2, True), (BEIL, 3, True), (BEIL, 2, False)],
                         ids=["P1-2-2", "P2-3-3", "P2-3-2"])
def test_helix(T, d, ok):
    n = len(T.objects)
    for t in range(-T.hi - 1 + n, -T.lo + 2):
        r = verify_helix(T, t, d)
        assert (r["status"] is Status.TRUE) == ok
        if not ok:
            assert r["reason"] == "shift mismatch"
