from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import monomial_dim
from zwork.algebra import WindowAlgebra
from zwork.builtins import projective_space, quantum_projective_space
from zwork.deformation import deform_window
from zwork.modules import (
    Submodule,
    direct_sum,
    generated_submodule,
    identity_map,
    ideal,
    is_finitely_generated_module,
    is_right_bounded,
    is_torsion,
    minimal_generators,
    representable,
    representable_map,
    submodule_product,
    truncate,
)
from zwork.status import Status

P2 = WindowAlgebra(projective_space(2), -2, 3)
P1 = WindowAlgebra(projective_space(1), -3, 3)


def test_representable_dims_match_oracle():
    # [DERIVED] monomial count
    for m in P2.objects:
        R = representable(P2, m)
        for n in P2.objects:
            assert R.dim(n) == monomial_dim(n, m, 2)
        assert R.validate()


@given(st.integers(-2, 1), st.integers(0, 1), st.data())
def test_action_matches_composition(m, gap, data):
    # v . a computed by the module equals compose in the algebra
    w = P2
    R = representable(w, m)
    n = min(m + gap, w.hi)
    k = min(n + data.draw(st.integers(0, 2)), w.hi)
    i = data.draw(st.integers(0, w.dim(n, m) - 1))
    j = data.draw(st.integers(0, w.dim(k, n) - 1))
    v = [w.field.zero] * w.dim(n, m)
    v[i] = w.field.one
    got = R.act(v, n, k, {j: w.field.one})
    want = w.compose(k, n, m, {j: w.field.one}, {i: w.field.one})
    assert {a: x for a, x in enumerate(got) if x != 0} == want


def test_truncation_splits_dimensions():
    R = representable(P2, -1)
    ge, lt = truncate(R, 1)
    for n in P2.objects:
        assert ge.dim(n) + lt.dim(n) == R.dim(n)
        assert ge.dim(n) == (R.dim(n) if n >= 1 else 0)


def test_truncation_quotient_is_torsion_and_bounded():
    R = representable(P1, -1)
    _, Q = truncate(R, 0)
    assert is_torsion(Q)["status"] is Status.TRUE
    assert is_right_bounded(Q)["status"] is Status.TRUE


def test_representable_is_not_torsion():
    assert is_torsion(representable(P1, -1))["status"] is Status.FALSE


def test_representable_has_one_generator():
    # [TRIVIAL] hom(-, m) is generated by the identity
    for m in (-2, 0):
        g = minimal_generators(representable(P2, m))
        assert list(g) == [m] and len(g[m]) == 1
        assert is_finitely_generated_module(representable(P2, m))["count"] == 1


def test_plus_ideal_generators_are_the_variables():
    # [PAPER] the positive ideal is generated in degree one by d+1 elements
    I = ideal(P2, "plus")
    M = I[-2].as_module()
    g = minimal_generators(M)
    assert {n: len(v) for n, v in g.items()} == {-1: 3}


def test_generated_submodule_is_closed():
    R = representable(P2, 0)
    S = generated_submodule(R, [(1, [1, 0, 0])])
    for n in P2.objects:
        assert S.dim(n) == (monomial_dim(n, 1, 2) if n >= 1 else 0)


def test_submodule_product_with_tail_ideal():
    R = representable(P2, -2)
    tail = ideal(P2, "tail", 1)
    prod = submodule_product(R, [(-2, [P2.field.one])], tail)
    for n in P2.objects:
        assert prod.dim(n) == (R.dim(n) if n >= 1 else 0)


def test_representable_map_kernel_and_image():
    # x0 : hom(-, 0) -> hom(-, -1) is injective on a domain ring
    coords = P2.generator_element("x0", -1)
    f = representable_map(P2, 0, -1, coords)
    K, I = f.kernel(), f.image()
    for n in P2.objects:
        assert K.dim(n) == 0
        assert I.dim(n) == monomial_dim(n, 0, 2)


def test_identity_and_direct_sum():
    R = representable(P1, 0)
    S = direct_sum([R, R])
    for n in P1.objects:
        assert S.dim(n) == 2 * R.dim(n)
    e = identity_map(R)
    assert all(e.is_surjective(n) for n in P1.objects)


def test_submodule_equality():
    R = representable(P1, 0)
    a = Submodule(R, {1: [[1, 0]]})
    b = Submodule(R, {1: [[2, 0]]})
    assert a == b and a.contains_sub(b)


def test_dual_representable_doubles_dimension():
    # [DERIVED] flat deformation: dimension over k doubles
    w, _ = deform_window(quantum_projective_space(1), -1, 2)
    R = representable(w, -1)
    for n in w.objects:
        assert R.dim(n) == 2 * monomial_dim(n, -1, 1)
