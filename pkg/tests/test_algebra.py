from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import monomial_dim
from zwork.algebra import (
    GeneratorScheme,
    GradedPresentation,
    PresentationError,
    RelationScheme,
    WindowAlgebra,
    compose,
    grading_report,
    is_finitely_generated_window,
)
from zwork.builtins import (
    NonConnectedWindow,
    builtin,
    dead_generator_fixture,
    nonflat_fixture,
    projective_space,
    quantum_projective_space,
    truncated_infinite_polynomial,
)
from zwork.exact import GF, QQ, DualScalar

P2 = WindowAlgebra(projective_space(2), -3, 3)


def exponent(word, nvars):
    c = Counter(word)
    return tuple(c[f"x{i}"] for i in range(nvars))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_dims_match_monomial_oracle(d):
    w = WindowAlgebra(projective_space(d), -2, 2)
    for n in w.objects:
        for m in w.objects:
            assert w.dim(n, m) == monomial_dim(n, m, d)  # [DERIVED]


def test_dims_over_prime_field():
    w = WindowAlgebra(projective_space(2, GF(3)), -2, 2)
    assert all(w.dim(n, m) == monomial_dim(n, m, 2) for n in w.objects for m in w.objects)


triples = st.tuples(st.integers(-3, 3), st.integers(0, 3), st.integers(0, 3)).filter(lambda t: t[0] + t[1] + t[2] <= 3)


@given(triples, st.data())
def test_composition_is_monomial_product(t, data):
    # [DERIVED] the commutative monomial category is the oracle for P^2
    l, a, b = t
    m, n = l + b, l + b + a
    i = data.draw(st.integers(0, P2.dim(n, m) - 1))
    j = data.draw(st.integers(0, P2.dim(m, l) - 1))
    out = P2.compose_basis(n, m, l, i, j)
    assert len(out) == 1 and out[0][1] == 1
    e1 = exponent(P2.basis(n, m)[i], 3)
    e2 = exponent(P2.basis(m, l)[j], 3)
    assert exponent(P2.basis(n, l)[out[0][0]], 3) == tuple(x + y for x, y in zip(e1, e2))


@given(st.integers(-3, 0), st.data())
def test_composition_associative(l, data):
    m = data.draw(st.integers(l, l + 1))
    n = data.draw(st.integers(m, m + 1))
    k = data.draw(st.integers(n, min(n + 1, 3)))
    a = P2.basis_element(k, n, data.draw(st.integers(0, P2.dim(k, n) - 1)))
    b = P2.basis_element(n, m, data.draw(st.integers(0, P2.dim(n, m) - 1)))
    c = P2.basis_element(m, l, data.draw(st.integers(0, P2.dim(m, l) - 1)))
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_units():
    for m in P2.objects:
        u = P2.element(m, m, P2.unit(m))
        b = P2.basis_element(m, m - 1, 1) if m > P2.lo else None
        if b is not None:
            assert compose(u, b) == b


def test_quantum_relation_coefficient():
    w = WindowAlgebra(quantum_projective_space(1, QQ(2)), 0, 2)
    a = w.word_element(2, 0, ("x0", "x1"))
    b = w.word_element(2, 0, ("x1", "x0"))
    assert a == b.scale(QQ(2)) or b == a.scale(QQ(2))
    assert w.dim(2, 0) == 3


def test_presentation_validation():
    one = QQ(1)
    with pytest.raises(PresentationError):
        GradedPresentation("z", (GeneratorScheme("t", 0),), ())
    with pytest.raises(PresentationError):
        GradedPresentation("d", (GeneratorScheme("x", 1), GeneratorScheme("x", 2)), ())
    with pytest.raises(PresentationError):
        GradedPresentation(
            "h",
            (GeneratorScheme("x", 1), GeneratorScheme("y", 3)),
            (RelationScheme(((one, ("x", "x")), (one, ("y",)))),),
        )
    with pytest.raises(PresentationError):
        GradedPresentation(
            "e",
            (GeneratorScheme("x", 1),),
            (RelationScheme(((one, ("x", "x")),)),),
            deformed_relations=(RelationScheme(((DualScalar(QQ(2), QQ(0)), ("x", "x")),)),),
        )


def test_grading_report():
    g = grading_report(P2)
    assert g["connected"] and g["positively_graded"] and g["locally_finite"]
    assert not grading_report(NonConnectedWindow(0, 3))["connected"]  # [TRIVIAL]


@pytest.mark.parametrize("d", [1, 2])
def test_projective_space_generated_by_d_plus_one(d):
    r = is_finitely_generated_window(WindowAlgebra(projective_space(d), -4, 4))
    assert r["status"].verdict == "pass"
    assert all(e["generators"] == d + 1 for e in r["objects"].values())


def test_dead_generators_fail_with_object():
    r = is_finitely_generated_window(WindowAlgebra(dead_generator_fixture(8), 0, 8))
    assert r["status"].verdict == "fail"
    assert r["failing_object"] == 0


def test_tiny_window_inconclusive():
    r = is_finitely_generated_window(WindowAlgebra(projective_space(1), 0, 1))
    assert r["status"].verdict == "inconclusive" and r["reason"]


def test_truncated_polynomial_horizon():
    p = truncated_infinite_polynomial(5)
    assert p.degree_horizon == 4
    w = WindowAlgebra(p, 0, 5)
    assert w.dim(1, 0) == 5 and w.dim(2, 0) == 15


def test_flatness():
    W = WindowAlgebra(quantum_projective_space(2), -2, 2, dual=True)
    assert W.flatness_failure is None
    assert W.reduce().dim(2, 0) == 6
    bad = WindowAlgebra(nonflat_fixture(), 0, 4, dual=True)
    assert bad.flatness_failure is not None


def test_builtin_names():
    assert builtin("projective_space(2)").name == "P2"
    assert builtin("quantum_projective_space(1)").deformed_relations is not None
    with pytest.raises(ValueError):
        builtin("nonsense(3)")
