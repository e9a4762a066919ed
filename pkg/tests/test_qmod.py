import pytest

from oracles import monomial_dim
from zwork.algebra import WindowAlgebra
from zwork.builtins import dead_generator_fixture, projective_space, quantum_projective_space
from zwork.modules import identity_map, representable, representable_map, sum_map, truncate
from zwork.qmod import check_ample, check_t_projective, qhom, zgen_report
from zwork.status import Status

P1 = WindowAlgebra(projective_space(1), -2, 4)
P2 = WindowAlgebra(projective_space(2), -2, 3)


@pytest.mark.parametrize("m", [-1, 0])
def test_qhom_endomorphisms(m):
    # [DERIVED] End(O) = k
    r = qhom(representable(P1, m), representable(P1, m))
    assert r["status"] is Status.TRUE and r["dim"] == 1


def test_qhom_twist():
    # [DERIVED] Hom(O(-1), O) = H^0(O(1)) has dim 2
    r = qhom(representable(P1, 1), representable(P1, 0))
    assert r["status"] is Status.TRUE and r["dim"] == 2


def test_qhom_matches_hom_dims_on_p1():
    # representables are fully faithful in the quotient
    for n in (-1, 0, 1):
        for m in (-1, 0):
            if n < m:
                continue
            r = qhom(representable(P1, n), representable(P1, m))
            assert r["status"] is Status.TRUE and r["dim"] == monomial_dim(n, m, 1)


def test_qhom_torsion_source_is_zero():
    _, Q = truncate(representable(P1, 0), 1)
    r = qhom(Q, representable(P1, 0))
    assert r["status"] is Status.TRUE and r["dim"] == 0


def test_qhom_unchanged_by_truncating_source():
    # directed colimit consistency
    R = representable(P1, 0)
    ge, _ = truncate(R, 1)
    a = qhom(R, representable(P1, -1))
    b = qhom(ge.as_module(), representable(P1, -1))
    assert a["dim"] == b["dim"] == 2


def test_qhom_tiny_window_inconclusive():
    w = WindowAlgebra(projective_space(1), 0, 1)
    r = qhom(representable(w, 0), representable(w, 0))
    assert r["status"] is Status.INCONCLUSIVE and r["reason"]


@pytest.mark.parametrize("w", [P1, P2, WindowAlgebra(quantum_projective_space(1), -2, 3)], ids=["P1", "P2", "qP1"])
def test_ample_on_projective(w):
    assert check_ample(w)["status"] is Status.TRUE


def test_ample_fails_on_dead_generator():
    w = WindowAlgebra(dead_generator_fixture(8), 0, 8)
    r = check_ample(w)
    assert r["status"] is Status.FALSE and r["witness"]


def test_t_projective_identity():
    # [TRIVIAL] n0 = m
    R = representable(P1, 0)
    r = check_t_projective(P1, identity_map(R), (0, [P1.field.one]))
    assert r["status"] is Status.TRUE and r["n0"] == 0


def test_t_projective_split_projection():
    one = {0: P1.field.one}
    f0 = representable_map(P1, 0, 0, one)
    f1 = representable_map(P1, 1, 0, P1.generator_element("x0", 0))
    epi = sum_map([f0, f1], representable(P1, 0))
    r = check_t_projective(P1, epi, (0, [P1.field.one]))
    assert r["n0"] == 0


def test_t_projective_generator_cover():
    # [DERIVED] the identity does not lift, degree one elements do
    epi = sum_map([representable_map(P1, 1, 0, P1.generator_element(g, 0)) for g in ("x0", "x1")],
                  representable(P1, 0))
    r = check_t_projective(P1, epi, (0, [P1.field.one]))
    assert r["status"] is Status.TRUE and r["n0"] == 1


def test_zgen_report_p2():
    r = zgen_report(P2)
    assert r["status"] is Status.TRUE


def test_zgen_report_dead_generator():
    r = zgen_report(WindowAlgebra(dead_generator_fixture(8), 0, 8))
    assert r["ample"]["status"] is Status.FALSE
