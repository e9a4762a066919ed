"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import contextlib
import os
import subprocess
import sys
import time

import pytest

from oracles import MonomialCategory, bar_hochschild_dims
from zwork.algebra import WindowAlgebra, is_finitely_generated_window
from zwork.builtins import (
    dead_generator_fixture,
    nonflat_fixture,
    projective_space,
    quantum_projective_space,
    truncated_infinite_polynomial,
)
from zwork.complexes import Complex, iso_in_derived, left_mutation, minimize, projective, sequence_report, verify_helix
from zwork.deformation import (
    cocycle_check,
    deform_window,
    finiteness_lift_report,
    from_deformed,
    gauge_equivalent,
    mutation_reduction_check,
    restriction_equivalence_probe,
    trivial_datum,
)
from zwork.hochschild import HochschildComplex
from zwork.status import Status
from zwork.tails import check_axioms, example_glueing_cover, glueing_failure_witness, in_L_tails
from zwork.thread import extract_thread


@contextlib.contextmanager
def criterion(capsys, number, title):
    info = {"detail": ""}
    try:
        yield info
    except BaseException as exc:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:2d} FAIL  {title}: {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        raise
    with capsys.disabled():
        print(f"\nACCEPTANCE {number:2d} PASS  {title}: {info['detail']}")


def test_01_dimension_oracle(capsys):
    with criterion(capsys, 1, "dimension oracle") as info:
        t = time.perf_counter()
        pairs = 0
        for d in (1, 2):
            w = WindowAlgebra(projective_space(d), -4, 4)
            oracle = MonomialCategory(d, -4, 4)
            for n in w.objects:
                for m in w.objects:
                    assert w.dim(n, m) == oracle.dim(n, m), (d, n, m)
                    pairs += 1
        elapsed = time.perf_counter() - t
        assert elapsed < 10, f"took {elapsed:.1f} s"
        info["detail"] = f"{pairs} pairs exact, {elapsed:.2f} s"


def test_02_tails_axioms(capsys):
    with criterion(capsys, 2, "tails axioms") as info:
        parts = []
        for name, w in [("P1", WindowAlgebra(projective_space(1), -4, 4)),
                        ("P2", WindowAlgebra(projective_space(2), -4, 4)),
                        ("Poly5", WindowAlgebra(truncated_infinite_polynomial(5), 0, 5))]:
            r = check_axioms(w)
            assert r["checked"] > 0 and r["violations"] == [], (name, r["violations"][:3])
            parts.append(f"{name} {r['checked']} checks")
        info["detail"] = ", ".join(parts) + ", 0 violations"


def test_03_glueing_counterexample(capsys):
    with criterion(capsys, 3, "glueing counterexample") as info:
        words = []
        for N in (5, 6):
            w = WindowAlgebra(truncated_infinite_polynomial(N), 0, N)
            S = example_glueing_cover(w)
            r = glueing_failure_witness(w, S)
            assert r["verdict"] == "glueing failure", (N, r["verdict"])
            word = in_L_tails(S)["witness"]["word"]
            assert word == ".".join([f"x{N}"] * (N - 1)), word
            words.append(f"N={N}: x{N}^{N - 1}")
        info["detail"] = "; ".join(words)


def test_04_finite_generation(capsys):
    with criterion(capsys, 4, "finite generation") as info:
        for d in (1, 2):
            r = is_finitely_generated_window(WindowAlgebra(projective_space(d), -4, 4))
            assert r["status"] is Status.TRUE
            assert r["objects"] and all(o["generators"] == d + 1 for o in r["objects"].values())
        dead = is_finitely_generated_window(WindowAlgebra(dead_generator_fixture(8), 0, 8))
        assert dead["status"] is Status.FALSE and dead["failing_object"] is not None
        info["detail"] = f"P^1: 2 per object, P^2: 3 per object, fixture fails at object {dead['failing_object']}"


def test_05_mutation_oracle(capsys):
    with criterion(capsys, 5, "mutation oracle") as info:
        T = extract_thread(WindowAlgebra(projective_space(1), -3, 3), 0, 1)
        # Koszul oracle for O(-1)[1]: O^2 in degree -1 mapping to O(1) by the two variables
        x = [{T.basis(0, -1).index((f"x{i}",)): T.field.one} for i in (0, 1)]
        oracle = Complex(T, {-1: (0, 0), 0: (-1,)}, {-1: {(0, 0): x[0], (0, 1): x[1]}})
        L = minimize(left_mutation(projective(T, 0), projective(T, -1)))
        r = iso_in_derived(L, oracle)
        assert r["status"] is Status.TRUE, r
        info["detail"] = f"L = {L!r}, iso verified"


@pytest.mark.parametrize("label,wargs,thread,d,expect", [
    ("P1 (2,2)", (1, -3, 3), (0, 1), 2, True),
    ("P2 (3,3)", (2, -4, 3), (0, 2), 3, True),
    ("P2 (3,2)", (2, -4, 3), (0, 2), 2, False),
])
def test_06_helix(capsys, label, wargs, thread, d, expect):
    with criterion(capsys, 6, f"helix {label}") as info:
        t0 = time.perf_counter()
        T = extract_thread(WindowAlgebra(projective_space(wargs[0]), wargs[1], wargs[2]), *thread)
        n = len(T.objects)
        results = [verify_helix(T, t, d) for t in range(-T.hi - 1 + n, -T.lo + 2)]
        elapsed = time.perf_counter() - t0
        assert elapsed < 60, f"took {elapsed:.1f} s"
        if expect:
            assert all(r["status"] is Status.TRUE for r in results)
            info["detail"] = f"pass on {len(results)} shifts, {elapsed:.2f} s"
        else:
            assert all(r["status"] is Status.FALSE and r["reason"] == "shift mismatch" for r in results)
            info["detail"] = f"fails as expected, shift mismatch by {results[0]['shift']}, {elapsed:.2f} s"


def test_07_strong_exceptional_tables(capsys):
    with criterion(capsys, 7, "strong exceptionality tables") as info:
        T = extract_thread(WindowAlgebra(projective_space(2), -4, 3), 0, 2)
        r = sequence_report([projective(T, 0), projective(T, -1), projective(T, -2)])
        t = r["tables"]
        assert all(t[f"{i},{j}"] == {} for i in range(3) for j in range(i))
        assert all(t[f"{i},{i}"] == {"0": 1} for i in range(3))
        assert (t["0,1"]["0"], t["1,2"]["0"], t["0,2"]["0"]) == (3, 3, 6)
        assert all(list(t[f"{i},{j}"]) == ["0"] for i in range(3) for j in range(i + 1, 3))
        assert r["strong"] is Status.TRUE
        info["detail"] = "backward 0, diagonal k, forward (3,3,6) in degree 0"


def test_08_hochschild(capsys):
    with criterion(capsys, 8, "Hochschild H^2") as info:
        kron_oracle = bar_hochschild_dims(MonomialCategory(1, -1, 0), 2)
        beil_oracle = bar_hochschild_dims(MonomialCategory(2, -2, 0), 2)
        assert kron_oracle[2] == 0 and beil_oracle[2] == 10
        kron = HochschildComplex(extract_thread(WindowAlgebra(projective_space(1), -2, 2), 0, 1)).cohomology_dims(2)
        beil = HochschildComplex(extract_thread(WindowAlgebra(projective_space(2), -2, 2), 0, 2)).cohomology_dims(2)
        assert kron == kron_oracle and beil == beil_oracle
        info["detail"] = f"Kronecker {kron}, Beilinson {beil}, both equal to the bar oracle"


def test_09_restriction_probe(capsys):
    with criterion(capsys, 9, "restriction equivalence probe") as info:
        rows = []
        for lo, hi in [(-3, 3), (-4, 3)]:
            r = restriction_equivalence_probe(WindowAlgebra(projective_space(2), lo, hi), 0, 2)
            width = r["interior"][1] - r["interior"][0] + 1
            assert width >= 5
            assert r["interior_h2"] == r["thread_h2"] == r["restriction_rank"] == 10, r
            rows.append(f"interior {r['interior']} ({width} objects): H^2 {r['interior_h2']}, rank {r['restriction_rank']}")
        info["detail"] = "; ".join(rows)


def test_10_gauge_triviality(capsys):
    with criterion(capsys, 10, "gauge triviality") as info:
        W, flat = deform_window(quantum_projective_space(1), -3, 3)
        assert flat["flat"]
        datum = from_deformed(W)
        assert not datum.is_trivial()
        r = gauge_equivalent(datum, trivial_datum(datum.base))
        assert r["status"] is Status.TRUE
        assert datum.complex.apply_d(1, r["gamma_vector"]) == datum.mu2
        info["detail"] = f"witness with {len(r['gamma'])} nonzero entries, d(gamma) = mu2 exactly"


def test_11_flatness_and_lifting(capsys):
    with criterion(capsys, 11, "flatness and lifting") as info:
        p = quantum_projective_space(2)
        W, flat = deform_window(p, -3, 2)
        base = WindowAlgebra(p, -3, 2)
        assert flat["flat"]
        assert all(flat["pieces"][f"{n},{m}"] == base.dim(n, m) for n in W.objects for m in W.objects if n >= m)
        assert cocycle_check(from_deformed(W))["status"] is Status.TRUE
        lift = finiteness_lift_report(W)
        assert lift["status"] is Status.TRUE and len(lift["conditions"]) == 4
        assert all(c["deformed"] is Status.TRUE for c in lift["conditions"].values())
        _, bad = deform_window(nonflat_fixture(), 0, 4)
        assert not bad["flat"] and bad["failing_pair"]
        info["detail"] = f"{len(flat['pieces'])} pieces free, 4 conditions lift, non-flat fixture fails at {bad['failing_pair']}"


def test_12_mutation_deformation(capsys):
    with criterion(capsys, 12, "mutation and reduction commute") as info:
        W, flat = deform_window(quantum_projective_space(1), -2, 2)
        r = mutation_reduction_check(W, 0)
        assert r["status"] is Status.TRUE, r
        info["detail"] = f"both sides {r['reduce_then_mutate']}, iso verified"


SUITE = [
    ["check-algebra", "P1"], ["check-algebra", "P2"], ["check-algebra", "Poly5"],
    ["check-algebra", "Dead8"], ["check-algebra", "TinyP1"],
    ["zgen", "P1"], ["zgen", "P2"], ["zgen", "Dead8"],
    ["helix", "P1", "--period", "2", "--shift", "2", "--thread", "0,1"],
    ["helix", "P2", "--period", "3", "--shift", "3", "--thread", "0,2"],
    ["helix", "P2", "--period", "3", "--shift", "2", "--thread", "0,2"],
    ["deform", "qP1_eps", "--thread", "0,1"], ["deform", "qP2_eps", "--thread", "0,2"],
    ["deform", "NonFlat", "--thread", "2,1"],
    ["qhom", "P1", "--from", "0", "--to", "-1"],
    ["qhom", "P1", "--from", "0", "--to", "-1", "--torsion-source"],
    ["qhom", "TinyP1", "--from", "0", "--to", "0"],
]


def _run_suite(corpus, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    out = []
    for cmd in SUITE:
        argv = [sys.executable, "-m", "zwork.cli", cmd[0], str(corpus / f"{cmd[1]}.zalg"), *cmd[2:]]
        p = subprocess.run(argv, capture_output=True, env=env, check=False)
        assert p.returncode in (0, 1, 2), p.stderr.decode()
        out.append(p.stdout)
    return out


def test_13_determinism(capsys, tmp_path):
    with criterion(capsys, 13, "determinism") as info:
        subprocess.run([sys.executable, "-m", "zwork.cli", "generate", "--all", str(tmp_path)], check=True)
        first = _run_suite(tmp_path, 1)
        second = _run_suite(tmp_path, 2)
        same = [a == b for a, b in zip(first, second)]
        assert all(same), [" ".join(c) for c, s in zip(SUITE, same) if not s]
        info["detail"] = f"{len(SUITE)} reports byte-identical across two runs"
