"""First-order deformations over the dual numbers.

A deformation datum is a normalized Hochschild 2-cochain ``mu2`` on a finite
connected category (a thread, or a whole window viewed as one); the deformed
product is ``a * b = a . b + eps mu2(a, b)``.  Deformed relations are turned
into a datum by realizing the window over ``k[eps]/(eps^2)`` and reading off
the eps-part of the structure constants on the common standard-monomial
basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import GradedPresentation, WindowAlgebra, grading_report, is_finitely_generated_window
from .complexes import (
    ComplexError,
    iso_in_derived,
    left_mutation,
    materialize,
    minimize,
    projective,
    reduce_complex,
    rhom,
)
from .exact import DualScalar, dual_span_rows, rank
from .hochschild import HochschildComplex, HochschildError, interior, restriction_rank
from .status import Status
from .thread import ThreadAlgebra


class DeformationError(ValueError):
    pass


def window_category(w: WindowAlgebra) -> ThreadAlgebra:
    """The whole window as a finite category."""
    return ThreadAlgebra(w, w.hi, w.hi - w.lo)


@dataclass
class DeformationDatum:
    base: ThreadAlgebra
    mu2: list
    provenance: str = ""

    def __post_init__(self):
        self.complex = _complex_of(self.base)
        if len(self.mu2) != self.complex.dim(2):
            raise DeformationError("cochain length does not match the base category")

    def value(self, ch: tuple, ins: tuple) -> dict:
        return self.complex.value(2, self.mu2, ch, ins)

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.mu2)


_COMPLEXES: dict = {}


def _complex_of(cat) -> HochschildComplex:
    key = id(cat)
    hit = _COMPLEXES.get(key)
    if hit is None or hit[0] is not cat:
        hit = (cat, HochschildComplex(cat))
        _COMPLEXES[key] = hit
    return hit[1]


def trivial_datum(base) -> DeformationDatum:
    if isinstance(base, WindowAlgebra):
        base = window_category(base)
    C = _complex_of(base)
    return DeformationDatum(base, [base.field.zero] * C.dim(2), "trivial")


def coboundary_datum(base: ThreadAlgebra, gamma: list) -> DeformationDatum:
    C = _complex_of(base)
    return DeformationDatum(base, C.apply_d(1, gamma), "coboundary")


def add_datum(d: DeformationDatum, e: DeformationDatum) -> DeformationDatum:
    if d.base is not e.base:
        raise DeformationError("data live on different categories")
    return DeformationDatum(d.base, [a + b for a, b in zip(d.mu2, e.mu2)], f"{d.provenance}+{e.provenance}")


def from_deformed(W: WindowAlgebra, base: Optional[WindowAlgebra] = None, span: Optional[tuple] = None) -> DeformationDatum:
    """Extract ``mu2`` from a flat dual-number realization, on ``span = (lo, hi)`` if given."""
    if not W.dual:
        raise DeformationError("expected a dual-number realization")
    if W.flatness_failure is not None:
        raise DeformationError(f"deformation is not flat at {W.flatness_failure}")
    w = base if base is not None else W.reduce()
    cat = window_category(w) if span is None else ThreadAlgebra(w, span[1], span[1] - span[0])
    C = _complex_of(cat)
    for n in cat.objects:
        for m in cat.objects:
            if n >= m and W.basis(n, m) != w.basis(n, m):
                raise DeformationError(f"standard monomials differ at ({n}, {m})")

    def fn(ch, ins):
        out = {}
        for k, c in W.compose_basis(ch[0], ch[1], ch[2], ins[0], ins[1]):
            if c.b != 0:
                out[k] = c.b
        return out

    return DeformationDatum(cat, C.cochain_from_function(2, fn), f"relations of {W.name}")


def cocycle_check(d: DeformationDatum) -> dict:
    """``d mu2 = 0`` and associativity of the dual-number product, compared."""
    C = d.complex
    hoch = C.is_cocycle(2, d.mu2)
    assoc, witness = _associativity(d)
    if hoch != assoc:
        raise DeformationError("cocycle condition and associativity disagree")
    out = {"status": Status.of(hoch), "cocycle": hoch, "associative": assoc}
    if witness is not None:
        out["witness"] = witness
    return out


def _associativity(d: DeformationDatum):
    """Direct check of ``(a*b)*c = a*(b*c)`` on radical basis triples."""
    cat = d.base
    F = cat.field
    one = F.one
    objs = sorted(cat.objects, reverse=True)

    def mul(n, m, l, a: dict, b: dict) -> dict:
        out = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, c in cat.compose(n, m, l, {i: one}, {j: one}).items():
                    out[k] = out.get(k, DualScalar(F.zero)) + DualScalar(x.a * y.a * c, (x.a * y.b + x.b * y.a) * c)
                if n > m > l:
                    for k, c in d.value((n, m, l), (i, j)).items():
                        out[k] = out.get(k, DualScalar(F.zero)) + DualScalar(F.zero, x.a * y.a * c)
        return {k: v for k, v in out.items() if v != 0}

    for a_ in range(len(objs)):
        for b_ in range(a_ + 1, len(objs)):
            for c_ in range(b_ + 1, len(objs)):
                for e_ in range(c_ + 1, len(objs)):
                    o0, o1, o2, o3 = objs[a_], objs[b_], objs[c_], objs[e_]
                    for i in range(cat.dim(o0, o1)):
                        for j in range(cat.dim(o1, o2)):
                            for k in range(cat.dim(o2, o3)):
                                x = {i: DualScalar(one)}
                                y = {j: DualScalar(one)}
                                z = {k: DualScalar(one)}
                                lhs = mul(o0, o2, o3, mul(o0, o1, o2, x, y), z)
                                rhs = mul(o0, o1, o3, x, mul(o1, o2, o3, y, z))
                                if lhs != rhs:
                                    return False, {"objects": [o0, o1, o2, o3], "basis": [i, j, k]}
    return True, None


def gauge_equivalent(d1: DeformationDatum, d2: DeformationDatum) -> dict:
    """Solve ``d gamma = mu2 - mu2'``; the witness is verified by substitution."""
    if d1.base is not d2.base:
        raise DeformationError("data live on different categories")
    for d in (d1, d2):
        if not cocycle_check(d)["status"]:
            raise DeformationError(f"datum {d.provenance!r} is not a cocycle")
    C = d1.complex
    diff = [a - b for a, b in zip(d1.mu2, d2.mu2)]
    if all(x == 0 for x in diff):
        return {"status": Status.TRUE, "gamma": {}, "gamma_vector": [C.field.zero] * C.dim(1), "verified": True}
    gamma = C.solve_coboundary(2, diff)
    if gamma is None:
        return {"status": Status.FALSE, "reason": "difference is not a coboundary (linear system inconsistent)"}
    verified = C.apply_d(1, gamma) == diff
    if not verified:
        raise DeformationError("gauge witness failed verification")
    return {"status": Status.TRUE, "gamma": _sparse(C, 1, gamma), "gamma_vector": gamma, "verified": True}


def _sparse(C: HochschildComplex, p: int, vec: list) -> dict:
    out = {}
    for (ch, ins, k), x in zip(C.index(p), vec):
        if x != 0:
            out[f"{','.join(map(str, ch))}|{','.join(map(str, ins))}|{k}"] = str(x)
    return out


def restrict_deformation(d: DeformationDatum, i: int, l: int) -> DeformationDatum:
    w = d.base.window
    T = ThreadAlgebra(w, i, l)
    if not all(d.base.contains(o) for o in T.objects):
        raise DeformationError(f"thread [{i - l}, {i}] is not inside the datum's category")
    r = DeformationDatum(T, d.complex.restrict(2, d.mu2, _complex_of(T)), f"{d.provenance} restricted to [{i - l},{i}]")
    if d.complex.is_cocycle(2, d.mu2) and not r.complex.is_cocycle(2, r.mu2):
        raise DeformationError("restriction broke the cocycle condition")
    return r


def restriction_equivalence_probe(w: WindowAlgebra, i: int, l: int) -> dict:
    """``H^2`` of the interior against ``H^2`` of a thread inside it, and the restriction rank."""
    if w.dual:
        w = w.reduce()
    I = interior(w)
    if not (I.contains(i - l) and I.contains(i)):
        raise DeformationError(f"thread [{i - l}, {i}] is not inside the interior [{I.lo}, {I.hi}]")
    big, small = _complex_of(I), _complex_of(ThreadAlgebra(w, i, l))
    r = restriction_rank(big, small, 2)
    ok = r["source_dim"] == r["target_dim"] == r["rank"]
    return {
        "status": Status.of(ok),
        "interior": [I.lo, I.hi],
        "thread": [i - l, i],
        "interior_h2": r["source_dim"],
        "thread_h2": r["target_dim"],
        "restriction_rank": r["rank"],
        "note": "first-order shadow: bijectivity on tangent spaces only",
    }


def ext_vanishing_check(w: WindowAlgebra, i: int, l: int) -> dict:
    """``RHom(O(m), O(n))`` vanishes in degrees 1 and 2 for ``m <= n`` on the materialized range."""
    if w.dual:
        w = w.reduce()
    T = ThreadAlgebra(w, i, l)
    members = {}
    for obj in range(T.lo - 1, T.hi + 2):
        try:
            members[-obj] = materialize(T, obj)
        except (ComplexError, ValueError):
            continue
    pairs = {}
    status = Status.TRUE
    witness = None
    for m in sorted(members):
        for n in sorted(members):
            if m > n:
                continue
            t = rhom(members[m], members[n])
            pairs[f"{m},{n}"] = {str(k): v for k, v in sorted(t.items())}
            if t.get(1) or t.get(2):
                status = Status.FALSE
                witness = witness or {"m": m, "n": n, "table": pairs[f"{m},{n}"]}
    out = {"status": status, "twists": sorted(members), "tables": pairs,
           "note": "over a field the tensor factor only multiplies dimensions, so one X suffices"}
    if witness:
        out["witness"] = witness
    return out


def deform_window(p: GradedPresentation, lo: int, hi: int):
    """Realize the eps-relations on ``[lo, hi]`` and check every piece is free of the base rank."""
    if p.deformed_relations is None:
        raise DeformationError("presentation has no deformed relations")
    W = WindowAlgebra(p, lo, hi, dual=True)
    base = WindowAlgebra(p, lo, hi)
    report = {"flat": True, "failing_pair": None, "pieces": {}}
    if W.flatness_failure is not None:
        n, m = W.flatness_failure
        report.update(flat=False, failing_pair=[n, m], status=Status.FALSE,
                      reason=f"hom({n}, {m}) is not free over the dual numbers")
        return W, report
    ranks = W.flatness_report()["free_ranks"]
    for n in base.objects:
        for m in base.objects:
            if n < m:
                continue
            r = ranks.get(f"{n},{m}")
            report["pieces"][f"{n},{m}"] = r
            if r != base.dim(n, m) and report["flat"]:
                report.update(flat=False, failing_pair=[n, m])
    report["status"] = Status.of(report["flat"])
    return W, report


def _dual_counts(W: WindowAlgebra, m: int) -> dict:
    """Minimal numbers of new R-generators of ``hom(-, m)_{>= m+1}`` by degree (Nakayama: mod eps)."""
    counts = {}
    F = W.field
    for j in range(m + 1, W.hi + 1):
        spans = []
        for g in W.presentation.generators:
            src = j - g.degree
            if src < m + 1 or not g.present_at(src):
                continue
            for k in range(W.dim(src, m)):
                spans.append(W.apply_generator(g.label, src, m, {k: W.ring.one}))
        d = W.dim(j, m)
        rows = []
        for v in spans:
            row = [DualScalar(F.zero)] * d
            for i, x in v.items():
                row[i] = x
            rows.append(row)
        kr = rank(dual_span_rows(rows, F), 2 * d) if rows else 0
        # cokernel Q has k-dim 2d - kr; generators needed = dim Q / eps Q
        a_rank = rank([[x.a for x in r] for r in rows], d) if rows else 0
        counts[j] = {"generators": d - a_rank, "cokernel_k_dim": 2 * d - kr}
    return counts


def finiteness_lift_report(W: WindowAlgebra) -> dict:
    """Base and deformed verdicts for connected, positively graded, locally finite, finitely generated."""
    if W.flatness_failure is not None:
        raise DeformationError("finiteness lifting needs a flat deformation")
    base = W.reduce()
    g = grading_report(base)
    fg_base = is_finitely_generated_window(base)
    ranks = W.flatness_report()["free_ranks"]
    deformed = {
        "connected": all(ranks.get(f"{n},{n}") == 1 for n in W.objects),
        "positively_graded": all(x.degree >= 1 for x in W.presentation.generators),
        "locally_finite": all(r is not None for r in ranks.values()),
    }
    margin = fg_base.get("margin")
    status_fg = Status.TRUE
    if fg_base["status"] is not Status.INCONCLUSIVE:
        top = W.hi - margin
        for m in fg_base["objects"]:
            counts = _dual_counts(W, m)
            base_counts = fg_base["objects"][m]["by_degree"]
            dual_by_degree = {j - m: c["generators"] for j, c in counts.items() if c["generators"]}
            if dual_by_degree != base_counts:
                status_fg = Status.FALSE
            if any(counts[j]["generators"] for j in range(top + 1, W.hi + 1)):
                status_fg = Status.combine([status_fg, Status.INCONCLUSIVE])
    else:
        status_fg = Status.INCONCLUSIVE
    rows = {}
    for key in ("connected", "positively_graded", "locally_finite"):
        rows[key] = {"base": Status.of(g[key]), "deformed": Status.of(deformed[key])}
    rows["finitely_generated"] = {"base": fg_base["status"], "deformed": status_fg}
    lifted = all(r["deformed"] is Status.TRUE for r in rows.values() if r["base"] is Status.TRUE)
    return {"status": Status.of(lifted) if all(r["base"] is not Status.INCONCLUSIVE for r in rows.values())
            else Status.combine([Status.of(lifted), Status.INCONCLUSIVE]),
            "conditions": rows}


def mutation_reduction_check(W: WindowAlgebra, i: int) -> dict:
    """Reduce-then-mutate against mutate-then-reduce for ``L_{P_i}(P_{i-1})`` on a two-object thread."""
    if not W.dual:
        raise DeformationError("expected a dual-number realization")
    base = W.reduce()
    Td, Tb = ThreadAlgebra(W, i, 1), ThreadAlgebra(base, i, 1)
    E, C = projective(Td, i), projective(Td, i - 1)
    lhs = minimize(reduce_complex(left_mutation(E, C, model="full"), Tb))
    rhs = left_mutation(reduce_complex(E, Tb), reduce_complex(C, Tb))
    res = iso_in_derived(lhs, rhs)
    res["mutate_then_reduce"] = {str(q): v for q, v in lhs.multiplicities().items()}
    res["reduce_then_mutate"] = {str(q): v for q, v in rhs.multiplicities().items()}
    return res
