"""The tails covering system on a window algebra.

A cover of object ``m`` is a submodule ``R`` of ``hom(-, m)``.  ``R`` lies in
L_tails when it contains some tail ``hom(-, m)_{>=n}``.  Because tails are
generated in the ``D`` degrees ``n .. n+D-1`` (``D`` = largest generator
degree), containment is decided by fullness of ``R`` on such a band.  When
the algebra carries a degree horizon (a truncation that is only faithful
up to some degree), bands beyond ``m + horizon`` do not certify anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import Element, WindowAlgebra
from .exact import kernel_basis, mat_vec, rank, reduce_against, zeros
from .modules import (
    ModuleMap,
    Submodule,
    WindowModule,
    degree_range_submodule,
    minimal_generators,
    representable,
)
from .status import Status

TRIVIAL = "trivial"
L_TAILS = "L_tails"


@dataclass
class Cover:
    obj: int
    sub: Submodule

    @property
    def algebra(self) -> WindowAlgebra:
        return self.sub.algebra


def tail_cover(w: WindowAlgebra, m: int, n: int) -> Cover:
    return Cover(m, degree_range_submodule(representable(w, m), max(m, n)))


def full_cover(w: WindowAlgebra, m: int) -> Cover:
    return tail_cover(w, m, m)


def zero_cover(w: WindowAlgebra, m: int) -> Cover:
    return Cover(m, Submodule(representable(w, m), {}, close=False))


def generated_cover(w: WindowAlgebra, m: int, elements: list) -> Cover:
    """Cover generated by ``[(n, coords in hom(n, m))]``."""
    R = representable(w, m)
    spans = {}
    for n, coords in elements:
        v = [w.field.zero] * R.dim(n)
        for i, x in (coords.items() if isinstance(coords, dict) else enumerate(coords)):
            v[i] = x
        spans.setdefault(n, []).append(v)
    return Cover(m, Submodule(R, spans))


def certifiable_limit(w: WindowAlgebra, m: int) -> int:
    """Largest ``n`` whose band ``n .. n+D-1`` can certify a tail at ``m``."""
    D = w.presentation.max_generator_degree
    lim = w.hi - D + 1
    if w.degree_horizon is not None:
        lim = min(lim, m + w.degree_horizon)
    return lim


def in_L_tails(R: Cover) -> dict:
    """Least window ``n`` with ``hom(-, m)_{>=n}`` contained in ``R``.

    Returns FALSE (within the window) with a basis element of
    ``hom(n*, m)`` missing from ``R`` at the last certifiable degree
    ``n*`` when no band of full components is available.
    """
    w = R.algebra
    m = R.obj
    D = w.presentation.max_generator_degree
    lim = certifiable_limit(w, m)
    for n in range(m, lim + 1):
        if all(R.sub.is_full(j) for j in range(n, n + D)):
            return {"status": Status.TRUE, "n": n}
    if lim < m:
        return {"status": Status.INCONCLUSIVE, "reason": "window too small to certify any tail"}
    # blocking element: last certifiable band that is not full
    for n in range(lim, m - 1, -1):
        for j in range(n + D - 1, n - 1, -1):
            if not R.sub.is_full(j):
                for i, word in enumerate(w.basis(j, m)):
                    e = [w.field.zero] * w.dim(j, m)
                    e[i] = w.field.one
                    if not R.sub.contains(j, e):
                        return {
                            "status": Status.FALSE,
                            "reason": "no tail inside the window is contained",
                            "witness": {"object": j, "word": ".".join(word), "degree": j - m},
                        }
    return {"status": Status.FALSE, "reason": "no tail inside the window is contained"}


def pullback_cover(R: Cover, a: Element) -> Cover:
    """``{f in hom(-, n') : f . a in R}`` for ``a`` in ``hom(n', m)``, ``m`` the object of ``R``."""
    if a.source != R.obj:
        raise ValueError(f"element has source {a.source}, cover lives on {R.obj}")
    w = R.algebra
    np_ = a.target
    P = representable(w, np_)
    spans = {}
    for j in w.objects:
        if j < np_:
            continue
        dj = w.dim(j, np_)
        if dj == 0:
            continue
        if R.sub.is_full(j):
            spans[j] = [_unit(w, dj, k) for k in range(dj)]
            continue
        comp, piv = R.sub.component(j), R.sub.pivots(j)
        free = [c for c in range(w.dim(j, R.obj)) if c not in set(piv)]
        cols = []
        for k in range(dj):
            img = w.compose(j, np_, R.obj, {k: w.field.one}, a.coords)
            v = [w.field.zero] * w.dim(j, R.obj)
            for i, x in img.items():
                v[i] = x
            r = reduce_against(v, comp, piv)
            cols.append([r[c] for c in free])
        mat = [[cols[k][i] for k in range(dj)] for i in range(len(free))]
        spans[j] = kernel_basis(mat, dj, w.field) if free else [_unit(w, dj, k) for k in range(dj)]
    return Cover(np_, Submodule(P, spans, close=False))


def _unit(w, d, k):
    v = [w.field.zero] * d
    v[k] = w.field.one
    return v


def check_axioms(w: WindowAlgebra) -> dict:
    """Identity and pullback axioms for L_tails over all window basis elements.

    For every object ``m``, every certifiable tail ``R = hom(-, m)_{>=n}`` and
    every basis element ``a`` of ``hom(n', m)``, the pullback along ``a`` must
    be a cover.  Violations are pullbacks that are not covers.
    """
    violations = []
    checked = 0
    for m in w.objects:
        if certifiable_limit(w, m) < m:
            continue
        if in_L_tails(full_cover(w, m))["status"] is not Status.TRUE:
            violations.append({"axiom": "identity", "object": m})
        for n in range(m, certifiable_limit(w, m) + 1):
            R = tail_cover(w, m, n)
            for np_ in w.objects:
                if np_ < m:
                    continue
                if certifiable_limit(w, np_) < max(n, np_):
                    continue
                for i in range(w.dim(np_, m)):
                    a = w.basis_element(np_, m, i)
                    P = pullback_cover(R, a)
                    checked += 1
                    res = in_L_tails(P)
                    if res["status"] is not Status.TRUE:
                        violations.append(
                            {"axiom": "pullback", "object": m, "tail": n, "along": ".".join(w.basis(np_, m)[i])}
                        )
    return {"status": Status.of(not violations), "violations": violations, "checked": checked}


def glueing_failure_witness(w: WindowAlgebra, S: Cover, T: Optional[Cover] = None) -> dict:
    """Detect a cover glued from covers: ``S`` not in L_tails, but pulled back along
    generators of a cover ``T`` it always is."""
    if T is None:
        T = tail_cover(w, S.obj, S.obj + 1)
    s_res = in_L_tails(S)
    out = {"S": s_res, "T": in_L_tails(T)}
    if s_res["status"] is Status.TRUE:
        out["verdict"] = "no failure"
        return out
    gens = minimal_generators(T.sub.as_module())
    pulls = []
    all_cover = True
    any_fail = False
    for n, vecs in sorted(gens.items()):
        for v in vecs:
            coords = _sub_to_parent(T.sub, n, v)
            a = Element(w, n, S.obj, coords)
            P = pullback_cover(S, a)
            r = in_L_tails(P)
            word = _describe(w, n, S.obj, coords)
            pulls.append({"along": word, "status": r["status"], "n": r.get("n")})
            if r["status"] is not Status.TRUE:
                all_cover = False
            if r["status"] is Status.FALSE:
                any_fail = True
    out["pullbacks"] = pulls
    if s_res["status"] is Status.FALSE and all_cover and T and out["T"]["status"] is Status.TRUE:
        out["verdict"] = "glueing failure"
    elif any_fail:
        out["verdict"] = "genuinely non-covering"
    else:
        out["verdict"] = "inconclusive"
    return out


def _sub_to_parent(sub: Submodule, n: int, v: list) -> dict:
    rows = sub.component(n)
    out = {}
    for c, row in zip(v, rows):
        if c == 0:
            continue
        for i, x in enumerate(row):
            if x != 0:
                out[i] = out.get(i, 0) + c * x
    return {i: x for i, x in out.items() if x != 0}


def _describe(w, n, m, coords):
    basis = w.basis(n, m)
    parts = []
    for i, c in sorted(coords.items()):
        word = ".".join(basis[i]) or "1"
        parts.append(word if c == 1 else f"{c}*{word}")
    return " + ".join(parts)


def example_glueing_cover(w: WindowAlgebra) -> Cover:
    """``S`` generated by ``x_i . hom(-, 1)_{>= i}`` inside ``hom(-, 0)``.

    For the truncated polynomial algebra in variables ``x1..xN``: ``S_n``
    is spanned by the degree-``n`` monomials containing some ``x_i`` with ``i <= n``.
    """
    labels = [g.label for g in w.presentation.generators]
    elements = []
    for lab in labels:
        i = int(lab[1:])
        if 0 + i > w.hi:
            continue
        x = w.generator_element(lab, 0)  # in hom(1, 0)
        for j in range(max(i, 1), w.hi + 1):
            for k in range(w.dim(j, 1)):
                elements.append((j, w.compose(j, 1, 0, {k: w.field.one}, x)))
    return generated_cover(w, 0, elements)


# ---------------------------------------------------------------------------
# T-epi / T-mono


def _inside(sub_rows, piv, v):
    return all(x == 0 for x in reduce_against(v, sub_rows, piv))


def is_t_epi(f: ModuleMap, system: str = L_TAILS) -> dict:
    """Every ``y`` in ``N_m`` lands in the image after acting by a tail."""
    N = f.target
    w = f.algebra
    img = f.image()
    if system == TRIVIAL:
        bad = [n for n in w.objects if not img.is_full(n)]
        return {"status": Status.of(not bad), "witness": bad[:1]}
    return _tail_certificates(N, img, w)


def _tail_certificates(N: WindowModule, sub: Submodule, w: WindowAlgebra, vectors=None) -> dict:
    """For each ``y``: least ``n0`` with ``y . hom(n, m)`` inside ``sub`` for ``n >= n0``."""
    D = w.presentation.max_generator_degree
    table = {}
    status = Status.TRUE
    witness = None
    items = vectors
    if items is None:
        items = [(m, i, _unit(w, N.dim(m), i)) for m in w.objects for i in range(N.dim(m))]
    for m, i, v in items:
        lim = certifiable_limit(w, m)

        def ok(j, v=v, m=m):
            return all(_inside(sub.component(j), sub.pivots(j), r) for r in N.orbit_span(j, v, m))

        n0 = None
        for n in range(m, lim + 1):
            if all(ok(j) for j in range(n, n + D)):
                n0 = n
                break
        table[(m, i)] = n0
        if n0 is None:
            if not ok(w.hi):
                status = Status.FALSE
                witness = witness or {"object": m, "index": i}
            elif status is Status.TRUE:
                status = Status.INCONCLUSIVE
    out = {"status": status, "n0": table}
    if witness:
        out["witness"] = witness
    return out


def is_t_mono(f: ModuleMap, system: str = L_TAILS) -> dict:
    """Kernel elements are killed by a tail."""
    w = f.algebra
    K = f.kernel()
    M = f.source
    if system == TRIVIAL:
        bad = [n for n in w.objects if K.dim(n)]
        return {"status": Status.of(not bad), "witness": bad[:1]}
    zero = Submodule(M, {}, close=False)
    items = [(m, i, r) for m in w.objects for i, r in enumerate(K.component(m))]
    return _tail_certificates(M, zero, w, items)


# ---------------------------------------------------------------------------
# transport along the reduction of a flat deformation


def _dual_rep_dims(b: WindowAlgebra, m: int, n: int) -> int:
    return b.dim(n, m)


def transport_cover(base: WindowAlgebra, S: Cover) -> Cover:
    """Image of a cover over the deformed algebra under ``eps -> 0``."""
    b = S.algebra
    if not b.dual:
        raise ValueError("transport_cover expects a cover over a deformed algebra")
    R = representable(base, S.obj)
    spans = {}
    for n in b.objects:
        d = b.dim(n, S.obj) if n >= S.obj else 0
        spans[n] = [row[:d] for row in S.sub.component(n)]
    return Cover(S.obj, Submodule(R, spans, close=False))


def inverse_transport(b: WindowAlgebra, T: Cover) -> Cover:
    """Full preimage of a cover over the base under ``eps -> 0``."""
    P = representable(b, T.obj)
    f = b.field
    spans = {}
    for n in b.objects:
        if n < T.obj:
            continue
        d = b.dim(n, T.obj)
        rows = [list(r) + [f.zero] * d for r in T.sub.component(n)]
        for k in range(d):
            e = [f.zero] * (2 * d)
            e[d + k] = f.one
            rows.append(e)
        spans[n] = rows
    return Cover(T.obj, Submodule(P, spans, close=False))
