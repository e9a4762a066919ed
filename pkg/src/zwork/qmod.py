"""Quotient-category homs and the Z-generating-sequence predicates.

``qhom(M, N)`` is realized as the directed system ``Hom(M_{>=n}, N)`` over
the window.  Homs are computed degree by degree: a map is free on the new
generators of ``M`` in each degree and forced on everything reached from
below; dependencies among forced values become linear constraints on the
parameters.
"""

from __future__ import annotations

from typing import Optional

from .algebra import WindowAlgebra, indecomposable_counts
from .exact import kernel_basis, mat_mul, rank, rref, zeros
from .modules import (
    ModuleMap,
    Submodule,
    WindowModule,
    generated_submodule,
    representable,
    representable_map,
    sum_map,
)
from .status import Status
from .tails import _tail_certificates


def _relation_reach(w: WindowAlgebra) -> int:
    pres = w.presentation
    degs = [pres.relation_degree(r) for r in pres.relations]
    return max(degs + [pres.max_generator_degree])


def hom_dimension(M: WindowModule, N: WindowModule, start: int) -> int:
    """``dim Hom(M_{>=start}, N)`` on the window (constraints up to the top)."""
    w = M.algebra
    field = M.field
    P = 0  # number of parameters
    phi: dict = {}  # j -> tensor [i][c] -> list of P coefficients
    for j in w.objects:
        if j < start:
            continue
        dm, dn = M.dim(j), N.dim(j)
        # incoming: (vector in M_j, required value: dn x P linear forms)
        incoming = []
        for s in w.objects:
            if s < start or s >= j:
                continue
            if M.dim(s) == 0:
                continue
            for label, t in M.generator_moves(s):
                if t != j:
                    continue
                for k in range(M.dim(s)):
                    e = [field.zero] * M.dim(s)
                    e[k] = field.one
                    u = M.act_generator(label, s, e)
                    # value: A^N_g (phi_s e_k)
                    col = [phi[s][i][k] for i in range(N.dim(s))]  # N_s x P
                    val = []
                    mat = N.action.get((label, s))
                    for r in range(dn):
                        acc = [field.zero] * P
                        if mat:
                            for i in range(N.dim(s)):
                                a = mat[r][i]
                                if a != 0:
                                    acc = [x + a * y for x, y in zip(acc, col[i])]
                        val.append(acc)
                    incoming.append((u, val))
        if dm == 0:
            phi[j] = [[] for _ in range(dn)]
            forced = [row for _, val in incoming for row in val if any(x != 0 for x in row)]
            if forced:
                K = kernel_basis(forced, P, field)
                for s in phi:
                    phi[s] = [[_subst(v, K, field) for v in row] for row in phi[s]]
                P = len(K)
            continue
        # choose a basis of M_j: independent incoming vectors, then standard vectors
        basis_vecs, basis_vals, constraints = [], [], []
        for u, val in incoming:
            coeffs = _express(basis_vecs, u, field)
            if coeffs is None:
                basis_vecs.append(u)
                basis_vals.append(val)
            else:
                # val must equal sum coeffs * basis_vals
                for r in range(dn):
                    lhs = list(val[r])
                    for c, bv in zip(coeffs, basis_vals):
                        if c != 0:
                            lhs = [x - c * y for x, y in zip(lhs, bv[r])]
                    if any(x != 0 for x in lhs):
                        constraints.append(lhs)
        # complete with standard vectors: new parameters
        new_params = 0
        for c in range(dm):
            e = [field.zero] * dm
            e[c] = field.one
            if _express(basis_vecs, e, field) is None:
                basis_vecs.append(e)
                basis_vals.append(("new", new_params))
                new_params += dn
        P_new = P + new_params
        # pad old linear forms
        pad = [field.zero] * new_params
        for s in phi:
            phi[s] = [[v + pad for v in row] for row in phi[s]]
        constraints = [c + pad for c in constraints]
        vals = []
        for v in basis_vals:
            if isinstance(v, tuple):
                off = P + v[1]
                col = []
                for r in range(dn):
                    f = [field.zero] * P_new
                    f[off + r] = field.one
                    col.append(f)
                vals.append(col)
            else:
                vals.append([row + pad for row in v])
        P = P_new
        # phi_j = V B^{-1}: solve for each row of phi_j
        B = [[basis_vecs[k][c] for k in range(dm)] for c in range(dm)]  # columns are basis vectors
        Binv = _inverse(B, field)
        phi_j = []
        for r in range(dn):
            row = []
            for c in range(dm):
                acc = [field.zero] * P
                for k in range(dm):
                    b = Binv[k][c]
                    if b != 0:
                        acc = [x + b * y for x, y in zip(acc, vals[k][r])]
                row.append(acc)
            phi_j.append(row)
        phi[j] = phi_j
        if constraints:
            K = kernel_basis(constraints, P, field)
            # substitute params = K q
            for s in phi:
                phi[s] = [[_subst(v, K, field) for v in row] for row in phi[s]]
            P = len(K)
    return P


def _subst(v, K, field):
    out = [field.zero] * len(K)
    for q, kv in enumerate(K):
        acc = field.zero
        for a, b in zip(v, kv):
            if a != 0 and b != 0:
                acc = acc + a * b
        out[q] = acc
    return out


def _express(vectors, u, field):
    """Coefficients expressing ``u`` in independent ``vectors``, or None."""
    if not vectors:
        return None if any(x != 0 for x in u) else []
    n = len(vectors)
    mat = [[vectors[k][i] for k in range(n)] for i in range(len(u))]
    from .exact import solve

    return solve(mat, u, n, field)


def _inverse(B, field):
    n = len(B)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(B)]
    R, rk, piv = rref(aug, 2 * n)
    if rk < n or piv[:n] != list(range(n)):
        raise ArithmeticError("singular basis matrix")
    return [row[n:] for row in R]


def _socle_free(N: WindowModule, n: int) -> bool:
    """No nonzero element of ``N_n`` is killed by every generator."""
    if N.dim(n) == 0:
        return True
    rows = []
    for label, t in N.generator_moves(n):
        mat = N.action.get((label, n))
        if mat:
            rows.extend(mat)
    return rank(rows, N.dim(n)) == N.dim(n) if rows else False


def qhom(M: WindowModule, N: WindowModule, top: Optional[int] = None) -> dict:
    """Stabilized ``Hom(M_{>=n}, N)`` over the window.

    Sweeps ``n`` up to ``top`` (default: window top minus the relation
    reach).  ``restriction_bijective[n]`` records whether restriction to
    ``M_{>=n+1}`` is an isomorphism; the stabilization index is the least
    ``n`` from which every recorded restriction is bijective.
    """
    w = M.algebra
    if top is None:
        top = w.hi - _relation_reach(w)
    sweep = [n for n in w.objects if n <= top]
    dims = {n: hom_dimension(M, N, n) for n in sweep}
    bij = {}
    for n in sweep[:-1]:
        injective = M.dim(n) == 0 or _socle_free(N, n)
        bij[n] = injective and dims[n] == dims[n + 1]
    out = {"dims": dims, "restriction_bijective": bij}
    stab = None
    for n in sweep[:-1]:
        if all(bij[k] for k in sweep[:-1] if k >= n):
            stab = n
            break
    if stab is None or len([k for k in bij if k >= stab]) < 1:
        out.update(status=Status.INCONCLUSIVE, reason="not stabilized before the horizon", stabilization_index=None,
                   dim=None)
    else:
        out.update(status=Status.TRUE, stabilization_index=stab, dim=dims[stab])
    return out


# ---------------------------------------------------------------------------
# ampleness and T-projectivity


def generation_degree_estimate(w: WindowAlgebra) -> int:
    """Largest degree of a new generator of ``hom(-, lo)`` in the lower half of the window."""
    half = (w.hi - w.lo) // 2
    counts = indecomposable_counts(w, w.lo)
    degs = [j - w.lo for j, c in counts.items() if c and j - w.lo <= max(half, 1)]
    return max(degs, default=1)


def check_ample(w: WindowAlgebra) -> dict:
    """For every ``m <= n``: the elements of ``hom(-, m)`` in degrees ``n .. n+D'-1``
    generate a cover, i.e. the cokernel of ``(+) hom(-, n') -> hom(-, m)`` dies.

    ``D'`` is the generation degree observed in the lower half of the window,
    so a finite family of twists stands in for the finite direct sum.
    """
    D_est = generation_degree_estimate(w)
    D = w.presentation.max_generator_degree
    failures = []
    pending = []
    checked = 0
    for m in w.objects:
        R = representable(w, m)
        for n in w.objects:
            if n < m or n + D_est - 1 > w.hi:
                continue
            elems = []
            for k in range(n, n + D_est):
                for i in range(w.dim(k, m)):
                    e = [w.field.zero] * w.dim(k, m)
                    e[i] = w.field.one
                    elems.append((k, e))
            G = generated_submodule(R, elems)
            checked += 1
            certified = None
            for k in range(n, w.hi - D + 2):
                if all(G.is_full(j) for j in range(k, k + D)):
                    certified = k
                    break
            if certified is not None:
                continue
            if not G.is_full(w.hi):
                failures.append({"m": m, "n": n, "k": w.hi})
            else:
                pending.append({"m": m, "n": n})
    if failures:
        status = Status.FALSE
    elif pending:
        status = Status.INCONCLUSIVE
    else:
        status = Status.TRUE
    out = {"status": status, "checked": checked, "generation_degree": D_est}
    if failures:
        out["witness"] = failures[0]
        out["reason"] = "cokernel of the tail generators survives to the window top"
    elif pending:
        out["reason"] = "cokernel vanishes at the top but no full band certifies it"
    return out


def check_t_projective(w: WindowAlgebra, epi: ModuleMap, f: tuple) -> dict:
    """Least ``n0`` with ``f . hom(n, m)`` inside the image of ``epi`` for ``n >= n0``."""
    m, v = f
    Y = epi.target
    img = epi.image()
    res = _tail_certificates(Y, img, w, [(m, 0, list(v))])
    n0 = res["n0"][(m, 0)]
    out = {"status": res["status"], "n0": n0}
    if res["status"] is Status.FALSE:
        out["reason"] = "composites never lift inside the window"
    elif n0 is None:
        out["reason"] = "no certifying band inside the window"
    return out


def canonical_tail_epi(w: WindowAlgebra, m: int) -> ModuleMap:
    """``(+)_g hom(-, m + deg g) -> hom(-, m)`` by the generators at ``m``."""
    maps = []
    for g in w.generators_at(m):
        maps.append(representable_map(w, m + g.degree, m, w.generator_element(g.label, m)))
    return sum_map(maps, representable(w, m))


def zgen_report(w: WindowAlgebra, full_pairs: Optional[list] = None) -> dict:
    """Ampleness, T-projectivity on canonical tail covers, and T-fullness/faithfulness."""
    ample = check_ample(w)
    reach = _relation_reach(w)
    proj = {}
    for m in w.objects:
        if m + reach >= w.hi or not w.generators_at(m):
            continue
        epi = canonical_tail_epi(w, m)
        r = check_t_projective(w, epi, (m, [w.field.one]))
        proj[m] = {"status": r["status"], "n0": r["n0"]}
    proj_status = Status.combine(v["status"] for v in proj.values()) if proj else Status.INCONCLUSIVE
    if full_pairs is None:
        m = w.lo
        full_pairs = [(m, m), (m + 1, m)]
    ff = {}
    for n, m in full_pairs:
        if not (w.in_window(n) and w.in_window(m)):
            continue
        q = qhom(representable(w, n), representable(w, m))
        expected = w.dim(n, m)
        if q["status"] is Status.TRUE:
            st = Status.of(q["dim"] == expected)
        else:
            st = Status.INCONCLUSIVE
        ff[f"{n},{m}"] = {"status": st, "qhom_dim": q["dim"], "hom_dim": expected}
    ff_status = Status.combine(v["status"] for v in ff.values()) if ff else Status.INCONCLUSIVE
    overall = Status.combine([ample["status"], proj_status, ff_status])
    return {
        "status": overall,
        "ample": ample,
        "t_projective": {"status": proj_status, "objects": proj},
        "t_full_faithful": {"status": ff_status, "pairs": ff},
        "note": "L_tails = T_tails is assumed; a window can only refute it (see the glueing check)",
    }
