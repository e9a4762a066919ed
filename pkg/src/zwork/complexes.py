"""Bounded complexes of projectives over a thread algebra.

A complex records, per cohomological degree, a tuple of objects (one
indecomposable projective ``P_c`` per entry) and, per degree ``q``, the
differential ``C^q -> C^{q+1}`` as a sparse matrix ``{(row, col): coords}``
where the entry from ``P_c`` to ``P_r`` is an element of ``hom(c, r)``.
Conventions: ``C[s]^p = C^{p+s}`` with differential ``(-1)^s d``; the cone
of ``f: X -> Y`` has ``X^{q+1} (+) Y^q`` and differential
``[[-d_X, 0], [f, d_Y]]``; the hom complex has ``D(f) = d f - (-1)^k f d``.

Every constructor checks ``d . d = 0`` (and chain-map identities).
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .exact import DualScalar, kernel_basis, rank, rref, reduce_against
from .status import Status


class ComplexError(ValueError):
    pass


def _scale(coords: dict, c) -> dict:
    return {k: c * v for k, v in coords.items() if c * v != 0}


def _add_into(acc: dict, coords: dict, c=1):
    for k, v in coords.items():
        acc[k] = acc.get(k, 0) + c * v


def _clean(coords: dict) -> dict:
    return {k: v for k, v in coords.items() if v != 0}


def compose_entries(cat, A: dict, B: dict, src: tuple, mid: tuple, tgt: tuple) -> dict:
    """``A . B`` for sparse matrices ``B: src -> mid`` and ``A: mid -> tgt``."""
    by_mid: dict = {}
    for (s, c), y in B.items():
        by_mid.setdefault(s, []).append((c, y))
    out: dict = {}
    for (r, s), x in A.items():
        for c, y in by_mid.get(s, ()):
            z = cat.compose(src[c], mid[s], tgt[r], y, x)
            if z:
                acc = out.setdefault((r, c), {})
                _add_into(acc, z)
    return {k: _clean(v) for k, v in out.items() if _clean(v)}


def add_entries(X: dict, Y: dict, c=1) -> dict:
    out = {k: dict(v) for k, v in X.items()}
    for key, y in Y.items():
        acc = out.setdefault(key, {})
        _add_into(acc, y, c)
    return {k: _clean(v) for k, v in out.items() if _clean(v)}


class Complex:
    def __init__(self, cat, terms: dict, d: dict, check: bool = True):
        self.cat = cat
        self.terms = {q: tuple(objs) for q, objs in terms.items() if objs}
        self.d = {}
        for q, mat in d.items():
            mat = {k: _clean(v) for k, v in mat.items() if _clean(v)}
            if mat:
                self.d[q] = mat
        if check:
            self.check()

    # -- structure ------------------------------------------------------------

    def term(self, q: int) -> tuple:
        return self.terms.get(q, ())

    def diff(self, q: int) -> dict:
        return self.d.get(q, {})

    def degrees(self) -> list:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def multiplicities(self) -> dict:
        return {q: dict(sorted(Counter(objs).items())) for q, objs in sorted(self.terms.items())}

    def signature(self) -> tuple:
        return tuple((q, tuple(sorted(Counter(objs).items()))) for q, objs in sorted(self.terms.items()))

    def check(self):
        for q, mat in self.d.items():
            src, tgt = self.term(q), self.term(q + 1)
            for (r, c), y in mat.items():
                if not (0 <= c < len(src) and 0 <= r < len(tgt)):
                    raise ComplexError(f"differential entry {(r, c)} out of range in degree {q}")
                if src[c] < tgt[r] and y:
                    raise ComplexError("differential entry against the grading")
        for q in self.d:
            dd = compose_entries(self.cat, self.diff(q + 1), self.diff(q), self.term(q), self.term(q + 1), self.term(q + 2))
            if dd:
                raise ComplexError(f"d.d != 0 in degree {q}")
        return True

    def __repr__(self):
        parts = [f"{q}:{list(objs)}" for q, objs in sorted(self.terms.items())]
        return f"Complex({', '.join(parts) or '0'})"


def projective(cat, obj: int, degree: int = 0) -> Complex:
    return Complex(cat, {degree: (obj,)}, {})


def zero_complex(cat) -> Complex:
    return Complex(cat, {}, {})


def shift(C: Complex, s: int) -> Complex:
    sign = -1 if s % 2 else 1
    terms = {q - s: objs for q, objs in C.terms.items()}
    d = {q - s: {k: _scale(v, sign) for k, v in mat.items()} for q, mat in C.d.items()}
    return Complex(C.cat, terms, d, check=False)


def direct_sum(Cs: list) -> Complex:
    if not Cs:
        raise ComplexError("empty direct sum")
    cat = Cs[0].cat
    degs = sorted({q for C in Cs for q in C.terms})
    terms = {q: tuple(o for C in Cs for o in C.term(q)) for q in degs}
    d = {}
    for q in degs:
        mat = {}
        ro = co = 0
        for C in Cs:
            for (r, c), y in C.diff(q).items():
                mat[(ro + r, co + c)] = y
            ro += len(C.term(q + 1))
            co += len(C.term(q))
        d[q] = mat
    return Complex(cat, terms, d, check=False)


@dataclass
class ChainMap:
    source: Complex
    target: Complex
    comps: dict = field(default_factory=dict)  # q -> {(r, c): coords}, C^q -> D^q

    def __post_init__(self):
        self.check()

    def comp(self, q):
        return self.comps.get(q, {})

    def check(self):
        S, T = self.source, self.target
        cat = S.cat
        degs = set(S.terms) | set(T.terms)
        for q in degs | {q - 1 for q in degs}:
            lhs = compose_entries(cat, T.diff(q), self.comp(q), S.term(q), T.term(q), T.term(q + 1))
            rhs = compose_entries(cat, self.comp(q + 1), S.diff(q), S.term(q), S.term(q + 1), T.term(q + 1))
            if add_entries(lhs, rhs, -1):
                raise ComplexError(f"not a chain map in degree {q}")
        return True


def identity_map(C: Complex) -> ChainMap:
    comps = {q: {(i, i): C.cat.identity_coords(o) for i, o in enumerate(objs)} for q, objs in C.terms.items()}
    return ChainMap(C, C, comps)


def zero_map(C: Complex, D: Complex) -> ChainMap:
    return ChainMap(C, D, {})


def cone(f: ChainMap) -> Complex:
    X, Y = f.source, f.target
    degs = sorted({q - 1 for q in X.terms} | set(Y.terms))
    terms = {q: X.term(q + 1) + Y.term(q) for q in degs}
    d = {}
    for q in degs:
        nx0, nx1 = len(X.term(q + 1)), len(X.term(q + 2))
        mat = {}
        for (r, c), y in X.diff(q + 1).items():
            mat[(r, c)] = _scale(y, -1)
        for (r, c), y in f.comp(q + 1).items():
            mat[(nx1 + r, c)] = y
        for (r, c), y in Y.diff(q).items():
            mat[(nx1 + r, nx0 + c)] = y
        d[q] = mat
    return Complex(X.cat, terms, d)


# ---------------------------------------------------------------------------
# hom complexes


class HomComplex:
    """Graded maps ``C -> D`` with ``D(f) = d_D f - (-1)^k f d_C``."""

    def __init__(self, C: Complex, D: Complex):
        self.C, self.D = C, D
        self.cat = C.cat
        self.index = {}
        if C.terms and D.terms:
            kmin = min(D.terms) - max(C.terms)
            kmax = max(D.terms) - min(C.terms)
            for k in range(kmin, kmax + 1):
                idx = []
                for p in C.degrees():
                    for r, ro in enumerate(D.term(p + k)):
                        for c, co in enumerate(C.term(p)):
                            for i in range(self.cat.dim(co, ro)):
                                idx.append((p, r, c, i))
                if idx:
                    self.index[k] = idx
        self.pos = {k: {e: j for j, e in enumerate(idx)} for k, idx in self.index.items()}
        self._mats = {}

    def degrees(self):
        return sorted(self.index)

    def dim(self, k):
        return len(self.index.get(k, ()))

    def basis_map(self, k, j) -> dict:
        """``{p: {(r, c): coords}}`` for basis element ``j`` of degree ``k``."""
        p, r, c, i = self.index[k][j]
        return {p: {(r, c): {i: self.cat.ring.one}}}

    def to_map(self, k, vec) -> dict:
        out: dict = {}
        for j, x in enumerate(vec):
            if x == 0:
                continue
            p, r, c, i = self.index[k][j]
            acc = out.setdefault(p, {}).setdefault((r, c), {})
            acc[i] = acc.get(i, 0) + x
        return {p: {rc: _clean(v) for rc, v in m.items() if _clean(v)} for p, m in out.items()}

    def from_map(self, k, comps: dict) -> list:
        vec = [self.cat.ring.zero] * self.dim(k)
        for p, m in comps.items():
            for (r, c), coords in m.items():
                for i, x in coords.items():
                    vec[self.pos[k][(p, r, c, i)]] = x
        return vec

    def differential(self, k) -> list:
        """Dense matrix of ``Hom^k -> Hom^{k+1}`` (rows index degree ``k+1``)."""
        if k in self._mats:
            return self._mats[k]
        C, D, cat = self.C, self.D, self.cat
        zero = cat.ring.zero
        rows = self.dim(k + 1)
        mat = [[zero] * self.dim(k) for _ in range(rows)]
        sign = -1 if k % 2 else 1
        for j in range(self.dim(k)):
            p, r, c, i = self.index[k][j]
            f = {(r, c): {i: cat.ring.one}}
            img = compose_entries(cat, D.diff(p + k), f, C.term(p), D.term(p + k), D.term(p + k + 1))
            for (r2, c2), y in img.items():
                for i2, x in y.items():
                    mat[self.pos[k + 1][(p, r2, c2, i2)]][j] += x
            img = compose_entries(cat, f, C.diff(p - 1), C.term(p - 1), C.term(p), D.term(p + k))
            for (r2, c2), y in img.items():
                for i2, x in y.items():
                    mat[self.pos[k + 1][(p - 1, r2, c2, i2)]][j] -= sign * x
        self._mats[k] = mat
        return mat

    # cohomology over a field

    def cocycles(self, k) -> list:
        n = self.dim(k)
        if n == 0:
            return []
        if self.dim(k + 1) == 0:
            return [[self.cat.field.one if i == j else self.cat.field.zero for i in range(n)] for j in range(n)]
        return kernel_basis(self.differential(k), n, self.cat.field)

    def coboundaries(self, k) -> list:
        if self.dim(k - 1) == 0 or self.dim(k) == 0:
            return []
        M = self.differential(k - 1)
        cols = [[M[i][j] for i in range(self.dim(k))] for j in range(self.dim(k - 1))]
        R, rk, piv = rref(cols, self.dim(k))
        return R

    def cohomology_representatives(self, k) -> list:
        B = self.coboundaries(k)
        span = [list(r) for r in B]
        reps = []
        for z in self.cocycles(k):
            if span:
                R, rk, piv = rref(span, self.dim(k))
                if all(x == 0 for x in reduce_against(z, R, piv)):
                    continue
            reps.append(z)
            span.append(z)
        return reps

    def cohomology_dims(self) -> dict:
        out = {}
        for k in self.degrees():
            z = len(self.cocycles(k))
            b = len(self.coboundaries(k))
            if z - b:
                out[k] = z - b
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.dim(k) for k in self.degrees())


def hom_complex(C: Complex, D: Complex) -> HomComplex:
    if C.cat is not D.cat and C.cat != D.cat:
        raise ComplexError("complexes over different algebras")
    return HomComplex(C, D)


def rhom(C: Complex, D: Complex) -> dict:
    """Cohomology dimensions of ``RHom(C, D)`` by degree (nonzero only)."""
    H = hom_complex(C, D)
    dims = H.cohomology_dims()
    chi = sum((-1) ** (k % 2) * v for k, v in dims.items())
    if chi != cartan_pairing(C, D):
        raise ComplexError("Euler characteristic does not match the Cartan pairing")
    return dims


def cartan_pairing(C: Complex, D: Complex) -> int:
    total = 0
    for p, objs in C.terms.items():
        for q, objs2 in D.terms.items():
            s = 1 if (q - p) % 2 == 0 else -1
            for c in objs:
                for r in objs2:
                    total += s * C.cat.dim(c, r)
    return total


def cocycle_chain_map(E: Complex, C: Complex, k: int, H: HomComplex, vec) -> ChainMap:
    """A degree-``k`` cocycle of ``Hom(E, C)`` as a chain map ``E[-k] -> C``."""
    comps = {p + k: m for p, m in H.to_map(k, vec).items()}
    return ChainMap(shift(E, -k), C, comps)


# ---------------------------------------------------------------------------
# tensoring with graded vector spaces


def tensor_k(V: dict, E: Complex) -> Complex:
    """``(+)_k V^k (x) E[-k]`` for a graded vector space given as ``{k: dim}``."""
    parts = []
    for k, n in sorted(V.items()):
        parts.extend([shift(E, -k)] * n)
    if not parts:
        return zero_complex(E.cat)
    S = direct_sum(parts)
    S.check()
    return S


def cotensor_k(V: dict, E: Complex) -> Complex:
    """``Hom_k(V, k) (x) E``: the dual of ``V`` lives in reversed degrees."""
    return tensor_k({-k: n for k, n in V.items()}, E)


def _tensor_complex(V_dims: dict, V_diff: dict, E: Complex, sign_twist: bool = True):
    """``V (x) E`` for a complex of free modules ``V`` (``V_diff[k]`` dense, rows ``V^{k+1}``).

    Returns the complex and the index ``(q, position) -> (k, v, c)``.
    """
    cat = E.cat
    degs = sorted({k + p for k in V_dims for p in E.terms})
    terms, where = {}, {}
    for q in degs:
        objs, idx = [], []
        for k in sorted(V_dims):
            for v in range(V_dims[k]):
                for c, o in enumerate(E.term(q - k)):
                    objs.append(o)
                    idx.append((k, v, c))
        terms[q] = tuple(objs)
        where[q] = {e: j for j, e in enumerate(idx)}
    d = {}
    for q in degs:
        mat = {}
        for (k, v, c), j in where[q].items():
            # V-differential
            if k in V_diff and (k + 1) in V_dims:
                M = V_diff[k]
                for v2 in range(V_dims[k + 1]):
                    x = M[v2][v]
                    if x != 0:
                        r = where[q + 1][(k + 1, v2, c)]
                        mat[(r, j)] = _scale(cat.identity_coords(E.term(q - k)[c]), x)
            # E-differential with sign (-1)^k
            sgn = -1 if (k % 2 and sign_twist) else 1
            for (r0, c0), y in E.diff(q - k).items():
                if c0 != c:
                    continue
                r = where[q + 1][(k, v, r0)]
                acc = mat.setdefault((r, j), {})
                _add_into(acc, y, sgn)
        d[q] = mat
    return Complex(cat, terms, d), where


# ---------------------------------------------------------------------------
# mutations


def _evaluation_sum(E: Complex, C: Complex, reps: list):
    """``(+) E[-k] -> C`` from cocycle representatives ``[(k, H, vec)]``."""
    if not reps:
        return None
    maps = [cocycle_chain_map(E, C, k, H, vec) for k, H, vec in reps]
    S = direct_sum([f.source for f in maps])
    comps: dict = {}
    for q in S.terms:
        co = 0
        mat = {}
        for f in maps:
            for (r, c), y in f.comp(q).items():
                mat[(r, co + c)] = y
            co += len(f.source.term(q))
        comps[q] = mat
    return ChainMap(S, C, comps)


def left_mutation(E: Complex, C: Complex, model: Optional[str] = None) -> Complex:
    """``L_E(C) = cone(RHom(E, C) (x) E -> C)``, minimized.

    ``model="cohomology"`` uses cocycle representatives (needs a field);
    ``model="full"`` tensors with the whole hom complex and works over the
    dual numbers without any rank computation.
    """
    if model is None:
        model = "full" if E.cat.dual else "cohomology"
    if model == "cohomology":
        H = hom_complex(E, C)
        reps = [(k, H, z) for k in H.degrees() for z in H.cohomology_representatives(k)]
        ev = _evaluation_sum(E, C, reps)
        if ev is None:
            return minimize(C)
        return minimize(cone(ev))
    H = hom_complex(E, C)
    V_dims = {k: H.dim(k) for k in H.degrees()}
    V_diff = {k: H.differential(k) for k in H.degrees()}
    if not V_dims:
        return minimize(C)
    T, where = _tensor_complex(V_dims, V_diff, E)
    comps = {}
    for q, pos in where.items():
        mat = {}
        for (k, v, c), j in pos.items():
            p, r, c0, i = H.index[k][v]
            if c0 == c and p == q - k:
                mat[(r, j)] = {i: E.cat.ring.one}
        comps[q] = mat
    ev = ChainMap(T, C, comps)
    return minimize(cone(ev))


def right_mutation(E: Complex, C: Complex) -> Complex:
    """``R_E(C) = cone(C -> RHom(C, E)^* (x) E)[-1]``, minimized."""
    H = hom_complex(C, E)
    reps = [(k, z) for k in H.degrees() for z in H.cohomology_representatives(k)]
    if not reps:
        return minimize(C)
    targets, maps = [], []
    for k, z in reps:
        Ek = shift(E, k)
        targets.append(Ek)
        maps.append({q: m for q, m in H.to_map(k, z).items()})
    T = direct_sum(targets)
    comps: dict = {}
    for q in C.terms:
        mat = {}
        ro = 0
        for Ek, m in zip(targets, maps):
            for (r, c), y in m.get(q, {}).items():
                mat[(ro + r, c)] = y
            ro += len(Ek.term(q))
        comps[q] = mat
    coev = ChainMap(C, T, comps)
    return minimize(shift(cone(coev), -1))


def composite_mutation(Es: list, C: Complex, side: str = "left") -> Complex:
    """``L_(E0..Ek) = L_E0 ... L_Ek`` and ``R_(E0..Ek) = R_Ek ... R_E0``."""
    out = C
    if side == "left":
        for E in reversed(Es):
            out = left_mutation(E, out)
    elif side == "right":
        for E in Es:
            out = right_mutation(E, out)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return out


# ---------------------------------------------------------------------------
# minimal complexes and derived isomorphism


def _unit_entry(cat, C: Complex):
    for q in sorted(C.d):
        for (r, c), y in sorted(C.d[q].items()):
            if C.term(q)[c] == C.term(q + 1)[r] and cat.dim(C.term(q)[c], C.term(q)[c]) == 1:
                x = y.get(0)
                if x is not None and cat.ring.is_unit(x):
                    return q, r, c, x
    return None


def minimize(C: Complex) -> Complex:
    """Split off contractible summands until every differential lies in the radical."""
    cat = C.cat
    terms = {q: list(o) for q, o in C.terms.items()}
    d = {q: dict(m) for q, m in C.d.items()}
    cur = Complex(cat, terms, d, check=False)
    while True:
        hit = _unit_entry(cat, cur)
        if hit is None:
            break
        q, r, c, x = hit
        inv = cat.ring.inv(x)
        src, tgt = cur.term(q), cur.term(q + 1)
        dq = cur.diff(q)
        col_c = {rr: y for (rr, cc), y in dq.items() if cc == c and rr != r}
        row_r = {cc: y for (rr, cc), y in dq.items() if rr == r and cc != c}
        new_dq = {}
        for (rr, cc), y in dq.items():
            if rr == r or cc == c:
                continue
            new_dq[(rr, cc)] = dict(y)
        for rr, y1 in col_c.items():
            for cc, y2 in row_r.items():
                z = cat.compose(src[cc], tgt[r], tgt[rr], y2, y1)
                acc = new_dq.setdefault((rr, cc), {})
                _add_into(acc, z, -inv)
        terms = {k: list(v) for k, v in cur.terms.items()}
        d = {k: dict(v) for k, v in cur.d.items()}
        d[q] = _reindex(new_dq, drop_row=r, drop_col=c)
        if q - 1 in d:
            d[q - 1] = _reindex({k: v for k, v in d[q - 1].items() if k[0] != c}, drop_row=c, drop_col=None)
        if q + 1 in d:
            d[q + 1] = _reindex({k: v for k, v in d[q + 1].items() if k[1] != r}, drop_row=None, drop_col=r)
        del terms[q][c]
        del terms[q + 1][r]
        cur = Complex(cat, terms, d, check=False)
    cur.check()
    return cur


def _reindex(mat: dict, drop_row, drop_col) -> dict:
    out = {}
    for (r, c), y in mat.items():
        if r == drop_row or c == drop_col:
            continue
        r2 = r - 1 if drop_row is not None and r > drop_row else r
        c2 = c - 1 if drop_col is not None and c > drop_col else c
        out[(r2, c2)] = y
    return out


def _shift_match(sa: dict, sb: dict):
    """``s`` with ``multiplicities(A[s]) == multiplicities(B)``, if any."""
    if not sa or not sb:
        return None
    s = min(sa) - min(sb)
    if {q - s: v for q, v in sa.items()} == sb:
        return s
    return None


def _reduction_blocks(cat, C: Complex, D: Complex, f_comps: dict):
    """Square scalar blocks (per degree and object) of a map between minimal complexes."""
    blocks = []
    for q, objs in C.terms.items():
        tgt = D.term(q)
        for o in sorted(set(objs)):
            cols = [c for c, x in enumerate(objs) if x == o]
            rows = [r for r, x in enumerate(tgt) if x == o]
            m = f_comps.get(q, {})
            blocks.append([[m.get((r, c), {}).get(0, 0) for c in cols] for r in rows])
    return blocks


def _blocks_invertible(blocks, field) -> bool:
    for B in blocks:
        n = len(B)
        if n == 0:
            continue
        if len(B[0]) != n:
            return False
        rows = [[field(x) for x in row] for row in B]
        if rank(rows, n) < n:
            return False
    return True


def iso_in_derived(C: Complex, D: Complex, tries: int = 24, seed: int = 0) -> dict:
    """Decide ``C ~ D`` in the derived category of the thread (over a field).

    Both complexes are minimized; minimal complexes are quasi-isomorphic
    iff isomorphic, iff some degree-0 cocycle of ``Hom(C, D)`` is invertible
    modulo the radical.  Candidates are the cocycle basis and seeded random
    combinations; every hit is verified by ``minimize(cone(f)) == 0``.  When
    no candidate works the symbolic determinant decides small cases.
    """
    cat = C.cat
    A, B = minimize(C), minimize(D)
    ma, mb = A.multiplicities(), B.multiplicities()
    if ma != mb:
        s = _shift_match(ma, mb)
        out = {"status": Status.FALSE, "reason": "multiplicity vectors differ", "left": _mult_str(ma),
               "right": _mult_str(mb)}
        if s is not None:
            out["reason"] = "shift mismatch"
            out["shift"] = s
        return out
    if A.is_zero():
        return {"status": Status.TRUE, "witness": "both complexes are contractible"}
    H = hom_complex(A, B)
    Z = H.cocycles(0)
    if not Z:
        return {"status": Status.FALSE, "reason": "no degree-0 chain maps"}
    field = cat.field
    rng = random.Random(seed)
    candidates = list(Z)
    for _ in range(tries):
        coeffs = [field(rng.randint(-7, 7)) for _ in Z]
        v = [field.zero] * H.dim(0)
        for c, z in zip(coeffs, Z):
            if c != 0:
                v = [a + c * b for a, b in zip(v, z)]
        candidates.append(v)
    for v in candidates:
        comps = H.to_map(0, v)
        if _blocks_invertible(_reduction_blocks(cat, A, B, comps), field):
            f = ChainMap(A, B, comps)
            if minimize(cone(f)).is_zero():
                return {"status": Status.TRUE, "witness": "chain map invertible modulo the radical",
                        "coefficients": [str(x) for x in v]}
    return _symbolic_iso(cat, A, B, H, Z)


def _symbolic_iso(cat, A, B, H, Z):
    if len(Z) > 12:
        return {"status": Status.INCONCLUSIVE, "reason": "iso search exhausted; too many parameters for symbolic check"}
    import sympy

    ts = sympy.symbols(f"t0:{len(Z)}")
    poly = sympy.Integer(1)
    for q, objs in A.terms.items():
        tgt = B.term(q)
        for o in sorted(set(objs)):
            cols = [c for c, x in enumerate(objs) if x == o]
            rows = [r for r, x in enumerate(tgt) if x == o]
            M = sympy.zeros(len(rows), len(cols))
            for t, z in zip(ts, Z):
                comps = H.to_map(0, z).get(q, {})
                for a, r in enumerate(rows):
                    for b, c in enumerate(cols):
                        x = comps.get((r, c), {}).get(0, 0)
                        if x != 0:
                            M[a, b] += t * sympy.Rational(str(x)) if cat.field.characteristic == 0 else t * int(x.v)
            poly *= M.det()
    poly = sympy.expand(poly)
    if cat.field.characteristic:
        poly = sympy.Poly(poly, *ts, modulus=cat.field.characteristic).as_expr() if poly != 0 else poly
    if poly == 0:
        return {"status": Status.FALSE, "reason": "no chain map is invertible modulo the radical (symbolic determinant)"}
    return {"status": Status.INCONCLUSIVE, "reason": "an isomorphism exists generically but the search did not hit one"}


def _mult_str(m: dict) -> dict:
    return {str(q): {str(o): n for o, n in v.items()} for q, v in m.items()}


def reduce_complex(C: Complex, base_cat) -> Complex:
    """``eps -> 0`` on the coefficients of a complex over a deformed thread."""
    d = {}
    for q, mat in C.d.items():
        d[q] = {k: {i: (x.a if isinstance(x, DualScalar) else x) for i, x in y.items()} for k, y in mat.items()}
    return Complex(base_cat, dict(C.terms), d)


# ---------------------------------------------------------------------------
# exceptional sequences


def sequence_report(Es: list) -> dict:
    """RHom tables between members with exceptional / strong / geometric verdicts."""
    n = len(Es)
    tables = {}
    exceptional = True
    strong = True
    for i in range(n):
        for j in range(n):
            t = rhom(Es[i], Es[j])
            tables[(i, j)] = t
            if i == j and t != {0: 1}:
                exceptional = False
            if i > j and t:
                exceptional = False
            if i < j and any(k != 0 for k in t):
                strong = False
    strong = strong and exceptional
    return {
        "exceptional": Status.of(exceptional),
        "strong": Status.of(strong),
        "geometric": Status.of(strong),
        "tables": {f"{i},{j}": {str(k): v for k, v in sorted(t.items())} for (i, j), t in tables.items()},
        "note": "geometric is checked on the listed pairs only",
    }


def is_exceptional(E: Complex) -> bool:
    return rhom(E, E) == {0: 1}


# ---------------------------------------------------------------------------
# helices


def simple_resolution(w, a: int, top: int, length: int) -> list:
    """Minimal projective resolution of the simple at ``a`` over a window algebra.

    Returns ``[(objects_p, d_p)]`` for ``p = 0..length`` where ``d_p`` is the
    sparse matrix of ``F_p -> F_{p-1}`` (empty for ``p = 0``).  Only
    generators at objects ``<= top`` are found; ``top`` must lie in the window.
    """
    if w.dual:
        raise ComplexError("resolutions are computed over a field; reduce the algebra first")
    if not (w.in_window(a) and w.in_window(top)):
        raise ComplexError(f"objects {a}..{top} must lie in the window [{w.lo}, {w.hi}]")
    field = w.field
    D = w.presentation.max_generator_degree
    out = [((a,), {})]
    # kernel of the augmentation: radical of P_a, i.e. everything at n > a
    for p in range(1, length + 1):
        objs, _ = out[-1]
        prev_objs = out[-2][0] if p >= 2 else None
        prev_d = out[-1][1]
        kernels = {}
        new_objs, new_d = [], {}
        for n in range(a, top + 1):
            # coordinates of F_{p-1}(n) = (+)_c hom(n, c)
            offs, tot = [], 0
            for c in objs:
                offs.append(tot)
                tot += w.dim(n, c) if n >= c else 0
            if tot == 0:
                kernels[n] = ([], offs)
                continue
            if p == 1:
                K = [] if n == a else [[field.one if i == j else field.zero for i in range(tot)] for j in range(tot)]
            else:
                K = _resolution_kernel(w, n, objs, offs, tot, prev_objs, prev_d)
            kernels[n] = (K, offs)
            if not K:
                continue
            dec = []
            for n2 in range(max(a, n - D), n):
                K2, offs2 = kernels.get(n2, ([], []))
                for v in K2:
                    for i in range(w.dim(n, n2)):
                        dec.append(_act_on_sum(w, objs, offs2, v, n2, n, {i: field.one}, offs, tot))
            span = [list(r) for r in rref(dec, tot)[0]] if dec else []
            for v in K:
                red = reduce_against(v, *_rr(span, tot))
                if any(x != 0 for x in red):
                    col = len(new_objs)
                    new_objs.append(n)
                    for ci, c in enumerate(objs):
                        coords = {i: red[offs[ci] + i] for i in range(w.dim(n, c) if n >= c else 0)
                                  if red[offs[ci] + i] != 0}
                        if coords:
                            new_d[(ci, col)] = coords
                    span.append(red)
        out.append((tuple(new_objs), new_d))
    return out


def _rr(span, tot):
    if not span:
        return [], []
    R, rk, piv = rref(span, tot)
    return R, piv


def _act_on_sum(w, objs, offs_src, v, n_src, n, a_coords, offs, tot):
    """``v . a`` for ``v`` in ``(+) hom(n_src, c)`` and ``a`` in ``hom(n, n_src)``."""
    out = [w.field.zero] * tot
    for ci, c in enumerate(objs):
        if n_src < c:
            continue
        x = {i: v[offs_src[ci] + i] for i in range(w.dim(n_src, c)) if v[offs_src[ci] + i] != 0}
        if not x:
            continue
        for k, y in w.compose(n, n_src, c, a_coords, x).items():
            out[offs[ci] + k] += y
    return out


def _resolution_kernel(w, n, objs, offs, tot, prev_objs, prev_d):
    """Kernel at ``n`` of ``(+)_c P_c -> (+)_r P_r`` given by ``prev_d``."""
    field = w.field
    toffs, ttot = [], 0
    for r in prev_objs:
        toffs.append(ttot)
        ttot += w.dim(n, r) if n >= r else 0
    if ttot == 0:
        return [[field.one if i == j else field.zero for i in range(tot)] for j in range(tot)]
    M = [[field.zero] * tot for _ in range(ttot)]
    for (r, c), y in prev_d.items():
        co, ro = objs[c], prev_objs[r]
        if n < co:
            continue
        for i in range(w.dim(n, co)):
            for k, z in w.compose(n, co, ro, {i: field.one}, y).items():
                M[toffs[r] + k][offs[c] + i] += z
    return kernel_basis(M, tot, field)


def materialize(T, obj: int, window=None) -> Complex:
    """The projective ``P_obj`` for ``obj`` just outside the thread, as a thread complex.

    ``obj = hi + 1`` comes from the resolution of the simple at ``lo`` and
    ``obj = lo - 1`` from the resolution of the simple at ``lo - 1``; the
    torsion simple vanishes after passing to tails.
    """
    w = window if window is not None else T.window
    L = len(T.objects)
    if T.contains(obj):
        return projective(T, obj)
    if obj == T.hi + 1:
        res = simple_resolution(w, T.lo, T.hi + 1, L)
        _check_ends(res, L, obj)
        terms = {L - 1 - p: res[p][0] for p in range(L)}
        d = {L - 1 - p: res[p][1] for p in range(1, L)}
    elif obj == T.lo - 1:
        res = simple_resolution(w, T.lo - 1, T.hi, L)
        _check_ends(res, L, None)
        terms = {1 - p: res[p][0] for p in range(1, L + 1)}
        d = {1 - p: res[p][1] for p in range(2, L + 1)}
    else:
        raise ComplexError(f"object {obj} is more than one step outside the thread [{T.lo}, {T.hi}]")
    for objs in terms.values():
        if any(not T.contains(o) for o in objs):
            raise ComplexError("resolution leaves the thread; the thread is too short for this algebra")
    return Complex(T, terms, d)


def _check_ends(res, L, last):
    if last is not None and res[L][0] != (last,):
        raise ComplexError(f"resolution does not end in a single projective at {last}: {res[L][0]}")


def helix_member(T, t: int, window=None) -> Complex:
    """``E_t``, where ``E_t = P_{-t}`` on the thread and one step beyond each end."""
    return materialize(T, -t, window)


def verify_helix(T, t: int, d: int, window=None) -> dict:
    """Check ``L_{E_{t-n+1}} ... L_{E_{t-1}}(E_t)[1 - d] ~ E_{t-n}`` for ``n`` thread objects."""
    n = len(T.objects)
    X = helix_member(T, t, window)
    for s in range(t - 1, t - n, -1):
        X = left_mutation(helix_member(T, s, window), X)
    X = shift(X, 1 - d)
    target = helix_member(T, t - n, window)
    res = iso_in_derived(X, target)
    res["t"] = t
    res["mutated"] = _mult_str(minimize(X).multiplicities())
    res["expected"] = _mult_str(minimize(target).multiplicities())
    return res
