"""Hochschild cochains of a finite connected graded linear category.

The category is anything with ``objects``, ``dim(n, m)`` and
``compose(n, m, l, a, b)`` (``a`` in ``hom(n, m)``, ``b`` in ``hom(m, l)``,
result in ``hom(n, l)``), over a field, with one-dimensional endomorphism
spaces.  Cochains are normalized and reduced relative to the semisimple
subalgebra spanned by the identities, so a ``p``-cochain is supported on
chains of objects ``o_0 > o_1 > ... > o_p`` and assigns to each tuple of
basis elements ``(a_1, ..., a_p)`` with ``a_i`` in ``hom(o_{i-1}, o_i)`` a
value in ``hom(o_0, o_p)``.  The product written ``a . b`` below is
``compose(n, m, l, a, b)``.
"""

from __future__ import annotations

import itertools

from .exact import SparseEchelon, sparse_solve


class HochschildError(ValueError):
    pass


class HochschildComplex:
    def __init__(self, cat):
        self.cat = cat
        self.field = cat.field
        if getattr(cat, "dual", False):
            raise HochschildError("Hochschild cochains are computed over a field; reduce first")
        self.objects = sorted(cat.objects, reverse=True)
        for o in self.objects:
            if cat.dim(o, o) != 1:
                raise HochschildError(f"object {o} is not connected")
        self._index = {}
        self._pos = {}
        self._mats = {}
        self._rows = {}
        self._ech = {}

    # -- indexing --------------------------------------------------------------

    def chains(self, p: int) -> list:
        return [c for c in itertools.combinations(self.objects, p + 1)]

    def index(self, p: int) -> list:
        """Basis of ``C^p``: ``(chain, inputs, k)``."""
        if p not in self._index:
            cat = self.cat
            idx = []
            for ch in self.chains(p):
                ranges = [range(cat.dim(ch[i], ch[i + 1])) for i in range(p)]
                out = cat.dim(ch[0], ch[-1])
                for ins in itertools.product(*ranges):
                    for k in range(out):
                        idx.append((ch, ins, k))
            self._index[p] = idx
            self._pos[p] = {e: j for j, e in enumerate(idx)}
        return self._index[p]

    def pos(self, p: int) -> dict:
        self.index(p)
        return self._pos[p]

    def dim(self, p: int) -> int:
        return len(self.index(p))

    # -- differential ---------------------------------------------------------

    def row_entries(self, p: int, row: tuple) -> dict:
        """Column -> coefficient of one row ``(chain, inputs, k)`` of ``d: C^p -> C^{p+1}``."""
        cat, one = self.cat, self.field.one
        cols = self.pos(p)
        ch, ins, k = row
        n = p + 1
        out: dict = {}

        def add(c, x):
            if c is not None and x:
                out[c] = out.get(c, 0) + x

        # a_1 . f(a_2, ..., a_{p+1})
        sub = ch[1:]
        for kk in range(cat.dim(sub[0], sub[-1])):
            c = cols.get((sub, ins[1:], kk))
            if c is not None:
                add(c, cat.compose(ch[0], ch[1], ch[-1], {ins[0]: one}, {kk: one}).get(k))
        # inner faces
        for i in range(1, n):
            sign = one if i % 2 == 0 else -one
            prod = cat.compose(ch[i - 1], ch[i], ch[i + 1], {ins[i - 1]: one}, {ins[i]: one})
            sub = ch[:i] + ch[i + 1:]
            for j, x in prod.items():
                add(cols.get((sub, ins[:i - 1] + (j,) + ins[i + 1:], k)), sign * x)
        # (-1)^{p+1} f(a_1, ..., a_p) . a_{p+1}
        sign = one if n % 2 == 0 else -one
        sub = ch[:-1]
        for kk in range(cat.dim(sub[0], sub[-1])):
            c = cols.get((sub, ins[:-1], kk))
            if c is not None:
                val = cat.compose(ch[0], ch[-2], ch[-1], {kk: one}, {ins[-1]: one}).get(k)
                if val:
                    add(c, sign * val)
        return {c: x for c, x in out.items() if x != 0}

    def sparse_rows(self, p: int) -> list:
        """Rows of ``d: C^p -> C^{p+1}`` as ``{column: coefficient}``."""
        if p not in self._rows:
            self._rows[p] = [self.row_entries(p, row) for row in self.index(p + 1)]
        return self._rows[p]

    def differential(self, p: int) -> list:
        """Dense matrix of ``d: C^p -> C^{p+1}`` (small cases only)."""
        if p in self._mats:
            return self._mats[p]
        F = self.field
        ncols = self.dim(p)
        M = []
        for entries in self.sparse_rows(p):
            r = [F.zero] * ncols
            for c, x in entries.items():
                r[c] = x
            M.append(r)
        self._mats[p] = M
        return M

    def _echelon(self, p: int) -> SparseEchelon:
        if p not in self._ech:
            E = SparseEchelon(self.field)
            for row in self.sparse_rows(p):
                E.add(row)
            self._ech[p] = E
        return self._ech[p]

    def rank_d(self, p: int) -> int:
        if p < 0 or self.dim(p) == 0 or self.dim(p + 1) == 0:
            return 0
        return self._echelon(p).rank

    def cohomology_dims(self, max_degree: int) -> dict:
        out = {}
        for p in range(max_degree + 1):
            out[p] = self.dim(p) - self.rank_d(p) - self.rank_d(p - 1)
        return out

    # -- cochains -------------------------------------------------------------

    def apply_d(self, p: int, vec: list) -> list:
        """``d vec`` from the sparse rows."""
        zero = self.field.zero
        out = []
        for entries in self.sparse_rows(p):
            acc = zero
            for c, x in entries.items():
                if vec[c] != 0:
                    acc += x * vec[c]
            out.append(acc)
        return out

    def is_cocycle(self, p: int, vec: list) -> bool:
        if self.dim(p + 1) == 0:
            return True
        return all(x == 0 for x in self.apply_d(p, vec))

    def solve_coboundary(self, p: int, vec: list):
        """Some ``gamma`` in ``C^{p-1}`` with ``d gamma = vec``, or ``None``."""
        if self.dim(p - 1) == 0:
            return [] if all(x == 0 for x in vec) else None
        return sparse_solve(self.sparse_rows(p - 1), vec, self.dim(p - 1), self.field)

    def coboundary_echelon(self, p: int) -> SparseEchelon:
        """Echelon basis of ``B^p``, spanned by the columns of ``d: C^{p-1} -> C^p``."""
        E = SparseEchelon(self.field)
        if p < 1 or self.dim(p - 1) == 0:
            return E
        cols: dict = {}
        for i, entries in enumerate(self.sparse_rows(p - 1)):
            for j, x in entries.items():
                cols.setdefault(j, {})[i] = x
        for j in sorted(cols):
            E.add(cols[j])
        return E

    def sparse_cocycles(self, p: int) -> list:
        n = self.dim(p)
        if self.dim(p + 1) == 0:
            return [{j: self.field.one} for j in range(n)]
        return self._echelon(p).kernel(n)

    def cocycles(self, p: int) -> list:
        return [self._dense(p, z) for z in self.sparse_cocycles(p)]

    def cohomology_representatives(self, p: int) -> list:
        """Cocycles whose classes form a basis of ``H^p``."""
        E = self.coboundary_echelon(p)
        return [self._dense(p, z) for z in self.sparse_cocycles(p) if E.add(z)]

    def _dense(self, p: int, v: dict) -> list:
        out = [self.field.zero] * self.dim(p)
        for j, x in v.items():
            out[j] = x
        return out

    def cochain_from_function(self, p: int, fn) -> list:
        """Vector of the cochain ``(chain, inputs) -> {k: value}`` given by ``fn``."""
        vec = [self.field.zero] * self.dim(p)
        pos = self.pos(p)
        seen = set()
        for ch, ins, k in self.index(p):
            if (ch, ins) in seen:
                continue
            seen.add((ch, ins))
            for kk, x in fn(ch, ins).items():
                if x != 0:
                    vec[pos[(ch, ins, kk)]] = x
        return vec

    def value(self, p: int, vec: list, ch: tuple, ins: tuple) -> dict:
        pos = self.pos(p)
        out = {}
        for k in range(self.cat.dim(ch[0], ch[-1])):
            x = vec[pos[(ch, ins, k)]]
            if x != 0:
                out[k] = x
        return out

    def restrict(self, p: int, vec: list, sub: "HochschildComplex") -> list:
        """Restriction of a cochain to a full subcategory (same bases)."""
        pos = self.pos(p)
        return [vec[pos[e]] for e in sub.index(p)]

    def restrict_sparse(self, p: int, vec: dict, sub: "HochschildComplex") -> dict:
        idx, spos = self.index(p), sub.pos(p)
        out = {}
        for j, x in vec.items():
            k = spos.get(idx[j])
            if k is not None:
                out[k] = x
        return out


def hochschild_dims(cat, max_degree: int = 2) -> dict:
    """``{p: dim H^p}`` for ``p <= max_degree``; window algebras use their interior."""
    from .algebra import WindowAlgebra

    if isinstance(cat, WindowAlgebra):
        cat = interior(cat)
        if len(cat.objects) < max_degree + 1:
            raise HochschildError(f"interior {cat.objects} is too small for degree {max_degree}")
    return HochschildComplex(cat).cohomology_dims(max_degree)


def interior(w):
    """The interior thread ``[lo+D, hi-D]`` of a window algebra, ``D`` the top generator degree."""
    from .thread import ThreadAlgebra

    D = w.presentation.max_generator_degree
    a, b = w.lo + D, w.hi - D
    if b < a:
        raise HochschildError(f"window [{w.lo}, {w.hi}] has no interior")
    return ThreadAlgebra(w, b, b - a)


def restriction_rank(big: HochschildComplex, small: HochschildComplex, p: int = 2) -> dict:
    """Rank of ``H^p(big) -> H^p(small)`` induced by restriction of cochains.

    Restriction is a cochain map, so coboundaries land in coboundaries and
    the rank is ``rank[B^p(small) ; Z^p(big)|small] - rank B^p(small)``.
    """
    E = small.coboundary_echelon(p)
    b = E.rank
    for z in big.sparse_cocycles(p):
        E.add(big.restrict_sparse(p, z, small))
    return {"source_dim": big.cohomology_dims(p)[p], "target_dim": small.cohomology_dims(p)[p],
            "rank": E.rank - b}
