"""Right modules over a window algebra, realized componentwise.

A module stores, for every object ``n`` of the window, the dimension of
``M_n`` and, for every generator ``g`` of degree ``d`` at ``n``, the matrix of
``x -> x.g : M_n -> M_{n+d}`` (column convention, shape ``dim M_{n+d} x dim M_n``).
Since the algebra is generated by its generators, these matrices determine
the action of every element: for a word ``g1 . g2 ... gk`` the right action
applies ``gk`` first.

Modules over a deformed (dual-number) algebra are stored k-linearly: each
free piece of rank ``r`` becomes ``k^{2r}`` (value block, then eps block)
and an extra operator ``eps`` records multiplication by eps.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

from .algebra import WindowAlgebra, default_margin
from .exact import DualScalar, kernel_basis, mat_mul, mat_vec, rank, rref, reduce_against, solve, zeros
from .status import Status


class ModuleError(ValueError):
    pass


class WindowModule:
    def __init__(self, algebra: WindowAlgebra, dims: dict, action: dict, eps: Optional[dict] = None, name: str = ""):
        self.algebra = algebra
        self.field = algebra.field
        self.dims = {n: dims.get(n, 0) for n in algebra.objects}
        self.action = action  # (label, n) -> matrix M_n -> M_{n+d}
        self.eps = eps  # n -> matrix on M_n, only over dual numbers
        self.name = name

    @property
    def lo(self):
        return self.algebra.lo

    @property
    def hi(self):
        return self.algebra.hi

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def generator_moves(self, n: int):
        """``(label, target)`` for generators acting out of ``M_n`` inside the window."""
        out = []
        for g in self.algebra.generators_at(n):
            out.append((g.label, n + g.degree))
        return out

    def _sparse_columns(self, key):
        cache = self.__dict__.setdefault("_columns", {})
        cols = cache.get(key)
        if cols is None:
            mat = self.action[key]
            ncols = len(mat[0]) if mat else 0
            cols = [[] for _ in range(ncols)]
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x != 0:
                        cols[j].append((i, x))
            cache[key] = cols
        return cols

    def act_generator(self, label: str, n: int, v: list) -> list:
        d = self.algebra.presentation.gen_degree[label]
        out = [self.field.zero] * self.dim(n + d)
        if (label, n) not in self.action or not out:
            return out
        cols = self._sparse_columns((label, n))
        for j, c in enumerate(v):
            if c == 0:
                continue
            for i, x in cols[j]:
                out[i] = out[i] + c * x
        return out

    def act_word(self, word: tuple, n: int, v: list) -> list:
        obj = n
        deg = self.algebra.presentation.gen_degree
        for label in reversed(word):
            v = self.act_generator(label, obj, v)
            obj += deg[label]
        return v

    def act(self, v: list, m: int, n: int, coords: dict) -> list:
        """``v . a`` for ``v`` in ``M_m`` and ``a`` in ``hom(n, m)`` given by k-coordinates."""
        out = [self.field.zero] * self.dim(n)
        basis = self.algebra.basis(n, m)
        for i, c in coords.items():
            if c == 0:
                continue
            if isinstance(c, DualScalar):
                raise ModuleError("use act_dual for dual-number coefficients")
            w = self.act_word(basis[i], m, v)
            out = [a + c * b for a, b in zip(out, w)]
        return out

    def orbit_span(self, n: int, v: list, m: int) -> list:
        """Rows spanning ``v . hom(n, m)``."""
        return [self.act_word(word, m, v) for word in self.algebra.basis(n, m)]

    def validate(self):
        """Relations act as zero and eps commutes with the action."""
        alg = self.algebra
        pres = alg.presentation
        rels = pres.relations
        for rel in rels:
            d = pres.relation_degree(rel)
            for s in alg.objects:
                if s + d > alg.hi or (rel.source is not None and rel.source != s):
                    continue
                for i in range(self.dim(s)):
                    e = [self.field.zero] * self.dim(s)
                    e[i] = self.field.one
                    acc = [self.field.zero] * self.dim(s + d)
                    for c, w in rel.terms:
                        c = c.a if isinstance(c, DualScalar) else c
                        if self.eps is not None:
                            continue
                        acc = [a + c * b for a, b in zip(acc, self.act_word(w, s, e))]
                    if any(x != 0 for x in acc):
                        raise ModuleError(f"relation does not act as zero at object {s}")
        return True

    def __repr__(self):
        dims = ",".join(str(self.dims[n]) for n in self.algebra.objects)
        return f"WindowModule({self.name or '?'}; dims [{dims}])"


# ---------------------------------------------------------------------------
# constructors


def _dual_block(x: DualScalar, field):
    """k-matrix of multiplication by ``a + b eps`` on ``k^2 = (value, eps)``."""
    return ((x.a, field.zero), (x.b, x.a))


@lru_cache(maxsize=None)
def representable(w: WindowAlgebra, m: int) -> WindowModule:
    """``hom(-, m)`` with ``x . a = a . x``."""
    if not w.in_window(m):
        raise ModuleError(f"object {m} outside window [{w.lo}, {w.hi}]")
    field = w.field
    dims = {}
    for n in w.objects:
        d = w.dim(n, m) if n >= m else 0
        dims[n] = 2 * d if w.dual else d
    action = {}
    for n in w.objects:
        if n < m:
            continue
        for g in w.generators_at(n):
            t = n + g.degree
            src, dst = w.dim(n, m), w.dim(t, m)
            if w.dual:
                mat = zeros(2 * dst, 2 * src, field.zero)
                for k in range(src):
                    img = w.apply_generator(g.label, n, m, {k: w.ring.one})
                    for i, x in img.items():
                        mat[i][k] = mat[i][k] + x.a
                        mat[dst + i][k] = mat[dst + i][k] + x.b
                        mat[dst + i][src + k] = mat[dst + i][src + k] + x.a
            else:
                mat = zeros(dst, src, field.zero)
                for k in range(src):
                    for i, x in w.apply_generator(g.label, n, m, {k: field.one}).items():
                        mat[i][k] = x
            action[(g.label, n)] = mat
    eps = None
    if w.dual:
        eps = {}
        for n in w.objects:
            d = dims[n] // 2
            e = zeros(2 * d, 2 * d, field.zero)
            for i in range(d):
                e[d + i][i] = field.one
            eps[n] = e
    return WindowModule(w, dims, action, eps, name=f"rep({m})")


def zero_module(w: WindowAlgebra) -> WindowModule:
    return WindowModule(w, {}, {}, {n: [] for n in w.objects} if w.dual else None, name="0")


def direct_sum(modules: list) -> WindowModule:
    w = modules[0].algebra
    field = w.field
    dims = {n: sum(M.dim(n) for M in modules) for n in w.objects}
    action = {}
    for n in w.objects:
        for label, t in modules[0].generator_moves(n):
            mat = zeros(dims[t], dims[n], field.zero)
            r0 = c0 = 0
            for M in modules:
                sub = M.action.get((label, n))
                if sub:
                    for i, row in enumerate(sub):
                        for j, x in enumerate(row):
                            mat[r0 + i][c0 + j] = x
                r0 += M.dim(t)
                c0 += M.dim(n)
            action[(label, n)] = mat
    eps = None
    if modules[0].eps is not None:
        eps = {}
        for n in w.objects:
            e = zeros(dims[n], dims[n], field.zero)
            o = 0
            for M in modules:
                for i, row in enumerate(M.eps[n]):
                    for j, x in enumerate(row):
                        e[o + i][o + j] = x
                o += M.dim(n)
            eps[n] = e
    return WindowModule(w, dims, action, eps, name="(+)".join(M.name for M in modules))


# ---------------------------------------------------------------------------
# submodules and quotients


class Submodule:
    """Subspaces ``S_n`` of ``M_n`` (rref rows) closed under the action."""

    def __init__(self, parent: WindowModule, spans: dict, close: bool = True):
        self.parent = parent
        self.algebra = parent.algebra
        comps = {}
        for n in parent.algebra.objects:
            rows = [list(r) for r in spans.get(n, []) if any(x != 0 for x in r)]
            comps[n] = _rref_rows(rows, parent.dim(n))
        self._comps = comps
        if close:
            self._close()

    def _close(self):
        """Closure under generator actions (and eps); degrees only increase."""
        M = self.parent
        for n in M.algebra.objects:
            R, piv = self._comps[n]
            if M.eps is not None and R:
                extra = [mat_vec(M.eps[n], r, M.field.zero) for r in R]
                self._comps[n] = _rref_rows(R + extra, M.dim(n))
                R, piv = self._comps[n]
            if not R:
                continue
            for label, t in M.generator_moves(n):
                imgs = [M.act_generator(label, n, r) for r in R]
                imgs = [v for v in imgs if any(x != 0 for x in v)]
                if imgs:
                    old = self._comps[t][0]
                    self._comps[t] = _rref_rows(old + imgs, M.dim(t))

    def component(self, n: int) -> list:
        if n not in self._comps:
            return []
        return [list(r) for r in self._comps[n][0]]

    def pivots(self, n: int) -> list:
        return list(self._comps[n][1]) if n in self._comps else []

    def dim(self, n: int) -> int:
        return len(self._comps[n][0]) if n in self._comps else 0

    def is_full(self, n: int) -> bool:
        return self.dim(n) == self.parent.dim(n)

    def contains(self, n: int, v: list) -> bool:
        R, piv = self._comps[n]
        return all(x == 0 for x in reduce_against(v, R, piv))

    def contains_sub(self, other: "Submodule") -> bool:
        return all(all(self.contains(n, r) for r in other.component(n)) for n in self.algebra.objects)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return (
            all(self.dim(n) == other.dim(n) for n in self.algebra.objects)
            and self.contains_sub(other)
        )

    def __hash__(self):
        return hash(tuple(self.dim(n) for n in self.algebra.objects))

    def as_module(self) -> WindowModule:
        """The submodule with its own bases (the rref rows)."""
        M = self.parent
        field = M.field
        dims = {n: self.dim(n) for n in M.algebra.objects}
        action = {}
        for n in M.algebra.objects:
            R = self.component(n)
            for label, t in M.generator_moves(n):
                mat = zeros(dims[t], dims[n], field.zero)
                for j, r in enumerate(R):
                    img = M.act_generator(label, n, r)
                    coords = _coords_in(self._comps[t], img, field)
                    for i, x in enumerate(coords):
                        mat[i][j] = x
                action[(label, n)] = mat
        eps = None
        if M.eps is not None:
            eps = {}
            for n in M.algebra.objects:
                R = self.component(n)
                e = zeros(dims[n], dims[n], field.zero)
                for j, r in enumerate(R):
                    coords = _coords_in(self._comps[n], mat_vec(M.eps[n], r, field.zero), field)
                    for i, x in enumerate(coords):
                        e[i][j] = x
                eps[n] = e
        return WindowModule(M.algebra, dims, action, eps, name=f"sub({M.name})")

    def inclusion(self) -> "ModuleMap":
        S = self.as_module()
        mats = {}
        for n in self.algebra.objects:
            R = self.component(n)
            mats[n] = [[R[j][i] for j in range(len(R))] for i in range(self.parent.dim(n))]
        return ModuleMap(S, self.parent, mats)

    def quotient(self) -> WindowModule:
        return quotient_module(self)

    def __repr__(self):
        dims = ",".join(str(self.dim(n)) for n in self.algebra.objects)
        return f"Submodule(of {self.parent.name}; dims [{dims}])"


def _rref_rows(rows, ncols):
    if not rows:
        return ([], [])
    R, rk, piv = rref(rows, ncols)
    return (R, piv)


def _coords_in(comp, v, field):
    """Coordinates of ``v`` in the rref basis ``comp`` (assumes membership)."""
    R, piv = comp
    return [v[p] for p in piv]


def quotient_module(S: Submodule) -> WindowModule:
    """``M / S`` on the non-pivot coordinates of each component."""
    M = S.parent
    field = M.field
    free = {n: [j for j in range(M.dim(n)) if j not in set(S.pivots(n))] for n in M.algebra.objects}
    dims = {n: len(free[n]) for n in M.algebra.objects}

    def lift(n, j):
        v = [field.zero] * M.dim(n)
        v[free[n][j]] = field.one
        return v

    def project(n, v):
        r = reduce_against(v, S.component(n), S.pivots(n))
        return [r[c] for c in free[n]]

    action = {}
    for n in M.algebra.objects:
        for label, t in M.generator_moves(n):
            mat = zeros(dims[t], dims[n], field.zero)
            for j in range(dims[n]):
                img = project(t, M.act_generator(label, n, lift(n, j)))
                for i, x in enumerate(img):
                    mat[i][j] = x
            action[(label, n)] = mat
    eps = None
    if M.eps is not None:
        eps = {}
        for n in M.algebra.objects:
            e = zeros(dims[n], dims[n], field.zero)
            for j in range(dims[n]):
                img = project(n, mat_vec(M.eps[n], lift(n, j), field.zero))
                for i, x in enumerate(img):
                    e[i][j] = x
            eps[n] = e
    Q = WindowModule(M.algebra, dims, action, eps, name=f"{M.name}/S")
    Q.projection = ModuleMap(M, Q, {n: _projection_matrix(M, S, free, n, project) for n in M.algebra.objects})
    return Q


def _projection_matrix(M, S, free, n, project):
    field = M.field
    cols = []
    for j in range(M.dim(n)):
        e = [field.zero] * M.dim(n)
        e[j] = field.one
        cols.append(project(n, e))
    return [[cols[j][i] for j in range(M.dim(n))] for i in range(len(free[n]))]


def full_submodule(M: WindowModule) -> Submodule:
    return degree_range_submodule(M, M.lo)


def degree_range_submodule(M: WindowModule, start: int) -> Submodule:
    """Components ``M_n`` for ``n >= start``, zero below."""
    spans = {}
    for n in M.algebra.objects:
        if n >= start:
            spans[n] = [_unit(M.field, M.dim(n), i) for i in range(M.dim(n))]
    return Submodule(M, spans, close=False)


def _unit(field, d, i):
    v = [field.zero] * d
    v[i] = field.one
    return v


def generated_submodule(M: WindowModule, elements: list) -> Submodule:
    """Smallest window-closed submodule containing ``elements`` = [(n, vector)]."""
    spans: dict = {}
    for n, v in elements:
        spans.setdefault(n, []).append(list(v))
    return Submodule(M, spans)


# ---------------------------------------------------------------------------
# operations


def truncate(M: WindowModule, m: int):
    """``(M_{>=m}, M_{<m})`` as a submodule and the quotient module."""
    ge = degree_range_submodule(M, m)
    return ge, quotient_module(ge)


def ideal(w: WindowAlgebra, kind: str, n: Optional[int] = None) -> dict:
    """``{m: submodule of hom(-, m)}`` for ``kind`` in {"tail", "plus"}."""
    out = {}
    for m in w.objects:
        R = representable(w, m)
        if kind == "tail":
            if n is None:
                raise ValueError("tail ideal needs n")
            out[m] = degree_range_submodule(R, max(n, m))
        elif kind == "plus":
            out[m] = degree_range_submodule(R, m + 1)
        else:
            raise ValueError(f"unknown ideal kind {kind!r}")
    return out


def submodule_product(M: WindowModule, X: list, I: dict) -> Submodule:
    """``X I`` = span of ``x . a`` with ``x`` in ``X`` (at object m) and ``a`` in ``I(-, m)``."""
    w = M.algebra
    spans: dict = {}
    for m, x in X:
        Im = I.get(m)
        if Im is None:
            continue
        for n in w.objects:
            if n < m:
                continue
            for a in Im.component(n):
                coords = {i: c for i, c in enumerate(a) if c != 0}
                spans.setdefault(n, []).append(M.act(list(x), m, n, coords))
    return Submodule(M, spans)


def _generator_closure_span(M: WindowModule, chosen: dict, n: int) -> list:
    """Rows spanning the part of ``M_n`` reached by actions on lower components."""
    rows = []
    for s in M.algebra.objects:
        if s >= n:
            break
        for label, t in M.generator_moves(s):
            if t != n:
                continue
            for r in chosen.get(s, []):
                rows.append(M.act_generator(label, s, r))
    return rows


def minimal_generators(M: WindowModule) -> dict:
    """Per-degree generators ``{n: [vectors]}`` (new ones only).

    In each degree the new generators are the standard vectors completing
    the span of everything reached from lower degrees (plus ``eps M_n`` over
    dual numbers, by Nakayama) to all of ``M_n``.
    """
    field = M.field
    new: dict = {}
    full: dict = {}
    for n in M.algebra.objects:
        d = M.dim(n)
        if d == 0:
            continue
        rows = [r for r in _generator_closure_span(M, full, n) if any(x != 0 for x in r)]
        if M.eps is not None:
            rows = rows + [mat_vec(M.eps[n], _unit(field, d, j), field.zero) for j in range(d)]
        R, piv = _rref_rows(rows, d)
        piv_set = set(piv)
        chosen = [_unit(field, d, j) for j in range(d) if j not in piv_set]
        if chosen:
            new[n] = chosen
        full[n] = [_unit(field, d, j) for j in range(d)]
    return new


def is_right_bounded(M: WindowModule, margin: Optional[int] = None) -> dict:
    if margin is None:
        margin = _margin(M.algebra)
    top = [n for n in M.algebra.objects if n > M.hi - margin]
    if all(M.dim(n) == 0 for n in top):
        last = max((n for n in M.algebra.objects if M.dim(n)), default=None)
        return {"status": Status.TRUE, "last_nonzero": last, "margin": margin}
    reason = "nonzero at the window top" if M.dim(M.hi) else "nonzero inside the top margin"
    return {"status": Status.INCONCLUSIVE, "reason": reason, "margin": margin}


def _margin(w: WindowAlgebra) -> int:
    return max(w.presentation.max_generator_degree, default_margin(w))


def _band_certificate(w: WindowAlgebra, m: int, ok) -> Optional[int]:
    """Least ``n0 >= m`` with ``ok(j)`` on ``D`` consecutive window degrees from ``n0``.

    Degree-wise conditions that are stable under the action propagate
    from any band of ``D`` consecutive degrees (``D`` = largest generator
    degree): every path longer than the band passes through it.
    """
    D = w.presentation.max_generator_degree
    for n0 in range(m, w.hi - D + 2):
        if all(ok(j) for j in range(n0, n0 + D)):
            return n0
    return None


def element_torsion_index(M: WindowModule, m: int, v: list) -> Optional[int]:
    w = M.algebra
    return _band_certificate(w, m, lambda j: rank(M.orbit_span(j, v, m), M.dim(j)) == 0 if M.dim(j) else True)


def is_torsion(M: WindowModule) -> dict:
    """Per basis element ``x`` of ``M_m`` the least ``n0`` with ``x . hom(n, m) = 0`` for ``n >= n0``."""
    table = {}
    status = Status.TRUE
    witness = None
    for m in M.algebra.objects:
        for i in range(M.dim(m)):
            v = _unit(M.field, M.dim(m), i)
            n0 = element_torsion_index(M, m, v)
            table[(m, i)] = n0
            if n0 is None:
                alive_top = rank(M.orbit_span(M.hi, v, m), M.dim(M.hi)) > 0 if M.dim(M.hi) else False
                if alive_top:
                    status = Status.FALSE
                    witness = witness or (m, i)
                elif status is Status.TRUE:
                    status = Status.INCONCLUSIVE
    out = {"status": status, "n0": table}
    if witness:
        out["witness"] = witness
        out["reason"] = "element acts nontrivially up to the window top"
    return out


def is_finitely_generated_module(M: WindowModule, margin: Optional[int] = None) -> dict:
    if margin is None:
        margin = _margin(M.algebra)
    gens = minimal_generators(M)
    top = [n for n in M.algebra.objects if n > M.hi - margin]
    in_margin = [n for n in top if n in gens]
    count = sum(len(v) for v in gens.values())
    if not in_margin:
        status = Status.TRUE
    elif len(in_margin) == len(top) and len(top) > 0 and min(gens) < min(top):
        status = Status.FALSE
    else:
        status = Status.INCONCLUSIVE
    out = {"status": status, "generators": gens, "count": count, "by_object": {n: len(v) for n, v in gens.items()}}
    if in_margin:
        out["reason"] = f"new generators still appear in the top margin at objects {in_margin}"
    return out


# ---------------------------------------------------------------------------
# module maps


class ModuleMap:
    """Degreewise matrices ``f_n: M_n -> N_n`` (shape ``dim N_n x dim M_n``)."""

    def __init__(self, source: WindowModule, target: WindowModule, mats: dict, validate: bool = True):
        self.source = source
        self.target = target
        self.algebra = source.algebra
        self.mats = {}
        f = source.field
        for n in source.algebra.objects:
            m = mats.get(n)
            if m is None or (not m and target.dim(n)):
                m = zeros(target.dim(n), source.dim(n), f.zero)
            self.mats[n] = m
        if validate:
            self.validate()

    def apply(self, n: int, v: list) -> list:
        if not self.target.dim(n):
            return []
        return mat_vec(self.mats[n], v, self.source.field.zero)

    def validate(self):
        M, N = self.source, self.target
        for n in M.algebra.objects:
            for label, t in M.generator_moves(n):
                for j in range(M.dim(n)):
                    e = _unit(M.field, M.dim(n), j)
                    lhs = self.apply(t, M.act_generator(label, n, e))
                    rhs = N.act_generator(label, n, self.apply(n, e))
                    if any(a != b for a, b in zip(lhs, rhs)):
                        raise ModuleError(f"map does not commute with {label} at object {n}")
        return True

    def image(self) -> Submodule:
        spans = {}
        for n in self.algebra.objects:
            cols = [self.apply(n, _unit(self.source.field, self.source.dim(n), j)) for j in range(self.source.dim(n))]
            spans[n] = cols
        return Submodule(self.target, spans, close=False)

    def kernel(self) -> Submodule:
        spans = {}
        for n in self.algebra.objects:
            if self.source.dim(n) == 0:
                continue
            if self.target.dim(n) == 0:
                spans[n] = [_unit(self.source.field, self.source.dim(n), j) for j in range(self.source.dim(n))]
            else:
                spans[n] = kernel_basis(self.mats[n], self.source.dim(n), self.source.field)
        return Submodule(self.source, spans, close=False)

    def is_surjective(self, n: int) -> bool:
        if self.target.dim(n) == 0:
            return True
        return rank(self.mats[n], self.source.dim(n)) == self.target.dim(n)


def identity_map(M: WindowModule) -> ModuleMap:
    mats = {}
    for n in M.algebra.objects:
        mats[n] = [_unit(M.field, M.dim(n), i) for i in range(M.dim(n))]
    return ModuleMap(M, M, mats)


def representable_map(w: WindowAlgebra, src: int, dst: int, coords: dict) -> ModuleMap:
    """``hom(-, src) -> hom(-, dst)``, ``f -> f . a`` for ``a`` in ``hom(src, dst)``."""
    P, Q = representable(w, src), representable(w, dst)
    mats = {}
    for n in w.objects:
        if n < src:
            continue
        mat = zeros(Q.dim(n), P.dim(n), w.field.zero)
        for j in range(w.dim(n, src)):
            img = w.compose(n, src, dst, {j: w.field.one}, coords)
            for i, x in img.items():
                mat[i][j] = x
        mats[n] = mat
    return ModuleMap(P, Q, mats)


def sum_map(maps: list, target: WindowModule) -> ModuleMap:
    """``(+) source_i -> target`` from maps with a common target."""
    S = direct_sum([f.source for f in maps])
    mats = {}
    for n in target.algebra.objects:
        rows = [[] for _ in range(target.dim(n))]
        for f in maps:
            for i in range(target.dim(n)):
                rows[i].extend(f.mats[n][i] if f.mats[n] else [])
        mats[n] = rows
    return ModuleMap(S, target, mats)
