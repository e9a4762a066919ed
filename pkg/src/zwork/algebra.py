"""Presented, positively graded Z-algebras realized exactly on a finite window.

Conventions
-----------
``hom(n, m)`` is the space of morphisms from object ``m`` to object ``n``
(``n >= m``); its degree is ``n - m``.  A generator scheme of degree ``d``
places one generator ``g_m`` in ``hom(m + d, m)`` at every object ``m`` (or
only at the listed objects).  Words are written in composition order: the
word ``("x", "y")`` is ``x . y``, with ``y`` applied first.

Every hom-space is computed as the span of generator paths modulo the
relations composed with all window paths.  ``F(n, m)`` -- pairs of a
generator ``g`` ending at ``n`` and a basis path of ``hom(n - deg g, m)`` --
surjects onto ``hom(n, m)`` and the kernel is spanned by ``r . p`` for the
relations ``r`` ending at ``n``; relations with a nonempty path on their
left already vanish in the smaller pieces.  Normal forms are the non-pivot
columns of the kernel in length-then-lex order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

from .exact import QQ, DualRing, DualScalar, Field, free_rank_dual, rref
from .status import Status

Word = tuple  # tuple[str, ...] in composition order


class PresentationError(ValueError):
    """Invalid presentation: bad degree, inhomogeneous relation, window escape."""

    def __init__(self, message: str, obj: Optional[int] = None):
        super().__init__(message if obj is None else f"{message} (object {obj})")
        self.obj = obj


@dataclass(frozen=True)
class GeneratorScheme:
    label: str
    degree: int
    objects: Optional[frozenset] = None  # None: present at every object

    def present_at(self, m: int) -> bool:
        return self.objects is None or m in self.objects


@dataclass(frozen=True)
class RelationScheme:
    """Formal sum ``sum coeff * word``; ``source=None`` means periodic."""

    terms: tuple  # tuple[(coeff, Word), ...]
    source: Optional[int] = None


@dataclass(frozen=True)
class GradedPresentation:
    name: str
    generators: tuple
    relations: tuple
    field: Field = QQ
    degree_horizon: Optional[int] = None
    deformed_relations: Optional[tuple] = None

    def __post_init__(self):
        labels = [g.label for g in self.generators]
        if len(set(labels)) != len(labels):
            raise PresentationError("generator labels must be unique")
        for g in self.generators:
            if g.degree < 1:
                raise PresentationError(
                    f"generator {g.label!r} has degree {g.degree}; only positively graded algebras are supported"
                )
        for rel in self.relations:
            self._check_relation(rel)
        if self.deformed_relations is not None:
            if len(self.deformed_relations) != len(self.relations):
                raise PresentationError("deformed relations must correspond one-to-one to the base relations")
            for base, rel in zip(self.relations, self.deformed_relations):
                self._check_relation(rel)
                if rel.source != base.source:
                    raise PresentationError("deformed relation changes the source object")
                if _reduce_terms(rel.terms) != _reduce_terms(base.terms):
                    raise PresentationError("deformed relation does not reduce to its base relation mod eps")

    @property
    def gen_degree(self) -> dict:
        return {g.label: g.degree for g in self.generators}

    @property
    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.generators), default=1)

    def word_degree(self, word: Word) -> int:
        deg = self.gen_degree
        try:
            return sum(deg[x] for x in word)
        except KeyError as exc:
            raise PresentationError(f"unknown generator {exc.args[0]!r} in relation") from None

    def _check_relation(self, rel: RelationScheme):
        if not rel.terms:
            raise PresentationError("empty relation")
        degrees = {self.word_degree(w) for _, w in rel.terms}
        if len(degrees) != 1:
            raise PresentationError(f"relation is not homogeneous: word degrees {sorted(degrees)}", rel.source)
        if min(degrees) < 1:
            raise PresentationError("relation of degree zero", rel.source)

    def relation_degree(self, rel: RelationScheme) -> int:
        return self.word_degree(rel.terms[0][1])


def _reduce_terms(terms):
    out = {}
    for c, w in terms:
        a = c.a if isinstance(c, DualScalar) else c
        out[w] = out.get(w, 0) + a
    return {w: c for w, c in out.items() if c != 0}


def word_path(word: Word, source: int, degrees: dict) -> list:
    """Objects visited by ``word`` starting at ``source`` (first applied = last letter)."""
    objs = [source]
    for label in reversed(word):
        objs.append(objs[-1] + degrees[label])
    return objs


def _word_key(word: Word, order: dict):
    return (len(word), tuple(order[x] for x in word))


class _Piece:
    """Normal-form data of one hom-space ``hom(n, m)``."""

    __slots__ = ("basis", "index", "columns", "reduction", "flat_rank")

    def __init__(self):
        self.basis: list = []
        self.index: dict = {}
        self.columns: list = []  # F-columns: (label, index into hom(n - d, m))
        self.reduction: dict = {}  # F-column -> {basis index: coeff}
        self.flat_rank = None


class WindowAlgebra:
    """Exact hom-spaces and composition of a presented Z-algebra on ``[lo, hi]``.

    Instances are immutable; products are computed lazily and cached.
    ``ring`` is the field, or the dual numbers for deformed realizations.
    """

    def __init__(self, presentation: GradedPresentation, lo: int, hi: int, *, dual: bool = False):
        if hi < lo:
            raise ValueError(f"empty window [{lo}, {hi}]")
        self.presentation = presentation
        self.field = presentation.field
        self.dual = dual
        self.ring = DualRing(self.field) if dual else self.field
        self.lo = lo
        self.hi = hi
        self.name = presentation.name
        self.degree_horizon = presentation.degree_horizon
        self._deg = presentation.gen_degree
        self._order = {g.label: i for i, g in enumerate(presentation.generators)}
        self._pieces: dict = {}
        self.flatness_failure: Optional[tuple] = None
        self._realize()

    # -- construction -------------------------------------------------------

    @property
    def objects(self) -> range:
        return range(self.lo, self.hi + 1)

    def _relation_instances(self, n: int, m: int):
        """Relations ending at ``n`` whose source ``s`` satisfies ``m <= s``."""
        pres = self.presentation
        rels = pres.deformed_relations if (self.dual and pres.deformed_relations is not None) else pres.relations
        for rel in rels:
            d = pres.relation_degree(rel)
            s = n - d
            if s < m:
                continue
            if rel.source is not None and rel.source != s:
                continue
            yield rel, s

    def _check_explicit_relations(self):
        pres = self.presentation
        for rel in pres.relations:
            if rel.source is None:
                continue
            d = pres.relation_degree(rel)
            if not (self.lo <= rel.source and rel.source + d <= self.hi):
                raise PresentationError("relation leaves the window", rel.source)

    def _check_word_at(self, word: Word, s: int):
        for label, obj in zip(reversed(word), word_path(word, s, self._deg)):
            gen = self.presentation.generators[self._order[label]]
            if not gen.present_at(obj):
                raise PresentationError(f"generator {label!r} does not exist at this object", obj)

    def _realize(self):
        self._check_explicit_relations()
        one = self.ring.one
        for m in self.objects:
            piece = _Piece()
            piece.basis = [()]
            piece.index = {(): 0}
            piece.flat_rank = 1
            self._pieces[(m, m)] = piece
        for degree in range(1, self.hi - self.lo + 1):
            for m in range(self.lo, self.hi - degree + 1):
                n = m + degree
                if self.flatness_failure is not None:
                    return
                self._realize_piece(n, m, one)

    def _realize_piece(self, n: int, m: int, one):
        pres = self.presentation
        piece = _Piece()
        columns = []
        for g in pres.generators:
            src = n - g.degree
            if src < m or not g.present_at(src):
                continue
            lower = self._pieces[(src, m)]
            for k in range(len(lower.basis)):
                columns.append((g.label, k))

        def col_word(col):
            label, k = col
            return (label,) + self._pieces[(n - self._deg[label], m)].basis[k]

        columns.sort(key=lambda c: _word_key(col_word(c), self._order), reverse=True)
        col_pos = {c: i for i, c in enumerate(columns)}
        ncols = len(columns)

        # kernel spanning vectors r . p, as dicts over F-columns
        kernel = []
        for rel, s in self._relation_instances(n, m):
            for _, w in rel.terms:
                self._check_word_at(w, s)
            for p in range(len(self._pieces[(s, m)].basis)):
                vec = {}
                for coeff, w in rel.terms:
                    c = coeff if self.dual or not isinstance(coeff, DualScalar) else coeff.a
                    if c == 0:
                        continue
                    head, tail = w[0], w[1:]
                    inner = {p: one}
                    obj = s
                    for label in reversed(tail):
                        inner = self._apply_generator(label, obj, m, inner)
                        obj += self._deg[label]
                    for k, val in inner.items():
                        col = col_pos[(head, k)]
                        vec[col] = vec.get(col, 0) + c * val
                kernel.append(vec)

        zero = self.field.zero
        if self.dual:
            rows = []
            for vec in kernel:
                a = [zero] * ncols
                b = [zero] * ncols
                for j, x in vec.items():
                    x = x if isinstance(x, DualScalar) else DualScalar(x, 0)
                    a[j] = self.field(x.a)
                    b[j] = self.field(x.b)
                rows.append(a + b)
                rows.append([zero] * ncols + a)
            R, rk, pivots = rref(rows, 2 * ncols) if rows else ([], 0, [])
            piv_a = {p for p in pivots if p < ncols}
            piv_b = {p - ncols for p in pivots if p >= ncols}
            dual_vectors = []
            for vec in kernel:
                v = [DualScalar(zero, zero)] * ncols
                for j, x in vec.items():
                    v[j] = x if isinstance(x, DualScalar) else DualScalar(x, zero)
                dual_vectors.append(v)
            piece.flat_rank = free_rank_dual(ncols, dual_vectors, self.field)
            if piv_a != piv_b or piece.flat_rank is None:
                self.flatness_failure = (n, m)
                piece.flat_rank = None
            standard = [j for j in range(ncols) if j not in piv_a]
        else:
            rows = []
            for vec in kernel:
                row = [zero] * ncols
                for j, x in vec.items():
                    row[j] = self.field(x)
                rows.append(row)
            R, rk, pivots = rref(rows, ncols) if rows else ([], 0, [])
            piv_a = set(pivots)
            standard = [j for j in range(ncols) if j not in piv_a]
            piece.flat_rank = len(standard)

        standard.sort(key=lambda j: _word_key(col_word(columns[j]), self._order))
        std_index = {j: i for i, j in enumerate(standard)}
        piece.basis = [col_word(columns[j]) for j in standard]
        piece.index = {w: i for i, w in enumerate(piece.basis)}
        piece.columns = columns
        for j in standard:
            piece.reduction[columns[j]] = {std_index[j]: self.ring.one}
        for row, pc in zip(R, pivots):
            if pc >= ncols:
                continue
            red = {}
            for j in standard:
                a = row[j]
                if self.dual:
                    b = row[ncols + j]
                    if a != 0 or b != 0:
                        red[std_index[j]] = DualScalar(-a, -b)
                elif a != 0:
                    red[std_index[j]] = -a
            piece.reduction[columns[pc]] = red
        self._pieces[(n, m)] = piece

    # -- basic access ---------------------------------------------------------

    def in_window(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def dim(self, n: int, m: int) -> int:
        if n < m:
            return 0
        piece = self._pieces.get((n, m))
        if piece is None:
            raise KeyError(f"hom({n}, {m}) is outside the window [{self.lo}, {self.hi}]")
        return len(piece.basis)

    def basis(self, n: int, m: int) -> list:
        if n < m:
            return []
        return list(self._pieces[(n, m)].basis)

    def word_index(self, n: int, m: int, word: Word) -> int:
        return self._pieces[(n, m)].index[word]

    def generators_at(self, m: int):
        """Generator schemes with source ``m`` whose target stays in the window."""
        return [g for g in self.presentation.generators if g.present_at(m) and m + g.degree <= self.hi]

    def generator_element(self, label: str, m: int) -> dict:
        """Coordinates of ``g_m`` in ``hom(m + d, m)``."""
        d = self._deg[label]
        return dict(self._pieces[(m + d, m)].reduction[(label, 0)])

    def unit(self, m: int) -> dict:
        return {0: self.ring.one}

    def _apply_generator(self, label: str, src: int, m: int, vec: dict) -> dict:
        """``g . v`` for ``v`` in ``hom(src, m)`` and the generator ``g`` at ``src``."""
        n = src + self._deg[label]
        red = self._pieces[(n, m)].reduction
        out: dict = {}
        for k, c in vec.items():
            if c == 0:
                continue
            for idx, val in red[(label, k)].items():
                out[idx] = out.get(idx, 0) + c * val
        return {i: v for i, v in out.items() if v != 0}

    def apply_generator(self, label: str, src: int, m: int, vec: dict) -> dict:
        return self._apply_generator(label, src, m, vec)

    @lru_cache(maxsize=None)
    def compose_basis(self, n: int, m: int, l: int, i: int, j: int) -> tuple:
        """Basis ``a_i`` of ``hom(n, m)`` after basis ``b_j`` of ``hom(m, l)``."""
        word = self._pieces[(n, m)].basis[i]
        vec = {j: self.ring.one}
        obj = m
        for label in reversed(word):
            vec = self._apply_generator(label, obj, l, vec)
            obj += self._deg[label]
        return tuple(sorted(vec.items()))

    def compose(self, n: int, m: int, l: int, a: dict, b: dict) -> dict:
        """``a . b`` with ``a`` in ``hom(n, m)`` and ``b`` in ``hom(m, l)`` (sparse dicts)."""
        if not (l <= m <= n):
            return {}
        out: dict = {}
        for i, x in a.items():
            if x == 0:
                continue
            for j, y in b.items():
                if y == 0:
                    continue
                xy = x * y
                for k, z in self.compose_basis(n, m, l, i, j):
                    out[k] = out.get(k, 0) + xy * z
        return {k: v for k, v in out.items() if v != 0}

    def composition_table(self, n: int, m: int, l: int):
        """Dense structure constants ``T[i][j][k]`` of ``hom(n,m) x hom(m,l) -> hom(n,l)``."""
        dn = self.dim(n, l)
        zero = self.ring.zero
        table = []
        for i in range(self.dim(n, m)):
            row = []
            for j in range(self.dim(m, l)):
                v = [zero] * dn
                for k, z in self.compose_basis(n, m, l, i, j):
                    v[k] = z
                row.append(v)
            table.append(row)
        return table

    def element(self, n: int, m: int, coords) -> "Element":
        return Element(self, n, m, _to_dict(coords))

    def basis_element(self, n: int, m: int, i: int) -> "Element":
        return Element(self, n, m, {i: self.ring.one})

    def word_element(self, n: int, m: int, word: Word) -> "Element":
        """Evaluate an arbitrary generator word from ``m`` to ``n``."""
        vec = {0: self.ring.one}
        obj = m
        for label in reversed(word):
            vec = self._apply_generator(label, obj, m, vec)
            obj += self._deg[label]
        if obj != n:
            raise ValueError(f"word {word!r} from {m} ends at {obj}, not {n}")
        return Element(self, n, m, vec)

    def reduce(self) -> "WindowAlgebra":
        """The eps = 0 reduction of a deformed realization."""
        if not self.dual:
            return self
        return realize_window(self.presentation, self.lo, self.hi)

    def flatness_report(self) -> dict:
        pieces = {}
        for (n, m), piece in sorted(self._pieces.items()):
            pieces[f"{n},{m}"] = piece.flat_rank
        return {"flat": self.flatness_failure is None, "failing_pair": self.flatness_failure, "free_ranks": pieces}

    def __repr__(self):
        return f"WindowAlgebra({self.name!r}, [{self.lo}, {self.hi}], ring={self.ring!r})"


def _to_dict(coords) -> dict:
    if isinstance(coords, dict):
        return {k: v for k, v in coords.items() if v != 0}
    return {i: v for i, v in enumerate(coords) if v != 0}


@dataclass(frozen=True)
class Element:
    """An element of ``hom(target, source)`` given by sparse basis coordinates."""

    algebra: WindowAlgebra
    target: int
    source: int
    coords: dict = field(hash=False)

    @property
    def degree(self) -> int:
        return self.target - self.source

    def dense(self) -> list:
        d = self.algebra.dim(self.target, self.source)
        v = [self.algebra.ring.zero] * d
        for i, x in self.coords.items():
            v[i] = x
        return v

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coords.values())

    def __add__(self, other: "Element") -> "Element":
        if (self.target, self.source) != (other.target, other.source):
            raise ValueError("adding elements of different hom-spaces")
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return Element(self.algebra, self.target, self.source, _to_dict(out))

    def __neg__(self) -> "Element":
        return Element(self.algebra, self.target, self.source, {k: -v for k, v in self.coords.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        return Element(self.algebra, self.target, self.source, _to_dict({k: c * v for k, v in self.coords.items()}))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return (self.target, self.source) == (other.target, other.source) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.target, self.source))


def compose(a: Element, b: Element) -> Element:
    """``a . b``: ``b`` first, then ``a``.  Degrees add."""
    if a.source != b.target:
        raise ValueError(f"cannot compose: source of a is {a.source}, target of b is {b.target}")
    alg = a.algebra
    return Element(alg, a.target, b.source, alg.compose(a.target, a.source, b.source, a.coords, b.coords))


def realize_window(presentation: GradedPresentation, lo: int, hi: int) -> WindowAlgebra:
    return WindowAlgebra(presentation, lo, hi)


# ---------------------------------------------------------------------------
# predicates


def grading_report(w: WindowAlgebra) -> dict:
    positively = all(g.degree >= 1 for g in w.presentation.generators)
    connected = all(w.dim(m, m) == 1 for m in w.objects)
    if hasattr(w, "endomorphism_dims"):
        connected = all(d == 1 for d in w.endomorphism_dims())
    return {
        "positively_graded": positively,
        "connected": connected,
        "locally_finite": True,
        "note": "locally finite is automatic over a field at window scale",
    }


def default_margin(w) -> int:
    return max(1, (w.hi - w.lo) // 4)


def indecomposable_counts(w: WindowAlgebra, m: int) -> dict:
    """New generators of ``hom(-, m)_{>= m+1}`` needed in each target degree."""
    counts = {}
    for j in range(m + 1, w.hi + 1):
        spans = []
        for g in w.presentation.generators:
            src = j - g.degree
            if src < m + 1 or not g.present_at(src):
                continue
            for k in range(w.dim(src, m)):
                spans.append(w.apply_generator(g.label, src, m, {k: w.ring.one}))
        d = w.dim(j, m)
        if spans:
            zero = w.field.zero
            rows = []
            for v in spans:
                row = [zero] * d
                for i, x in v.items():
                    row[i] = x
                rows.append(row)
            rk = rref(rows, d)[1]
        else:
            rk = 0
        counts[j] = d - rk
    return counts


def is_finitely_generated_window(w: WindowAlgebra, margin: Optional[int] = None) -> dict:
    """Window check that ``hom(-, m)_{>= m+1}`` is finitely generated for every ``m``.

    Per object, generators are chosen greedily degree by degree (the degree
    induction that reduces any element to shorter ones).  New generators in
    the top margin make the object uncertifiable; when they are needed in
    every degree of the margin the check fails at that object.
    """
    if margin is None:
        margin = default_margin(w)
    if w.hi - w.lo < 2:
        return {"status": Status.INCONCLUSIVE, "reason": "window too small (hi - lo < 2)", "objects": {}}
    top = w.hi - margin
    assessed = [m for m in w.objects if m <= w.hi - 2 * margin]
    if not assessed:
        return {"status": Status.INCONCLUSIVE, "reason": "no object has a full horizon above it", "objects": {}}
    objects = {}
    status = Status.TRUE
    failing = None
    for m in assessed:
        counts = indecomposable_counts(w, m)
        in_margin = [counts[j] for j in range(top + 1, w.hi + 1)]
        certificate = {j - m: c for j, c in counts.items() if c}
        entry = {"generators": sum(counts.values()), "by_degree": certificate}
        if all(c > 0 for c in in_margin):
            entry["status"] = Status.FALSE
            if failing is None:
                failing = m
            status = Status.FALSE
        elif any(c > 0 for c in in_margin):
            entry["status"] = Status.INCONCLUSIVE
            if status is Status.TRUE:
                status = Status.INCONCLUSIVE
        else:
            entry["status"] = Status.TRUE
        objects[m] = entry
    out = {"status": status, "objects": objects, "margin": margin}
    if status is Status.INCONCLUSIVE:
        out["reason"] = "new generators appear in part of the top margin; the horizon is too short to decide"
    if failing is not None:
        out["failing_object"] = failing
        out["reason"] = f"new generators keep appearing through the horizon at object {failing}"
    return out


def monomial_count(degree: int, nvars: int) -> int:
    return comb(degree + nvars - 1, nvars - 1)
