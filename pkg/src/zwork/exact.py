"""Exact scalars and dense linear algebra over Q, GF(p) and the dual numbers.

Matrices are plain lists of rows.  Every routine returns fresh lists and
never mutates its arguments.
"""

from __future__ import annotations

import heapq
import os
import re
from typing import Iterable, Optional, Sequence

import gmpy2
from gmpy2 import mpq

__all__ = [
    "Field",
    "QQ",
    "GF",
    "DualRing",
    "DualScalar",
    "field_from_spec",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "mat_vec",
    "mat_mul",
    "identity",
    "zeros",
    "transpose",
    "free_rank_dual",
    "dual_span_rows",
    "reduce_against",
]


class Field:
    """A prime field or the rationals.  Elements are produced by calling it."""

    def __init__(self, characteristic: int = 0):
        if characteristic and not gmpy2.is_prime(characteristic):
            raise ValueError(f"GF({characteristic}): modulus is not prime")
        self.characteristic = characteristic
        if characteristic:
            self._cls = _make_gf_class(characteristic)
        self.zero = self(0)
        self.one = self(1)

    @property
    def name(self) -> str:
        return f"GF({self.characteristic})" if self.characteristic else "Q"

    def __call__(self, value):
        if self.characteristic:
            if isinstance(value, self._cls):
                return value
            if isinstance(value, str):
                value = mpq(value)
            value = mpq(value)
            num = int(value.numerator) % self.characteristic
            den = int(value.denominator) % self.characteristic
            if den == 0:
                raise ZeroDivisionError(f"{value} has no image in {self.name}")
            return self._cls(num * pow(den, -1, self.characteristic))
        return mpq(value)

    def is_unit(self, x) -> bool:
        return x != 0

    def inv(self, x):
        return self.one / x

    def to_str(self, x) -> str:
        if self.characteristic:
            return str(x.v)
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return self.name


_GF_CLASSES: dict[int, type] = {}


def _make_gf_class(p: int) -> type:
    if p in _GF_CLASSES:
        return _GF_CLASSES[p]

    class GFElement:
        __slots__ = ("v",)
        modulus = p

        def __init__(self, v: int):
            self.v = v % p

        def _coerce(self, other):
            if isinstance(other, GFElement):
                return other.v
            if isinstance(other, int):
                return other % p
            return NotImplemented

        def __add__(self, other):
            o = self._coerce(other)
            return NotImplemented if o is NotImplemented else GFElement(self.v + o)

        __radd__ = __add__

        def __sub__(self, other):
            o = self._coerce(other)
            return NotImplemented if o is NotImplemented else GFElement(self.v - o)

        def __rsub__(self, other):
            o = self._coerce(other)
            return NotImplemented if o is NotImplemented else GFElement(o - self.v)

        def __mul__(self, other):
            o = self._coerce(other)
            return NotImplemented if o is NotImplemented else GFElement(self.v * o)

        __rmul__ = __mul__

        def __truediv__(self, other):
            o = self._coerce(other)
            if o is NotImplemented:
                return o
            if o == 0:
                raise ZeroDivisionError("division by zero in GF(%d)" % p)
            return GFElement(self.v * pow(o, -1, p))

        def __rtruediv__(self, other):
            o = self._coerce(other)
            if o is NotImplemented:
                return o
            return GFElement(o * pow(self.v, -1, p))

        def __neg__(self):
            return GFElement(-self.v)

        def __eq__(self, other):
            o = self._coerce(other)
            return False if o is NotImplemented else self.v == o

        def __hash__(self):
            return hash(self.v)

        def __bool__(self):
            return self.v != 0

        def __repr__(self):
            return f"{self.v} mod {p}"

    _GF_CLASSES[p] = GFElement
    return GFElement


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


_FIELD_RE = re.compile(r"^\s*(?:Q|QQ|GF\(\s*(\d+)\s*\))\s*$")


def field_from_spec(spec: Optional[str] = None) -> Field:
    """Parse ``"Q"`` or ``"GF(p)"``; ``ZWORK_FIELD`` overrides when set."""
    override = os.environ.get("ZWORK_FIELD")
    if override:
        spec = override
    if spec is None:
        return QQ
    m = _FIELD_RE.match(spec)
    if not m:
        raise ValueError(f"unknown field {spec!r}; expected Q or GF(p)")
    return GF(int(m.group(1))) if m.group(1) else QQ


class DualScalar:
    """``a + b*eps`` with ``eps**2 == 0``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a
        self.b = b

    @staticmethod
    def _parts(x):
        if isinstance(x, DualScalar):
            return x.a, x.b
        return x, 0

    def __add__(self, other):
        a, b = self._parts(other)
        return DualScalar(self.a + a, self.b + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._parts(other)
        return DualScalar(self.a - a, self.b - b)

    def __rsub__(self, other):
        a, b = self._parts(other)
        return DualScalar(a - self.a, b - self.b)

    def __mul__(self, other):
        a, b = self._parts(other)
        return DualScalar(self.a * a, self.a * b + self.b * a)

    __rmul__ = __mul__

    def __neg__(self):
        return DualScalar(-self.a, -self.b)

    def __truediv__(self, other):
        a, b = self._parts(other)
        if a == 0:
            raise ZeroDivisionError("non-unit dual number")
        inv_a = 1 / a
        return self * DualScalar(inv_a, -b * inv_a * inv_a)

    def __rtruediv__(self, other):
        return DualScalar(*self._parts(other)) / self

    def __eq__(self, other):
        a, b = self._parts(other)
        return self.a == a and self.b == b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a != 0 or self.b != 0)

    def reduce(self):
        return self.a

    def __repr__(self):
        return f"({self.a} + {self.b}*eps)"


class DualRing:
    """The ring ``k[eps]/(eps^2)`` over a field."""

    def __init__(self, field: Field):
        self.field = field
        self.zero = DualScalar(field.zero, field.zero)
        self.one = DualScalar(field.one, field.zero)
        self.eps = DualScalar(field.zero, field.one)

    @property
    def name(self) -> str:
        return f"{self.field.name}[eps]/(eps^2)"

    def __call__(self, value, eps_part=0):
        if isinstance(value, DualScalar):
            return DualScalar(self.field(value.a), self.field(value.b))
        return DualScalar(self.field(value), self.field(eps_part))

    def is_unit(self, x) -> bool:
        return x.a != 0

    def inv(self, x):
        return self.one / x

    def reduce(self, x):
        return x.a

    def __repr__(self):
        return self.name


# ---------------------------------------------------------------------------
# dense linear algebra


def zeros(rows: int, cols: int, zero=0):
    return [[zero] * cols for _ in range(rows)]


def identity(n: int, field: Field = QQ):
    m = zeros(n, n, field.zero)
    for i in range(n):
        m[i][i] = field.one
    return m


def transpose(m: Sequence[Sequence], ncols: Optional[int] = None):
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def mat_vec(m: Sequence[Sequence], v: Sequence, zero=0):
    if len(m) and len(m[0]) != len(v):
        raise ValueError(f"dimension mismatch: {len(m[0])} columns vs vector of length {len(v)}")
    out = []
    for row in m:
        s = zero
        for a, b in zip(row, v):
            if a != 0 and b != 0:
                s = s + a * b
        out.append(s)
    return out


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence], zero=0, inner: Optional[int] = None):
    """Product of an (r x s) and an (s x c) matrix."""
    if not a:
        return []
    s = len(a[0]) if inner is None else inner
    if len(b) != s:
        raise ValueError(f"dimension mismatch: {s} vs {len(b)}")
    c = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [zero] * c
        for k, x in enumerate(row):
            if x == 0:
                continue
            brow = b[k]
            for j in range(c):
                y = brow[j]
                if y != 0:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def rref(m: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row-echelon form.

    Returns ``(R, rank, pivots)`` where ``R`` keeps only the nonzero rows.
    Works for any entries supporting field arithmetic (mpq, GF elements).
    """
    rows = [list(r) for r in m]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for j in nz:
            prow[j] = prow[j] * inv
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f == 0:
                continue
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return rows[:r], r, pivots


def rank(m: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    """Rank by forward elimination only (cheaper than a full rref)."""
    rows = [list(r) for r in m if any(x != 0 for x in r)]
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        nz = [j for j in range(c + 1, ncols) if prow[j] != 0]
        for i in range(r + 1, nrows):
            row = rows[i]
            f = row[c]
            if f == 0:
                continue
            f = f * inv
            row[c] = row[c] - row[c]
            for j in nz:
                row[j] = row[j] - f * prow[j]
        r += 1
    return r


def kernel_basis(m: Sequence[Sequence], ncols: Optional[int] = None, field: Field = QQ):
    """Basis of the right kernel ``{v : m v = 0}`` as a list of column vectors."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    R, rk, pivots = rref(m, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [field.zero] * ncols
        v[free] = field.one
        for row, pc in zip(R, pivots):
            if row[free] != 0:
                v[pc] = -row[free]
        basis.append(v)
    return basis


def solve(m: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None, field: Field = QQ):
    """Some ``x`` with ``m x = b``, or ``None`` when the system is inconsistent."""
    nrows = len(m)
    if len(b) != nrows:
        raise ValueError(f"dimension mismatch: matrix has {nrows} rows, rhs has {len(b)}")
    if ncols is None:
        ncols = len(m[0]) if m else 0
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    R, rk, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x


def dual_span_rows(vectors: Iterable[Sequence[DualScalar]], field: Field = QQ):
    """k-coordinates of the R-span of dual vectors: a-block then eps-block."""
    rows = []
    for v in vectors:
        a = [x.a for x in v]
        rows.append(a + [x.b for x in v])
        rows.append([field.zero] * len(a) + a)
    return rows


def free_rank_dual(num_generators: int, relations: Sequence[Sequence[DualScalar]], field: Field = QQ):
    """Rank ``r`` if ``R^g / <relations>`` is free over ``k[eps]/(eps^2)``, else ``None``.

    The quotient is free iff its k-dimension is even and multiplication by
    eps has kernel equal to its image, i.e. rank(eps) is half the dimension.
    """
    g = num_generators
    rows = dual_span_rows(relations, field)
    if rows:
        R, rk, pivots = rref(rows, 2 * g)
    else:
        R, rk, pivots = [], 0, []
    dim = 2 * g - rk
    if dim % 2:
        return None
    # eps maps the a-block onto the eps-block; compute its rank on the quotient.
    pivset = set(pivots)
    free_cols = [c for c in range(2 * g) if c not in pivset]
    images = []
    for c in free_cols:
        if c >= g:
            images.append(None)
            continue
        v = [field.zero] * (2 * g)
        v[g + c] = field.one
        images.append(reduce_against(v, R, pivots))
    mat = []
    for img in images:
        if img is None:
            continue
        mat.append([img[c] for c in free_cols])
    eps_rank = rank(mat, len(free_cols)) if mat else 0
    if 2 * eps_rank != dim:
        return None
    return dim // 2


def reduce_against(v, R, pivots):
    """Subtract pivot rows of an rref basis from ``v``."""
    v = list(v)
    for row, pc in zip(R, pivots):
        f = v[pc]
        if f != 0:
            for j, x in enumerate(row):
                if x != 0:
                    v[j] = v[j] - f * x
    return v


class SparseEchelon:
    """Incremental row echelon form for sparse rows ``{col: value}``.

    Every stored row is normalized with its pivot (its smallest column)
    equal to one, so reducing a new row only creates larger columns.
    """

    def __init__(self, field: Field = QQ):
        self.field = field
        self.rows: dict = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = {c: x for c, x in v.items() if x != 0}
        heap = list(v)
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            f = v.get(c)
            if f is None or c not in self.rows:
                continue
            for j, y in self.rows[c].items():
                nv = v.get(j, self.field.zero) - f * y
                if nv != 0:
                    if j not in v:
                        heapq.heappush(heap, j)
                    v[j] = nv
                else:
                    v.pop(j, None)
        return v

    def add(self, v: dict) -> bool:
        """Insert ``v``; True when it was independent of the stored rows."""
        r = self.reduce(v)
        if not r:
            return False
        c = min(r)
        inv = 1 / r[c]
        self.rows[c] = {j: x * inv for j, x in r.items()}
        return True

    def reduced_rows(self) -> dict:
        """Fully reduced rows (pivot columns cleared from every other row)."""
        out: dict = {}
        for c in sorted(self.rows, reverse=True):
            row = dict(self.rows[c])
            for j in [j for j in row if j != c and j in out]:
                f = row.pop(j)
                for k, y in out[j].items():
                    if k == j:
                        continue
                    nv = row.get(k, self.field.zero) - f * y
                    if nv != 0:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            out[c] = row
        return out

    def kernel(self, ncols: int) -> list:
        """Sparse basis of ``{x : row . x = 0 for every stored row}``."""
        R = self.reduced_rows()
        basis = {f: {f: self.field.one} for f in range(ncols) if f not in R}
        for c, row in R.items():
            for j, x in row.items():
                if j != c:
                    basis[j][c] = -x
        return [basis[f] for f in sorted(basis)]


def sparse_solve(rows: Iterable[dict], b: Sequence, ncols: int, field: Field = QQ):
    """Some dense ``x`` with ``rows . x = b``, or ``None`` when inconsistent."""
    E = SparseEchelon(field)
    for row, bi in zip(rows, b):
        aug = dict(row)
        if bi != 0:
            aug[ncols] = bi
        r = E.reduce(aug)
        if r and min(r) == ncols:
            return None
        E.add(r)
    x = [field.zero] * ncols
    for c, row in E.reduced_rows().items():
        x[c] = row.get(ncols, field.zero)
    return x
