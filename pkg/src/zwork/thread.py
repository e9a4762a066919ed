"""Thread algebras: full subcategories on consecutive objects, as finite algebras."""

from __future__ import annotations

from functools import lru_cache

from .algebra import WindowAlgebra


class ThreadAlgebra:
    """Restriction of a window algebra to the objects ``i-l .. i``.

    Behaves as a finite linear category (``dim``, ``compose_basis``,
    ``compose``) and also exposes the total algebra: basis triples
    ``(n, m, k)``, the multiplication table and the idempotents.  The
    indecomposable projective ``P_c`` is ``hom(-, c)``; maps
    ``P_c -> P_r`` are the elements of ``hom(c, r)``.
    """

    def __init__(self, w: WindowAlgebra, i: int, l: int):
        if l < 0:
            raise ValueError("thread length must be >= 0")
        if not (w.in_window(i - l) and w.in_window(i)):
            raise ValueError(f"thread [{i - l}, {i}] is not inside the window [{w.lo}, {w.hi}]")
        self.window = w
        self.i = i
        self.l = l
        self.objects = list(range(i - l, i + 1))
        self.ring = w.ring
        self.field = w.field
        self.dual = w.dual
        self.name = f"{w.name}[{i - l},{i}]"

    @property
    def lo(self):
        return self.i - self.l

    @property
    def hi(self):
        return self.i

    def contains(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def dim(self, n: int, m: int) -> int:
        if n < m or not (self.contains(n) and self.contains(m)):
            return 0
        return self.window.dim(n, m)

    def basis(self, n: int, m: int):
        return self.window.basis(n, m) if self.dim(n, m) else []

    def compose_basis(self, n, m, l, i, j):
        return self.window.compose_basis(n, m, l, i, j)

    def compose(self, n, m, l, a, b):
        return self.window.compose(n, m, l, a, b)

    def identity_coords(self, n: int) -> dict:
        return {0: self.ring.one}

    def total_basis(self) -> list:
        out = []
        for m in self.objects:
            for n in self.objects:
                for k in range(self.dim(n, m)):
                    out.append((n, m, k))
        return out

    def total_dim(self) -> int:
        return len(self.total_basis())

    def idempotents(self) -> list:
        return [(n, n, 0) for n in self.objects]

    @lru_cache(maxsize=None)
    def multiplication_table(self) -> dict:
        """``(a, b) -> {basis triple: coeff}`` for composable total-basis pairs ``a . b``."""
        table = {}
        basis = self.total_basis()
        for a in basis:
            n, m, i = a
            for b in basis:
                m2, l, j = b
                if m2 != m:
                    continue
                table[(a, b)] = {(n, l, k): c for k, c in self.compose_basis(n, m, l, i, j)}
        return table

    def reduce(self) -> "ThreadAlgebra":
        if not self.dual:
            return self
        return ThreadAlgebra(self.window.reduce(), self.i, self.l)

    def __repr__(self):
        return f"ThreadAlgebra({self.name}, dim {self.total_dim()})"


def extract_thread(w: WindowAlgebra, i: int, l: int) -> ThreadAlgebra:
    return ThreadAlgebra(w, i, l)
