"""Independent oracles used by the tests.

Nothing here imports the package's linear algebra or realization code:
the monomial category is built from exponent vectors, and ranks are
computed by a separate elimination modulo a large prime.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

PRIME = (1 << 61) - 1


def monomials(degree: int, nvars: int) -> list:
    """Exponent vectors of total degree ``degree`` in ``nvars`` variables, sorted."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(set(out))


def monomial_dim(n: int, m: int, d: int) -> int:
    return comb(n - m + d, d) if n >= m else 0


class MonomialCategory:
    """Objects ``lo..hi``; ``hom(n, m)`` = monomials of degree ``n - m`` in ``d+1`` commuting variables."""

    def __init__(self, d: int, lo: int, hi: int):
        self.nvars = d + 1
        self.objects = list(range(lo, hi + 1))
        self._basis = {}
        for g in range(hi - lo + 1):
            ms = monomials(g, self.nvars)
            self._basis[g] = (ms, {m: i for i, m in enumerate(ms)})

    def dim(self, n, m):
        if n < m or n not in self.objects or m not in self.objects:
            return 0
        return len(self._basis[n - m][0])

    def compose(self, n, m, l, i, j):
        a = self._basis[n - m][0][i]
        b = self._basis[m - l][0][j]
        c = tuple(x + y for x, y in zip(a, b))
        return self._basis[n - l][1][c]


def rank_mod_p(rows: list, ncols: int, p: int = PRIME) -> int:
    """Rank of sparse rows ``{col: int}`` modulo ``p`` by elimination on a pivot dictionary."""
    pivots = {}
    r = 0
    for row in rows:
        v = {c: x % p for c, x in row.items() if x % p}
        while v:
            c = min(v)
            if c in pivots:
                prow = pivots[c]
                f = v[c]
                for k, y in prow.items():
                    nv = (v.get(k, 0) - f * y) % p
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
            else:
                inv = pow(v[c], p - 2, p)
                pivots[c] = {k: (y * inv) % p for k, y in v.items()}
                r += 1
                break
    return r


def bar_hochschild_dims(cat, max_degree: int) -> dict:
    """Unnormalized Hochschild cohomology relative to the object idempotents.

    ``C^p`` = maps on composable tuples ``(a_1..a_p)`` of basis elements,
    identities included, with values in the composite hom-space.
    """
    objs = sorted(cat.objects, reverse=True)

    def tuples(p):
        out = []
        for ch in itertools.product(objs, repeat=p + 1):
            if any(ch[i] < ch[i + 1] for i in range(p)):
                continue
            for ins in itertools.product(*[range(cat.dim(ch[i], ch[i + 1])) for i in range(p)]):
                for k in range(cat.dim(ch[0], ch[-1])):
                    out.append((ch, ins, k))
        return out

    idx = {p: tuples(p) for p in range(max_degree + 2)}
    pos = {p: {e: j for j, e in enumerate(idx[p])} for p in idx}

    def d_rows(p):
        rows = []
        for ch, ins, k in idx[p + 1]:
            row = {}

            def add(key, x):
                c = pos[p][key]
                row[c] = row.get(c, 0) + x

            n = p + 1
            # a_1 f(rest)
            for kk in range(cat.dim(ch[1], ch[-1])):
                if cat.compose(ch[0], ch[1], ch[-1], ins[0], kk) == k:
                    add((ch[1:], ins[1:], kk), 1)
            for i in range(1, n):
                j = cat.compose(ch[i - 1], ch[i], ch[i + 1], ins[i - 1], ins[i])
                add((ch[:i] + ch[i + 1:], ins[:i - 1] + (j,) + ins[i + 1:], k), (-1) ** i)
            for kk in range(cat.dim(ch[0], ch[-2])):
                if cat.compose(ch[0], ch[-2], ch[-1], kk, ins[-1]) == k:
                    add((ch[:-1], ins[:-1], kk), (-1) ** n)
            rows.append({c: x for c, x in row.items() if x})
        return rows

    ranks = {p: rank_mod_p(d_rows(p), len(idx[p])) for p in range(max_degree + 1)}
    ranks[-1] = 0
    return {p: len(idx[p]) - ranks[p] - ranks[p - 1] for p in range(max_degree + 1)}


def frac_rank(m: list) -> int:
    """Rank over Q with Fractions (small matrices only)."""
    rows = [[Fraction(x) for x in r] for r in m]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
