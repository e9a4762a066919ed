"""Built-in presentations and test fixtures."""

from __future__ import annotations

from typing import Optional

from .algebra import GeneratorScheme, GradedPresentation, PresentationError, RelationScheme, WindowAlgebra
from .exact import QQ, DualScalar, Field


def _commutators(labels, field: Field, q=None):
    rels = []
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            x, y = labels[i], labels[j]
            c = field.one if q is None else q
            rels.append(RelationScheme(((field.one, (x, y)), (-c, (y, x)))))
    return tuple(rels)


def projective_space(d: int, field: Field = QQ) -> GradedPresentation:
    if d < 1:
        raise ValueError("projective_space needs d >= 1")
    labels = [f"x{i}" for i in range(d + 1)]
    gens = tuple(GeneratorScheme(x, 1) for x in labels)
    return GradedPresentation(f"P{d}", gens, _commutators(labels, field), field)


def quantum_projective_space(d: int, q="eps", field: Field = QQ, c: Optional[dict] = None) -> GradedPresentation:
    """``x_i x_j = q x_j x_i`` for ``i < j``; ``q="eps"`` gives the first-order family.

    In the first-order family the relation reads ``x_i x_j = (1 + eps c_ij) x_j x_i``
    with ``c_ij = 1`` unless given.
    """
    if d < 1:
        raise ValueError("quantum_projective_space needs d >= 1")
    labels = [f"x{i}" for i in range(d + 1)]
    gens = tuple(GeneratorScheme(x, 1) for x in labels)
    if q == "eps":
        base = _commutators(labels, field)
        deformed = []
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                cij = field((c or {}).get((i, j), 1))
                x, y = labels[i], labels[j]
                deformed.append(
                    RelationScheme(
                        ((DualScalar(field.one, field.zero), (x, y)), (DualScalar(-field.one, -cij), (y, x)))
                    )
                )
        return GradedPresentation(f"qP{d}_eps", gens, base, field, deformed_relations=tuple(deformed))
    q = field(q)
    if q == 0:
        raise PresentationError("q must be invertible")
    return GradedPresentation(f"qP{d}", gens, _commutators(labels, field, q), field)


def truncated_infinite_polynomial(n: int, field: Field = QQ) -> GradedPresentation:
    """Commuting ``x1..xN`` in degree 1.

    The truncation models the polynomial ring in countably many variables
    faithfully only up to degree ``N - 1``: in degree ``N`` the monomial
    ``x_{N+1}^N`` is missing.  That bound is recorded as the degree horizon.
    """
    if n < 1:
        raise ValueError("truncated_infinite_polynomial needs N >= 1")
    labels = [f"x{i}" for i in range(1, n + 1)]
    gens = tuple(GeneratorScheme(x, 1) for x in labels)
    return GradedPresentation(f"Poly{n}", gens, _commutators(labels, field), field, degree_horizon=n - 1)


def dead_generator_fixture(width: int, field: Field = QQ) -> GradedPresentation:
    """``x`` in degree 1 plus a generator ``g_d`` in each degree ``2..width``.

    Every ``g_d`` is killed by everything of positive degree on both sides,
    so new indecomposables appear in every degree the window can see.
    """
    gens = [GeneratorScheme("x", 1)] + [GeneratorScheme(f"g{d}", d) for d in range(2, width + 1)]
    dead = [g.label for g in gens[1:]]
    rels = []
    for g in dead:
        rels.append(RelationScheme(((field.one, ("x", g)),)))
        rels.append(RelationScheme(((field.one, (g, "x")),)))
        for h in dead:
            rels.append(RelationScheme(((field.one, (g, h)),)))
    return GradedPresentation(f"Dead{width}", tuple(gens), tuple(rels), field)


def nonflat_fixture(field: Field = QQ) -> GradedPresentation:
    """``k<x,y>/(xy, yx)`` deformed to ``(xy - eps xx, yx)``; eps x^3 = 0 breaks flatness."""
    one = field.one
    gens = (GeneratorScheme("x", 1), GeneratorScheme("y", 1))
    base = (RelationScheme(((one, ("x", "y")),)), RelationScheme(((one, ("y", "x")),)))
    deformed = (
        RelationScheme(((DualScalar(one, field.zero), ("x", "y")), (DualScalar(field.zero, -one), ("x", "x")))),
        RelationScheme(((DualScalar(one, field.zero), ("y", "x")),)),
    )
    return GradedPresentation("NonFlat", gens, base, field, deformed_relations=deformed)


class NonConnectedWindow(WindowAlgebra):
    """``k[t]/(t^2)[x]`` with ``t`` in degree zero, built directly.

    Presentations reject degree-zero generators, so this fixture bypasses
    them: every piece is ``A_{n-m}`` with basis ``t^a x^b`` (``a < 2``).
    """

    def __init__(self, lo: int, hi: int, field: Field = QQ):
        pres = GradedPresentation("NonConnected", (GeneratorScheme("x", 1),), (), field)
        super().__init__(pres, lo, hi)

    def endomorphism_dims(self):
        return [2 for _ in self.objects]


BUILTINS = {
    "P1": lambda: projective_space(1),
    "P2": lambda: projective_space(2),
    "P3": lambda: projective_space(3),
    "qP1_eps": lambda: quantum_projective_space(1),
    "qP2_eps": lambda: quantum_projective_space(2),
    "qP1_q2": lambda: quantum_projective_space(1, 2),
    "qP2_q3": lambda: quantum_projective_space(2, 3),
    "Poly5": lambda: truncated_infinite_polynomial(5),
    "Poly6": lambda: truncated_infinite_polynomial(6),
    "NonFlat": nonflat_fixture,
}


def builtin(name: str, **kwargs) -> GradedPresentation:
    """Parse names like ``projective_space(2)``, ``quantum_projective_space(1,eps)``."""
    import re

    m = re.fullmatch(r"\s*(\w+)\s*(?:\(([^)]*)\))?\s*", name)
    if not m:
        raise ValueError(f"unknown builtin {name!r}")
    head, args = m.group(1), [a.strip() for a in (m.group(2) or "").split(",") if a.strip()]
    field = kwargs.get("field", QQ)
    if head == "projective_space":
        return projective_space(int(args[0]), field)
    if head == "quantum_projective_space":
        q = args[1] if len(args) > 1 else "eps"
        return quantum_projective_space(int(args[0]), q if q == "eps" else field(q), field)
    if head == "truncated_infinite_polynomial":
        return truncated_infinite_polynomial(int(args[0]), field)
    if head == "dead_generator_fixture":
        return dead_generator_fixture(int(args[0]), field)
    if head == "nonflat_fixture":
        return nonflat_fixture(field)
    if head in BUILTINS and not args:
        return BUILTINS[head]()
    raise ValueError(f"unknown builtin {name!r}")
