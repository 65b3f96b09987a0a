"""Quotients of free modules on labeled generators by a relation span.

A PresentedLevel carries the ambient generator list (pure tensors first,
then transfer classes by increasing origin level) and the relation rows.
Canonical forms come from reduced row echelon form with pivots at the *last*
nonzero coordinate of each relation, so relations rewrite late generators in
terms of early ones: transfer classes collapse onto pure tensors wherever
Frobenius reciprocity allows it, and the earliest generators survive as the
reduced basis.  canonicalize is idempotent and kills exactly the relation
span; the reduced dimension is #generators - rank(relations).
"""

from __future__ import annotations

from .linalg import Mat, rref, vec_is_zero


class PresentedLevel:
    def __init__(self, field, labels, relations, origins=None):
        self.field = field
        self.labels = list(labels)
        self.ngens = len(self.labels)
        self.origins = list(origins) if origins is not None else \
            [None] * self.ngens
        rel_rows = [tuple(r) for r in relations
                    if not vec_is_zero(field, tuple(r))]
        self.relations = rel_rows
        reduced, pivots = rref(Mat(field, rel_rows, ncols=self.ngens), "last")
        self._rel_rref = reduced
        self.pivots = pivots
        self.free = tuple(j for j in range(self.ngens) if j not in pivots)
        self.dim = len(self.free)
        self.reduced_labels = [self.labels[j] for j in self.free]

    def canonicalize(self, v):
        """Canonical coset representative: pivot coordinates eliminated."""
        if len(v) != self.ngens:
            raise ValueError("ambient vector of wrong length")
        v = list(v)
        z = self.field.zero
        for row, p in zip(self._rel_rref.rows, self.pivots):
            c = v[p]
            if c != z:
                v = [a - c * b for a, b in zip(v, row)]
        return tuple(v)

    def reduce(self, v):
        """Reduced coordinates (length ``dim``) of an ambient vector."""
        canon = self.canonicalize(v)
        return tuple(canon[j] for j in self.free)

    def expand(self, rv):
        """Ambient canonical representative of reduced coordinates."""
        if len(rv) != self.dim:
            raise ValueError("reduced vector of wrong length")
        out = [self.field.zero] * self.ngens
        for c, j in zip(rv, self.free):
            out[j] = c
        return self.canonicalize(tuple(out))

    def in_relation_span(self, v) -> bool:
        return vec_is_zero(self.field, self.canonicalize(v))

    def rel_rank(self) -> int:
        return len(self.pivots)

    def same_relation_span(self, other: "PresentedLevel") -> bool:
        if self.ngens != other.ngens or self.rel_rank() != other.rel_rank():
            return False
        return all(other.in_relation_span(r) for r in self.relations) and \
            all(self.in_relation_span(r) for r in other.relations)

    def __repr__(self):
        return f"PresentedLevel(dim {self.dim} = {self.ngens} gens - " \
               f"{self.rel_rank()} relations)"
