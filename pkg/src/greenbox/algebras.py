"""Finite-dimensional commutative algebras over an exact field.

An algebra is stored by structure constants: ``table[i][j]`` is the
coefficient vector of (basis_i * basis_j).  This covers everything the
package multiplies in: quotient rings K[x]/(f) (field extensions and
non-reduced examples like F_3[t]/(t^2)), and tensor products A (x)_K B,
whose diagonal multiplication realizes the classical separability test.
"""

from __future__ import annotations

from .fields import Field, FieldUsageError, poly_mod, poly_mul
from .linalg import Mat, vec_scale, vec_zero


class FiniteAlgebra:
    """Commutative unital algebra with a distinguished basis."""

    def __init__(self, base: Field, labels, table, one, name: str = ""):
        self.base = base
        self.labels = list(labels)
        self.dim = len(self.labels)
        self.table = table      # table[i][j]: tuple of length dim
        self.one = tuple(one)
        self.name = name or f"algebra dim {self.dim} over {base}"

    def mul(self, x, y):
        """Bilinear product of coefficient vectors."""
        z = self.base.zero
        out = list(vec_zero(self.base, self.dim))
        for i, xi in enumerate(x):
            if xi == z:
                continue
            for j, yj in enumerate(y):
                if yj == z:
                    continue
                c = xi * yj
                row = self.table[i][j]
                for k in range(self.dim):
                    out[k] = out[k] + c * row[k]
        return tuple(out)

    def power(self, x, e: int):
        result = self.one
        for _ in range(e):
            result = self.mul(result, x)
        return result

    def scalar(self, s):
        return vec_scale(s, self.one)

    def basis_vec(self, i):
        v = [self.base.zero] * self.dim
        v[i] = self.base.one
        return tuple(v)

    def left_mult_matrix(self, x) -> Mat:
        cols = [self.mul(x, self.basis_vec(j)) for j in range(self.dim)]
        return Mat.from_cols(self.base, cols, self.dim)

    def is_commutative(self) -> bool:
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.dim) for j in range(self.dim))

    def is_associative(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    lhs = self.mul(self.table[i][j], self.basis_vec(k))
                    rhs = self.mul(self.basis_vec(i), self.table[j][k])
                    if lhs != rhs:
                        return False
        return True

    def __repr__(self):
        return f"FiniteAlgebra({self.name})"


def base_as_algebra(K: Field) -> FiniteAlgebra:
    """The field K as a one-dimensional algebra over itself."""
    one = (K.one,)
    return FiniteAlgebra(K, ["1"], [[one]], one, name=str(K))


def poly_quotient_algebra(K: Field, modulus, var: str = "t",
                          name: str = "") -> FiniteAlgebra:
    """K[x]/(f) for a monic f of degree >= 1, in the power basis.

    f need not be irreducible; reducible moduli give non-field algebras.
    """
    modulus = list(modulus)
    if not modulus or modulus[-1] != K.one:
        raise FieldUsageError("modulus must be monic")
    deg = len(modulus) - 1
    if deg < 1:
        raise FieldUsageError("modulus must have degree >= 1")

    def reduce_poly(p):
        p = poly_mod(K, list(p), modulus)
        return tuple(p[i] if i < len(p) else K.zero for i in range(deg))

    labels = []
    for i in range(deg):
        labels.append("1" if i == 0 else (var if i == 1 else f"{var}^{i}"))
    table = []
    for i in range(deg):
        row = []
        xi = [K.zero] * i + [K.one]
        for j in range(deg):
            xj = [K.zero] * j + [K.one]
            row.append(reduce_poly(poly_mul(K, xi, xj)))
        table.append(row)
    one = tuple([K.one] + [K.zero] * (deg - 1))
    return FiniteAlgebra(K, labels, table, one, name=name or f"{K}[{var}]/(f)")


def tensor_algebra(A: FiniteAlgebra, B: FiniteAlgebra,
                   name: str = "") -> FiniteAlgebra:
    """A (x)_K B with componentwise multiplication, basis a_i (x) b_j."""
    if A.base is not B.base:
        raise FieldUsageError("tensor factors must share the base field")
    K = A.base
    dim = A.dim * B.dim

    def idx(i, j):
        return i * B.dim + j

    labels = [f"{la}⊗{lb}" for la in A.labels for lb in B.labels]
    table = [[None] * dim for _ in range(dim)]
    for i1 in range(A.dim):
        for j1 in range(B.dim):
            for i2 in range(A.dim):
                for j2 in range(B.dim):
                    pa = A.table[i1][i2]
                    pb = B.table[j1][j2]
                    out = [K.zero] * dim
                    for i3, ca in enumerate(pa):
                        if ca == K.zero:
                            continue
                        for j3, cb in enumerate(pb):
                            if cb == K.zero:
                                continue
                            out[idx(i3, j3)] = out[idx(i3, j3)] + ca * cb
                    table[idx(i1, j1)][idx(i2, j2)] = tuple(out)
    one = [K.zero] * dim
    for i3, ca in enumerate(A.one):
        for j3, cb in enumerate(B.one):
            one[idx(i3, j3)] = ca * cb
    return FiniteAlgebra(K, labels, table, tuple(one),
                         name=name or f"{A.name}⊗{B.name}")


def pure_tensor(A: FiniteAlgebra, B: FiniteAlgebra, x, y):
    """Coefficient vector of x (x) y inside tensor_algebra(A, B)."""
    K = A.base
    out = [K.zero] * (A.dim * B.dim)
    for i, ci in enumerate(x):
        for j, cj in enumerate(y):
            out[i * B.dim + j] = ci * cj
    return tuple(out)
