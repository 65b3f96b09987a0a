"""Green-functor structure and Tambara norms for constant and fixed-point
functors over C_n.

A GreenFunctor wraps a MackeyFunctor with a commutative levelwise
multiplication (stored as products of basis pairs) and a unit.  Norms are
evaluation procedures, never matrices: they are multiplicative but not
additive.  The two families the engine constructs directly:

* constant functor of a finite commutative algebra R: every level is R,
  restriction is the identity, transfer from level m to m' multiplies by the
  index m'/m, the Weyl action is trivial, and the norm raises to the power
  m'/m.
* fixed-point functor of a cyclic extension: level m is the fixed subfield
  L^{C_m}, restriction is inclusion, transfer and norm are the sum and the
  product over coset representatives, and the Weyl generator acts through σ.
"""

from __future__ import annotations

import random

from .algebras import FiniteAlgebra, base_as_algebra
from .extensions import GaloisExtension
from .fields import Field
from .linalg import Mat, solve_matrix, vec_zero
from .mackey import (InternalCheckError, MackeyFunctor, SubgroupLattice,
                     Violation, subgroup_lattice)


class GreenFunctor:
    """Mackey functor plus levelwise commutative multiplication and unit.

    ``mult[m][i][j]`` is the product of basis vectors i and j at level m;
    ``unit[m]`` the unit vector.  ``norms`` (optional) evaluates the
    multiplicative transfer.
    """

    def __init__(self, mackey: MackeyFunctor, mult, unit, norms=None,
                 name: str = "", level_embed=None):
        self.mackey = mackey
        self.mult = mult
        self.unit = unit
        self.norms = norms
        self.name = name or mackey.name
        self.level_embed = level_embed  # optional {m: Mat into an algebra}

    # pass-throughs
    @property
    def scalars(self):
        return self.mackey.scalars

    @property
    def lattice(self):
        return self.mackey.lattice

    def dim(self, m):
        return self.mackey.dim(m)

    def labels(self, m):
        return self.mackey.labels[m]

    def multiply(self, m, x, y):
        """Bilinear product of level-m coefficient vectors."""
        K = self.scalars
        out = list(vec_zero(K, self.dim(m)))
        for i, xi in enumerate(x):
            if xi == K.zero:
                continue
            for j, yj in enumerate(y):
                if yj == K.zero:
                    continue
                c = xi * yj
                row = self.mult[m][i][j]
                for k in range(self.dim(m)):
                    out[k] = out[k] + c * row[k]
        return tuple(out)

    def power(self, m, x, e: int):
        out = self.unit[m]
        for _ in range(e):
            out = self.multiply(m, out, x)
        return out

    def norm(self, to: int, frm: int, vec):
        if self.norms is None:
            raise InternalCheckError(f"{self.name} carries no norm rule")
        return self.norms.apply(to, frm, vec)

    def __repr__(self):
        return f"GreenFunctor({self.name})"


class NormRule:
    """Multiplicative transfer along frm | to; subclasses implement apply."""

    def apply(self, to: int, frm: int, vec):
        raise NotImplementedError


class ConstantNorm(NormRule):
    def __init__(self, algebra: FiniteAlgebra):
        self.algebra = algebra

    def apply(self, to, frm, vec):
        if to % frm:
            raise ValueError("norm must go up the lattice")
        return self.algebra.power(vec, to // frm)


class FixNorm(NormRule):
    """Product over coset representatives σ^(j n / to), j < to/frm."""

    def __init__(self, ext: GaloisExtension, embeds):
        self.ext = ext
        self.embeds = embeds

    def apply(self, to, frm, vec):
        if to % frm:
            raise ValueError("norm must go up the lattice")
        n = self.ext.degree
        x = self.embeds[frm].apply(vec)
        out = self.ext.algebra.one
        for j in range(to // frm):
            out = self.ext.algebra.mul(out, self.ext.apply_sigma(x, j * (n // to)))
        coords = solve_matrix(self.embeds[to],
                              Mat.from_cols(self.ext.base, [out], n))
        if coords is None:
            raise InternalCheckError("norm image escaped the fixed subfield")
        return coords.col(0)


# ---------------------------------------------------------------------------
# the two basic Tambara functors


def constant_functor(R, n_or_lattice, name: str = "") -> GreenFunctor:
    """Constant Green/Tambara functor of a field or finite algebra R."""
    lattice = n_or_lattice if isinstance(n_or_lattice, SubgroupLattice) \
        else subgroup_lattice(n_or_lattice)
    algebra = base_as_algebra(R) if isinstance(R, Field) else R
    K = algebra.base
    dim = algebra.dim
    labels = {m: list(algebra.labels) for m in lattice.divisors}
    ident = Mat.identity(K, dim)
    res = {(d, m): ident for (d, m) in lattice.covering_pairs}
    tr = {(m, d): ident.scale(K.from_int(m // d))
          for (d, m) in lattice.covering_pairs}
    weyl = {m: ident for m in lattice.divisors}
    mack = MackeyFunctor(K, lattice, labels, res, tr, weyl,
                         name=name or f"{algebra.name}^c")
    mult = {m: algebra.table for m in lattice.divisors}
    unit = {m: algebra.one for m in lattice.divisors}
    return GreenFunctor(mack, mult, unit, norms=ConstantNorm(algebra),
                        name=mack.name)


def fix_functor(E: GaloisExtension, name: str = "") -> GreenFunctor:
    """Fixed-point Green/Tambara functor of a cyclic extension K ⊂ L."""
    K, n = E.base, E.degree
    lattice = subgroup_lattice(n)
    alg = E.algebra

    embeds = {}
    labels = {}
    for m in lattice.divisors:
        basis = E.fixed_space(m)
        embeds[m] = Mat.from_cols(K, basis, n)
        labels[m] = [_label_of(E, v) for v in basis]

    res = {}
    tr = {}
    for (d, m) in lattice.covering_pairs:
        rmat = solve_matrix(embeds[d], embeds[m])
        if rmat is None:
            raise InternalCheckError("fixed subfields are not nested")
        res[(d, m)] = rmat
        cols = []
        for v in embeds[d].cols():
            acc = vec_zero(K, n)
            for j in range(m // d):
                img = E.apply_sigma(v, j * (n // m))
                acc = tuple(a + b for a, b in zip(acc, img))
            cols.append(acc)
        tmat = solve_matrix(embeds[m], Mat.from_cols(K, cols, n))
        if tmat is None:
            raise InternalCheckError("transfer image escaped the fixed subfield")
        tr[(m, d)] = tmat
    weyl = {}
    for m in lattice.divisors:
        wmat = solve_matrix(embeds[m], E.sigma @ embeds[m])
        if wmat is None:
            raise InternalCheckError("σ does not preserve the fixed subfield")
        weyl[m] = wmat

    mack = MackeyFunctor(K, lattice, labels, res, tr, weyl,
                         name=name or f"{alg.name}^fix")
    mult = {}
    for m in lattice.divisors:
        dim = embeds[m].ncols
        table = []
        for i in range(dim):
            row = []
            vi = embeds[m].col(i)
            for j in range(dim):
                prod = alg.mul(vi, embeds[m].col(j))
                coords = solve_matrix(embeds[m],
                                      Mat.from_cols(K, [prod], n))
                if coords is None:
                    raise InternalCheckError(
                        "fixed subfield is not closed under multiplication")
                row.append(coords.col(0))
            table.append(row)
        mult[m] = table
    unit = {}
    for m in lattice.divisors:
        coords = solve_matrix(embeds[m], Mat.from_cols(K, [alg.one], n))
        unit[m] = coords.col(0)
    return GreenFunctor(mack, mult, unit, norms=FixNorm(E, embeds),
                        name=mack.name, level_embed=embeds)


def _label_of(E: GaloisExtension, vec) -> str:
    from .extensions import format_l_element
    return format_l_element(E, vec)


# ---------------------------------------------------------------------------
# axiom checking


def check_green(G: GreenFunctor):
    """Exhaustive Green-functor checks on basis tuples; returns violations."""
    out = []
    lat = G.lattice
    K = G.scalars

    for m in lat.divisors:
        dim = G.dim(m)
        basis = [tuple(K.one if i == j else K.zero for j in range(dim))
                 for i in range(dim)]
        for i in range(dim):
            if G.multiply(m, G.unit[m], basis[i]) != basis[i]:
                out.append(Violation("unit", {"level": m, "basis": i}, G.name))
        for i in range(dim):
            for j in range(i, dim):
                if G.mult[m][i][j] != G.mult[m][j][i]:
                    out.append(Violation("commutativity",
                                         {"level": m, "pair": (i, j)}, G.name))
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    lhs = G.multiply(m, G.mult[m][i][j], basis[k])
                    rhs = G.multiply(m, basis[i], G.mult[m][j][k])
                    if lhs != rhs:
                        out.append(Violation(
                            "associativity", {"level": m, "triple": (i, j, k)},
                            G.name))
        wm = G.mackey.weyl[m]
        for i in range(dim):
            for j in range(dim):
                lhs = wm.apply(G.mult[m][i][j])
                rhs = G.multiply(m, wm.col(i), wm.col(j))
                if lhs != rhs:
                    out.append(Violation("weyl_ring_automorphism",
                                         {"level": m, "pair": (i, j)}, G.name))
        if wm.apply(G.unit[m]) != G.unit[m]:
            out.append(Violation("weyl_unit", {"level": m}, G.name))

    for (d, m) in lat.covering_pairs:
        res = G.mackey.res[(d, m)]
        tr = G.mackey.tr[(m, d)]
        if res.apply(G.unit[m]) != G.unit[d]:
            out.append(Violation("res_unit", {"pair": (d, m)}, G.name))
        dim_m, dim_d = G.dim(m), G.dim(d)
        for i in range(dim_m):
            ei = tuple(K.one if t == i else K.zero for t in range(dim_m))
            for j in range(dim_m):
                ej = tuple(K.one if t == j else K.zero for t in range(dim_m))
                lhs = res.apply(G.mult[m][i][j])
                rhs = G.multiply(d, res.apply(ei), res.apply(ej))
                if lhs != rhs:
                    out.append(Violation("res_ring_map",
                                         {"pair": (d, m), "basis": (i, j)},
                                         G.name))
        # Frobenius reciprocity: tr(x)·y = tr(x·res(y))
        for i in range(dim_d):
            ei = tuple(K.one if t == i else K.zero for t in range(dim_d))
            for j in range(dim_m):
                ej = tuple(K.one if t == j else K.zero for t in range(dim_m))
                lhs = G.multiply(m, tr.apply(ei), ej)
                rhs = tr.apply(G.multiply(d, ei, res.apply(ej)))
                if lhs != rhs:
                    out.append(Violation("frobenius_reciprocity",
                                         {"pair": (d, m), "basis": (i, j)},
                                         G.name))
    return out


def check_norms(G: GreenFunctor):
    """Norm invariants on basis vectors: multiplicativity, unit, and
    norm(res(x)) = x^(index)."""
    out = []
    if G.norms is None:
        return out
    lat = G.lattice
    K = G.scalars
    for (d, m) in lat.covering_pairs:
        dim_d = G.dim(d)
        basis = [tuple(K.one if t == i else K.zero for t in range(dim_d))
                 for i in range(dim_d)]
        for i in range(dim_d):
            for j in range(dim_d):
                lhs = G.norm(m, d, G.multiply(d, basis[i], basis[j]))
                rhs = G.multiply(m, G.norm(m, d, basis[i]),
                                 G.norm(m, d, basis[j]))
                if lhs != rhs:
                    out.append(Violation("norm_multiplicative",
                                         {"pair": (d, m), "basis": (i, j)},
                                         G.name))
        if G.norm(m, d, G.unit[d]) != G.unit[m]:
            out.append(Violation("norm_unit", {"pair": (d, m)}, G.name))
        res = G.mackey.res[(d, m)]
        for i in range(G.dim(m)):
            ei = tuple(K.one if t == i else K.zero for t in range(G.dim(m)))
            if G.norm(m, d, res.apply(ei)) != G.power(m, ei, m // d):
                out.append(Violation("norm_of_restriction",
                                     {"pair": (d, m), "basis": i}, G.name))
    return out


def zero_green(M: MackeyFunctor) -> GreenFunctor:
    """Wrap a bare Mackey functor with the zero multiplication.

    Lets Mackey-only data flow through machinery that formally expects a
    Green functor (box-product comparisons of random functors); the ring
    checks are meaningless on the result and are not run."""
    K = M.scalars
    mult = {}
    unit = {}
    for m in M.lattice.divisors:
        dim = M.dim(m)
        zero = tuple(K.zero for _ in range(dim))
        mult[m] = [[zero] * dim for _ in range(dim)]
        unit[m] = zero
    return GreenFunctor(M, mult, unit, name=f"{M.name} (zero mult)")


def permute_green(G: GreenFunctor, perms: dict) -> GreenFunctor:
    """Relabel the level bases by permutations {m: [new order of indices]}.

    Produces the same functor presented differently; downstream verdicts
    must not change."""
    K = G.scalars
    mats = {}
    for m in G.lattice.divisors:
        perm = perms.get(m, list(range(G.dim(m))))
        cols = []
        for old in perm:
            cols.append(tuple(K.one if t == old else K.zero
                              for t in range(G.dim(m))))
        # column j of the base change picks the perm[j]-th old basis vector
        mats[m] = Mat.from_cols(K, cols, G.dim(m)).transpose()
    from .mackey import base_change
    mack = base_change(G.mackey, mats, name=f"{G.name} (permuted)")
    mack.labels = {m: [G.labels(m)[perms.get(m, list(range(G.dim(m))))[i]]
                       for i in range(G.dim(m))]
                   for m in G.lattice.divisors}
    mult = {}
    unit = {}
    for m in G.lattice.divisors:
        perm = perms.get(m, list(range(G.dim(m))))
        inv_mat = mats[m]
        table = []
        for i in perm:
            row = []
            for j in perm:
                row.append(inv_mat.apply(G.mult[m][i][j]))
            table.append(row)
        mult[m] = table
        unit[m] = inv_mat.apply(G.unit[m])
    embed = None
    if G.level_embed is not None:
        embed = {m: G.level_embed[m] @ _perm_cols(K, perms.get(
            m, list(range(G.dim(m)))), G.dim(m))
            for m in G.lattice.divisors}
    return GreenFunctor(mack, mult, unit, norms=None,
                        name=f"{G.name} (permuted)", level_embed=embed)


def _perm_cols(K, perm, n) -> Mat:
    cols = [tuple(K.one if t == old else K.zero for t in range(n))
            for old in perm]
    return Mat.from_cols(K, cols, n)


def corrupt_multiplication(G: GreenFunctor, seed: int = 0) -> GreenFunctor:
    """Negative control: perturb one structure constant at one level."""
    rng = random.Random(seed)
    levels = [m for m in G.lattice.divisors if G.dim(m)]
    m = levels[rng.randrange(len(levels))]
    dim = G.dim(m)
    i, j, k = (rng.randrange(dim) for _ in range(3))
    table = [[list(v) for v in row] for row in G.mult[m]]
    table[i][j][k] = table[i][j][k] + G.scalars.one
    table[j][i] = table[i][j]
    mult = dict(G.mult)
    mult[m] = [[tuple(v) for v in row] for row in table]
    return GreenFunctor(G.mackey, mult, G.unit, norms=G.norms,
                        name=f"{G.name}+corrupt", level_embed=G.level_embed)
