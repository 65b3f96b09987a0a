"""Box products of Green functors over C_n as presented quotient levels.

Level m of M □ N is generated, for each divisor d | m, by the basis tensors
of M(d) ⊗ N(d); the d = m component consists of pure tensors, the d < m
components of formal transfer classes [x ⊗ y]_d^m.  The relations are

* Weyl: the diagonal action of the generator of C_m/C_d fixes every class;
* Frobenius reciprocity: [tr(x) ⊗ y]_d = [x ⊗ res(y)]_{d'} and its mirror,
  for every pair d' | d | m.

Restriction of a class follows the double coset formula with multiplicity
c = m·gcd(d, m')/(d·m'); transfers relabel components one level up; the
Weyl generator acts diagonally.  Multiplication is componentwise on pure
tensors, pushes pure factors onto classes through restriction, and resolves
class·class through tr(u)·tr(v) = tr(u·res(tr v)).  Every structure map is
checked to descend to the quotient during construction.

Two independent oracles validate the construction: a closed-form two-level
build for prime group order, and a coequalizer of the threefold box along
the two base-action maps for relative boxes.
"""

from __future__ import annotations

import math

from .fields import Field
from .green import GreenFunctor, constant_functor
from .linalg import Mat, inverse, vec_add, vec_is_zero, vec_scale, vec_zero
from .mackey import InternalCheckError, MackeyFunctor
from .presented import PresentedLevel


class BoxProduct:
    """A fully reduced box product; ``green`` is its Green functor."""

    def __init__(self, left, right, lattice, scalars, relative, kind, name):
        self.left = left
        self.right = right
        self.lattice = lattice
        self.scalars = scalars
        self.relative = relative      # base field for a relative box, or None
        self.kind = kind
        self.name = name
        self.gens = {}                # m -> [(d, i, j)]
        self.offsets = {}             # m -> {d: column offset}
        self._amb_labels = {}         # m -> ambient generator labels
        self.levels = {}              # m -> PresentedLevel
        self.amb_res = {}             # (m', m) covering, m' | m
        self.amb_tr = {}              # (m', m) covering, m | m'
        self.amb_weyl = {}            # m
        self.green = None
        self._mult_cache = {}
        self._chain_cache = {}

    # -- ambient bookkeeping -------------------------------------------

    def amb_dim(self, m):
        return len(self.gens[m])

    def gen_index(self, m, d, i, j):
        return self.offsets[m][d] + i * self.right.dim(d) + j

    def gen_unit(self, m, idx):
        v = [self.scalars.zero] * self.amb_dim(m)
        v[idx] = self.scalars.one
        return tuple(v)

    def place(self, m, d, tensor_vec, out):
        """Add a component-d tensor vector into ambient accumulator ``out``."""
        off = self.offsets[m][d]
        for t, c in enumerate(tensor_vec):
            out[off + t] = out[off + t] + c
        return out

    def amb_res_chain(self, d, m) -> Mat:
        """Composite ambient restriction from level m down to level d."""
        key = ("res", d, m)
        if key not in self._chain_cache:
            chain = self.lattice.chain_down(m, d)
            out = Mat.identity(self.scalars, self.amb_dim(m))
            for hi, lo in zip(chain, chain[1:]):
                out = self.amb_res[(lo, hi)] @ out
            self._chain_cache[key] = out
        return self._chain_cache[key]

    def amb_tr_chain(self, m, d) -> Mat:
        """Composite ambient transfer (component relabeling) level d up to m."""
        key = ("tr", m, d)
        if key not in self._chain_cache:
            chain = self.lattice.chain_down(m, d)[::-1]
            out = Mat.identity(self.scalars, self.amb_dim(d))
            for lo, hi in zip(chain, chain[1:]):
                out = self.amb_tr[(hi, lo)] @ out
            self._chain_cache[key] = out
        return self._chain_cache[key]

    # -- multiplication --------------------------------------------------

    def mult_gens(self, m, ca, cb):
        """Product of two ambient generators of level m, as an ambient vector."""
        key = (m, ca, cb)
        if key in self._mult_cache:
            return self._mult_cache[key]
        K = self.scalars
        (d, i, j) = self.gens[m][ca]
        (e, i2, j2) = self.gens[m][cb]
        out = [K.zero] * self.amb_dim(m)
        if d == m and e == m:
            tensor = _tensor_vec(K, self.left.mult[m][i][i2],
                                 self.right.mult[m][j][j2])
            self.place(m, m, tensor, out)
        elif d == m:
            # pure · class: restrict the pure tensor to the class origin
            u1 = self.left.mackey.res_mat(e, m).col(i)
            u2 = self.right.mackey.res_mat(e, m).col(j)
            lvec = _expand_mult(self.left, e, u1, i2)
            rvec = _expand_mult(self.right, e, u2, j2)
            self.place(m, e, _tensor_vec(K, lvec, rvec), out)
        elif e == m:
            u1 = self.left.mackey.res_mat(d, m).col(i2)
            u2 = self.right.mackey.res_mat(d, m).col(j2)
            lvec = _expand_mult(self.left, d, u1, i)
            rvec = _expand_mult(self.right, d, u2, j)
            self.place(m, d, _tensor_vec(K, lvec, rvec), out)
        else:
            # class · class: tr(u)·tr(v) = tr(u · res(tr v))
            down = self.amb_res_chain(d, m).apply(self.gen_unit(m, cb))
            pure_idx = self.gen_index(d, d, i, j)
            prod_at_d = self.mult_vec(d, self.gen_unit(d, pure_idx), down)
            lifted = self.amb_tr_chain(m, d).apply(prod_at_d)
            out = [a + b for a, b in zip(out, lifted)]
        result = tuple(out)
        self._mult_cache[key] = result
        return result

    def mult_vec(self, m, va, vb):
        """Bilinear extension of mult_gens to ambient vectors."""
        K = self.scalars
        z = K.zero
        nza = [(ca, a) for ca, a in enumerate(va) if a != z]
        nzb = [(cb, b) for cb, b in enumerate(vb) if b != z]
        out = [z] * self.amb_dim(m)
        for ca, a in nza:
            for cb, b in nzb:
                c = a * b
                for t, p in self._mult_sparse(m, ca, cb):
                    out[t] = out[t] + c * p
        return tuple(out)

    def _mult_sparse(self, m, ca, cb):
        key = ("s", m, ca, cb)
        cached = self._mult_cache.get(key)
        if cached is None:
            z = self.scalars.zero
            dense = self.mult_gens(m, ca, cb)
            cached = tuple((t, p) for t, p in enumerate(dense) if p != z)
            self._mult_cache[key] = cached
        return cached

    def unit_ambient(self, m):
        K = self.scalars
        out = [K.zero] * self.amb_dim(m)
        tensor = _tensor_vec(K, self.left.unit[m], self.right.unit[m])
        return tuple(self.place(m, m, tensor, out))

    # -- reduced coordinates ----------------------------------------------

    def dim(self, m):
        return self.levels[m].dim

    def reduce(self, m, ambient_vec):
        return self.levels[m].reduce(ambient_vec)

    def expand(self, m, reduced_vec):
        return self.levels[m].expand(reduced_vec)

    def multiply_reduced(self, m, x, y):
        return self.green.multiply(m, x, y)

    def __repr__(self):
        dims = ", ".join(f"{m}:{self.dim(m)}" for m in self.lattice.divisors)
        return f"BoxProduct({self.name}; dims {dims})"


def _expand_mult(factor: GreenFunctor, level, coeffs, basis_idx):
    """Product (Σ coeffs_k · e_k) · e_basis at one level of one factor."""
    K = factor.scalars
    out = list(vec_zero(K, factor.dim(level)))
    for k, c in enumerate(coeffs):
        if c == K.zero:
            continue
        row = factor.mult[level][k][basis_idx]
        for t in range(len(out)):
            out[t] = out[t] + c * row[t]
    return tuple(out)


def _tensor_vec(K, u, v):
    out = []
    for a in u:
        for b in v:
            out.append(a * b)
    return tuple(out)


def _tensor_mat(K, A: Mat, B: Mat) -> Mat:
    cols = []
    for i in range(A.ncols):
        for j in range(B.ncols):
            cols.append(_tensor_vec(K, A.col(i), B.col(j)))
    return Mat.from_cols(K, cols, A.nrows * B.nrows)


def _class_label(lattice, m, d, text):
    proper = [t for t in lattice.divisors if m % t == 0 and t < m]
    suffix = f"_{d}" if len(proper) > 1 else ""
    return f"[{text}]{suffix}"


def _tensor_label(l, r):
    return f"{l}⊗{r}"


# ---------------------------------------------------------------------------
# construction


def build_box(left: GreenFunctor, right: GreenFunctor, *, relative=None,
              extra_relations=None, kind="box", name="", check=True
              ) -> BoxProduct:
    """Assemble a box product; see the module docstring for the relations.

    ``relative`` names the base field of a relative box (levels are already
    vector spaces over it); an absolute box requires prime or rational
    scalars so that the componentwise tensor agrees with the integral one.
    ``extra_relations`` (dict m -> rows) is quotiented in addition, which is
    how the coequalizer oracle reuses this machinery.
    """
    if left.scalars is not right.scalars:
        raise ValueError("box factors must share their scalar field")
    if left.lattice is not right.lattice:
        raise ValueError("box factors must share their subgroup lattice")
    K = left.scalars
    lattice = left.lattice
    if relative is None:
        if K.order is not None and K.order != K.characteristic:
            raise ValueError(
                "absolute box products need prime or rational scalars; "
                "use a relative box over the base field instead")
    elif relative is not K:
        raise ValueError("relative base must be the common scalar field")

    bx = BoxProduct(left, right, lattice, K, relative, kind,
                    name or f"{left.name}□{right.name}")
    n = lattice.n

    for m in lattice.divisors:
        divs = [d for d in lattice.divisors if m % d == 0]
        order = [m] + [d for d in sorted(divs) if d != m]
        gens, labels, origins = [], [], []
        offsets = {}
        for d in order:
            offsets[d] = len(gens)
            for i in range(left.dim(d)):
                for j in range(right.dim(d)):
                    gens.append((d, i, j))
                    origins.append(d)
                    text = _tensor_label(left.labels(d)[i],
                                         right.labels(d)[j])
                    labels.append(text if d == m
                                  else _class_label(lattice, m, d, text))
        bx.gens[m] = gens
        bx.offsets[m] = offsets
        bx._amb_labels[m] = labels

    # ambient Weyl action: diagonal on every component
    for m in lattice.divisors:
        blocks = {}
        for d in bx.offsets[m]:
            blocks[d] = _tensor_mat(K, left.mackey.weyl[d],
                                    right.mackey.weyl[d])
        bx.amb_weyl[m] = _assemble_blockwise(bx, m, m, blocks)

    # ambient transfers: component relabeling upward
    for (m, mp) in lattice.covering_pairs:
        cols = []
        for (d, i, j) in bx.gens[m]:
            v = [K.zero] * bx.amb_dim(mp)
            v[bx.gen_index(mp, d, i, j)] = K.one
            cols.append(tuple(v))
        bx.amb_tr[(mp, m)] = Mat.from_cols(K, cols, bx.amb_dim(mp))

    # ambient restrictions: double coset formula on classes
    for (mp, m) in lattice.covering_pairs:
        # per origin d: the summed Weyl-orbit map applied after res to gcd
        orbit_maps = {}
        for d in bx.offsets[m]:
            if d == m:
                continue
            g = math.gcd(d, mp)
            c = m * g // (d * mp)
            acc = None
            for jj in range(c):
                wmat = _tensor_mat(K, left.mackey.weyl_pow(g, jj * (n // m)),
                                   right.mackey.weyl_pow(g, jj * (n // m)))
                acc = wmat if acc is None else acc + wmat
            orbit_maps[d] = (g, acc @ _tensor_mat(
                K, left.mackey.res_mat(g, d), right.mackey.res_mat(g, d)))
        cols = []
        for (d, i, j) in bx.gens[m]:
            out = [K.zero] * bx.amb_dim(mp)
            if d == m:
                tensor = _tensor_vec(K, left.mackey.res[(mp, m)].col(i),
                                     right.mackey.res[(mp, m)].col(j))
                bx.place(mp, mp, tensor, out)
            else:
                g, omap = orbit_maps[d]
                bx.place(mp, g, omap.col(i * right.dim(d) + j), out)
            cols.append(tuple(out))
        bx.amb_res[(mp, m)] = Mat.from_cols(K, cols, bx.amb_dim(mp))

    # relations
    relations = {}
    for m in lattice.divisors:
        rows = []
        for d in bx.offsets[m]:
            if d == m:
                continue
            w = _tensor_mat(K, left.mackey.weyl_pow(d, n // m),
                            right.mackey.weyl_pow(d, n // m))
            for i in range(left.dim(d)):
                for j in range(right.dim(d)):
                    idx = bx.gen_index(m, d, i, j)
                    out = [K.zero] * bx.amb_dim(m)
                    bx.place(m, d, w.col(i * right.dim(d) + j), out)
                    out[idx] = out[idx] - K.one
                    rows.append(tuple(out))
        for d in bx.offsets[m]:
            for dp in bx.offsets[m]:
                if d % dp or dp >= d:
                    continue
                trl = left.mackey.tr_mat(d, dp)
                trr = right.mackey.tr_mat(d, dp)
                rsl = left.mackey.res_mat(dp, d)
                rsr = right.mackey.res_mat(dp, d)
                for i in range(left.dim(dp)):
                    for j in range(right.dim(d)):
                        out = [K.zero] * bx.amb_dim(m)
                        ej = tuple(K.one if t == j else K.zero
                                   for t in range(right.dim(d)))
                        bx.place(m, d, _tensor_vec(K, trl.col(i), ej), out)
                        ei = tuple(K.one if t == i else K.zero
                                   for t in range(left.dim(dp)))
                        neg = vec_scale(-K.one,
                                        _tensor_vec(K, ei, rsr.col(j)))
                        bx.place(m, dp, neg, out)
                        rows.append(tuple(out))
                for i in range(left.dim(d)):
                    for j in range(right.dim(dp)):
                        out = [K.zero] * bx.amb_dim(m)
                        ei = tuple(K.one if t == i else K.zero
                                   for t in range(left.dim(d)))
                        bx.place(m, d, _tensor_vec(K, ei, trr.col(j)), out)
                        ej = tuple(K.one if t == j else K.zero
                                   for t in range(right.dim(dp)))
                        neg = vec_scale(-K.one,
                                        _tensor_vec(K, rsl.col(i), ej))
                        bx.place(m, dp, neg, out)
                        rows.append(tuple(out))
        if extra_relations and m in extra_relations:
            rows.extend(tuple(r) for r in extra_relations[m])
        relations[m] = rows

    for m in lattice.divisors:
        bx.levels[m] = PresentedLevel(K, bx._amb_labels[m], relations[m],
                                      origins=[g[0] for g in bx.gens[m]])

    if check:
        _check_descent(bx)

    _induce_reduced_structure(bx)
    return bx


def _assemble_blockwise(bx, m_target, m_source, blocks) -> Mat:
    """Block-diagonal ambient map from per-component maps (same components)."""
    K = bx.scalars
    cols = []
    for (d, i, j) in bx.gens[m_source]:
        out = [K.zero] * bx.amb_dim(m_target)
        col = blocks[d].col(i * bx.right.dim(d) + j)
        bx.place(m_target, d, col, out)
        cols.append(tuple(out))
    return Mat.from_cols(K, cols, bx.amb_dim(m_target))


def _check_descent(bx: BoxProduct) -> None:
    """Every structure map must send relations into relations."""
    for m in bx.lattice.divisors:
        lvl = bx.levels[m]
        for r in lvl.relations:
            img = bx.amb_weyl[m].apply(r)
            if not lvl.in_relation_span(img):
                raise InternalCheckError(
                    f"Weyl action fails to descend at level {m}",
                    witness=(m, r, img))
        for (mp, mm) in bx.lattice.covering_pairs:
            if mm != m:
                continue
            for r in lvl.relations:
                img = bx.amb_res[(mp, m)].apply(r)
                if not bx.levels[mp].in_relation_span(img):
                    raise InternalCheckError(
                        f"restriction {m}->{mp} fails to descend",
                        witness=(m, mp, r, img))
        for (low, high) in bx.lattice.covering_pairs:
            if low != m:
                continue
            for r in lvl.relations:
                img = bx.amb_tr[(high, m)].apply(r)
                if not bx.levels[high].in_relation_span(img):
                    raise InternalCheckError(
                        f"transfer {m}->{high} fails to descend",
                        witness=(m, high, r, img))
        for r in lvl.relations:
            for idx in range(bx.amb_dim(m)):
                e = bx.gen_unit(m, idx)
                if not lvl.in_relation_span(bx.mult_vec(m, r, e)):
                    raise InternalCheckError(
                        f"multiplication fails to descend at level {m}",
                        witness=(m, r, idx, "left"))
                if not lvl.in_relation_span(bx.mult_vec(m, e, r)):
                    raise InternalCheckError(
                        f"multiplication fails to descend at level {m}",
                        witness=(m, r, idx, "right"))


def _induce_reduced_structure(bx: BoxProduct) -> None:
    K = bx.scalars
    lattice = bx.lattice
    labels = {m: bx.levels[m].reduced_labels for m in lattice.divisors}

    def reduced_map(amb_mat, m_from, m_to):
        cols = []
        for f in bx.levels[m_from].free:
            img = amb_mat.apply(bx.gen_unit(m_from, f))
            cols.append(bx.reduce(m_to, img))
        return Mat.from_cols(K, cols, bx.dim(m_to))

    res = {(mp, m): reduced_map(bx.amb_res[(mp, m)], m, mp)
           for (mp, m) in lattice.covering_pairs}
    tr = {(mp, m): reduced_map(bx.amb_tr[(mp, m)], m, mp)
          for (m, mp) in [(a, b) for (a, b) in lattice.covering_pairs]}
    weyl = {m: reduced_map(bx.amb_weyl[m], m, m) for m in lattice.divisors}
    mack = MackeyFunctor(K, lattice, labels, res, tr, weyl, name=bx.name)

    mult = {}
    for m in lattice.divisors:
        free = bx.levels[m].free
        table = []
        for fi in free:
            row = []
            for fj in free:
                row.append(bx.reduce(m, bx.mult_gens(m, fi, fj)))
            table.append(row)
        mult[m] = table
    unit = {m: bx.reduce(m, bx.unit_ambient(m)) for m in lattice.divisors}
    bx.green = GreenFunctor(mack, mult, unit, name=bx.name)


def box(M: GreenFunctor, N: GreenFunctor, name: str = "",
        check: bool = True) -> BoxProduct:
    """Absolute box product M □ N (prime or rational scalars)."""
    return build_box(M, N, kind="box", name=name, check=check)


def box3(M: GreenFunctor, R: GreenFunctor, N: GreenFunctor,
         name: str = "", check: bool = True) -> BoxProduct:
    """Threefold box product computed as (M □ R) □ N."""
    inner = build_box(M, R, kind="box", name=f"{M.name}□{R.name}",
                      check=check)
    return build_box(inner.green, N, kind="box3",
                     name=name or f"({M.name}□{R.name})□{N.name}",
                     check=check)


def relative_box(T: GreenFunctor, base, name: str = "",
                 check: bool = True) -> BoxProduct:
    """Relative box product T □_base T with components tensored over the
    base field (which must be the scalar field of T)."""
    base_field = base.scalars if isinstance(base, GreenFunctor) else base
    if not isinstance(base_field, Field):
        raise ValueError("base must be a field or a constant Green functor")
    if base_field is not T.scalars:
        raise ValueError("the base must equal the scalar field of T")
    return build_box(T, T, relative=base_field, kind="relative",
                     name=name or f"{T.name}□_{base_field}{T.name}",
                     check=check)


# ---------------------------------------------------------------------------
# oracle 1: closed form for prime group order


def prime_box_oracle(M: GreenFunctor, N: GreenFunctor, p: int,
                     name: str = "") -> BoxProduct:
    """Independent two-level construction of M □ N for C_p, p prime.

    Level 1 is M(1) ⊗ N(1); level p is the pure part M(p) ⊗ N(p) plus one
    class per level-1 tensor, modulo the diagonal Weyl action and the two
    Frobenius identities.  Nothing here reuses the general builder.
    """
    lattice = M.lattice
    if lattice.n != p or len(lattice.divisors) != 2:
        raise ValueError("the closed form applies to prime group order only")
    K = M.scalars
    bx = BoxProduct(M, N, lattice, K, None, "prime_oracle",
                    name or f"oracle({M.name}□{N.name})")

    for m in (1, p):
        gens, labels = [], []
        offsets = {m: 0}
        for i in range(M.dim(m)):
            for j in range(N.dim(m)):
                gens.append((m, i, j))
                labels.append(_tensor_label(M.labels(m)[i], N.labels(m)[j]))
        if m == p:
            offsets[1] = len(gens)
            for i in range(M.dim(1)):
                for j in range(N.dim(1)):
                    gens.append((1, i, j))
                    labels.append(_class_label(
                        lattice, p, 1,
                        _tensor_label(M.labels(1)[i], N.labels(1)[j])))
        bx.gens[m] = gens
        bx.offsets[m] = offsets
        bx._amb_labels[m] = labels

    tau = _tensor_mat(K, M.mackey.weyl[1], N.mackey.weyl[1])
    dim1 = M.dim(1) * N.dim(1)
    rows = []
    for t in range(dim1):
        out = [K.zero] * bx.amb_dim(p)
        col = tau.col(t)
        for s in range(dim1):
            out[bx.offsets[p][1] + s] = col[s]
        out[bx.offsets[p][1] + t] = out[bx.offsets[p][1] + t] - K.one
        rows.append(tuple(out))
    trM, trN = M.mackey.tr[(p, 1)], N.mackey.tr[(p, 1)]
    rsM, rsN = M.mackey.res[(1, p)], N.mackey.res[(1, p)]
    for i in range(M.dim(1)):
        for j in range(N.dim(p)):
            out = [K.zero] * bx.amb_dim(p)
            ej = tuple(K.one if t == j else K.zero for t in range(N.dim(p)))
            for t, c in enumerate(_tensor_vec(K, trM.col(i), ej)):
                out[t] = out[t] + c
            ei = tuple(K.one if t == i else K.zero for t in range(M.dim(1)))
            for s, c in enumerate(_tensor_vec(K, ei, rsN.col(j))):
                out[bx.offsets[p][1] + s] = out[bx.offsets[p][1] + s] - c
            rows.append(tuple(out))
    for i in range(M.dim(p)):
        for j in range(N.dim(1)):
            out = [K.zero] * bx.amb_dim(p)
            ei = tuple(K.one if t == i else K.zero for t in range(M.dim(p)))
            for t, c in enumerate(_tensor_vec(K, ei, trN.col(j))):
                out[t] = out[t] + c
            ej = tuple(K.one if t == j else K.zero for t in range(N.dim(1)))
            for s, c in enumerate(_tensor_vec(K, rsM.col(i), ej)):
                out[bx.offsets[p][1] + s] = out[bx.offsets[p][1] + s] - c
            rows.append(tuple(out))

    bx.levels[1] = PresentedLevel(K, bx._amb_labels[1], [],
                                  origins=[1] * bx.amb_dim(1))
    bx.levels[p] = PresentedLevel(K, bx._amb_labels[p], rows,
                                  origins=[g[0] for g in bx.gens[p]])

    # level-1 structure: pure tensors only
    bx.amb_weyl[1] = tau
    bx.amb_weyl[p] = _prime_oracle_weyl_top(bx, M, N, p)
    # tr: classes are tagged copies of level-1 tensors
    cols = []
    for t in range(dim1):
        v = [K.zero] * bx.amb_dim(p)
        v[bx.offsets[p][1] + t] = K.one
        cols.append(tuple(v))
    bx.amb_tr[(p, 1)] = Mat.from_cols(K, cols, bx.amb_dim(p))
    # res: res⊗res on the pure part, Weyl orbit sum on classes
    orbit_sum = Mat.identity(K, dim1)
    power = Mat.identity(K, dim1)
    for _ in range(p - 1):
        power = tau @ power
        orbit_sum = orbit_sum + power
    cols = []
    for (d, i, j) in bx.gens[p]:
        if d == p:
            cols.append(_tensor_vec(K, rsM.col(i), rsN.col(j)))
        else:
            cols.append(orbit_sum.col(i * N.dim(1) + j))
    bx.amb_res[(1, p)] = Mat.from_cols(K, cols, dim1)

    _attach_prime_oracle_mult(bx, M, N, p)
    _check_descent(bx)
    _induce_reduced_structure(bx)
    return bx


def _prime_oracle_weyl_top(bx, M, N, p):
    K = bx.scalars
    pure = _tensor_mat(K, M.mackey.weyl[p], N.mackey.weyl[p])
    tau = _tensor_mat(K, M.mackey.weyl[1], N.mackey.weyl[1])
    cols = []
    for (d, i, j) in bx.gens[p]:
        out = [K.zero] * bx.amb_dim(p)
        if d == p:
            col = pure.col(i * N.dim(p) + j)
            for t, c in enumerate(col):
                out[t] = c
        else:
            col = tau.col(i * N.dim(1) + j)
            for s, c in enumerate(col):
                out[bx.offsets[p][1] + s] = c
        cols.append(tuple(out))
    return Mat.from_cols(K, cols, bx.amb_dim(p))


def _attach_prime_oracle_mult(bx, M, N, p):
    """Closed-form multiplication; installs mult_gens via the cache."""
    K = bx.scalars
    tau = _tensor_mat(K, M.mackey.weyl[1], N.mackey.weyl[1])
    dim1 = M.dim(1) * N.dim(1)

    def level1_mult(t1, t2):
        i, j = divmod(t1, N.dim(1))
        i2, j2 = divmod(t2, N.dim(1))
        return _tensor_vec(K, M.mult[1][i][i2], N.mult[1][j][j2])

    for t1 in range(dim1):
        for t2 in range(dim1):
            bx._mult_cache[(1, t1, t2)] = level1_mult(t1, t2)

    orbit_sum = Mat.identity(K, dim1)
    power = Mat.identity(K, dim1)
    for _ in range(p - 1):
        power = tau @ power
        orbit_sum = orbit_sum + power

    off = bx.offsets[p][1]
    for ca, (d, i, j) in enumerate(bx.gens[p]):
        for cb, (e, i2, j2) in enumerate(bx.gens[p]):
            out = [K.zero] * bx.amb_dim(p)
            if d == p and e == p:
                tensor = _tensor_vec(K, M.mult[p][i][i2], N.mult[p][j][j2])
                for t, c in enumerate(tensor):
                    out[t] = c
            elif d == p:
                u = _tensor_vec(K, M.mackey.res[(1, p)].col(i),
                                N.mackey.res[(1, p)].col(j))
                prod = _level1_bilinear(bx, u, _unit_vec(K, dim1,
                                                         i2 * N.dim(1) + j2))
                for s, c in enumerate(prod):
                    out[off + s] = c
            elif e == p:
                u = _tensor_vec(K, M.mackey.res[(1, p)].col(i2),
                                N.mackey.res[(1, p)].col(j2))
                prod = _level1_bilinear(bx, _unit_vec(K, dim1,
                                                      i * N.dim(1) + j), u)
                for s, c in enumerate(prod):
                    out[off + s] = c
            else:
                orbit = orbit_sum.col(i2 * N.dim(1) + j2)
                prod = _level1_bilinear(
                    bx, _unit_vec(K, dim1, i * N.dim(1) + j), orbit)
                for s, c in enumerate(prod):
                    out[off + s] = c
            bx._mult_cache[(p, ca, cb)] = tuple(out)


def _unit_vec(K, n, idx):
    v = [K.zero] * n
    v[idx] = K.one
    return tuple(v)


def _level1_bilinear(bx, u, v):
    K = bx.scalars
    z = K.zero
    dim1 = len(u)
    out = [z] * dim1
    nzu = [(t, a) for t, a in enumerate(u) if a != z]
    nzv = [(t, b) for t, b in enumerate(v) if b != z]
    for t1, a in nzu:
        for t2, b in nzv:
            c = a * b
            for s, p in bx._mult_sparse(1, t1, t2):
                out[s] = out[s] + c * p
    return tuple(out)


# ---------------------------------------------------------------------------
# oracle 2: coequalizer of the threefold box along the two base actions


def coequalizer_oracle(T: GreenFunctor, base, name: str = "",
                       check: bool = True) -> BoxProduct:
    """Relative box as the coequalizer of T □ base^c □ T ⇉ T □ T.

    The two maps multiply the middle constant factor into the left or the
    right tensor factor; the quotient of T □ T by the image of their
    difference must agree with the direct relative construction whenever the
    base is a prime field or Q.
    """
    base_field = base.scalars if isinstance(base, GreenFunctor) else base
    if base_field is not T.scalars:
        raise ValueError("the base must equal the scalar field of T")
    Kc = base if isinstance(base, GreenFunctor) \
        else constant_functor(base_field, T.lattice)
    inner = build_box(T, Kc, kind="box", check=check)
    b3 = build_box(inner.green, T, kind="box3", check=check)
    b2 = build_box(T, T, kind="box", check=check)
    K = T.scalars

    def act_left(m, d, wi, yj):
        """Middle factor into the left: [x⊗k]_e^d ⊗ y ↦ tr(kx) ⊗ y."""
        (e, i, _) = inner.gens[d][inner.levels[d].free[wi]]
        out = [K.zero] * b2.amb_dim(m)
        if e == d:
            out[b2.gen_index(m, d, i, yj)] = K.one
        else:
            for k_idx, c in enumerate(T.mackey.tr_mat(d, e).col(i)):
                out[b2.gen_index(m, d, k_idx, yj)] = \
                    out[b2.gen_index(m, d, k_idx, yj)] + c
        return tuple(out)

    def act_right(m, d, wi, yj):
        """Middle factor into the right, rewriting the inner class through
        Frobenius reciprocity first: [x⊗k]_e^d ⊗ y ≡ [x⊗k ⊗ res(y)]_e."""
        (e, i, _) = inner.gens[d][inner.levels[d].free[wi]]
        out = [K.zero] * b2.amb_dim(m)
        if e == d:
            out[b2.gen_index(m, d, i, yj)] = K.one
        else:
            for k_idx, c in enumerate(T.mackey.res_mat(e, d).col(yj)):
                out[b2.gen_index(m, e, i, k_idx)] = \
                    out[b2.gen_index(m, e, i, k_idx)] + c
        return tuple(out)

    extra = {}
    for m in T.lattice.divisors:
        rows = []
        maps_l, maps_r = [], []
        for (d, wi, yj) in b3.gens[m]:
            l_img = act_left(m, d, wi, yj)
            r_img = act_right(m, d, wi, yj)
            maps_l.append(l_img)
            maps_r.append(r_img)
            diff = tuple(a - b for a, b in zip(l_img, r_img))
            if not vec_is_zero(K, diff):
                rows.append(diff)
        if check:
            ml = Mat.from_cols(K, maps_l, b2.amb_dim(m))
            mr = Mat.from_cols(K, maps_r, b2.amb_dim(m))
            for r in b3.levels[m].relations:
                for mat, side in ((ml, "left"), (mr, "right")):
                    if not b2.levels[m].in_relation_span(mat.apply(r)):
                        raise InternalCheckError(
                            f"coequalizer action map ({side}) fails to "
                            f"descend at level {m}", witness=(m, r))
        extra[m] = rows

    return build_box(T, T, relative=None, extra_relations=extra,
                     kind="coequalizer",
                     name=name or f"coeq({T.name}□{T.name})", check=check)


# ---------------------------------------------------------------------------
# comparison and the C_2 norm


def compare_boxes(b1: BoxProduct, b2: BoxProduct, gen_map=None):
    """Structural comparison; returns a list of discrepancies (empty = same).

    With the default identity ``gen_map`` this demands equal generator
    labels, equal relation spans, and equal reduced structure; a permutation
    gen_map (e.g. the factor swap) compares up to relabeling.
    """
    diffs = []
    lat = b1.lattice
    if lat.n != b2.lattice.n:
        return ["different group orders"]
    perms = {}
    for m in lat.divisors:
        if b1.amb_dim(m) != b2.amb_dim(m):
            diffs.append(f"level {m}: ambient dimensions differ")
            continue
        if gen_map is None:
            if b1._amb_labels[m] != b2._amb_labels[m]:
                diffs.append(f"level {m}: generator labels differ")
            perm = Mat.identity(b1.scalars, b1.amb_dim(m))
        else:
            cols = []
            for g in b1.gens[m]:
                target = gen_map(m, g)
                cols.append(b2.gen_unit(m, b2.gens[m].index(target)))
            perm = Mat.from_cols(b1.scalars, cols, b2.amb_dim(m))
        perms[m] = perm
        for r in b1.levels[m].relations:
            if not b2.levels[m].in_relation_span(perm.apply(r)):
                diffs.append(f"level {m}: relation span differs (1 vs 2)")
                break
        for r in b2.levels[m].relations:
            back = perm.transpose().apply(r)  # permutation: transpose inverts
            if not b1.levels[m].in_relation_span(back):
                diffs.append(f"level {m}: relation span differs (2 vs 1)")
                break
        if b1.dim(m) != b2.dim(m):
            diffs.append(f"level {m}: reduced dimensions differ "
                         f"({b1.dim(m)} vs {b2.dim(m)})")
    if diffs:
        return diffs

    def transported(m):
        """Reduced b1 basis written in reduced b2 coordinates."""
        cols = []
        for f in b1.levels[m].free:
            cols.append(b2.reduce(m, perms[m].apply(b1.gen_unit(m, f))))
        return Mat.from_cols(b1.scalars, cols, b2.dim(m))

    phi = {m: transported(m) for m in lat.divisors}
    for m in lat.divisors:
        if inverse(phi[m]) is None:
            diffs.append(f"level {m}: transported basis is not invertible")
    if diffs:
        return diffs
    for (d, m) in lat.covering_pairs:
        if phi[d] @ b1.green.mackey.res[(d, m)] != \
                b2.green.mackey.res[(d, m)] @ phi[m]:
            diffs.append(f"restriction differs on covering pair {(d, m)}")
        if phi[m] @ b1.green.mackey.tr[(m, d)] != \
                b2.green.mackey.tr[(m, d)] @ phi[d]:
            diffs.append(f"transfer differs on covering pair {(d, m)}")
    for m in lat.divisors:
        if phi[m] @ b1.green.mackey.weyl[m] != \
                b2.green.mackey.weyl[m] @ phi[m]:
            diffs.append(f"Weyl action differs at level {m}")
        for i in range(b1.dim(m)):
            ei = _unit_vec(b1.scalars, b1.dim(m), i)
            for j in range(b1.dim(m)):
                ej = _unit_vec(b1.scalars, b1.dim(m), j)
                lhs = phi[m].apply(b1.green.mult[m][i][j])
                rhs = b2.green.multiply(m, phi[m].apply(ei), phi[m].apply(ej))
                if lhs != rhs:
                    diffs.append(f"multiplication differs at level {m}")
                    break
            else:
                continue
            break
        if phi[m].apply(b1.green.unit[m]) != b2.green.unit[m]:
            diffs.append(f"unit differs at level {m}")
    return diffs


def swap_isomorphic(bMN: BoxProduct, bNM: BoxProduct):
    """Discrepancies of M□N against N□M under the factor swap."""
    return compare_boxes(bMN, bNM,
                         gen_map=lambda m, g: (g[0], g[2], g[1]))


def norm_on_c2_box(bx: BoxProduct, vec, term_order=None):
    """Tambara norm from the underlying to the fixed level of a C_2 box.

    Expands ``vec`` (reduced level-1 coordinates) into pure-tensor summands
    and folds the sum rule norm(x+y) = norm(x) + norm(y) + tr(x·τy); pure
    tensors take the componentwise norms of the factors.  The result is
    independent of the expansion order, which callers may vary via
    ``term_order`` (a permutation of the nonzero-term positions).
    """
    if bx.lattice.n != 2:
        raise ValueError("the norm expansion is implemented for C_2 only")
    if bx.left.norms is None or bx.right.norms is None:
        raise ValueError("both factors must carry norm rules")
    K = bx.scalars
    ambient = bx.expand(1, vec)
    terms = [(idx, c) for idx, c in enumerate(ambient) if c != K.zero]
    if term_order is not None:
        terms = [terms[t] for t in term_order]

    def norm_single(idx, c):
        (d, i, j) = bx.gens[1][idx]
        lv = [K.zero] * bx.left.dim(1)
        lv[i] = c
        nl = bx.left.norm(2, 1, tuple(lv))
        ev = [K.zero] * bx.right.dim(1)
        ev[j] = K.one
        nr = bx.right.norm(2, 1, tuple(ev))
        out = [K.zero] * bx.amb_dim(2)
        bx.place(2, 2, _tensor_vec(K, nl, nr), out)
        return tuple(out)

    def fold(items):
        if not items:
            return vec_zero(K, bx.amb_dim(2))
        if len(items) == 1:
            return norm_single(*items[0])
        head, rest = items[0], items[1:]
        v1 = [K.zero] * bx.amb_dim(1)
        v1[head[0]] = head[1]
        vr = [K.zero] * bx.amb_dim(1)
        for idx, c in rest:
            vr[idx] = c
        cross = bx.mult_vec(1, tuple(v1),
                            bx.amb_weyl[1].apply(tuple(vr)))
        return vec_add(vec_add(norm_single(*head), fold(rest)),
                       bx.amb_tr[(2, 1)].apply(cross))

    return bx.reduce(2, fold(terms))
