"""Multiplication-kernel ideals and Green étaleness verdicts.

For a relative box B = T □_K T the multiplication morphism sends pure
tensors to products and a class [z]_d^m to tr(mult(z)); its levelwise kernel
is the ideal I.  Green étaleness asks for I = I² at every level (then the
Kähler differentials I/I² vanish) together with a projectivity certificate.
Everything reduces to exact rank and membership computations; there are no
tolerances anywhere.

The classical (nonequivariant) étale oracle computes L ⊗_K L directly with
its separability idempotent, anchoring the equivariant verdicts at the free
level.  For Kummer extensions the kernel generators
q·(1 ⊗ α^{td}) − [α^{id} ⊗ α^{(t-i)d}]_d^m and their product/congruence
identities are verified wholesale by ``kummer_congruence_checks``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebras import FiniteAlgebra, tensor_algebra
from .boxes import BoxProduct, build_box
from .extensions import GaloisExtension
from .fields import Field
from .green import GreenFunctor, constant_functor
from .linalg import Mat, Span, kernel, solve_matrix, vec_is_zero, vec_scale, \
    vec_sub, vec_zero
from .mackey import InternalCheckError, MackeyMorphism, Violation


# ---------------------------------------------------------------------------
# the multiplication morphism


def mult_map(bx: BoxProduct, target: GreenFunctor = None) -> MackeyMorphism:
    """Multiplication morphism from a box of T with itself onto T.

    Pure tensors multiply; a class [z]_d^m maps to tr_{m<-d}(mult_d(z)).
    Descent to the quotient and compatibility with res/tr/weyl are asserted.
    """
    T = target or bx.left
    if bx.left is not T or bx.right is not T:
        raise ValueError("mult_map needs a box of T with itself")
    K = bx.scalars
    comps = {}
    for m in bx.lattice.divisors:
        cols_ambient = []
        for (d, i, j) in bx.gens[m]:
            prod = T.mult[d][i][j]
            cols_ambient.append(T.mackey.tr_mat(m, d).apply(prod))
        amb = Mat.from_cols(K, cols_ambient, T.dim(m))
        for r in bx.levels[m].relations:
            if not vec_is_zero(K, amb.apply(r)):
                raise InternalCheckError(
                    f"multiplication map does not kill relations at level {m}",
                    witness=(m, r, amb.apply(r)))
        cols = [amb.apply(bx.levels[m].expand(
            tuple(K.one if t == idx else K.zero for t in range(bx.dim(m)))))
            for idx in range(bx.dim(m))]
        comps[m] = Mat.from_cols(K, cols, T.dim(m))
    morphism = MackeyMorphism(bx.green.mackey, T.mackey, comps, name="mult")
    bad = morphism.check()
    if bad:
        raise InternalCheckError(
            "multiplication is not a Mackey morphism", witness=bad)
    return morphism


def unit_section_check(bx: BoxProduct, mm: MackeyMorphism) -> bool:
    """mult ∘ (x ↦ x·unit-tensor) must be the identity on T levelwise."""
    T = bx.left
    K = bx.scalars
    for m in bx.lattice.divisors:
        for i in range(T.dim(m)):
            out = [K.zero] * bx.amb_dim(m)
            for j, c in enumerate(T.unit[m]):
                out[bx.gen_index(m, m, i, j)] = c
            ei = tuple(K.one if t == i else K.zero for t in range(T.dim(m)))
            if mm.apply(m, bx.reduce(m, tuple(out))) != ei:
                return False
    return True


# ---------------------------------------------------------------------------
# ideal and square


@dataclass
class IdealData:
    carrier: BoxProduct
    ideal: dict            # m -> list of reduced basis vectors of I
    square: dict           # m -> list of reduced basis vectors of I^2
    quotient_dims: dict    # m -> dim I/I^2
    verdicts: dict         # m -> bool (I == I^2)

    @property
    def green_etale_levels(self) -> bool:
        return all(self.verdicts.values())


def ideal_and_square(bx: BoxProduct, mm: MackeyMorphism) -> IdealData:
    """Kernel of the multiplication map and the span of its pairwise
    products, per level, with containment asserted."""
    K = bx.scalars
    ideal, square, qdims, verdicts = {}, {}, {}, {}
    for m in bx.lattice.divisors:
        basis = kernel(mm.components[m])
        ideal[m] = basis
        span_i = Span(K, bx.dim(m), basis)
        span_sq = Span(K, bx.dim(m))
        for i in range(len(basis)):
            for j in range(i, len(basis)):
                prod = bx.green.multiply(m, basis[i], basis[j])
                if not span_i.contains(prod):
                    raise InternalCheckError(
                        f"I² is not contained in I at level {m}",
                        witness=(m, i, j, prod))
                span_sq.add(prod)
        square[m] = span_sq.basis()
        qdims[m] = span_i.dim - span_sq.dim
        verdicts[m] = span_i.dim == span_sq.dim
    return IdealData(bx, ideal, square, qdims, verdicts)


def green_kahler_dims(data: IdealData) -> dict:
    """dim I/I² per level; all zero means vanishing Green Kähler
    differentials."""
    return dict(data.quotient_dims)


def check_ideal(bx: BoxProduct, data: IdealData):
    """I must be a Mackey ideal: closed under ambient multiplication and
    mapped into itself by res and tr."""
    out = []
    K = bx.scalars
    for m in bx.lattice.divisors:
        span_i = Span(K, bx.dim(m), data.ideal[m])
        for u in data.ideal[m]:
            for i in range(bx.dim(m)):
                ei = tuple(K.one if t == i else K.zero
                           for t in range(bx.dim(m)))
                if not span_i.contains(bx.green.multiply(m, u, ei)):
                    out.append(Violation("ideal_multiplication",
                                         {"level": m}, ""))
    for (d, m) in bx.lattice.covering_pairs:
        span_d = Span(K, bx.dim(d), data.ideal[d])
        span_m = Span(K, bx.dim(m), data.ideal[m])
        res = bx.green.mackey.res[(d, m)]
        tr = bx.green.mackey.tr[(m, d)]
        for u in data.ideal[m]:
            if not span_d.contains(res.apply(u)):
                out.append(Violation("ideal_res", {"pair": (d, m)}, ""))
        for u in data.ideal[d]:
            if not span_m.contains(tr.apply(u)):
                out.append(Violation("ideal_tr", {"pair": (d, m)}, ""))
    return out


# ---------------------------------------------------------------------------
# classical étale oracle


@dataclass
class ClassicalEtaleReport:
    tensor_dim: int
    ideal_dim: int
    square_dim: int
    etale: bool
    separability_unit: tuple | None

    @property
    def has_separability_unit(self) -> bool:
        return self.separability_unit is not None


def classical_etale_oracle(E: GaloisExtension) -> ClassicalEtaleReport:
    """Brute-force étaleness of K ⊂ L: the kernel I of L ⊗_K L -> L must
    satisfy I = I² and contain an element acting as the identity on I."""
    return classical_etale_of_algebra(E.algebra)


def classical_etale_of_algebra(alg: FiniteAlgebra) -> ClassicalEtaleReport:
    K = alg.base
    tensor = tensor_algebra(alg, alg)
    n = alg.dim
    cols = []
    for i in range(n):
        for j in range(n):
            cols.append(alg.mul(alg.basis_vec(i), alg.basis_vec(j)))
    mult = Mat.from_cols(K, cols, n)
    ibasis = kernel(mult)
    span_i = Span(K, tensor.dim, ibasis)
    span_sq = Span(K, tensor.dim)
    for i in range(len(ibasis)):
        for j in range(i, len(ibasis)):
            span_sq.add(tensor.mul(ibasis[i], ibasis[j]))
    etale = span_i.dim == span_sq.dim

    # separability witness: e in I with e·u = u for every u in I
    unit = None
    if ibasis:
        eqs = []
        rhs = []
        for u in ibasis:
            prods = [tensor.mul(b, u) for b in ibasis]
            for coord in range(tensor.dim):
                eqs.append([p[coord] for p in prods])
                rhs.append(u[coord])
        sol = _solve_rows(K, eqs, rhs, len(ibasis))
        if sol is not None:
            unit = vec_zero(K, tensor.dim)
            for c, b in zip(sol, ibasis):
                unit = tuple(x + c * y for x, y in zip(unit, b))
    return ClassicalEtaleReport(tensor.dim, span_i.dim, span_sq.dim, etale,
                                unit)


def _solve_rows(K, eqs, rhs, nunknowns):
    mat = Mat(K, eqs, ncols=nunknowns)
    from .linalg import solve
    return solve(mat, tuple(rhs))


# ---------------------------------------------------------------------------
# Kummer kernel generators and their congruences


def ideal_generator(bx: BoxProduct, E: GaloisExtension, i: int, t: int,
                    d: int, m: int):
    """Reduced coordinates of q·(1 ⊗ α^{td}) − [α^{id} ⊗ α^{(t-i)d}]_d^m,
    where q = m/d; requires q | t and 0 <= i <= t.  Lies in the kernel of
    the multiplication map (asserted by callers)."""
    lat = bx.lattice
    lat.check_divisor(m)
    lat.check_divisor(d)
    if m % d:
        raise ValueError("the class origin d must divide the level m")
    q = m // d
    if t % q or not (0 <= i <= t):
        raise ValueError("need q | t and 0 <= i <= t")
    K = bx.scalars
    out = [K.zero] * bx.amb_dim(m)

    # pure part: q · (1 ⊗ α^{td}) at the top component
    pure = _alpha_tensor(bx, E, m, 0, t * d)
    for idx, c in pure:
        out[idx] = out[idx] + K.from_int(q) * c
    # class part: −[α^{id} ⊗ α^{(t−i)d}]_d^m
    cls = _alpha_tensor(bx, E, m, i * d, (t - i) * d, origin=d)
    for idx, c in cls:
        out[idx] = out[idx] - c
    return bx.reduce(m, tuple(out))


def _alpha_tensor(bx: BoxProduct, E: GaloisExtension, m, e1, e2, origin=None):
    """Sparse ambient coordinates of α^{e1} ⊗ α^{e2} at the given origin
    component (default: the pure component)."""
    d = origin if origin is not None else m
    emb = bx.left.level_embed[d]
    v1 = solve_matrix(emb, Mat.from_cols(E.base, [E.alpha_power(e1)],
                                         E.degree))
    v2 = solve_matrix(emb, Mat.from_cols(E.base, [E.alpha_power(e2)],
                                         E.degree))
    if v1 is None or v2 is None:
        raise ValueError(
            f"α^{e1} or α^{e2} does not lie in the level-{d} subfield")
    out = []
    c1, c2 = v1.col(0), v2.col(0)
    for i, a in enumerate(c1):
        if a == E.base.zero:
            continue
        for j, b in enumerate(c2):
            if b == E.base.zero:
                continue
            out.append((bx.gen_index(m, d, i, j), a * b))
    return out


@dataclass
class CongruenceReport:
    checks_run: int = 0
    failures: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, label: str):
        self.checks_run += 1
        self.labels.append(label)
        if not ok:
            self.failures.append(label)


def kummer_congruence_checks(bx: BoxProduct, E: GaloisExtension,
                             data: IdealData) -> CongruenceReport:
    """Verify the kernel-generator identities of a Kummer relative box.

    Per level m and origin d < m (q = m/d, writing x[i,t] for the generator
    with parameters i, t):

    * x[i,t] lies in I;
    * x[0,t] = 0 exactly; x[t,t] = q·(1⊗α^{td} − α^{td}⊗1) exactly, hence
      lies in the pure-part kernel and in I²;
    * x[i+n/d, t] = x[i,t] (when i+n/d <= t; the unit a picked up by the
      first slot cancels against the second) and x[i+n/d, t+n/d] = a·x[i,t];
    * x[i,t]·x[i',t'] = q·(x[i,t+t'] + x[i',t+t'] − x[i+i',t+t']), exactly;
    * x[i,t] ≡ x[i+q,t] and x[i,t] ≡ i·x[1,t] mod I²;
    * ma − [α ⊗ α^{n-1}]_1^m lies in I, kernel-of-restriction elements z
      satisfy z·(ma − [α ⊗ α^{n-1}]) = ma·z, and ker(res to the free level)
      is contained in I².
    """
    rep = CongruenceReport()
    K = bx.scalars
    n = E.degree
    a = E.a
    for m in bx.lattice.divisors:
        if m == 1:
            continue
        span_i = Span(K, bx.dim(m), data.ideal[m])
        span_sq = Span(K, bx.dim(m), data.square[m])

        # the auxiliary element w = ma − [α ⊗ α^{n−1}]_1^m
        out = [K.zero] * bx.amb_dim(m)
        for idx, c in _alpha_tensor(bx, E, m, 0, n):
            out[idx] = out[idx] + K.from_int(m) * c
        for idx, c in _alpha_tensor(bx, E, m, 1, n - 1, origin=1):
            out[idx] = out[idx] - c
        w = bx.reduce(m, tuple(out))
        rep.record(span_i.contains(w), f"level {m}: ma−[α⊗α^{n-1}] in I")

        # kernel of the restriction to the free level
        res_to_free = _composite_res(bx, m)
        for z in kernel(res_to_free):
            rep.record(span_i.contains(z),
                       f"level {m}: ker res ⊆ I")
            rep.record(span_sq.contains(z),
                       f"level {m}: ker res ⊆ I²")
            lhs = bx.green.multiply(m, z, w)
            rhs = vec_scale(K.from_int(m) * a, z)
            rep.record(lhs == rhs,
                       f"level {m}: z·(ma−[α⊗α^{n-1}]) = ma·z")

        for d in bx.lattice.divisors:
            if m % d or d == m:
                continue
            q = m // d
            tmax = 2 * (n // d)
            ts = [t for t in range(q, tmax + 1, q)]

            def x(i, t):
                return ideal_generator(bx, E, i, t, d, m)

            for t in ts:
                for i in range(0, t + 1):
                    rep.record(span_i.contains(x(i, t)),
                               f"level {m}, d={d}: x[{i},{t}] in I")
                rep.record(vec_is_zero(K, x(0, t)),
                           f"level {m}, d={d}: x[0,{t}] = 0")
                out = [K.zero] * bx.amb_dim(m)
                for idx, c in _alpha_tensor(bx, E, m, 0, t * d):
                    out[idx] = out[idx] + K.from_int(q) * c
                for idx, c in _alpha_tensor(bx, E, m, t * d, 0):
                    out[idx] = out[idx] - K.from_int(q) * c
                swap_comm = bx.reduce(m, tuple(out))
                rep.record(x(t, t) == swap_comm,
                           f"level {m}, d={d}: x[{t},{t}] = "
                           f"q·(1⊗α^td − α^td⊗1)")
                rep.record(span_sq.contains(x(t, t)),
                           f"level {m}, d={d}: x[{t},{t}] in I²")
                for i in range(0, t + 1):
                    if i + n // d <= t:
                        rep.record(
                            x(i + n // d, t) == x(i, t),
                            f"level {m}, d={d}: x[i+n/d,{t}] = x[{i},{t}]")
                    rep.record(
                        x(i + n // d, t + n // d) == vec_scale(a, x(i, t)),
                        f"level {m}, d={d}: shifted wraparound at ({i},{t})")
                for i in range(0, t + 1):
                    if i + q <= t:
                        rep.record(
                            span_sq.contains(vec_sub(x(i, t), x(i + q, t))),
                            f"level {m}, d={d}: x[{i},{t}] ≡ x[{i+q},{t}] "
                            f"mod I²")
                    rep.record(
                        span_sq.contains(vec_sub(
                            x(i, t), vec_scale(K.from_int(i), x(1, t)))),
                        f"level {m}, d={d}: x[{i},{t}] ≡ {i}·x[1,{t}] mod I²")

            # exact product rule, with its multiplicity q
            t1, t2 = q, q
            for i1 in range(0, t1 + 1):
                for i2 in range(0, t2 + 1):
                    lhs = bx.green.multiply(m, x(i1, t1), x(i2, t2))
                    rhs = vec_zero(K, bx.dim(m))
                    for sgn, xi in ((K.one, x(i1, t1 + t2)),
                                    (K.one, x(i2, t1 + t2)),
                                    (-K.one, x(i1 + i2, t1 + t2))):
                        rhs = tuple(r + sgn * K.from_int(q) * c
                                    for r, c in zip(rhs, xi))
                    rep.record(lhs == rhs,
                               f"level {m}, d={d}: product rule at "
                               f"({i1},{i2})")
    return rep


def _composite_res(bx: BoxProduct, m: int) -> Mat:
    chain = bx.lattice.chain_down(m, 1)
    out = Mat.identity(bx.scalars, bx.dim(m))
    for hi, lo in zip(chain, chain[1:]):
        out = bx.green.mackey.res[(lo, hi)] @ out
    return out


# ---------------------------------------------------------------------------
# constant-functor étale transfer


@dataclass
class ConstantEtaleReport:
    level_dims: dict
    tensor_dim: int
    box_matches_constant: bool
    ideal_dims: dict
    verdicts: dict
    classical: ClassicalEtaleReport

    @property
    def ok(self) -> bool:
        return self.box_matches_constant and all(self.verdicts.values()) \
            and self.classical.etale


def constant_etale_check(K: Field, L_alg: FiniteAlgebra, n: int
                         ) -> ConstantEtaleReport:
    """Étaleness of the constant functors K^c -> L^c over C_n.

    Builds L^c □_{K^c} L^c, matches it levelwise to (L ⊗_K L)^c, and checks
    I = I² at every level; the free-level verdict is anchored by the
    classical oracle."""
    from .modules import constant_box_iso   # local import; no cycle at runtime
    Lc = constant_functor(L_alg, n)
    lattice = Lc.lattice
    bx = build_box(Lc, Lc, relative=K, kind="relative",
                   name=f"{L_alg.name}^c□{L_alg.name}^c")
    tensor = tensor_algebra(L_alg, L_alg)
    iso = constant_box_iso(bx, tensor)
    mm = mult_map(bx)
    data = ideal_and_square(bx, mm)
    classical = classical_etale_of_algebra(L_alg)
    level_dims = {m: bx.dim(m) for m in lattice.divisors}
    ideal_dims = {m: len(data.ideal[m]) for m in lattice.divisors}
    matches = iso is not None and \
        all(level_dims[m] == tensor.dim for m in lattice.divisors) and \
        all(ideal_dims[m] == classical.ideal_dim for m in lattice.divisors)
    return ConstantEtaleReport(level_dims, tensor.dim, matches, ideal_dims,
                               dict(data.verdicts), classical)


# ---------------------------------------------------------------------------
# overall verdict


@dataclass
class EtaleVerdict:
    level_verdicts: dict
    kahler_dims: dict
    classical_ok: bool
    projectivity_kind: str
    projectivity_valid: bool

    @property
    def green_etale(self) -> bool:
        return all(self.level_verdicts.values()) and self.classical_ok \
            and self.projectivity_valid
