"""C_n-Mackey functors with finite-dimensional levels over an exact field.

A functor assigns to each divisor m | n a level M(C_n/C_m) with a named
basis, restriction/transfer matrices on covering pairs (d, m) with m/d
prime, and the action of the generator of the Weyl group C_n/C_m.  Indexing
convention: C_m is the subgroup of order m generated by σ^(n/m); level 1 is
the free (underlying) level and level n the fixed level.

Structure maps are stored on covering pairs only and composed on demand, so
transitivity is a checked invariant instead of redundant data.  check_axioms
exhaustively verifies Weyl order, equivariance, chain independence, and the
double coset formula, returning violations as data (never raising).

random_mackey builds axiom-true functors by construction: direct sums of
fixed-point functors of permutation modules K[C_n/C_e], with seeded
invertible base changes applied levelwise.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass

from .fields import Field
from .linalg import Mat, inverse, kernel, solve_matrix


class InternalCheckError(AssertionError):
    """A construction-time consistency assertion failed; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# subgroup lattice of C_n


class SubgroupLattice:
    """Divisor lattice of n: levels, covering pairs, canonical chains."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("group order must be positive")
        self.n = n
        self.divisors = [d for d in range(1, n + 1) if n % d == 0]
        self.covering_pairs = [(d, m) for m in self.divisors
                               for d in self.divisors
                               if m % d == 0 and _is_prime(m // d)]

    def check_divisor(self, m: int) -> None:
        if m not in self.divisors:
            raise ValueError(f"{m} is not a divisor of {self.n}")

    def chain_down(self, m: int, d: int):
        """Canonical covering chain m = c_0 > c_1 > ... > c_k = d,
        dividing by the smallest prime factor at each step."""
        self.check_divisor(m)
        self.check_divisor(d)
        if m % d != 0:
            raise ValueError(f"levels {d} and {m} are not comparable")
        chain = [m]
        cur = m
        while cur != d:
            p = _smallest_prime_factor(cur // d)
            cur //= p
            chain.append(cur)
        return chain

    def all_chains_down(self, m: int, d: int):
        """Every covering chain from m down to d."""
        if m == d:
            return [[m]]
        chains = []
        for (dd, mm) in self.covering_pairs:
            if mm == m and dd % d == 0:
                for tail in self.all_chains_down(dd, d):
                    chains.append([m] + tail)
        return chains

    def __repr__(self):
        return f"SubgroupLattice(C_{self.n})"


def _is_prime(r: int) -> bool:
    return r > 1 and all(r % q for q in range(2, int(r ** 0.5) + 1))


def _smallest_prime_factor(r: int) -> int:
    for q in range(2, r + 1):
        if r % q == 0:
            return q
    raise ValueError("no prime factor of 1")


@functools.lru_cache(maxsize=None)
def subgroup_lattice(n: int) -> SubgroupLattice:
    return SubgroupLattice(n)


# ---------------------------------------------------------------------------
# Mackey functors


class MackeyFunctor:
    """Levels, restrictions, transfers, and Weyl generator actions.

    Args:
        scalars: field of coefficients shared by every level.
        lattice: subgroup lattice of C_n.
        labels: dict m -> list of basis label strings.
        res: dict (d, m) -> Mat for covering pairs, level m -> level d.
        tr: dict (m, d) -> Mat for covering pairs, level d -> level m.
        weyl: dict m -> Mat, action of the generator (image of σ) of C_n/C_m.
    """

    def __init__(self, scalars: Field, lattice: SubgroupLattice, labels,
                 res, tr, weyl, name: str = ""):
        self.scalars = scalars
        self.lattice = lattice
        self.labels = {m: list(v) for m, v in labels.items()}
        self.res = dict(res)
        self.tr = dict(tr)
        self.weyl = dict(weyl)
        self.name = name
        self._cache = {}
        for m in lattice.divisors:
            if m not in self.labels:
                raise ValueError(f"missing level {m}")

    def dim(self, m: int) -> int:
        return len(self.labels[m])

    def res_mat(self, d: int, m: int) -> Mat:
        """Restriction level m -> level d (d | m), composed along the
        canonical covering chain."""
        key = ("res", d, m)
        if key not in self._cache:
            chain = self.lattice.chain_down(m, d)
            out = Mat.identity(self.scalars, self.dim(m))
            for hi, lo in zip(chain, chain[1:]):
                out = self.res[(lo, hi)] @ out
            self._cache[key] = out
        return self._cache[key]

    def tr_mat(self, m: int, d: int) -> Mat:
        """Transfer level d -> level m (d | m) along the canonical chain."""
        key = ("tr", m, d)
        if key not in self._cache:
            chain = self.lattice.chain_down(m, d)[::-1]
            out = Mat.identity(self.scalars, self.dim(d))
            for lo, hi in zip(chain, chain[1:]):
                out = self.tr[(hi, lo)] @ out
            self._cache[key] = out
        return self._cache[key]

    def weyl_pow(self, m: int, k: int) -> Mat:
        order = self.lattice.n // m
        k = k % order if order else 0
        key = ("weyl", m, k)
        if key not in self._cache:
            self._cache[key] = self.weyl[m].power(k)
        return self._cache[key]

    def __repr__(self):
        dims = ", ".join(f"{m}:{self.dim(m)}" for m in self.lattice.divisors)
        return f"MackeyFunctor({self.name or 'unnamed'}; dims {dims})"


def compose_structure(M: MackeyFunctor, kind: str, frm: int, to: int) -> Mat:
    """Composite structure map between arbitrary comparable levels.

    kind="res" requires to | frm (restriction goes down); kind="tr" requires
    frm | to (transfer goes up).  Chain independence is asserted.
    """
    lat = M.lattice
    if kind == "res":
        lat.check_divisor(frm)
        lat.check_divisor(to)
        if frm % to != 0:
            raise ValueError(f"cannot restrict from level {frm} to {to}")
        mats = [_compose_chain(M, "res", chain)
                for chain in lat.all_chains_down(frm, to)]
    elif kind == "tr":
        lat.check_divisor(frm)
        lat.check_divisor(to)
        if to % frm != 0:
            raise ValueError(f"cannot transfer from level {frm} to {to}")
        mats = [_compose_chain(M, "tr", chain)
                for chain in lat.all_chains_down(to, frm)]
    else:
        raise ValueError(f"unknown structure kind {kind!r}")
    for other in mats[1:]:
        if other != mats[0]:
            raise InternalCheckError(
                f"{kind} from {frm} to {to} depends on the covering chain",
                witness=(mats[0], other))
    return mats[0]


def _compose_chain(M: MackeyFunctor, kind: str, chain_down):
    if kind == "res":
        out = Mat.identity(M.scalars, M.dim(chain_down[0]))
        for hi, lo in zip(chain_down, chain_down[1:]):
            out = M.res[(lo, hi)] @ out
        return out
    out = Mat.identity(M.scalars, M.dim(chain_down[-1]))
    up = chain_down[::-1]
    for lo, hi in zip(up, up[1:]):
        out = M.tr[(hi, lo)] @ out
    return out


@dataclass
class Violation:
    rule: str
    where: dict
    detail: str = ""

    def __str__(self):
        loc = ", ".join(f"{k}={v}" for k, v in self.where.items())
        return f"{self.rule} [{loc}] {self.detail}"


def check_axioms(M: MackeyFunctor):
    """Exhaustively check the Mackey axioms; failures are data, not errors."""
    out = []
    lat = M.lattice
    n = lat.n
    K = M.scalars

    for m in lat.divisors:
        ident = Mat.identity(K, M.dim(m))
        if M.weyl[m].power(n // m) != ident:
            out.append(Violation("weyl_order", {"level": m},
                                 f"weyl^({n // m}) is not the identity"))
        if m == n and M.weyl[m] != ident:
            out.append(Violation("weyl_top_level", {"level": m},
                                 "Weyl action at the fixed level must be trivial"))

    for (d, m) in lat.covering_pairs:
        res, tr = M.res[(d, m)], M.tr[(m, d)]
        if M.weyl[d] @ res != res @ M.weyl[m]:
            out.append(Violation("res_equivariance", {"pair": (d, m)}, ""))
        if tr @ M.weyl[d] != M.weyl[m] @ tr:
            out.append(Violation("tr_equivariance", {"pair": (d, m)}, ""))

    # chain independence of composites
    for m in lat.divisors:
        for d in lat.divisors:
            if m % d == 0 and d < m:
                chains = lat.all_chains_down(m, d)
                rs = [_compose_chain(M, "res", c) for c in chains]
                ts = [_compose_chain(M, "tr", c) for c in chains]
                if any(r != rs[0] for r in rs):
                    out.append(Violation("res_transitivity",
                                         {"from": m, "to": d}, ""))
                if any(t != ts[0] for t in ts):
                    out.append(Violation("tr_transitivity",
                                         {"from": d, "to": m}, ""))

    # double coset formula: res_{d<-k} tr_{k<-m} for all d, m | k
    for k in lat.divisors:
        for d in lat.divisors:
            for m in lat.divisors:
                if k % d or k % m:
                    continue
                g = math.gcd(d, m)
                c = k * g // (d * m)
                lhs = M.res_mat(d, k) @ M.tr_mat(k, m)
                acc = Mat.zeros(K, M.dim(g), M.dim(g))
                for j in range(c):
                    acc = acc + M.weyl_pow(g, j * (n // k))
                rhs = M.tr_mat(d, g) @ acc @ M.res_mat(g, m)
                if lhs != rhs:
                    out.append(Violation(
                        "double_coset", {"k": k, "d": d, "m": m},
                        f"res∘tr disagrees with tr∘(sum of {c} Weyl powers)∘res"))
    return out


# ---------------------------------------------------------------------------
# morphisms


class MackeyMorphism:
    """Levelwise linear maps commuting with res, tr, and the Weyl action."""

    def __init__(self, source: MackeyFunctor, target: MackeyFunctor,
                 components, name: str = ""):
        self.source = source
        self.target = target
        self.components = dict(components)
        self.name = name

    def check(self):
        out = []
        lat = self.source.lattice
        for (d, m) in lat.covering_pairs:
            f_d, f_m = self.components[d], self.components[m]
            if f_d @ self.source.res[(d, m)] != self.target.res[(d, m)] @ f_m:
                out.append(Violation("morphism_res", {"pair": (d, m)}, self.name))
            if f_m @ self.source.tr[(m, d)] != self.target.tr[(m, d)] @ f_d:
                out.append(Violation("morphism_tr", {"pair": (d, m)}, self.name))
        for m in lat.divisors:
            f_m = self.components[m]
            if f_m @ self.source.weyl[m] != self.target.weyl[m] @ f_m:
                out.append(Violation("morphism_weyl", {"level": m}, self.name))
        return out

    def is_isomorphism(self) -> bool:
        if self.check():
            return False
        return all(inverse(self.components[m]) is not None
                   for m in self.source.lattice.divisors)

    def inverse(self) -> "MackeyMorphism":
        comps = {}
        for m in self.source.lattice.divisors:
            inv = inverse(self.components[m])
            if inv is None:
                raise InternalCheckError(
                    f"component at level {m} is not invertible")
            comps[m] = inv
        return MackeyMorphism(self.target, self.source, comps,
                              name=f"{self.name}^-1")

    def compose(self, other: "MackeyMorphism") -> "MackeyMorphism":
        """self ∘ other."""
        comps = {m: self.components[m] @ other.components[m]
                 for m in self.source.lattice.divisors}
        return MackeyMorphism(other.source, self.target, comps)

    def apply(self, m: int, v):
        return self.components[m].apply(v)


def identity_morphism(M: MackeyFunctor) -> MackeyMorphism:
    return MackeyMorphism(M, M, {m: Mat.identity(M.scalars, M.dim(m))
                                 for m in M.lattice.divisors}, name="id")


# ---------------------------------------------------------------------------
# fixed-point functor of a K[C_n]-module


@dataclass
class FixedPointModule:
    """A Mackey functor of fixed points together with its level embeddings.

    ``embeds[m]`` expresses the level-m basis inside the underlying module V
    (columns are basis vectors of V^{C_m} in V-coordinates).
    """

    functor: MackeyFunctor
    embeds: dict
    action: Mat


def fix_of_module(scalars: Field, lattice: SubgroupLattice, action: Mat,
                  labels=None, name: str = "") -> FixedPointModule:
    """Fixed-point Mackey functor of a module V with generator action A.

    Level m is V^{C_m} = ker(A^(n/m) - 1); res is inclusion, tr from level d
    to level m is the sum over coset representatives σ^(j·n/m), and the Weyl
    generator acts by A itself.
    """
    n = lattice.n
    dim_v = action.nrows
    ident = Mat.identity(scalars, dim_v)
    if action.power(n) != ident:
        raise InternalCheckError("module action does not have order dividing n")

    embeds = {}
    for m in lattice.divisors:
        basis = kernel(action.power(n // m) - ident)
        embeds[m] = Mat.from_cols(scalars, basis, dim_v)

    lab = {m: [f"v{m}.{i}" for i in range(embeds[m].ncols)]
           for m in lattice.divisors}
    if labels is not None:
        lab[1] = list(labels)

    res = {}
    tr = {}
    for (d, m) in lattice.covering_pairs:
        rmat = solve_matrix(embeds[d], embeds[m])
        if rmat is None:
            raise InternalCheckError(
                f"V^(C_{m}) does not embed in V^(C_{d})")
        res[(d, m)] = rmat
        acc = Mat.zeros(scalars, dim_v, dim_v)
        for j in range(m // d):
            acc = acc + action.power(j * (n // m))
        tmat = solve_matrix(embeds[m], acc @ embeds[d])
        if tmat is None:
            raise InternalCheckError(
                f"transfer image does not lie in V^(C_{m})")
        tr[(m, d)] = tmat
    weyl = {}
    for m in lattice.divisors:
        wmat = solve_matrix(embeds[m], action @ embeds[m])
        if wmat is None:
            raise InternalCheckError(f"action does not preserve V^(C_{m})")
        weyl[m] = wmat

    fun = MackeyFunctor(scalars, lattice, lab, res, tr, weyl, name=name)
    return FixedPointModule(fun, embeds, action)


def fix_of_module_map(src: FixedPointModule, dst: FixedPointModule,
                      level1_map: Mat) -> MackeyMorphism:
    """Morphism of fixed-point functors induced by an equivariant map of
    underlying modules (must commute with the actions)."""
    if level1_map @ src.action != dst.action @ level1_map:
        raise InternalCheckError("level-1 map is not equivariant")
    comps = {}
    for m in src.functor.lattice.divisors:
        comp = solve_matrix(dst.embeds[m], level1_map @ src.embeds[m])
        if comp is None:
            raise InternalCheckError(
                f"induced map does not preserve fixed points at level {m}")
        comps[m] = comp
    return MackeyMorphism(src.functor, dst.functor, comps)


# ---------------------------------------------------------------------------
# sums, base change, random functors


def direct_sum(functors, name: str = "") -> MackeyFunctor:
    first = functors[0]
    lat, K = first.lattice, first.scalars
    labels = {m: [] for m in lat.divisors}
    for idx, M in enumerate(functors):
        for m in lat.divisors:
            labels[m] += [f"{idx}.{s}" for s in M.labels[m]]
    res, tr, weyl = {}, {}, {}
    for (d, m) in lat.covering_pairs:
        res[(d, m)] = _block_diag(K, [M.res[(d, m)] for M in functors])
        tr[(m, d)] = _block_diag(K, [M.tr[(m, d)] for M in functors])
    for m in lat.divisors:
        weyl[m] = _block_diag(K, [M.weyl[m] for M in functors])
    return MackeyFunctor(K, lat, labels, res, tr, weyl, name=name)


def _block_diag(K, mats):
    nrows = sum(m.nrows for m in mats)
    ncols = sum(m.ncols for m in mats)
    rows = []
    c0 = 0
    for m in mats:
        left = c0
        right = ncols - c0 - m.ncols
        for r in m.rows:
            rows.append([K.zero] * left + list(r) + [K.zero] * right)
        c0 += m.ncols
    return Mat(K, rows, ncols=ncols)


def base_change(M: MackeyFunctor, changes, name: str = "") -> MackeyFunctor:
    """Conjugate all structure maps by invertible levelwise matrices."""
    K = M.scalars
    inv = {}
    for m, S in changes.items():
        Si = inverse(S)
        if Si is None:
            raise ValueError(f"base change at level {m} is singular")
        inv[m] = Si
    res = {(d, m): changes[d] @ M.res[(d, m)] @ inv[m]
           for (d, m) in M.lattice.covering_pairs}
    tr = {(m, d): changes[m] @ M.tr[(m, d)] @ inv[d]
          for (d, m) in M.lattice.covering_pairs}
    weyl = {m: changes[m] @ M.weyl[m] @ inv[m] for m in M.lattice.divisors}
    labels = {m: [f"b{m}.{i}" for i in range(M.dim(m))]
              for m in M.lattice.divisors}
    return MackeyFunctor(K, M.lattice, labels, res, tr, weyl, name=name)


def permutation_module_atom(scalars: Field, lattice: SubgroupLattice,
                            e: int) -> FixedPointModule:
    """Fixed points of the permutation module K[C_n/C_e] (σ shifts cosets)."""
    lattice.check_divisor(e)
    size = lattice.n // e
    z, o = scalars.zero, scalars.one
    rows = [[o if (i - 1) % size == j else z for j in range(size)]
            for i in range(size)]
    shift = Mat(scalars, rows, ncols=size)
    return fix_of_module(scalars, lattice, shift, name=f"atom C_n/C_{e}")


def random_mackey(lattice: SubgroupLattice, scalars: Field, dims=None,
                  seed: int = 0, randomize_basis: bool = True
                  ) -> MackeyFunctor:
    """Deterministic (in seed) random functor satisfying all axioms.

    ``dims`` maps a divisor e to the multiplicity of the induced atom on
    C_n/C_e; drawn at random when omitted.  With dims={n: 1} and
    randomize_basis=False this is exactly the constant-functor shape.
    """
    rng = random.Random(seed)
    if dims is None:
        dims = {}
        while sum(dims.values()) == 0:
            dims = {e: rng.randrange(3) for e in lattice.divisors}
    parts = []
    for e in sorted(dims):
        lattice.check_divisor(e)
        parts += [permutation_module_atom(scalars, lattice, e).functor] \
            * dims[e]
    total = direct_sum(parts, name=f"random(seed={seed})")
    if not randomize_basis:
        return total
    changes = {}
    for m in lattice.divisors:
        changes[m] = _random_invertible(scalars, total.dim(m), rng)
    return base_change(total, changes, name=f"random(seed={seed})")


def small_random_mackey(lattice: SubgroupLattice, scalars: Field,
                        seed: int = 0) -> MackeyFunctor:
    """Random functor from at most two induced atoms; keeps box products of
    random pairs at desk scale."""
    rng = random.Random(seed)
    k = rng.randrange(1, 3)
    chosen = set()
    while len(chosen) < k:
        chosen.add(lattice.divisors[rng.randrange(len(lattice.divisors))])
        if len(chosen) == len(lattice.divisors):
            break
    dims = {e: 1 for e in chosen}
    return random_mackey(lattice, scalars, dims=dims, seed=seed)


def _random_invertible(K: Field, n: int, rng) -> Mat:
    if n == 0:
        return Mat(K, [], ncols=0)
    while True:
        mat = Mat(K, [[K.random(rng) for _ in range(n)] for _ in range(n)],
                  ncols=n)
        if inverse(mat) is not None:
            return mat


def corrupt_transfer(M: MackeyFunctor, seed: int = 0) -> MackeyFunctor:
    """Negative control: perturb one entry of one transfer matrix."""
    rng = random.Random(seed)
    pairs = [p for p in M.lattice.covering_pairs if M.dim(p[0]) and
             M.dim(p[1])]
    if not pairs:
        raise ValueError("no transfer matrix to corrupt")
    (d, m) = pairs[rng.randrange(len(pairs))]
    tmat = M.tr[(m, d)]
    i = rng.randrange(tmat.nrows)
    j = rng.randrange(tmat.ncols)
    rows = [list(r) for r in tmat.rows]
    rows[i][j] = rows[i][j] + M.scalars.one
    tr = dict(M.tr)
    tr[(m, d)] = Mat(M.scalars, rows, ncols=tmat.ncols)
    return MackeyFunctor(M.scalars, M.lattice, M.labels, M.res, tr, M.weyl,
                         name=f"{M.name}+corrupt")
