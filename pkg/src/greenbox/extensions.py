"""Cyclic Galois extensions K ⊂ L with an explicit generator automorphism.

Two constructions are validated and supported end to end:

* Kummer data: L = K(α) with α^n = a, where n is invertible in K, K contains
  a primitive n-th root of unity ζ, and the generator acts by α ↦ ζα.
* Artin–Schreier data (characteristic 2, n = 2): L = K(α) with α² + α + a = 0
  and generator α ↦ α + 1.

An ``explicit`` flavor accepts a monic modulus plus the image of α under the
generator and runs the same verification.  Construction always *executes* the
invariant checks (σ is a ring map of order exactly n whose fixed subspace is
K), rather than assuming them.
"""

from __future__ import annotations

from fractions import Fraction

from .algebras import FiniteAlgebra, poly_quotient_algebra
from .fields import Field, FieldUsageError, RationalField
from .linalg import Mat, kernel, vec_is_zero


class ConstructionError(ValueError):
    """The requested data does not define a cyclic field extension."""


class GaloisExtension:
    """K ⊂ L = K[x]/(f) with a C_n-action generated by ``sigma``.

    ``sigma`` acts on the power basis {1, α, ..., α^(n-1)}; column j holds
    the coordinates of σ(α^j).
    """

    def __init__(self, base: Field, degree: int, algebra: FiniteAlgebra,
                 sigma: Mat, flavor: str, a=None, zeta=None):
        self.base = base
        self.degree = degree
        self.algebra = algebra
        self.sigma = sigma
        self.flavor = flavor
        self.a = a
        self.zeta = zeta
        self._sigma_powers = {0: Mat.identity(base, degree), 1: sigma}

    def sigma_pow(self, k: int) -> Mat:
        k %= self.degree
        if k not in self._sigma_powers:
            self._sigma_powers[k] = self.sigma @ self.sigma_pow(k - 1)
        return self._sigma_powers[k]

    def apply_sigma(self, vec, k: int = 1):
        return self.sigma_pow(k).apply(vec)

    def alpha_power(self, e: int):
        """Coordinates of α^e in the power basis (e >= 0)."""
        x = [self.base.zero, self.base.one][:self.degree + 1]
        if self.degree == 1:
            x = [self.a]  # α = a itself in the degenerate extension
        v = self.algebra.one
        alpha = tuple(x[i] if i < len(x) else self.base.zero
                      for i in range(self.degree))
        for _ in range(e):
            v = self.algebra.mul(v, alpha)
        return v

    def fixed_space(self, m: int):
        """Basis of L^{C_m} = ker(σ^{n/m} - 1); C_m is generated by σ^{n/m}."""
        n = self.degree
        if m <= 0 or n % m != 0:
            raise FieldUsageError(f"{m} does not divide the degree {n}")
        diff = self.sigma_pow(n // m) - Mat.identity(self.base, n)
        return kernel(diff)

    def fixed_labels(self, m: int):
        basis = self.fixed_space(m)
        return [format_l_element(self, v) for v in basis]

    def __repr__(self):
        return (f"GaloisExtension({self.flavor}, degree {self.degree} "
                f"over {self.base})")


def format_l_element(ext: GaloisExtension, vec) -> str:
    """Pretty form of an element of L, e.g. ``α^2`` or ``2+α``."""
    K = ext.base
    terms = []
    for i, c in enumerate(vec):
        if c == K.zero:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = "α" if i == 1 else f"α^{i}"
            terms.append(mono if c == K.one else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# root-extraction tests used by the irreducibility criteria


def _has_mth_root(K: Field, a, m: int) -> bool:
    """Is a in K^(x m)?  Exhaustive for finite K, exact for Q."""
    if K.is_finite:
        return any(c ** m == a for c in K.elements())
    # rationals: a = (p/q)^m demands integer m-th roots of p and q
    if not isinstance(a, Fraction):
        raise FieldUsageError("rational scalar expected")
    if a == 0:
        return True
    if a < 0 and m % 2 == 0:
        return False
    sign = -1 if a < 0 else 1
    num, den = abs(a.numerator), a.denominator
    rn, rd = _int_root(num, m), _int_root(den, m)
    return rn is not None and rd is not None and \
        Fraction(sign * rn, rd) ** m == a


def _int_root(n: int, m: int):
    if n == 0:
        return 0
    lo, hi = 0, max(2, n)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** m < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** m == n else None


def _in_minus_four_fourth_powers(K: Field, a) -> bool:
    """Is a of the form -4 c^4?  (The char-2 exceptional case of x^n - a.)"""
    minus4 = K.from_int(-4)
    if K.is_finite:
        return any(minus4 * c ** 4 == a for c in K.elements())
    if a == 0:
        return True
    c4 = a / minus4
    return _has_mth_root(K, c4, 4)


def _is_primitive_root_of_unity(K: Field, zeta, n: int) -> bool:
    if zeta ** n != K.one:
        return False
    for r in range(2, n + 1):
        if n % r == 0 and _prime(r) and zeta ** (n // r) == K.one:
            return False
    return True


def _prime(r: int) -> bool:
    return r > 1 and all(r % d for d in range(2, int(r ** 0.5) + 1))


# ---------------------------------------------------------------------------
# constructors


def kummer_extension(K: Field, n: int, a, zeta) -> GaloisExtension:
    """Build L = K(α), α^n = a, with σ(α) = ζα, validating the input.

    x^n - a is irreducible iff a avoids K^(x r) for every prime r | n and,
    when 4 | n, also avoids -4 K^(x 4); both are checked by exhaustion for
    finite K and by exact root extraction for Q.
    """
    if n < 1:
        raise ConstructionError("degree must be positive")
    if K.characteristic and n % K.characteristic == 0:
        raise ConstructionError(
            f"not C_{n}-Galois: {n} is not invertible in {K}")
    if a == K.zero:
        raise ConstructionError("not a field extension: a must be a unit")
    if isinstance(K, RationalField) and n > 2:
        raise ConstructionError(
            f"Q contains no primitive {n}-th root of unity; "
            "rational Kummer data is limited to n <= 2")
    if not _is_primitive_root_of_unity(K, zeta, n):
        raise ConstructionError(
            f"{zeta} is not a primitive {n}-th root of unity in {K}")
    if n > 1:
        for r in range(2, n + 1):
            if n % r == 0 and _prime(r) and _has_mth_root(K, a, r):
                raise ConstructionError(
                    f"not a field extension: x^{n} - {a} is reducible "
                    f"({a} is an {r}-th power in {K})")
        if n % 4 == 0 and _in_minus_four_fourth_powers(K, a):
            raise ConstructionError(
                f"not a field extension: x^{n} - {a} is reducible "
                f"({a} lies in -4·{K}^4)")

    modulus = [-a] + [K.zero] * (n - 1) + [K.one]
    algebra = poly_quotient_algebra(K, modulus, var="α",
                                    name=f"{K}(α), α^{n}={a}")
    # σ(α^j) = ζ^j α^j: diagonal in the power basis
    rows = [[(zeta ** j if i == j else K.zero) for j in range(n)]
            for i in range(n)]
    sigma = Mat(K, rows, ncols=n)
    ext = GaloisExtension(K, n, algebra, sigma, "kummer", a=a, zeta=zeta)
    verify_extension(ext)
    return ext


def artin_schreier_extension(K: Field, a) -> GaloisExtension:
    """Build L = K(α), α² + α + a = 0 in characteristic 2, σ(α) = α + 1."""
    if K.characteristic != 2:
        raise ConstructionError(
            "Artin–Schreier data requires characteristic 2")
    if a == K.zero:
        raise ConstructionError("not a field extension: a must be a unit")
    if not K.is_finite:
        raise ConstructionError("finite base field expected")
    if any(c * c + c == a for c in K.elements()):
        raise ConstructionError(
            f"not a field extension: x^2 + x + {a} is reducible")
    modulus = [a, K.one, K.one]
    algebra = poly_quotient_algebra(K, modulus, var="α",
                                    name=f"{K}(α), α²+α+{a}=0")
    sigma = Mat(K, [[K.one, K.one], [K.zero, K.one]], ncols=2)
    ext = GaloisExtension(K, 2, algebra, sigma, "artin_schreier", a=a)
    verify_extension(ext)
    return ext


def explicit_extension(K: Field, modulus, sigma_alpha) -> GaloisExtension:
    """Build from a monic modulus and the coordinates of σ(α); verified."""
    n = len(modulus) - 1
    algebra = poly_quotient_algebra(K, list(modulus), var="α")
    cols = [algebra.one]
    img = tuple(sigma_alpha)
    acc = algebra.one
    for _ in range(1, n):
        acc = algebra.mul(acc, img)
        cols.append(acc)
    sigma = Mat.from_cols(K, cols, n)
    ext = GaloisExtension(K, n, algebra, sigma, "explicit")
    verify_extension(ext)
    return ext


def build_extension(flavor: str, **params) -> GaloisExtension:
    """Dispatch on flavor: kummer(K, n, a, zeta), artin_schreier(K, a),
    explicit(K, modulus, sigma_alpha)."""
    if flavor == "kummer":
        return kummer_extension(params["K"], params["n"], params["a"],
                                params["zeta"])
    if flavor == "artin_schreier":
        return artin_schreier_extension(params["K"], params["a"])
    if flavor == "explicit":
        return explicit_extension(params["K"], params["modulus"],
                                  params["sigma_alpha"])
    raise ConstructionError(f"unknown extension flavor {flavor!r}")


def verify_extension(ext: GaloisExtension) -> None:
    """Execute the C_n-Galois invariants; raise ConstructionError on failure."""
    K, n = ext.base, ext.degree
    ident = Mat.identity(K, n)
    if ext.sigma_pow(0) != ident or ext.sigma.power(n) != ident:
        raise ConstructionError("not C_n-Galois: σ^n is not the identity")
    for m in range(1, n):
        if n % m == 0 and ext.sigma.power(m) == ident and m < n:
            raise ConstructionError(
                f"not C_{n}-Galois: σ has order dividing {m}")
    # σ is a ring map: check on all pairs of power-basis elements
    alg = ext.algebra
    sigma_cols = [ext.sigma.col(j) for j in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = ext.sigma.apply(alg.table[i][j])
            rhs = alg.mul(sigma_cols[i], sigma_cols[j])
            if lhs != rhs:
                raise ConstructionError(
                    "σ is not a ring homomorphism on the power basis")
    fixed = kernel(ext.sigma - ident)
    if len(fixed) != 1:
        raise ConstructionError(
            f"not C_{n}-Galois: fixed subspace has dimension {len(fixed)}")
    if n >= 1 and not vec_is_zero(K, tuple(
            a - b for a, b in zip(fixed[0],
                                  tuple([K.one] + [K.zero] * (n - 1))))):
        # the fixed line must be spanned by 1
        raise ConstructionError("fixed subfield is not K·1")
