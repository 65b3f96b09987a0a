import itertools
from fractions import Fraction

import pytest

from greenbox.extensions import (ConstructionError, artin_schreier_extension,
                                 build_extension, explicit_extension,
                                 kummer_extension)
from greenbox.fields import finite_field, prime_field, rationals

F2 = prime_field(2)
F5 = prime_field(5)
F7 = prime_field(7)


def test_kummer_f5_degree4():
    # independent irreducibility oracle: x^4 - 2 has no root in F_25, hence
    # no factor of degree <= 2 over F_5
    F25 = finite_field(5, 2)
    two = F25.from_int(2)
    assert all(c ** 4 != two for c in F25.elements())
    assert all(c ** 2 != F5.from_int(2) for c in F5.elements())

    E = kummer_extension(F5, 4, F5.from_int(2), F5.from_int(2))
    assert E.degree == 4
    # |L| = |K|^n = 625
    assert E.base.order ** E.degree == 625
    alpha = E.alpha_power(1)
    assert E.apply_sigma(alpha) == tuple(F5.from_int(2) * c for c in alpha)


def test_artin_schreier_f2():
    E = artin_schreier_extension(F2, F2.one)
    # σ(α) = α + 1 and α² + α + 1 = 0
    alpha = E.alpha_power(1)
    assert E.apply_sigma(alpha) == (F2.one, F2.one)
    sq = E.algebra.mul(alpha, alpha)
    assert tuple(a + b for a, b in zip(sq, alpha)) == (F2.one, F2.zero)


def test_kummer_f7_degree3():
    cubes = {c ** 3 for c in F7.elements()}
    assert F7.from_int(3) not in cubes    # 3 is a non-cube: cubes are {0,1,6}
    assert cubes == {F7.zero, F7.one, F7.from_int(6)}
    E = kummer_extension(F7, 3, F7.from_int(3), F7.from_int(2))
    assert E.degree == 3


def test_sigma_is_ring_map_of_exact_order():
    E = kummer_extension(F5, 4, F5.from_int(2), F5.from_int(2))
    n = E.degree
    ident = E.sigma_pow(0)
    assert E.sigma.power(n) == ident
    for m in (1, 2):
        assert E.sigma.power(m) != ident
    alg = E.algebra
    for i, j in itertools.product(range(n), repeat=2):
        lhs = E.sigma.apply(alg.table[i][j])
        rhs = alg.mul(E.sigma.col(i), E.sigma.col(j))
        assert lhs == rhs


@pytest.mark.parametrize("builder,params,prod_is", [
    ("kummer", dict(K=F5, n=4, a=F5.from_int(2), zeta=F5.from_int(2)), None),
    ("kummer", dict(K=F7, n=3, a=F7.from_int(3), zeta=F7.from_int(2)), None),
    ("artin_schreier", dict(K=F2, a=F2.one), None),
])
def test_conjugate_product(builder, params, prod_is):
    E = build_extension(builder, **params)
    n = E.degree
    prod = E.algebra.one
    alpha = E.alpha_power(1)
    for j in range(n):
        prod = E.algebra.mul(prod, E.apply_sigma(alpha, j))
    if E.flavor == "kummer":
        expected = E.zeta ** (n * (n - 1) // 2) * E.a
    else:
        expected = E.a      # α(α+1) = a in characteristic 2
    K = E.base
    assert prod == tuple([expected] + [K.zero] * (n - 1))


def test_fixed_subfield_dimensions():
    E = kummer_extension(F5, 4, F5.from_int(2), F5.from_int(2))
    for m in (1, 2, 4):
        assert len(E.fixed_space(m)) == 4 // m
    assert E.fixed_labels(2) == ["1", "α^2"]
    assert E.fixed_labels(4) == ["1"]
    assert E.fixed_labels(1) == ["1", "α", "α^2", "α^3"]


def test_fixed_subfield_artin_schreier():
    E = artin_schreier_extension(F2, F2.one)
    assert E.fixed_labels(1) == ["1", "α"]   # trivial subgroup fixes all of L
    assert E.fixed_labels(2) == ["1"]        # the full group fixes K


def test_fixed_subfield_bad_divisor():
    E = kummer_extension(F5, 4, F5.from_int(2), F5.from_int(2))
    with pytest.raises(Exception):
        E.fixed_space(3)


def test_reducible_kummer_rejected():
    with pytest.raises(ConstructionError):
        kummer_extension(F5, 2, F5.from_int(4), F5.from_int(-1))  # 4 = 2²
    with pytest.raises(ConstructionError):
        kummer_extension(F5, 4, F5.from_int(1), F5.from_int(2))


def test_non_primitive_zeta_rejected():
    with pytest.raises(ConstructionError):
        kummer_extension(F5, 4, F5.from_int(2), F5.from_int(4))  # 4² = 1


def test_degree_not_invertible_rejected():
    with pytest.raises(ConstructionError):
        kummer_extension(F5, 5, F5.from_int(2), F5.one)


def test_artin_schreier_reducible_rejected():
    F4 = finite_field(2, 2)
    # over F_4 every a = c² + c for c in {0,1} misses t and t+1 only
    with pytest.raises(ConstructionError):
        artin_schreier_extension(F4, F4.one)  # 1 = t² + t


def test_rational_kummer():
    Q = rationals()
    E = kummer_extension(Q, 2, Fraction(2), Fraction(-1))
    assert E.degree == 2
    with pytest.raises(ConstructionError):
        kummer_extension(Q, 3, Fraction(2), Fraction(1))
    with pytest.raises(ConstructionError):
        kummer_extension(Q, 2, Fraction(9, 4), Fraction(-1))  # (3/2)²


def test_explicit_flavor():
    E = explicit_extension(F5, [F5.from_int(-2), F5.zero, F5.one],
                           (F5.zero, F5.from_int(-1)))
    assert E.degree == 2
    bad = (F5.zero, F5.one)     # identity map: not order 2
    with pytest.raises(ConstructionError):
        explicit_extension(F5, [F5.from_int(-2), F5.zero, F5.one], bad)


def test_degenerate_degree_one():
    E = kummer_extension(F5, 1, F5.from_int(3), F5.one)
    assert E.degree == 1
    assert E.fixed_space(1) == [(F5.one,)]
