import pytest

from greenbox.algebras import poly_quotient_algebra
from greenbox.extensions import artin_schreier_extension, kummer_extension
from greenbox.fields import finite_field, prime_field
from greenbox.green import (check_green, check_norms, constant_functor,
                            corrupt_multiplication, fix_functor,
                            permute_green)
from greenbox.mackey import check_axioms

F2 = prime_field(2)
F5 = prime_field(5)
F7 = prime_field(7)


def test_constant_functor_characteristic_two():
    Kc = constant_functor(F2, 2)
    assert Kc.mackey.tr[(2, 1)].apply((F2.one,)) == (F2.zero,)  # 2 = 0


def test_constant_functor_index_formulas():
    Kc = constant_functor(F5, 4)
    lam = (F5.from_int(3),)
    assert Kc.mackey.tr[(4, 2)].apply(lam) == (F5.from_int(6),)
    assert Kc.norm(4, 2, lam) == (F5.from_int(9),)
    assert Kc.mackey.res[(2, 4)].apply(lam) == lam


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_constant_functor_green_invariants(n):
    for K in (F2, F5, F7):
        Kc = constant_functor(K, n)
        assert check_axioms(Kc.mackey) == []
        assert check_green(Kc) == []
        assert check_norms(Kc) == []


def test_constant_functor_of_algebra():
    F4alg = poly_quotient_algebra(F2, [F2.one, F2.one, F2.one], var="t")
    Ac = constant_functor(F4alg, 2)
    assert Ac.dim(1) == 2
    assert check_green(Ac) == []
    assert check_norms(Ac) == []


def test_fix_functor_artin_schreier_transfer():
    E = artin_schreier_extension(F2, F2.one)
    L = fix_functor(E)
    alpha = (F2.zero, F2.one)
    assert L.mackey.tr[(2, 1)].apply(alpha) == (F2.one,)   # α + τα = 1
    assert L.mackey.res[(1, 2)].apply((F2.one,)) == (F2.one, F2.zero)


def test_fix_functor_kummer_c2_norm_and_transfer():
    E = kummer_extension(F5, 2, F5.from_int(2), F5.from_int(-1))
    L = fix_functor(E)
    alpha = (F5.zero, F5.one)
    assert L.mackey.tr[(2, 1)].apply(alpha) == (F5.zero,)  # α + (−α) = 0
    # norm(α) = −α² = −a = 3 over F_5 with a = 2
    assert L.norm(2, 1, alpha) == (F5.from_int(3),)


def test_fix_functor_kummer_c4_fixed_level_transfers():
    E = kummer_extension(F5, 4, F5.from_int(2), F5.from_int(2))
    L = fix_functor(E)
    # level-2 basis {1, α²}: tr to the top level kills α² (4 does not divide
    # 2) and doubles elements of K
    tr = L.mackey.tr[(4, 2)]
    assert tr.apply((F5.zero, F5.one)) == (F5.zero,)
    assert tr.apply((F5.from_int(2), F5.zero)) == (F5.from_int(4),)
    # tr between intermediate levels on α²: index 2 | 2, so tr doubles it
    tr21 = L.mackey.tr[(2, 1)]
    a2 = (F5.zero, F5.zero, F5.one, F5.zero)
    assert tr21.apply(a2) == (F5.zero, F5.from_int(2))


@pytest.mark.parametrize("make", [
    lambda: fix_functor(artin_schreier_extension(F2, F2.one)),
    lambda: fix_functor(kummer_extension(F5, 2, F5.from_int(2),
                                         F5.from_int(-1))),
    lambda: fix_functor(kummer_extension(F7, 3, F7.from_int(3),
                                         F7.from_int(2))),
    lambda: fix_functor(kummer_extension(F5, 4, F5.from_int(2),
                                         F5.from_int(2))),
])
def test_fix_functor_invariants(make):
    L = make()
    assert check_axioms(L.mackey) == []
    assert check_green(L) == []
    assert check_norms(L) == []


def test_fix_functor_over_extension_base():
    F4 = finite_field(2, 2)
    E = kummer_extension(F4, 3, F4.gen, F4.gen)
    L = fix_functor(E)
    assert check_green(L) == []
    assert check_norms(L) == []


def test_corrupted_multiplication_detected():
    E = kummer_extension(F5, 2, F5.from_int(2), F5.from_int(-1))
    L = fix_functor(E)
    bad = corrupt_multiplication(L, seed=1)
    violations = check_green(bad)
    assert violations
    rules = {v.rule for v in violations}
    assert rules & {"frobenius_reciprocity", "associativity", "res_ring_map",
                    "unit", "weyl_ring_automorphism"}


def test_permute_green_preserves_structure():
    E = kummer_extension(F5, 4, F5.from_int(2), F5.from_int(2))
    L = fix_functor(E)
    perms = {1: [3, 0, 2, 1], 2: [1, 0], 4: [0]}
    P = permute_green(L, perms)
    assert check_axioms(P.mackey) == []
    assert check_green(P) == []
    assert P.labels(1) == ["α^3", "1", "α^2", "α"]
