import pytest

from greenbox.fields import prime_field, rationals
from greenbox.green import constant_functor, fix_functor
from greenbox.linalg import Mat
from greenbox.mackey import (MackeyMorphism, check_axioms, compose_structure,
                             corrupt_transfer, fix_of_module,
                             identity_morphism, random_mackey,
                             small_random_mackey, subgroup_lattice)

F5 = prime_field(5)
F7 = prime_field(7)


def test_lattice_shape():
    lat = subgroup_lattice(12)
    assert lat.divisors == [1, 2, 3, 4, 6, 12]
    assert (6, 12) in lat.covering_pairs and (4, 12) in lat.covering_pairs
    assert (3, 12) not in lat.covering_pairs  # index 4 is not prime
    assert lat.chain_down(12, 1) == [12, 6, 3, 1]
    assert len(lat.all_chains_down(12, 1)) > 1


def test_constant_functor_axioms():
    for n in (1, 2, 3, 4, 6):
        Kc = constant_functor(F5, n)
        assert check_axioms(Kc.mackey) == []


def test_compose_structure_identity_and_chains():
    lat = subgroup_lattice(6)
    Kc = constant_functor(F7, lat)
    ident = Mat.identity(F7, 1)
    assert compose_structure(Kc.mackey, "res", 6, 6) == ident
    # two covering chains 6→2→1 and 6→3→1 must agree
    assert compose_structure(Kc.mackey, "res", 6, 1) == ident
    assert compose_structure(Kc.mackey, "tr", 1, 6) == ident.scale(
        F7.from_int(6))
    with pytest.raises(ValueError):
        compose_structure(Kc.mackey, "res", 2, 3)


def test_fix_functor_transfer_values():
    # tr from the free level to the top: tr(1) = n, tr(α) = 0
    E_field = prime_field(5)
    from greenbox.extensions import kummer_extension
    E = kummer_extension(E_field, 4, E_field.from_int(2),
                         E_field.from_int(2))
    L = fix_functor(E)
    tr = L.mackey.tr_mat(4, 1)
    one = (E_field.one, E_field.zero, E_field.zero, E_field.zero)
    alpha = (E_field.zero, E_field.one, E_field.zero, E_field.zero)
    assert tr.apply(one) == (E_field.from_int(4),)
    assert tr.apply(alpha) == (E_field.zero,)
    assert check_axioms(L.mackey) == []


def test_corrupted_transfer_detected():
    lat = subgroup_lattice(4)
    Kc = constant_functor(F5, lat)
    bad = corrupt_transfer(Kc.mackey, seed=3)
    violations = check_axioms(bad)
    assert violations
    assert any(v.rule in ("double_coset", "tr_equivariance",
                          "tr_transitivity") for v in violations)


def test_random_mackey_constant_pattern():
    lat = subgroup_lattice(4)
    M = random_mackey(lat, F5, dims={4: 1}, randomize_basis=False)
    Kc = constant_functor(F5, lat).mackey
    for (d, m) in lat.covering_pairs:
        assert M.res[(d, m)] == Kc.res[(d, m)]
        assert M.tr[(m, d)] == Kc.tr[(m, d)]
    for m in lat.divisors:
        assert M.weyl[m] == Kc.weyl[m]


def test_random_mackey_deterministic():
    lat = subgroup_lattice(6)
    a = random_mackey(lat, F7, seed=42)
    b = random_mackey(lat, F7, seed=42)
    for (d, m) in lat.covering_pairs:
        assert a.res[(d, m)] == b.res[(d, m)]
        assert a.tr[(m, d)] == b.tr[(m, d)]
    c = random_mackey(lat, F7, seed=43)
    assert any(a.res[p] != c.res[p] for p in a.res) or \
        any(a.tr[p] != c.tr[p] for p in a.tr) or \
        any(a.weyl[m] != c.weyl[m] for m in lat.divisors)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_random_mackey_axioms(n):
    lat = subgroup_lattice(n)
    K = F5 if n % 5 else F7
    for seed in range(20):
        assert check_axioms(random_mackey(lat, K, seed=seed)) == []
        assert check_axioms(small_random_mackey(lat, K, seed=seed)) == []


def test_random_mackey_over_rationals():
    lat = subgroup_lattice(4)
    assert check_axioms(random_mackey(lat, rationals(), seed=1)) == []


def test_fix_of_module_regular_representation():
    lat = subgroup_lattice(2)
    swap = Mat(F5, [[F5.zero, F5.one], [F5.one, F5.zero]], ncols=2)
    fpm = fix_of_module(F5, lat, swap)
    assert fpm.functor.dim(1) == 2 and fpm.functor.dim(2) == 1
    assert check_axioms(fpm.functor) == []


def test_morphism_checks():
    lat = subgroup_lattice(4)
    Kc = constant_functor(F5, lat).mackey
    ident = identity_morphism(Kc)
    assert ident.check() == []
    assert ident.is_isomorphism()
    bad = MackeyMorphism(Kc, Kc, {m: Mat.identity(F5, 1).scale(
        F5.from_int(m)) for m in lat.divisors})
    assert bad.check()   # scaling by the level index breaks res-compatibility
