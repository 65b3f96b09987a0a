import pytest

from conftest import Bundle, gen_coords, unit_vec

from greenbox.algebras import base_as_algebra, poly_quotient_algebra
from greenbox.etale import (check_ideal, classical_etale_oracle,
                            constant_etale_check, green_kahler_dims,
                            ideal_and_square, ideal_generator,
                            kummer_congruence_checks, mult_map,
                            unit_section_check)
from greenbox.extensions import kummer_extension
from greenbox.fields import finite_field, prime_field
from greenbox.green import permute_green
from greenbox.boxes import relative_box
from greenbox.linalg import Span, vec_scale, vec_sub

F2 = prime_field(2)
F5 = prime_field(5)
F7 = prime_field(7)


# ---------------------------------------------------------------------------
# multiplication morphism


def test_mult_values_artin_schreier(as_bundle):
    mm = as_bundle.mult
    rb = as_bundle.box
    assert mm.apply(2, gen_coords(rb, 2, 1, 1, 1)) == (F2.one,)  # mult[α⊗α]
    assert mm.apply(2, gen_coords(rb, 2, 2, 0, 0)) == (F2.one,)  # unit
    assert unit_section_check(rb, mm)


def test_mult_values_kummer(kummer2_bundle):
    mm = kummer2_bundle.mult
    rb = kummer2_bundle.box
    # mult[α⊗α] = 2a = 4 over F_5
    assert mm.apply(2, gen_coords(rb, 2, 1, 1, 1)) == (F5.from_int(4),)
    assert unit_section_check(rb, mm)


# ---------------------------------------------------------------------------
# ideal and square


def test_ideal_artin_schreier(as_bundle):
    data = as_bundle.ideal
    rb = as_bundle.box
    assert len(data.ideal[2]) == 1
    gen = data.ideal[2][0]
    expected = tuple(a + b for a, b in zip(gen_coords(rb, 2, 2, 0, 0),
                                           gen_coords(rb, 2, 1, 1, 1)))
    assert gen == expected                       # 1⊗1 + [α⊗α]
    assert rb.green.multiply(2, gen, gen) == gen  # idempotent
    assert data.verdicts == {1: True, 2: True}
    assert green_kahler_dims(data) == {1: 0, 2: 0}
    assert check_ideal(rb, data) == []


def test_ideal_kummer_c2(kummer2_bundle):
    data = kummer2_bundle.ideal
    rb = kummer2_bundle.box
    aa = gen_coords(rb, 2, 1, 1, 1)
    one = gen_coords(rb, 2, 2, 0, 0)
    two_a = F5.from_int(4)
    gen = tuple(two_a * a - b for a, b in zip(one, aa))  # 2a − [α⊗α]
    span = Span(F5, rb.dim(2), data.ideal[2])
    assert span.dim == 1 and span.contains(gen)
    # [α⊗α]² = 4a² = 16 = 1; (2a − [α⊗α])² = 8a² − 4a[α⊗α]
    assert rb.green.multiply(2, aa, aa) == \
        tuple(F5.from_int(16) * a for a in one)
    sq = rb.green.multiply(2, gen, gen)
    expected = tuple(F5.from_int(32) * a - F5.from_int(8) * b
                     for a, b in zip(one, aa))
    assert sq == expected
    assert data.verdicts == {1: True, 2: True}


def test_ideal_free_level_matches_classical(kummer2_bundle):
    data = kummer2_bundle.ideal
    rep = classical_etale_oracle(kummer2_bundle.ext)
    assert len(data.ideal[1]) == rep.ideal_dim


@pytest.mark.parametrize("bundle_name,tensor_dim,ideal_dim", [
    ("as_bundle", 4, 2),
    ("kummer2_bundle", 4, 2),
    ("kummer3_bundle", 9, 6),
])
def test_classical_oracle(bundle_name, tensor_dim, ideal_dim, request):
    bundle = request.getfixturevalue(bundle_name)
    rep = classical_etale_oracle(bundle.ext)
    assert rep.tensor_dim == tensor_dim
    assert rep.ideal_dim == ideal_dim
    assert rep.etale
    assert rep.has_separability_unit
    # the witness acts as the identity on I
    alg = bundle.ext.algebra
    from greenbox.algebras import tensor_algebra
    tensor = tensor_algebra(alg, alg)
    from greenbox.linalg import Mat, kernel
    cols = [alg.mul(alg.basis_vec(i), alg.basis_vec(j))
            for i in range(alg.dim) for j in range(alg.dim)]
    mult = Mat.from_cols(alg.base, cols, alg.dim)
    for u in kernel(mult):
        assert tensor.mul(rep.separability_unit, u) == u


# ---------------------------------------------------------------------------
# kernel generators and the congruence suite


def test_ideal_generator_membership(kummer4_bundle):
    rb = kummer4_bundle.box
    data = kummer4_bundle.ideal
    for (d, m) in ((1, 2), (1, 4), (2, 4)):
        q = m // d
        span = Span(F5, rb.dim(m), data.ideal[m])
        for t in (q, 2 * q):
            for i in range(t + 1):
                assert span.contains(ideal_generator(rb,
                                                     kummer4_bundle.ext,
                                                     i, t, d, m))


def test_ideal_generator_exact_relations(kummer3_bundle):
    rb = kummer3_bundle.box
    E = kummer3_bundle.ext
    a = E.a
    x = lambda i, t: ideal_generator(rb, E, i, t, 1, 3)
    assert all(c == F7.zero for c in x(0, 3))
    assert x(4, 6) == x(1, 6)                       # slot units cancel
    assert x(4, 3 + 3) == x(1, 6)
    assert x(1 + 3, 3 + 3) == vec_scale(a, x(1, 3))  # both slots shift


def test_ideal_generator_product_rule(kummer3_bundle):
    rb = kummer3_bundle.box
    E = kummer3_bundle.ext
    q = 3
    x = lambda i, t: ideal_generator(rb, E, i, t, 1, 3)
    for i1 in range(q + 1):
        for i2 in range(q + 1):
            lhs = rb.green.multiply(3, x(i1, q), x(i2, q))
            rhs = tuple(
                F7.from_int(q) * (a + b - c)
                for a, b, c in zip(x(i1, 2 * q), x(i2, 2 * q),
                                   x(i1 + i2, 2 * q)))
            assert lhs == rhs


def test_ideal_generator_bad_parameters(kummer4_bundle):
    rb = kummer4_bundle.box
    E = kummer4_bundle.ext
    with pytest.raises(ValueError):
        ideal_generator(rb, E, 0, 3, 1, 2)   # q = 2 does not divide t = 3
    with pytest.raises(ValueError):
        ideal_generator(rb, E, 5, 4, 1, 2)   # i > t
    with pytest.raises(ValueError):
        ideal_generator(rb, E, 0, 2, 3, 4)   # d does not divide m


@pytest.mark.parametrize("bundle_name", ["kummer2_bundle", "kummer3_bundle",
                                         "kummer4_bundle"])
def test_congruence_suite(bundle_name, request):
    bundle = request.getfixturevalue(bundle_name)
    rep = kummer_congruence_checks(bundle.box, bundle.ext, bundle.ideal)
    assert rep.ok, rep.failures
    assert rep.checks_run > 0


def test_congruence_suite_covers_intermediate_origins(kummer4_bundle):
    rep = kummer_congruence_checks(kummer4_bundle.box, kummer4_bundle.ext,
                                   kummer4_bundle.ideal)
    assert any("level 4, d=2" in lab for lab in rep.labels)
    assert any("level 4, d=1" in lab for lab in rep.labels)
    assert any("level 2, d=1" in lab for lab in rep.labels)


def test_eq5_and_eq6_congruences_direct(kummer4_bundle):
    rb = kummer4_bundle.box
    E = kummer4_bundle.ext
    data = kummer4_bundle.ideal
    sq = Span(F5, rb.dim(4), data.square[4])
    x = lambda i, t, d: ideal_generator(rb, E, i, t, d, 4)
    # x[i,t] ≡ x[i+q,t] and x[i,t] ≡ i·x[1,t] mod I², intermediate origin d=2
    assert sq.contains(vec_sub(x(1, 4, 2), x(3, 4, 2)))
    assert sq.contains(vec_sub(x(3, 4, 2),
                               vec_scale(F5.from_int(3), x(1, 4, 2))))


# ---------------------------------------------------------------------------
# Kähler dimensions and verdict invariance


def test_kahler_dims_zero(as_bundle, kummer2_bundle, kummer3_bundle,
                          kummer4_bundle):
    for bundle in (as_bundle, kummer2_bundle, kummer3_bundle,
                   kummer4_bundle):
        dims = green_kahler_dims(bundle.ideal)
        assert all(v == 0 for v in dims.values())


def test_kahler_dims_degenerate_identity_extension():
    E = kummer_extension(F5, 1, F5.from_int(3), F5.one)
    b = Bundle(E)
    assert green_kahler_dims(b.ideal) == {1: 0}


def test_kahler_negative_control(kummer2_bundle):
    # emptying the computed square must surface nonzero quotients
    import dataclasses
    broken = dataclasses.replace(kummer2_bundle.ideal,
                                 square={m: [] for m in (1, 2)},
                                 quotient_dims={m: len(
                                     kummer2_bundle.ideal.ideal[m])
                                     for m in (1, 2)})
    dims = green_kahler_dims(broken)
    assert dims[1] > 0 and dims[2] > 0


def test_verdicts_invariant_under_basis_permutation(kummer4_bundle):
    perms = {1: [2, 0, 3, 1], 2: [1, 0], 4: [0]}
    P = permute_green(kummer4_bundle.fix, perms)
    rb = relative_box(P, F5)
    mm = mult_map(rb)
    data = ideal_and_square(rb, mm)
    base = kummer4_bundle.ideal
    for m in (1, 2, 4):
        assert rb.dim(m) == kummer4_bundle.box.dim(m)
        assert len(data.ideal[m]) == len(base.ideal[m])
        assert data.verdicts[m] == base.verdicts[m]
    assert green_kahler_dims(data) == green_kahler_dims(base)


# ---------------------------------------------------------------------------
# constant functors


def test_constant_etale_f2_f4():
    F4alg = poly_quotient_algebra(F2, [F2.one, F2.one, F2.one], var="t",
                                  name="F_4")
    for n in (2, 4):
        rep = constant_etale_check(F2, F4alg, n)
        assert rep.ok
        assert all(d == 4 for d in rep.level_dims.values())
        assert all(rep.verdicts.values())


def test_constant_etale_f5_f25():
    F25alg = poly_quotient_algebra(F5, [F5.from_int(3), F5.zero, F5.one],
                                   var="t", name="F_25")
    rep = constant_etale_check(F5, F25alg, 3)
    assert rep.ok and rep.tensor_dim == 4


def test_constant_etale_trivial_extension():
    rep = constant_etale_check(F5, base_as_algebra(F5), 2)
    assert rep.ok
    assert all(d == 0 for d in rep.ideal_dims.values())


def test_etale_over_extension_base():
    F4 = finite_field(2, 2)
    E = kummer_extension(F4, 3, F4.gen, F4.gen)
    b = Bundle(E)
    assert all(b.ideal.verdicts.values())
    rep = kummer_congruence_checks(b.box, E, b.ideal)
    assert rep.ok
