import itertools
from fractions import Fraction

import pytest

from greenbox.fields import (FieldUsageError, extension_field, field_arith,
                             finite_field, is_irreducible, prime_field,
                             rationals)

F2 = prime_field(2)
F3 = prime_field(3)
F5 = prime_field(5)
F4 = finite_field(2, 2)
Q = rationals()


def test_prime_field_inverse():
    assert field_arith("inv", F5.from_int(2)) == F5.from_int(3)
    assert F5.from_int(2) * F5.from_int(3) == F5.one


def test_extension_field_multiplication():
    t = F4.gen
    assert t * t == t + F4.one  # reduction by t^2 + t + 1
    assert F4.modulus_ints == (1, 1, 1)


def test_rational_addition():
    assert field_arith("add", Fraction(1, 2), Fraction(1, 3)) == \
        Fraction(5, 6)


@pytest.mark.parametrize("K", [F2, F3, F5, F4])
def test_field_axioms_exhaustive(K):
    elems = list(K.elements())
    one, zero = K.one, K.zero
    for a, b in itertools.product(elems, repeat=2):
        assert a + b == b + a
        assert a * b == b * a
    for a, b, c in itertools.product(elems, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
    for a in elems:
        assert a + zero == a and a * one == a
        assert a + (-a) == zero
        if a != zero:
            assert a * a.inverse() == one


def test_rational_axioms_spot():
    samples = [Fraction(1, 2), Fraction(-3, 7), Fraction(5), Fraction(0)]
    for a, b in itertools.product(samples, repeat=2):
        assert a + b == b + a and a * b == b * a


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        field_arith("inv", F5.zero)
    with pytest.raises(ZeroDivisionError):
        F4.zero.inverse()


def test_mixed_owners_rejected():
    with pytest.raises(FieldUsageError):
        field_arith("add", F5.one, prime_field(7).one)
    with pytest.raises(FieldUsageError):
        field_arith("mul", F5.one, Fraction(1))
    with pytest.raises((FieldUsageError, TypeError)):
        F5.one + F4.one


def test_negative_powers():
    a = F5.from_int(2)
    assert a ** -1 == F5.from_int(3)
    assert (F4.gen ** -1) * F4.gen == F4.one


def test_canonical_form():
    # reduced representatives: polynomial degree < k, fractions in lowest terms
    x = F4.from_coeffs([3, 5])   # coefficients reduce mod 2
    assert x == F4.from_coeffs([1, 1])
    assert Fraction(2, 4) == Fraction(1, 2)


def test_irreducibility_guard():
    fp = F2
    reducible = [fp.one, fp.zero, fp.one]       # t^2 + 1 = (t+1)^2
    assert not is_irreducible(fp, reducible)
    with pytest.raises(FieldUsageError):
        extension_field(2, (1, 0, 1))
    assert is_irreducible(fp, [fp.one, fp.one, fp.one])


def test_interning():
    assert prime_field(5) is prime_field(5)
    assert finite_field(2, 2) is finite_field(2, 2)
    assert F5.from_int(7) is F5.from_int(2)


def test_rationals_not_enumerable():
    with pytest.raises(FieldUsageError):
        list(Q.elements())


def test_finite_field_orders():
    assert F4.order == 4 and F4.characteristic == 2
    F27 = finite_field(3, 3)
    assert F27.order == 27
    assert sum(1 for _ in F27.elements()) == 27


def test_non_prime_rejected():
    with pytest.raises(FieldUsageError):
        prime_field(6)
