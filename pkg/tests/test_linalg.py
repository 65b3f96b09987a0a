import random

import pytest

from greenbox.fields import prime_field, rationals
from greenbox.linalg import (Mat, Span, inverse, kernel, rank, rref, solve,
                             solve_matrix)
from greenbox.presented import PresentedLevel

F2 = prime_field(2)
F5 = prime_field(5)
Q = rationals()


def mat(K, rows):
    return Mat(K, [[K.from_int(x) for x in r] for r in rows],
               ncols=len(rows[0]) if rows else 0)


def test_kernel_of_identity_is_trivial():
    assert kernel(Mat.identity(F5, 3)) == []


def test_kernel_sum_map_over_f2():
    A = mat(F2, [[1, 1]])
    assert kernel(A) == [(F2.one, F2.one)]


def test_rank_nullity_random():
    rng = random.Random(5)
    for K in (F5, Q):
        for _ in range(25):
            nr, nc = rng.randrange(1, 5), rng.randrange(1, 5)
            A = Mat(K, [[K.random(rng) for _ in range(nc)]
                        for _ in range(nr)], ncols=nc)
            ker = kernel(A)
            assert rank(A) + len(ker) == nc
            for v in ker:
                assert all(x == K.zero for x in A.apply(v))


def test_solve_and_inverse_roundtrip():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randrange(1, 5)
        A = Mat(F5, [[F5.random(rng) for _ in range(n)] for _ in range(n)],
                ncols=n)
        Ainv = inverse(A)
        if Ainv is None:
            assert rank(A) < n
            continue
        assert A @ Ainv == Mat.identity(F5, n)
        b = tuple(F5.random(rng) for _ in range(n))
        x = solve(A, b)
        assert A.apply(x) == b


def test_solve_inconsistent():
    A = mat(F5, [[1, 0], [2, 0]])
    assert solve(A, (F5.one, F5.one)) is None
    assert solve_matrix(A, mat(F5, [[1], [1]])) is None


def test_rref_last_keeps_early_generators():
    # relation y - x: last-pivot elimination rewrites y in terms of x
    A = mat(F5, [[4, 1]])
    r, pivots = rref(A, "last")
    assert pivots == (1,)
    assert r.rows[0] == (F5.from_int(4), F5.one)


def test_presented_level_basics():
    # quotient of F_5^2 by span{(1,2)} has dimension 1
    lvl = PresentedLevel(F5, ["a", "b"], [(F5.one, F5.from_int(2))])
    assert lvl.dim == 1
    assert lvl.reduced_labels == ["a"]
    v = (F5.from_int(3), F5.from_int(4))
    canon = lvl.canonicalize(v)
    assert lvl.canonicalize(canon) == canon
    for r in lvl.relations:
        assert lvl.in_relation_span(r)
    assert lvl.dim == lvl.ngens - lvl.rel_rank()


def test_presented_level_roundtrip():
    lvl = PresentedLevel(F2, ["p", "q", "r"],
                         [(F2.one, F2.one, F2.zero)])
    for i in range(lvl.dim):
        rv = tuple(F2.one if t == i else F2.zero for t in range(lvl.dim))
        assert lvl.reduce(lvl.expand(rv)) == rv


def test_span_membership():
    s = Span(F5, 3)
    assert s.add((F5.one, F5.zero, F5.one))
    assert not s.add((F5.from_int(2), F5.zero, F5.from_int(2)))
    assert s.contains((F5.from_int(3), F5.zero, F5.from_int(3)))
    assert not s.contains((F5.one, F5.one, F5.zero))
    assert s.dim == 1


def test_empty_shapes():
    z = Mat(F5, [], ncols=0)
    assert (z @ z) == z
    assert Mat.identity(F5, 0) == z
    tall = Mat(F5, [], ncols=3)
    assert kernel(tall) == [(F5.one, F5.zero, F5.zero),
                            (F5.zero, F5.one, F5.zero),
                            (F5.zero, F5.zero, F5.one)]


def test_rational_elimination_exact():
    A = Mat(Q, [[Q.from_int(2), Q.from_int(1)],
                [Q.from_int(1), Q.from_int(3)]], ncols=2)
    Ainv = inverse(A)
    assert Ainv is not None
    assert A @ Ainv == Mat.identity(Q, 2)
