"""Exact polynomial arithmetic over Z and Z[c]."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynatomic import bipoly as bp
from dynatomic import intpoly as ip
from dynatomic.errors import DynatomicError, InexactDivisionError

small_polys = st.lists(st.integers(-50, 50), min_size=0, max_size=12).map(
    lambda a: ip.trim(list(a))
)


def mul_school(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return ip.trim(out)


@given(small_polys, small_polys)
def test_mul_matches_schoolbook(a, b):
    assert ip.mul(a, b) == mul_school(a, b)


def test_kronecker_path_with_big_coefficients():
    rng = random.Random(7)
    a = [rng.randrange(-(10**40), 10**40) for _ in range(60)]
    b = [rng.randrange(-(10**40), 10**40) for _ in range(45)]
    a, b = ip.trim(a), ip.trim(b)
    assert ip.mul(a, b) == mul_school(a, b)


@given(small_polys, small_polys)
def test_divexact_roundtrip(a, b):
    if not a or not b:
        return
    assert ip.divexact(ip.mul(a, b), b) == a


def test_divexact_rejects_inexact():
    with pytest.raises(InexactDivisionError):
        ip.divexact([1, 0, 1], [1, 1])  # x^2 + 1 over x + 1
    assert ip.divexact([], [1, 1]) == []
    assert ip.divexact([5, 1], [1]) == [5, 1]


def test_mobius_and_cyclotomic():
    from dynatomic.arith import mobius

    assert mobius(1) == 1
    assert mobius(4) == 0
    assert mobius(6) == 1
    with pytest.raises(DynatomicError):
        mobius(0)
    assert ip.cyclotomic(1) == [-1, 1]
    assert ip.cyclotomic(2) == [1, 1]
    assert ip.cyclotomic(6) == [1, -1, 1]
    # oracle: prod_{d | k} (x^(k/d) - 1)^mu(d) by exact division
    for k in range(1, 30):
        num, den = [1], [1]
        for d in range(1, k + 1):
            if k % d == 0:
                f = [-1] + [0] * (k // d - 1) + [1]
                if mobius(d) == 1:
                    num = ip.mul(num, f)
                elif mobius(d) == -1:
                    den = ip.mul(den, f)
        assert ip.cyclotomic(k) == ip.divexact(num, den)


def test_resultant_and_discriminant_basics():
    # linear: Res(x - 2, x - 5) = q(2) = -3
    assert ip.resultant([-2, 1], [-5, 1]) == -3
    f = [1, 2, 3, 1]
    assert ip.resultant(f, f) == 0
    assert ip.discriminant([1, 0, 1]) == -4  # x^2 + 1
    assert ip.discriminant([0, -1, 0, 1]) == 4  # x^3 - x
    with pytest.raises(DynatomicError):
        ip.discriminant([3])


@given(small_polys, small_polys, small_polys)
@settings(max_examples=60)
def test_resultant_multiplicative(a, b, c):
    if ip.deg(a) < 1 or ip.deg(b) < 1 or ip.deg(c) < 1:
        return
    lhs = ip.resultant(a, ip.mul(b, c))
    assert lhs == ip.resultant(a, b) * ip.resultant(a, c)


def test_nth_root():
    base = [-3, 1]
    assert ip.nth_root(mul_school(base, base), 2) == ([-3, 1], 1)
    assert ip.nth_root([5, 1], 1) == ([5, 1], 1)
    p = ip.pow_poly([1, 2, 1, 1], 5)
    assert ip.nth_root(p, 5) == ([1, 2, 1, 1], 1)
    assert ip.nth_root(ip.neg(p), 5) == ([1, 2, 1, 1], -1)
    with pytest.raises(DynatomicError):
        ip.nth_root([1, 1, 1], 2)


def test_shift_and_eval():
    a = [1, 2, 3]
    s = ip.shift_arg(a, 5)
    for x in (-3, 0, 2):
        assert ip.evaluate(s, x) == ip.evaluate(a, x + 5)


# ---- bivariate layer ----


def test_bipoly_roundtrip_and_division():
    x2c = [[0, 1], [], [1]]  # x^2 + c
    sq = bp.mul(x2c, x2c)
    assert bp.divexact(sq, x2c) == x2c
    q = bp.divexact([[0, 0, 1], [0, 2], [1]], [[0, 1], [1]])  # (x + c)^2 / (x + c)
    assert q == [[0, 1], [1]]
    with pytest.raises(InexactDivisionError):
        bp.divexact([[1], [], [1]], [[1], [1]])


def test_bipoly_spec_division_example():
    # (x^4 + 2cx^2 - x + c^2 + c) / (x^2 - x + c) = x^2 + x + c + 1
    num = [[0, 1, 1], [-1], [0, 2], [], [1]]
    den = [[0, 1], [-1], [1]]
    assert bp.divexact(num, den) == [[1, 1], [1], [1]]


def test_bipoly_serialization():
    poly = [[1, 1], [1], [1]]
    lines = bp.to_lines(poly)
    assert bp.from_lines(lines) == poly
    assert bp.pretty(poly) == "x: 1+c 1 1"


@given(small_polys, small_polys)
@settings(max_examples=40)
def test_bipoly_mul_matches_direct(a, b):
    A = [list(a), list(b)]
    B = [list(b), [1]]
    A, B = bp.trim([ip.trim(q) for q in A]), bp.trim([ip.trim(q) for q in B])
    if not A or not B:
        return
    direct = [[] for _ in range(len(A) + len(B) - 1)]
    for i, qa in enumerate(A):
        for j, qb in enumerate(B):
            direct[i + j] = ip.add(direct[i + j], mul_school(qa, qb))
    assert bp.mul(A, B) == bp.trim(direct)
