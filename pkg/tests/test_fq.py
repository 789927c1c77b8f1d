"""Finite-field scalar layer: fields, gcds, factoring into roots."""

import random

from dynatomic.fq import (
    Fq,
    FqField,
    nth_root_poly_modp,
    pgcd,
    pmul,
    ptrim,
    roots_with_multiplicity,
    squarefree_part,
)


def test_field_axioms_sampled():
    for (p, k) in [(5, 1), (5, 2), (7, 3), (3, 5)]:
        F = FqField.of(p, k)
        rng = random.Random(p * k)
        for _ in range(40):
            a = tuple(rng.randrange(p) for _ in range(k))
            b = tuple(rng.randrange(p) for _ in range(k))
            assert F.mul(a, b) == F.mul(b, a)
            if not F.is_zero(a):
                assert F.mul(a, F.inv(a)) == F.one()
            assert F.pow(a, F.q - 1) == F.one() or F.is_zero(a)


def test_gcd_mod_examples():
    F = FqField.of(5, 1)
    x2m1 = [(4,), (0,), (1,)]
    xm1 = [(4,), (1,)]
    assert pgcd(F, x2m1, xm1) == [(4,), (1,)]
    # gcd(p, 0) = monic(p)
    p = [(2,), (4,)]
    assert pgcd(F, p, []) == [(3,), (1,)]


def test_roots_mod_p_quadratics():
    F = FqField.of(5, 1)
    roots = roots_with_multiplicity(F, [(1,), (0,), (1,)])  # x^2 + 1 over F_5
    vals = sorted(r.value[0] for r, _, _ in roots)
    assert vals == [2, 3]
    F7 = FqField.of(7, 1)
    roots = roots_with_multiplicity(F7, [(1,), (0,), (1,)])  # x^2 + 1 over F_7
    assert len(roots) == 2 and all(d == 2 for _, d, _ in roots)
    # conjugate roots in F_49 reconstruct the polynomial
    E = roots[0][0].field
    prod = [E.one()]
    for r, _, _ in roots:
        prod = pmul(E, prod, [E.neg(r.value), E.one()])
    assert prod == [E.one(), E.zero(), E.one()]


def test_roots_with_multiplicity_structure():
    # c^5 (c + 2)^2 (c^2 + c + 1) over F_7: read off the multiplicities
    F = FqField.of(7, 1)
    poly = [(1,)]
    for root, e in ((0, 5), (5, 2)):  # -2 = 5 mod 7
        for _ in range(e):
            poly = pmul(F, poly, [((-root) % 7,), (1,)])
    poly = pmul(F, poly, [(1,), (1,), (1,)])
    found = {r.value[0]: m for r, d, m in roots_with_multiplicity(F, poly) if d == 1}
    assert found[0] == 5 and found[5] == 2


def test_squarefree_part_char_p():
    F = FqField.of(3, 1)
    c6 = [(0,)] * 6 + [(1,)]
    assert squarefree_part(F, c6) == [(0,), (1,)]
    # (x+1)^3 (x+2): radical has both roots
    poly = [(1,)]
    for root, e in ((1, 3), (2, 1)):
        for _ in range(e):
            poly = pmul(F, poly, [(root,), (1,)])
    rad = squarefree_part(F, poly)
    assert len(rad) == 3


def test_nth_root_poly_modp():
    F = FqField.of(11, 1)
    base = [(3,), (5,), (1,)]
    cube = [F.one()]
    for _ in range(3):
        cube = pmul(F, cube, base)
    root, lc = nth_root_poly_modp(F, cube, 3)
    assert root == base and lc == F.one()
