"""Bivariate resultants over Z[c]: exact PRS, modular route, identities."""

import random

from dynatomic import bipoly as bp
from dynatomic import dynpoly as dp
from dynatomic import intpoly as ip
from dynatomic import resultants as rs


def random_bipoly(rng, dx, dc, h):
    out = [[rng.randint(-h, h) for _ in range(rng.randint(1, dc + 1))]
           for _ in range(dx + 1)]
    return bp.trim([ip.trim(q) for q in out])


def test_prs_trivial_cases():
    assert rs.resultant_x_prs([[-2], [1]], [[-5], [1]]) == [-3]
    f = [[1], [2], [1]]
    assert rs.resultant_x_prs(f, f) == []


def test_spec_resultant_example():
    # Res_x(Phi_2, Phi_1) for the quadratic family is the first cyclotomic factor
    r = rs.resultant_x_prs(dp.phi(2, 2), dp.phi(1, 2))
    assert r == [3, 4] or r == [-3, -4]


def test_specialization_property():
    rng = random.Random(3)
    for _ in range(100):
        a = random_bipoly(rng, rng.randint(1, 3), 2, 5)
        b = random_bipoly(rng, rng.randint(1, 3), 2, 5)
        if not a or not b or bp.deg_x(a) < 1 or bp.deg_x(b) < 1:
            continue
        r = rs.resultant_x(a, b)
        for c0 in (2, -3, 7):
            if ip.evaluate(a[-1], c0) == 0 or ip.evaluate(b[-1], c0) == 0:
                continue
            assert ip.evaluate(r, c0) == ip.resultant(
                bp.evaluate_c(a, c0), bp.evaluate_c(b, c0)
            )


def test_resultant_multiplicativity_bivariate():
    rng = random.Random(9)
    for _ in range(20):
        a = random_bipoly(rng, 2, 1, 3)
        b = random_bipoly(rng, 1, 1, 3)
        c = random_bipoly(rng, 1, 1, 3)
        if any(not x or bp.deg_x(x) < 1 for x in (a, b, c)):
            continue
        lhs = rs.resultant_x(a, bp.mul(b, c))
        rhs = ip.mul(rs.resultant_x(a, b), rs.resultant_x(a, c))
        assert lhs == rhs


def test_modular_matches_prs():
    rng = random.Random(17)
    for _ in range(8):
        a = random_bipoly(rng, 3, 2, 9)
        b = random_bipoly(rng, 2, 2, 9)
        if not a or not b or bp.deg_x(a) < 1 or bp.deg_x(b) < 1:
            continue
        assert rs.resultant_x_modular(a, b) == rs.resultant_x_prs(a, b)


def test_discriminant_x():
    # disc_x(x^2 + c) = -4c
    assert rs.discriminant_x([[0, 1], [], [1]]) == [0, -4]


def test_factor_identities_small():
    for n in (2, 3, 4, 5):
        rep = rs.verify_factor_identities(n, 2)
        assert all(rep["resultants"].values()), rep
        assert rep["disc_ok"], rep
