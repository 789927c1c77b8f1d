"""Dynatomic and multiplier polynomials, factor tables, mod-p pipeline."""

import random
from fractions import Fraction

import pytest

from dynatomic import bipoly as bp
from dynatomic import intpoly as ip
from dynatomic.arith import primes_up_to
from dynatomic import dynpoly as dp
from dynatomic.errors import DynatomicError, WorkBudgetError


def test_iterate_and_psi():
    assert dp.iterate(1, 2) == [[0, 1], [], [1]]
    assert dp.iterate(2, 2) == [[0, 1, 1], [], [0, 2], [], [1]]
    assert bp.deg_x(dp.iterate(5, 2)) == 32
    assert dp.psi(1, 2) == [[0, 1], [-1], [1]]
    assert dp.psi(2, 2) == [[0, 1, 1], [-1], [0, 2], [], [1]]


def test_psi_divisibility():
    for n, d in ((4, 2), (6, 3), (6, 2), (9, 3)):
        assert bp.divexact(dp.psi(n, 2), dp.psi(d, 2)) is not None


def test_phi_degrees_and_value():
    assert dp.phi(2, 2) == [[1, 1], [1], [1]]
    assert bp.deg_x(dp.phi(5, 2)) == 30
    assert bp.deg_x(dp.phi(6, 2)) == 54
    for n in range(1, 9):
        for m in (2, 3):
            assert bp.deg_x(dp.phi(n, m)) == dp.Family(m).nu(n)


def test_multiplier_lambda():
    assert dp.multiplier_lambda(1, 2) == [[], [2]]
    assert dp.multiplier_lambda(2, 2) == [[], [0, 4], [], [4]]
    # numeric orbit-product consistency at rational points
    rng = random.Random(1)
    lam3 = dp.multiplier_lambda(3, 2)
    for _ in range(10):
        x0 = Fraction(rng.randrange(-9, 9), rng.randrange(1, 7))
        c0 = Fraction(rng.randrange(-9, 9), rng.randrange(1, 7))
        orbit_prod = Fraction(1)
        x = x0
        for _ in range(3):
            orbit_prod *= 2 * x
            x = x * x + c0
        direct = sum(
            Fraction(ip.evaluate(q, c0)) * x0**i for i, q in enumerate(lam3)
        )
        assert direct == orbit_prod


def test_delta_small():
    assert dp.delta(1, 2) == [[0, 4], [-2], [1]]
    assert dp.delta(2, 2) == [[-4, -4], [1]]
    # delta_1(1, c) = 4c - 1 (root at the cusp of the main cardioid)
    assert bp.sum_coeffs(dp.delta(1, 2)) == [-1, 4]


def test_delta_lead_formula():
    for n in range(1, 7):
        d, lc = dp.delta_lead_at_one(n, 2)
        val = dp.delta_at_one(n, 2)
        assert ip.deg(val) == d and val[-1] == lc


def test_delta_squarefree_char0():
    for n in range(1, 7):
        assert ip.discriminant(dp.delta_at_one(n, 2)) != 0


def test_delta_factor_small():
    assert dp.delta_factor(2, 1, 2) == [3, 4]
    assert dp.delta_factor(2, 2, 2) == [-1]
    # Delta_{4,2}^2 appears as Res_x(Phi_4, Phi_2) up to sign
    from dynatomic.resultants import resultant_x_prs

    r = resultant_x_prs(dp.phi(4, 2), dp.phi(2, 2))
    d42 = dp.delta_factor(4, 2, 2)
    sq = ip.mul(d42, d42)
    assert r == sq or r == ip.neg(sq)


def test_delta_via_resultant_root_at_special_point():
    # at c = 0 the six period-5 orbits of x -> x^2 all have multiplier 32
    d5 = dp.delta(5, 2)
    at0 = [q[0] if q else 0 for q in d5]
    want = [1]
    for _ in range(6):
        want = ip.mul(want, [-32, 1])
    assert at0 == want


def test_discriminant_table_n4(config):
    table = dp.discriminant_table(4, 2, config=config)
    assert dict(table.entries[(4, 4)].factors) == {2: 16, 3: 9}
    assert table.entries[(2, 2)].value() == 1
    assert dict(table.entries[(1, 2)].factors) == {2: 14, 5: 2}
    assert dict(table.entries[(1, 4)].factors) == {2: 32, 5: 2, 17: 4}
    assert dict(table.entries[(2, 4)].factors) == {2: 16, 5: 4}
    assert dict(table.entries[(1, 1)].factors) == {2: 8}


def test_budget_gate():
    with pytest.raises(WorkBudgetError):
        from dynatomic.cache import WorkspaceConfig

        dp.discriminant_table(7, 2, config=WorkspaceConfig(work_budget=100))


def test_delta_nn_mod_p_matches_char0(config):
    rng = random.Random(5)
    odd = [q for q in primes_up_to(1000) if q > 2]
    pairs = [(5, 31), (6, 7), (6, 3), (4, 107)]
    pairs += [(rng.choice([3, 4, 5]), rng.choice(odd)) for _ in range(6)]
    for n, p in pairs:
        got = dp.delta_nn_mod_p(n, 2, p, config=config)
        ref = [v % p for v in dp.delta_factor(n, n, 2)]
        while ref and ref[-1] == 0:
            ref.pop()
        assert got == ref, (n, p)


def test_delta_nn_mod_p_rejects_bad_primes(config):
    with pytest.raises(DynatomicError):
        dp.delta_nn_mod_p(5, 2, 2, config=config)
    with pytest.raises(DynatomicError):
        dp.delta_nn_mod_p(5, 2, 9, config=config)


def test_cache_roundtrip(config):
    a = dp.cached_phi(3, 2, config)
    b = dp.cached_phi(3, 2, config)
    assert a == b == dp.phi(3, 2)
    d = dp.cached_delta_factor(5, 5, 2, config)
    assert d == dp.delta_factor(5, 5, 2)
    path = config.subdir(2, 5) / "Delta_5_5.txt"
    assert path.exists()
    assert dp.cached_delta_factor(5, 5, 2, config) == d
