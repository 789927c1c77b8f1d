"""Primality, factorization tables, small number theory."""

import json

import pytest

from dynatomic.arith import (
    is_probable_prime,
    perfect_power,
    pollard_rho,
    primes_up_to,
)
from dynatomic.errors import DynatomicError
from dynatomic.factortab import FactorTable, factor_integer


def test_miller_rabin():
    assert is_probable_prime(2) and is_probable_prime(3)
    assert not is_probable_prime(1) and not is_probable_prime(561)
    assert is_probable_prime(3701) and is_probable_prime(8029187)
    assert is_probable_prime(47548578843011867)
    assert is_probable_prime(84562621221359775358188841672549561)
    assert not is_probable_prime(3215031751)  # strong pseudoprime to 2,3,5,7


def test_primes_up_to():
    ps = primes_up_to(100)
    assert ps[:5] == [2, 3, 5, 7, 11] and ps[-1] == 97
    assert len(primes_up_to(10**6)) == 78498


def test_perfect_power():
    assert perfect_power(2**10) == (2, 10)
    assert perfect_power(3**4) == (3, 4)
    assert perfect_power(47548578843011867**2)[1] % 2 == 0
    assert perfect_power(15) == (15, 1)


def test_pollard_rho_splits():
    assert pollard_rho(101 * 103) in (101, 103)


def test_factor_integer_examples():
    t = factor_integer(2**16 * 3**9)
    assert t.factors == [(2, 16), (3, 9)] and t.cofactor == 1 and t.sign == 1
    t = factor_integer(-12)
    assert t.sign == -1 and t.factors == [(2, 2), (3, 1)]
    with pytest.raises(DynatomicError):
        factor_integer(0)


def test_factor_integer_large_square_cofactor():
    # a prime square above the trial bound must come out via power detection
    p = 47548578843011867
    t = factor_integer(2**5 * p * p, trial_bound=10**6)
    assert (p, 2) in t.factors and t.complete


def test_factor_table_reconstruction_and_json():
    n = -(2**10) * 3**4 * 10007
    t = factor_integer(n, trial_bound=10**5)
    assert t.value() == n
    d = json.loads(t.to_json())
    assert set(d) == {"sign", "factors", "cofactor", "trial_bound"}
    assert FactorTable.from_json(t.to_json()) == t


def test_factor_table_cofactor_flag():
    # two primes above the bound leave a composite cofactor unless rho splits it
    t = factor_integer(1000003 * 1000033, trial_bound=10**3, rho_budget=200_000)
    assert t.value() == 1000003 * 1000033
    if t.cofactor != 1:
        assert not t.cofactor_probable_prime
