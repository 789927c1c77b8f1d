"""Elementary number theory: mobius, divisors, primality, prime sieves, CRT."""

from __future__ import annotations

import random

from .errors import DynatomicError

# Miller-Rabin witnesses proving primality for all n < 3.317e24.
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_RANDOM_ROUNDS = 64


def mobius(k: int) -> int:
    if k < 1:
        raise DynatomicError("mobius requires k >= 1")
    res = 1
    d = 2
    while d * d <= k:
        if k % d == 0:
            k //= d
            if k % d == 0:
                return 0
            res = -res
        d += 1
    if k > 1:
        res = -res
    return res


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def euler_phi(n: int) -> int:
    res = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            res -= res // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        res -= res // n
    return res


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below _MR_DETERMINISTIC_BOUND, else 64 rounds."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_BOUND:
        witnesses = [a for a in _MR_WITNESSES if a < n]
    else:
        rng = random.Random(n)
        witnesses = [rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS)]
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_sieve_cache: dict[int, list[int]] = {}


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound (cached; numpy sieve for large bounds)."""
    for b, primes in _sieve_cache.items():
        if b >= bound:
            return [p for p in primes if p <= bound] if b != bound else primes
    if bound < 2:
        return []
    import numpy as np

    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    primes = [int(p) for p in np.nonzero(sieve)[0]]
    _sieve_cache.clear()
    _sieve_cache[bound] = primes
    return primes


def next_prime(n: int) -> int:
    n += 1
    while not is_probable_prime(n):
        n += 1
    return n


def machine_primes(count: int, below: int = 2**30) -> list[int]:
    """`count` distinct primes just below `below`, descending (for CRT work)."""
    out = []
    n = below
    while len(out) < count:
        n -= 1
        if is_probable_prime(n):
            out.append(n)
    return out


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int]:
    g = m1  # moduli always coprime here
    inv = pow(m1 % m2, -1, m2)
    t = (r2 - r1) % m2 * inv % m2
    return r1 + m1 * t, m1 * m2


def balanced_mod(r: int, m: int) -> int:
    r %= m
    if 2 * r > m:
        r -= m
    return r


def perfect_power(n: int) -> tuple[int, int]:
    """Largest e with n = b**e (n >= 2); returns (b, e), e = 1 if no power."""
    if n < 2:
        raise DynatomicError("perfect_power requires n >= 2")
    best = (n, 1)
    for e in range(2, n.bit_length() + 1):
        lo, hi = 1, 1 << (n.bit_length() // e + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**e < n:
                lo = mid + 1
            else:
                hi = mid
        if lo**e == n:
            b, _ = perfect_power(lo)
            best = (b, e * _power_exponent(lo, b))
            return best
    return best


def _power_exponent(n: int, b: int) -> int:
    e = 0
    while n > 1:
        n //= b
        e += 1
    return max(e, 1)


def pollard_rho(n: int, max_iter: int = 200_000) -> int | None:
    """Brent-cycle Pollard rho; returns a nontrivial factor or None."""
    if n % 2 == 0:
        return 2
    rng = random.Random(0xD1A)
    for _ in range(12):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g, r, q = 1, 1, 1
        x = ys = y
        count = 0
        while g == 1 and count < max_iter:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                import math

                g = math.gcd(q, n)
                k += m
            r *= 2
            count += r
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                import math

                g = math.gcd(abs(x - ys), n)
                if ys == x:
                    break
        if 1 < g < n:
            return g
    return None
