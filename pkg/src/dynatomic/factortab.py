"""Integer factorization bookkeeping.

A FactorTable holds sign * prod(p^e) * cofactor = the original integer, with
every listed p passing Miller-Rabin and the cofactor free of primes up to the
trial bound actually used.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arith import is_probable_prime, perfect_power, pollard_rho, primes_up_to
from .errors import DynatomicError

DEFAULT_TRIAL_BOUND = 10**7


@dataclass
class FactorTable:
    sign: int
    factors: list[tuple[int, int]]
    cofactor: int
    trial_bound: int

    def value(self) -> int:
        v = self.sign
        for p, e in self.factors:
            v *= p**e
        return v * self.cofactor

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def prime_set(self) -> set[int]:
        return {p for p, _ in self.factors}

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def cofactor_probable_prime(self) -> bool:
        return self.cofactor > 1 and is_probable_prime(self.cofactor)

    def as_dict(self) -> dict:
        return {
            "sign": self.sign,
            "factors": [[p, e] for p, e in self.factors],
            "cofactor": self.cofactor,
            "trial_bound": self.trial_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FactorTable":
        d = json.loads(text)
        return cls(
            sign=d["sign"],
            factors=[(int(p), int(e)) for p, e in d["factors"]],
            cofactor=int(d["cofactor"]),
            trial_bound=int(d["trial_bound"]),
        )

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        body = "*".join(parts) if parts else "1"
        if self.cofactor != 1:
            body += f"*[{self.cofactor}]"
        return ("-" if self.sign < 0 else "") + body

    @classmethod
    def unit(cls, sign: int = 1, trial_bound: int = 0) -> "FactorTable":
        return cls(sign=sign, factors=[], cofactor=1, trial_bound=trial_bound)


def factor_integer(
    n: int, trial_bound: int = DEFAULT_TRIAL_BOUND, rho_budget: int = 200_000
) -> FactorTable:
    """Trial division up to trial_bound, then perfect powers / Pollard rho.

    Any surviving composite part is left in `cofactor`; listed primes always
    pass Miller-Rabin.
    """
    if n == 0:
        raise DynatomicError("cannot factor 0")
    sign = 1
    if n < 0:
        sign, n = -1, -n
    factors: list[tuple[int, int]] = []
    if n > 1:
        for p in primes_up_to(min(trial_bound, _isqrt(n) + 1)):
            if p > trial_bound:
                break
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                factors.append((p, e))
            if n == 1 or p * p > n:
                break
    cofactor = 1
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m < trial_bound * trial_bound or is_probable_prime(m):
            # below bound^2 a survivor of trial division is prime
            factors.append((m, 1))
            continue
        base, e = perfect_power(m)
        if e > 1:
            if is_probable_prime(base):
                factors.append((base, e))
            else:
                stack.extend([base] * e)
            continue
        d = pollard_rho(m, rho_budget)
        if d is None:
            cofactor *= m
        else:
            stack.append(d)
            stack.append(m // d)
    factors = _merge(factors)
    return FactorTable(
        sign=sign, factors=factors, cofactor=cofactor, trial_bound=trial_bound
    )


def _merge(factors: list[tuple[int, int]]) -> list[tuple[int, int]]:
    acc: dict[int, int] = {}
    for p, e in factors:
        acc[p] = acc.get(p, 0) + e
    return sorted(acc.items())


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)
