"""Binary itineraries, external angles, kneading sequences, admissibility.

Words are plain strings over {0,1} (itineraries, one period) or over
{0,1,*} with a single trailing star (star-periodic kneading sequences).
Angles are exact rationals a/(2^n - 1); every comparison is integer
arithmetic, so boundary cases land exactly on the star symbol.

Disparity is ones minus zeros; the successor flips the final 0 of the
maximal rotation to 1 and raises it by 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DynatomicError

STAR = "*"


def _check_binary(v: str) -> str:
    if not v or any(ch not in "01" for ch in v):
        raise DynatomicError(f"not a binary word: {v!r}")
    return v


def exact_period(v: str) -> int:
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v == v[d:] + v[:d]:
            return d
    return n


def is_exact_period(v: str) -> bool:
    return exact_period(_check_binary(v)) == len(v)


def shift(v: str, k: int = 1) -> str:
    k %= len(v)
    return v[k:] + v[:k]


def complement(v: str) -> str:
    return "".join("1" if ch == "0" else "0" for ch in _check_binary(v))


def disparity(v: str) -> int:
    """Ones minus zeros over one period."""
    _check_binary(v)
    return v.count("1") - v.count("0")


def maximal_shift(v: str) -> tuple[str, int]:
    """(lexicographically greatest rotation, shift amount achieving it)."""
    _check_binary(v)
    best, arg = v, 0
    for k in range(1, len(v)):
        w = shift(v, k)
        if w > best:
            best, arg = w, k
    return best, arg


def orbit_words(v: str) -> set[str]:
    return {shift(v, k) for k in range(len(v))}


@dataclass(frozen=True)
class Angle:
    """Exact rational angle a / (2^n - 1) with its doubling period."""

    num: int
    n: int  # denominator exponent: den = 2^n - 1

    def __post_init__(self):
        den = 2**self.n - 1
        if not 0 < self.num < den:
            raise DynatomicError("angle must lie strictly between 0 and 1")

    @property
    def den(self) -> int:
        return 2**self.n - 1

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def period(self) -> int:
        """Exact period under doubling."""
        den = self.den
        a = self.num
        cur = a
        for j in range(1, self.n + 1):
            cur = cur * 2 % den
            if cur == a:
                return j
        raise DynatomicError("angle not periodic under doubling")

    def doubling_orbit(self) -> list[int]:
        out = []
        cur = self.num
        den = self.den
        for _ in range(self.period):
            out.append(cur)
            cur = cur * 2 % den
        return out


def kneading_sequence(theta: Angle) -> str:
    """Star-periodic kneading word of an angle of exact period n.

    Symbol i is the partition class of 2^(i-1) theta: strictly between
    theta/2 and (theta+1)/2 gives 1, the boundary gives *, the rest 0.
    """
    n = theta.period
    den = theta.den
    a = theta.num
    lo_num = a  # theta/2 = a / (2 den)
    hi_num = a + den  # (theta+1)/2
    out = []
    cur = a
    for _ in range(n):
        x2 = 2 * cur  # compare cur/den with bounds over denominator 2 den
        if x2 == lo_num or x2 == hi_num:
            out.append(STAR)
        elif lo_num < x2 < hi_num:
            out.append("1")
        else:
            out.append("0")
        cur = cur * 2 % den
    word = "".join(out)
    if word.count(STAR) != 1 or word[-1] != STAR:
        raise DynatomicError(f"kneading word malformed: {word}")
    if word[0] != "1" and n > 1:
        raise DynatomicError("kneading sequence must start with 1")
    return word


def resolutions(kneading: str) -> tuple[str, str]:
    """The 0- and 1-resolutions of a star-periodic word."""
    if not kneading or kneading[-1] != STAR:
        raise DynatomicError("expected a star-periodic word")
    body = kneading[:-1]
    return body + "0", body + "1"


def angle_of_maximal(v: str) -> Angle:
    """The angle .vvv... for a maximal itinerary v (binary expansion)."""
    _check_binary(v)
    if maximal_shift(v)[0] != v:
        raise DynatomicError("itinerary is not maximal in its orbit")
    if v[-1] != "0":
        raise DynatomicError("a maximal itinerary ends in 0")
    return Angle(int(v, 2), len(v))


def rho_function(word: str, k: int) -> int | float:
    """rho(k) = least j > k with word[j] != word[j - k], word periodic.

    The star symbol differs from both 0 and 1.  A disagreement, if any,
    occurs within n steps; otherwise the answer is infinity.
    """
    if k < 1:
        raise DynatomicError("rho needs k >= 1")
    n = len(word)
    for j in range(k + 1, k + n + 1):
        if word[(j - 1) % n] != word[(j - k - 1) % n]:
            return j
    return float("inf")


def internal_address(word: str) -> list[int]:
    """Orbit of 1 under the rho function, truncated before infinity.

    For a star-periodic word of period n the address always terminates at n.
    """
    out = [1]
    n = len(word)
    cur = 1
    while True:
        nxt = rho_function(word, cur)
        if nxt == float("inf"):
            break
        out.append(int(nxt))
        cur = int(nxt)
        if word[-1] == STAR and cur >= n:
            break
        if cur >= 2 * n:  # plain periodic words: cut far beyond the period
            break
    return out


def is_admissible(kneading: str) -> bool:
    """Combinatorial admissibility of a star-periodic word.

    Every 1 <= m < n must pass one of: m in the internal address; some
    divisor k < m has rho(k) > m; or m is not in the rho-orbit of the
    residue of rho(m) mod m."""
    if kneading[-1] != STAR:
        raise DynatomicError("expected a star-periodic word")
    n = len(kneading)
    if n == 1:
        return True
    addr = set(internal_address(kneading))
    for m in range(1, n):
        if m in addr:
            continue
        if any(m % k == 0 and rho_function(kneading, k) > m for k in range(1, m)):
            continue
        rm = rho_function(kneading, m)
        if rm == float("inf"):
            continue
        r = int(rm) % m
        if r == 0:
            r = m
        # walk the rho-orbit of r up to m
        ok = True
        cur = r
        while cur < m:
            cur = rho_function(kneading, cur)
            if cur == float("inf"):
                break
        if cur == m:
            ok = False
        if ok:
            continue
        return False
    return True


def is_primitive(kneading: str) -> bool:
    """Both resolutions have full period."""
    k0, k1 = resolutions(kneading)
    n = len(kneading)
    return exact_period(k0) == n and exact_period(k1) == n


def is_repetitive(v: str) -> tuple[int, int] | None:
    """Parameters (a, b) when the maximal rotation is
    1^(b+1) 0^a (1^b 0^a)^(j-1) with j >= 2; None otherwise."""
    w, _ = maximal_shift(v)
    n = len(w)
    for b in range(1, n):
        for a in range(1, n):
            block = "1" * b + "0" * a
            lead = "1" * (b + 1) + "0" * a
            rest = n - len(lead)
            if rest <= 0 or rest % len(block):
                continue
            j = rest // len(block) + 1
            if j >= 2 and w == lead + block * (j - 1):
                return (a, b)
    return None


def is_self_complementary(v: str) -> bool:
    """Some rotation equals the complement; verifies the w-wbar shape."""
    _check_binary(v)
    n = len(v)
    comp = complement(v)
    if not any(shift(v, k) == comp for k in range(n)):
        return False
    if n % 2:
        raise DynatomicError("self-complementary word of odd period")
    # structural check: some rotation has the form w + complement(w)
    for k in range(n):
        w = shift(v, k)
        if w[n // 2 :] == complement(w[: n // 2]):
            return True
    raise DynatomicError("self-complementary word without the split shape")


def is_nearly_imprimitive(v: str) -> tuple[int, str] | None:
    """(k, mu) when some rotation is mu^(k-1) mu' with k | n, k > 1 and mu'
    flipping the last symbol of mu; None otherwise."""
    _check_binary(v)
    n = len(v)
    for k in range(2, n + 1):
        if n % k:
            continue
        size = n // k
        for r in range(n):
            w = shift(v, r)
            mu = w[:size]
            mup = mu[:-1] + ("1" if mu[-1] == "0" else "0")
            if w == mu * (k - 1) + mup:
                return (k, mu)
    return None


@lru_cache(maxsize=None)
def angles_of_period(n: int) -> list[Angle]:
    """All angles a/(2^n - 1) of exact period n under doubling."""
    den = 2**n - 1
    out = []
    for a in range(1, den):
        ok = True
        for d in range(1, n):
            if n % d == 0 and a * (2**d - 1) % den == 0:
                ok = False
                break
        if ok:
            out.append(Angle(a, n))
    return out


def successor(v: str) -> str:
    """Maximal rotation with its final 0 flipped to 1, as a maximal word."""
    w, _ = maximal_shift(v)
    if w[-1] != "0":
        raise DynatomicError("maximal word must end in 0")
    s = w[:-1] + "1"
    return maximal_shift(s)[0]
