"""Scalar arithmetic in F_{p^k} and polynomial machinery over it.

FqField fixes (p, k, modulus); elements are coefficient tuples of length k.
Polynomials over the field are lists of such tuples (ascending degree).  This
module handles the exact, low-volume work: gcds, distinct/equal-degree
splitting, root finding.  Bulk node-parallel work lives in vecgf.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DynatomicError


def find_modulus_tail(p: int, k: int) -> tuple[int, ...]:
    """Tail (t_0..t_{k-1}) of a monic irreducible y^k + t_{k-1}y^{k-1} + ... + t_0,
    preferring sparse small tails."""
    if k == 1:
        return (0,)

    def powx(e: int, f: list[int]) -> list[int]:
        def mulmod(a: list[int], b: list[int]) -> list[int]:
            out = [0] * (2 * k - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] = (out[i + j] + x * y) % p
            for idx in range(2 * k - 2, k - 1, -1):
                c = out[idx]
                if c:
                    out[idx] = 0
                    for j in range(k):
                        out[idx - k + j] = (out[idx - k + j] - c * f[j]) % p
            return out[:k]

        base = [0, 1] + [0] * (k - 2)
        r = [1] + [0] * (k - 1)
        while e:
            if e & 1:
                r = mulmod(r, base)
            base = mulmod(base, base)
            e >>= 1
        return r

    def is_irreducible(tail: list[int]) -> bool:
        x = [0, 1] + [0] * (k - 2)
        if powx(p**k, tail) != x:
            return False
        kk, qs, d = k, set(), 2
        while d * d <= kk:
            if kk % d == 0:
                qs.add(d)
                while kk % d == 0:
                    kk //= d
            d += 1
        if kk > 1:
            qs.add(kk)
        return all(powx(p ** (k // q), tail) != x for q in qs)

    for a in range(1, p):
        tail = [(-a) % p] + [0] * (k - 1)
        if is_irreducible(tail):
            return tuple(tail)
    for b in range(0, p):
        for a in range(1, p):
            tail = [(-a) % p, (-b) % p] + [0] * (k - 2)
            if is_irreducible(tail):
                return tuple(tail)
    rng = random.Random(p * 1000 + k)
    while True:
        tail = [rng.randrange(p) for _ in range(k)]
        if is_irreducible(tail):
            return tuple(tail)


@dataclass(frozen=True)
class FqField:
    p: int
    k: int
    tail: tuple[int, ...]

    @classmethod
    def of(cls, p: int, k: int = 1) -> "FqField":
        return cls(p, k, find_modulus_tail(p, k))

    @property
    def q(self) -> int:
        return self.p**self.k

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.k

    def one(self) -> tuple[int, ...]:
        return (1,) + (0,) * (self.k - 1)

    def scalar(self, v: int) -> tuple[int, ...]:
        return (v % self.p,) + (0,) * (self.k - 1)

    def is_zero(self, a: tuple[int, ...]) -> bool:
        return all(v == 0 for v in a)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        p, k = self.p, self.k
        if k == 1:
            return (a[0] * b[0] % p,)
        z = [0] * (2 * k - 1)
        for i in range(k):
            if a[i]:
                for j in range(k):
                    z[i + j] += a[i] * b[j]
        for idx in range(2 * k - 2, k - 1, -1):
            c = z[idx] % p
            if c:
                for j in range(k):
                    z[idx - k + j] -= c * self.tail[j]
        return tuple(v % p for v in z[:k])

    def pow(self, a, e: int):
        if self.is_zero(a):
            if e == 0:
                raise DynatomicError("0^0 in field power")
            return self.zero()
        e %= self.q - 1
        r = self.one()
        base = a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def inv(self, a):
        if self.is_zero(a):
            raise DynatomicError("inversion of zero")
        return self.pow(a, self.q - 2)

    def elements_from_index(self, idx: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            out.append(idx % self.p)
            idx //= self.p
        return tuple(out)

    def frobenius(self, a):
        return self.pow(a, self.p)


@dataclass(frozen=True)
class Fq:
    """A single element together with its field (for reporting APIs)."""

    field: FqField
    value: tuple[int, ...]

    def __str__(self) -> str:
        if self.field.k == 1:
            return str(self.value[0])
        return "(" + ",".join(str(v) for v in self.value) + f")@{self.field.p}^{self.field.k}"

    @property
    def degree(self) -> int:
        """Degree of the subfield F_p(value) over F_p."""
        F = self.field
        a = self.value
        d = 1
        cur = F.frobenius(a)
        while cur != a:
            cur = F.frobenius(cur)
            d += 1
        return d


# ---- polynomials over F_q: list of element tuples, ascending; trimmed ----


def ptrim(F: FqField, a: list) -> list:
    n = len(a)
    while n and F.is_zero(a[n - 1]):
        n -= 1
    del a[n:]
    return a


def pdeg(a: list) -> int:
    return len(a) - 1


def pscale(F: FqField, a: list, s) -> list:
    return [F.mul(x, s) for x in a]


def padd(F: FqField, a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = F.add(out[i], v)
    return ptrim(F, out)


def psub(F: FqField, a: list, b: list) -> list:
    out = list(a) + [F.zero()] * (len(b) - len(a))
    for i, v in enumerate(b):
        out[i] = F.sub(out[i], v)
    return ptrim(F, out)


def pmul(F: FqField, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not F.is_zero(x):
            for j, y in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
    return ptrim(F, out)


def pmod(F: FqField, a: list, b: list) -> list:
    """a mod b, b nonzero."""
    if not b:
        raise DynatomicError("mod by zero polynomial")
    r = list(a)
    db = pdeg(b)
    inv_lb = F.inv(b[-1])
    while pdeg(r) >= db and r:
        c = F.mul(r[-1], inv_lb)
        shift = pdeg(r) - db
        for j in range(db + 1):
            r[shift + j] = F.sub(r[shift + j], F.mul(c, b[j]))
        ptrim(F, r)
        if not r:
            break
    return r


def pdivmod(F: FqField, a: list, b: list) -> tuple[list, list]:
    if not b:
        raise DynatomicError("division by zero polynomial")
    r = list(a)
    db = pdeg(b)
    inv_lb = F.inv(b[-1])
    q = [F.zero()] * max(0, len(a) - db)
    while r and pdeg(r) >= db:
        c = F.mul(r[-1], inv_lb)
        shift = pdeg(r) - db
        q[shift] = c
        for j in range(db + 1):
            r[shift + j] = F.sub(r[shift + j], F.mul(c, b[j]))
        ptrim(F, r)
    return ptrim(F, q), r


def pmonic(F: FqField, a: list) -> list:
    if not a:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F: FqField, a: list, b: list) -> list:
    """Monic gcd via Euclid."""
    a, b = ptrim(F, list(a)), ptrim(F, list(b))
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def pderiv(F: FqField, a: list) -> list:
    out = []
    for i in range(1, len(a)):
        out.append(F.mul(a[i], F.scalar(i)))
    return ptrim(F, out)


def peval(F: FqField, a: list, x) -> tuple[int, ...]:
    acc = F.zero()
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def ppowmod(F: FqField, base: list, e: int, m: list) -> list:
    r = [F.one()]
    base = pmod(F, base, m)
    while e:
        if e & 1:
            r = pmod(F, pmul(F, r, base), m)
        base = pmod(F, pmul(F, base, base), m)
        e >>= 1
    return r


def squarefree_part(F: FqField, a: list) -> list:
    """The radical: the monic squarefree polynomial with the same roots.

    Char-p aware: factors with multiplicity divisible by p hide in the part
    whose derivative vanishes, recovered through a p-th root of coefficients.
    """
    a = pmonic(F, list(a))
    if pdeg(a) <= 0:
        return a
    da = pderiv(F, a)
    if not da:
        return squarefree_part(F, _pth_root(F, a))
    g = pgcd(F, a, da)
    if pdeg(g) == 0:
        return a
    w, r = pdivmod(F, a, g)
    if r:
        raise DynatomicError("gcd division not exact")
    # strip the factors of w out of g; what survives is a p-th power
    rest = g
    while True:
        h = pgcd(F, rest, w)
        if pdeg(h) == 0:
            break
        rest, r = pdivmod(F, rest, h)
        if r:
            raise DynatomicError("radical stripping not exact")
    if pdeg(rest) == 0:
        return pmonic(F, w)
    return pmonic(F, pmul(F, w, squarefree_part(F, rest)))


def _pth_root(F: FqField, a: list) -> list:
    """Inverse Frobenius applied to a polynomial in x^p."""
    if (pdeg(a)) % F.p:
        raise DynatomicError("not a polynomial in x^p")
    e = F.p ** (F.k - 1)  # inverse of Frobenius on F_q
    out = []
    for i in range(0, len(a), F.p):
        out.append(F.pow(a[i], e) if not F.is_zero(a[i]) else F.zero())
        if any(not F.is_zero(a[j]) for j in range(i + 1, min(i + F.p, len(a)))):
            raise DynatomicError("not a polynomial in x^p")
    return ptrim(F, out)


def distinct_degree_split(F: FqField, a: list) -> list[tuple[int, list]]:
    """Squarefree monic a -> [(d, product of irreducible factors of degree d)]."""
    out = []
    x = [F.zero(), F.one()]
    h = list(x)
    v = pmonic(F, list(a))
    d = 0
    while pdeg(v) > 0:
        d += 1
        if 2 * d > pdeg(v):
            out.append((pdeg(v), v))
            break
        h = ppowmod(F, h, F.q, v)
        g = pgcd(F, psub(F, h, x), v)
        if pdeg(g) > 0:
            out.append((d, g))
            q, r = pdivmod(F, v, g)
            if r:
                raise DynatomicError("ddf division not exact")
            v = q
            h = pmod(F, h, v)
    return out


def equal_degree_roots(F: FqField, a: list, d: int, rng: random.Random) -> list[list]:
    """Cantor-Zassenhaus split of a product of degree-d irreducibles (odd q)."""
    if pdeg(a) == d:
        return [pmonic(F, a)]
    exp = (F.q**d - 1) // 2
    while True:
        r = [tuple(rng.randrange(F.p) for _ in range(F.k)) for _ in range(pdeg(a))]
        r = ptrim(F, r)
        if pdeg(r) < 1:
            continue
        g = pgcd(F, r, a)
        if 0 < pdeg(g) < pdeg(a):
            pass
        else:
            h = ppowmod(F, r, exp, a)
            g = pgcd(F, psub(F, h, [F.one()]), a)
            if not (0 < pdeg(g) < pdeg(a)):
                continue
        q, rem = pdivmod(F, a, g)
        if rem:
            raise DynatomicError("edf division not exact")
        return equal_degree_roots(F, g, d, rng) + equal_degree_roots(F, q, d, rng)


def roots_with_multiplicity(F: FqField, a: list) -> list[tuple[Fq, int, int]]:
    """All roots of a (nonzero) in the splitting field.

    Returns (root as Fq over F_{p^(k*d)}, extension degree d over the base, mult).
    Only implemented for prime fields as base (k == 1), which is all we need.
    """
    if F.k != 1:
        raise DynatomicError("roots_with_multiplicity expects a prime base field")
    if not a:
        raise DynatomicError("zero polynomial")
    rng = random.Random(1729)
    out: list[tuple[Fq, int, int]] = []
    sf = squarefree_part(F, a)
    for d, prod in distinct_degree_split(F, sf):
        for h in equal_degree_roots(F, prod, d, rng):
            # h irreducible of degree d; its roots live in F_{p^d}
            E = FqField.of(F.p, d)
            rt = _root_in_extension(E, h)
            mult = _multiplicity(F, a, h)
            for j in range(d):
                out.append((Fq(E, rt), d, mult))
                rt = E.frobenius(rt)
    return out


def _root_in_extension(E: FqField, h: list) -> tuple[int, ...]:
    """A root in E of an irreducible h given over the prime subfield."""
    lift = [E.scalar(c[0]) for c in h]
    # find a root of lift in E by equal-degree descent on gcd(x^q - x, lift)
    rng = random.Random(31337)
    d = pdeg(lift)
    if d == 1:
        return E.neg(lift[0])
    cur = lift
    while pdeg(cur) > 1:
        r = [tuple(rng.randrange(E.p) for _ in range(E.k)) for _ in range(pdeg(cur))]
        r = ptrim(E, r)
        if pdeg(r) < 1:
            continue
        h2 = ppowmod(E, r, (E.q - 1) // 2, cur)
        g = pgcd(E, psub(E, h2, [E.one()]), cur)
        if 0 < pdeg(g) < pdeg(cur):
            cur = g if pdeg(g) < pdeg(cur) - pdeg(g) else pdivmod(E, cur, g)[0]
    return E.neg(pmonic(E, cur)[0])


def _multiplicity(F: FqField, a: list, h: list) -> int:
    m = 0
    cur = list(a)
    while True:
        q, r = pdivmod(F, cur, h)
        if r:
            return m
        m += 1
        cur = q


def nth_root_poly_modp(F: FqField, a: list, n: int) -> tuple[list, tuple[int, ...]]:
    """Monic q with q^n = a/lc(a); returns (q, lc(a)). Needs p coprime to n."""
    if not a:
        raise DynatomicError("zero polynomial has no root")
    if F.q % n == 0:
        raise DynatomicError("n-th root needs n coprime to the characteristic")
    lc = a[-1]
    am = pmonic(F, a)
    d, rem = divmod(pdeg(am), n)
    if rem:
        raise DynatomicError("degree not divisible by n")
    rev = am[::-1]
    s = [F.one()] + [F.zero()] * d
    ninv = F.inv(F.scalar(n))
    for prec in range(1, d + 1):
        cur = [F.one()]
        for _ in range(n):
            cur = pmul(F, cur, s)
            cur = cur[: prec + 1]
        have = cur[prec] if prec < len(cur) else F.zero()
        want = rev[prec] if prec < len(rev) else F.zero()
        s[prec] = F.mul(F.sub(want, have), ninv)
    root = ptrim(F, s[::-1])
    chk = [F.one()]
    for _ in range(n):
        chk = pmul(F, chk, root)
    if chk != am:
        raise DynatomicError("input is not an exact n-th power")
    return root, lc
