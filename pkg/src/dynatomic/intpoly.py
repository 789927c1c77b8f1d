"""Dense univariate polynomials over Z.

A polynomial is a list of int coefficients, ascending degree, with no trailing
zeros ([] is the zero polynomial).  Multiplication packs both operands into
single big integers (Kronecker substitution) so gmpy2's FFT multiplication does
the heavy lifting; everything stays exact.
"""

from __future__ import annotations

import math

import gmpy2

from .arith import mobius
from .errors import DynatomicError, InexactDivisionError

_SCHOOL_LEN = 16
_SCHOOL_BITS = 1 << 30


def trim(a: list[int]) -> list[int]:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    del a[n:]
    return a


def deg(a: list[int]) -> int:
    return len(a) - 1


def add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return trim(out)


def neg(a: list[int]) -> list[int]:
    return [-v for v in a]


def sub(a: list[int], b: list[int]) -> list[int]:
    out = list(a) + [0] * (len(b) - len(a))
    for i, v in enumerate(b):
        out[i] -= v
    return trim(out)


def scale(a: list[int], k: int) -> list[int]:
    if k == 0:
        return []
    return [v * k for v in a]


def max_abs(a: list[int]) -> int:
    return max((abs(v) for v in a), default=0)


def _pack(a: list[int], width: int) -> gmpy2.mpz:
    """Signed Kronecker packing at base 2**(8*width)."""
    pos = bytearray(len(a) * width)
    negb = bytearray(len(a) * width)
    for i, v in enumerate(a):
        if v > 0:
            b = v.to_bytes((v.bit_length() + 7) // 8, "little")
            pos[i * width : i * width + len(b)] = b
        elif v < 0:
            v = -v
            b = v.to_bytes((v.bit_length() + 7) // 8, "little")
            negb[i * width : i * width + len(b)] = b
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(
        int.from_bytes(negb, "little")
    )


def _unpack(n: gmpy2.mpz, count: int, width: int) -> list[int]:
    """Balanced digit extraction: digits lie in (-2**(8w-1), 2**(8w-1))."""
    half = 1 << (8 * width - 1)
    offsets = (gmpy2.mpz(1) << (8 * width * count)) - 1
    offsets = offsets // ((1 << (8 * width)) - 1) * half
    q = int(n + offsets)
    if q < 0:
        raise DynatomicError("kronecker unpack width too small")
    raw = q.to_bytes(count * width + 8, "little")
    out = []
    for i in range(count):
        out.append(int.from_bytes(raw[i * width : (i + 1) * width], "little") - half)
    return trim(out)


def mul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) <= _SCHOOL_LEN and max(max_abs(a), max_abs(b)) < _SCHOOL_BITS:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim(out)
    bound = max_abs(a) * max_abs(b) * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8 + 1
    count = len(a) + len(b) - 1
    return _unpack(_pack(a, width) * _pack(b, width), count, width)


def mul_many(polys: list[list[int]]) -> list[int]:
    out = [1]
    for p in polys:
        out = mul(out, p)
    return out


def pow_poly(a: list[int], e: int) -> list[int]:
    out = [1]
    base = a
    while e:
        if e & 1:
            out = mul(out, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return out


def divexact(a: list[int], b: list[int]) -> list[int]:
    """Exact quotient a/b in Z[x]; raises InexactDivisionError otherwise."""
    if not b:
        raise InexactDivisionError("division by zero polynomial")
    if not a:
        return []
    if len(a) < len(b):
        raise InexactDivisionError("degree of dividend below divisor")
    rem = list(a)
    lb = b[-1]
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - 1, len(b) - 2, -1):
        c = rem[i]
        if c:
            q, r = divmod(c, lb)
            if r:
                raise InexactDivisionError("leading coefficient does not divide")
            out[i - len(b) + 1] = q
            for j, v in enumerate(b):
                rem[i - len(b) + 1 + j] -= q * v
    if any(rem[: len(b) - 1]):
        raise InexactDivisionError("nonzero remainder")
    return trim(out)


def divexact_int(a: list[int], k: int) -> list[int]:
    out = []
    for v in a:
        q, r = divmod(v, k)
        if r:
            raise InexactDivisionError("coefficient not divisible")
        out.append(q)
    return trim(out)


def derivative(a: list[int]) -> list[int]:
    return trim([i * a[i] for i in range(1, len(a))])


def evaluate(a: list[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def content(a: list[int]) -> int:
    g = 0
    for v in a:
        g = math.gcd(g, v)
    return g


def l1_norm(a: list[int]) -> int:
    return sum(abs(v) for v in a)


def shift_arg(a: list[int], s: int) -> list[int]:
    """a(x + s)."""
    out: list[int] = []
    for c in reversed(a):
        out = add(mul(out, [s, 1]), [c])
    return out


def resultant(a: list[int], b: list[int]) -> int:
    """Resultant over Z via the subresultant PRS."""
    a, b = trim(list(a)), trim(list(b))
    if not a or not b:
        return 0
    if deg(a) == 0:
        return a[0] ** deg(b) if deg(b) >= 0 else 1
    if deg(b) == 0:
        return b[0] ** deg(a)
    s = 1
    if deg(a) < deg(b):
        a, b = b, a
        if (deg(a) * deg(b)) % 2 == 1:
            s = -s
    g, h = 1, 1
    while True:
        d = deg(a) - deg(b)
        if (deg(a) * deg(b)) % 2 == 1:
            s = -s
        r = _prem(a, b)
        if not r:
            return 0
        a, b = b, r
        dv = g * h**d
        b = [v // dv for v in b]
        g = a[-1]
        h = h if d == 0 else g**d // h ** (d - 1)
        if deg(b) == 0:
            dP = deg(a)
            return s * (b[0] ** dP // h ** (dP - 1))


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = deg(b)
    lb = b[-1]
    for k in range(deg(a) - db, -1, -1):
        c = r[db + k] if db + k < len(r) else 0
        for i in range(len(r)):
            r[i] *= lb
        if c:
            for j in range(db + 1):
                r[k + j] -= c * b[j]
        trim(r)
        if deg(r) >= db + k:
            raise DynatomicError("pseudo-division failed")
    return r


def discriminant(a: list[int]) -> int:
    """disc(a) = (-1)^(d(d-1)/2) Res(a, a') / lc(a); degree >= 1 required."""
    d = deg(a)
    if d < 1:
        raise DynatomicError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    r = resultant(a, derivative(a))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, a[-1])
    if rem:
        raise InexactDivisionError("discriminant division failed")
    return q


def gcd_z(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd in Z[x] (subresultant PRS; fine at the sizes used here)."""
    a, b = trim(list(a)), trim(list(b))
    if not a:
        return _primitive(b)
    if not b:
        return _primitive(a)
    if deg(a) < deg(b):
        a, b = b, a
    g, h = 1, 1
    while True:
        d = deg(a) - deg(b)
        r = _prem(a, b)
        if not r:
            res = _primitive(b)
            if res[-1] < 0:
                res = neg(res)
            return res
        a, b = b, r
        dv = g * h**d
        b = [v // dv for v in b]
        g = a[-1]
        h = h if d == 0 else g**d // h ** (d - 1)
        if deg(b) == 0:
            return [1]


def _primitive(a: list[int]) -> list[int]:
    c = content(a)
    return [v // c for v in a] if c > 1 else list(a)


def nth_root(a: list[int], n: int) -> tuple[list[int], int]:
    """Unique monic q and sign s with q**n = s*a; a must be +-(monic power)."""
    a = trim(list(a))
    if not a:
        raise DynatomicError("zero polynomial has no defined root here")
    s = 1 if a[-1] > 0 else -1
    if s < 0:
        a = neg(a)
    if a[-1] != 1:
        raise DynatomicError("nth_root expects +-monic input")
    d, rem = divmod(deg(a), n)
    if rem:
        raise InexactDivisionError("degree not divisible by n")
    if n == 1:
        return a, s
    # Newton iteration on the reversed power series (unit constant term).
    rev = a[::-1]
    q = [1]
    for prec in range(1, d + 1):
        cur = pow_series(q, n, prec + 1)
        want = rev[prec] if prec < len(rev) else 0
        diff = want - (cur[prec] if prec < len(cur) else 0)
        c, r = divmod(diff, n)
        if r:
            raise InexactDivisionError("not an exact n-th power")
        q = q + [0] * (prec + 1 - len(q))
        q[prec] = c
    root = trim((q + [0] * (d + 1 - len(q)))[::-1])
    if pow_poly(root, n) != a:
        raise InexactDivisionError("not an exact n-th power")
    return root, s


def pow_series(a: list[int], e: int, length: int) -> list[int]:
    out = [1]
    base = a[:length]
    while e:
        if e & 1:
            out = mul(out, base)[:length]
        e >>= 1
        if e:
            base = mul(base, base)[:length]
    return out


def cyclotomic(k: int) -> list[int]:
    """k-th cyclotomic polynomial via the mobius product with exact division."""
    if k < 1:
        raise DynatomicError("cyclotomic requires k >= 1")
    num = [1]
    den = [1]
    for d in range(1, k + 1):
        if k % d == 0:
            mu = mobius(d)
            f = [-1] + [0] * (k // d - 1) + [1]
            if mu == 1:
                num = mul(num, f)
            elif mu == -1:
                den = mul(den, f)
    return divexact(num, den)


def to_text(a: list[int], var: str) -> str:
    return " ".join([var] + [str(v) for v in a]) if a else var


def from_text(line: str) -> tuple[str, list[int]]:
    parts = line.split()
    return parts[0], [int(v) for v in parts[1:]]


def pretty(a: list[int], var: str = "c") -> str:
    """Human form, ascending: e.g. '1+c', '3+4c', '-1+2c^3'."""
    if not a:
        return "0"
    terms = []
    for i, v in enumerate(a):
        if v == 0:
            continue
        if i == 0:
            terms.append(str(v))
            continue
        mag = "" if abs(v) == 1 else str(abs(v))
        pw = var if i == 1 else f"{var}^{i}"
        sgn = "-" if v < 0 else ("+" if terms else "")
        terms.append(f"{sgn}{mag}{pw}")
    return "".join(terms) if terms else "0"
