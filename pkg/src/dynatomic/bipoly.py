"""Dense bivariate polynomials in Z[c][x].

A BiPoly is a list of IntPolys: entry i is the Z[c]-coefficient of x^i.
Products go through a double Kronecker substitution (c first, then x) so a
single big-integer multiplication handles the whole thing.
"""

from __future__ import annotations

import gmpy2

from . import intpoly as ip
from .errors import DynatomicError, InexactDivisionError

BiPoly = list  # list[list[int]]

X: BiPoly = [[], [1]]
C: BiPoly = [[0, 1]]
ONE: BiPoly = [[1]]


def trim(a: BiPoly) -> BiPoly:
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    del a[n:]
    return a


def deg_x(a: BiPoly) -> int:
    return len(a) - 1


def deg_c(a: BiPoly) -> int:
    return max((len(q) - 1 for q in a if q), default=-1)


def add(a: BiPoly, b: BiPoly) -> BiPoly:
    if len(a) < len(b):
        a, b = b, a
    out = [list(q) for q in a]
    for i, q in enumerate(b):
        out[i] = ip.add(out[i], q)
    return trim(out)


def neg(a: BiPoly) -> BiPoly:
    return [ip.neg(q) for q in a]


def sub(a: BiPoly, b: BiPoly) -> BiPoly:
    return add(a, neg(b))


def max_abs(a: BiPoly) -> int:
    return max((ip.max_abs(q) for q in a), default=0)


def mul(a: BiPoly, b: BiPoly) -> BiPoly:
    if not a or not b:
        return []
    dca = max(len(q) for q in a)
    dcb = max(len(q) for q in b)
    bound = max_abs(a) * max_abs(b) * min(dca, dcb) * min(len(a), len(b))
    width = (bound.bit_length() + 2 + 7) // 8 + 1
    lc_out = dca + dcb - 1
    stride = 8 * width * lc_out

    def pack(p: BiPoly) -> gmpy2.mpz:
        tot = gmpy2.mpz(0)
        for i, q in enumerate(p):
            if q:
                tot += ip._pack(q, width) << (stride * i)
        return tot

    lx_out = len(a) + len(b) - 1
    flat = ip._unpack(pack(a) * pack(b), lc_out * lx_out, width)
    flat += [0] * (lc_out * lx_out - len(flat))
    return trim([ip.trim(flat[i * lc_out : (i + 1) * lc_out]) for i in range(lx_out)])


def mul_intpoly(a: BiPoly, q: list[int]) -> BiPoly:
    return trim([ip.mul(r, q) for r in a])


def mul_int(a: BiPoly, k: int) -> BiPoly:
    return trim([ip.scale(q, k) for q in a])


def divexact(a: BiPoly, b: BiPoly) -> BiPoly:
    """Exact quotient in Z[c][x]; long division in x with exact IntPoly steps."""
    if not b:
        raise InexactDivisionError("division by zero polynomial")
    if not a:
        return []
    rem = [list(q) for q in a]
    db = len(b) - 1
    lb = b[-1]
    if len(rem) < len(b):
        raise InexactDivisionError("degree of dividend below divisor")
    out: BiPoly = [[] for _ in range(len(rem) - db)]
    for i in range(len(rem) - 1, db - 1, -1):
        q = rem[i]
        if q:
            if lb == [1]:
                qq = q
            else:
                qq = ip.divexact(q, lb)
            out[i - db] = qq
            for j in range(db + 1):
                if b[j]:
                    rem[i - db + j] = ip.sub(rem[i - db + j], ip.mul(qq, b[j]))
            rem[i] = []
    if any(ip.trim(q) for q in rem[:db]):
        raise InexactDivisionError("nonzero remainder in bivariate division")
    return trim(out)


def mod_monic(a: BiPoly, m: BiPoly) -> BiPoly:
    """a mod m where m is monic in x."""
    if m[-1] != [1]:
        raise DynatomicError("mod_monic requires a monic modulus")
    rem = [list(q) for q in a]
    dm = len(m) - 1
    for i in range(len(rem) - 1, dm - 1, -1):
        q = rem[i]
        if q:
            rem[i] = []
            for j in range(dm):
                if m[j]:
                    rem[i - dm + j] = ip.sub(rem[i - dm + j], ip.mul(q, m[j]))
    return trim([ip.trim(q) for q in rem[:dm]])


def derivative_x(a: BiPoly) -> BiPoly:
    return trim([ip.scale(a[i], i) for i in range(1, len(a))])


def derivative_c(a: BiPoly) -> BiPoly:
    return trim([ip.derivative(q) for q in a])


def evaluate_c(a: BiPoly, c0: int) -> list[int]:
    """Specialize c -> c0, returning an IntPoly in x."""
    return ip.trim([ip.evaluate(q, c0) for q in a])


def evaluate_x(a: BiPoly, t: int) -> list[int]:
    """Specialize x -> t, returning an IntPoly in c."""
    acc: list[int] = []
    for q in reversed(a):
        acc = ip.add(ip.scale(acc, t), q)
    return acc


def sum_coeffs(a: BiPoly) -> list[int]:
    return evaluate_x(a, 1)


def l1_norm(a: BiPoly) -> int:
    return sum(ip.l1_norm(q) for q in a)


def power_sums(m: BiPoly, upto: int) -> list[list[int]]:
    """Newton power sums p_j (j = 0..upto) of the roots of monic m over Z[c].

    For j beyond deg m the linear recurrence from the coefficients continues.
    """
    nu = len(m) - 1
    p: list[list[int]] = [[] for _ in range(upto + 1)]
    p[0] = [nu]
    for j in range(1, upto + 1):
        acc: list[int] = []
        if j <= nu:
            acc = ip.scale(m[nu - j], -j)
        for i in range(1, min(j, nu + 1)):
            if m[nu - i] and p[j - i]:
                acc = ip.sub(acc, ip.mul(m[nu - i], p[j - i]))
        p[j] = acc
    return p


def to_lines(a: BiPoly, xvar: str = "x", cvar: str = "c") -> list[str]:
    lines = [f"{xvar} {len(a) - 1 if a else -1}"]
    for q in a:
        lines.append(ip.to_text(q, cvar))
    return lines


def from_lines(lines: list[str]) -> BiPoly:
    head = lines[0].split()
    dx = int(head[1])
    out = []
    for line in lines[1 : dx + 2]:
        _, coeffs = ip.from_text(line)
        out.append(coeffs)
    return trim(out)


def pretty(a: BiPoly, xvar: str = "x", cvar: str = "c") -> str:
    """CLI text form: x-variable tag, then ascending coefficients in c."""
    if not a:
        return f"{xvar}: 0"
    return f"{xvar}: " + " ".join(ip.pretty(q, cvar) for q in a)
