"""Dynatomic and multiplier polynomials for the family f_c(x) = x^m + c.

Characteristic 0: Phi_n by the mobius product with exact division, the
multiplier polynomial delta_n(t, c) by power sums of the multiplier in
Z[c][x]/(Phi_n) and Newton's identities, the factors Delta_{n,d} by cyclotomic
resultants, and the discriminant/resultant tables.

Mod p: Delta_{n,n}(c) mod p without characteristic-0 intermediates, by
node-parallel resultant values R(c0) = Res_x(Phi_n, (f^n)' - 1) = (s
delta_n(1, c0))^n, interpolation over F_{p^k}, and a polynomial n-th root
pinned by the known leading coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import bipoly as bp
from . import intpoly as ip
from .arith import divisors, mobius
from .cache import WorkspaceConfig, atomic_write_text, read_text
from .errors import (
    ArithmeticInconsistencyError,
    DynatomicError,
    InexactDivisionError,
    WorkBudgetError,
)
from .factortab import FactorTable, factor_integer
from .vecgf import (
    VecGF,
    build_phi_and_multiplier,
    evaluate_many,
    interpolate_nodes,
    resultant_values_at_nodes,
)


@dataclass(frozen=True)
class Family:
    """The unicritical family x^m + c."""

    m: int = 2

    def __post_init__(self):
        if self.m < 2:
            raise DynatomicError("family degree must be >= 2")

    def nu(self, n: int) -> int:
        """Degree in x of Phi_n: sum over d | n of mobius(n/d) m^d."""
        return sum(mobius(n // d) * self.m**d for d in divisors(n))

    def orbit_count(self, n: int) -> int:
        return self.nu(n) // n


def iterate(n: int, m: int = 2) -> bp.BiPoly:
    """f_c^n(x) for f_c = x^m + c."""
    if n < 0:
        raise DynatomicError("iterate needs n >= 0")
    cur = [list(q) for q in bp.X]
    for _ in range(n):
        p = cur
        for _ in range(m - 1):
            p = bp.mul(p, cur)
        cur = bp.add(p, bp.C)
    return cur


def psi(n: int, m: int = 2) -> bp.BiPoly:
    """f_c^n(x) - x."""
    if n < 1:
        raise DynatomicError("psi needs n >= 1")
    return bp.sub(iterate(n, m), bp.X)


@lru_cache(maxsize=None)
def phi(n: int, m: int = 2) -> bp.BiPoly:
    """The n-th dynatomic polynomial, monic of degree nu(n) in x."""
    if n < 1:
        raise DynatomicError("phi needs n >= 1")
    num = [[1]]
    den = [[1]]
    for d in divisors(n):
        mu = mobius(n // d)
        if mu == 1:
            num = bp.mul(num, psi(d, m))
        elif mu == -1:
            den = bp.mul(den, psi(d, m))
    out = bp.divexact(num, den)
    if bp.deg_x(out) != Family(m).nu(n):
        raise ArithmeticInconsistencyError("dynatomic degree mismatch")
    return out


def multiplier_lambda(n: int, m: int = 2) -> bp.BiPoly:
    """(f_c^n)'(x) = prod_{q<n} m f_c^q(x)^(m-1)."""
    if n < 1:
        raise DynatomicError("multiplier needs n >= 1")
    out = [[m**n]]
    for q in range(n):
        fq = iterate(q, m)
        p = fq
        for _ in range(m - 2):
            p = bp.mul(p, fq)
        out = bp.mul(out, p)
    return out


@lru_cache(maxsize=None)
def delta(n: int, m: int = 2) -> bp.BiPoly:
    """Multiplier polynomial delta_n(t, c): coefficient i is the Z[c]
    coefficient of t^i; monic of degree nu(n)/n in t.

    Computed from power sums of the multiplier in Z[c][x]/(Phi_n) via
    Newton's identities (all divisions exact).
    """
    fam = Family(m)
    Phi = phi(n, m)
    nu = bp.deg_x(Phi)
    r = nu // n
    lam = bp.mod_monic(multiplier_lambda(n, m), Phi)
    upto = max(nu - 1, 0)
    psums = bp.power_sums(Phi, upto)

    def trace(a: bp.BiPoly) -> list[int]:
        acc: list[int] = []
        for j, q in enumerate(a):
            if q:
                acc = ip.add(acc, ip.mul(q, psums[j]))
        return acc

    qsums: list[list[int]] = [[]] * (r + 1)
    cur = [[1]]
    for k in range(1, r + 1):
        cur = bp.mod_monic(bp.mul(cur, lam), Phi)
        qsums[k] = ip.divexact_int(trace(cur), n)
    elem: list[list[int]] = [[]] * (r + 1)
    elem[0] = [1]
    for k in range(1, r + 1):
        acc: list[int] = []
        sign = 1
        for i in range(1, k + 1):
            t = ip.mul(elem[k - i], qsums[i])
            acc = ip.add(acc, t if sign > 0 else ip.neg(t))
            sign = -sign
        elem[k] = ip.divexact_int(acc, k)
    out: bp.BiPoly = [[] for _ in range(r + 1)]
    for k in range(r + 1):
        out[r - k] = elem[k] if k % 2 == 0 else ip.neg(elem[k])
    if ip.trim(list(out[r])) != [1]:
        raise ArithmeticInconsistencyError("multiplier polynomial is not monic")
    return out


def delta_at_one(n: int, m: int = 2) -> list[int]:
    """delta_n(1, c) as an IntPoly in c."""
    return bp.sum_coeffs(delta(n, m))


def delta_lead_at_one(n: int, m: int = 2) -> tuple[int, int]:
    """(degree, leading coefficient) of delta_n(1, c), known in closed form:
    deg = nu(n) (m-1)/m and lc = (-1)^(nu/n) m^nu for the family x^m + c."""
    nu = Family(m).nu(n)
    degree = nu * (m - 1) // m
    lc = (-1) ** (nu // n) * m**nu
    return degree, lc


@lru_cache(maxsize=None)
def delta_factor(n: int, d: int, m: int = 2) -> list[int]:
    """Delta_{n,d}(c) in Z[c].

    For d < n: the resultant in the multiplier variable of the (n/d)-th
    cyclotomic polynomial with delta_d.  For d = n: the exact quotient of
    delta_n(1, c) by the product of the lower factors.
    """
    if n % d:
        raise DynatomicError("delta_factor needs d | n")
    if d < n:
        cyc = ip.cyclotomic(n // d)
        dl = delta(d, m)
        return _resultant_in_t(cyc, dl)
    prod = [1]
    for e in divisors(n)[:-1]:
        prod = ip.mul(prod, delta_factor(n, e, m))
    return ip.divexact(delta_at_one(n, m), prod)


def _resultant_in_t(cyc: list[int], dl: bp.BiPoly) -> list[int]:
    """Res_t(cyc(t), dl(t, c)) with cyc monic over Z: product of dl at roots,
    computed as a resultant of polynomials in t with IntPoly coefficients."""
    # Sylvester-free: cyc monic, so Res = prod dl(root) = det of multiplication
    # by dl(t) in Z[t]/(cyc); with small degrees a direct PRS is simplest.
    A = [[v] if v else [] for v in cyc]
    B = [list(q) for q in dl]
    return _subres_prs_t(A, B)


def _subres_prs_t(A: list[list[int]], B: list[list[int]]) -> list[int]:
    """Subresultant PRS resultant of polynomials in t over Z[c]."""

    def degp(P):
        q = len(P) - 1
        while q >= 0 and not P[q]:
            q -= 1
        return q

    def prem(P, Q):
        dp, dq = degp(P), degp(Q)
        R = [list(x) for x in P]
        lq = Q[dq]
        for kk in range(dp - dq, -1, -1):
            c = R[dq + kk] if dq + kk < len(R) else []
            R = [ip.mul(x, lq) for x in R]
            if c:
                for j in range(dq + 1):
                    R[kk + j] = ip.sub(R[kk + j], ip.mul(c, Q[j]))
            while R and not R[-1]:
                R.pop()
        return R

    s = 1
    P, Q = [list(x) for x in A], [list(x) for x in B]
    if degp(P) < degp(Q):
        P, Q = Q, P
        if (degp(P) * degp(Q)) % 2 == 1:
            s = -s
    g, h = [1], [1]
    while True:
        dp, dq = degp(P), degp(Q)
        if dq == 0:
            num = ip.pow_poly(Q[0], dp)
            den = ip.pow_poly(h, dp - 1)
            return ip.scale(ip.divexact(num, den) if den != [1] else num, s)
        d = dp - dq
        if (dp * dq) % 2 == 1:
            s = -s
        R = prem(P, Q)
        if not R:
            return []
        P, Q = Q, R
        divisor = ip.mul(g, ip.pow_poly(h, d))
        Q = [ip.divexact(x, divisor) if x else [] for x in Q]
        g = P[degp(P)]
        h = h if d == 0 else ip.divexact(ip.pow_poly(g, d), ip.pow_poly(h, d - 1))


# ---------------------------------------------------------------------------
# discriminant tables
# ---------------------------------------------------------------------------


@dataclass
class DiscriminantTable:
    """Entries (e, d) for e | n, d | n, e <= d: disc(Delta_{n,d}) on the
    diagonal, Res(Delta_{n,e}, Delta_{n,d})^2 off it."""

    n: int
    m: int
    entries: dict[tuple[int, int], FactorTable]

    def total(self) -> int:
        v = 1
        for t in self.entries.values():
            v *= t.value()
        return v

    def entry_value(self, e: int, d: int) -> int:
        return self.entries[(e, d)].value()


def discriminant_table(
    n: int, m: int = 2, trial_bound: int | None = None, config: WorkspaceConfig | None = None
) -> DiscriminantTable:
    config = config or WorkspaceConfig()
    config.charge_char0(Family(m).nu(n))
    bound = trial_bound if trial_bound is not None else config.trial_bound
    divs = divisors(n)
    deltas = {d: delta_factor(n, d, m) for d in divs}
    entries: dict[tuple[int, int], FactorTable] = {}
    for i, e in enumerate(divs):
        for d in divs[i:]:
            if e == d:
                if ip.deg(deltas[d]) < 2:
                    entries[(e, d)] = FactorTable.unit(trial_bound=bound)
                else:
                    entries[(e, d)] = factor_integer(ip.discriminant(deltas[d]), bound)
            else:
                r = ip.resultant(deltas[e], deltas[d])
                entries[(e, d)] = factor_integer(r * r, bound)
    table = DiscriminantTable(n=n, m=m, entries=entries)
    # Reconstruction: the product of all entries is disc(delta_n(1, c)) up to sign.
    dn = ip.discriminant(delta_at_one(n, m))
    if abs(table.total()) != abs(dn):
        raise ArithmeticInconsistencyError("table does not reconstruct D_n")
    return table


def discriminant_dn(n: int, m: int = 2) -> int:
    """D_n = disc(delta_n(1, c))."""
    return ip.discriminant(delta_at_one(n, m))


# ---------------------------------------------------------------------------
# Delta_{n,n} mod p without characteristic-0 intermediates
# ---------------------------------------------------------------------------


def _choose_field(
    p: int, n: int, m: int, deg_delta: int, deg_r: int, min_k: int = 1
) -> tuple[VecGF, bool]:
    """Pick F_{p^k}.  If some k gives gcd(n, p^k - 1) = 1 with enough nodes for
    direct delta interpolation, n-th roots are unique pointwise and we only
    need deg_delta + O(1) nodes; otherwise interpolate the full n-th power.

    The field must also be large relative to the Euclid step count m^n, or
    most nodes fall off the generic degree schedule.
    """
    slack = 8
    steps = 3 * m**n
    for k in range(min_k, 13):
        q = p**k
        if q - 1 >= max(deg_delta + 1 + slack, steps) and math.gcd(n, q - 1) == 1:
            return VecGF(p, k), True
    for k in range(min_k, 13):
        q = p**k
        if q - 1 >= max(deg_r + 1 + slack, steps):
            return VecGF(p, k), False
    raise DynatomicError("no workable extension degree below 13")


def delta_nn_mod_p(
    n: int,
    m: int,
    p: int,
    config: WorkspaceConfig | None = None,
    want_delta_at_one: bool = False,
) -> list[int]:
    """Delta_{n,n}(c) mod p as coefficients over F_p (ascending).

    Strategy: values of Res_x(Phi_n, (f^n)' - 1) = (s delta_n(1,c0))^n at
    geometric nodes of F_{p^k}; either unique pointwise n-th roots (when
    gcd(n, q-1) = 1) or interpolation of the full power followed by a
    polynomial n-th root; the leading coefficient (-1)^(nu/n) m^nu pins the
    normalization.  Lower factors Delta_{n,d} divide out exactly.
    """
    if p == 2 or p % 2 == 0 or not _is_prime_small(p):
        raise DynatomicError("p must be an odd prime")
    if m % p == 0:
        raise DynatomicError("p must not divide the family degree")
    config = config or WorkspaceConfig()
    cached = _cache_load(config, m, n, f"delta_nn_mod_{p}.txt")
    if cached is not None and not want_delta_at_one:
        return cached

    deg_delta, lc_delta = delta_lead_at_one(n, m)
    r = Family(m).orbit_count(n)
    deg_r = n * deg_delta
    sign_r = (-1) ** r
    min_k = 1
    for _attempt in range(3):
        gf, unique_roots = _choose_field(p, n, m, deg_delta, deg_r, min_k)
        count = (deg_delta if unique_roots else deg_r) + 1
        got = _settled_values(gf, n, m, count + 4)
        if got is not None:
            break
        min_k = gf.k + 1
    else:
        raise ArithmeticInconsistencyError("could not settle enough nodes")
    nodes, values = got

    if unique_roots:
        # v = (sign_r * delta(1,c0))^n has the unique n-th root v^(1/n mod q-1)
        e = pow(n, -1, gf.q - 1)
        data = gf.pow(values.astype(gf.dtype), e)
        if sign_r < 0:
            minus = gf.ones((data.shape[0],))
            minus[:, 0] = p - 1
            data = gf.mul(data, minus)
        data = data.astype(np.int64)
    else:
        data = values
    coeffs = interpolate_nodes(gf, nodes[:count], data[:count])
    poly_fp = _base_field_coeffs(gf, coeffs, "mod-p interpolation")
    _spot_check(gf, nodes[count:], data[count:], coeffs)

    if unique_roots:
        dhat = poly_fp
    else:
        rp = poly_fp
        # if p | n, the power is a Frobenius image: R(c) = V(c^(p^a))
        n_tame = n
        while n_tame % p == 0:
            n_tame //= p
            if any(v % p for i, v in enumerate(rp) if i % p):
                raise ArithmeticInconsistencyError("power is not a Frobenius image")
            rp = rp[::p]
        dhat = _poly_nth_root_fp(rp, n_tame, p, deg_delta)

    # normalize to the true leading coefficient
    dhat = _trim_mod(dhat, p)
    if len(dhat) - 1 != deg_delta:
        raise ArithmeticInconsistencyError("delta_n(1,c) mod p has wrong degree")
    want_lc = lc_delta % p
    adjust = want_lc * pow(dhat[-1], -1, p) % p
    if unique_roots:
        if adjust != 1:
            raise ArithmeticInconsistencyError("leading coefficient mismatch")
    dhat = [v * adjust % p for v in dhat]
    if want_delta_at_one:
        return dhat

    # divide out the satellite factors
    out = dhat
    for d in divisors(n)[:-1]:
        fac = [v % p for v in delta_factor(n, d, m)]
        out = _exact_div_fp(out, fac, p)
    _cache_store(config, m, n, f"delta_nn_mod_{p}.txt", out)
    return out


def _is_prime_small(p: int) -> bool:
    from .arith import is_probable_prime

    return is_probable_prime(p)


def _settled_values(
    gf: VecGF, n: int, m: int, need: int
) -> tuple[np.ndarray, np.ndarray] | None:
    """Resultant values at enough settled nodes, growing the node set as
    stragglers (schedule deviations, zeros of the resultant) eat the margin.
    Returns (nodes, values) with at least `need` rows, or None if the field
    is exhausted first."""

    def build(node_subset, shift=None):
        return build_phi_and_multiplier(gf, n, m, node_subset, shift)

    kept_nodes: list[np.ndarray] = []
    kept_values: list[np.ndarray] = []
    have = 0
    next_index = 1
    block = need + max(32, need // 8)
    while have < need and next_index < gf.q:
        hi = min(next_index + block, gf.q)
        nodes = gf.nodes_from_indices(list(range(next_index, hi)))
        next_index = hi
        values, settled = resultant_values_at_nodes(gf, nodes, build)
        sel = np.nonzero(settled)[0]
        kept_nodes.append(nodes[sel])
        kept_values.append(values[sel])
        have += sel.size
        block = max(256, need // 4)
    if have < need:
        return None
    return np.concatenate(kept_nodes), np.concatenate(kept_values)


def _trim_mod(a: list[int], p: int) -> list[int]:
    out = [v % p for v in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def _base_field_coeffs(gf: VecGF, coeffs: np.ndarray, what: str) -> list[int]:
    if gf.k > 1 and np.any(coeffs[:, 1:]):
        raise ArithmeticInconsistencyError(f"{what}: coefficients not in F_p")
    return [int(v) for v in coeffs[:, 0]]


def _spot_check(gf, spare_nodes, spare_values, coeffs) -> None:
    """Evaluate the interpolant at the spare nodes and compare."""
    if spare_nodes.shape[0] == 0:
        return
    got = evaluate_many(gf, coeffs, spare_nodes)
    if not np.array_equal(got.astype(np.int64), spare_values.astype(np.int64) % gf.p):
        raise ArithmeticInconsistencyError("interpolant fails at a spare node")


def _poly_nth_root_fp(a: list[int], n: int, p: int, deg_out: int) -> list[int]:
    """Monic n-th root of a/lc(a) over F_p, scaled back by nothing (caller
    fixes the normalization)."""
    a = _trim_mod(a, p)
    if len(a) - 1 != n * deg_out:
        raise ArithmeticInconsistencyError("power has unexpected degree")
    inv_lc = pow(a[-1], -1, p)
    rev = [v * inv_lc % p for v in a[::-1]]
    s = [1] + [0] * deg_out
    ninv = pow(n, -1, p)
    for prec in range(1, deg_out + 1):
        cur = [1]
        for _ in range(n):
            nxt = [0] * (prec + 1)
            for i, x in enumerate(cur):
                if x:
                    top = min(prec - i, deg_out)
                    for j in range(top + 1):
                        if s[j]:
                            nxt[i + j] = (nxt[i + j] + x * s[j]) % p
            cur = nxt
        want = rev[prec] if prec < len(rev) else 0
        s[prec] = (want - cur[prec]) * ninv % p
    return s[::-1]


def _exact_div_fp(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim_mod(a, p)
    b = _trim_mod(b, p)
    if not b:
        raise InexactDivisionError("mod-p division by zero")
    inv = pow(b[-1], -1, p)
    out = [0] * (len(a) - len(b) + 1)
    rem = list(a)
    for i in range(len(a) - 1, len(b) - 2, -1):
        c = rem[i] * inv % p
        out[i - len(b) + 1] = c
        if c:
            for j, v in enumerate(b):
                rem[i - len(b) + 1 + j] = (rem[i - len(b) + 1 + j] - c * v) % p
    if any(rem[: len(b) - 1]):
        raise InexactDivisionError("satellite factor does not divide mod p")
    return _trim_mod(out, p)


def _cache_key_lines(poly: list[int]) -> str:
    return ip.to_text(poly, "c") + "\n"


def _cache_load(config: WorkspaceConfig, m: int, n: int, name: str) -> list[int] | None:
    text = read_text(config.subdir(m, n) / name)
    if text is None:
        return None
    _, coeffs = ip.from_text(text.strip())
    return coeffs


def _cache_store(config: WorkspaceConfig, m: int, n: int, name: str, poly: list[int]):
    atomic_write_text(config.subdir(m, n) / name, _cache_key_lines(poly))


# ---------------------------------------------------------------------------
# cached characteristic-0 artifacts
# ---------------------------------------------------------------------------


def cached_phi(n: int, m: int, config: WorkspaceConfig) -> bp.BiPoly:
    path = config.subdir(m, n) / "phi.txt"
    text = read_text(path)
    if text is not None:
        return bp.from_lines(text.splitlines())
    config.charge_char0(Family(m).nu(n))
    out = phi(n, m)
    atomic_write_text(path, "\n".join(bp.to_lines(out)) + "\n")
    return out


def cached_delta(n: int, m: int, config: WorkspaceConfig) -> bp.BiPoly:
    path = config.subdir(m, n) / "delta.txt"
    text = read_text(path)
    if text is not None:
        return bp.from_lines(text.splitlines())
    config.charge_char0(Family(m).nu(n))
    out = delta(n, m)
    atomic_write_text(path, "\n".join(bp.to_lines(out, xvar="t")) + "\n")
    return out


def cached_delta_factor(n: int, d: int, m: int, config: WorkspaceConfig) -> list[int]:
    path = config.subdir(m, n) / f"Delta_{n}_{d}.txt"
    text = read_text(path)
    if text is not None:
        _, coeffs = ip.from_text(text.strip())
        return coeffs
    if d == n:
        config.charge_char0(Family(m).nu(n))
    out = delta_factor(n, d, m)
    atomic_write_text(path, ip.to_text(out, "c") + "\n")
    return out
