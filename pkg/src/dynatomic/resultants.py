"""Resultants with respect to x over Z[c].

Small instances go through an exact subresultant PRS.  Large ones are
assembled from machine-prime images: each image is a batch of univariate
resultant values at integer nodes (the vectorized Euclid from vecgf), and
enough primes are used to cover a rigorous l1-norm bound on the coefficients,
so the reconstruction is exact, not heuristic.
"""

from __future__ import annotations

import numpy as np

from . import bipoly as bp
from . import intpoly as ip
from .arith import balanced_mod, machine_primes
from .errors import ArithmeticInconsistencyError, DynatomicError
from .vecgf import VecGF, interpolate_nodes, resultant_values_at_nodes, vec_resultants

_PRS_LIMIT = 24  # size (min deg_x) up to which the exact PRS is used directly


def resultant_x(a: bp.BiPoly, b: bp.BiPoly) -> list[int]:
    """Res_x(a, b) in Z[c]."""
    if not a or not b:
        raise DynatomicError("resultant of a zero polynomial")
    if min(len(a), len(b)) - 1 <= _PRS_LIMIT:
        return resultant_x_prs(a, b)
    return resultant_x_modular(a, b)


def discriminant_x(a: bp.BiPoly) -> list[int]:
    """disc_x(a) = (-1)^(d(d-1)/2) Res_x(a, a_x) / lc_x(a)."""
    d = bp.deg_x(a)
    if d < 1:
        raise DynatomicError("discriminant needs degree >= 1 in x")
    r = resultant_x(a, bp.derivative_x(a))
    if (d * (d - 1) // 2) % 2:
        r = ip.neg(r)
    return ip.divexact(r, a[-1])


def resultant_x_prs(a: bp.BiPoly, b: bp.BiPoly) -> list[int]:
    """Subresultant PRS resultant; exact, fine when one degree is small."""

    def degp(P):
        q = len(P) - 1
        while q >= 0 and not P[q]:
            q -= 1
        return q

    def prem(P, Q):
        dp, dq = degp(P), degp(Q)
        R = [list(x) for x in P]
        lq = Q[dq]
        for k in range(dp - dq, -1, -1):
            c = R[dq + k] if dq + k < len(R) else []
            R = [ip.mul(x, lq) for x in R]
            if c:
                for j in range(dq + 1):
                    R[k + j] = ip.sub(R[k + j], ip.mul(c, Q[j]))
            while R and not R[-1]:
                R.pop()
        return R

    s = 1
    P = [list(x) for x in a]
    Q = [list(x) for x in b]
    while P and not P[-1]:
        P.pop()
    while Q and not Q[-1]:
        Q.pop()
    if degp(P) < degp(Q):
        P, Q = Q, P
        if (degp(P) * degp(Q)) % 2 == 1:
            s = -s
    if degp(Q) < 0:
        raise DynatomicError("resultant of a zero polynomial")
    if degp(P) == 0:
        return [s]
    g, h = [1], [1]
    while True:
        dp, dq = degp(P), degp(Q)
        if dq == 0:
            num = ip.pow_poly(Q[0], dp)
            den = ip.pow_poly(h, dp - 1)
            out = ip.divexact(num, den) if den != [1] else num
            return ip.scale(out, s)
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


def _coeff_grid_mod(a: bp.BiPoly, p: int) -> np.ndarray:
    dc = bp.deg_c(a)
    grid = np.zeros((len(a), dc + 1), dtype=np.int64)
    for i, q in enumerate(a):
        for j, v in enumerate(q):
            grid[i, j] = v % p
    return grid


def _eval_grid(grid: np.ndarray, nodes: np.ndarray, p: int) -> np.ndarray:
    """Horner in c over a node vector; returns (deg_x+1, N)."""
    vals = np.zeros((grid.shape[0], nodes.shape[0]), dtype=np.int64)
    for j in range(grid.shape[1] - 1, -1, -1):
        vals = (vals * nodes[None, :] + grid[:, j : j + 1]) % p
    return vals


def modular_resultant_values(
    a: bp.BiPoly, b: bp.BiPoly, p: int, nodes: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Values of Res_x(a, b) mod p at integer nodes; (values, settled)."""
    gf = VecGF(p, 1)
    ga = _coeff_grid_mod(a, p)
    gb = _coeff_grid_mod(b, p)

    def build(node_subset, shift=None):
        ga_l, gb_l = ga, gb
        if shift is not None and shift[0] % p:
            t = int(shift[0]) % p
            ga_l = _shift_grid_x(ga, t, p)
            gb_l = _shift_grid_x(gb, t, p)
        A = _eval_grid(ga_l, node_subset[:, 0].astype(np.int64), p)
        B = _eval_grid(gb_l, node_subset[:, 0].astype(np.int64), p)
        return A[..., None].astype(gf.dtype), B[..., None].astype(gf.dtype)

    vals, settled = resultant_values_at_nodes(gf, nodes, build)
    return vals[:, 0], settled


def _shift_grid_x(grid: np.ndarray, t: int, p: int) -> np.ndarray:
    """Coefficient grid of a(x + t, c) from that of a(x, c), mod p."""
    dx = grid.shape[0] - 1
    out = np.zeros_like(grid)
    # binomial expansion row by row: x^i -> sum_j C(i,j) t^(i-j) x^j
    binom = np.zeros((dx + 1, dx + 1), dtype=np.int64)
    for i in range(dx + 1):
        binom[i, 0] = 1
        for j in range(1, i + 1):
            binom[i, j] = (binom[i - 1, j - 1] + binom[i - 1, j]) % p
    tp = [1] * (dx + 1)
    for i in range(1, dx + 1):
        tp[i] = tp[i - 1] * t % p
    for i in range(dx + 1):
        for j in range(i + 1):
            out[j] = (out[j] + binom[i, j] * tp[i - j] % p * grid[i]) % p
    return out


def resultant_x_modular(a: bp.BiPoly, b: bp.BiPoly) -> list[int]:
    """Exact Res_x via CRT over machine primes with a rigorous norm bound."""
    dxa, dxb = bp.deg_x(a), bp.deg_x(b)
    dca, dcb = bp.deg_c(a), bp.deg_c(b)
    deg_bound = dxb * max(dca, 0) + dxa * max(dcb, 0)
    la = bp.l1_norm(a)
    lb = bp.l1_norm(b)
    coeff_bound = 2 * la**dxb * lb**dxa + 1
    primes = machine_primes(coeff_bound.bit_length() // 28 + 2, below=2**29)
    residues = np.zeros((len(primes), deg_bound + 1), dtype=np.int64)
    for pi, p in enumerate(primes):
        if p <= deg_bound + 8:
            raise DynatomicError("prime too small for the node count")
        gf = VecGF(p, 1)
        need = deg_bound + 1
        nodes_idx = list(range(1, need + 64))
        nodes = gf.nodes_from_indices(nodes_idx)
        vals, settled = modular_resultant_values(a, b, p, nodes)
        keep = np.nonzero(settled)[0]
        if keep.size < need + 4:
            raise ArithmeticInconsistencyError("not enough settled nodes mod p")
        use, spare = keep[:need], keep[need : need + 4]
        coeffs = interpolate_nodes(
            gf, nodes[use], vals[use, None].astype(np.int64)
        )
        got = coeffs[:, 0].astype(np.int64)
        # spot check
        from .vecgf import evaluate_many

        chk = evaluate_many(gf, coeffs, nodes[spare])[:, 0]
        if not np.array_equal(chk.astype(np.int64), vals[spare] % p):
            raise ArithmeticInconsistencyError("modular interpolation spot check")
        residues[pi, : got.shape[0]] = got
    # CRT with balanced lift (prefix moduli precomputed once)
    prefixes = [1]
    for p in primes:
        prefixes.append(prefixes[-1] * p)
    invs = [pow(prefixes[i] % p, -1, p) for i, p in enumerate(primes)]
    out = []
    for j in range(deg_bound + 1):
        r = int(residues[0, j])
        for i in range(1, len(primes)):
            p = primes[i]
            t = (int(residues[i, j]) - r) % p * invs[i] % p
            r += prefixes[i] * t
        out.append(balanced_mod(r, prefixes[-1]))
    return ip.trim(out)


# ---------------------------------------------------------------------------
# identity verification for the dynatomic factorization
# ---------------------------------------------------------------------------


def verify_factor_identities(n: int, m: int = 2) -> dict:
    """Exact verification that the cyclotomic factors control Res and disc.

    Checks, for every proper divisor d of n,
        Res_x(Phi_n, Phi_d) = +- Delta_{n,d}^d          (exact PRS)
    and the discriminant factorization
        disc_x(Phi_n) = +- Delta_{n,n}^n prod_d Delta_{n,d}^(n-d)
    via machine-prime certificates whose modulus exceeds twice a rigorous
    coefficient bound for both sides, which makes the equality exact.
    """
    from .arith import divisors
    from .dynpoly import delta_factor, phi

    report: dict = {"n": n, "m": m, "resultants": {}, "disc_ok": None, "signs": {}}
    Phi = phi(n, m)
    for d in divisors(n)[:-1]:
        lhs = resultant_x_prs(Phi, phi(d, m))
        rhs = ip.pow_poly(delta_factor(n, d, m), d)
        ok = lhs == rhs or lhs == ip.neg(rhs)
        report["resultants"][d] = ok
        report["signs"][d] = 1 if lhs == rhs else (-1 if ok else None)

    # right-hand side of the discriminant identity
    rhs = ip.pow_poly(delta_factor(n, n, m), n)
    for d in divisors(n)[:-1]:
        rhs = ip.mul(rhs, ip.pow_poly(delta_factor(n, d, m), n - d))
    phix = bp.derivative_x(Phi)
    lc = Phi[-1]
    if lc != [1]:
        raise ArithmeticInconsistencyError("dynatomic polynomial must be monic")
    dxa, dxb = bp.deg_x(Phi), bp.deg_x(phix)
    deg_bound = dxb * bp.deg_c(Phi) + dxa * max(bp.deg_c(phix), 0)
    disc_sign = -1 if (dxa * (dxa - 1) // 2) % 2 else 1
    coeff_bound = (
        2 * bp.l1_norm(Phi) ** dxb * bp.l1_norm(phix) ** dxa
        + 2 * ip.l1_norm(rhs)
        + 1
    )
    primes = machine_primes(coeff_bound.bit_length() // 28 + 2, below=2**29)
    sign = None
    need = deg_bound + 1
    for p in primes:
        gf = VecGF(p, 1)
        nodes = gf.nodes_from_indices(list(range(1, need + 64)))
        vals, settled = modular_resultant_values(Phi, phix, p, nodes)
        keep = np.nonzero(settled)[0]
        if keep.size < need:
            raise ArithmeticInconsistencyError("not enough settled nodes mod p")
        keep = keep[:need]
        xs = nodes[keep, 0].astype(np.int64)
        # disc = sign * Res (monic): compare against s * rhs pointwise
        lhs_vals = vals[keep] * disc_sign % p
        rhs_grid = np.array([v % p for v in rhs], dtype=np.int64)
        rhs_vals = np.zeros_like(xs)
        for j in range(rhs_grid.shape[0] - 1, -1, -1):
            rhs_vals = (rhs_vals * xs + rhs_grid[j]) % p
        if sign is None:
            nz = np.nonzero(rhs_vals)[0]
            if nz.size == 0:
                raise ArithmeticInconsistencyError("rhs vanished at all nodes")
            i0 = nz[0]
            s = lhs_vals[i0] * pow(int(rhs_vals[i0]), -1, p) % p
            if s == 1:
                sign = 1
            elif s == p - 1:
                sign = -1
            else:
                report["disc_ok"] = False
                return report
        if not np.array_equal(lhs_vals, rhs_vals * (sign % p) % p):
            report["disc_ok"] = False
            return report
    report["disc_ok"] = True
    report["signs"]["disc"] = sign
    return report
