"""Good/bad reduction and geometric irreducibility of the dynatomic curves.

classify_prime applies every machine-checkable criterion to (n, p) and
records which rules fired with the valuations that triggered them; the
criteria never conflict, so the verdict is the join.  singularity_test checks
smoothness of the affine curve mod p directly from the vanishing of the
dynatomic polynomial and its partials.  candidate_bad_primes reproduces the
resultant-gcd search for primes worth testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import bipoly as bp
from . import intpoly as ip
from .arith import divisors
from .cache import WorkspaceConfig, atomic_write_text, read_text
from .dynpoly import (
    Family,
    cached_delta_factor,
    delta_factor,
    delta_nn_mod_p,
    phi,
)
from .errors import (
    ArithmeticInconsistencyError,
    DynatomicError,
    InsufficientDataError,
    WorkBudgetError,
)
from .factortab import factor_integer
from .fq import Fq, FqField, peval, pgcd, ptrim, roots_with_multiplicity
from .resultants import modular_resultant_values, resultant_x
from .vecgf import VecGF, interpolate_nodes


# ---------------------------------------------------------------------------
# valuations of the discriminant factors
# ---------------------------------------------------------------------------


class FactorValuations:
    """v_p of the discriminants/resultants of the Delta_{n,d}.

    Satellite factors are exact integers for every n.  The column involving
    Delta_{n,n} is exact for n within the characteristic-0 budget and is
    otherwise probed modulo p (zero / nonzero, with a lift distinguishing
    valuation one when requested).
    """

    def __init__(self, n: int, m: int, config: WorkspaceConfig | None = None):
        self.n, self.m = n, m
        self.config = config or WorkspaceConfig()
        self.divs = divisors(n)
        self.deltas = {d: delta_factor(n, d, m) for d in self.divs[:-1]}
        nu = Family(m).nu(n)
        self.char0 = nu * nu <= self.config.work_budget
        if self.char0:
            self.deltas[n] = delta_factor(n, n, m)
        self._disc: dict[int, int] = {}
        self._res: dict[tuple[int, int], int] = {}

    def disc_of(self, d: int) -> int:
        if d not in self._disc:
            poly = self.deltas[d]
            self._disc[d] = 1 if ip.deg(poly) < 2 else ip.discriminant(poly)
        return self._disc[d]

    def res_of(self, d: int, e: int) -> int:
        key = (min(d, e), max(d, e))
        if key not in self._res:
            self._res[key] = ip.resultant(self.deltas[key[0]], self.deltas[key[1]])
        return self._res[key]

    def v_disc(self, p: int, d: int) -> int:
        if d == self.n and not self.char0:
            return self._probe_disc_nn(p)
        return _vp(self.disc_of(d), p)

    def v_res(self, p: int, d: int, e: int) -> int:
        if self.n in (d, e) and not self.char0:
            return self._probe_res_nn(p, min(d, e))
        return _vp(self.res_of(d, e), p)

    def v_dn(self, p: int) -> int:
        """v_p of the full discriminant of delta_n(1, c)."""
        total = 0
        for i, d in enumerate(self.divs):
            total += self.v_disc(p, d)
            for e in self.divs[i + 1 :]:
                total += 2 * self.v_res(p, d, e)
        return total

    # --- mod-p probes for the orbit-collision factor ---

    def _delta_nn_mod(self, p: int) -> list[int]:
        return delta_nn_mod_p(self.n, self.m, p, config=self.config)

    def _probe_disc_nn(self, p: int) -> int:
        dnn = self._delta_nn_mod(p)
        if _disc_fp(dnn, p) != 0:
            return 0
        raise InsufficientDataError(
            f"v_{p}(disc Delta_{{{self.n},{self.n}}}) is positive; the exact "
            "valuation needs the characteristic-0 table"
        )

    def _probe_res_nn(self, p: int, e: int) -> int:
        dnn = self._delta_nn_mod(p)
        other = [v % p for v in self.deltas[e]]
        if _res_fp(dnn, other, p) != 0:
            return 0
        raise InsufficientDataError(
            f"v_{p}(Res(Delta_{{{self.n},{e}}}, Delta_{{{self.n},{self.n}}})) "
            "is positive; the exact valuation needs the characteristic-0 table"
        )


def _vp(value: int, p: int) -> int:
    if value == 0:
        raise DynatomicError("valuation of zero")
    v = 0
    while value % p == 0:
        value //= p
        v += 1
    return v


def _trim_fp(a: list[int], p: int) -> list[int]:
    a = [v % p for v in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _res_fp(a: list[int], b: list[int], p: int) -> int:
    """Resultant over F_p by monic-normalized Euclid."""
    a, b = _trim_fp(a, p), _trim_fp(b, p)
    if not a or not b:
        return 0
    res = 1
    if len(a) < len(b):
        a, b = b, a
        if (len(a) - 1) * (len(b) - 1) % 2:
            res = p - 1
    while len(b) > 1:
        eta = b[-1]
        res = res * pow(eta, len(a) - 1, p) % p
        inv = pow(eta, -1, p)
        bm = [v * inv % p for v in b]
        da, db = len(a) - 1, len(b) - 1
        r = list(a)
        while len(r) >= len(b):
            c = r[-1]
            sh = len(r) - len(b)
            for j in range(len(b)):
                r[sh + j] = (r[sh + j] - c * bm[j]) % p
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        if not r:
            return 0
        if da * db % 2:
            res = res * (p - 1) % p
        a, b = bm, r
    if len(b) == 1:
        res = res * pow(b[0], len(a) - 1, p) % p
    return res % p


def _disc_fp(a: list[int], p: int) -> int:
    a = _trim_fp(a, p)
    d = len(a) - 1
    if d < 1:
        raise DynatomicError("discriminant needs degree >= 1")
    if d == 1:
        return 1
    da = _trim_fp([i * a[i] for i in range(1, len(a))], p)
    r = _res_fp(a, da, p)
    sign = p - 1 if (d * (d - 1) // 2) % 2 else 1
    return r * sign % p * pow(a[-1], -1, p) % p


# ---------------------------------------------------------------------------
# the rule engine
# ---------------------------------------------------------------------------


GOOD, BAD, UNKNOWN = "good", "bad", "unknown"
IRRED, REDUCIBLE = "geometrically-irreducible", "reducible"


@dataclass
class PrimeClassification:
    n: int
    m: int
    p: int
    curve: str  # "Y0" | "Y1"
    reduction: str = UNKNOWN
    irreducibility: str = UNKNOWN
    rules_fired: list[tuple[str, dict]] = field(default_factory=list)

    def fire(self, rule: str, data: dict, reduction: str | None = None,
             irreducibility: str | None = None) -> None:
        self.rules_fired.append((rule, data))
        if reduction is not None:
            if self.reduction not in (UNKNOWN, reduction):
                raise ArithmeticInconsistencyError(
                    f"{self.curve}({self.n}) mod {self.p}: rule {rule} "
                    f"contradicts earlier verdict"
                )
            self.reduction = reduction
        if irreducibility is not None:
            if self.irreducibility not in (UNKNOWN, irreducibility):
                raise ArithmeticInconsistencyError(
                    f"{self.curve}({self.n}) mod {self.p}: rule {rule} "
                    f"contradicts earlier irreducibility"
                )
            self.irreducibility = irreducibility


def classify_prime(
    n: int, m: int, p: int, config: WorkspaceConfig | None = None,
    vals: FactorValuations | None = None, use_special_fibers: bool = True,
) -> dict[str, PrimeClassification]:
    """Apply every checkable criterion; returns {"Y0": ..., "Y1": ...}."""
    config = config or WorkspaceConfig()
    y0 = PrimeClassification(n, m, p, "Y0")
    y1 = PrimeClassification(n, m, p, "Y1")
    out = {"Y0": y0, "Y1": y1}
    if p == 2 or m % p == 0:
        for c in out.values():
            c.fire("out-of-scope-prime", {"p": p})
        return out
    vals = vals or FactorValuations(n, m, config)

    def v_disc(d):
        return vals.v_disc(p, d)

    def v_res(d, e):
        return vals.v_res(p, d, e)

    try:
        v_nn = v_disc(n)
    except InsufficientDataError:
        v_nn = None
    # orbit curve first
    if v_nn == 0:
        y0.fire("orbit-discriminant-coprime", {"v_p(D_nn)": 0},
                reduction=GOOD, irreducibility=IRRED)
    elif v_nn == 1:
        y0.fire("orbit-discriminant-valuation-one", {"v_p(D_nn)": 1},
                reduction=BAD)
        y0.fire("irreducible-at-valuation-one", {"v_p(D_nn)": 1},
                irreducibility=IRRED)
    if use_special_fibers and (v_nn is None or v_nn > 1) and (
        (2**n - 1) % p == 0 or (2**n + 1) % p == 0
    ) and m == 2:
        from .fibers import fiber_report

        rep = fiber_report(n, p, config=config)
        if rep.verdict == "good":
            y0.fire("special-fiber-collisions-accounted",
                    {"centers": "0,-2"}, reduction=GOOD)

    # point curve
    if n > 3 and n % p == 0:
        y1.fire("prime-divides-period", {"n": n, "p": p}, reduction=BAD)
    try:
        v_dn = vals.v_dn(p)
    except InsufficientDataError:
        v_dn = None
    if v_dn == 0:
        y1.fire("discriminant-coprime", {"v_p(D_n)": 0},
                reduction=GOOD, irreducibility=IRRED)
    elif v_dn == 1:
        y1.fire("discriminant-valuation-one", {"v_p(D_n)": 1}, reduction=BAD)
    if v_dn is not None and v_dn > 0:
        # good reduction when only the resultants against the top factor carry p
        try:
            v_res_top = sum(v_res(e, n) for e in vals.divs[:-1])
            if v_dn == 2 * v_res_top and v_res_top > 0:
                y1.fire("satellite-collision-only",
                        {"v_p": v_dn, "from-resultants": v_res_top},
                        reduction=GOOD)
        except InsufficientDataError:
            pass
        # good reduction when only the fixed-point (and period-2) factors carry p
        low = [1] if n % 2 else [1, 2]
        low = [d for d in low if d in vals.divs and d != n]
        if n > 2 and p != 2 and n % p:
            try:
                v_low = sum(v_disc(d) for d in low)
                if v_low > 0 and v_dn == v_low:
                    y1.fire("low-period-discriminant-only",
                            {"v_p": v_dn, "low-periods": low}, reduction=GOOD)
            except InsufficientDataError:
                pass
    # transfers between the two curves
    is_prime_n = len(vals.divs) == 2 and n > 1
    if is_prime_n and p != n and (m * (m - 1)) % p != 0:
        # good/bad reduction transfers both ways when the period is prime
        if y0.reduction != UNKNOWN and y1.reduction == UNKNOWN:
            y1.fire("prime-period-transfer", {"from": "Y0"},
                    reduction=y0.reduction)
        elif y1.reduction != UNKNOWN and y0.reduction == UNKNOWN:
            y0.fire("prime-period-transfer", {"from": "Y1"},
                    reduction=y1.reduction)
    if ((m - 1) * m * n) % p != 0:
        if y0.irreducibility != UNKNOWN and y1.irreducibility == UNKNOWN:
            y1.fire("cyclic-cover-irreducibility-transfer", {"from": "Y0"},
                    irreducibility=y0.irreducibility)
        elif y1.irreducibility != UNKNOWN and y0.irreducibility == UNKNOWN:
            y0.fire("cyclic-cover-irreducibility-transfer", {"from": "Y1"},
                    irreducibility=y1.irreducibility)
    return out


# ---------------------------------------------------------------------------
# direct singularity testing
# ---------------------------------------------------------------------------


@dataclass
class SingularityReport:
    n: int
    m: int
    p: int
    singular_points: list[tuple[Fq, Fq]]
    smooth: bool


def singularity_test(
    n: int, m: int, p: int, config: WorkspaceConfig | None = None
) -> SingularityReport:
    """Searches for common zeros of the dynatomic polynomial and both
    partial derivatives mod p; each reported point is re-verified."""
    config = config or WorkspaceConfig()
    if p == 2 or m % p == 0:
        raise DynatomicError("test needs an odd prime not dividing the degree")
    fam = Family(m)
    nu = fam.nu(n)
    if nu * nu > 16 * config.work_budget:
        raise WorkBudgetError("dynatomic degree beyond the direct-test budget")
    Phi = phi(n, m)
    phix = bp.derivative_x(Phi)
    phic = bp.derivative_c(Phi)
    r1 = _res_mod_p_poly(Phi, phix, p)
    r2 = _res_mod_p_poly(Phi, phic, p)
    if not r1 or not r2:
        raise ArithmeticInconsistencyError("degenerate resultant mod p")
    F = FqField.of(p, 1)
    g = pgcd(F, [(v,) for v in r1], [(v,) for v in r2])
    verified: list[tuple[Fq, Fq]] = []
    if len(g) > 1:
        for c_root, _dc, _mc in roots_with_multiplicity(F, g):
            E = c_root.field
            c0 = c_root.value
            fphi = ptrim(E, [peval(E, [E.scalar(c) for c in q], c0) for q in _grid(Phi, p)])
            fx = ptrim(E, [peval(E, [E.scalar(c) for c in q], c0) for q in _grid(phix, p)])
            fc = ptrim(E, [peval(E, [E.scalar(c) for c in q], c0) for q in _grid(phic, p)])
            gg = pgcd(E, pgcd(E, fphi, fx), fc)
            for E2, x0, c2 in _roots_everywhere(E, gg, c0):
                ok = all(
                    E2.is_zero(_eval_bi(P, x0, c2, E2, p))
                    for P in (Phi, phix, phic)
                )
                if not ok:
                    raise ArithmeticInconsistencyError(
                        "singular point failed re-check"
                    )
                verified.append((Fq(E2, x0), Fq(E2, c2)))
    return SingularityReport(n, m, p, verified, smooth=not verified)


def _roots_everywhere(E: FqField, poly: list, c0):
    """All roots of poly (over E) in the splitting field, paired with the
    image of c0 there: yields (field, root, c0_image)."""
    from .fq import (
        distinct_degree_split,
        equal_degree_roots,
        pdeg,
        squarefree_part,
    )
    import random

    if pdeg(poly) < 1:
        return
    rng = random.Random(4242)
    sf = squarefree_part(E, poly)
    for d, prod in distinct_degree_split(E, sf):
        for h in equal_degree_roots(E, prod, d, rng):
            if d == 1:
                yield E, E.neg(h[0]), c0
                continue
            E2 = FqField.of(E.p, E.k * d)
            embed = _embedding(E, E2)
            h2 = [embed(cf) for cf in h]
            x0 = _one_root(E2, h2)
            c2 = embed(c0)
            for _ in range(d):  # conjugates over E share c0
                yield E2, x0, c2
                x0 = E2.pow(x0, E.q)


def _embedding(E: FqField, E2: FqField):
    """A field embedding E -> E2 (E2 degree a multiple of E's)."""
    modulus = [E2.scalar(t) for t in E.tail] + [E2.one()]
    rho = _one_root(E2, modulus)

    def embed(a):
        acc = E2.zero()
        for coef in reversed(a):
            acc = E2.add(E2.mul(acc, rho), E2.scalar(coef))
        return acc

    return embed


def _one_root(E: FqField, poly: list):
    """Some root in E of a polynomial that splits in E."""
    from .fq import pdeg, pdivmod, pmonic, ppowmod, psub

    import random

    rng = random.Random(2718)
    x = [E.zero(), E.one()]
    xq = ppowmod(E, x, E.q, poly)
    f = pgcd(E, psub(E, xq, x), poly)
    if pdeg(f) < 1:
        raise DynatomicError("polynomial has no root in the field")
    while pdeg(f) > 1:
        r = ptrim(E, [tuple(rng.randrange(E.p) for _ in range(E.k)) for _ in range(pdeg(f))])
        if pdeg(r) < 1:
            continue
        h = ppowmod(E, r, (E.q - 1) // 2, f)
        gshared = pgcd(E, psub(E, h, [E.one()]), f)
        if 0 < pdeg(gshared) < pdeg(f):
            f = gshared if pdeg(gshared) <= pdeg(f) - pdeg(gshared) else pmonic(
                E, pdivmod(E, f, gshared)[0]
            )
    return E.neg(pmonic(E, f)[0])


def _eval_bi(P: bp.BiPoly, xv, cv, E: FqField, p: int):
    acc = E.zero()
    for q in reversed(P):
        acc = E.mul(acc, xv)
        if q:
            val = peval(E, [E.scalar(v % p) for v in q], cv)
            acc = E.add(acc, val)
    return acc


def _grid(P: bp.BiPoly, p: int) -> list[list[int]]:
    return [[v % p for v in q] for q in P]


def _res_mod_p_poly(a: bp.BiPoly, b: bp.BiPoly, p: int) -> list[int]:
    """Res_x(a, b) mod p as a polynomial in c (settled-node interpolation)."""
    deg_bound = bp.deg_x(b) * max(bp.deg_c(a), 0) + bp.deg_x(a) * max(bp.deg_c(b), 0)
    need = deg_bound + 1
    k = 1
    while p**k - 1 < 3 * need // 2 + 32:
        k += 1
    gf = VecGF(p, k)
    total = min(need + max(64, need // 8), gf.q - 1)
    nodes = gf.nodes_from_indices(list(range(1, total + 1)))
    vals, settled = modular_resultant_values_ext(a, b, gf, nodes)
    keep = np.nonzero(settled)[0]
    if keep.size < need + 2:
        raise ArithmeticInconsistencyError("not enough settled nodes mod p")
    use = keep[:need]
    coeffs = interpolate_nodes(gf, nodes[use], vals[use])
    if gf.k > 1 and np.any(coeffs[:, 1:]):
        raise ArithmeticInconsistencyError("resultant not defined over F_p")
    out = [int(v) for v in coeffs[:, 0]]
    while out and out[-1] == 0:
        out.pop()
    return out


def modular_resultant_values_ext(
    a: bp.BiPoly, b: bp.BiPoly, gf: VecGF, nodes: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Like resultants.modular_resultant_values but over F_{p^k} nodes."""
    from .vecgf import resultant_values_at_nodes, vec_resultants

    p = gf.p
    ga = [[v % p for v in q] for q in a]
    gb = [[v % p for v in q] for q in b]

    def build(node_subset, shift=None):
        A = _eval_grid_ext(gf, ga, node_subset, shift)
        B = _eval_grid_ext(gf, gb, node_subset, shift)
        return A, B

    return resultant_values_at_nodes(gf, nodes, build)


def _eval_grid_ext(gf: VecGF, grid: list[list[int]], nodes: np.ndarray, shift):
    """Evaluate a BiPoly coefficient grid at field nodes -> (deg_x+1, N, k)."""
    N = nodes.shape[0]
    dx = len(grid) - 1
    out = gf.zeros((dx + 1, N))
    for i, q in enumerate(grid):
        if not q:
            continue
        acc = gf.zeros((N,)).astype(np.int64)
        for v in reversed(q):
            acc = gf.mul(acc.astype(gf.dtype), nodes).astype(np.int64)
            acc[:, 0] += v
            acc %= gf.p
        out[i] = acc.astype(gf.dtype)
    if shift is not None and any(shift):
        out = _shift_x_ext(gf, out, shift)
    return out


def _shift_x_ext(gf: VecGF, P: np.ndarray, shift) -> np.ndarray:
    """P(x + t) from P(x) by synthetic Taylor shift over the node batch."""
    dx = P.shape[0] - 1
    t = np.asarray(shift, dtype=gf.dtype)[None, :]
    out = P.astype(gf.dtype).copy()
    for i in range(dx):
        for j in range(dx - 1, i - 1, -1):
            prod = gf.mul(out[j + 1], np.broadcast_to(t, out[j + 1].shape))
            out[j] = (out[j].astype(np.int64) + prod) % gf.p
            out[j] = out[j].astype(gf.dtype)
    return out


# ---------------------------------------------------------------------------
# candidate bad primes
# ---------------------------------------------------------------------------


def candidate_bad_primes(
    n: int, m: int = 2, config: WorkspaceConfig | None = None
) -> tuple[set[int], bool]:
    """A superset of the odd bad primes exceeding n, from resultant gcds.

    Pieces of Res_x(Phi, Phi_x) are the cyclotomic factors; these are played
    against Res_x(Phi, Phi_c) and Res_x(Phi_x, Phi_c).  Returns (primes,
    complete) where complete is False if some gcd resisted factorization.
    """
    config = config or WorkspaceConfig()
    fam = Family(m)
    config.charge_char0(fam.nu(n))
    Phi = phi(n, m)
    phix = bp.derivative_x(Phi)
    phic = bp.derivative_c(Phi)
    r2 = _cached_resultant(n, m, "r2", Phi, phic, config)
    r3 = _cached_resultant(n, m, "r3", phix, phic, config)
    candidates: set[int] = set()
    complete = True
    for poly in (r2, r3):
        c = ip.content(poly)
        if c > 1:
            tab = factor_integer(c, config.trial_bound)
            candidates.update(tab.prime_set())
            complete &= tab.complete
    for d in divisors(n):
        piece = delta_factor(n, d, m)
        if ip.deg(piece) < 1:
            continue
        g = math.gcd(_res_int(piece, r2), _res_int(piece, r3))
        if g == 0:
            complete = False
            continue
        tab = factor_integer(g, config.trial_bound)
        candidates.update(tab.prime_set())
        if not tab.complete:
            complete = False
    return {q for q in candidates if q > n and q % 2}, complete


def _res_int(small: list[int], big: list[int]) -> int:
    """Res_c(small, big) with deg(small) tiny: reduce then finish by PRS."""
    return ip.resultant(small, big)


def _cached_resultant(
    n: int, m: int, tag: str, a: bp.BiPoly, b: bp.BiPoly, config: WorkspaceConfig
) -> list[int]:
    path = config.subdir(m, n) / f"resultant_{tag}.txt"
    text = read_text(path)
    if text is not None:
        return ip.from_text(text.strip())[1]
    out = resultant_x(a, b)
    atomic_write_text(path, ip.to_text(out, "c") + "\n")
    return out


def gonality_bound(n: int, m: int, p: int) -> Fraction:
    """nu(n) / (m n (p^m + 1)): the lower bound for the gonality of the
    reduced orbit curve coming from counting points over F_{p^m}."""
    return Fraction(Family(m).nu(n), m * n * (p**m + 1))
