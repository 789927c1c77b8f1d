"""Reduction of the orbit curve above c = 0 and c = -2 for x^2 + c.

At c = 0 the dynamics is squaring on roots of unity of order dividing 2^n - 1;
at c = -2 it lives on zeta + 1/zeta with zeta of order dividing 2^n -+ 1.
Collisions modulo p | 2^n -+ 1 are pure arithmetic on CRT components, which
gives the ramification data of the reduced fiber; comparing the resulting
discriminant contribution with the c- and (c+2)-adic valuations of
Delta_{n,n} mod p decides smoothness above those points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import divisors
from .cache import WorkspaceConfig
from .dynpoly import Family, delta_factor, delta_nn_mod_p
from .errors import DynatomicError


@dataclass
class UnityIndexSet:
    """Indices of the points of formal period n above the center.

    center 0: elements are residues i mod 2^n - 1 (the root of unity zeta^i).
    center -2: elements are (side, i) with side +-1 selecting the modulus
    2^n - side ... stored as (side, representative of {i, -i}).
    """

    n: int
    center: int
    elements: list
    moduli: dict

    def __len__(self) -> int:
        return len(self.elements)


def formal_period_points(n: int, center: int) -> UnityIndexSet:
    if center == 0:
        M = 2**n - 1
        excluded = set()
        for d in divisors(n)[:-1]:
            step = M // (2**d - 1)
            excluded.update(range(0, M, step))
        elements = [i for i in range(M) if i not in excluded]
        out = UnityIndexSet(n, 0, elements, {0: M})
    elif center == -2:
        elements = []
        moduli = {}
        for side in (+1, -1):
            M = 2**n - side
            moduli[side] = M
            excluded = set()
            for d in divisors(n)[:-1]:
                for s in (+1, -1):
                    sub = 2**d - s
                    if M % sub == 0:
                        step = M // sub
                        excluded.update(range(0, M, step))
            seen = set()
            for i in range(M):
                if i in excluded:
                    continue
                rep = min(i, (M - i) % M)
                if rep in seen:
                    continue
                seen.add(rep)
                elements.append((side, rep))
        out = UnityIndexSet(n, -2, elements, moduli)
    else:
        raise DynatomicError("center must be 0 or -2")
    expected = Family(2).nu(n)
    if len(out) != expected:
        raise DynatomicError(
            f"index set has {len(out)} elements, expected nu({n}) = {expected}"
        )
    return out


def _orbit(i: int, M: int, n: int) -> tuple[int, ...]:
    """Doubling orbit of i mod M, canonical (min-rotation-first) tuple."""
    orb = []
    cur = i
    for _ in range(n):
        orb.append(cur)
        cur = cur * 2 % M
    if cur != i:
        raise DynatomicError("orbit length does not divide n")
    lead = min(orb)
    j = orb.index(lead)
    return tuple(orb[j:] + orb[:j])


def _orbit_pm(i: int, M: int, n: int) -> tuple[int, ...]:
    """Doubling orbit of {i, -i} mod M, canonical representative tuple."""
    orb = []
    cur = i
    for _ in range(n):
        orb.append(min(cur, (M - cur) % M))
        cur = cur * 2 % M
    lead = min(orb)
    j = orb.index(lead)
    return tuple(orb[j:] + orb[:j])


@dataclass
class FiberOrbit:
    """One point of the reduced orbit curve above the center."""

    representative: tuple
    length: int
    ramification_index: int
    wild: bool


def _split_modulus(M: int, p: int) -> tuple[int, int]:
    k = 0
    while M % p == 0:
        M //= p
        k += 1
    return k, M


def orbits_mod_p(n: int, center: int, p: int, level: int = 0) -> list[FiberOrbit]:
    """Collision classes of the formal-period-n points modulo p.

    level 0 groups doubling orbits (points of the orbit curve); level 1 works
    with the points themselves.  Ramification index = number of
    characteristic-zero objects landing in the class.
    """
    pts = formal_period_points(n, center)
    if center == 0:
        M = pts.moduli[0]
        if M % p:
            raise DynatomicError("no collision at this center for this prime")
        pk, m = _split_modulus(M, p)
        classes: dict = {}
        if level == 0:
            orbits = sorted({_orbit(i, M, n) for i in pts.elements})
            for orb in orbits:
                key = tuple(sorted({j % m for j in orb}))
                classes.setdefault(key, []).append(orb)
        else:
            for i in pts.elements:
                classes.setdefault(i % m, []).append(i)
        return _classes_to_orbits(classes, n, p, level)
    # center -2
    sides = [s for s in (+1, -1) if pts.moduli[s] % p == 0]
    if not sides:
        raise DynatomicError("no collision at this center for this prime")
    side = sides[0]
    M = pts.moduli[side]
    pk, m = _split_modulus(M, p)
    classes = {}
    untouched = []
    if level == 0:
        per_side: dict = {+1: set(), -1: set()}
        for s, i in pts.elements:
            per_side[s].add(_orbit_pm(i, pts.moduli[s], n))
        for orb in sorted(per_side[side]):
            key = tuple(sorted({min(j % m, (m - j % m) % m) for j in orb}))
            classes.setdefault(key, []).append(orb)
        untouched = sorted(per_side[-side])
    else:
        for s, i in pts.elements:
            if s == side:
                classes.setdefault(min(i % m, (m - i % m) % m), []).append(i)
            else:
                untouched.append(i)
    out = _classes_to_orbits(classes, n, p, level)
    for rep in untouched:
        out.append(
            FiberOrbit(
                representative=rep if isinstance(rep, tuple) else (rep,),
                length=n,
                ramification_index=1,
                wild=False,
            )
        )
    return out


def _classes_to_orbits(classes: dict, n: int, p: int, level: int) -> list[FiberOrbit]:
    out = []
    for key in sorted(classes):
        members = classes[key]
        e = len(members)
        rep = members[0] if isinstance(members[0], tuple) else (members[0],)
        out.append(
            FiberOrbit(
                representative=rep,
                length=n if level == 0 else 1,
                ramification_index=e,
                wild=e % p == 0,
            )
        )
    return out


@dataclass
class CenterReport:
    rho: int | None
    rho_bar: int
    rho_bar_is_exact: bool  # tame, or wild with matching bound
    tame: bool
    e_list: list[tuple[int, int]]  # (index, multiplicity), indices > 1 only


@dataclass
class FiberReport:
    n: int
    p: int
    at_zero: CenterReport | None
    at_minus_two: CenterReport | None
    other_singular_factors: list[int]  # mod-p poly, constant if none
    verdict: str  # "good" | "inconclusive"
    notes: list[str] = field(default_factory=list)


def _center_report(n: int, p: int, center: int, rho: int) -> CenterReport:
    orbits = orbits_mod_p(n, center, p, level=0)
    fam = Family(2)
    total = sum(o.ramification_index for o in orbits)
    if total != fam.orbit_count(n):
        raise DynatomicError("orbit multiplicities do not add up to nu(n)/n")
    tame = all(not o.wild for o in orbits)
    t = len(orbits)
    s_wild = sum(1 for o in orbits if o.wild)
    base = fam.orbit_count(n) - t
    if tame:
        rho_bar, exact = base, True
    else:
        rho_bar = base + s_wild  # lower bound
        exact = rho_bar == rho
    counts: dict[int, int] = {}
    for o in orbits:
        if o.ramification_index > 1:
            counts[o.ramification_index] = counts.get(o.ramification_index, 0) + 1
    e_list = sorted(counts.items(), reverse=True)
    return CenterReport(
        rho=rho, rho_bar=rho_bar, rho_bar_is_exact=exact, tame=tame, e_list=e_list
    )


def _root_multiplicity(poly: list[int], p: int, at: int) -> tuple[int, list[int]]:
    """(multiplicity of `at` as a root mod p, quotient by (c - at)^mult)."""
    cnt = 0
    cur = [v % p for v in poly]
    while cur:
        acc = 0
        synth = []
        for c in reversed(cur):
            acc = (acc * at + c) % p
            synth.append(acc)
        if synth[-1] % p:
            break
        cur = synth[:-1][::-1]
        cnt += 1
    return cnt, cur


def _gcd_fp(a: list[int], b: list[int], p: int) -> list[int]:
    a = [v % p for v in a]
    b = [v % p for v in b]

    def trim(x):
        while x and x[-1] == 0:
            x.pop()
        return x

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            sh = len(a) - len(b)
            for j in range(len(b)):
                a[sh + j] = (a[sh + j] - c * b[j]) % p
            trim(a)
            if not a:
                break
        a, b = b, a
    if a:
        inv = pow(a[-1], -1, p)
        a = [v * inv % p for v in a]
    return a


def fiber_report(
    n: int, p: int, config: WorkspaceConfig | None = None
) -> FiberReport:
    """Smoothness analysis of the reduced orbit curve above c = 0 and c = -2."""
    config = config or WorkspaceConfig()
    dnn = delta_nn_mod_p(n, 2, p, config=config)
    rho0, rest = _root_multiplicity(dnn, p, 0)
    rho2, _ = _root_multiplicity(dnn, p, (-2) % p)
    # Gamma_{n,p} = gcd(Delta_nn, Delta_nn') mod p; factor off c^a (c+2)^b
    deriv = [(i * dnn[i]) % p for i in range(1, len(dnn))]
    gamma = _gcd_fp(dnn, deriv, p)
    g0, gtail = _root_multiplicity(gamma, p, 0)
    g2, gtail = _root_multiplicity(gtail, p, (-2) % p)
    other = gtail
    notes = []
    reports = {}
    for center, rho in ((0, rho0), (-2, rho2)):
        M = 2**n - (1 if center == 0 else -1)
        applies = (M % p == 0) or (center == -2 and (2**n - 1) % p == 0)
        if center == -2:
            applies = ((2**n - 1) % p == 0) or ((2**n + 1) % p == 0)
        if not applies:
            if rho:
                notes.append(f"rho at center {center} nonzero without collisions")
            reports[center] = None
            continue
        reports[center] = _center_report(n, p, center, rho)
    good = True
    for center in (0, -2):
        rep = reports[center]
        rho = rho0 if center == 0 else rho2
        if rep is None:
            if rho:
                good = False
            continue
        if not rep.rho_bar_is_exact or rep.rho_bar != rep.rho:
            good = False
            notes.append(
                f"center {center}: contribution {rep.rho_bar}"
                f"{'' if rep.tame else ' (wild lower bound)'} vs {rep.rho}"
            )
    if len(other) > 1:
        good = False
        notes.append("extra singular factor away from the special points")
    return FiberReport(
        n=n,
        p=p,
        at_zero=reports[0],
        at_minus_two=reports[-2],
        other_singular_factors=other,
        verdict="good" if good else "inconclusive",
        notes=notes,
    )


def format_e_list(e_list: list[tuple[int, int]]) -> str:
    if not e_list:
        return "---"
    parts = []
    for e, mult in e_list:
        parts.append(f"{e}^{mult}" if mult > 1 else str(e))
    return ",".join(parts)


def reduction_table(
    rows: list[tuple[int, int]], config: WorkspaceConfig | None = None
) -> list[dict]:
    """One record per (n, p) with the ramification data of both centers."""
    out = []
    for n, p in rows:
        try:
            rep = fiber_report(n, p, config=config)
        except DynatomicError as exc:
            out.append({"n": n, "p": p, "error": str(exc)})
            continue
        rec = {"n": n, "p": p, "verdict": rep.verdict}
        for tag, center in (("0", rep.at_zero), ("-2", rep.at_minus_two)):
            if center is None:
                rec[f"rho_{tag}"] = 0
                rec[f"rho_bar_{tag}"] = 0
                rec[f"e_{tag}"] = "---"
                rec[f"tame_{tag}"] = "yes"
                continue
            rec[f"rho_{tag}"] = center.rho
            rec[f"rho_bar_{tag}"] = center.rho_bar
            rec[f"e_{tag}"] = format_e_list(center.e_list)
            rec[f"e_{tag}_json"] = [[e, m] for e, m in center.e_list]
            rec[f"tame_{tag}"] = "yes" if center.tame else "no"
        rec["other_singularity"] = (
            "no"
            if len(rep.other_singular_factors) <= 1
            else _poly_str(rep.other_singular_factors)
        )
        out.append(rec)
    return out


def _poly_str(poly: list[int]) -> str:
    from .intpoly import pretty

    return pretty([int(v) for v in poly], "c")
