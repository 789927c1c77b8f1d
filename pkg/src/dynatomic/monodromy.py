"""The branch-point graph on period-n binary necklaces.

Vertices are shift-orbits of exact-period-n binary words (canonical form:
lexicographically maximal rotation).  A primitive star-periodic kneading
word contributes edges between the orbits of its two resolutions, with
multiplicity half the number of angles realizing it; complementary orbit
pairs are joined by an edge for the branch point at infinity.  Sheet
permutations for the degree-nu(n) cover come from the same data.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import divisors, mobius
from .errors import DynatomicError, WorkBudgetError
from .kneading import (
    Angle,
    STAR,
    angles_of_period,
    complement,
    disparity,
    exact_period,
    is_primitive,
    kneading_sequence,
    maximal_shift,
    resolutions,
    shift,
    successor,
)


def necklace_count(n: int) -> int:
    return sum(mobius(n // d) * 2**d for d in divisors(n)) // n


def vertices(n: int) -> list[str]:
    """Canonical (maximal-rotation) exact-period-n words, sorted."""
    if n < 1:
        raise DynatomicError("need n >= 1")
    out = set()
    for bits in range(2**n):
        w = format(bits, f"0{n}b")
        if exact_period(w) == n:
            out.add(maximal_shift(w)[0])
    res = sorted(out)
    if len(res) != necklace_count(n):
        raise DynatomicError("necklace count mismatch")
    return res


@dataclass(frozen=True)
class Edge:
    kind: str  # "finite" | "infinite"
    endpoints: tuple[str, str]  # canonical itineraries, sorted
    kneading: str | None
    multiplicity: int


@dataclass
class MonodromyGraph:
    n: int
    vertices: list[str]
    finite_edges: list[Edge]
    infinite_edges: list[Edge]

    def finite_multiset(self) -> dict[tuple[str, str], int]:
        out: dict[tuple[str, str], int] = {}
        for e in self.finite_edges:
            out[e.endpoints] = out.get(e.endpoints, 0) + e.multiplicity
        return out

    def total_finite_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.finite_edges)


def vertex_of(word: str) -> str:
    return maximal_shift(word)[0]


def build_graph(n: int) -> MonodromyGraph:
    """Edges from primitive kneading classes and complement pairs."""
    if n < 2:
        raise DynatomicError("the graph is built for n >= 2 only")
    verts = vertices(n)
    vset = set(verts)
    counts: dict[str, int] = {}
    for theta in angles_of_period(n):
        K = kneading_sequence(theta)
        counts[K] = counts.get(K, 0) + 1
    finite: list[Edge] = []
    for K in sorted(counts):
        if not is_primitive(K):
            continue
        if counts[K] % 2:
            raise DynatomicError(f"odd number of angles for kneading word {K}")
        k0, k1 = resolutions(K)
        a, b = vertex_of(k0), vertex_of(k1)
        if a not in vset or b not in vset:
            raise DynatomicError("resolution does not have full period")
        finite.append(
            Edge(
                kind="finite",
                endpoints=tuple(sorted((a, b))),
                kneading=K,
                multiplicity=counts[K] // 2,
            )
        )
    infinite: list[Edge] = []
    seen = set()
    for v in verts:
        w = vertex_of(complement(v))
        if v == w:
            continue  # self-complementary vertex: fixed point, no edge
        key = tuple(sorted((v, w)))
        if key in seen:
            continue
        seen.add(key)
        infinite.append(Edge("infinite", key, None, 1))
    return MonodromyGraph(n, verts, finite, infinite)


def successor_edges(n: int) -> list[Edge]:
    """The guaranteed disparity-raising edges below the top vertex."""
    out = []
    for v in vertices(n):
        if disparity(v) >= n - 2:
            continue
        s = successor(v)
        mult = 2 if disparity(v) >= 0 else 1
        out.append(Edge("finite", tuple(sorted((v, s))), v[:-1] + STAR, mult))
    return out


# ---------------------------------------------------------------------------
# sheet permutations of the degree-nu(n) cover
# ---------------------------------------------------------------------------


@dataclass
class SheetPermutation:
    kind: str  # "primitive" | "satellite" | "infinity"
    kneading: str | None
    rotation: Fraction | None  # satellite multiplier rotation number
    copies: int  # identical branch points inducing this permutation
    mapping: dict[str, str]  # sheet itinerary -> image itinerary

    def cycles(self) -> list[tuple[str, ...]]:
        seen = set()
        out = []
        for start in sorted(self.mapping):
            if start in seen or self.mapping[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            cur = self.mapping[start]
            while cur != start:
                cyc.append(cur)
                seen.add(cur)
                cur = self.mapping[cur]
            out.append(tuple(cyc))
        return out


def _rotation_number(theta: Angle, parent: int) -> Fraction:
    """Rotation number of a satellite branch point bifurcating from a
    period-`parent` component: the q = n/parent angles 2^(j parent) theta
    are a combinatorial rotation under multiplication by 2^parent."""
    den = theta.den
    step = pow(2, parent, den)
    sub = []
    cur = theta.num
    for _ in range(theta.period // parent):
        sub.append(cur)
        cur = cur * step % den
    if cur != theta.num:
        raise DynatomicError("satellite sub-orbit has the wrong length")
    order = sorted(sub)
    pos = {v: i for i, v in enumerate(order)}
    q = len(sub)
    adv = {(pos[v * step % den] - pos[v]) % q for v in sub}
    if len(adv) != 1:
        raise DynatomicError("doubling orbit is not a combinatorial rotation")
    p = adv.pop()
    if math.gcd(p, q) != 1:
        raise DynatomicError("rotation number not coprime to its order")
    return Fraction(p, q)


def sheets(n: int) -> list[str]:
    """All exact-period-n itineraries (the sheets of the degree-nu cover)."""
    return sorted(
        w for w in (format(b, f"0{n}b") for b in range(2**n)) if exact_period(w) == n
    )


def monodromy_permutations(n: int) -> list[SheetPermutation]:
    """One permutation per branch-point class of the degree-nu(n) cover."""
    if n < 2:
        raise DynatomicError("sheet permutations are built for n >= 2 only")
    all_sheets = sheets(n)
    out: list[SheetPermutation] = []
    by_class: dict = {}
    for theta in angles_of_period(n):
        K = kneading_sequence(theta)
        if is_primitive(K):
            by_class.setdefault(("primitive", K, None), []).append(theta)
        else:
            k0, k1 = resolutions(K)
            parent = min(exact_period(k0), exact_period(k1))
            rot = _rotation_number(theta, parent)
            by_class.setdefault(("satellite", K, rot), []).append(theta)
    for (kind, K, rot), thetas in sorted(by_class.items(), key=lambda t: str(t[0])):
        k0, k1 = resolutions(K)
        if kind == "primitive":
            if len(thetas) % 2:
                raise DynatomicError("odd angle count at a primitive class")
            mapping = {w: w for w in all_sheets}
            for j in range(n):
                a, b = shift(k0, j), shift(k1, j)
                mapping[a], mapping[b] = b, a
            out.append(
                SheetPermutation("primitive", K, None, len(thetas) // 2, mapping)
            )
        else:
            kprime = k0 if exact_period(k0) == n else k1
            if exact_period(kprime) != n:
                raise DynatomicError("satellite class without a full-period side")
            q = rot.denominator
            if n % q:
                raise DynatomicError("rotation denominator must divide n")
            korb = n // q
            pprime = pow(rot.numerator, -1, q)
            step = korb * pprime
            if len(thetas) % 2:
                raise DynatomicError("odd angle count at a satellite class")
            mapping = {w: w for w in all_sheets}
            for j in range(n):
                w = shift(kprime, j)
                mapping[w] = shift(w, step)
            out.append(
                SheetPermutation("satellite", K, rot, len(thetas) // 2, mapping)
            )
    mapping = {w: complement(w) for w in all_sheets}
    out.append(SheetPermutation("infinity", None, None, 1, mapping))
    return out


# ---------------------------------------------------------------------------
# robustness under edge removal
# ---------------------------------------------------------------------------


def _connected(vertex_list: list[str], adj: dict[str, set[str]]) -> bool:
    start = vertex_list[0]
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertex_list)


def robustness(
    n: int, k: int, budget: int = 2_000_000
) -> tuple[bool, tuple | None]:
    """Exhaustively removes every k-subset of finite edges (multiplicity
    aware) and checks connectivity with the infinite edges retained.

    Returns (still_connected_for_all, first disconnecting subset or None).
    """
    g = build_graph(n)
    multi = g.finite_multiset()
    base: dict[str, set[str]] = {v: set() for v in g.vertices}
    for (a, b), m in multi.items():
        base[a].add(b)
        base[b].add(a)
    for e in g.infinite_edges:
        a, b = e.endpoints
        base[a].add(b)
        base[b].add(a)
    keys = sorted(multi)
    # distinct removal patterns: choose a multiset of k copies over the keys
    patterns = itertools.combinations_with_replacement(range(len(keys)), k)
    checked = 0
    for pat in patterns:
        drop: dict[int, int] = {}
        for i in pat:
            drop[i] = drop.get(i, 0) + 1
        if any(drop[i] > multi[keys[i]] for i in drop):
            continue
        checked += 1
        if checked > budget:
            raise WorkBudgetError("edge-removal enumeration exceeded the budget")
        adj = {v: set(s) for v, s in base.items()}
        inf_pairs = {e.endpoints for e in g.infinite_edges}
        for i, cnt in drop.items():
            if cnt == multi[keys[i]] and keys[i] not in inf_pairs:
                a, b = keys[i]
                adj[a].discard(b)
                adj[b].discard(a)
        if not _connected(g.vertices, adj):
            return False, tuple(keys[i] for i in pat)
    return True, None


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def export_graph(g: MonodromyGraph, fmt: str = "dot") -> str:
    order = sorted(g.vertices, key=lambda v: (-disparity(v), v))
    if fmt == "dot":
        lines = [f"graph gamma_{g.n} {{"]
        for v in order:
            lines.append(f'  "{v}";')
        for e in sorted(g.finite_edges, key=lambda e: e.endpoints):
            a, b = e.endpoints
            for _ in range(e.multiplicity):
                lines.append(f'  "{a}" -- "{b}" [style=solid];')
        for e in sorted(g.infinite_edges, key=lambda e: e.endpoints):
            a, b = e.endpoints
            lines.append(f'  "{a}" -- "{b}" [style=dashed];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = {
            "n": g.n,
            "vertices": order,
            "edges": [
                {
                    "kind": e.kind,
                    "endpoints": list(e.endpoints),
                    "kneading": e.kneading,
                    "multiplicity": e.multiplicity,
                }
                for e in itertools.chain(
                    sorted(g.finite_edges, key=lambda e: e.endpoints),
                    sorted(g.infinite_edges, key=lambda e: e.endpoints),
                )
            ],
        }
        return json.dumps(payload, indent=1, sort_keys=True) + "\n"
    raise DynatomicError(f"unknown graph format {fmt!r}")
