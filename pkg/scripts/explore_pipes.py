"""Exploration for the pipe-diagram module: oracle checks before tests freeze.

Cross-validates the diagram enumeration against the determinant's pure-A
monomials, both pairing routes, the sum-zero grouping, the bracket identity
at B = 0, and the narrated partner examples.
"""

from __future__ import annotations

import sys
import time
from collections import Counter

sys.path.insert(0, "src")

from dkp.curve import compute_curve
from dkp.pipes import (
    PipeDiagram,
    bracket_b0_check,
    decomposition_partners,
    diagram_from_support,
    enumerate_tpds,
    monomial_tpd_bijection,
    pairing,
    pairing_routes,
    product_key,
    pure_A_monomials,
    sum_zero_check,
    verify_pairing_consistency,
)

TORI = [(3, 1), (4, 1), (3, 2), (5, 2), (4, 3), (2, 3)]


def section(title: str) -> None:
    print(f"\n=== {title} ===")


section("1. per-degree counts: diagrams vs pure-A monomials")
for N, M in TORI:
    t0 = time.time()
    report = monomial_tpd_bijection(N, M)
    dt = time.time() - t0
    rows = {
        d: (r["monomials"], r["diagrams"])
        for d, r in report["per_degree"].items()
    }
    print(f"({N},{M}) ok={report['ok']}  [{dt:.2f}s]")
    print("   degree -> (monomials, diagrams):", rows)
    print("   ledger degrees above NM (monomial count):", report["high_degree_monomials"])
    coeffs = Counter(report["monomial_coefficients"].values())
    print("   coefficient histogram:", dict(coeffs))

section("2. degree-0 diagrams vs constant determinant slots")
for N, M in [(3, 2), (4, 3), (5, 2), (3, 1)]:
    curve = compute_curve(N, M)
    zero = enumerate_tpds(N, M, 0)
    consts = {
        (a, b): p.constant_value()
        for (a, b), p in curve.coefficients.items()
        if p.is_constant()
    }
    print(f"({N},{M}): degree-0 diagrams={len(zero)}  constant slots={consts}")
    for d in zero:
        print(f"   pieces={len(d.pieces)} winding={d.winding}")

section("3. pairing: both routes + antisymmetry, exhaustive")
for N, M in [(3, 2), (5, 2), (4, 3)]:
    t0 = time.time()
    rep = verify_pairing_consistency(N, M)
    print(
        f"({N},{M}): diagrams={rep['diagrams']} pairs={rep['pairs']} "
        f"ok={rep['ok']}  [{time.time() - t0:.2f}s]"
    )

section("4. sum-zero over every product group, all degree pairs")
for N, M in [(3, 2), (5, 2), (4, 3)]:
    degrees = [d for d in range(1, N * M + 1) if enumerate_tpds(N, M, d)]
    t0 = time.time()
    all_ok = True
    worst = (0, None)
    for d1 in degrees:
        for d2 in degrees:
            rep = sum_zero_check(N, M, d1, d2)
            all_ok &= rep["ok"]
            if rep["max_group_size"] > worst[0]:
                worst = (rep["max_group_size"], (d1, d2))
            if not rep["ok"]:
                print(f"   FAIL ({N},{M}) degrees {d1},{d2}: {rep['nonzero_groups'][:2]}")
    print(
        f"({N},{M}): degrees={degrees} all_ok={all_ok} "
        f"max_group={worst}  [{time.time() - t0:.2f}s]"
    )

section("5. narrated partner targets on (4,3)")
rep = sum_zero_check(4, 3, 4, 7)
sizes = Counter()
pm_groups = 0
diags4 = enumerate_tpds(4, 3, 4)
diags7 = enumerate_tpds(4, 3, 7)
groups: dict = {}
for d1 in diags4:
    for d2 in diags7:
        groups.setdefault(product_key(d1, d2), []).append((d1, d2, pairing(d1, d2)))
example = None
for key, members in groups.items():
    sizes[len(members)] += 1
    ks = sorted(k for _, _, k in members)
    if len(members) == 2 and ks == [-1, 1]:
        pm_groups += 1
        if example is None:
            example = members
print(f"(4,3) degrees (4,7): groups={len(groups)} size-histogram={dict(sizes)}")
print(f"   groups of exactly two decompositions with pairings -1/+1: {pm_groups}")
if example:
    (d1, d2, k12), (d3, d4, k34) = example
    print(f"   example pairings: {k12}, {k34}")
    partners = decomposition_partners(d1, d2)
    print(f"   decomposition_partners of the first pair: {len(partners)}")
    same = [(a, b) for a, b in partners if (a, b) == (d3, d4)]
    print(f"   partner equals the second group member: {bool(same)}")

rep12 = sum_zero_check(4, 3, 12, 2)
print(
    f"(4,3) degrees (12,2): groups={rep12['groups']} pairs={rep12['pairs']} "
    f"max_group={rep12['max_group_size']} nonzero_pairings={rep12['nonzero_pairings']} ok={rep12['ok']}"
)

section("6. nonzero-pairing pairs always have a partner")
for N, M in [(3, 2)]:
    degrees = [d for d in range(1, N * M + 1) if enumerate_tpds(N, M, d)]
    checked = 0
    missing = 0
    nonzero = 0
    for d1 in degrees:
        for d2 in degrees:
            for A in enumerate_tpds(N, M, d1):
                for B in enumerate_tpds(N, M, d2):
                    checked += 1
                    if pairing(A, B) != 0:
                        nonzero += 1
                        if not decomposition_partners(A, B):
                            missing += 1
    print(f"({N},{M}): pairs={checked} nonzero={nonzero} missing_partner={missing}")

section("7. bracket at B=0 equals pairing * product")
for N, M in [(3, 2)]:
    degrees = [d for d in range(1, N * M + 1) if enumerate_tpds(N, M, d)]
    t0 = time.time()
    for d1 in degrees:
        for d2 in degrees:
            rep = bracket_b0_check(N, M, d1, d2)
            status = "ok" if rep["ok"] else f"FAIL {rep['failures'][:1]}"
            print(f"   ({N},{M}) degrees ({d1},{d2}): pairs={rep['pairs']} {status}")
    print(f"   [{time.time() - t0:.2f}s]")

section("8. Toda diagrams are single-row loops with knee filler")
for N in (3, 4):
    for deg in range(1, N + 1):
        ds = enumerate_tpds(N, 1, deg)
        kinds = {(d.degree, d.knee_pairs) for d in ds}
        print(f"   (N={N}) degree {deg}: count={len(ds)} (degree, knee_pairs)={sorted(kinds)}")
full_row = diagram_from_support(3, 2, [(0, 1), (1, 1), (2, 1)])
print("   full row m=1 on (3,2):", full_row.site_map(), "winding", full_row.winding)

section("9. winding vs ledger slot (empirical)")
for N, M in [(3, 2), (4, 3), (5, 2)]:
    curve = compute_curve(N, M)
    print(f"({N},{M}):")
    for d in curve.degrees():
        if d > N * M:
            continue
        entry = curve.ledger[d]
        winds = {diag.winding for diag in enumerate_tpds(N, M, d)}
        print(
            f"   degree {d}: slot (a={entry.alpha_exp}, b={entry.beta_exp}) "
            f"windings={sorted(winds)}"
        )

section("10. edge cases")
try:
    enumerate_tpds(4, 2, 1)
except ValueError as e:
    print("   gcd violation:", e)
try:
    enumerate_tpds(3, 2, 7)
except ValueError as e:
    print("   degree out of range:", e)
try:
    PipeDiagram(N=3, M=2, horizontal=frozenset({(0, 0)}), left_down=frozenset(), up_right=frozenset())
except ValueError as e:
    print("   open diagram rejected:", e)
try:
    PipeDiagram(
        N=3,
        M=2,
        horizontal=frozenset({(0, 0)}),
        left_down=frozenset({(0, 0)}),
        up_right=frozenset(),
    )
except ValueError as e:
    print("   horizontal+knee clash rejected:", e)
d1 = enumerate_tpds(3, 2, 1)[0]
other = enumerate_tpds(5, 2, 1)[0]
try:
    pairing(d1, other)
except ValueError as e:
    print("   torus mismatch:", e)

print("\ndone")
