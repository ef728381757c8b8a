"""Exploration: orientation and multiplier facts for the bracket pair.

Run before freezing the bracket tests.  Confirms mechanically:
  1. the literal trace formula's orientation on the single-layer chain
     (and hence the sign constant bracket1_c must carry);
  2. which orientation of the substitution identity (bracrel) the
     classically-oriented bracket satisfies;
  3. the exact c_M-derivative multipliers between ledger rows (qlink);
  4. the ladder, Casimir sets, involution, compatibility, closure,
     degree bookkeeping, and the first-flow generation.
"""

import time

from dkp.curve import compute_curve
from dkp.poisson import (
    ab_generators,
    bracket1_c_literal,
    bracket1_c_pair,
    bracket2_AB,
    bracket_extend,
    c_generators,
    closure_verify,
    first_flow_rhs_AB,
    induced_bracket_c,
    jacobi_defect,
    qlink_report,
    verify_bracrel,
    verify_casimir1,
    verify_casimir2,
    verify_compatibility,
    verify_degree_of_bracket,
    verify_involution,
    verify_ladder,
)
from dkp.symalg import ExactPoly, gen_A, gen_B, gen_c, poly_sum


def banner(s):
    print(f"\n=== {s} ===")


banner("1. single-layer first bracket, literal vs oriented (N=4, M=1)")
N, M = 4, 1
for n in range(N):
    lit_same = bracket1_c_literal(N, M, (1, n), (2, n))
    lit_prev = bracket1_c_literal(N, M, (1, (n - 1) % N), (2, n))
    ori_same = bracket1_c_pair(N, M, (1, n), (2, n))
    ori_prev = bracket1_c_pair(N, M, (1, (n - 1) % N), (2, n))
    c2 = ExactPoly.var(gen_c(1, 2, n))
    print(
        f"  n={n}: literal {{c1(n),c2(n)}}={lit_same!r:24s} oriented={ori_same!r:18s}"
        f" (want +c2(n): {ori_same == c2})"
    )
    print(
        f"        literal {{c1(n-1),c2(n)}}={lit_prev!r:22s} oriented={ori_prev!r:18s}"
        f" (want -c2(n): {ori_prev == -c2})"
    )
# translate to A,B via c1=-A, c2=-B: {A(n),B(n)}_1 = {c1,c2} with two sign
# flips that cancel... {-A,-B} = {A,B}; oriented {c1(n),c2(n)} = +c2(n) = -B(n)
# hence {A(n),B(n)}_1 = -B(n)  <- classical pin
print("  classical pin satisfied iff all 'want' lines True")

banner("1b. zero-pattern sanity (N=4, M=1)")
zeros_ok = True
for n in range(N):
    for k in range(N):
        if bracket1_c_pair(N, M, (2, n), (2, k)):
            zeros_ok = False
            print(f"  NONZERO {{c2({n}),c2({k})}}")
        p = bracket1_c_pair(N, M, (1, n), (1, k))
        if p:
            zeros_ok = False
            print(f"  NONZERO {{c1({n}),c1({k})}} = {p!r}")
        if k not in ((n) % N, (n + 1) % N):
            q = bracket1_c_pair(N, M, (1, n), (2, k))
            if q:
                zeros_ok = False
                print(f"  NONZERO {{c1({n}),c2({k})}} = {q!r}")
print(f"  all other pairs vanish: {zeros_ok}")

banner("2. closure of the induced second bracket")
for (n_, m_) in [(3, 1), (4, 1), (3, 2), (2, 3)]:
    for j in range(1, m_ + 1):
        t0 = time.time()
        rep = closure_verify(n_, m_, j)
        print(
            f"  ({n_},{m_}) level {j}: cases={rep['cases']} ok={rep['ok']}"
            f" [{time.time()-t0:.1f}s]"
        )

banner("3. bracrel orientations")
for (n_, m_) in [(3, 1), (3, 2)]:
    rep = verify_bracrel(n_, m_)
    print(
        f"  ({n_},{m_}): literal_ok={rep['ok']} ({len(rep['failures'])} fail)"
        f"  flipped_ok={rep['flipped_ok']} ({len(rep['flipped_failures'])} fail)"
        f"  cases={rep['cases']}"
    )

banner("4. ladder (3,2) and Toda")
for (n_, m_) in [(3, 1), (3, 2)]:
    t0 = time.time()
    rep = verify_ladder(n_, m_)
    print(
        f"  ({n_},{m_}): pairs={rep['pairs']} ok={rep['ok']}"
        f" fails={rep['failures'][:3]} [{time.time()-t0:.1f}s]"
    )

banner("5. casimir sets")
for (n_, m_) in [(3, 1), (3, 2)]:
    r2 = verify_casimir2(n_, m_)
    r1 = verify_casimir1(n_, m_)
    print(f"  ({n_},{m_}): casimir2 {r2['degrees']} ok={r2['ok']}")
    print(f"  ({n_},{m_}): casimir1 {r1['degrees']} ok={r1['ok']}")

banner("6. involution (3,2)")
t0 = time.time()
rep = verify_involution(3, 2)
print(f"  cases={rep['cases']} ok={rep['ok']} [{time.time()-t0:.1f}s]")

banner("7. qlink (3,2)")
rep = qlink_report(3, 2)
for row in rep["rows"]:
    print(f"  {row}")
print(f"  exact_ok={rep['exact_ok']} literal_unit_ok={rep['literal_unit_ok']}")

banner("8. compatibility")
for (n_, m_) in [(3, 1), (3, 2)]:
    t0 = time.time()
    rep = verify_compatibility(n_, m_)
    print(f"  ({n_},{m_}): cases={rep['cases']} ok={rep['ok']} [{time.time()-t0:.1f}s]")

banner("9. degree bookkeeping (3,2)")
rep = verify_degree_of_bracket(3, 2)
print(f"  cases={rep['cases']} ok={rep['ok']}")

banner("10. first flow = bracket with sum of A's")
for (n_, m_) in [(4, 1), (3, 2), (2, 3)]:
    table = bracket2_AB(n_, m_)
    q1 = poly_sum(
        ExactPoly.var(gen_A(k, l)) for l in range(m_) for k in range(n_)
    )
    rhs = first_flow_rhs_AB(n_, m_)
    ok = all(
        bracket_extend(table, q1, ExactPoly.var(g)) == rhs[g] for g in rhs
    )
    print(f"  ({n_},{m_}): flow matches on all generators: {ok}")

banner("11. Toda second bracket table shape (N=4, M=1)")
table = bracket2_AB(4, 1)
A = lambda n: gen_A(n % 4, 0)
B = lambda n: gen_B(n % 4, 0)
pa = lambda n: ExactPoly.var(A(n))
pb = lambda n: ExactPoly.var(B(n))
checks = {
    "{A(n),A(n+1)}=B(n+1)": all(
        table.entry(A(n), A(n + 1)) == pb(n + 1) for n in range(4)
    ),
    "{A(n),B(n)}=A(n)B(n)": all(
        table.entry(A(n), B(n)) == pa(n) * pb(n) for n in range(4)
    ),
    "{A(n-1),B(n)}=-A(n-1)B(n)": all(
        table.entry(A(n - 1), B(n)) == -pa(n - 1) * pb(n) for n in range(4)
    ),
    "{B(n-1),B(n)}=-B(n-1)B(n)": all(
        table.entry(B(n - 1), B(n)) == -pb(n - 1) * pb(n) for n in range(4)
    ),
    "{A(n),A(n+2)}=0": all(not table.entry(A(n), A(n + 2)) for n in range(4)),
}
for k, v in checks.items():
    print(f"  {k}: {v}")

banner("12. frozen spot values")
t32 = bracket2_AB(3, 2)
v = t32.entry(gen_B(1, 1), gen_B(0, 0))
print(f"  (3,2) {{B(1,1),B(0,0)}} = {v!r}")
print(
    "  equals +B(1,1)B(0,0):",
    v == ExactPoly.var(gen_B(1, 1)) * ExactPoly.var(gen_B(0, 0)),
)
d = jacobi_defect(
    t32,
    ExactPoly.var(gen_A(2, 0)),
    ExactPoly.var(gen_A(0, 0)),
    ExactPoly.var(gen_A(1, 0)),
)
print(f"  jacobi defect (A(2,0),A(0,0),A(1,0)) = {d!r}")

banner("13. induced-vs-literal level-M sanity (2,3) level 3")
rep = closure_verify(2, 3, 3)
print(f"  cases={rep['cases']} ok={rep['ok']}")
