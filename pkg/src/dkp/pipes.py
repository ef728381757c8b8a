"""Toroidal pipe diagrams and the combinatorics of the spectral determinant at B = 0.

A pipe diagram assigns to each torus site a subset of three local pieces —
a horizontal segment, a left-down knee, or an up-right knee — such that the
pieces join into closed loops.  Each site has four ports (N, S, E, W); the
pieces connect ports as

    horizontal       W <-> E
    left-down knee   W <-> S
    up-right knee    N <-> E

and ports abut across neighbouring sites: the E port of (n, m) meets the W
port of (n+1, m), and the S port of (n, m) meets the N port of (n, m-1).
A diagram is *closed* when every used port is matched by its abutting
neighbour's port.  The only site allowed to carry two pieces is one holding
both knees.  The *degree* of a diagram is its number of horizontal pieces.

Closed diagrams of degree d are in bijection with the pure-A monomials of
the degree-d conserved quantity of the spectral curve after the substitution
B = 0: the horizontal pieces sit exactly at the sites whose A-variables occur
in the monomial, and the knees are then forced.  The intersection pairing

    <d1, d2> = #{sites: d1 left-down knee and d2 horizontal}
             - #{sites: d1 up-right knee and d2 horizontal}
             = #{sites: d1 horizontal and d2 up-right knee}
             - #{sites: d1 horizontal and d2 left-down knee}

(the two forms agree because the pairing is antisymmetric) equals the
kappa-weighted sum over horizontal pairs — the coefficient the second
Poisson bracket of the corresponding monomials produces at B = 0 — is
antisymmetric, and sums to zero over every family of ordered diagram pairs
sharing the same product (the multiset union of placed pieces).  Note the
orientation: it is the knees of the *first* diagram against the horizontal
pieces of the *second* that count positively for left-down; with the roles
written the other way round the count comes out with the opposite sign on
every pair, which the exhaustive cross-check against the bracket rules out.
All of this is verified mechanically at desk scale by the test suite.

Degree-0 diagrams exist (the empty diagram and the single all-knee cycle);
they correspond to the constant terms of the determinant and are excluded
from the monomial bijection, which concerns the nonconstant ledger entries.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

from .curve import SpectralCurve, compute_curve
from .symalg import ExactPoly, Scalar, gen_A, gen_B, poly_A
from .torus import build_kappa

Site = tuple[int, int]

HORIZONTAL = "horizontal"
LEFT_DOWN = "left-down-knee"
UP_RIGHT = "up-right-knee"

__all__ = [
    "HORIZONTAL",
    "LEFT_DOWN",
    "UP_RIGHT",
    "PipeDiagram",
    "bracket_b0_check",
    "decomposition_partners",
    "diagram_from_support",
    "enumerate_tpds",
    "monomial_tpd_bijection",
    "pairing",
    "pairing_routes",
    "product_key",
    "pure_A_monomials",
    "sum_zero_check",
    "verify_pairing_consistency",
]


def _require_torus(N: int, M: int) -> None:
    if N < 1 or M < 1:
        raise ValueError(f"torus dimensions must be positive, got ({N}, {M})")
    if math.gcd(N, M) != 1:
        raise ValueError(f"torus dimensions must be coprime, got ({N}, {M})")


def _ports_closed(
    N: int,
    M: int,
    horizontal: frozenset[Site],
    left_down: frozenset[Site],
    up_right: frozenset[Site],
) -> bool:
    """Check that every used port is matched by the abutting neighbour."""
    for n in range(N):
        for m in range(M):
            site = (n, m)
            east = ((n + 1) % N, m)
            uses_e = site in horizontal or site in up_right
            feeds_w = east in horizontal or east in left_down
            if uses_e != feeds_w:
                return False
            below = (n, (m - 1) % M)
            uses_s = site in left_down
            feeds_n = below in up_right
            if uses_s != feeds_n:
                return False
    return True


@dataclass(frozen=True)
class PipeDiagram:
    """A closed assignment of pipe pieces to the sites of an N x M torus.

    Pieces are stored as three site sets.  A site may carry at most one
    horizontal piece; the only two-piece combination allowed is a left-down
    knee together with an up-right knee.  Closure of the joined loops is
    enforced at construction time.
    """

    N: int
    M: int
    horizontal: frozenset[Site]
    left_down: frozenset[Site]
    up_right: frozenset[Site]

    def __post_init__(self) -> None:
        _require_torus(self.N, self.M)
        for name in ("horizontal", "left_down", "up_right"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        for sites in (self.horizontal, self.left_down, self.up_right):
            for n, m in sites:
                if not (0 <= n < self.N and 0 <= m < self.M):
                    raise ValueError(f"site ({n}, {m}) outside the {self.N}x{self.M} torus")
        clash = self.horizontal & (self.left_down | self.up_right)
        if clash:
            raise ValueError(
                "a horizontal piece cannot share a site with a knee: " f"{sorted(clash)}"
            )
        if not _ports_closed(self.N, self.M, self.horizontal, self.left_down, self.up_right):
            raise ValueError("pipe diagram is not closed")

    @property
    def degree(self) -> int:
        return len(self.horizontal)

    @property
    def knee_pairs(self) -> int:
        return len(self.left_down)

    @cached_property
    def pieces(self) -> tuple[tuple[Site, str], ...]:
        """All placed pieces as a sorted tuple of (site, piece-name)."""
        out: list[tuple[Site, str]] = []
        out.extend((s, HORIZONTAL) for s in self.horizontal)
        out.extend((s, LEFT_DOWN) for s in self.left_down)
        out.extend((s, UP_RIGHT) for s in self.up_right)
        return tuple(sorted(out))

    @cached_property
    def winding(self) -> tuple[int, int]:
        """Net (eastward, southward) loop windings of the joined diagram.

        Every horizontal piece and every up-right knee advances one step
        east; every left-down knee advances one step south.  For a closed
        diagram both totals are multiples of the respective period.
        """
        east, east_rem = divmod(len(self.horizontal) + len(self.up_right), self.N)
        south, south_rem = divmod(len(self.left_down), self.M)
        if east_rem or south_rem:  # unreachable for a closed diagram
            raise AssertionError("closed diagram with fractional winding")
        return east, south

    def monomial(self) -> ExactPoly:
        """The product of A-variables over the horizontal sites."""
        poly = ExactPoly.const(1)
        for n, m in sorted(self.horizontal):
            poly = poly * poly_A(n, m)
        return poly

    def site_map(self) -> dict[str, list[str]]:
        """JSON-friendly map from "n,m" to the list of pieces at that site."""
        per_site: dict[Site, list[str]] = {}
        for site, piece in self.pieces:
            per_site.setdefault(site, []).append(piece)
        return {f"{n},{m}": pieces for (n, m), pieces in sorted(per_site.items())}

    def to_jsonable(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "degree": self.degree,
            "knee_pairs": self.knee_pairs,
            "winding": list(self.winding),
            "sites": self.site_map(),
        }


def _complete_knees(
    N: int, M: int, horizontal: frozenset[Site]
) -> tuple[frozenset[Site], frozenset[Site]] | None:
    """Force the knee placements for a given horizontal support.

    Every maximal horizontal run spawns a knee chain at the site east of its
    end: a left-down knee there, an up-right knee one step south, then the
    chain either terminates on the west side of the next horizontal piece
    along the (+1, -1) diagonal or continues with another knee pair.  Returns
    None when a forced up-right knee would land on a horizontal site, which
    is the only way closure can fail.
    """
    left_down: set[Site] = set()
    up_right: set[Site] = set()
    budget = 2 * N * M + 2
    for n, m in sorted(horizontal):
        start = ((n + 1) % N, m)
        if start in horizontal:
            continue  # the run continues; no chain from here
        x = start
        for _ in range(budget):
            if x in left_down:
                break  # chain already built from an earlier run end
            left_down.add(x)
            below = (x[0], (x[1] - 1) % M)
            if below in horizontal:
                return None  # an up-right knee may not share a site with a horizontal
            up_right.add(below)
            east = ((below[0] + 1) % N, below[1])
            if east in horizontal:
                break  # chain terminates on the west port of this horizontal piece
            x = east
        else:  # pragma: no cover - the chain always meets a horizontal site
            raise RuntimeError("knee chain failed to terminate")
    return frozenset(left_down), frozenset(up_right)


def diagram_from_support(N: int, M: int, support: Iterable[Site]) -> PipeDiagram | None:
    """Build the unique closed diagram whose horizontal pieces sit at `support`.

    Returns None when no closed diagram has that horizontal support.
    """
    _require_torus(N, M)
    h = frozenset((n % N, m % M) for n, m in support)
    knees = _complete_knees(N, M, h)
    if knees is None:
        return None
    left_down, up_right = knees
    return PipeDiagram(N=N, M=M, horizontal=h, left_down=left_down, up_right=up_right)


def _degree_zero_diagrams(N: int, M: int) -> list[PipeDiagram]:
    empty = PipeDiagram(N=N, M=M, horizontal=frozenset(), left_down=frozenset(), up_right=frozenset())
    sites = frozenset((n, m) for n in range(N) for m in range(M))
    all_knees = PipeDiagram(N=N, M=M, horizontal=frozenset(), left_down=sites, up_right=sites)
    return [empty, all_knees]


@lru_cache(maxsize=None)
def _enumerate_cached(N: int, M: int, degree: int) -> tuple[PipeDiagram, ...]:
    if degree == 0:
        return tuple(_degree_zero_diagrams(N, M))
    sites = sorted((n, m) for n in range(N) for m in range(M))
    out: list[PipeDiagram] = []
    for combo in itertools.combinations(sites, degree):
        h = frozenset(combo)
        knees = _complete_knees(N, M, h)
        if knees is None:
            continue
        out.append(PipeDiagram(N=N, M=M, horizontal=h, left_down=knees[0], up_right=knees[1]))
    return tuple(out)


def enumerate_tpds(N: int, M: int, degree: int) -> list[PipeDiagram]:
    """All closed diagrams of the given degree, in deterministic order.

    Degree 0 yields the empty diagram and the single all-knee cycle; for
    degree >= 1 the horizontal supports are enumerated and completed by the
    forced knee chains, which is exhaustive because the knees of a closed
    diagram with at least one horizontal piece are determined by its
    horizontal support.
    """
    _require_torus(N, M)
    if not 0 <= degree <= N * M:
        raise ValueError(f"degree must lie in [0, {N * M}], got {degree}")
    return list(_enumerate_cached(N, M, degree))


def pure_A_monomials(poly: ExactPoly) -> list[tuple[frozenset[Site], Scalar]]:
    """The terms of `poly` that survive B = 0, as (site support, coefficient).

    Every surviving monomial must be squarefree in the A-variables so that
    its support determines it; a repeated factor would have no diagram
    counterpart and raises.
    """
    out: list[tuple[frozenset[Site], Scalar]] = []
    for mono, coeff in poly:
        if any(gen[0] != "A" for gen, _ in mono):
            continue
        if any(exp != 1 for _, exp in mono):
            raise RuntimeError(f"pure-A monomial with a repeated factor: {mono}")
        out.append((frozenset((gen[1], gen[2]) for gen, _ in mono), coeff))
    return out


def monomial_tpd_bijection(N: int, M: int, curve: SpectralCurve | None = None) -> dict:
    """Match the pure-A monomials of every conserved quantity with diagrams.

    For each degree d from 1 to NM the monomials of q_d surviving B = 0 are
    completed to closed diagrams and compared against the full enumeration;
    the report carries both directions of the map and per-degree counts.
    Ledger degrees above NM are checked to have no surviving monomial (a
    squarefree pure-A monomial has at most NM factors).  A monomial whose
    knee completion fails closure raises: it would break the bijection.
    """
    _require_torus(N, M)
    if curve is None:
        curve = compute_curve(N, M, mode="AB")
    if curve.mode != "ab":
        raise ValueError(f"bijection needs the AB-mode curve, got mode={curve.mode!r}")
    NM = N * M
    supports_by_degree: dict[int, list[frozenset[Site]]] = {d: [] for d in range(1, NM + 1)}
    coeffs_by_support: dict[frozenset[Site], Scalar] = {}
    high_degrees: dict[int, int] = {}
    for d in curve.degrees():
        monos = pure_A_monomials(curve.q(d))
        if d > NM:
            if monos:
                raise RuntimeError(
                    f"q_{d} kept a pure-A monomial of degree above the site count {NM}"
                )
            high_degrees[d] = 0
            continue
        for support, coeff in monos:
            if len(support) != d:
                raise RuntimeError(
                    f"pure-A monomial of q_{d} has {len(support)} factors, expected {d}"
                )
            supports_by_degree[d].append(support)
            coeffs_by_support[support] = coeff

    per_degree: dict[int, dict] = {}
    monomial_to_diagram: dict[frozenset[Site], PipeDiagram] = {}
    diagram_to_monomial: dict[PipeDiagram, frozenset[Site]] = {}
    ok = True
    for d in range(1, NM + 1):
        diagrams = enumerate_tpds(N, M, d)
        supports = supports_by_degree[d]
        if len(set(supports)) != len(supports):  # pragma: no cover - dict keys of a poly
            raise RuntimeError(f"q_{d} supports collide at degree {d}")
        enumerated = {diag.horizontal: diag for diag in diagrams}
        for support in supports:
            diag = diagram_from_support(N, M, support)
            if diag is None:
                raise RuntimeError(
                    f"monomial with support {sorted(support)} has no closed knee completion"
                )
            monomial_to_diagram[support] = diag
            diagram_to_monomial[diag] = support
        matched = len(supports) == len(diagrams) and all(s in enumerated for s in supports)
        per_degree[d] = {
            "monomials": len(supports),
            "diagrams": len(diagrams),
            "ok": matched,
        }
        ok = ok and matched
    return {
        "N": N,
        "M": M,
        "per_degree": per_degree,
        "high_degree_monomials": high_degrees,
        "total_monomials": sum(r["monomials"] for r in per_degree.values()),
        "total_diagrams": sum(r["diagrams"] for r in per_degree.values()),
        "monomial_to_diagram": monomial_to_diagram,
        "diagram_to_monomial": diagram_to_monomial,
        "monomial_coefficients": coeffs_by_support,
        "ok": ok,
    }


@lru_cache(maxsize=None)
def _kappa_table(N: int, M: int) -> dict[tuple[int, int], int]:
    kappa = build_kappa(N, M)
    return {(n, m): kappa(n, m) for n in range(N) for m in range(M)}


def _same_torus(d1: PipeDiagram, d2: PipeDiagram) -> None:
    if (d1.N, d1.M) != (d2.N, d2.M):
        raise ValueError(
            f"diagrams live on different tori: ({d1.N}, {d1.M}) vs ({d2.N}, {d2.M})"
        )


def pairing_routes(d1: PipeDiagram, d2: PipeDiagram) -> tuple[int, int]:
    """The intersection pairing by both formulas: (knee count, kappa sum).

    Knee route: left-down knees of d1 on horizontal sites of d2 count +1,
    up-right knees of d1 on horizontal sites of d2 count -1.
    """
    _same_torus(d1, d2)
    knee = sum(1 for s in d2.horizontal if s in d1.left_down) - sum(
        1 for s in d2.horizontal if s in d1.up_right
    )
    table = _kappa_table(d1.N, d1.M)
    N, M = d1.N, d1.M
    kappa_sum = sum(
        table[((n - i) % N, (m - j) % M)]
        for n, m in d1.horizontal
        for i, j in d2.horizontal
    )
    return knee, kappa_sum


def pairing(d1: PipeDiagram, d2: PipeDiagram) -> int:
    """The intersection pairing <d1, d2>, cross-checked between both routes."""
    knee, kappa_sum = pairing_routes(d1, d2)
    if knee != kappa_sum:  # pragma: no cover - the two formulas provably agree
        raise RuntimeError(
            f"pairing routes disagree: knee count {knee}, kappa sum {kappa_sum}"
        )
    return knee


def product_key(d1: PipeDiagram, d2: PipeDiagram) -> tuple[tuple[Site, str], ...]:
    """Canonical key for the product: the multiset union of placed pieces."""
    _same_torus(d1, d2)
    return tuple(sorted(d1.pieces + d2.pieces))


def verify_pairing_consistency(N: int, M: int, max_degree: int | None = None) -> dict:
    """Cross-check both pairing formulas and antisymmetry on all diagram pairs."""
    _require_torus(N, M)
    top = N * M if max_degree is None else max_degree
    diagrams = [d for deg in range(0, top + 1) for d in enumerate_tpds(N, M, deg)]
    failures: list[dict] = []
    checked = 0
    for d1 in diagrams:
        for d2 in diagrams:
            knee, kappa_sum = pairing_routes(d1, d2)
            back, _ = pairing_routes(d2, d1)
            checked += 1
            if knee != kappa_sum or knee != -back:
                failures.append(
                    {
                        "d1": d1.site_map(),
                        "d2": d2.site_map(),
                        "knee": knee,
                        "kappa_sum": kappa_sum,
                        "reverse": back,
                    }
                )
    return {
        "N": N,
        "M": M,
        "diagrams": len(diagrams),
        "pairs": checked,
        "failures": failures,
        "ok": not failures,
    }


def sum_zero_check(N: int, M: int, degree1: int, degree2: int) -> dict:
    """Group ordered diagram pairs by product; every group must sum to zero."""
    _require_torus(N, M)
    diags1 = enumerate_tpds(N, M, degree1)
    diags2 = enumerate_tpds(N, M, degree2)
    groups: dict[tuple, list[tuple[int, int, int]]] = {}
    nonzero_pairings = 0
    for i, d1 in enumerate(diags1):
        for j, d2 in enumerate(diags2):
            k = pairing(d1, d2)
            if k:
                nonzero_pairings += 1
            groups.setdefault(product_key(d1, d2), []).append((i, j, k))
    bad = []
    for key, members in groups.items():
        total = sum(k for _, _, k in members)
        if total:
            bad.append(
                {
                    "product": [f"{n},{m}:{piece}" for (n, m), piece in key],
                    "total": total,
                    "pairs": members,
                }
            )
    return {
        "N": N,
        "M": M,
        "degrees": [degree1, degree2],
        "pairs": len(diags1) * len(diags2),
        "groups": len(groups),
        "max_group_size": max((len(v) for v in groups.values()), default=0),
        "nonzero_pairings": nonzero_pairings,
        "nonzero_groups": bad,
        "ok": not bad,
    }


def decomposition_partners(
    d1: PipeDiagram, d2: PipeDiagram
) -> list[tuple[PipeDiagram, PipeDiagram]]:
    """All other ordered pairs with the same degrees and the same product."""
    _same_torus(d1, d2)
    key = product_key(d1, d2)
    partners: list[tuple[PipeDiagram, PipeDiagram]] = []
    for d3 in enumerate_tpds(d1.N, d1.M, d1.degree):
        for d4 in enumerate_tpds(d2.N, d2.M, d2.degree):
            if d3 == d1 and d4 == d2:
                continue
            if product_key(d3, d4) == key:
                partners.append((d3, d4))
    return partners


def bracket_b0_check(
    N: int, M: int, degree1: int, degree2: int, limit: int | None = None
) -> dict:
    """Verify {m1, m2} restricted to B = 0 equals pairing * m1 * m2.

    m1, m2 are the monomials of the diagrams (products of A over horizontal
    sites).  The bracket of two A-products also generates B-terms; they are
    killed by substituting B = 0 after bracketing, and what survives must be
    exactly the intersection pairing times the product monomial.
    """
    from .poisson import bracket2_AB, bracket_extend

    _require_torus(N, M)
    table = bracket2_AB(N, M)
    b_zero = {gen_B(n, m): 0 for n in range(N) for m in range(M)}
    diags1 = enumerate_tpds(N, M, degree1)
    diags2 = enumerate_tpds(N, M, degree2)
    pairs = [(d1, d2) for d1 in diags1 for d2 in diags2]
    if limit is not None:
        pairs = pairs[:limit]
    failures = []
    for d1, d2 in pairs:
        m1 = d1.monomial()
        m2 = d2.monomial()
        lhs = bracket_extend(table, m1, m2).substitute(b_zero)
        rhs = m1 * m2 * Fraction(pairing(d1, d2))
        if lhs != rhs:
            failures.append({"d1": d1.site_map(), "d2": d2.site_map()})
    return {
        "N": N,
        "M": M,
        "degrees": [degree1, degree2],
        "pairs": len(pairs),
        "failures": failures,
        "ok": not failures,
    }
