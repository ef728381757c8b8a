"""Smoke checks for the band/reduction/spectral-matrix layer, run before freezing tests."""

from fractions import Fraction

from dkp.lattice import (
    BandMatrix,
    band_product,
    c_alpha,
    c_alpha_minus_beta,
    det_minor_expansion,
    det_permutation,
    dominance_point_random,
    dominance_rank,
    reduction_levels,
    w_matrix,
    x_band,
)
from dkp.symalg import ExactPoly, gen_A, gen_B


def pv(label, poly):
    print(f"  {label} = {poly!r}")


def check_reduction_matches_product(N, M):
    levels = reduction_levels(N, M)
    for j in range(1, M + 1):
        w = M + 1 - j
        via_reduce = BandMatrix.from_band_entries(N, w, levels[j])
        via_product = band_product(N, M, j)
        assert via_reduce == via_product, (N, M, j)
    print(f"reduction == product for all levels, (N,M)=({N},{M})")


def frozen_m2_level1(N):
    A = lambda k, m: ExactPoly.var(gen_A(k % N, m))
    B = lambda k, m: ExactPoly.var(gen_B(k % N, m))
    # internal m is 0-based: top layer 2 -> index 1, layer 1 -> index 0
    lev = reduction_levels(N, 2)[1]
    for k in range(N):
        c1 = -A(k, 1) - A(k + 1, 0)
        c2 = -B(k, 1) + A(k, 1) * A(k, 0) - B(k + 1, 0)
        c3 = A(k - 1, 0) * B(k, 1) + B(k, 0) * A(k, 1)
        c4 = B(k - 1, 0) * B(k, 1)
        assert lev[(1, k)] == c1, (k, lev[(1, k)], c1)
        assert lev[(2, k)] == c2
        assert lev[(3, k)] == c3
        assert lev[(4, k)] == c4
    print(f"frozen level-1 band entries match, (N,M)=({N},2)")


def check_toda_w(N):
    W = w_matrix(N, 1)
    C = c_alpha_minus_beta(N, 1, reduction_levels(N, 1)[1])
    for k in range(N):
        for l in range(N):
            assert W[k][l] == C[k][l], (k, l, W[k][l], C[k][l])
    print(f"M=1 spectral matrix equals alpha-wrapped band, N={N}")


def check_det_sign(N, M):
    W = w_matrix(N, M)
    d_full = det_minor_expansion(W)
    C = c_alpha_minus_beta(N, M, reduction_levels(N, M)[1])
    d_band = det_minor_expansion(C)
    sign = (-1) ** (N * (M - 1))
    ok = d_full == d_band.scale(sign) if hasattr(d_band, "scale") else None
    match = d_full == (d_band * sign)
    print(f"det(W) == (-1)^(N(M-1)) det(C_a - b I) for ({N},{M}): {match}")
    if not match:
        print("  full :", repr(d_full)[:400])
        print("  band :", repr((d_band * sign))[:400])
    assert match


def check_det_oracle(N, M):
    C = c_alpha_minus_beta(N, M, reduction_levels(N, M)[1])
    assert det_minor_expansion(C) == det_permutation(C)
    print(f"minor-expansion det == permutation det, ({N},{M})")


def check_corner_twists(N):
    # alpha twist sites for M=1: (0, N-1) carries -B(0)/alpha, (N-1, 0) carries alpha
    C = c_alpha(N, 1, reduction_levels(N, 1)[1])
    from dkp.symalg import ALPHA

    top_right = C[0][N - 1]
    bot_left = C[N - 1][0]
    if N >= 3:
        assert top_right == ExactPoly.var(ALPHA, -1) * (-ExactPoly.var(gen_B(0, 0)))
        assert bot_left == ExactPoly.var(ALPHA)
    else:
        assert top_right == ExactPoly.const(1) - ExactPoly.var(ALPHA, -1) * ExactPoly.var(gen_B(0, 0))
        assert bot_left == ExactPoly.var(ALPHA) - ExactPoly.var(gen_B(1, 0))
    print(f"alpha corner twists correct, N={N}, M=1")


def check_dominance(N, M):
    for j in range(1, M):
        r, dim = dominance_rank(N, M, j)
        print(f"dominance special point ({N},{M}) level {j}: rank {r} / {dim}")
        assert r == dim
        pt = dominance_point_random(N, M, j, seed=20260817 + j)
        r2, dim2 = dominance_rank(N, M, j, point=pt)
        print(f"dominance random point  ({N},{M}) level {j}: rank {r2} / {dim2}")
        assert r2 == dim2


def check_transpose_band_map(N, M):
    # transpose of a halfwidth-w band sends c_i(k) to c_{2w-i}(k+w-i)
    levels = reduction_levels(N, M)
    w = M
    bm = BandMatrix.from_band_entries(N, w, levels[1])
    t = bm.transpose()
    tb = t.band_entries(w)
    for (i, k), p in levels[1].items():
        if not p:
            continue
        assert tb[(2 * w - i, (k + w - i) % N)] == p, (i, k)
    print(f"transpose band index map verified, ({N},{M})")


def main():
    for N, M in [(3, 2), (5, 2), (4, 3), (2, 3), (3, 4)]:
        check_reduction_matches_product(N, M)
    frozen_m2_level1(3)
    frozen_m2_level1(5)
    for N in (2, 3, 4):
        check_toda_w(N)
        check_corner_twists(N)
    check_det_oracle(3, 1)
    check_det_oracle(3, 2)
    check_det_sign(3, 1)
    check_det_sign(3, 2)
    check_dominance(3, 2)
    check_dominance(4, 3)
    check_transpose_band_map(3, 2)
    check_transpose_band_map(4, 3)
    print("ALL LATTICE SMOKE CHECKS PASSED")


if __name__ == "__main__":
    main()
