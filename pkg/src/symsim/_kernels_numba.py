"""Numba-compiled inner loops.

Both kernels enumerate constrained non-negative integer assignments and
accumulate products of multinomial coefficients taken from a float64
factorial table. Every factorial ratio appearing here is an integer, so
results are bit-exact as long as the intermediates stay inside the float64
integer range; callers restrict this path to n <= 170 (171! overflows
float64) and fall back to the exact big-integer implementation beyond.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def pair_product_fill(i1, ix, iy, iz, j1, jx, jy, jz, fact, out,
                      lox, loy, loz, dy, dz):
    """Accumulate the expansion of a product of two symmetrized monomials.

    ``out`` is a flat complex buffer over the reachable (kx, ky, kz) window
    [lox.., loy.., loz..] with strides (dy*dz, dz, 1); the identity count k1
    is implied by the total n. Free variables are the nine pairing counts
    between non-identity letters; the seven identity pairings follow from
    the row/column sums and one sign check.
    """
    for fxx in range(min(ix, jx) + 1):
        for fxy in range(min(ix - fxx, jy) + 1):
            for fxz in range(min(ix - fxx - fxy, jz) + 1):
                fx1 = ix - fxx - fxy - fxz
                for fyx in range(min(iy, jx - fxx) + 1):
                    for fyy in range(min(iy - fyx, jy - fxy) + 1):
                        for fyz in range(min(iy - fyx - fyy, jz - fxz) + 1):
                            fy1 = iy - fyx - fyy - fyz
                            for fzx in range(min(iz, jx - fxx - fyx) + 1):
                                for fzy in range(min(iz - fzx, jy - fxy - fyy) + 1):
                                    for fzz in range(min(iz - fzx - fzy, jz - fxz - fyz) + 1):
                                        fz1 = iz - fzx - fzy - fzz
                                        f1x = jx - fxx - fyx - fzx
                                        f1y = jy - fxy - fyy - fzy
                                        f1z = jz - fxz - fyz - fzz
                                        f11 = i1 - f1x - f1y - f1z
                                        if f11 < 0:
                                            continue
                                        k1 = f11 + fxx + fyy + fzz
                                        kx = f1x + fx1 + fyz + fzy
                                        ky = f1y + fy1 + fxz + fzx
                                        kz = f1z + fz1 + fxy + fyx
                                        val = (
                                            fact[k1] / (fact[f11] * fact[fxx] * fact[fyy] * fact[fzz])
                                            * fact[kx] / (fact[f1x] * fact[fx1] * fact[fyz] * fact[fzy])
                                            * fact[ky] / (fact[f1y] * fact[fy1] * fact[fxz] * fact[fzx])
                                            * fact[kz] / (fact[f1z] * fact[fz1] * fact[fxy] * fact[fyx])
                                        )
                                        e = (fxy + fyz + fzx - fyx - fxz - fzy) % 4
                                        idx = ((kx - lox) * dy + (ky - loy)) * dz + (kz - loz)
                                        if e == 0:
                                            out[idx] += val
                                        elif e == 1:
                                            out[idx] += val * 1j
                                        elif e == 2:
                                            out[idx] -= val
                                        else:
                                            out[idx] -= val * 1j


@njit(cache=True, nogil=True)
def f_block_fill(n, lam1, i1, ix, iy, iz, fact, out):
    """Fill the (m+1)x(m+1) irrep block of one symmetrized monomial.

    m = n - 2*lam1 is the Dicke-register size. Constraint structure: the
    singlet-pair counts (fxx, fyy, fzz) and the Dicke-register counts
    (g0x1, g1z1) are free; everything else is solved, with parity and
    non-negativity rejections. The remaining constraints hold identically.
    """
    m = n - 2 * lam1
    for q in range(m + 1):
        cq = fact[m] / (fact[q] * fact[m - q])
        for qp in range(m + 1):
            cqp = fact[m] / (fact[qp] * fact[m - qp])
            norm = np.sqrt(cq * cqp)
            acc_re = 0.0
            acc_im = 0.0
            for fxx in range(min(ix // 2, lam1) + 1):
                for fyy in range(min(iy // 2, lam1 - fxx) + 1):
                    for fzz in range(min(iz // 2, lam1 - fxx - fyy) + 1):
                        f11 = lam1 - fxx - fyy - fzz
                        pair_cnt = fact[lam1] / (fact[f11] * fact[fxx] * fact[fyy] * fact[fzz])
                        for g0x1 in range(ix - 2 * fxx + 1):
                            g1x0 = ix - 2 * fxx - g0x1
                            sy = iy - 2 * fyy
                            t = sy + q - qp - g1x0 + g0x1
                            if t < 0 or t % 2 == 1:
                                continue
                            g1y0 = t // 2
                            g0y1 = sy - g1y0
                            if g0y1 < 0:
                                continue
                            for g1z1 in range(iz - 2 * fzz + 1):
                                g0z0 = iz - 2 * fzz - g1z1
                                g111 = q - g1x0 - g1y0 - g1z1
                                if g111 < 0:
                                    continue
                                g010 = m - q - g0z0 - g0x1 - g0y1
                                if g010 < 0:
                                    continue
                                cnt = fact[m] / (
                                    fact[g010] * fact[g111] * fact[g0x1] * fact[g1x0]
                                    * fact[g0y1] * fact[g1y0] * fact[g0z0] * fact[g1z1]
                                )
                                v = pair_cnt * cnt
                                e = (2 * fxx + 2 * fyy + 2 * fzz + 2 * g1z1 - g0y1 + g1y0) % 4
                                if e == 0:
                                    acc_re += v
                                elif e == 1:
                                    acc_im += v
                                elif e == 2:
                                    acc_re -= v
                                else:
                                    acc_im -= v
            out[q, qp] = complex(acc_re / norm, acc_im / norm)
