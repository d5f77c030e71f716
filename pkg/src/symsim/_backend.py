"""Backend selection for the combinatorial inner loops.

Two interchangeable implementations exist for the two hot kernels (the
pair-product expansion and the irrep-block fill):

* ``python`` — exact big-integer combinatorics, converted to float only at
  the very end. Valid for any n; the reference semantics.
* ``numba`` — the same enumeration compiled with numba over a float64
  factorial table. Bit-exact wherever every factorial ratio is an exact
  float64 integer; usable up to n = 170, beyond which the dispatcher falls
  back to the exact path automatically.

The active backend defaults to ``numba`` when importable and can be forced
with the ``SYMSIM_BACKEND`` environment variable or :func:`set_backend`.
"""

import math
import os
from fractions import Fraction

import numpy as np

from .errors import ValidationError

# largest n for which the float64 factorial table is finite
NUMBA_N_LIMIT = 170

_state = {"requested": None, "numba_kernels": None, "numba_failed": False}


def _requested_from_env():
    value = os.environ.get("SYMSIM_BACKEND", "auto").strip().lower() or "auto"
    if value not in ("auto", "numba", "python"):
        raise ValidationError(
            f"SYMSIM_BACKEND must be 'numba', 'python' or 'auto', got {value!r}"
        )
    return value


def set_backend(name):
    """Select the kernel backend at runtime ('numba', 'python' or 'auto').

    'auto' defers to the SYMSIM_BACKEND environment variable, falling back
    to numba when importable.
    """
    if name not in ("auto", "numba", "python"):
        raise ValidationError(f"unknown backend {name!r}")
    if name == "numba":
        if _load_numba() is None:
            raise ValidationError("numba backend requested but numba is not importable")
    _state["requested"] = None if name == "auto" else name


def _load_numba():
    if _state["numba_kernels"] is None and not _state["numba_failed"]:
        try:
            from . import _kernels_numba
            _state["numba_kernels"] = _kernels_numba
        except ImportError:
            _state["numba_failed"] = True
    return _state["numba_kernels"]


def active_backend():
    """Name of the backend that will serve the next kernel call."""
    requested = _state["requested"] or _requested_from_env()
    if requested == "python":
        return "python"
    if requested == "auto":
        return "numba" if _load_numba() is not None else "python"
    return "numba"


def _use_numba(n):
    return n <= NUMBA_N_LIMIT and active_backend() == "numba"


# ---------------------------------------------------------------------------
# factorial tables

_int_fact_cache = {}
_float_fact_cache = {}


def int_factorials(n):
    """Tuple of exact factorials 0!..n!."""
    table = _int_fact_cache.get(n)
    if table is None:
        out = [1] * (n + 1)
        for k in range(2, n + 1):
            out[k] = out[k - 1] * k
        table = _int_fact_cache[n] = tuple(out)
    return table


def float_factorials(n):
    table = _float_fact_cache.get(n)
    if table is None:
        table = np.array([float(f) for f in int_factorials(n)], dtype=np.float64)
        _float_fact_cache[n] = table
    return table


def _int_sqrt_div(num, den):
    # num / sqrt(den) for exact integers, overflow-free at any size:
    # the square of the result is poly-bounded, so converting the exact
    # rational num^2/den to float loses nothing that matters.
    if num == 0:
        return 0.0
    mag = math.sqrt(float(Fraction(num * num, den)))
    return mag if num > 0 else -mag


# ---------------------------------------------------------------------------
# pure-python exact kernels

def pair_product_python(ivec, jvec):
    """Exact expansion coefficients of a product of two symmetrized monomials.

    Returns a dict mapping 4-tuples k to complex values. Every coefficient
    is a Gaussian integer; it is accumulated exactly and converted once.
    """
    i1, ix, iy, iz = ivec
    j1, jx, jy, jz = jvec
    fact = int_factorials(i1 + ix + iy + iz)
    acc = {}
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
                                            fact[k1] // (fact[f11] * fact[fxx] * fact[fyy] * fact[fzz])
                                            * (fact[kx] // (fact[f1x] * fact[fx1] * fact[fyz] * fact[fzy]))
                                            * (fact[ky] // (fact[f1y] * fact[fy1] * fact[fxz] * fact[fzx]))
                                            * (fact[kz] // (fact[f1z] * fact[fz1] * fact[fxy] * fact[fyx]))
                                        )
                                        e = (fxy + fyz + fzx - fyx - fxz - fzy) % 4
                                        key = (k1, kx, ky, kz)
                                        re, im = acc.get(key, (0, 0))
                                        if e == 0:
                                            re += val
                                        elif e == 1:
                                            im += val
                                        elif e == 2:
                                            re -= val
                                        else:
                                            im -= val
                                        acc[key] = (re, im)
    return {k: complex(re, im) for k, (re, im) in acc.items() if re or im}


def f_block_python(n, lam1, ivec):
    """Exact irrep block of one symmetrized monomial; see f_block_fill."""
    i1, ix, iy, iz = ivec
    m = n - 2 * lam1
    fact = int_factorials(n)
    binom = [fact[m] // (fact[q] * fact[m - q]) for q in range(m + 1)]
    out = np.empty((m + 1, m + 1), dtype=np.complex128)
    for q in range(m + 1):
        for qp in range(m + 1):
            acc_re = 0
            acc_im = 0
            for fxx in range(min(ix // 2, lam1) + 1):
                for fyy in range(min(iy // 2, lam1 - fxx) + 1):
                    for fzz in range(min(iz // 2, lam1 - fxx - fyy) + 1):
                        f11 = lam1 - fxx - fyy - fzz
                        pair_cnt = fact[lam1] // (fact[f11] * fact[fxx] * fact[fyy] * fact[fzz])
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
                                cnt = fact[m] // (
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
            den = binom[q] * binom[qp]
            out[q, qp] = complex(_int_sqrt_div(acc_re, den), _int_sqrt_div(acc_im, den))
    return out


# ---------------------------------------------------------------------------
# dispatchers

def pair_product(ivec, jvec):
    """Expansion of a monomial product as {k-tuple: complex coefficient}."""
    n = sum(ivec)
    if not _use_numba(n):
        return pair_product_python(ivec, jvec)
    kernels = _load_numba()
    # each letter count of the result differs from one factor by at most
    # the other factor's non-identity weight, so the output window is small
    # whenever either factor is few-body
    center, radius = (jvec, n - ivec[0]) if ivec[0] >= jvec[0] else (ivec, n - jvec[0])
    lo = [max(0, center[b] - radius) for b in (1, 2, 3)]
    hi = [min(n, center[b] + radius) for b in (1, 2, 3)]
    dims = [h - l + 1 for l, h in zip(lo, hi)]
    buf = np.zeros(dims[0] * dims[1] * dims[2], dtype=np.complex128)
    kernels.pair_product_fill(
        *ivec, *jvec, float_factorials(n), buf, lo[0], lo[1], lo[2], dims[1], dims[2]
    )
    out = {}
    for idx in np.nonzero(buf)[0]:
        kx, rem = divmod(int(idx), dims[1] * dims[2])
        ky, kz = divmod(rem, dims[2])
        kx, ky, kz = kx + lo[0], ky + lo[1], kz + lo[2]
        out[(n - kx - ky - kz, kx, ky, kz)] = complex(buf[idx])
    return out


def f_block(n, lam1, ivec):
    """Irrep block of one symmetrized monomial as an (m+1)x(m+1) array."""
    if not _use_numba(n):
        return f_block_python(n, lam1, ivec)
    kernels = _load_numba()
    m = n - 2 * lam1
    out = np.empty((m + 1, m + 1), dtype=np.complex128)
    kernels.f_block_fill(n, lam1, *ivec, float_factorials(n), out)
    return out
