"""Integer kernels behind monomial multiplication.

A monomial key is an exponent row over the chart's even generators plus a
bitmask over its odd generators (bit order = canonical odd order). Multiplying
two keys adds exponent rows and ORs masks; the Koszul sign is the parity of the
number of (a-bit, b-bit) pairs with the a-bit above the b-bit, and overlapping
masks give zero.

Two implementations of ``product_keys`` are kept in lockstep: a numba ``njit``
loop and a broadcast numpy version. Set ``SUPERDOUBLE_NO_NUMBA=1`` to force the
numpy path (also used automatically when numba is not importable).
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

USE_NUMBA = numba is not None and os.environ.get("SUPERDOUBLE_NO_NUMBA", "") in ("", "0")


def backend():
    return "numba" if USE_NUMBA else "numpy"


def product_keys_numpy(ea, ma, eb, mb, n_odd):
    na, nb = ma.shape[0], mb.shape[0]
    ia = np.repeat(np.arange(na, dtype=np.int64), nb)
    ib = np.tile(np.arange(nb, dtype=np.int64), na)
    A = ma[ia]
    B = mb[ib]
    ok = (A & B) == 0
    ia, ib, A, B = ia[ok], ib[ok], A[ok], B[ok]
    parity = np.zeros(A.shape[0], dtype=np.int64)
    for j in range(n_odd):
        bj = (B >> j) & 1
        if bj.any():
            parity += bj * np.bitwise_count(A >> (j + 1)).astype(np.int64)
    sign = 1 - 2 * (parity & 1)
    return ia, ib, ea[ia] + eb[ib], A | B, sign


def _product_keys_loops(ea, ma, eb, mb, n_odd):
    na = ma.shape[0]
    nb = mb.shape[0]
    ne = ea.shape[1]
    cap = na * nb
    ia = np.empty(cap, dtype=np.int64)
    ib = np.empty(cap, dtype=np.int64)
    exps = np.empty((cap, ne), dtype=np.int64)
    masks = np.empty(cap, dtype=np.int64)
    signs = np.empty(cap, dtype=np.int64)
    n = 0
    for i in range(na):
        A = ma[i]
        for j in range(nb):
            B = mb[j]
            if A & B:
                continue
            parity = 0
            for bit in range(n_odd):
                if (B >> bit) & 1:
                    x = A >> (bit + 1)
                    while x:
                        x &= x - 1
                        parity += 1
            ia[n] = i
            ib[n] = j
            for k in range(ne):
                exps[n, k] = ea[i, k] + eb[j, k]
            masks[n] = A | B
            signs[n] = 1 - 2 * (parity & 1)
            n += 1
    return ia[:n], ib[:n], exps[:n], masks[:n], signs[:n]


if numba is not None:
    product_keys_numba = numba.njit(cache=True, nogil=True)(_product_keys_loops)
else:  # pragma: no cover
    product_keys_numba = _product_keys_loops


def product_keys(ea, ma, eb, mb, n_odd):
    """Pairwise products of two key tables.

    Returns ``(ia, ib, exps, masks, signs)`` for the surviving pairs only
    (pairs sharing an odd generator are dropped).
    """
    if USE_NUMBA:
        return product_keys_numba(ea, ma, eb, mb, n_odd)
    return product_keys_numpy(ea, ma, eb, mb, n_odd)


def prefix_parity(masks, bit):
    """Parity of the number of odd factors strictly before ``bit``."""
    low = (np.int64(1) << np.int64(bit)) - 1
    return np.bitwise_count(masks & low).astype(np.int64) & 1


def suffix_parity(masks, bit):
    """Parity of the number of odd factors strictly after ``bit``."""
    return np.bitwise_count(masks >> np.int64(bit + 1)).astype(np.int64) & 1
