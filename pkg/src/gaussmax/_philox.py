"""Vectorised Philox4x32-10 (Salmon et al., Random123).

Pure function of ``(counter, key)``, so any draw can be regenerated from its
index alone and blocks can be produced in any order.
"""

import numpy as np

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_MASK = np.uint64(0xFFFFFFFF)
_SHIFT = np.uint64(32)


def philox4x32(c0, c1, c2, c3, k0, k1, rounds=10):
    """Apply Philox4x32 to counter words ``c0..c3`` under key ``(k0, k1)``.

    All inputs are broadcast together; words are held in uint64 arrays with
    values below 2**32. Returns four uint64 arrays of 32-bit outputs.
    """
    c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) & _MASK for c in (c0, c1, c2, c3))
    k0 = np.uint64(k0) & _MASK
    k1 = np.uint64(k1) & _MASK
    for r in range(rounds):
        if r:
            k0 = (k0 + _W0) & _MASK
            k1 = (k1 + _W1) & _MASK
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> _SHIFT) ^ c1 ^ k0,
            p1 & _MASK,
            (p0 >> _SHIFT) ^ c3 ^ k1,
            p0 & _MASK,
        )
    return c0, c1, c2, c3


def uniform_pair(c0, c1, c2, c3, k0, k1):
    """Two uniforms in the open interval (0, 1), 52 bits each, per counter."""
    x0, x1, x2, x3 = philox4x32(c0, c1, c2, c3, k0, k1)
    scale = 1.0 / 4503599627370496.0  # 2**-52
    six, hi = np.uint64(6), np.uint64(26)
    a = ((x0 >> six) << hi) | (x1 >> six)
    b = ((x2 >> six) << hi) | (x3 >> six)
    # midpoint of each 2**-52 cell: exactly representable, never 0 or 1
    return (a.astype(float) + 0.5) * scale, (b.astype(float) + 0.5) * scale
