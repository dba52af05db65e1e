"""Ramanujan tau coefficients from the q-expansion of the discriminant form.

The cusp form is built as q * f(q)^8 with f = prod(1 - q^n)^3, whose
coefficients are the alternating triangular-number series (Jacobi).  The
eighth power is taken in three squarings:

  * f^2 exactly, by sparse convolution into int64 (values stay tiny),
  * f^4 and f^8 exactly via Kronecker substitution (one big-integer square
    each, delegated to gmpy2 when available),
  * beyond ``TAU_EXACT_LIMIT`` the squarings switch to float64 FFT
    convolution, stitched to the exact prefix; this path carries a
    ``float_fallback`` flag and a documented relative error around 1e-7
    for the large-index coefficients actually used there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

try:
    from gmpy2 import mpz

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    mpz = int
    _HAVE_GMPY2 = False

# Exact integer computation is cheap up to here; beyond, the float path
# takes over.  Python integers never overflow, so the cap is a work/memory
# budget rather than a hardware limit.
TAU_EXACT_LIMIT = 600_000 if _HAVE_GMPY2 else 120_000

_STAGE1_LIMB_BYTES = 12  # f^4 digits stay far below 2^95
_STAGE2_LIMB_BYTES = 20  # f^8 digits stay far below 2^159


def eta3_sparse(nterms: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices and values of prod(1-q^n)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    ks = np.arange(int((2 * nterms) ** 0.5) + 2, dtype=np.int64)
    idx = ks * (ks + 1) // 2
    keep = idx < nterms
    ks, idx = ks[keep], idx[keep]
    vals = np.where(ks % 2 == 0, 2 * ks + 1, -(2 * ks + 1)).astype(np.int64)
    return idx, vals


def eta6_int64(nterms: int) -> np.ndarray:
    """Exact coefficients of prod(1-q^n)^6, dense int64 of length nterms."""
    idx, vals = eta3_sparse(nterms)
    ii = (idx[:, None] + idx[None, :]).ravel()
    vv = (vals[:, None] * vals[None, :]).ravel()
    keep = ii < nterms
    # products are < 2^26 and at most ~3000 of them collide per cell, so the
    # float64 accumulation in bincount is exact
    acc = np.bincount(ii[keep], weights=vv[keep].astype(np.float64), minlength=nterms)
    return np.rint(acc).astype(np.int64)


def _pack_signed(coeffs: np.ndarray, limb_bytes: int) -> int:
    """Kronecker-pack signed int64 coefficients at x = 2**(8*limb_bytes)."""
    n = len(coeffs)
    buf_pos = np.zeros((n, limb_bytes), dtype=np.uint8)
    buf_neg = np.zeros((n, limb_bytes), dtype=np.uint8)
    pos = np.where(coeffs > 0, coeffs, 0).astype(np.uint64)
    neg = np.where(coeffs < 0, -coeffs, 0).astype(np.uint64)
    buf_pos[:, :8] = pos.view(np.uint8).reshape(n, 8)
    buf_neg[:, :8] = neg.view(np.uint8).reshape(n, 8)
    a = int.from_bytes(buf_pos.tobytes(), "little")
    b = int.from_bytes(buf_neg.tobytes(), "little")
    return a - b


def _square_bigint(x: int) -> int:
    if _HAVE_GMPY2:
        return int(mpz(x) * mpz(x))
    return x * x


def _unpack_balanced(y: int, limb_bytes: int, nterms: int) -> list[int]:
    """Recover the first nterms signed digits of y in base 2**(8*limb_bytes)."""
    base = 1 << (8 * limb_bytes)
    half = base >> 1
    raw = y.to_bytes(max(1, (y.bit_length() + 7) // 8 + limb_bytes), "little")
    raw = raw.ljust((nterms + 1) * limb_bytes, b"\x00")
    out = []
    carry = 0
    for i in range(nterms):
        t = int.from_bytes(raw[i * limb_bytes : (i + 1) * limb_bytes], "little") + carry
        if t >= half:
            out.append(t - base)
            carry = 1
        else:
            out.append(t)
            carry = 0
    return out


def _kronecker_square(coeffs: np.ndarray, limb_bytes: int, nterms: int) -> list[int]:
    y = _square_bigint(_pack_signed(coeffs, limb_bytes))
    return _unpack_balanced(y, limb_bytes, nterms)


def tau_exact(nmax: int) -> list[int]:
    """Exact tau(1..nmax) as Python integers."""
    nterms = nmax  # tau(n) is the q^{n-1} coefficient of f^8
    e6 = eta6_int64(nterms)
    e12 = _kronecker_square(e6, _STAGE1_LIMB_BYTES, nterms)
    if any(abs(v) >= 2**62 for v in e12):
        # cannot happen below TAU_EXACT_LIMIT (digits stay under ~2^57)
        raise ValueError("exact tau stage overflow; lower nmax")
    e24 = _kronecker_square(np.array(e12, dtype=np.int64), _STAGE2_LIMB_BYTES, nterms)
    return e24


def _fft_square(a: np.ndarray, nterms: int) -> np.ndarray:
    size = 1
    while size < 2 * len(a) - 1:
        size *= 2
    fa = np.fft.rfft(a, size)
    return np.fft.irfft(fa * fa, size)[:nterms]


@dataclass
class TauTable:
    """tau(n) for 1 <= n <= nmax; values[0] is unused padding."""

    nmax: int
    values: np.ndarray  # float64, index by n
    exact: list[int]  # exact integers for n <= exact_len
    exact_len: int
    float_fallback: bool

    def __getitem__(self, n: int) -> float:
        return self.values[n]


def tau_table(nmax: int, force_float: bool = False, exact_limit: int | None = None) -> TauTable:
    """tau(1..nmax); exact integers up to the cap, FFT float path beyond."""
    if nmax < 1:
        raise ValueError("nmax must be positive")
    cap = TAU_EXACT_LIMIT if exact_limit is None else exact_limit
    limit = min(nmax, cap)
    if not force_float and nmax <= cap:
        exact = tau_exact(nmax)
        values = np.zeros(nmax + 1)
        values[1:] = [float(t) for t in exact]
        return TauTable(nmax, values, exact, nmax, False)

    exact = tau_exact(limit)
    e6 = eta6_int64(nmax)
    e12 = _fft_square(e6.astype(np.float64), nmax)
    # splice the exact prefix back in before the second squaring; the low
    # coefficients are exactly where the FFT error is relatively largest
    e12_exact = _kronecker_square(e6[:limit], _STAGE1_LIMB_BYTES, limit)
    e12[:limit] = np.array(e12_exact, dtype=np.float64)
    e24 = _fft_square(e12, nmax)
    values = np.zeros(nmax + 1)
    values[1:] = e24
    values[1 : limit + 1] = [float(t) for t in exact]
    return TauTable(nmax, values, exact, limit, True)
