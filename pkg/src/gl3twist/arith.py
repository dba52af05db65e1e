"""Small integer-arithmetic helpers shared across modules."""

from __future__ import annotations

from math import gcd, isqrt

import numpy as np


def spf_sieve(n: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..n (spf[p] == p exactly at primes)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    spf[1:] = np.arange(1, n + 1)
    for p in range(2, isqrt(n) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            sl[sl == np.arange(p * p, n + 1, p)] = p
    return spf


def primes_up_to(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, [(p, exponent), ...]."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    m = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        m = -m
    return m


def euler_phi(n: int) -> int:
    phi = n
    for p, _ in factorize(n):
        phi -= phi // p
    return phi


def inverse_mod(a: int, m: int) -> int:
    """Modular inverse via the extended gcd."""
    a %= m
    if m == 1:
        return 0
    g, x = _ext_gcd(a, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return x % m


def _ext_gcd(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_x, x = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
    return old_r, old_x


def gcd_pair(a: int, b: int) -> int:
    return gcd(a, b)
