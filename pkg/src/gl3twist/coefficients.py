"""Degree-3 Hecke eigenvalue sequences for two concrete realizations.

``EISENSTEIN_D3`` carries the triple divisor function d3(n) (local roots
all equal to 1); ``SYM_SQUARE_DELTA`` carries the symmetric-square lift of
the discriminant cusp form, with local data derived from exact Ramanujan
tau values.  Both realizations are self-dual, so a single real table of
lambda(1, n) together with the per-prime value lambda(1, p) determines
every two-index eigenvalue through the h-polynomial recursion.
"""

from __future__ import annotations

import os
import struct
import warnings
from dataclasses import dataclass, field
from enum import Enum
from math import isqrt

import numpy as np

from .arith import divisors, factorize, mobius, spf_sieve
from .errors import DomainError, RangeError
from .tau import TAU_EXACT_LIMIT, tau_table

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

CACHE_MAGIC = b"GL3C"
CACHE_VERSION = 1
CACHE_ENV_VAR = "GL3TWIST_CACHE_DIR"


class FormKind(Enum):
    EISENSTEIN_D3 = 0
    SYM_SQUARE_DELTA = 1


_KIND_NAMES = {FormKind.EISENSTEIN_D3: "d3", FormKind.SYM_SQUARE_DELTA: "sym2delta"}
_NAME_KINDS = {v: k for k, v in _KIND_NAMES.items()}


def parse_kind(name) -> FormKind:
    if isinstance(name, FormKind):
        return name
    key = str(name).lower().replace("-", "").replace("_", "")
    for alias, kind in (("d3", FormKind.EISENSTEIN_D3), ("eisenstein", FormKind.EISENSTEIN_D3),
                        ("eisensteind3", FormKind.EISENSTEIN_D3), ("sym2delta", FormKind.SYM_SQUARE_DELTA),
                        ("sym2", FormKind.SYM_SQUARE_DELTA), ("symsquaredelta", FormKind.SYM_SQUARE_DELTA)):
        if key == alias:
            return kind
    raise DomainError(f"unknown form kind {name!r}")


@dataclass(frozen=True)
class SpectralParams:
    """Archimedean parameter triple, constrained to the unitary Maass range."""

    mu: tuple[complex, complex, complex]

    def __post_init__(self):
        if abs(sum(self.mu)) > 1e-12:
            raise DomainError("parameters must sum to zero")
        if max(abs(m.real) for m in self.mu) >= 0.5:
            raise DomainError("parameter real parts must stay below 1/2")


EISENSTEIN_PARAMS = SpectralParams((0j, 0j, 0j))


def _h_sequence(e1: float, kmax: int) -> list[float]:
    """h_0..h_kmax for the self-dual local recursion h_k = e1(h_{k-1}-h_{k-2})+h_{k-3}."""
    hs = [1.0]
    hm1 = 0.0  # h_{-1}
    hm2 = 0.0  # h_{-2}
    for _ in range(kmax):
        hk = e1 * (hs[-1] - hm1) + hm2
        hm2 = hm1
        hm1 = hs[-1]
        hs.append(hk)
    return hs


def _fill_multiplicative_py(table, spf, lamp):
    n_max = len(table) - 1
    for n in range(2, n_max + 1):
        p = spf[n]
        if p == n:
            table[n] = lamp[n]
            continue
        m = n // p
        while m % p == 0:
            m //= p
        if m == 1:
            # n = p^e: run the h recursion up from the prime value
            e1 = lamp[p]
            h0 = 0.0  # h_{k-3}
            h1 = 0.0  # h_{k-2}
            h2 = 1.0  # h_{k-1}
            q = 1
            hk = 1.0
            while q < n:
                q *= p
                hk = e1 * (h2 - h1) + h0
                h0 = h1
                h1 = h2
                h2 = hk
            table[n] = hk
        else:
            table[n] = table[m] * table[n // m]


if _HAVE_NUMBA:
    _fill_multiplicative = njit(cache=False)(_fill_multiplicative_py)
else:  # pragma: no cover
    _fill_multiplicative = _fill_multiplicative_py


@dataclass
class CoefficientProvider:
    """Immutable table of lambda(1, n) plus per-prime local data."""

    kind: FormKind
    max_index: int
    table: np.ndarray  # float64, index by n, [0] unused
    spf: np.ndarray | None = None
    tau_exact: list[int] = field(default_factory=list)
    tau_float_fallback: bool = False

    def lam(self, n: int) -> float:
        if not 1 <= n <= self.max_index:
            raise RangeError(f"n={n} outside table of size {self.max_index}")
        return float(self.table[n])

    def lambda_prime(self, p: int) -> float:
        """lambda(1, p); for the divisor form this extends past the table."""
        if p <= self.max_index:
            return float(self.table[p])
        if self.kind is FormKind.EISENSTEIN_D3:
            return 3.0
        raise RangeError(f"prime {p} beyond tabulated range {self.max_index}")

    def spectral_params(self) -> SpectralParams:
        if self.kind is FormKind.EISENSTEIN_D3:
            return EISENSTEIN_PARAMS
        raise DomainError(
            "symmetric-square archimedean parameters fall outside the Maass "
            "range handled here; use the Eisenstein realization"
        )

    def _factorize(self, n: int) -> list[tuple[int, int]]:
        if self.spf is not None and n <= self.max_index:
            out = []
            while n > 1:
                p = int(self.spf[n])
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out.append((p, e))
            return out
        return factorize(n)


def build_provider(kind, n_max: int, cache_dir: str | None = None) -> CoefficientProvider:
    """Sieve lambda(1, n) for n <= n_max, honouring the on-disk cache."""
    kind = parse_kind(kind)
    if n_max < 1:
        raise DomainError("n_max must be a positive integer")

    cache_dir = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV_VAR)
    cache_path = None
    if cache_dir:
        cache_path = os.path.join(cache_dir, f"gl3c_{_KIND_NAMES[kind]}_{n_max}.bin")
        if os.path.exists(cache_path):
            ckind, values = read_cache(cache_path)
            if ckind is kind and len(values) == n_max:
                table = np.zeros(n_max + 1)
                table[1:] = values
                return CoefficientProvider(kind, n_max, table, spf=spf_sieve(min(n_max, 1 << 22)))

    spf = spf_sieve(n_max) if n_max >= 2 else np.array([0, 1], dtype=np.int64)
    lamp = np.zeros(n_max + 1)
    tau_exact: list[int] = []
    fallback = False
    if kind is FormKind.EISENSTEIN_D3:
        lamp[:] = 3.0
    else:
        tau = tau_table(n_max)
        tau_exact = tau.exact
        fallback = tau.float_fallback
        if fallback:
            warnings.warn(
                f"tau values beyond n={tau.exact_len} come from the float "
                "convolution path (relative error ~1e-6)",
                RuntimeWarning,
            )
        primes = np.nonzero(spf[2:] == np.arange(2, n_max + 1))[0] + 2
        a_p = tau.values[primes] / np.power(primes.astype(np.float64), 5.5)
        lamp[primes] = a_p * a_p - 1.0

    table = np.zeros(n_max + 1)
    table[1] = 1.0
    if n_max >= 2:
        _fill_multiplicative(table, spf, lamp)

    provider = CoefficientProvider(kind, n_max, table, spf=spf,
                                   tau_exact=tau_exact, tau_float_fallback=fallback)
    if cache_path:
        os.makedirs(cache_dir, exist_ok=True)
        write_cache(provider, cache_path)
    return provider


def write_cache(provider: CoefficientProvider, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<I", CACHE_VERSION))
        fh.write(struct.pack("<B", provider.kind.value))
        fh.write(struct.pack("<Q", provider.max_index))
        fh.write(provider.table[1:].astype("<f8").tobytes())


def read_cache(path: str) -> tuple[FormKind, np.ndarray]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CACHE_MAGIC:
            raise DomainError(f"bad cache magic {magic!r}")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != CACHE_VERSION:
            raise DomainError(f"unsupported cache version {version}")
        (kind_byte,) = struct.unpack("<B", fh.read(1))
        try:
            kind = FormKind(kind_byte)
        except ValueError as exc:
            raise DomainError(f"unknown kind byte {kind_byte}") from exc
        (n,) = struct.unpack("<Q", fh.read(8))
        values = np.frombuffer(fh.read(8 * n), dtype="<f8")
        if len(values) != n:
            raise DomainError("truncated cache file")
    return kind, values


def lambda2(provider: CoefficientProvider, m: int, n: int) -> float:
    """Two-index eigenvalue lambda(m, n) from the per-prime local recursion."""
    if m < 1 or n < 1:
        raise DomainError("indices must be positive")
    if m == 1 and n <= provider.max_index:
        return provider.lam(n)
    exps: dict[int, list[int]] = {}
    for p, e in provider._factorize(m):
        exps.setdefault(p, [0, 0])[0] = e
    for p, e in provider._factorize(n):
        exps.setdefault(p, [0, 0])[1] = e
    val = 1.0
    for p, (a, b) in exps.items():
        e1 = provider.lambda_prime(p)
        hs = _h_sequence(e1, a + b + 1)
        hbm1 = hs[b - 1] if b >= 1 else 0.0
        val *= hs[a + b] * hs[b] - hs[a + b + 1] * hbm1
    return val


def lambda2_from_table(provider: CoefficientProvider, m: int, n: int) -> float:
    """Independent route to lambda(m, n): Moebius inversion of the product rule."""
    if m < 1 or n < 1:
        raise DomainError("indices must be positive")
    total = 0.0
    for d in divisors(min(m, n)):
        if m % d or n % d:
            continue
        mu = mobius(d)
        if mu:
            total += mu * provider.lam(m // d) * provider.lam(n // d)
    return total


def rankin_selberg_ratio(provider: CoefficientProvider, n_limit: int) -> float:
    """(sum over n1^2 n2 <= N of lambda(n2, n1)^2) / N."""
    if n_limit < 1:
        raise DomainError("N must be positive")
    if n_limit > provider.max_index:
        raise RangeError(f"N={n_limit} beyond table of size {provider.max_index}")
    table = provider.table
    total = 0.0
    for n1 in range(1, isqrt(n_limit) + 1):
        m = n_limit // (n1 * n1)
        v = np.zeros(m + 1)
        for d in divisors(n1):
            mu = mobius(d)
            if mu == 0:
                continue
            coeff = mu * table[n1 // d]
            v[d::d] += coeff * table[1 : m // d + 1]
        total += float(v[1:] @ v[1:])
    return total / n_limit


def check_kim_sarnak(provider: CoefficientProvider, n_limit: int, eps: float = 0.03) -> dict:
    """Scan |lambda(1,n)| / n^(5/14+eps) and report the worst case."""
    if n_limit > provider.max_index:
        raise RangeError(f"N={n_limit} beyond table of size {provider.max_index}")
    n = np.arange(1, n_limit + 1, dtype=np.float64)
    ratios = np.abs(provider.table[1 : n_limit + 1]) / n ** (5.0 / 14.0 + eps)
    k = int(np.argmax(ratios))
    return {"max_ratio": float(ratios[k]), "argmax": k + 1, "eps": eps, "n_limit": n_limit}


def d3_by_enumeration(n: int) -> int:
    """Oracle: number of ordered triples (a, b, c) with abc = n."""
    count = 0
    for a in range(1, n + 1):
        if n % a:
            continue
        q = n // a
        for b in range(1, q + 1):
            if q % b == 0:
                count += 1
    return count
