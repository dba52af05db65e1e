"""Smooth compactly supported weights built from the exp(-1/t) glue function.

Each weight is a product of two one-sided transitions around an exact
plateau, so plateau values are bitwise 1.0 and support edges are bitwise
0.0.  Derivatives up to order 8 come from symbolically differentiated
transition profiles; the measured inertness constants
c_j = max |x^j W^(j)(x)| / Y^j are recorded on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import DomainError

MAX_DERIV_ORDER = 8

_glue_cache: list = []


def _glue_derivatives(order: int):
    """Lazily compiled j-th derivatives of S(t) = g(t)/(g(t)+g(1-t))."""
    global _glue_cache
    if len(_glue_cache) <= order:
        import sympy as sp

        t = sp.Symbol("t")
        g = sp.exp(-1 / t)
        expr = g / (g + g.subs(t, 1 - t))
        for _ in range(len(_glue_cache)):
            expr = sp.diff(expr, t)
        while len(_glue_cache) <= order:
            _glue_cache.append(sp.lambdify(t, expr, "numpy", cse=True))
            expr = sp.diff(expr, t)
    return _glue_cache


_T_EDGE = 1e-3  # S and its derivatives are below 1e-300 outside [_T_EDGE, 1-_T_EDGE]


def glue_step(t: np.ndarray) -> np.ndarray:
    """The smoothstep itself: 0 for t<=0, 1 for t>=1, C-infinity in between."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > _T_EDGE) & (t < 1.0 - _T_EDGE)
    if np.any(mid):
        tm = t[mid]
        a = np.exp(-1.0 / tm)
        b = np.exp(-1.0 / (1.0 - tm))
        out[mid] = a / (a + b)
    # inside (0, _T_EDGE] the true value is below 1e-300: flushes to 0
    out[(t >= 1.0 - _T_EDGE) & (t < 1.0)] = 1.0
    return out


def glue_step_deriv(t: np.ndarray, order: int) -> np.ndarray:
    if order == 0:
        return glue_step(t)
    if order > MAX_DERIV_ORDER:
        raise DomainError(f"derivative order {order} > {MAX_DERIV_ORDER}")
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    mid = (t > _T_EDGE) & (t < 1.0 - _T_EDGE)
    if np.any(mid):
        out[mid] = _glue_derivatives(order)[order](t[mid])
    return out


class BumpKind(Enum):
    PLATEAU_ON_HALF_ONE = "plateau_half_one"
    PLATEAU_ON_ONE_TWO = "plateau_one_two"
    SYMMETRIC_ANNULUS = "symmetric_annulus"
    EVEN_PLATEAU = "even_plateau"


@dataclass
class BumpWeight:
    """Plateau weight: 0 outside [a, b], 1 on [pa, pb], glue transitions between.

    ``even=True`` mirrors the positive-axis core through the origin;
    ``annulus=True`` additionally kills a neighbourhood of 0, giving support
    [-b, -a] union [a, b].
    """

    support: tuple[float, float]
    plateau: tuple[float, float]
    inert_scale: float
    kind: BumpKind
    even: bool = False
    annulus: bool = False
    deriv_constants: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        a, b = self.support
        pa, pb = self.plateau
        if not (a <= pa <= pb <= b):
            raise DomainError("plateau must sit inside the support")
        if not self.deriv_constants:
            self.deriv_constants = self._measure_constants()

    # -- evaluation ---------------------------------------------------------

    def _core(self, x: np.ndarray) -> np.ndarray:
        a, b = self.support
        pa, pb = self.plateau
        out = np.zeros_like(x)
        out[(x >= pa) & (x <= pb)] = 1.0
        if pa > a:
            left = (x > a) & (x < pa)
            out[left] = glue_step((x[left] - a) / (pa - a))
        if b > pb:
            right = (x > pb) & (x < b)
            out[right] = glue_step((b - x[right]) / (b - pb))
        return out

    def _core_deriv(self, x: np.ndarray, order: int) -> np.ndarray:
        a, b = self.support
        pa, pb = self.plateau
        out = np.zeros_like(x)
        if order == 0:
            return self._core(x)
        if pa > a:
            left = (x > a) & (x < pa)
            w = pa - a
            out[left] = glue_step_deriv((x[left] - a) / w, order) / w**order
        if b > pb:
            right = (x > pb) & (x < b)
            w = b - pb
            out[right] = glue_step_deriv((b - x[right]) / w, order) * (-1.0 / w) ** order
        return out

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if not self.even:
            return self._core(x)
        return self._core(np.abs(x))

    def deriv(self, x, order: int) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if not self.even:
            return self._core_deriv(x, order)
        val = self._core_deriv(np.abs(x), order)
        if order % 2:
            val = np.where(x < 0, -val, val)
        return val

    # -- metadata -----------------------------------------------------------

    def support_interval(self) -> tuple[float, float]:
        a, b = self.support
        return (-b, b) if self.even else (a, b)

    def grid(self, n: int = 4001) -> np.ndarray:
        lo, hi = self.support_interval()
        return np.linspace(lo, hi, n)

    def _measure_constants(self) -> list[float]:
        xs = self.grid()
        y = self.inert_scale
        consts = []
        for j in range(MAX_DERIV_ORDER + 1):
            vals = np.abs(xs**j * self.deriv(xs, j)) / y**j
            consts.append(float(vals.max()))
        return consts

    def integral(self) -> float:
        xs = self.grid(20001)
        return float(np.trapezoid(self(xs), xs))

    def centroid(self) -> float:
        xs = self.grid(20001)
        w = self(xs)
        return float(np.trapezoid(w * xs, xs) / np.trapezoid(w, xs))

    def weighted_power_mean(self, power: float) -> float:
        """Weighted mean of x^power over the weight (positive part)."""
        lo, hi = self.support
        xs = np.linspace(lo, hi, 20001)
        w = self._core(xs)
        return float(np.trapezoid(w * xs**power, xs) / np.trapezoid(w, xs))


def make_bump(kind, inert_scale: float) -> BumpWeight:
    """The three production weight shapes, keyed by plateau location."""
    if inert_scale < 1:
        raise DomainError("inert scale must be at least 1")
    if isinstance(kind, str):
        kind = BumpKind(kind)
    y = float(inert_scale)
    if kind is BumpKind.PLATEAU_ON_HALF_ONE:
        w = min(1.0 / y, 0.25)
        return BumpWeight((0.5, 1.0), (0.5 + w, 1.0 - w), y, kind)
    if kind is BumpKind.PLATEAU_ON_ONE_TWO:
        w = 0.5 / y
        return BumpWeight((1.0 - w, 2.0 + w), (1.0, 2.0), y, kind)
    if kind is BumpKind.SYMMETRIC_ANNULUS:
        w = min(1.0 / y, 0.5)
        return BumpWeight((1.0, 2.0), (1.0 + w, 2.0 - w), y, kind, even=True, annulus=True)
    raise DomainError(f"unsupported bump kind {kind}")


def even_plateau_bump(plateau_edge: float = 2.0, inert_scale: float = 1.0) -> BumpWeight:
    """Even weight equal to 1 on [-p, p], vanishing outside [-p-1/(2Y), p+1/(2Y)]."""
    if inert_scale < 1:
        raise DomainError("inert scale must be at least 1")
    w = 0.5 / float(inert_scale)
    return BumpWeight((0.0, plateau_edge + w), (0.0, plateau_edge), float(inert_scale),
                      BumpKind.EVEN_PLATEAU, even=True)
