"""Exact Fourier coefficients of Cohen's weight-k modular forms.

For even k >= 4 and odd 3 <= r <= k-1 the m-th coefficient is
sum_{t^2 <= 4m} P(t, m) H(r, 4m - t^2), where P(t, m) is the coefficient
of x^(k-r-1) in (1 - t x + m x^2)^(-r) and H is the generalized Hurwitz
class number.  This module also provides the normalization by the first
coefficient and the error term of the normalized coefficients at perfect
squares together with its certified bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from . import enclosure
from .classnum import hurwitz_H


class NormalizationUndefined(ArithmeticError):
    """Raised when a first Fourier coefficient used for scaling is zero."""

    def __init__(self, k: int, r: int):
        super().__init__(f"c_({k},{r})(1) = 0, normalized coefficients undefined")
        self.k = k
        self.r = r


def _validate_kr(k: int, r: int) -> None:
    if k % 2 or k < 4:
        raise ValueError(f"k must be an even integer >= 4, got {k}")
    if r % 2 == 0 or not 3 <= r <= k - 1:
        raise ValueError(f"r must be odd with 3 <= r <= k-1, got r={r}, k={k}")


def pkr(k: int, r: int, t: int, m: int) -> int:
    """Coefficient of x^(k-r-1) in (1 - t x + m x^2)^(-r), exactly.

    Uses the linear recurrence (n+1) c_{n+1} = t (n+r) c_n - m (n-1+2r) c_{n-1}
    obtained from the logarithmic derivative of the generating function; every
    division is exact.
    """
    _validate_kr(k, r)
    if m < 0:
        raise ValueError("m must be >= 0")
    target = k - r - 1
    c_prev, c = 0, 1
    for n in range(target):
        num = t * (n + r) * c - m * (n - 1 + 2 * r) * c_prev
        q, rem = divmod(num, n + 1)
        assert rem == 0, "recurrence division must be exact"
        c_prev, c = c, q
    return c


class CoeffTable:
    """Per-weight cache of coefficients, transparent to recomputation."""

    def __init__(self, k: int):
        if k % 2 or k < 4:
            raise ValueError(f"k must be an even integer >= 4, got {k}")
        self.k = k
        self._entries: dict[tuple[int, int], Fraction] = {}

    def coefficient(self, r: int, m: int) -> Fraction:
        key = (r, m)
        value = self._entries.get(key)
        if value is None:
            value = _c_value(self.k, r, m)
            self._entries[key] = value
        return value


def _c_value(k: int, r: int, m: int) -> Fraction:
    _validate_kr(k, r)
    if m < 0:
        raise ValueError("m must be >= 0")
    total = Fraction(pkr(k, r, 0, m)) * hurwitz_H(r, 4 * m)
    t = 1
    while t * t <= 4 * m:
        total += 2 * pkr(k, r, t, m) * hurwitz_H(r, 4 * m - t * t)
        t += 1
    return total


_tables: dict[int, CoeffTable] = {}


def coeff_table(k: int) -> CoeffTable:
    table = _tables.get(k)
    if table is None:
        table = CoeffTable(k)
        _tables[k] = table
    return table


def c_coeff(k: int, r: int, m: int) -> Fraction:
    """m-th Fourier coefficient of the weight-k form attached to (k, r)."""
    return coeff_table(k).coefficient(r, m)


def a_norm(k: int, r: int, m: int) -> Fraction:
    """Coefficient normalized so the first one equals 1."""
    c1 = c_coeff(k, r, 1)
    if c1 == 0:
        raise NormalizationUndefined(k, r)
    return c_coeff(k, r, m) / c1


def delta_exact(k: int, r: int, m: int) -> Fraction:
    """Error term a(m) / m^((k-r-1)/2) - 1 for a perfect square m >= 1."""
    root = math.isqrt(m)
    if m < 1 or root * root != m:
        raise ValueError(f"m must be a perfect square >= 1, got {m}")
    e = (k - r - 1) // 2  # k even, r odd: always an integer
    return a_norm(k, r, m) / Fraction(m**e) - 1


@dataclass(frozen=True)
class DeltaResult:
    """Exact error term plus the certified comparison with its bound.

    ``within`` is the tri-state outcome of |delta| <= 5 (32 pi / (k-1))^r
    m^(2r) log(4m); the inequality is guaranteed to hold only for k >= 776,
    for smaller k the verdict is reported as a plain observation.
    """

    delta: Fraction
    bound_low: float
    bound_high: float
    within: str


def delta(k: int, r: int, m: int,
          max_prec_bits: int = enclosure.DEFAULT_MAX_PREC_BITS) -> DeltaResult:
    value = delta_exact(k, r, m)
    target = abs(value)
    endpoints = {}

    def check() -> str:
        b = _delta_bound_iv(k, r, m)
        endpoints["lo"], endpoints["hi"] = enclosure.float_endpoints(b)
        return enclosure.compare_le(target, b)

    verdict = enclosure.certify(check, max_prec_bits)
    return DeltaResult(value, endpoints["lo"], endpoints["hi"], verdict)


def _delta_bound_iv(k: int, r: int, m: int):
    """Enclosure of 5 (32 pi / (k-1))^r m^(2r) log(4m) at current precision."""
    exact = Fraction(5 * 32**r * m ** (2 * r), (k - 1) ** r)
    return enclosure.iv_fraction(exact) * iv.pi**r * enclosure.iv_log(4 * m)
