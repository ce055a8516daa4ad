"""Directed-rounding enclosures for the irrational constants in bound checks.

All core arithmetic in this package is exact (int / Fraction).  The only
place floating point enters is when a proved inequality involves pi, a
logarithm, a zeta value or a root; those are evaluated here as outward
rounded intervals on top of ``mpmath.iv`` and compared with a tri-state
verdict.  A comparison that cannot be decided at the current precision is
retried with doubled precision up to a configurable ceiling and only then
reported as inconclusive.
"""

from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from typing import Callable, Iterator

from mpmath import iv, mp

PROVED = "proved"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

# ~64 decimal digits to start with; comparisons escalate from there.
INITIAL_PREC_BITS = 213
DEFAULT_MAX_PREC_BITS = 4096


def precision_ladder(max_bits: int = DEFAULT_MAX_PREC_BITS) -> Iterator[int]:
    """Yield INITIAL, 2*INITIAL, ... clamped to and ending at max_bits."""
    bits = INITIAL_PREC_BITS
    while True:
        yield min(bits, max_bits)
        if bits >= max_bits:
            return
        bits *= 2


@contextlib.contextmanager
def interval_precision(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def is_interval(x) -> bool:
    return hasattr(x, "_mpi_")


def iv_fraction(q) -> "iv.mpf":
    """Exact rational (or int) -> enclosing interval at current precision."""
    q = Fraction(q)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def as_interval(x) -> "iv.mpf":
    if is_interval(x):
        return x
    if isinstance(x, (int, Fraction)):
        return iv_fraction(x)
    return iv.convert(x)


def iv_root(x, n: int) -> "iv.mpf":
    """n-th root of a positive interval/int/Fraction, n >= 1.

    Goes through exp(log(x)/n) so the (irrational) exponent never has to be
    rounded to a point value.
    """
    x = as_interval(x)
    if n == 1:
        return x
    if n == 2:
        return iv.sqrt(x)
    return iv.exp(iv.log(x) / iv.mpf(n))


def iv_log(x) -> "iv.mpf":
    return iv.log(as_interval(x))


def zeta_interval(s: int, terms: int | None = None) -> "iv.mpf":
    """Enclosure of zeta(s) for an integer s >= 2.

    Exact partial sum plus the integral bracket for the tail,
    sum_{n>T} n^-s in [ ((T+1)^(1-s))/(s-1), (T^(1-s))/(s-1) ],
    whose endpoints are rational.  The width is ~ T^-s, which is ample for
    the lossy bounds certified in this package; it does not shrink to full
    working precision.
    """
    if s < 2:
        raise ValueError("zeta_interval requires integer s >= 2")
    if terms is None:
        terms = min(4096, max(128, iv.prec))
    partial = sum(Fraction(1, n**s) for n in range(1, terms + 1))
    lo = partial + Fraction(1, (s - 1) * (terms + 1) ** (s - 1))
    hi = partial + Fraction(1, (s - 1) * terms ** (s - 1))
    return iv.mpf([iv_fraction(lo).a, iv_fraction(hi).b])


def _raw_to_fraction(t) -> Fraction:
    """Exact value of a finite raw libmp float (sign, man, exp, bc)."""
    sign, man, exp, _ = t
    if man == 0 and exp != 0:
        raise ValueError("non-finite interval endpoint")
    v = Fraction(int(man)) * Fraction(2) ** exp
    return -v if sign else v


def endpoint_fractions(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval (binary floats are rational)."""
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def float_endpoints(x) -> tuple[float, float]:
    """Interval -> (lo, hi) as Python floats, nudged outward to stay safe."""
    lo = math.nextafter(float(mp.mpf(x._mpi_[0])), -math.inf)
    hi = math.nextafter(float(mp.mpf(x._mpi_[1])), math.inf)
    return lo, hi


def compare_le(left, right) -> str:
    """Tri-state verdict for left <= right.

    Either side may be exact (int/Fraction) or an interval; exact sides are
    compared against exact endpoint rationals so that e.g. 0 <= [0, 0]
    resolves to proved.
    """
    lx = isinstance(left, (int, Fraction))
    rx = isinstance(right, (int, Fraction))
    if lx and rx:
        return PROVED if left <= right else VIOLATED
    if lx:
        rlo, rhi = endpoint_fractions(as_interval(right))
        if left <= rlo:
            return PROVED
        if left > rhi:
            return VIOLATED
        return INCONCLUSIVE
    if rx:
        llo, lhi = endpoint_fractions(as_interval(left))
        if lhi <= right:
            return PROVED
        if llo > right:
            return VIOLATED
        return INCONCLUSIVE
    left = as_interval(left)
    right = as_interval(right)
    if left.b <= right.a:
        return PROVED
    if left.a > right.b:
        return VIOLATED
    return INCONCLUSIVE


def compare_lt(left, right) -> str:
    """Tri-state verdict for strict left < right."""
    lx = isinstance(left, (int, Fraction))
    rx = isinstance(right, (int, Fraction))
    if lx and rx:
        return PROVED if left < right else VIOLATED
    if lx:
        rlo, rhi = endpoint_fractions(as_interval(right))
        if left < rlo:
            return PROVED
        if left >= rhi:
            return VIOLATED
        return INCONCLUSIVE
    if rx:
        llo, lhi = endpoint_fractions(as_interval(left))
        if lhi < right:
            return PROVED
        if llo >= right:
            return VIOLATED
        return INCONCLUSIVE
    left = as_interval(left)
    right = as_interval(right)
    if left.b < right.a:
        return PROVED
    if left.a >= right.b:
        return VIOLATED
    return INCONCLUSIVE


def certify(check: Callable[[], str], max_bits: int = DEFAULT_MAX_PREC_BITS) -> str:
    """Run a tri-state check at increasing precision until it resolves."""
    for bits in precision_ladder(max_bits):
        with interval_precision(bits):
            verdict = check()
        if verdict != INCONCLUSIVE:
            return verdict
    return INCONCLUSIVE
