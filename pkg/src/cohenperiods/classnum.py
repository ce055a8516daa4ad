"""Exact arithmetic for generalized Hurwitz class numbers.

Everything here is computed over plain Python integers and fractions:
Kronecker symbols, fundamental-discriminant decompositions, Bernoulli and
generalized Bernoulli numbers, Dirichlet L-values at non-positive integers
and finally the class numbers H(r, N) themselves.  A shared Bernoulli
table is the only mutable state; it is grown in a single-threaded
precompute phase and read immutably afterwards.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

CACHE_HEADER = "bernoulli-cache v1"


def kronecker(D: int, d: int) -> int:
    """Kronecker symbol (D/d) for d >= 1."""
    if d < 1:
        raise ValueError("kronecker is only defined here for d >= 1")
    result = 1
    while d % 2 == 0:
        d //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    return result * _jacobi(D % d, d)


def _jacobi(a: int, n: int) -> int:
    # n odd, n >= 1, 0 <= a < n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization of n >= 1 into (prime, exponent) pairs."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in _factorize(n):
        ds = [d * p**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def mobius(n: int) -> int:
    m = 1
    for _, e in _factorize(n):
        if e > 1:
            return 0
        m = -m
    return m


def sigma(k: int, n: int) -> int:
    """Divisor power sum sigma_k(n)."""
    return sum(d**k for d in divisors(n))


@dataclass(frozen=True)
class FundDisc:
    """M = D * f**2 with D a fundamental discriminant (D = 1 allowed)."""

    D: int
    f: int


def is_fundamental(D: int) -> bool:
    if D % 4 == 1:
        return _is_squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _is_squarefree(abs(m))
    return False


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in _factorize(n))


def decompose(M: int) -> FundDisc:
    """Split M = D * f**2 with D fundamental; requires M = 0 or 1 mod 4."""
    if M == 0:
        raise ValueError("cannot decompose 0")
    if M % 4 not in (0, 1):
        raise ValueError(f"{M} is not congruent to 0 or 1 mod 4")
    s, f = 1, 1
    for p, e in _factorize(abs(M)):
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    if M < 0:
        s = -s
    if s % 4 == 1:
        out = FundDisc(s, f)
    else:
        # s = 2, 3 mod 4: the square part must absorb a factor of 4
        out = FundDisc(4 * s, f // 2)
    assert out.D * out.f**2 == M
    return out


# ---------------------------------------------------------------------------
# Bernoulli numbers


class BernoulliTable:
    """Exact Bernoulli numbers B_0..B_n with the convention B_1 = -1/2.

    The even values are produced all at once from the tangent-number
    triangle (integer arithmetic only); the defining recurrence
    sum_j C(n+1, j) B_j = 0 is kept as a test-side oracle.
    """

    B1 = Fraction(-1, 2)

    def __init__(self):
        self._even: list[Fraction] = [Fraction(1)]  # B_0, B_2, B_4, ...

    @property
    def max_index(self) -> int:
        return 2 * (len(self._even) - 1) + 1

    def __getitem__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("Bernoulli index must be >= 0")
        if n == 1:
            return self.B1
        if n % 2 == 1:
            return Fraction(0)
        if n > self.max_index:
            self.extend_to(max(n, 2 * self.max_index))
        return self._even[n // 2]

    def extend_to(self, n: int) -> None:
        half = n // 2
        if half < len(self._even):
            return
        self._even = [Fraction(1)] + _even_bernoullis(half)

    def save(self, path: str) -> None:
        n = self.max_index - 1  # highest even index actually stored
        lines = [f"{CACHE_HEADER} max={n}\n"]
        for i in range(n + 1):
            b = self[i]
            lines.append(f"{i} {b.numerator} {b.denominator}\n")
        d = os.path.dirname(os.path.abspath(path))
        os.makedirs(d, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".bernoulli-")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.writelines(lines)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str) -> "BernoulliTable":
        table = cls()
        with open(path) as fh:
            header = fh.readline().strip()
            if not header.startswith(CACHE_HEADER + " max="):
                raise ValueError(f"unrecognized cache header: {header!r}")
            n_max = int(header.split("max=")[1])
            even = [Fraction(1)] * (n_max // 2 + 1)
            for line in fh:
                idx, num, den = line.split()
                idx = int(idx)
                if idx % 2 == 0:
                    even[idx // 2] = Fraction(int(num), int(den))
        table._even = even
        return table


def _even_bernoullis(count: int) -> list[Fraction]:
    """[B_2, B_4, ..., B_{2*count}] via the tangent-number triangle."""
    if count < 1:
        return []
    t = [0] * (count + 1)  # t[1..count] are tangent numbers
    t[1] = 1
    for k in range(2, count + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, count + 1):
        for j in range(k, count + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    out = []
    for n in range(1, count + 1):
        p = 1 << (2 * n)
        b = Fraction(2 * n * t[n], p * (p - 1))
        out.append(b if n % 2 else -b)
    return out


_TABLE = BernoulliTable()


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, served from the shared table."""
    return _TABLE[n]


def bernoulli_table() -> BernoulliTable:
    return _TABLE


def warm_bernoulli(n: int, cache_file: str | None = None) -> BernoulliTable:
    """Make sure B_0..B_n are available, using/refreshing a disk cache."""
    global _TABLE
    loaded_max = -1
    if cache_file and os.path.exists(cache_file):
        try:
            loaded = BernoulliTable.load(cache_file)
        except (ValueError, OSError):
            loaded = None
        if loaded is not None:
            loaded_max = loaded.max_index
            if loaded_max > _TABLE.max_index:
                _TABLE = loaded
    if _TABLE.max_index < n:
        _TABLE.extend_to(n)
    if cache_file and loaded_max < _TABLE.max_index:
        _TABLE.save(cache_file)
    return _TABLE


# ---------------------------------------------------------------------------
# Generalized Bernoulli numbers and L-values


@lru_cache(maxsize=None)
def gen_bernoulli(r: int, D: int) -> Fraction:
    """Generalized Bernoulli number B_{r, chi_D} for fundamental D (or D=1).

    Evaluates |D|^(r-1) * sum_{a=1..|D|} chi_D(a) * B_r(a/|D|) with the
    Bernoulli polynomial expanded over a common integer denominator, so the
    inner loops stay in integer arithmetic.
    """
    if r < 1:
        raise ValueError("gen_bernoulli requires r >= 1")
    if D != 1 and not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    q = abs(D)
    _TABLE[r]  # single growth point before the read-only loop
    denom_lcm = 1
    for j in range(r + 1):
        denom_lcm = math.lcm(denom_lcm, _TABLE[j].denominator)
    # coeff[j] = C(r, j) * (B_j * L) * q^j, so that
    # q^r * L * B_r(a/q) = sum_j coeff[j] * a^(r-j)
    coeffs = []
    qj = 1
    for j in range(r + 1):
        b = _TABLE[j]
        coeffs.append(math.comb(r, j) * (b.numerator * (denom_lcm // b.denominator)) * qj)
        qj *= q
    total = 0
    for a in range(1, q + 1):
        chi = kronecker(D, a)
        if chi == 0:
            continue
        acc = 0
        for c in coeffs:
            acc = acc * a + c
        total += chi * acc
    # B_{r,chi} = q^(r-1) * total / (q^r * L)
    return Fraction(total, denom_lcm * q)


def dirichlet_L_neg(r: int, D: int) -> Fraction:
    """L(1 - r, chi_D) = -B_{r, chi_D} / r, exactly."""
    return -gen_bernoulli(r, D) / r


@dataclass(frozen=True)
class HurwitzKey:
    r: int
    N: int

    def __post_init__(self):
        if self.r < 1 or self.r % 2 == 0:
            raise ValueError("r must be an odd positive integer")
        if self.N < 0:
            raise ValueError("N must be >= 0")


@lru_cache(maxsize=None)
def hurwitz_H(r: int, N: int) -> Fraction:
    """Generalized Hurwitz class number H(r, N) for odd r >= 1, N >= 0.

    H(r, 0) = zeta(1 - 2r); for N > 0 with -N = D f**2 it is
    L(1-r, chi_D) * sum_{d | f} mu(d) chi_D(d) d^(r-1) sigma_{2r-1}(f/d),
    and 0 when -N is not congruent to 0 or 1 mod 4.
    """
    HurwitzKey(r, N)
    if N == 0:
        return -bernoulli(2 * r) / (2 * r)
    if (-N) % 4 not in (0, 1):
        return Fraction(0)
    fd = decompose(-N)
    lval = dirichlet_L_neg(r, fd.D)
    s = 0
    for d in divisors(fd.f):
        mu = mobius(d)
        if mu == 0:
            continue
        s += mu * kronecker(fd.D, d) * d ** (r - 1) * sigma(2 * r - 1, fd.f // d)
    return lval * s


def approx_L(r: int, D: int, terms: int) -> float:
    """Float approximation of L(r, chi_D) by direct summation (test oracle).

    Truncation error is at most terms^(1-r) / (r-1); requires r >= 2 so the
    series converges absolutely.
    """
    if r < 2:
        raise ValueError("approx_L requires r >= 2")
    if terms < 1:
        raise ValueError("terms must be positive")
    if D != 1 and not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    q = abs(D)
    # chi_D is |D|-periodic for fundamental D, so a lookup table suffices
    chi = [kronecker(D, a if a else q) for a in range(q)]
    return math.fsum(
        chi[n % q] / n**r for n in range(1, terms + 1) if chi[n % q]
    )


def approx_L_truncation_bound(r: int, terms: int) -> float:
    return terms ** (1 - r) / (r - 1)
