import sys

import pytest

from cohenperiods import warm_bernoulli

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)  # exact values in assertion messages are long


@pytest.fixture(scope="session", autouse=True)
def bernoulli_session_table():
    """Single-threaded precompute shared by every test in the session.

    3998 covers the heaviest acceptance grid point (k = 2000 needs B_{2(k-1)}).
    """
    return warm_bernoulli(3998)


def dim_cusp_forms(k: int) -> int:
    """dim S_k for the full modular group, even k >= 4."""
    if k < 12 or k % 2:
        return 0
    return k // 12 - (1 if k % 12 == 2 else 0)


@pytest.fixture(scope="session")
def tau_oracle():
    """Ramanujan tau values from the product expansion q prod (1-q^n)^24."""

    def expand(n_terms: int) -> list[int]:
        # poly[i] = coefficient of q^i in prod_{n=1..n_terms} (1 - q^n)^24
        poly = [0] * (n_terms + 1)
        poly[0] = 1
        for n in range(1, n_terms + 1):
            # multiply by (1 - q^n)^24 truncated at q^n_terms
            factor = [0] * (n_terms + 1)
            for i in range(0, n_terms // n + 1):
                sign = -1 if i % 2 else 1
                factor[i * n] = sign * _binom(24, i) if i <= 24 else 0
            out = [0] * (n_terms + 1)
            for i, a in enumerate(poly):
                if not a:
                    continue
                for j in range(0, n_terms + 1 - i, 1):
                    if factor[j]:
                        out[i + j] += a * factor[j]
            poly = out
        # tau(m) = coefficient of q^m in q * poly
        return [0] + poly[: n_terms]

    return expand


def _binom(n, k):
    import math

    return math.comb(n, k) if 0 <= k <= n else 0
