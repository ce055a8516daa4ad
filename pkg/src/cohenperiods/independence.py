"""Period matrices, exact nonsingularity certificates and the pair sweep.

The n x n matrix for a weight k and indices l_1 < ... < l_n holds the
unnormalized coefficients c_{k, k-1-2 l_i}(m_j) with column scheme
m_j = 4^(j-1) or m_j = j^2.  Nonsingularity is decided by exact
determinants (fraction-free elimination); the weight sweep detects every
singular 2 x 2 pair per weight by grouping rows into exact projective
classes instead of forming all pairwise determinants.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from mpmath import iv

from . import enclosure
from .classnum import warm_bernoulli
from .cohen import NormalizationUndefined, c_coeff, delta_exact

SCHEMES = ("powers_of_4", "squares")


def column_index(scheme: str, j: int) -> int:
    """m_j for column j = 1..n under the given scheme."""
    if scheme == "powers_of_4":
        return 4 ** (j - 1)
    if scheme == "squares":
        return j * j
    raise ValueError(f"unknown scheme {scheme!r}")


def _validate_ells(k: int, ells: Sequence[int]) -> tuple[int, ...]:
    ells = tuple(int(l) for l in ells)
    if k % 2 or k < 12:
        raise ValueError(f"k must be an even integer >= 12, got {k}")
    if not ells:
        raise ValueError("need at least one index")
    if any(l < 0 for l in ells) or ells[-1] > (k - 4) // 2:
        raise ValueError(f"indices must lie in [0, (k-4)/2] = [0, {(k-4)//2}]")
    if any(a >= b for a, b in zip(ells, ells[1:])):
        raise ValueError("indices must be strictly increasing")
    return ells


@dataclass(frozen=True)
class PeriodMatrix:
    k: int
    ells: tuple[int, ...]
    scheme: str
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.ells)

    def row_weight(self, i: int) -> int:
        """The odd weight-index r of row i (1-based in the math, 0-based here)."""
        return self.k - 1 - 2 * self.ells[i]


def build_matrix(k: int, ells: Sequence[int], scheme: str = "powers_of_4") -> PeriodMatrix:
    """Fill the coefficient matrix for (k; l_1..l_n) under a column scheme."""
    ells = _validate_ells(k, ells)
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    n = len(ells)
    entries = tuple(
        tuple(c_coeff(k, k - 1 - 2 * l, column_index(scheme, j)) for j in range(1, n + 1))
        for l in ells
    )
    return PeriodMatrix(k, ells, scheme, entries)


def det_exact(matrix) -> Fraction:
    """Exact determinant via fraction-free (Bareiss) elimination.

    Accepts a PeriodMatrix or any square array of ints/Fractions.  Rows are
    scaled to integers first; the scaling is divided back out at the end.
    """
    if isinstance(matrix, PeriodMatrix):
        rows = [list(row) for row in matrix.entries]
    else:
        rows = [[Fraction(x) for x in row] for row in matrix]
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise ValueError("matrix must be square and non-empty")
    scale = 1
    a = []
    for row in rows:
        lcm = 1
        for x in row:
            lcm = math.lcm(lcm, Fraction(x).denominator)
        scale *= lcm
        a.append([int(x * lcm) for x in row])
    sign = 1
    prev = 1
    for p in range(n - 1):
        if a[p][p] == 0:
            for i in range(p + 1, n):
                if a[i][p]:
                    a[p], a[i] = a[i], a[p]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(p + 1, n):
            for j in range(p + 1, n):
                num = a[i][j] * a[p][p] - a[i][p] * a[p][j]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss division must be exact"
                a[i][j] = q
            a[i][p] = 0
        prev = a[p][p]
    return Fraction(sign * a[n - 1][n - 1], scale)


@dataclass(frozen=True)
class TupleResult:
    nonsingular: bool
    det: Fraction


def tuple_nonsingular(k: int, ells: Sequence[int], scheme: str = "powers_of_4") -> TupleResult:
    """Exact determinant verdict for one (k; l_1..l_n) tuple."""
    d = det_exact(build_matrix(k, ells, scheme))
    return TupleResult(d != 0, d)


# ---------------------------------------------------------------------------
# Criterion for nonsingularity via error terms


def f_poly(xs: Iterable[Fraction]) -> Fraction:
    """prod(1 + x_i) - 1, exactly."""
    total = Fraction(1)
    for x in xs:
        total *= 1 + Fraction(x)
    return total - 1


EXACT_SUP_LIMIT = 8


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of the determinant-domination criterion.

    sup_f is the exact sup over all permutations when n <= 8 (sup_is_exact),
    otherwise the (1+M)^n - 1 upper bound with M = max |error|.  holds is
    'proved' when sup_f < rhs; with an exact sup the failure of the
    inequality is decisive ('violated'), with the bound it is only
    'inconclusive'.
    """

    sup_f: Fraction
    sup_is_exact: bool
    rhs: Fraction
    holds: str


def criterion_rhs(n: int) -> Fraction:
    e = n * (n - 1) // 2
    return Fraction(3**e, 4**e * math.factorial(n))


def nonsingularity_criterion(k: int, ells: Sequence[int]) -> CriterionReport:
    """Check sup_tau |f(eps_{1,tau(1)}, ..., eps_{n,tau(n)})| < (3/4)^(n(n-1)/2)/n!.

    The error terms eps_{i,j} = delta at (k, k-1-2 l_i, 4^(j-1)) are exact
    rationals, so the comparison is decided exactly whenever the sup is
    enumerated (n <= 8).  The bound side only applies for k >= 776.
    """
    ells = _validate_ells(k, ells)
    if k < 776:
        raise ValueError("criterion requires k >= 776")
    n = len(ells)
    eps = [
        [delta_exact(k, k - 1 - 2 * l, 4 ** (j - 1)) for j in range(1, n + 1)]
        for l in ells
    ]
    rhs = criterion_rhs(n)
    if n <= EXACT_SUP_LIMIT:
        one_plus = [[1 + e for e in row] for row in eps]
        sup = Fraction(0)
        for perm in itertools.permutations(range(n)):
            prod = Fraction(1)
            for i in range(n):
                prod *= one_plus[i][perm[i]]
            sup = max(sup, abs(prod - 1))
        return CriterionReport(sup, True, rhs, enclosure.PROVED if sup < rhs else enclosure.VIOLATED)
    m = max(abs(e) for row in eps for e in row)
    bound = (1 + m) ** n - 1
    holds = enclosure.PROVED if bound < rhs else enclosure.INCONCLUSIVE
    return CriterionReport(bound, False, rhs, holds)


# ---------------------------------------------------------------------------
# Vandermonde comparison matrix


def vandermonde_bound(ells: Sequence[int], base: int) -> tuple[int, Fraction]:
    """Exact det prod_{i<j} (base^lj - base^li) and its product lower bound.

    Returns (det, bound) with bound = ((base-1)/base)^(n(n-1)/2) *
    prod_j base^(l_j (j-1)); asserts det >= bound.
    """
    ells = tuple(ells)
    if base < 2:
        raise ValueError("base must be an integer >= 2")
    if any(a >= b for a, b in zip(ells, ells[1:])):
        raise ValueError("indices must be strictly increasing")
    powers = [base**l for l in ells]
    det = 1
    for i in range(len(ells)):
        for j in range(i + 1, len(ells)):
            det *= powers[j] - powers[i]
    n = len(ells)
    e = n * (n - 1) // 2
    bound = Fraction((base - 1) ** e, base**e)
    for j, l in enumerate(ells):
        bound *= Fraction(base) ** (l * j)
    assert det >= bound
    return det, bound


def perm_max_check(ells: Sequence[int]) -> bool:
    """Exhaustively confirm prod_i 4^(l_i (tau(i)-1)) is maximal at tau = id."""
    ells = tuple(ells)
    n = len(ells)
    if n > EXACT_SUP_LIMIT:
        raise ValueError(f"exhaustive check limited to n <= {EXACT_SUP_LIMIT}")
    if any(a >= b for a, b in zip(ells, ells[1:])):
        raise ValueError("indices must be strictly increasing")
    # compare exponents: 4^x is monotone in x
    identity = sum(l * i for i, l in enumerate(ells))
    return all(
        sum(l * p for l, p in zip(ells, perm)) <= identity
        for perm in itertools.permutations(range(n))
    )


# ---------------------------------------------------------------------------
# Weight thresholds


def min_weight_general(n: int,
                       max_prec_bits: int = enclosure.DEFAULT_MAX_PREC_BITS) -> tuple[float, float]:
    """Enclosure of the weight threshold above which any n-tuple is nonsingular.

    max(776, 32 pi cbrt(20) 4^(13(n-1)/6)
             / cbrt( (rhs(n) + 1)^(1/n) - 1 ) + 1)
    with rhs(n) = (3/4)^(n(n-1)/2) / n!.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    with enclosure.interval_precision(min(1024, max_prec_bits)):
        inner = enclosure.iv_fraction(criterion_rhs(n) + 1)
        root_n = enclosure.iv_root(inner, n) - iv.mpf(1)
        denom = enclosure.iv_root(root_n, 3)
        numer = (
            iv.mpf(32)
            * iv.pi
            * enclosure.iv_root(20, 3)
            * iv.exp(enclosure.iv_log(4) * enclosure.iv_fraction(Fraction(13 * (n - 1), 6)))
        )
        expr = numer / denom + iv.mpf(1)
        lo, hi = enclosure.float_endpoints(expr)
    return (max(776.0, lo), max(776.0, hi))


@dataclass(frozen=True)
class CapacityResult:
    valid: bool
    n_max: int


def logk_capacity(k: int, max_prec_bits: int = enclosure.DEFAULT_MAX_PREC_BITS) -> CapacityResult:
    """Whether k >= e^12, and floor(log(k)/4), both via certified enclosures."""
    if k < 4:
        raise ValueError("k must be >= 4")

    valid_box = {}

    def check_valid() -> str:
        e12 = iv.exp(iv.mpf(12))
        lo, hi = enclosure.endpoint_fractions(e12)
        if k >= hi:
            valid_box["v"] = True
            return enclosure.PROVED
        if k < lo:
            valid_box["v"] = False
            return enclosure.PROVED
        return enclosure.INCONCLUSIVE

    if enclosure.certify(check_valid, max_prec_bits) == enclosure.INCONCLUSIVE:
        raise ArithmeticError(f"could not separate {k} from e^12 at max precision")

    floor_box = {}

    def check_floor() -> str:
        x = enclosure.iv_log(k) / iv.mpf(4)
        lo, hi = enclosure.endpoint_fractions(x)
        if math.floor(lo) == math.floor(hi):
            floor_box["n"] = math.floor(lo)
            return enclosure.PROVED
        return enclosure.INCONCLUSIVE

    if enclosure.certify(check_floor, max_prec_bits) == enclosure.INCONCLUSIVE:
        raise ArithmeticError(f"could not resolve floor(log({k})/4) at max precision")

    return CapacityResult(valid_box["v"], floor_box["n"])


# ---------------------------------------------------------------------------
# Pairwise weight sweep

CAP_RULES = ("central", "quarter")


def sweep_cap(k: int, cap_rule: str) -> int:
    if cap_rule == "central":
        return (k - 4) // 2
    if cap_rule == "quarter":
        return (k - 2) // 4
    raise ValueError(f"unknown cap rule {cap_rule!r}")


@dataclass(frozen=True)
class SweepReport:
    k: int
    pairs_checked: int
    singular_pairs: tuple[tuple[int, int], ...]
    normalization_failures: tuple[int, ...]
    wall_ms: float

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "pairs": self.pairs_checked,
            "singular": [list(p) for p in self.singular_pairs],
            "norm_fail": list(self.normalization_failures),
            "ms": self.wall_ms,
        }


def sweep_weight(k: int, cap_rule: str = "central") -> SweepReport:
    """Classify all 2x2 pairs at one weight by exact projective rows.

    Rows (c(1), c(4)) are bucketed by the reduced ratio c(4)/c(1); rows with
    c(1) = 0 but c(4) != 0 form the class at infinity, and identically zero
    rows pair singularly with everything.
    """
    start = time.perf_counter()
    cap = sweep_cap(k, cap_rule)
    zero_rows = []
    classes: dict[object, list[int]] = {}
    norm_fail = []
    for l in range(cap + 1):
        r = k - 1 - 2 * l
        c1 = c_coeff(k, r, 1)
        c4 = c_coeff(k, r, 4)
        if c1 == 0:
            norm_fail.append(l)
            if c4 == 0:
                zero_rows.append(l)
                continue
            key = "inf"
        else:
            key = c4 / c1
        classes.setdefault(key, []).append(l)
    singular = set()
    for members in classes.values():
        singular.update(itertools.combinations(members, 2))
    nonzero = sorted(l for ls in classes.values() for l in ls)
    for z in zero_rows:
        for other in nonzero:
            singular.add((min(z, other), max(z, other)))
        for z2 in zero_rows:
            if z < z2:
                singular.add((z, z2))
    total = cap + 1
    elapsed = (time.perf_counter() - start) * 1000.0
    return SweepReport(
        k=k,
        pairs_checked=total * (total - 1) // 2,
        singular_pairs=tuple(sorted(singular)),
        normalization_failures=tuple(norm_fail),
        wall_ms=elapsed,
    )


class CheckpointMismatch(ValueError):
    pass


def _sweep_config_hash(k_min: int, k_max: int, cap_rule: str) -> str:
    text = f"sweep-v1|{k_min}|{k_max}|{cap_rule}"
    return hashlib.sha256(text.encode()).hexdigest()


class _Checkpoint:
    def __init__(self, path: str, config_hash: str):
        self.path = path
        self.config_hash = config_hash

    def last_completed(self) -> int | None:
        if not os.path.exists(self.path):
            return None
        with open(self.path) as fh:
            data = json.load(fh)
        if data.get("config") != self.config_hash:
            raise CheckpointMismatch(
                f"checkpoint {self.path} was written for a different sweep configuration"
            )
        return int(data["last_k"])

    def update(self, k: int) -> None:
        d = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(d, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".checkpoint-")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump({"version": 1, "config": self.config_hash, "last_k": k}, fh)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _sweep_job(args: tuple[int, str]) -> SweepReport:
    k, cap_rule = args
    return sweep_weight(k, cap_rule)


def pair_sweep(
    k_min: int,
    k_max: int,
    cap_rule: str = "central",
    workers: int = 1,
    checkpoint_path: str | None = None,
) -> Iterator[SweepReport]:
    """Stream per-weight reports for every even k in [k_min, k_max].

    Reports come out in ascending k regardless of worker completion order.
    With a checkpoint path, fully completed weights are recorded (before
    being yielded) and skipped when the same sweep is re-run.
    """
    if k_min % 2 or k_max % 2:
        raise ValueError("k_min and k_max must be even")
    if not 12 <= k_min <= k_max:
        raise ValueError("need 12 <= k_min <= k_max")
    if cap_rule not in CAP_RULES:
        raise ValueError(f"unknown cap rule {cap_rule!r}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    start = k_min
    checkpoint = None
    if checkpoint_path:
        checkpoint = _Checkpoint(checkpoint_path, _sweep_config_hash(k_min, k_max, cap_rule))
        last = checkpoint.last_completed()
        if last is not None:
            start = last + 2
    ks = list(range(start, k_max + 1, 2))
    if not ks:
        return
    # single-threaded precompute so that forked workers inherit the table
    warm_bernoulli(2 * (k_max - 1))
    if workers == 1:
        for k in ks:
            report = sweep_weight(k, cap_rule)
            if checkpoint:
                checkpoint.update(k)
            yield report
        return
    import multiprocessing

    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        futures = {k: pool.submit(_sweep_job, (k, cap_rule)) for k in ks}
        for k in ks:
            report = futures[k].result()
            if checkpoint:
                checkpoint.update(k)
            yield report
