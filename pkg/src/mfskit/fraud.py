"""Distance-fraud success probability: exact recursion, brute force, Monte Carlo.

The exact engine works on the family of "fan trees": a root with 2m
children, each child rooting a full binary tree of depth n-1 (m = 1 is the
full binary tree of depth n).  Over uniform random binary labelings, let
M(m, n) be the maximum occurrence count among all label sequences of n+1
symbols read along walks from the root.  Conditioning on how many root
children are labeled 0 splits the tree into two independent halves one
level down, which yields a recursion on threshold probabilities
Pr(M(m, n) < x) with closed-form values at depth 1.

All such probabilities are dyadic.  Internally a value at level n with
parameter m is stored as an integer numerator over 2**(c_n * m) where
c_1 = 2 and c_n = 2*c_{n-1} + 2; that exponent is linear in m, which makes
the recursion pure integer arithmetic with no normalization.

Two exact facts prune the state space: M(m, n) >= m always, so the
probability is 0 when x <= m; and M(m, n) <= m * 2**n with equality on the
all-equal labeling, so the probability is 1 when x exceeds that.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, sqrt
from operator import mul

from .dyadic import DyadicProbability
from .errors import DEFAULT_LIMITS, Limits, MfskitError, ResourceLimitError
from .graphs import LabeledDigraph
from .walks import count_walks, walks_from


def _binom_rows(kmax: int) -> list[list[int]]:
    rows = []
    for k in range(kmax + 1):
        row = [1] * (k + 1)
        for i in range(1, k + 1):
            row[i] = row[i - 1] * (k - i + 1) // i
        rows.append(row)
    return rows


def _level_exponent(level: int) -> int:
    # c_1 = 2, c_l = 2*c_{l-1} + 2  ->  2**(l+1) - 2
    return (1 << (level + 1)) - 2


def _base_numer(m: int, x: int, rows) -> int:
    """Numerator of Pr(M(m, 1) < x) over 2**(2m)."""
    if m == 0:
        return 1
    if x <= m:
        return 0
    if x > 2 * m:
        return 1 << (2 * m)
    row = rows[2 * m]
    return row[m] + 2 * sum(row[i] for i in range(m + 1, x))


def base_case_prob(m: int, x: int) -> DyadicProbability:
    """Pr(M(m, 1) < x): the depth-1 stop condition of the recursion.

    In priority order: 1 if m = 0 (a bare root realizes no sequence of
    length >= 2); 0 if x <= m (one child label must repeat at least m
    times); 1 if x > 2m; otherwise the binomial tail
    (C(2m, m) + 2 * sum_{i=m+1}^{x-1} C(2m, i)) / 2**(2m).
    """
    if m < 0 or x < 1:
        raise ValueError("need m >= 0 and x >= 1")
    rows = _binom_rows(2 * m)
    return DyadicProbability(_base_numer(m, x, rows), 2 * m)


def recursive_prob(
    m: int,
    n: int,
    x: int,
    memo: dict | None = None,
) -> DyadicProbability:
    """Exact Pr(M(m, n) < x), memoized on (m, level) for this fixed x."""
    if m < 0 or n < 1 or x < 1:
        raise ValueError("need m >= 0, n >= 1 and x >= 1")
    if memo is None:
        memo = {}
    rows = _binom_rows(2 * m * (1 << (n - 1)))

    def solve(mm: int, level: int) -> int:
        if mm == 0:
            return 1
        if mm >= x:
            return 0
        if x > (mm << level):
            return 1 << (_level_exponent(level) * mm)
        key = (mm, level)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if level == 1:
            value = _base_numer(mm, x, rows)
            memo[key] = value
            return value
        row = rows[2 * mm]
        hi = min(2 * mm, x - 1)
        lo = 2 * mm - hi
        acc = 0
        for i in range(lo, mm):
            a = solve(i, level - 1)
            if a:
                b = solve(2 * mm - i, level - 1)
                if b:
                    acc += row[i] * a * b
        acc <<= 1
        pm = solve(mm, level - 1)
        acc += row[mm] * pm * pm
        memo[key] = acc
        return acc

    return DyadicProbability(solve(m, n), _level_exponent(n) * m)


def _sweep_one_x(n: int, x: int, rows) -> int:
    """Numerator of Pr(M(1, n) < x) over 2**(2**(n+1) - 2), bottom-up.

    Level l holds parameters m = 0..2**(n-l); each pass consumes the level
    below through the binomial-weighted symmetric sum.
    """
    mmax = 1 << (n - 1)
    prev = [_base_numer(m, x, rows) for m in range(mmax + 1)]
    for level in range(2, n + 1):
        c = _level_exponent(level)
        mmax = 1 << (n - level)
        cur = [0] * (mmax + 1)
        for m in range(min(mmax, x - 1) + 1):
            if x > (m << level):
                cur[m] = 1 << (c * m)
                continue
            row = rows[2 * m]
            hi = min(2 * m, x - 1)
            lo = 2 * m - hi
            acc = sum(
                map(mul, map(mul, row[lo:m], prev[lo:m]), prev[2 * m - lo : m : -1])
            )
            pm = prev[m]
            cur[m] = (acc << 1) + row[m] * pm * pm
        prev = cur
    return prev[1]


def _sweep_chunk(args: tuple[int, int, int]) -> list[int]:
    n, x_lo, x_hi = args
    rows = _binom_rows(1 << n)
    return [_sweep_one_x(n, x, rows) for x in range(x_lo, x_hi)]


@dataclass(frozen=True)
class CdfTable:
    """Threshold probabilities Pr(M(1, n) < x) for x = 1 .. 2**n + 1."""

    rounds: int
    values: tuple[DyadicProbability, ...]

    def prob_below(self, x: int) -> DyadicProbability:
        if not (1 <= x <= (1 << self.rounds) + 1):
            raise ValueError(f"x must be in 1..2^{self.rounds}+1")
        return self.values[x - 1]


@dataclass(frozen=True)
class TreeExpectation:
    rounds: int
    expected_max: Fraction
    cdf: CdfTable


def expected_max_tree(
    n: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
    workers: int = 1,
) -> TreeExpectation:
    """Exact expectation of the maximum occurrence count for the full
    binary tree of depth n under uniform random labeling.

    Sweeps x = 1 .. 2**n + 1 with an independent pass per threshold, so
    memory stays at one level table per pass; the sweep may be partitioned
    across processes (`workers`), results merge deterministically.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n > limits.max_exact_rounds:
        raise ResourceLimitError(
            f"exact mode is limited to n <= {limits.max_exact_rounds}; "
            "use float mode with an explicit override for larger n"
        )
    top = 1 << n
    xs = range(1, top + 2)
    if workers > 1:
        chunk = max(1, len(xs) // (workers * 4))
        tasks = [(n, lo, min(lo + chunk, top + 2)) for lo in range(1, top + 2, chunk)]
        numerators: list[int] = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_sweep_chunk, tasks):
                numerators.extend(part)
    else:
        rows = _binom_rows(1 << n)
        numerators = [_sweep_one_x(n, x, rows) for x in xs]
    d = _level_exponent(n)
    # E[M] = sum_{x=1}^{2^n} Pr(M >= x)
    shortfall = sum(numerators[:top])
    expected = Fraction((top << d) - shortfall, 1 << d)
    cdf = CdfTable(n, tuple(DyadicProbability(nu, d) for nu in numerators))
    return TreeExpectation(n, expected, cdf)


# -- float mode ----------------------------------------------------------------


def _binom_pmf_row(k: int) -> list[float]:
    """C(k, i) / 2**k as floats, built by ratio steps out from the mode so
    no intermediate value over- or underflows before it has to."""
    mid = k // 2
    row = [0.0] * (k + 1)
    row[mid] = float(Fraction(comb(k, mid), 1 << k))
    for i in range(mid, 0, -1):
        row[i - 1] = row[i] * i / (k - i + 1)
    for i in range(mid, k):
        row[i + 1] = row[i] * (k - i) / (i + 1)
    return row


def expected_max_tree_float(
    n: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
    force: bool = False,
) -> tuple[float, tuple[float, ...]]:
    """Floating-point variant of expected_max_tree.

    Returns (expectation, cdf values for x = 1..2**n+1).  Requires an
    explicit override beyond the exact-mode round limit; precision caveat:
    probabilities below roughly 1e-300 round to zero.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n > limits.max_exact_rounds and not force:
        raise ResourceLimitError(
            f"n = {n} exceeds the configured limit {limits.max_exact_rounds}; "
            "pass force=True (CLI: --force) to run float mode anyway"
        )
    pmf = [None] * ((1 << n) + 1)

    def pmf_row(k):
        if pmf[k] is None:
            pmf[k] = _binom_pmf_row(k)
        return pmf[k]

    def base(m, x):
        if m == 0:
            return 1.0
        if x <= m:
            return 0.0
        if x > 2 * m:
            return 1.0
        row = pmf_row(2 * m)
        return row[m] + 2.0 * sum(row[i] for i in range(m + 1, x))

    def one_x(x):
        mmax = 1 << (n - 1)
        prev = [base(m, x) for m in range(mmax + 1)]
        for level in range(2, n + 1):
            mmax = 1 << (n - level)
            cur = [0.0] * (mmax + 1)
            for m in range(min(mmax, x - 1) + 1):
                if x > (m << level):
                    cur[m] = 1.0
                    continue
                row = pmf_row(2 * m)
                hi = min(2 * m, x - 1)
                lo = 2 * m - hi
                acc = sum(
                    map(mul, map(mul, row[lo:m], prev[lo:m]), prev[2 * m - lo : m : -1])
                )
                cur[m] = 2.0 * acc + row[m] * prev[m] * prev[m]
            prev = cur
        return prev[1]

    top = 1 << n
    cdf = tuple(one_x(x) for x in range(1, top + 2))
    expected = float(top) - sum(cdf[:top])
    return expected, cdf


# -- brute force and Monte Carlo ------------------------------------------------


def _full_walks(g: LabeledDigraph, start: int, n: int, limits: Limits):
    g.check_vertex(start)
    if n < 1:
        raise ValueError("need n >= 1 rounds")
    if count_walks(g, start, n + 1) > limits.max_walks:
        raise ResourceLimitError(
            f"more than {limits.max_walks} walks of {n + 1} vertices"
        )
    return [w for w in walks_from(g, start, n + 1) if len(w) == n + 1]


def _max_occurrence(walks, labeling_bits: int) -> int:
    counts: dict[int, int] = {}
    best = 0
    get = counts.get
    for w in walks:
        key = 0
        for v in w:
            key = (key << 1) | ((labeling_bits >> v) & 1)
        c = get(key, 0) + 1
        counts[key] = c
        if c > best:
            best = c
    return best


def brute_force_expected_max(
    g: LabeledDigraph,
    start: int,
    n: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> Fraction:
    """Exact expectation of the maximum occurrence count by enumerating
    every binary labeling of the graph (labels of `g` are ignored).

    Works for any structure; the cost is 2**V labelings times the number
    of walks, so V is capped by limits.max_brute_vertices.
    """
    nv = g.vertex_count
    if nv > limits.max_brute_vertices:
        raise ResourceLimitError(
            f"{nv} vertices exceed the brute-force limit "
            f"{limits.max_brute_vertices} (2^{nv} labelings)"
        )
    walks = _full_walks(g, start, n, limits)
    total = 0
    for lab in range(1 << nv):
        total += _max_occurrence(walks, lab)
    return Fraction(total, 1 << nv)


@dataclass(frozen=True)
class DistanceFraudReport:
    """Success probability of the optimal early-reply distance fraud."""

    method: str
    rounds: int
    expected_max: Fraction
    success_probability: Fraction
    samples: int | None = None
    seed: int | None = None
    std_error: float | None = None

    def to_json_dict(self) -> dict:
        def frac(f: Fraction) -> dict:
            entry = {
                "numerator": f.numerator,
                "denominator": f.denominator,
                "decimal": float(f),
            }
            if f.denominator & (f.denominator - 1) == 0:
                entry["log2_denominator"] = f.denominator.bit_length() - 1
            return entry

        out = {
            "method": self.method,
            "rounds": self.rounds,
            "expected_max": frac(self.expected_max),
            "success_probability": frac(self.success_probability),
        }
        if self.samples is not None:
            out["samples"] = self.samples
            out["seed"] = self.seed
            out["std_error"] = self.std_error
        return out


def distance_fraud_probability(
    expected_max: Fraction,
    rounds: int,
    method: str,
    *,
    samples: int | None = None,
    seed: int | None = None,
    std_error: float | None = None,
) -> DistanceFraudReport:
    """Wrap an expected maximum into a success-probability report."""
    success = Fraction(expected_max, 1 << rounds)
    if not Fraction(1, 1 << rounds) <= success <= 1:
        raise MfskitError(
            f"success probability {success} outside [2^-{rounds}, 1]; "
            "inconsistent expected maximum"
        )
    return DistanceFraudReport(
        method=method,
        rounds=rounds,
        expected_max=expected_max,
        success_probability=success,
        samples=samples,
        seed=seed,
        std_error=std_error,
    )


def monte_carlo_expected_max(
    g: LabeledDigraph,
    start: int,
    n: int,
    samples: int,
    seed: int,
    *,
    limits: Limits = DEFAULT_LIMITS,
) -> DistanceFraudReport:
    """Estimate the expected maximum occurrence count from uniformly
    sampled labelings; deterministic for a fixed seed."""
    if samples < 1:
        raise ValueError("need samples >= 1")
    walks = _full_walks(g, start, n, limits)
    nv = g.vertex_count
    rng = random.Random(seed)
    total = 0
    total_sq = 0
    for _ in range(samples):
        m = _max_occurrence(walks, rng.getrandbits(nv))
        total += m
        total_sq += m * m
    mean = Fraction(total, samples)
    if samples > 1:
        var = (Fraction(total_sq, samples) - mean * mean) * samples / (samples - 1)
        std_error = sqrt(float(var) / samples) / (1 << n)
    else:
        std_error = float("nan")
    return distance_fraud_probability(
        mean, n, "monte-carlo", samples=samples, seed=seed, std_error=std_error
    )
