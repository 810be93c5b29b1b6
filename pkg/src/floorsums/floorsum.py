"""Exact evaluation of S_f(x) = sum_{n<=x} f(floor(x/n)) with empirical
error scans.

Two evaluators: a naive O(x) reference and a sqrt-split evaluator that sums
f(floor(x/n)) directly for n up to a split point N and then groups the
remaining n by their common quotient value d with exact multiplicities
floor(x/d) - max(N, floor(x/(d+1))).  Both are exact; the split only affects
speed, so they cross-check each other.

The main-term constant C_f = sum f(n)/(n(n+1)) is accumulated in segments
with an explicit per-function tail bound.  Integer-valued functions are
summed in exact integers; Lambda sums go through math.fsum.  Everything is
pure: grid scans parallelize trivially over x, and a shared immutable sieve
may be read from any number of workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .arith import (FunctionKind, SieveTable, build_sieve, eval_point,
                    iter_segment_values, primes_upto)
from .errors import BudgetError, WindowError

NAIVE_BUDGET = 10**7
FAST_BUDGET = 10**12
RESIDUAL_FLOOR = 1e-9


@dataclass(frozen=True)
class FloorSumReport:
    """S_f(x) with its main-term constant and residual E(x) = S - x C_f."""

    kind: FunctionKind
    x: int
    sum: int | float
    constant: float
    constant_tail_bound: float
    residual: float


@dataclass(frozen=True)
class FitReport:
    """Log-log regression of residual magnitudes over a grid of x values."""

    grid: tuple[int, ...]
    residuals: tuple[float, ...]
    slope: float
    intercept: float


def _check_table(kind: FunctionKind, table: SieveTable | None) -> None:
    if table is not None and table.kind != kind:
        raise ValueError(f"table holds {table.kind}, expected {kind}")


def _lookup(kind: FunctionKind, n: int, table: SieveTable | None):
    if table is not None and table.covers(n, n):
        return table.value(n)
    return eval_point(kind, n)


def floor_sum_naive(kind: FunctionKind, x: int, table: SieveTable | None = None):
    """Direct O(x) evaluation; exact (Lambda via compensated summation)."""
    if not 1 <= x <= NAIVE_BUDGET:
        raise BudgetError(f"naive evaluation limited to x <= {NAIVE_BUDGET}")
    _check_table(kind, table)
    if table is None or not table.covers(1, x):
        table = build_sieve(kind, 1, x)
    q = x // np.arange(1, x + 1, dtype=np.int64)
    vals = table.values[q - table.lo]
    if kind.tag == "lambda":
        return math.fsum(vals)
    return int(np.sum(vals))


def floor_sum_fast(kind: FunctionKind, x: int, split: int | None = None,
                   table: SieveTable | None = None):
    """Sqrt-split evaluation, exactly equal to floor_sum_naive.

    `split` overrides the default N = isqrt(x); the result does not depend
    on it.  A covering `table` short-circuits point evaluations.
    """
    if not 1 <= x <= FAST_BUDGET:
        raise BudgetError(f"fast evaluation limited to x <= {FAST_BUDGET}")
    _check_table(kind, table)
    N = isqrt(x) if split is None else split
    if not 1 <= N <= x:
        raise ValueError(f"split must lie in [1, x], got {N}")

    head_vals = [_lookup(kind, x // n, table) for n in range(1, N + 1)]

    d0 = x // (N + 1)
    if d0 >= 1:
        if table is not None and table.covers(1, d0):
            small = table.values[: d0] if table.lo == 1 else None
        else:
            small = None
        if small is None:
            small = build_sieve(kind, 1, d0).values
        d = np.arange(1, d0 + 1, dtype=np.int64)
        counts = x // d - np.maximum(N, x // (d + 1))
        np.maximum(counts, 0, out=counts)
    else:
        small = np.zeros(0)
        counts = np.zeros(0, dtype=np.int64)

    if kind.tag == "lambda":
        return math.fsum(head_vals + [math.fsum(small * counts)])
    return sum(head_vals) + int(np.sum(small * counts))


# ---------------------------------------------------------------------------
# main-term constant and tail envelopes

_ENVELOPE_EPS = 0.3


def _power_envelope(local) -> float:
    """B = prod_p max(1, sup_a local(p, a)) over the finitely many p where
    the local factor exceeds 1 (local must be decreasing in p)."""
    B = 1.0
    for p in map(int, primes_upto(10**4)):
        best = 0.0
        for a in range(1, 2001):
            v = local(p, a)
            if v > best:
                best = v
            elif v < 1e-9 * max(best, 1.0):
                break
        if best <= 1.0:
            break
        B *= best
    return B * (1 + 1e-9)


def _tail_bound(kind: FunctionKind, cutoff: int) -> float:
    """Upper bound on sum_{n > cutoff} |f(n)|/(n(n+1)).

    Bounded functions use the exact telescoped tail; log-size functions use
    the integral bound; tau_r and 2^omega use |f(n)| <= B n^eps with eps=0.3
    and B the exact product of local suprema over prime powers.
    """
    c = cutoff
    tag = kind.tag
    if tag in ("one", "mobius", "mobius_squared", "chi_two") or (tag == "tau" and kind.r == 1):
        return 1.0 / (c + 1)
    if tag == "lambda":
        return (math.log(c) + 1.0) / c
    if tag == "omega":
        return (math.log(c) + 1.0) / (c * math.log(2))
    eps = _ENVELOPE_EPS
    if tag == "two_pow_omega":
        B = _power_envelope(lambda p, a: 2.0 / p ** (eps * a))
    elif tag == "tau":
        r = kind.r
        B = _power_envelope(lambda p, a: comb(a + r - 1, r - 1) / p ** (eps * a))
    else:  # pragma: no cover
        raise ValueError(f"unhandled tag {tag}")
    return B * c ** (eps - 1.0) / (1.0 - eps)


def main_term_constant(kind: FunctionKind, cutoff: int) -> tuple[float, float]:
    """(sum_{n<=cutoff} f(n)/(n(n+1)), tail bound on the remainder)."""
    if cutoff < 10**3:
        raise ValueError("cutoff must be >= 1000")
    parts = []
    for seg_lo, vals in iter_segment_values(kind, 1, cutoff):
        n = np.arange(seg_lo, seg_lo + len(vals), dtype=np.float64)
        parts.append(float(np.sum(vals / (n * (n + 1)))))
    return math.fsum(parts), _tail_bound(kind, cutoff)


# ---------------------------------------------------------------------------
# psi-correction bookkeeping

def psi_of_quotient(x: int, d: int) -> Fraction:
    """psi(x/d) as an exact rational for integer x, d."""
    return Fraction(x % d, d) - Fraction(1, 2)


def psi_correction_sum(kind: FunctionKind, x: int, N: int) -> float:
    """sum_{N < d <= x/N} f(d) (psi(x/(d+1)) - psi(x/d)), psi exact.

    The window x^(1/3) <= N < x^(1/2) is enforced; an empty d-range gives 0.
    """
    if not (N**3 >= x and N * N < x):
        raise WindowError(f"need x^(1/3) <= N < x^(1/2), got x={x}, N={N}")
    hi = x // N
    if hi < N + 1:
        return 0.0
    tab = build_sieve(kind, N + 1, hi)
    terms = []
    for d in range(N + 1, hi + 1):
        fd = tab.value(d)
        if fd == 0:
            continue
        terms.append(fd * ((x % (d + 1)) / (d + 1) - (x % d) / d))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# empirical error scans

def error_scan(kind: FunctionKind, x_grid, cutoff: int = 10**8,
               constant: float | None = None) -> FitReport:
    """Residuals E(x) = S_f(x) - x C_f over a grid, with a log-log OLS slope.

    |E| is floored at 1e-9 before the log so exact cancellations do not
    produce -inf.  `constant` overrides the cutoff-based C_f when the caller
    has already computed it.
    """
    grid = [int(v) for v in x_grid]
    if len(grid) < 2:
        raise ValueError("grid must contain at least 2 points for a fit")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if constant is None:
        constant, _ = main_term_constant(kind, cutoff)
    residuals = []
    for x in grid:
        s = floor_sum_fast(kind, x)
        residuals.append(abs(float(s) - x * constant))
    logs = np.log([max(r, RESIDUAL_FLOOR) for r in residuals])
    slope, intercept = np.polyfit(np.log(grid), logs, 1)
    return FitReport(grid=tuple(grid), residuals=tuple(residuals),
                     slope=float(slope), intercept=float(intercept))


def summarize(kind: FunctionKind, x: int, method: str = "fast",
              cutoff: int = 10**7) -> FloorSumReport:
    """One-shot report: exact sum, main-term constant, residual."""
    if method == "fast":
        s = floor_sum_fast(kind, x)
    elif method == "naive":
        s = floor_sum_naive(kind, x)
    else:
        raise ValueError(f"unknown method {method!r}")
    c, tail = main_term_constant(kind, cutoff)
    return FloorSumReport(kind=kind, x=x, sum=s, constant=c,
                          constant_tail_bound=tail,
                          residual=float(s) - x * c)
