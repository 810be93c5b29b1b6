"""Sieve-based and factorization-based evaluation of arithmetic functions.

Supported functions: the constant 1, the Mobius function mu, the squarefree
indicator mu^2, the von Mangoldt function Lambda, the Piltz divisor functions
tau_r, omega (number of distinct prime factors), 2^omega (number of unitary
divisors), and chi_2 (chi_2(m^2) = mu(m), zero off squares).

Tables are immutable after construction and all operations are pure, so
concurrent reads are safe.  A single segmented kernel driven by the primes up
to sqrt(hi) serves every function; isolated large arguments go through
`eval_point`, which factorizes by trial division with a Pollard rho fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd, isqrt

import numpy as np

from .errors import BudgetError, CoverageError

SEGMENT_SIZE = 1 << 20
DEFAULT_MAX_TAU_R = 8
DEFAULT_SIEVE_BUDGET = 1 << 27      # entries per table
DEFAULT_FACTOR_BUDGET = 10**12      # largest n eval_point will factorize

_TAGS = ("one", "mobius", "mobius_squared", "lambda", "tau", "omega",
         "two_pow_omega", "chi_two")


def sieve_budget() -> int:
    return int(os.environ.get("FLOORSUMS_SIEVE_BUDGET", DEFAULT_SIEVE_BUDGET))


def factor_budget() -> int:
    return int(os.environ.get("FLOORSUMS_FACTOR_BUDGET", DEFAULT_FACTOR_BUDGET))


def max_tau_r() -> int:
    return int(os.environ.get("FLOORSUMS_MAX_TAU_R", DEFAULT_MAX_TAU_R))


@dataclass(frozen=True)
class FunctionKind:
    """One of the supported arithmetic functions.

    `r` is only meaningful for the tau family; tau(1) is the constant 1
    function in all but name.
    """

    tag: str
    r: int = 0

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown function tag {self.tag!r}")
        if self.tag == "tau":
            if self.r < 1:
                raise ValueError("tau order r must be >= 1")
        elif self.r != 0:
            raise ValueError(f"{self.tag} takes no order parameter")

    @property
    def integer_valued(self) -> bool:
        return self.tag != "lambda"

    def __str__(self) -> str:
        return f"tau{self.r}" if self.tag == "tau" else self.tag


ONE = FunctionKind("one")
MOBIUS = FunctionKind("mobius")
MOBIUS_SQUARED = FunctionKind("mobius_squared")
LAMBDA = FunctionKind("lambda")
OMEGA = FunctionKind("omega")
TWO_POW_OMEGA = FunctionKind("two_pow_omega")
CHI_TWO = FunctionKind("chi_two")


def tau(r: int) -> FunctionKind:
    return FunctionKind("tau", r)


_KIND_ALIASES = {
    "one": ONE, "1": ONE, "unit": ONE,
    "mu": MOBIUS, "mobius": MOBIUS,
    "mu2": MOBIUS_SQUARED, "musq": MOBIUS_SQUARED,
    "mobius_squared": MOBIUS_SQUARED, "squarefree": MOBIUS_SQUARED,
    "lambda": LAMBDA, "von_mangoldt": LAMBDA,
    "omega": OMEGA,
    "2omega": TWO_POW_OMEGA, "two_pow_omega": TWO_POW_OMEGA, "2^omega": TWO_POW_OMEGA,
    "chi2": CHI_TWO, "chi_two": CHI_TWO,
}


def kind_from_name(name: str) -> FunctionKind:
    """Parse a function name as used on the command line (e.g. 'tau3', 'mu2')."""
    key = name.strip().lower()
    if key in _KIND_ALIASES:
        return _KIND_ALIASES[key]
    if key.startswith("tau"):
        rest = key[3:].lstrip(":")
        if rest == "":
            return tau(2)
        if rest.isdigit():
            return tau(int(rest))
    raise ValueError(f"unknown function name {name!r}")


@dataclass(frozen=True)
class SieveTable:
    """Values of one arithmetic function on the interval [lo, hi].

    `values[i]` holds f(lo + i); integer functions use an exact int64 array,
    Lambda a float64 array of log p values.  The array is marked read-only.
    """

    kind: FunctionKind
    lo: int
    hi: int
    values: np.ndarray

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def value(self, n: int):
        if not self.lo <= n <= self.hi:
            raise CoverageError(f"n={n} outside table range [{self.lo}, {self.hi}]")
        v = self.values[n - self.lo]
        return float(v) if self.kind.tag == "lambda" else int(v)

    def covers(self, lo: int, hi: int) -> bool:
        return self.lo <= lo and hi <= self.hi


@lru_cache(maxsize=32)
def primes_upto(n: int) -> np.ndarray:
    """All primes <= n, as an int64 array (classic Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(n) + 1):
        if mask[p]:
            mask[p * p:: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def _slice_of(q: int, lo: int, hi: int) -> slice | None:
    # indices (relative to lo) of multiples of q in [lo, hi]
    start = ((lo + q - 1) // q) * q
    if start > hi:
        return None
    return slice(start - lo, hi - lo + 1, q)


def _residual_cofactor(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """rem[i] = (lo+i) with every prime p in `primes` divided out completely."""
    rem = np.arange(lo, hi + 1, dtype=np.int64)
    for p in primes:
        p = int(p)
        q = p
        while q <= hi:
            sl = _slice_of(q, lo, hi)
            if sl is not None:
                rem[sl] //= p
            if q > hi // p:
                break
            q *= p
    return rem


def _segment_values(kind: FunctionKind, lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    tag = kind.tag
    if tag == "one":
        return np.ones(hi - lo + 1, dtype=np.int64)

    if tag == "mobius_squared":
        val = np.ones(hi - lo + 1, dtype=np.int64)
        for p in primes:
            sl = _slice_of(int(p) ** 2, lo, hi)
            if sl is not None:
                val[sl] = 0
        return val

    if tag == "chi_two":
        val = np.zeros(hi - lo + 1, dtype=np.int64)
        root = isqrt(hi)
        if root >= 1:
            mu = _segment_values(MOBIUS, 1, root, primes_upto(isqrt(root)))
            for m in range(isqrt(lo - 1) + 1, root + 1):
                sq = m * m
                if lo <= sq <= hi:
                    val[sq - lo] = mu[m - 1]
        return val

    if tag == "lambda":
        val = np.zeros(hi - lo + 1, dtype=np.float64)
        for p in primes:
            p = int(p)
            q = p
            while q <= hi:
                if q >= lo:
                    val[q - lo] = math.log(p)
                if q > hi // p:
                    break
                q *= p
        # primes larger than sqrt(hi) are exactly the n left untouched by division
        rem = _residual_cofactor(lo, hi, primes)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        large = (rem == n) & (n >= 2)
        val[large] = np.log(n[large].astype(np.float64))
        return val

    # remaining kinds share the prime-power telescoping plus a residual pass
    size = hi - lo + 1
    if tag == "mobius":
        val = np.ones(size, dtype=np.int64)
        for p in primes:
            p = int(p)
            sl = _slice_of(p, lo, hi)
            if sl is not None:
                np.negative(val[sl], out=val[sl])
            sl2 = _slice_of(p * p, lo, hi)
            if sl2 is not None:
                val[sl2] = 0
    elif tag == "omega":
        val = np.zeros(size, dtype=np.int64)
        for p in primes:
            sl = _slice_of(int(p), lo, hi)
            if sl is not None:
                val[sl] += 1
    elif tag == "two_pow_omega":
        val = np.ones(size, dtype=np.int64)
        for p in primes:
            sl = _slice_of(int(p), lo, hi)
            if sl is not None:
                val[sl] *= 2
    elif tag == "tau":
        r = kind.r
        val = np.ones(size, dtype=np.int64)
        for p in primes:
            p = int(p)
            q, a = p, 1
            while q <= hi:
                sl = _slice_of(q, lo, hi)
                if sl is not None:
                    # exact: C(a+r-2, r-1) * (a+r-1) = a * C(a+r-1, r-1)
                    val[sl] *= a + r - 1
                    val[sl] //= a
                if q > hi // p:
                    break
                q *= p
                a += 1
    else:  # pragma: no cover
        raise ValueError(f"unhandled tag {tag}")

    rem = _residual_cofactor(lo, hi, primes)
    large = rem > 1
    if tag == "mobius":
        val[large] *= -1
    elif tag == "omega":
        val[large] += 1
    elif tag == "two_pow_omega":
        val[large] *= 2
    elif tag == "tau":
        val[large] *= kind.r
    return val


def iter_segment_values(kind: FunctionKind, lo: int, hi: int):
    """Yield (seg_lo, values) chunks covering [lo, hi] without holding it all.

    Streaming counterpart of build_sieve for scans over ranges larger than
    the table budget (e.g. main-term constants at cutoff 1e8).
    """
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    if kind.tag == "tau" and kind.r > max_tau_r():
        raise BudgetError(f"tau order {kind.r} exceeds configured maximum {max_tau_r()}")
    primes = primes_upto(isqrt(hi))
    seg_lo = lo
    while seg_lo <= hi:
        seg_hi = min(seg_lo + SEGMENT_SIZE - 1, hi)
        yield seg_lo, _segment_values(kind, seg_lo, seg_hi, primes)
        seg_lo = seg_hi + 1


def build_sieve(kind: FunctionKind, lo: int, hi: int) -> SieveTable:
    """Tabulate `kind` on [lo, hi] by segmented sieving.

    Raises BudgetError when the table would exceed the configured entry
    budget (override with FLOORSUMS_SIEVE_BUDGET) or when a tau order above
    the configured maximum is requested.
    """
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    if hi - lo + 1 > sieve_budget():
        raise BudgetError(f"table of {hi - lo + 1} entries exceeds budget {sieve_budget()}")
    dtype = np.float64 if kind.tag == "lambda" else np.int64
    out = np.empty(hi - lo + 1, dtype=dtype)
    for seg_lo, vals in iter_segment_values(kind, lo, hi):
        out[seg_lo - lo: seg_lo - lo + len(vals)] = vals
    out.flags.writeable = False
    return SieveTable(kind=kind, lo=lo, hi=hi, values=out)


# ---------------------------------------------------------------------------
# point evaluation via factorization

_SMALL_PRIME_LIMIT = 10**4


def _is_probable_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 3.3e24
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d
    raise RuntimeError(f"rho failed to split {n}")  # practically unreachable


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: exponent} of n within the factor budget."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > factor_budget():
        raise BudgetError(f"n={n} exceeds factorization budget {factor_budget()}")
    out: dict[int, int] = {}
    for p in primes_upto(_SMALL_PRIME_LIMIT):
        p = int(p)
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return out


def value_from_factorization(kind: FunctionKind, factors: dict[int, int]):
    tag = kind.tag
    exps = list(factors.values())
    if tag == "one":
        return 1
    if tag == "mobius":
        return 0 if any(a >= 2 for a in exps) else (-1) ** len(exps)
    if tag == "mobius_squared":
        return 0 if any(a >= 2 for a in exps) else 1
    if tag == "lambda":
        return math.log(next(iter(factors))) if len(factors) == 1 else 0.0
    if tag == "tau":
        r = kind.r
        out = 1
        for a in exps:
            out *= comb(a + r - 1, r - 1)
        return out
    if tag == "omega":
        return len(exps)
    if tag == "two_pow_omega":
        return 2 ** len(exps)
    if tag == "chi_two":
        if any(a % 2 for a in exps):
            return 0
        if any(a >= 4 for a in exps):
            return 0
        return (-1) ** len(exps)
    raise ValueError(f"unhandled tag {tag}")  # pragma: no cover


def eval_point(kind: FunctionKind, n: int):
    """f(n) for an isolated argument; agrees with build_sieve entrywise."""
    if kind.tag == "tau" and kind.r > max_tau_r():
        raise BudgetError(f"tau order {kind.r} exceeds configured maximum {max_tau_r()}")
    return value_from_factorization(kind, factorize(n))


# ---------------------------------------------------------------------------
# Dirichlet convolution on tables

def dirichlet_convolve(f: SieveTable, g: SieveTable, limit: int) -> SieveTable:
    """Pointwise Dirichlet product (f * g)(n) = sum_{d | n} f(d) g(n/d) on [1, limit]."""
    if f.lo != 1 or g.lo != 1:
        raise CoverageError("convolution inputs must start at 1")
    if f.hi < limit or g.hi < limit:
        raise CoverageError(f"inputs must cover [1, {limit}]")
    real = f.kind.tag == "lambda" or g.kind.tag == "lambda"
    dtype = np.float64 if real else np.int64
    out = np.zeros(limit, dtype=dtype)
    fv = f.values[:limit]
    gv = g.values[:limit]
    for d in range(1, limit + 1):
        c = fv[d - 1]
        if c == 0:
            continue
        q = limit // d
        out[d - 1:: d] += c * gv[:q]
    out.flags.writeable = False
    kind = FunctionKind("lambda") if real else ONE  # carrier tag for derived tables
    return SieveTable(kind=kind, lo=1, hi=limit, values=out)
