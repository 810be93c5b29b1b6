"""Exact numeric verification of Vaughan decompositions and the Dirichlet
hyperbola principle, with and without exponential weights.

Each verifier evaluates both sides of an identity independently and returns
(lhs, rhs, |lhs - rhs|); the sides agree to rounding (relative 1e-9) for any
admissible parameters and any phase.  Range conditions with real endpoints
(R/n < m <= R1/n and friends) are evaluated by exact integer comparisons,
never by floating-point division.

Note on the Vaughan forms: the third sum of the Lambda identity and of the
mu identity both restrict the inner variable to m > max(U, R/n).  For U >= 2
the extra guard is vacuous (b_m = [m=1] below the cutoff) but it is what
makes the identity exact all the way down to U = 1.  The mu identity carries
no logarithmic weight on its a_n sums.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional

import numpy as np

from .arith import (LAMBDA, MOBIUS, OMEGA, SieveTable, build_sieve,
                    dirichlet_convolve)
from .errors import CoverageError, WindowError

TWO_PI = 2.0 * math.pi


def _frac_of_ratio(num, den: int) -> float:
    """(num/den) mod 1 with exact reduction; num integral or float, den int > 0."""
    if isinstance(num, int):
        return (num % den) / den
    fr = Fraction(num)  # floats convert exactly
    d = fr.denominator * den
    return float(Fraction(fr.numerator % d, d))


@dataclass(frozen=True)
class PhaseFunction:
    """A phase t -> F(t) used inside e(F(t)) on integer arguments t >= 1.

    Built-in forms keep their parameters and reduce F(t) mod 1 exactly
    (integer arithmetic, or exact rational arithmetic for float parameters).
    Opaque callables must be pure and deterministic; their values are reduced
    in floating point.
    """

    form: str                       # reciprocal | power_reciprocal | shifted_reciprocal | opaque
    z: int | float = 0
    r: int = 1
    h: int | float = 0
    x: int | float = 0
    a: int = 0
    fn: Optional[Callable[[int], float]] = None

    @classmethod
    def reciprocal(cls, z) -> "PhaseFunction":
        if z < 0:
            raise ValueError("z must be >= 0")
        return cls(form="reciprocal", z=z)

    @classmethod
    def power_reciprocal(cls, z, r: int) -> "PhaseFunction":
        if z < 0 or r < 1:
            raise ValueError("need z >= 0 and r >= 1")
        return cls(form="power_reciprocal", z=z, r=r)

    @classmethod
    def shifted_reciprocal(cls, h, x, a: int) -> "PhaseFunction":
        if h < 0 or x < 0 or a not in (0, 1):
            raise ValueError("need h, x >= 0 and a in {0, 1}")
        return cls(form="shifted_reciprocal", h=h, x=x, a=a)

    @classmethod
    def opaque(cls, fn: Callable[[int], float]) -> "PhaseFunction":
        return cls(form="opaque", fn=fn)

    @classmethod
    def zero(cls) -> "PhaseFunction":
        return cls.reciprocal(0)

    def raw(self, t: int) -> float:
        if self.form == "reciprocal":
            return self.z / t
        if self.form == "power_reciprocal":
            return self.z / t**self.r
        if self.form == "shifted_reciprocal":
            return self.h * self.x / (t + self.a)
        return self.fn(t)

    def frac(self, t: int) -> float:
        """F(t) mod 1 in [0, 1)."""
        if self.form == "reciprocal":
            return _frac_of_ratio(self.z, t)
        if self.form == "power_reciprocal":
            return _frac_of_ratio(self.z, t**self.r)
        if self.form == "shifted_reciprocal":
            hx = self.h * self.x
            if isinstance(self.h, int) and isinstance(self.x, int):
                return _frac_of_ratio(hx, t + self.a)
            return _frac_of_ratio(float(hx), t + self.a)
        return self.fn(t) % 1.0

    def unit(self, t: int) -> complex:
        """e(F(t)) = exp(2 pi i F(t))."""
        return cmath.exp(1j * TWO_PI * self.frac(t))

    def unit_array(self, t: np.ndarray) -> np.ndarray:
        """Vectorized e(F(t)) for integer arrays (exact reduction for
        integer-parameter forms)."""
        t = np.asarray(t, dtype=np.int64)
        if self.form == "reciprocal" and isinstance(self.z, int) and self.z < 2**62:
            ph = np.mod(self.z, t) / t
        elif (self.form == "power_reciprocal" and isinstance(self.z, int)
              and self.z < 2**62 and t[-1] ** self.r < 2**62):
            tr = t**self.r
            ph = np.mod(self.z, tr) / tr
        elif (self.form == "shifted_reciprocal" and isinstance(self.h, int)
              and isinstance(self.x, int) and self.h * self.x < 2**62):
            ph = np.mod(self.h * self.x, t + self.a) / (t + self.a)
        else:
            ph = np.array([self.frac(int(v)) for v in t])
        return np.exp(1j * TWO_PI * ph)


# ---------------------------------------------------------------------------
# Vaughan coefficient tables

@dataclass(frozen=True)
class VaughanCoefficients:
    """Cutoff-U convolution coefficients used by the Vaughan identities.

    a_lambda = (mu 1_U * Lambda 1_U), supported on n <= U^2 (float, carries
    log p); b = (mu 1_U * 1); a_mu = (mu 1_U * mu 1_U); b_plus = (mu 1_U^+ * 1).
    Arrays are indexed by n (entry 0 unused).
    """

    U: int
    limit: int
    a_lambda: np.ndarray
    b: np.ndarray
    a_mu: np.ndarray
    b_plus: np.ndarray

    def alpha_lambda(self, R: int) -> np.ndarray:
        """a_lambda normalized by log R; |alpha| <= 1 for R >= U^2."""
        return self.a_lambda / math.log(R)

    def beta(self) -> np.ndarray:
        """b_m normalized by 2^omega(m); |beta| <= 1."""
        om = build_sieve(OMEGA, 1, self.limit).values
        out = self.b[1:] / np.exp2(om)
        return np.concatenate(([0.0], out))

    def alpha_mu(self) -> np.ndarray:
        """a_mu normalized by 2^omega(n); |alpha| <= 1."""
        lim = len(self.a_mu) - 1
        om = build_sieve(OMEGA, 1, lim).values
        out = self.a_mu[1:] / np.exp2(om)
        return np.concatenate(([0.0], out))


def vaughan_coeffs(U: int, limit: int) -> VaughanCoefficients:
    """Tabulate the four coefficient sequences up to `limit` (>= U^2)."""
    if U < 1:
        raise ValueError("U must be >= 1")
    if limit < U * U:
        raise CoverageError(f"limit must be >= U^2 = {U*U}")
    mu = build_sieve(MOBIUS, 1, limit).values
    lam = build_sieve(LAMBDA, 1, max(U, 1)).values
    a_lambda = np.zeros(U * U + 1, dtype=np.float64)
    a_mu = np.zeros(U * U + 1, dtype=np.int64)
    for d in range(1, U + 1):
        md = int(mu[d - 1])
        if md == 0:
            continue
        for e in range(1, U + 1):
            if lam[e - 1] != 0.0:
                a_lambda[d * e] += md * lam[e - 1]
            me = int(mu[e - 1])
            if me != 0:
                a_mu[d * e] += md * me
    b = np.zeros(limit + 1, dtype=np.int64)
    b_plus = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        md = int(mu[d - 1])
        if md == 0:
            continue
        if d <= U:
            b[d:: d] += md
        else:
            b_plus[d:: d] += md
    return VaughanCoefficients(U=U, limit=limit, a_lambda=a_lambda, b=b,
                               a_mu=a_mu, b_plus=b_plus)


# ---------------------------------------------------------------------------
# identity verifiers

def _check_dyadic(R: int, R1: int, U: int) -> None:
    if not (1 < R < R1 <= 2 * R):
        raise WindowError(f"need 1 < R < R1 <= 2R, got R={R}, R1={R1}")
    if not (1 <= U and U * U <= R):
        raise WindowError(f"need 1 <= U <= sqrt(R), got U={U}, R={R}")


def vaughan_lambda_sides(R: int, R1: int, U: int,
                         phase: PhaseFunction) -> tuple[complex, complex, float]:
    """Both sides of the Vaughan decomposition of sum Lambda(n) e(F(n))."""
    _check_dyadic(R, R1, U)
    lam = build_sieve(LAMBDA, 1, R1).values
    mu = build_sieve(MOBIUS, 1, max(U, 1)).values
    co = vaughan_coeffs(U, max(R1, U * U))
    e = phase.unit

    lhs = sum(lam[n - 1] * e(n) for n in range(R + 1, R1 + 1) if lam[n - 1] != 0.0)

    t1 = 0j
    for n in range(1, U + 1):
        mn = int(mu[n - 1])
        if mn == 0:
            continue
        t1 += mn * sum(math.log(m) * e(m * n)
                       for m in range(R // n + 1, R1 // n + 1))
    t2 = 0j
    for n in range(1, U * U + 1):
        an = co.a_lambda[n]
        if an == 0.0:
            continue
        t2 += an * sum(e(m * n) for m in range(R // n + 1, R1 // n + 1))
    t3 = 0j
    for n in range(U + 1, R1 // U + 1):
        ln = lam[n - 1]
        if ln == 0.0:
            continue
        t3 += ln * sum(int(co.b[m]) * e(m * n)
                       for m in range(max(U, R // n) + 1, R1 // n + 1)
                       if co.b[m] != 0)
    rhs = t1 - t2 - t3
    return lhs, rhs, abs(lhs - rhs)


def vaughan_mobius_sides(R: int, R1: int, U: int,
                         phase: PhaseFunction) -> tuple[complex, complex, float]:
    """Both sides of the Vaughan decomposition of sum mu(n) e(F(n))."""
    _check_dyadic(R, R1, U)
    mu = build_sieve(MOBIUS, 1, R1).values
    co = vaughan_coeffs(U, max(R1, U * U))
    e = phase.unit

    lhs = sum(int(mu[n - 1]) * e(n) for n in range(R + 1, R1 + 1) if mu[n - 1] != 0)

    s12 = 0j
    for n in range(1, U * U + 1):
        an = int(co.a_mu[n])
        if an == 0:
            continue
        s12 += an * sum(e(m * n) for m in range(R // n + 1, R1 // n + 1))
    s3 = 0j
    for n in range(U + 1, R1 // U + 1):
        bn = int(co.b_plus[n])
        if bn == 0:
            continue
        s3 += bn * sum(int(mu[m - 1]) * e(m * n)
                       for m in range(max(U, R // n) + 1, R1 // n + 1)
                       if mu[m - 1] != 0)
    rhs = -s12 + s3
    return lhs, rhs, abs(lhs - rhs)


def _h_or_one(h_values):
    if h_values is None:
        return lambda n: 1
    return h_values


def hyperbola_sides(f: SieveTable, g: SieveTable, h_values, x: int,
                    U: int) -> tuple[complex, complex, float]:
    """Both sides of the hyperbola split of sum_{n<=x} (f*g)(n) h(n).

    `h_values` is a callable on [1, x] (None means h = 1, keeping integer
    inputs exact end to end).
    """
    if not 1 <= U <= x:
        raise WindowError(f"need 1 <= U <= x, got U={U}, x={x}")
    if not (f.covers(1, x) and g.covers(1, x)):
        raise CoverageError(f"tables must cover [1, {x}]")
    h = _h_or_one(h_values)
    conv = dirichlet_convolve(f, g, x)
    lhs = sum(conv.value(n) * h(n) for n in range(1, x + 1))

    fv, gv = f.value, g.value
    s1 = sum(fv(n) * sum(gv(m) * h(m * n) for m in range(1, x // n + 1))
             for n in range(1, U + 1))
    s2 = sum(gv(n) * sum(fv(m) * h(m * n) for m in range(1, x // n + 1))
             for n in range(1, x // U + 1))
    s3 = sum(fv(n) * sum(gv(m) * h(m * n) for m in range(1, x // U + 1))
             for n in range(1, U + 1))
    rhs = s1 + s2 - s3
    return lhs, rhs, abs(lhs - rhs)


def _range_sum(g, e, n: int, m_lo: int, m_hi: int) -> complex:
    return sum(g(m) * e(m * n) for m in range(m_lo + 1, m_hi + 1))


def hyperbola_exp_sides(f: SieveTable, g: SieveTable, phase: PhaseFunction,
                        R: int, R1: int, U: int) -> tuple[complex, complex, float]:
    """Both sides of the dyadic exponential form of the hyperbola split.

    Identity over pairs mn in (R, R1]: the f-smooth range n <= U R1/R, the
    g-smooth range n <= R/U, minus the overlap correction.
    """
    if not (R < R1 and 1 <= U <= R):
        raise WindowError(f"need R < R1 and 1 <= U <= R, got R={R}, R1={R1}, U={U}")
    hi_f = (U * R1) // R
    if not (f.covers(1, R1) and g.covers(1, R1)):
        raise CoverageError("tables too short for the requested ranges")
    e = phase.unit
    fv, gv = f.value, g.value

    conv = dirichlet_convolve(f, g, R1)
    lhs = sum(conv.value(n) * e(n) for n in range(R + 1, R1 + 1))

    t1 = sum(fv(n) * _range_sum(gv, e, n, R // n, R1 // n)
             for n in range(1, hi_f + 1))
    t2 = sum(gv(n) * _range_sum(fv, e, n, R // n, R1 // n)
             for n in range(1, R // U + 1))
    t3 = sum(fv(n) * _range_sum(gv, e, n, R // n, R // U)
             for n in range(U + 1, hi_f + 1))
    rhs = t1 + t2 - t3
    return lhs, rhs, abs(lhs - rhs)


def hyperbola_exp_split(f: SieveTable, g: SieveTable, phase: PhaseFunction,
                        R: int, R1: int, U: int) -> complex:
    """The intermediate four-sum S1 + S2 + S3 - S4 of the same identity;
    equals the lhs independently of the three-term form."""
    if not (R < R1 and 1 <= U <= R):
        raise WindowError(f"need R < R1 and 1 <= U <= R, got R={R}, R1={R1}, U={U}")
    e = phase.unit
    fv, gv = f.value, g.value
    s1 = sum(fv(n) * _range_sum(gv, e, n, R // n, R1 // n)
             for n in range(1, U + 1))
    s2 = sum(gv(n) * _range_sum(fv, e, n, R // n, R1 // n)
             for n in range(1, R // U + 1))
    s3 = sum(gv(n) * _range_sum(fv, e, n, 0, R1 // n)
             for n in range(R // U + 1, R1 // U + 1))
    s4 = sum(fv(n) * _range_sum(gv, e, n, R // U, R1 // U)
             for n in range(1, U + 1))
    return s1 + s2 + s3 - s4


# ---------------------------------------------------------------------------
# randomized verification suites (shared by the CLI and the test suite)

VERIFY_SUBJECTS = ("vaughan-lambda", "vaughan-mu", "hyperbola", "hyperbola-exp")

_PHASE_PARAM_MAX = 10**6


def random_phase(rng) -> PhaseFunction:
    """Draw a phase uniformly over the built-in forms, params in [1, 1e6]."""
    form = rng.choice(("reciprocal", "power_reciprocal", "shifted_reciprocal",
                       "opaque"))
    if form == "reciprocal":
        z = rng.randint(1, _PHASE_PARAM_MAX) if rng.random() < 0.5 \
            else rng.uniform(1, _PHASE_PARAM_MAX)
        return PhaseFunction.reciprocal(z)
    if form == "power_reciprocal":
        return PhaseFunction.power_reciprocal(rng.randint(1, _PHASE_PARAM_MAX),
                                              rng.randint(1, 3))
    if form == "shifted_reciprocal":
        return PhaseFunction.shifted_reciprocal(rng.randint(1, 100),
                                                rng.randint(1, _PHASE_PARAM_MAX // 100),
                                                rng.randint(0, 1))
    c1 = rng.uniform(1, 1000)
    c2 = rng.uniform(1, _PHASE_PARAM_MAX)
    return PhaseFunction.opaque(lambda t, c1=c1, c2=c2: c1 * math.sqrt(t) + c2 / t)


def _trial_rng(seed: int, trial: int):
    import random
    return random.Random((seed << 20) ^ trial)


def run_verification(subject: str, trials: int, seed: int) -> list[dict]:
    """Per-trial residual reports for one identity family.

    Instances draw R in [20, 500], admissible U, and phases from all forms;
    per-instance seeds derive from (seed, trial) so runs are reproducible
    and trials are independent.
    """
    from .arith import CHI_TWO, MOBIUS_SQUARED, ONE, TWO_POW_OMEGA, tau

    if subject not in VERIFY_SUBJECTS:
        raise ValueError(f"unknown subject {subject!r}; pick from {VERIFY_SUBJECTS}")
    kinds = (ONE, MOBIUS, MOBIUS_SQUARED, LAMBDA, tau(2), tau(3), OMEGA,
             TWO_POW_OMEGA, CHI_TWO)
    out = []
    for t in range(trials):
        rng = _trial_rng(seed, t)
        R = rng.randint(20, 500)
        R1 = rng.randint(R + 1, 2 * R)
        phase = random_phase(rng)
        if subject in ("vaughan-lambda", "vaughan-mu"):
            U = rng.randint(1, isqrt(R))
            fn = vaughan_lambda_sides if subject == "vaughan-lambda" else vaughan_mobius_sides
            lhs, rhs, res = fn(R, R1, U, phase)
            params = {"R": R, "R1": R1, "U": U}
        elif subject == "hyperbola":
            x = rng.randint(30, 400)
            U = rng.randint(1, x)
            f = build_sieve(rng.choice(kinds), 1, x)
            g = build_sieve(rng.choice(kinds), 1, x)
            lhs, rhs, res = hyperbola_sides(f, g, phase.unit, x, U)
            params = {"x": x, "U": U, "f": str(f.kind), "g": str(g.kind)}
        else:
            U = rng.randint(1, R)
            cover = 2 * R1 + 1
            f = build_sieve(rng.choice(kinds), 1, cover)
            g = build_sieve(rng.choice(kinds), 1, cover)
            lhs, rhs, res = hyperbola_exp_sides(f, g, phase, R, R1, U)
            params = {"R": R, "R1": R1, "U": U, "f": str(f.kind), "g": str(g.kind)}
        rel = res / (1 + abs(lhs))
        out.append({"trial": t, "residual": res, "relative": rel,
                    "phase": phase.form, **params})
    return out
