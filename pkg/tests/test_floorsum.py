"""Floor-quotient sum evaluators, constants, and the block rearrangement."""

import math
import random
from fractions import Fraction

import pytest

from floorsums import arith as A
from floorsums import floorsum as FS
from floorsums.errors import BudgetError, WindowError

SIX_KINDS = [A.LAMBDA, A.tau(2), A.tau(3), A.MOBIUS_SQUARED, A.TWO_POW_OMEGA,
             A.OMEGA]


def brute_floor_sum(kind, x):
    """Definition-level oracle: point evaluation term by term."""
    vals = [A.eval_point(kind, x // n) for n in range(1, x + 1)]
    return math.fsum(vals) if kind.tag == "lambda" else sum(vals)


def test_naive_examples():
    assert FS.floor_sum_naive(A.ONE, 10) == 10 == brute_floor_sum(A.ONE, 10)
    assert FS.floor_sum_naive(A.tau(2), 6) == 11 == brute_floor_sum(A.tau(2), 6)
    # x = 1: the single term f(1)
    for kind in SIX_KINDS:
        assert FS.floor_sum_naive(kind, 1) == A.eval_point(kind, 1)


def test_naive_matches_brute_oracle():
    rng = random.Random(5)
    for _ in range(25):
        kind = rng.choice(SIX_KINDS)
        x = rng.randint(1, 400)
        got = FS.floor_sum_naive(kind, x)
        ref = brute_floor_sum(kind, x)
        if kind.tag == "lambda":
            assert got == pytest.approx(ref, rel=1e-12)
        else:
            assert got == ref


def test_fast_examples():
    assert FS.floor_sum_fast(A.ONE, 10) == 10
    assert FS.floor_sum_fast(A.tau(2), 1) == 1
    v = FS.floor_sum_fast(A.MOBIUS_SQUARED, 10**4)
    assert v == FS.floor_sum_naive(A.MOBIUS_SQUARED, 10**4)


def test_fast_equals_naive_all_kinds():
    rng = random.Random(11)
    for kind in SIX_KINDS + [A.ONE, A.MOBIUS, A.CHI_TWO]:
        for _ in range(10):
            x = rng.randint(1, 5000)
            a = FS.floor_sum_naive(kind, x)
            b = FS.floor_sum_fast(kind, x)
            if kind.tag == "lambda":
                assert abs(a - b) <= 1e-9 * (1 + abs(a))
            else:
                assert a == b, (kind, x)


def test_block_rearrangement_exact_100_random_triples():
    # S_f(x) = sum_{n<=N} f(floor(x/n)) + sum_d f(d) (floor(x/d) - max(N, floor(x/(d+1))))_+
    # for ANY split N, not just isqrt(x); exact integer identity
    rng = random.Random(99)
    kinds = [A.ONE, A.MOBIUS, A.MOBIUS_SQUARED, A.tau(2), A.tau(4), A.OMEGA,
             A.TWO_POW_OMEGA, A.CHI_TWO]
    for _ in range(100):
        kind = rng.choice(kinds)
        x = rng.randint(2, 10**5)
        n = rng.randint(1, x)
        assert FS.floor_sum_fast(kind, x, split=n) == FS.floor_sum_naive(kind, x)


def test_quotient_multiplicity_psi_reconstruction():
    # per-d exact identity: x/(d(d+1)) + psi(x/(d+1)) - psi(x/d)
    #                        = floor(x/d) - floor(x/(d+1))
    rng = random.Random(3)
    for _ in range(200):
        x = rng.randint(2, 10**6)
        d = rng.randint(1, x)
        lhs = (Fraction(x, d * (d + 1)) + FS.psi_of_quotient(x, d + 1)
               - FS.psi_of_quotient(x, d))
        assert lhs == x // d - x // (d + 1)


def test_budgets():
    with pytest.raises(BudgetError):
        FS.floor_sum_naive(A.ONE, 10**7 + 1)
    with pytest.raises(BudgetError):
        FS.floor_sum_fast(A.ONE, 10**12 + 1)


def test_main_term_constant_one_telescopes():
    for cutoff in (10**3, 10**5, 10**6):
        c, tail = FS.main_term_constant(A.ONE, cutoff)
        assert c == pytest.approx(1 - 1 / (cutoff + 1), abs=1e-12)
        assert abs(1 - c) <= tail + 1e-12
        assert tail >= 0


def test_main_term_constant_lambda_stable():
    c1, tail1 = FS.main_term_constant(A.LAMBDA, 10**7)
    c2, _ = FS.main_term_constant(A.LAMBDA, 2 * 10**7)
    assert abs(c1 - c2) <= 1e-6
    assert abs(c1 - c2) <= tail1


def test_main_term_constant_mu2_within_tail():
    c1, tail1 = FS.main_term_constant(A.MOBIUS_SQUARED, 10**6)
    c2, _ = FS.main_term_constant(A.MOBIUS_SQUARED, 10**7)
    assert abs(c1 - c2) <= tail1


@pytest.mark.parametrize("kind", [A.tau(2), A.tau(5), A.TWO_POW_OMEGA, A.OMEGA,
                                  A.LAMBDA], ids=str)
def test_tail_bound_covers_observed_drift(kind):
    c1, tail = FS.main_term_constant(kind, 10**4)
    c2, _ = FS.main_term_constant(kind, 10**6)
    assert abs(c1 - c2) <= tail


def test_monotone_constant_convergence():
    # partial sums are nondecreasing in the cutoff for nonnegative f
    for kind in (A.ONE, A.tau(2), A.TWO_POW_OMEGA, A.OMEGA, A.LAMBDA,
                 A.MOBIUS_SQUARED):
        prev = -1.0
        for cutoff in (10**3, 10**4, 10**5):
            c, _ = FS.main_term_constant(kind, cutoff)
            assert c >= prev
            prev = c


def test_main_term_constant_cutoff_guard():
    with pytest.raises(ValueError):
        FS.main_term_constant(A.ONE, 100)


def test_psi_correction_window_and_vacuous_range():
    with pytest.raises(WindowError):
        FS.psi_correction_sum(A.ONE, 10**4, 5)       # below x^(1/3)
    with pytest.raises(WindowError):
        FS.psi_correction_sum(A.ONE, 10**4, 100)     # at x^(1/2)
    # x // N < N + 1 leaves an empty d-range
    assert FS.psi_correction_sum(A.tau(2), 962, 31) == 0.0


def test_psi_correction_matches_exact_rational_sum():
    for kind, x, n in [(A.ONE, 10**4, 30), (A.tau(2), 10**4, 25),
                       (A.MOBIUS_SQUARED, 5000, 20)]:
        got = FS.psi_correction_sum(kind, x, n)
        exact = Fraction(0)
        tab = A.build_sieve(kind, n + 1, x // n)
        for d in range(n + 1, x // n + 1):
            exact += tab.value(d) * (FS.psi_of_quotient(x, d + 1)
                                     - FS.psi_of_quotient(x, d))
        assert got == pytest.approx(float(exact), abs=1e-9)


def test_full_bookkeeping_identity():
    # head + x * partial-C + head psi terms + psi correction - clip delta == S,
    # every piece exact rational
    for kind, x, n in [(A.tau(2), 10**4, 25), (A.MOBIUS_SQUARED, 8000, 22),
                       (A.TWO_POW_OMEGA, 6000, 20)]:
        s = FS.floor_sum_naive(kind, x)
        tab = A.build_sieve(kind, 1, x)
        head = sum(tab.value(x // m) for m in range(1, n + 1))
        d_hi = x // n
        partial_c = sum(Fraction(tab.value(d), d * (d + 1)) for d in range(1, d_hi + 1))
        psi_small = sum(tab.value(d) * (FS.psi_of_quotient(x, d + 1)
                                        - FS.psi_of_quotient(x, d))
                        for d in range(1, n + 1))
        psi_corr = sum(tab.value(d) * (FS.psi_of_quotient(x, d + 1)
                                       - FS.psi_of_quotient(x, d))
                       for d in range(n + 1, d_hi + 1))
        # unclipped block count minus the true (n > N)-restricted count
        d0 = x // (n + 1)
        clipped = sum(tab.value(d) * max(0, x // d - max(n, x // (d + 1)))
                      for d in range(1, d0 + 1))
        unclipped = sum(tab.value(d) * (x // d - x // (d + 1))
                        for d in range(1, d_hi + 1))
        clip_delta = unclipped - clipped
        total = head + x * partial_c + psi_small + psi_corr - clip_delta
        assert total == s


def test_error_scan_needs_grid():
    with pytest.raises(ValueError):
        FS.error_scan(A.tau(2), [1000])
    with pytest.raises(ValueError):
        FS.error_scan(A.tau(2), [1000, 1000])


def test_error_scan_shape_and_slope():
    fit = FS.error_scan(A.MOBIUS_SQUARED, [10**3, 3 * 10**3, 10**4, 10**5],
                        cutoff=10**6)
    assert len(fit.grid) == len(fit.residuals) == 4
    assert all(r >= 0 for r in fit.residuals)
    assert math.isfinite(fit.slope) and math.isfinite(fit.intercept)


def test_summarize_report_fields():
    rep = FS.summarize(A.tau(2), 10**4, method="fast", cutoff=10**5)
    assert rep.sum == FS.floor_sum_naive(A.tau(2), 10**4)
    assert isinstance(rep.sum, int)
    assert rep.residual == pytest.approx(rep.sum - rep.x * rep.constant)
    assert rep.constant_tail_bound >= 0
