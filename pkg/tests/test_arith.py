"""Sieve tables, point evaluation, and Dirichlet convolution."""

import math
import random

import numpy as np
import pytest

from floorsums import arith as A
from floorsums.errors import BudgetError, CoverageError

ALL_KINDS = [A.ONE, A.MOBIUS, A.MOBIUS_SQUARED, A.LAMBDA, A.tau(2), A.tau(3),
             A.tau(6), A.OMEGA, A.TWO_POW_OMEGA, A.CHI_TWO]


def trial_factor(n):
    """Independent factorization oracle: plain trial division."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def reference_value(kind, n):
    """Definition-level oracle, independent of the sieve kernels."""
    f = trial_factor(n)
    exps = list(f.values())
    tag = kind.tag
    if tag == "one":
        return 1
    if tag == "mobius":
        return 0 if any(a > 1 for a in exps) else (-1) ** len(f)
    if tag == "mobius_squared":
        return 1 if all(a == 1 for a in exps) else 0
    if tag == "lambda":
        return math.log(next(iter(f))) if len(f) == 1 else 0.0
    if tag == "tau":
        v = 1
        for a in exps:
            v *= math.comb(a + kind.r - 1, kind.r - 1)
        return v
    if tag == "omega":
        return len(f)
    if tag == "two_pow_omega":
        return 2 ** len(f)
    if tag == "chi_two":
        r = math.isqrt(n)
        if r * r != n:
            return 0
        return reference_value(A.MOBIUS, r)
    raise AssertionError(tag)


def test_build_sieve_mu_squared_first_ten():
    t = A.build_sieve(A.MOBIUS_SQUARED, 1, 10)
    assert t.values.tolist() == [1, 1, 1, 0, 1, 1, 1, 0, 0, 1]


def test_build_sieve_lambda_prime_power():
    t = A.build_sieve(A.LAMBDA, 8, 8)
    assert t.values.tolist() == pytest.approx([math.log(2)])


def test_build_sieve_chi_two():
    t = A.build_sieve(A.CHI_TWO, 1, 9)
    assert t.values.tolist() == [1, 0, 0, -1, 0, 0, 0, 0, -1]


@pytest.mark.parametrize("kind", ALL_KINDS, ids=str)
def test_sieve_matches_definition(kind):
    t = A.build_sieve(kind, 1, 300)
    for n in range(1, 301):
        ref = reference_value(kind, n)
        if kind.tag == "lambda":
            assert abs(t.value(n) - ref) < 1e-12, n
        else:
            assert t.value(n) == ref, n


@pytest.mark.parametrize("kind", ALL_KINDS, ids=str)
def test_sieve_offset_segment_matches_definition(kind):
    lo = 99_950
    t = A.build_sieve(kind, lo, lo + 200)
    for n in range(lo, lo + 201):
        ref = reference_value(kind, n)
        if kind.tag == "lambda":
            assert abs(t.value(n) - ref) < 1e-12, n
        else:
            assert t.value(n) == ref, n


def test_value_range_invariants():
    n = 5000
    assert set(A.build_sieve(A.MOBIUS_SQUARED, 1, n).values.tolist()) <= {0, 1}
    assert set(A.build_sieve(A.MOBIUS, 1, n).values.tolist()) <= {-1, 0, 1}
    assert set(A.build_sieve(A.CHI_TWO, 1, n).values.tolist()) <= {-1, 0, 1}
    lam = A.build_sieve(A.LAMBDA, 1, n).values
    assert np.all(lam >= 0)


def test_eval_point_examples():
    assert A.eval_point(A.tau(3), 4) == 6
    assert A.eval_point(A.OMEGA, 12) == 2
    assert A.eval_point(A.TWO_POW_OMEGA, 1) == 1


def test_tau3_point_matches_triple_enumeration():
    # tau_3(n) = #{(a,b,c): abc = n}
    for n in (4, 12, 30, 64, 97):
        count = sum(1 for a in range(1, n + 1) if n % a == 0
                    for b in range(1, n + 1) if (n // a) % b == 0)
        assert A.eval_point(A.tau(3), n) == count


def test_eval_point_agrees_with_sieve_random():
    rng = random.Random(2024)
    table = {k: A.build_sieve(k, 1, 10**5) for k in ALL_KINDS}
    for _ in range(10**4):
        kind = rng.choice(ALL_KINDS)
        n = rng.randint(1, 10**5)
        a, b = table[kind].value(n), A.eval_point(kind, n)
        if kind.tag == "lambda":
            assert abs(a - b) < 1e-12
        else:
            assert a == b


def test_eval_point_large_arguments():
    # semiprime just under the budget exercises the rho fallback
    p, q = 999983, 999979
    n = p * q
    assert A.eval_point(A.tau(2), n) == 4
    assert A.eval_point(A.OMEGA, n) == 2
    assert A.eval_point(A.MOBIUS, n) == 1
    assert A.eval_point(A.LAMBDA, n) == 0.0
    assert A.eval_point(A.LAMBDA, p) == pytest.approx(math.log(p))
    assert A.eval_point(A.CHI_TWO, p * p) == -1


def test_factor_budget_enforced(monkeypatch):
    monkeypatch.setenv("FLOORSUMS_FACTOR_BUDGET", "1000")
    with pytest.raises(BudgetError):
        A.eval_point(A.tau(2), 10**6)


def test_sieve_budget_enforced(monkeypatch):
    monkeypatch.setenv("FLOORSUMS_SIEVE_BUDGET", "100")
    with pytest.raises(BudgetError):
        A.build_sieve(A.ONE, 1, 1000)


def test_tau_order_capped():
    with pytest.raises(BudgetError):
        A.build_sieve(A.tau(9), 1, 100)
    with pytest.raises(ValueError):
        A.tau(0)


def test_tau1_behaves_like_one():
    a = A.build_sieve(A.tau(1), 1, 500).values
    b = A.build_sieve(A.ONE, 1, 500).values
    assert (a == b).all()


def test_tables_immutable():
    t = A.build_sieve(A.ONE, 1, 10)
    with pytest.raises(ValueError):
        t.values[0] = 5


def test_convolution_examples():
    n = 200
    mu = A.build_sieve(A.MOBIUS, 1, n)
    one = A.build_sieve(A.ONE, 1, n)
    log_table = A.SieveTable(A.LAMBDA, 1, n,
                             np.log(np.arange(1, n + 1, dtype=np.float64)))
    lam = A.dirichlet_convolve(mu, log_table, 8)
    assert lam.value(8) == pytest.approx(math.log(2))

    chi = A.build_sieve(A.CHI_TWO, 1, 20)
    t2 = A.build_sieve(A.tau(2), 1, 20)
    w = A.build_sieve(A.TWO_POW_OMEGA, 1, 20)
    assert (A.dirichlet_convolve(chi, t2, 20).values == w.values).all()

    t3 = A.build_sieve(A.tau(3), 1, 100)
    got = A.dirichlet_convolve(A.build_sieve(A.tau(2), 1, 100), one, 100)
    assert (got.values == t3.values[:100]).all()


def test_convolution_coverage_checked():
    f = A.build_sieve(A.ONE, 1, 10)
    g = A.build_sieve(A.ONE, 1, 20)
    with pytest.raises(CoverageError):
        A.dirichlet_convolve(f, g, 15)
    h = A.build_sieve(A.ONE, 2, 30)
    with pytest.raises(CoverageError):
        A.dirichlet_convolve(h, g, 10)


def test_mobius_inversion_medium_range():
    n = 10**5
    mu = A.build_sieve(A.MOBIUS, 1, n)
    one = A.build_sieve(A.ONE, 1, n)
    conv = A.dirichlet_convolve(mu, one, n)
    assert conv.value(1) == 1
    assert not conv.values[1:].any()


def test_two_pow_omega_as_divisor_sum_of_mu_squared():
    n = 3000
    mu2 = A.build_sieve(A.MOBIUS_SQUARED, 1, n)
    one = A.build_sieve(A.ONE, 1, n)
    w = A.build_sieve(A.TWO_POW_OMEGA, 1, n)
    assert (A.dirichlet_convolve(mu2, one, n).values == w.values).all()


def test_kind_parsing():
    assert A.kind_from_name("tau3") == A.tau(3)
    assert A.kind_from_name("tau:4") == A.tau(4)
    assert A.kind_from_name("mu") == A.MOBIUS
    assert A.kind_from_name("2omega") == A.TWO_POW_OMEGA
    with pytest.raises(ValueError):
        A.kind_from_name("zeta")
