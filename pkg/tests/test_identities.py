"""Vaughan decompositions and hyperbola identities, verified exactly."""

import math
import random

import numpy as np
import pytest

from floorsums import arith as A
from floorsums import identities as I
from floorsums.errors import CoverageError, WindowError


def rel(residual, lhs):
    return residual / (1 + abs(lhs))


# ---------------------------------------------------------------------------
# phases

def test_phase_forms_and_exact_reduction():
    ph = I.PhaseFunction.reciprocal(10**12 + 7)
    # exact mod-1 reduction: huge z keeps full precision
    assert ph.frac(3) == pytest.approx(((10**12 + 7) % 3) / 3, abs=0)
    ph = I.PhaseFunction.power_reciprocal(999999937, 2)
    assert ph.frac(10) == (999999937 % 100) / 100
    ph = I.PhaseFunction.shifted_reciprocal(3, 100, 1)
    assert ph.frac(9) == (300 % 10) / 10
    # float parameters reduce through exact rational arithmetic
    ph = I.PhaseFunction.reciprocal(2.5)
    assert ph.frac(2) == 0.25
    ph = I.PhaseFunction.opaque(lambda t: 1.75 * t)
    assert ph.frac(2) == pytest.approx(0.5)


def test_phase_validation():
    with pytest.raises(ValueError):
        I.PhaseFunction.reciprocal(-1)
    with pytest.raises(ValueError):
        I.PhaseFunction.power_reciprocal(5, 0)
    with pytest.raises(ValueError):
        I.PhaseFunction.shifted_reciprocal(1, 1, 2)


def test_unit_array_matches_scalar_path():
    rng = random.Random(12)
    for _ in range(20):
        ph = I.random_phase(rng)
        t = np.array([rng.randint(1, 10**6) for _ in range(50)], dtype=np.int64)
        arr = ph.unit_array(t)
        ref = np.array([ph.unit(int(v)) for v in t])
        assert np.allclose(arr, ref, atol=1e-12)


# ---------------------------------------------------------------------------
# coefficients

def test_vaughan_coefficient_examples():
    co = I.vaughan_coeffs(2, 10)
    assert co.a_lambda[4] == pytest.approx(-math.log(2))
    assert co.b[6] == 0
    assert co.b[1] == 1


def test_b_is_delta_below_cutoff():
    co = I.vaughan_coeffs(9, 100)
    for m in range(1, 10):
        assert co.b[m] == (1 if m == 1 else 0)


def test_a_lambda_against_double_sum():
    u, limit = 6, 60
    co = I.vaughan_coeffs(u, limit)
    mu = A.build_sieve(A.MOBIUS, 1, u)
    lam = A.build_sieve(A.LAMBDA, 1, u)
    for n in range(1, u * u + 1):
        direct = sum(mu.value(d) * lam.value(n // d)
                     for d in range(1, u + 1)
                     if n % d == 0 and n // d <= u)
        assert co.a_lambda[n] == pytest.approx(direct, abs=1e-12)


def test_a_mu_bounded_by_tau():
    u, limit = 12, 160
    co = I.vaughan_coeffs(u, limit)
    t2 = A.build_sieve(A.tau(2), 1, u * u)
    for n in range(1, u * u + 1):
        assert abs(int(co.a_mu[n])) <= t2.value(n)


def test_normalized_views_bounded():
    co = I.vaughan_coeffs(10, 120)
    assert np.max(np.abs(co.alpha_lambda(120))) <= 1 + 1e-12
    assert np.max(np.abs(co.beta())) <= 1 + 1e-12
    assert np.max(np.abs(co.alpha_mu())) <= 1 + 1e-12


def test_b_plus_complements_b():
    co = I.vaughan_coeffs(7, 80)
    # (mu 1^- * 1) + (mu 1^+ * 1) = mu * 1 = [n = 1]
    total = co.b[1:] + co.b_plus[1:]
    assert total[0] == 1
    assert not total[1:].any()


# ---------------------------------------------------------------------------
# Vaughan identity verifiers

def test_vaughan_lambda_examples():
    l, r, res = I.vaughan_lambda_sides(50, 97, 7, I.PhaseFunction.reciprocal(1234.5))
    assert res <= 1e-9 * (1 + abs(l))
    l, r, res = I.vaughan_lambda_sides(20, 40, 4,
                                       I.PhaseFunction.power_reciprocal(10**5, 2))
    assert res <= 1e-9 * (1 + abs(l))


def test_vaughan_lambda_zero_phase_is_chebyshev_difference():
    lam = A.build_sieve(A.LAMBDA, 1, 97)
    expected = math.fsum(lam.value(n) for n in range(51, 98))
    l, r, res = I.vaughan_lambda_sides(50, 97, 7, I.PhaseFunction.zero())
    assert l == pytest.approx(expected, rel=1e-12)
    assert res <= 1e-9 * (1 + abs(l))


def test_vaughan_mobius_zero_phase_is_mertens_difference():
    mu = A.build_sieve(A.MOBIUS, 1, 97)
    expected = sum(mu.value(n) for n in range(51, 98))
    l, r, res = I.vaughan_mobius_sides(50, 97, 7, I.PhaseFunction.zero())
    assert l == pytest.approx(expected, rel=1e-12)
    assert res <= 1e-9 * (1 + abs(l))


def test_vaughan_mobius_examples():
    l, r, res = I.vaughan_mobius_sides(50, 97, 7,
                                       I.PhaseFunction.power_reciprocal(9999, 2))
    assert res <= 1e-9 * (1 + abs(l))
    # degenerate cutoff U = 1 stays exact
    l, r, res = I.vaughan_mobius_sides(40, 80, 1, I.PhaseFunction.reciprocal(555))
    assert res <= 1e-9 * (1 + abs(l))
    l, r, res = I.vaughan_lambda_sides(40, 80, 1, I.PhaseFunction.reciprocal(555))
    assert res <= 1e-9 * (1 + abs(l))


def test_vaughan_window_checks():
    ph = I.PhaseFunction.zero()
    with pytest.raises(WindowError):
        I.vaughan_lambda_sides(50, 101, 7, ph)    # R1 > 2R
    with pytest.raises(WindowError):
        I.vaughan_lambda_sides(50, 97, 8, ph)     # U > sqrt(R)
    with pytest.raises(WindowError):
        I.vaughan_mobius_sides(1, 2, 1, ph)       # R must exceed 1


# ---------------------------------------------------------------------------
# hyperbola verifiers

def test_hyperbola_divisor_count():
    one = A.build_sieve(A.ONE, 1, 10)
    l, r, res = I.hyperbola_sides(one, one, None, 10, 3)
    assert (l, r, res) == (27, 27, 0)


def test_hyperbola_degenerate_U_equals_x():
    one = A.build_sieve(A.ONE, 1, 50)
    l, r, res = I.hyperbola_sides(one, one, None, 50, 50)
    assert res == 0


def test_hyperbola_mobius_inversion_sum():
    mu = A.build_sieve(A.MOBIUS, 1, 100)
    one = A.build_sieve(A.ONE, 1, 100)
    l, r, res = I.hyperbola_sides(mu, one, None, 100, 10)
    assert (l, r) == (1, 1) and res == 0


def test_hyperbola_with_phase_and_lambda_weights():
    lam = A.build_sieve(A.LAMBDA, 1, 60)
    one = A.build_sieve(A.ONE, 1, 60)
    ph = I.PhaseFunction.reciprocal(777)
    l, r, res = I.hyperbola_sides(lam, one, ph.unit, 60, 7)
    assert res <= 1e-9 * (1 + abs(l))


def test_hyperbola_coverage_guard():
    one = A.build_sieve(A.ONE, 1, 10)
    with pytest.raises(CoverageError):
        I.hyperbola_sides(one, one, None, 20, 3)
    with pytest.raises(WindowError):
        I.hyperbola_sides(one, one, None, 10, 11)


def test_hyperbola_exp_unitary_route():
    # 2^omega = chi_2 * tau feeding the dyadic exponential identity
    chi = A.build_sieve(A.CHI_TWO, 1, 500)
    t2 = A.build_sieve(A.tau(2), 1, 500)
    ph = I.PhaseFunction.reciprocal(98765)
    l, r, res = I.hyperbola_exp_sides(chi, t2, ph, 100, 200, 100)
    assert res <= 1e-9 * (1 + abs(l))
    w = A.build_sieve(A.TWO_POW_OMEGA, 1, 200)
    direct = sum(w.value(n) * ph.unit(n) for n in range(101, 201))
    assert abs(l - direct) <= 1e-9 * (1 + abs(l))


def test_hyperbola_exp_counts_with_zero_phase():
    one = A.build_sieve(A.ONE, 1, 100)
    t2 = A.build_sieve(A.tau(2), 1, 40)
    l, r, res = I.hyperbola_exp_sides(one, one, I.PhaseFunction.zero(), 20, 40, 4)
    expected = sum(t2.value(n) for n in range(21, 41))
    assert l == pytest.approx(expected) and res <= 1e-9 * (1 + abs(l))


def test_hyperbola_exp_squarefree_route_and_split():
    # mu^2 = chi_2 * 1 with U near R^(2/3); the four-sum split agrees too
    chi = A.build_sieve(A.CHI_TWO, 1, 400)
    one = A.build_sieve(A.ONE, 1, 400)
    ph = I.PhaseFunction.reciprocal(31415)
    R, R1, U = 64, 128, 16
    l, r, res = I.hyperbola_exp_sides(chi, one, ph, R, R1, U)
    assert res <= 1e-9 * (1 + abs(l))
    split = I.hyperbola_exp_split(chi, one, ph, R, R1, U)
    assert abs(split - l) <= 1e-9 * (1 + abs(l))


def test_mu2_equals_chi2_star_one_to_1e6():
    n = 10**6
    chi = A.build_sieve(A.CHI_TWO, 1, n)
    one = A.build_sieve(A.ONE, 1, n)
    mu2 = A.build_sieve(A.MOBIUS_SQUARED, 1, n)
    conv = A.dirichlet_convolve(chi, one, n)
    assert (conv.values == mu2.values).all()


# ---------------------------------------------------------------------------
# randomized suites

@pytest.mark.parametrize("subject", I.VERIFY_SUBJECTS)
def test_randomized_residuals(subject):
    reports = I.run_verification(subject, 30, seed=20240809)
    worst = max(r["relative"] for r in reports)
    assert worst <= 1e-9, (subject, worst)


def test_run_verification_reproducible():
    a = I.run_verification("vaughan-mu", 5, seed=42)
    b = I.run_verification("vaughan-mu", 5, seed=42)
    assert a == b
    c = I.run_verification("vaughan-mu", 5, seed=43)
    assert c != a


def test_exp_split_agrees_on_random_instances():
    rng = random.Random(77)
    kinds = [A.ONE, A.MOBIUS, A.tau(2), A.CHI_TWO, A.TWO_POW_OMEGA]
    for _ in range(15):
        R = rng.randint(20, 200)
        R1 = rng.randint(R + 1, 2 * R)
        U = rng.randint(1, R)
        f = A.build_sieve(rng.choice(kinds), 1, 2 * R1 + 1)
        g = A.build_sieve(rng.choice(kinds), 1, 2 * R1 + 1)
        ph = I.random_phase(rng)
        l, r, res = I.hyperbola_exp_sides(f, g, ph, R, R1, U)
        split = I.hyperbola_exp_split(f, g, ph, R, R1, U)
        assert res <= 1e-9 * (1 + abs(l))
        assert abs(split - l) <= 1e-9 * (1 + abs(l))
