"""Exponent equations against closed-form and scalar-bisection oracles."""

import math

import pytest

from badlab.contfrac import DomainError
from badlab.exponents import (
    build_word_table,
    enumerate_word_arrays,
    eval_omega_sum,
    eval_T_m,
    sigma_m,
    solve_kappa,
)


def scalar_bisect(f, lo, hi, tol=1e-12):
    """Independent root finder for the oracles below."""
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def test_word_arrays_233():
    digits, q, v = enumerate_word_arrays(2, 3, 3)
    # only (2,1,2) and (2,2,2) have positive counts
    positive = {tuple(digits[i]): (int(q[i]), int(v[i])) for i in range(len(q)) if v[i] > 0}
    assert positive == {(2, 1, 2): (8, 1), (2, 2, 2): (12, 2)}


def test_eval_T_closed_form():
    table = build_word_table(2, 3, 3)
    assert abs(eval_T_m(table, 1.0) - (1 / 8 + 2 / 12)) < 1e-15
    # kappa = 1/2 degenerates to the total count of admissible pairs
    assert eval_T_m(table, 0.5) == 3.0
    expected = 8**-0.2 + 2 * 12**-0.2
    assert abs(eval_T_m(table, 0.6) - expected) < 1e-10


def test_kappa_star_233():
    rep = solve_kappa(2, 3, 3)
    # oracle: bisection on the two-term closed form
    f = lambda k: 8 ** (1 - 2 * k) + 2 * 12 ** (1 - 2 * k) - 1
    oracle = scalar_bisect(f, 0.5, 4.0)
    assert abs(rep.kappa_star - oracle) < 1e-9
    assert abs(rep.kappa_star - 0.7347) < 1e-3
    assert abs(rep.T_at_kappa_star - 1.0) <= 1e-9


def test_omega_22():
    rep = solve_kappa(2, 3, 3)  # omega only depends on (M, m) = (2, 3) here
    # the spec's omega example lives at (M, m) = (2, 2): check via the sum
    table = build_word_table(2, 3, 2)
    f = lambda w: 2 ** (-2 * w) + 2 * 3 ** (-2 * w) + 5 ** (-2 * w) - 1
    oracle = scalar_bisect(f, 1e-9, 4.0)
    solved = scalar_bisect(lambda w: eval_omega_sum(table, w) - 1.0, 1e-9, 4.0)
    assert abs(solved - oracle) < 1e-9
    assert abs(oracle - 0.655) < 1e-2


def test_monotonicity_in_M():
    k2 = solve_kappa(2, 3, 3).kappa_star
    k3 = solve_kappa(3, 3, 3).kappa_star
    assert k3 > k2


def test_T_strictly_decreasing():
    table = build_word_table(3, 3, 3)
    values = [eval_T_m(table, k) for k in (0.6, 0.8, 1.0, 1.3, 1.7)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_sigma_closed_form_233():
    table = build_word_table(2, 3, 3)
    rep = solve_kappa(2, 3, 3)
    k = rep.kappa_star
    w8 = 8 ** (1 - 2 * k)
    w12 = 12 ** (1 - 2 * k)
    T = w8 + 2 * w12
    expected = (w8 * math.log(8) + 2 * w12 * math.log(12)) / (3 * T)
    assert abs(sigma_m(table, k) - expected) < 1e-12
    assert abs(sigma_m(table, k) - 0.777) < 1e-3
    # weights at kappa*: ~0.377 on the q=8 word, ~0.311 each on q=12
    assert abs(w8 / T - 0.377) < 1e-3
    assert abs(w12 / T - 0.311) < 1e-3


def test_sigma_degenerate_single_word():
    # (M, R) admitting a single admissible word: sigma = log q / m
    table = build_word_table(2, 4, 4)
    digits, q, v = enumerate_word_arrays(2, 4, 4)
    live = [(tuple(digits[i]), int(q[i]), int(v[i])) for i in range(len(q)) if v[i] > 0]
    if len({x[1] for x in live}) == 1:
        qval = live[0][1]
        assert abs(sigma_m(table, 0.9) - math.log(qval) / 4) < 1e-12


def test_no_admissible_exponent():
    with pytest.raises(DomainError):
        solve_kappa(1, 3, 3)  # M = 1 leaves an empty digit space
