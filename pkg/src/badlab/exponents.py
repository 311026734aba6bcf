"""Exponent equations over the space of capped words.

Everything here reduces to sums of the form  sum_a q_m(a)^x * weight(a)
over all words a in [M]^m.  Words are enumerated once into flat arrays;
sums collapse onto unique denominator values and go through math.fsum,
which is exactly rounded and hence order-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contfrac import DomainError
from .digitspace import GuardExceeded, constrained

FEASIBILITY_LIMIT = 10**7
KAPPA_BRACKET = (0.5 + 1e-6, 4.0)
ROOT_TOL = 1e-9


def enumerate_word_arrays(M: int, m: int, R: int):
    """All words of [M]^m in lexicographic order with their q_m and |V_m|.

    Returns (digits, q, v): digits is (M^m, m) with values in 1..M; q and v
    are int64 arrays.  Guarded by the feasibility limit.
    """
    if M < 1 or m < 1:
        raise DomainError("need M >= 1 and m >= 1")
    total = M**m
    if total > FEASIBILITY_LIMIT:
        raise GuardExceeded(f"M^m = {total} exceeds feasibility guard")
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, m), dtype=np.int64)
    for j in range(m):
        digits[:, j] = (idx // M ** (m - 1 - j)) % M + 1

    q_prev = np.zeros(total, dtype=np.int64)
    q = np.ones(total, dtype=np.int64)
    v_prev = np.zeros(total, dtype=np.int64)
    v = np.zeros(total, dtype=np.int64)
    for k in range(1, m + 1):
        d = digits[:, k - 1]
        q, q_prev = d * q + q_prev, q
        if k == 1:
            v, v_prev = d - 1, v
        elif k == 2:
            v, v_prev = d * v, v
        elif constrained(k, R):
            v, v_prev = (d - 1) * v, v
        elif k % R == 2:
            v, v_prev = d * v, v
        else:
            v, v_prev = d * v + v_prev, v
    return digits, q, v


@dataclass(frozen=True)
class WordTable:
    """Unique-q aggregation of [M]^m: counts and summed |V_m| per q."""

    M: int
    R: int
    m: int
    q: np.ndarray  # unique q values, ascending, float64 (exact ints)
    count: np.ndarray  # words per q, float64
    v_sum: np.ndarray  # sum of |V_m| per q, float64


def build_word_table(M: int, R: int, m: int) -> WordTable:
    _, q, v = enumerate_word_arrays(M, m, R)
    uq, inv = np.unique(q, return_inverse=True)
    count = np.bincount(inv, minlength=len(uq)).astype(np.float64)
    v_sum = np.bincount(inv, weights=v.astype(np.float64), minlength=len(uq))
    return WordTable(M, R, m, uq.astype(np.float64), count, v_sum)


def eval_T_m(table: WordTable, kappa: float) -> float:
    """T_m(kappa) = sum over words of q^(1-2 kappa) |V_m|."""
    terms = table.v_sum * np.power(table.q, 1.0 - 2.0 * kappa)
    return math.fsum(terms.tolist())


def eval_omega_sum(table: WordTable, omega: float) -> float:
    """sum over words of q^(-2 omega)."""
    terms = table.count * np.power(table.q, -2.0 * omega)
    return math.fsum(terms.tolist())


def sigma_m(table: WordTable, kappa: float) -> float:
    """Per-index mean of log q_m under the block measure, in nats."""
    T = eval_T_m(table, kappa)
    if T <= 0:
        raise DomainError("empty digit space: all |V_m| vanish")
    terms = (
        table.v_sum * np.power(table.q, 1.0 - 2.0 * kappa) * np.log(table.q)
    )
    return math.fsum(terms.tolist()) / (table.m * T)


def _bisect_root(f, lo: float, hi: float, tol: float = ROOT_TOL) -> float:
    """Root of the decreasing function f (f(root) = 0) by bisection."""
    flo, fhi = f(lo), f(hi)
    if flo < 0 or fhi > 0:
        raise DomainError(
            f"no admissible exponent: no sign change on [{lo}, {hi}] "
            f"(f({lo})={flo:.3g}, f({hi})={fhi:.3g})"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= tol:
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ExponentReport:
    M: int
    R: int
    m: int
    kappa_star: float
    omega: float
    sigma: float  # sigma_m evaluated at kappa_eval
    kappa_eval: float
    T_at_kappa_star: float
    T_at_kappa_eval: float
    omega_residual: float


def solve_kappa(M: int, R: int, m: int, kappa_eval: float | None = None) -> ExponentReport:
    """Solve T_m(kappa*) = 1 and the companion exponent equation.

    ``kappa_eval`` picks the exponent at which sigma_m and T_m are also
    reported (defaults to kappa*).
    """
    table = build_word_table(M, R, m)
    lo, hi = KAPPA_BRACKET
    kappa_star = _bisect_root(lambda k: eval_T_m(table, k) - 1.0, lo, hi)
    omega = _bisect_root(lambda w: eval_omega_sum(table, w) - 1.0, 1e-9, 4.0)
    if kappa_eval is None:
        kappa_eval = kappa_star
    return ExponentReport(
        M=M,
        R=R,
        m=m,
        kappa_star=kappa_star,
        omega=omega,
        sigma=sigma_m(table, kappa_eval),
        kappa_eval=kappa_eval,
        T_at_kappa_star=eval_T_m(table, kappa_star),
        T_at_kappa_eval=eval_T_m(table, kappa_eval),
        omega_residual=eval_omega_sum(table, omega) - 1.0,
    )
