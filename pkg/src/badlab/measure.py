"""Block measures on constrained digit pairs, conditioning, cylinders.

A cell is a pair (a, b) with a in [M]^m and b admissible for a; its weight
is q_m(a)^(1-2 kappa)/T_m.  A super-block is j0 consecutive cells; the
conditioning event keeps the average of log q_m over the super-block within
a relative epsilon band of its mean.  The product measure assigns each
cylinder the product of its conditioned super-block weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .contfrac import CFWord, DomainError, convergents, error_numerators
from .digitspace import GuardExceeded, check_membership, constrained, DigitSpaceParams, enumerate_V
from .exponents import (
    FEASIBILITY_LIMIT,
    enumerate_word_arrays,
    build_word_table,
    eval_T_m,
    sigma_m,
    solve_kappa,
)
from .ostrowski import OstrowskiDigits, decode_real, encode_real
from .rng import stream_generator

REJECTION_CAP = 10**6


class ConformanceError(RuntimeError):
    """A paper hypothesis the run required was false."""


@dataclass(frozen=True)
class MeasureParams:
    M: int
    R: int
    m: int
    kappa: float
    epsilon: float
    j0: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.M < 2 or self.R < 3:
            raise DomainError("need M >= 2 and R >= 3")
        if self.m % self.R != 0 or self.m < self.R:
            raise DomainError("m must be a positive multiple of R")
        if not 0.5 < self.kappa < 2:
            raise DomainError("kappa must lie in (1/2, 2)")
        if not 0 < self.epsilon < 0.25:
            raise DomainError("epsilon must lie in (0, 1/4)")
        if self.j0 < 1:
            raise DomainError("j0 must be >= 1")
        if self.M**self.m > FEASIBILITY_LIMIT:
            raise GuardExceeded(f"M^m = {self.M ** self.m} over feasibility guard")

    @property
    def block_len(self) -> int:
        return self.j0 * self.m


class BlockModel:
    """Precomputed tables for one parameter set: weights, counts, masks."""

    def __init__(self, params: MeasureParams):
        self.params = params
        p = params
        self.digits, self.q, self.v = enumerate_word_arrays(p.M, p.m, p.R)
        table = build_word_table(p.M, p.R, p.m)
        self.T = eval_T_m(table, p.kappa)
        if self.T <= 0:
            raise DomainError("digit space is empty")
        self.sigma = sigma_m(table, p.kappa)
        self.mean_log_q = p.m * self.sigma
        qf = self.q.astype(np.float64)
        self.weights = self.v.astype(np.float64) * np.power(qf, 1.0 - 2.0 * p.kappa) / self.T
        self.log_q = np.log(qf)
        self._word_cum = np.cumsum(self.weights)
        # suffix counts for uniform b-sampling: S[w, k, pz] = number of
        # admissible (b_{k+1}..b_m) given [b_k == 0] = pz
        n, m = self.digits.shape
        S0 = np.ones((n, m + 1), dtype=np.int64)
        S1 = np.ones((n, m + 1), dtype=np.int64)
        for k in range(m - 1, -1, -1):
            a = self.digits[:, k]  # a_{k+1}
            if constrained(k + 1, p.R):
                S0[:, k] = (a - 1) * S0[:, k + 1]
                S1[:, k] = S0[:, k]
            else:
                S0[:, k] = S1[:, k + 1] + (a - 1) * S0[:, k + 1]
                S1[:, k] = S1[:, k + 1] + a * S0[:, k + 1]
        self.S0, self.S1 = S0, S1
        if not np.array_equal(S1[:, 0], self.v):
            raise AssertionError("suffix-count DP disagrees with the count recursion")
        # conditioning band on the mean of log q over a super-block
        band = p.epsilon * self.mean_log_q
        self.E_lo = self.mean_log_q - band
        self.E_hi = self.mean_log_q + band
        self.E_word_mask = (self.log_q >= self.E_lo) & (self.log_q <= self.E_hi)
        self._P_E: Optional[float] = None

    # -- conditioning -----------------------------------------------------

    def block_in_E(self, log_q_sum: float) -> bool:
        avg = log_q_sum / self.params.j0
        return self.E_lo <= avg <= self.E_hi

    def P_E(self) -> float:
        """Exact mass of the conditioning event under the unconditioned
        super-block law (full summation over value classes)."""
        if self._P_E is not None:
            return self._P_E
        j0 = self.params.j0
        uq, inv = np.unique(self.q, return_inverse=True)
        mass = np.bincount(inv, weights=self.weights, minlength=len(uq))
        logs = np.log(uq.astype(np.float64))
        if len(uq) ** j0 > 10**7:
            raise GuardExceeded("too many value classes for exact conditioning mass")
        total_terms = []

        def rec(depth, log_sum, w):
            if w == 0.0:
                return
            if depth == j0:
                if self.block_in_E(log_sum):
                    total_terms.append(w)
                return
            for lg, wt in zip(logs, mass):
                rec(depth + 1, log_sum + lg, w * wt)

        rec(0, 0.0, 1.0)
        self._P_E = math.fsum(total_terms)
        return self._P_E

    def c_lambda(self) -> float:
        pe = self.P_E()
        if pe <= 0:
            raise ConformanceError("conditioning event has zero mass")
        return 1.0 / pe

    # -- sampling ----------------------------------------------------------

    def draw_words(self, rng, size: int) -> np.ndarray:
        u = rng.random(size)
        idx = np.searchsorted(self._word_cum, u, side="right")
        return np.minimum(idx, len(self._word_cum) - 1)

    def draw_superblocks(self, rng, n_super: int, conditioning: bool) -> np.ndarray:
        """n_super super-blocks of j0 word indices each, conditioned on the
        band when requested.  Returns shape (n_super, j0)."""
        j0 = self.params.j0
        out = np.empty((n_super, j0), dtype=np.int64)
        pending = np.arange(n_super)
        attempts = 0
        while len(pending):
            draws = self.draw_words(rng, len(pending) * j0).reshape(len(pending), j0)
            attempts += len(pending)
            if attempts > REJECTION_CAP:
                raise ConformanceError(
                    f"conditioning event too small: acceptance below "
                    f"{n_super / attempts:.2e} after {attempts} attempts"
                )
            if conditioning:
                sums = self.log_q[draws].sum(axis=1)
                ok = (sums / j0 >= self.E_lo) & (sums / j0 <= self.E_hi)
            else:
                ok = np.ones(len(pending), dtype=bool)
            out[pending[ok]] = draws[ok]
            pending = pending[~ok]
        return out

    def draw_b_digits(self, rng, word_idx: np.ndarray) -> np.ndarray:
        """Uniform admissible digit words for each word index.
        word_idx has shape (n,), output (n, m)."""
        p = self.params
        n = len(word_idx)
        out = np.empty((n, p.m), dtype=np.int64)
        prev_zero = np.ones(n, dtype=bool)  # index 1 is constrained anyway
        for k in range(1, p.m + 1):
            a = self.digits[word_idx, k - 1]
            s0 = self.S0[word_idx, k]
            s1 = self.S1[word_idx, k]
            if constrained(k, p.R):
                total = (a - 1) * s0
                r = rng.integers(0, total)
                d = 1 + r // s0
            else:
                cap = a - 1 + prev_zero  # a if previous digit was zero
                total = s1 + cap * s0
                r = rng.integers(0, total)
                d = np.where(r < s1, 0, 1 + (r - s1) // s0)
            out[:, k - 1] = d
            prev_zero = d == 0
        return out


@dataclass(frozen=True)
class CylinderId:
    """Address of a depth-(j0 m N) cylinder: full digit words plus params."""

    params: MeasureParams
    a_digits: tuple[int, ...]
    b_digits: tuple[int, ...]

    def __post_init__(self):
        p = self.params
        J = len(self.a_digits)
        if J != len(self.b_digits) or J % p.block_len != 0 or J == 0:
            raise DomainError("digit words must share a positive multiple of j0*m")
        space = DigitSpaceParams(p.M, p.R)
        if not check_membership(self.a_digits, self.b_digits, space):
            raise DomainError("digit pair violates the admissibility rules")

    @property
    def n_blocks(self) -> int:
        return len(self.a_digits) // self.params.block_len


@dataclass(frozen=True)
class SamplePoint:
    """A cylinder representative materialized as exact rationals."""

    cylinder: CylinderId
    alpha: Fraction
    gamma: Fraction
    q_J: int
    q_Jm1: int
    alpha_diam: Fraction
    gamma_diam: Fraction
    reencode_ok: bool

    @property
    def depth(self) -> int:
        return len(self.cylinder.a_digits)


def materialize(cid: CylinderId) -> SamplePoint:
    """Exact (alpha, gamma) for a cylinder: alpha is the zero-tail value of
    the a-word, gamma the decode of the b-word; diameters bound how far any
    other point of the cylinder can sit."""
    word = CFWord(cid.a_digits, cid.params.M)
    table = convergents(word)
    J = len(word)
    qJ, qJm1 = table.q(J), table.q(J - 1)
    alpha = table.value()
    dig = OstrowskiDigits(word, cid.b_digits)
    gamma = decode_real(dig)
    alpha_diam = Fraction(1, qJ * (qJ + qJm1))
    n_b = sum(b * table.q(k) for k, b in enumerate(cid.b_digits))
    gamma_diam = n_b * alpha_diam + Fraction(1, qJ)
    redig, _res = encode_real(gamma, word)
    reencode_ok = redig.b == tuple(cid.b_digits)
    return SamplePoint(
        cylinder=cid,
        alpha=alpha,
        gamma=gamma,
        q_J=qJ,
        q_Jm1=qJm1,
        alpha_diam=alpha_diam,
        gamma_diam=gamma_diam,
        reencode_ok=reencode_ok,
    )


def sample_cylinder(
    model: BlockModel,
    n_blocks: int,
    stream: int,
    conditioning: bool = True,
) -> CylinderId:
    """Draw one depth-(j0 m N) cylinder id from its own RNG stream."""
    p = model.params
    rng = stream_generator(p.seed, stream)
    super_blocks = model.draw_superblocks(rng, n_blocks, conditioning)
    flat = super_blocks.reshape(-1)
    b = model.draw_b_digits(rng, flat)
    a_digits = tuple(int(x) for x in model.digits[flat].reshape(-1))
    b_digits = tuple(int(x) for x in b.reshape(-1))
    return CylinderId(p, a_digits, b_digits)


def sample_point(
    model: BlockModel,
    n_blocks: int,
    stream: int,
    conditioning: bool = True,
) -> SamplePoint:
    return materialize(sample_cylinder(model, n_blocks, stream, conditioning))


# -- cylinder measures and their two-sided bound ---------------------------


@dataclass(frozen=True)
class CylinderReport:
    nu: float
    lower: float
    upper: float
    sandwich_ok: bool
    in_E: bool


def cylinder_measure(
    model: BlockModel, cid: CylinderId, conditioning: bool = True
) -> CylinderReport:
    """nu(C) as the product of conditioned super-block weights, with the
    two-sided bound check.

    The bound orientation follows from 1 - 2 kappa < 0: conditioned blocks
    pin each log q_m sum inside the epsilon band, so
       2^-(j0-1) Q0^((1-2k)(1+2e)N) / T^(j0 N)
         <= nu(C) <=
       2^N Q0^((1-2k)(1-2e)N) / T^(j0 N),
    with Q0 = exp(j0 m sigma).
    """
    p = model.params
    N = cid.n_blocks
    word_ids = _word_ids_of(model, cid)
    in_E = True
    log_weight = 0.0
    for i in range(N):
        chunk = word_ids[i * p.j0 : (i + 1) * p.j0]
        lsum = float(model.log_q[chunk].sum())
        if not model.block_in_E(lsum):
            in_E = False
        log_weight += (1.0 - 2.0 * p.kappa) * lsum - p.j0 * math.log(model.T)
    if conditioning:
        if not in_E:
            return CylinderReport(0.0, 0.0, 0.0, True, False)
        nu = math.exp(log_weight) * model.c_lambda() ** N
    else:
        nu = math.exp(log_weight)

    x = 1.0 - 2.0 * p.kappa
    e = p.epsilon
    Q0 = math.exp(p.j0 * p.m * model.sigma)
    logT = math.log(model.T)
    lower = math.exp(
        -(p.j0 - 1) * math.log(2) + x * (1 + 2 * e) * N * math.log(Q0) - p.j0 * N * logT
    )
    upper = math.exp(N * math.log(2) + x * (1 - 2 * e) * N * math.log(Q0) - p.j0 * N * logT)
    ok = (lower <= nu <= upper) if (conditioning and in_E) else True
    return CylinderReport(nu, lower, upper, ok, in_E)


def _word_ids_of(model: BlockModel, cid: CylinderId) -> np.ndarray:
    """Map each m-segment of the cylinder's a-word to its table index."""
    p = model.params
    seg = np.asarray(cid.a_digits, dtype=np.int64).reshape(-1, p.m)
    radix = p.M ** np.arange(p.m - 1, -1, -1, dtype=np.int64)
    return ((seg - 1) * radix).sum(axis=1)


def enumerate_cells(model: BlockModel, guard: int = 10**5):
    """All single-m-block cells (a, b, weight) with positive weight."""
    p = model.params
    total = int(model.v.sum())
    if total > guard:
        raise GuardExceeded(f"{total} cells exceed the enumeration guard")
    cells = []
    for w in np.nonzero(model.v)[0]:
        word = CFWord(tuple(int(d) for d in model.digits[w]), p.M)
        weight = float(model.weights[w]) / model.v[w]
        for b in enumerate_V(word, p.R):
            cells.append((word.digits, b, weight))
    return cells


# -- denominator sandwich for conditioned samples ---------------------------


@dataclass(frozen=True)
class DenominatorCheck:
    q_J: int
    Q: float
    ok_qJ: bool
    ok_qJm1: bool


def denominator_sandwich(model: BlockModel, point: SamplePoint) -> DenominatorCheck:
    """Q^(1-2e) <= q_J <= Q^(1+2e) and q_{J-1} >= Q^(1-2e)/(2M), with
    Q = exp(J sigma); meaningful for conditioned samples."""
    p = model.params
    J = point.depth
    Q = math.exp(J * model.sigma)
    e = p.epsilon
    lo, hi = Q ** (1 - 2 * e), Q ** (1 + 2 * e)
    ok_qJ = lo <= point.q_J <= hi
    ok_qJm1 = point.q_Jm1 >= lo / (2 * p.M)
    return DenominatorCheck(point.q_J, Q, ok_qJ, ok_qJm1)


# -- conformance checklist ---------------------------------------------------


def conformance_checklist(model: BlockModel, conditioning: bool = True) -> dict:
    """Each paper hypothesis evaluated on the actual parameters; consumers
    must skip-with-notice any bound whose hypothesis is false."""
    p = model.params
    sigma = model.sigma
    report = solve_kappa(p.M, p.R, p.m, kappa_eval=p.kappa)
    checks = {
        "m_at_least_100": p.m >= 100,
        "T_m_greater_4": model.T > 4.0,
        "kappa_in_paper_range": 1.0 < p.kappa < 2.0,
        "kappa_below_kappa_star": p.kappa < report.kappa_star,
        "sigma_at_least_third": sigma >= 1.0 / 3.0,
        "m_conditions": max(math.log(2) / (p.m * sigma), 3.0 / p.m) < p.epsilon,
        "R_is_large": math.log(27) / (p.R * sigma) < p.epsilon,
    }
    if conditioning:
        checks["E_mass_exceeds_half"] = model.P_E() > 0.5
    checks["all_pass"] = all(checks.values())
    return checks
