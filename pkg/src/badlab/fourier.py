"""Monte-Carlo transform estimates and ball-mass scans for the product measure.

The fast sampler materializes (alpha, gamma) in float64 from exact integer
state: convergents run forward in int64, the error numerators run backward
in int64, and depths are extended until every lane's q_J clears a guard
that keeps phase truncation error an order of magnitude below the Monte
Carlo standard error.  All integers stay below 2^53 so the final float
divisions are exact-to-rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .digitspace import GuardExceeded
from .measure import BlockModel
from .rng import CHUNK, STREAM_FOURIER, STREAM_FROSTMAN, map_chunks, stream_generator

INT_SAFE = 2**53


@dataclass(frozen=True)
class FourierEstimate:
    k: tuple[int, int]
    value: complex
    stderr: float
    S: int


def _min_block_q(model: BlockModel) -> int:
    return int(model.q[model.v > 0].min())


def _max_block_q(model: BlockModel) -> int:
    return int(model.q[model.v > 0].max())


def required_q(k_inf: int, S: int) -> int:
    """Depth guard: q_J past this keeps 2 pi |k| (cylinder diameter) below
    a tenth of the 1/sqrt(S) standard error."""
    return max(1000, math.ceil(80 * math.pi * max(1, k_inf) * math.sqrt(S)))


def sample_pairs_float(
    model: BlockModel,
    S: int,
    q_min: int,
    stream_base: int,
    conditioning: bool = True,
    threads: int = 1,
):
    """S lanes of (alpha, gamma, q_J) with q_J >= q_min, chunk-deterministic."""
    p = model.params
    L = p.block_len
    max_bq = _max_block_q(model)
    if 2 * q_min * max_bq >= INT_SAFE:
        raise GuardExceeded(
            f"depth guard q_min={q_min} would overflow exact float64 integers"
        )
    min_bq = _min_block_q(model)
    max_blocks = max(1, math.ceil(math.log(q_min) / math.log(min_bq))) + 1
    max_depth = max_blocks * L

    def run_chunk(start, stop, chunk_idx):
        n = stop - start
        rng = stream_generator(p.seed, stream_base + chunk_idx)
        a_buf = np.ones((n, max_depth), dtype=np.int64)
        b_buf = np.zeros((n, max_depth), dtype=np.int64)
        qJ = np.ones(n, dtype=np.int64)
        qJm1 = np.zeros(n, dtype=np.int64)
        pJ = np.zeros(n, dtype=np.int64)
        pJm1 = np.ones(n, dtype=np.int64)
        depth = np.zeros(n, dtype=np.int64)
        active = np.arange(n)
        col = 0
        while len(active):
            blocks = model.draw_superblocks(rng, len(active) * 1, conditioning)
            # one super-block (j0 words) per active lane per round
            words = blocks.reshape(len(active), p.j0)
            flat = words.reshape(-1)
            digs = model.digits[flat].reshape(len(active), L)
            bdigs = model.draw_b_digits(rng, flat).reshape(len(active), L)
            a_buf[active, col : col + L] = digs
            b_buf[active, col : col + L] = bdigs
            for j in range(L):
                a = digs[:, j]
                qJ_new = a * qJ[active] + qJm1[active]
                pJ_new = a * pJ[active] + pJm1[active]
                qJm1[active] = qJ[active]
                pJm1[active] = pJ[active]
                qJ[active] = qJ_new
                pJ[active] = pJ_new
            depth[active] += L
            col += L
            active = active[qJ[active] < q_min]
            if col >= max_depth and len(active):
                raise GuardExceeded("depth buffer exhausted before q_min reached")

        # backward error numerators, handling per-lane depths
        maxJ = int(depth.max())
        n_kp1 = np.zeros(n, dtype=np.int64)
        n_kp2 = np.zeros(n, dtype=np.int64)
        gamma_num = np.zeros(n, dtype=np.int64)
        for k in range(maxJ - 1, -1, -1):
            is_last = depth == k + 1
            inside = depth > k + 1
            a_next = a_buf[:, min(k + 1, max_depth - 1)]
            n_k = np.where(
                is_last, 1, np.where(inside, a_next * n_kp1 + n_kp2, 0)
            )
            sign = 1 if k % 2 == 0 else -1
            contrib = np.where(depth > k, sign * b_buf[:, k] * n_k, 0)
            gamma_num += contrib
            n_kp2 = np.where(depth > k, n_kp1, 0)
            n_kp1 = n_k
        alpha = pJ.astype(np.float64) / qJ.astype(np.float64)
        gamma = gamma_num.astype(np.float64) / qJ.astype(np.float64)
        return alpha, gamma, qJ

    chunks = map_chunks(run_chunk, S, threads=threads)
    alpha = np.concatenate([c[0] for c in chunks])
    gamma = np.concatenate([c[1] for c in chunks])
    qJ = np.concatenate([c[2] for c in chunks])
    return alpha, gamma, qJ


def fourier_estimate(
    model: BlockModel,
    ks: list[tuple[int, int]],
    S: int,
    conditioning: bool = True,
    threads: int = 1,
    stream_base: int = STREAM_FOURIER,
) -> list[FourierEstimate]:
    """Estimates of the transform at each frequency from one shared sample
    set; stderr is the conservative 1/sqrt(S)."""
    if S < 10**3:
        raise GuardExceeded("need at least 10^3 samples")
    k_inf = max((max(abs(k1), abs(k2)) for k1, k2 in ks), default=1)
    q_min = required_q(k_inf, S)
    alpha, gamma, _ = sample_pairs_float(
        model, S, q_min, stream_base, conditioning, threads
    )
    out = []
    stderr = 1.0 / math.sqrt(S)
    for k1, k2 in ks:
        phases = np.exp(-2j * np.pi * (k1 * alpha + k2 * gamma))
        val = complex(phases.mean())
        out.append(FourierEstimate((k1, k2), val, stderr, S))
    return out


# -- ball-mass scan ----------------------------------------------------------


@dataclass(frozen=True)
class FrostmanReport:
    radii: tuple[float, ...]
    max_mass: tuple[float, ...]
    slope: float
    theoretical_exponent: float
    fitted_c: float
    S: int
    n_probes: int


def ball_mass_scan(points: np.ndarray, radii, n_probes: int = 256):
    """Max over probe centers of the fraction of points inside the sup-norm
    ball of each radius; probes are a deterministic stride of the points."""
    S = len(points)
    stride = max(1, S // n_probes)
    probes = points[::stride][:n_probes]
    out = []
    for r in radii:
        inside = (
            (np.abs(points[None, :, 0] - probes[:, None, 0]) <= r)
            & (np.abs(points[None, :, 1] - probes[:, None, 1]) <= r)
        ).sum(axis=1)
        out.append(inside.max() / S)
    return np.array(out)


def mass_slope(radii, masses) -> float:
    """Least-squares slope of log mass against log radius (positive masses)."""
    r = np.asarray(radii, dtype=float)
    m = np.asarray(masses, dtype=float)
    keep = m > 0
    if keep.sum() < 2:
        return float("nan")
    coeffs = np.polyfit(np.log(r[keep]), np.log(m[keep]), 1)
    return float(coeffs[0])


def frostman_scan(
    model: BlockModel,
    S: int,
    radii=None,
    n_probes: int = 256,
    conditioning: bool = True,
    threads: int = 1,
    stream_base: int = STREAM_FROSTMAN,
) -> FrostmanReport:
    if S < 10**4:
        raise GuardExceeded("need at least 10^4 samples for the scan")
    if radii is None:
        radii = [2.0 ** (-j) for j in range(2, 10)]
    q_min = max(1000, math.ceil(100.0 / min(radii)))
    alpha, gamma, _ = sample_pairs_float(
        model, S, q_min, stream_base, conditioning, threads
    )
    pts = np.stack([alpha, gamma], axis=1)
    masses = ball_mass_scan(pts, radii, n_probes)
    p = model.params
    expo = 2 * p.kappa - 2 - 4 * (2 - p.kappa) * p.epsilon
    with np.errstate(divide="ignore"):
        ratios = masses / np.power(radii, expo)
    return FrostmanReport(
        radii=tuple(float(r) for r in radii),
        max_mass=tuple(float(x) for x in masses),
        slope=mass_slope(radii, masses),
        theoretical_exponent=expo,
        fitted_c=float(np.nanmax(ratios)),
        S=S,
        n_probes=n_probes,
    )
