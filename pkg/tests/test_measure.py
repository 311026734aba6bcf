"""Block measure, conditioning, cylinder bounds, sampler marginals."""

import math
from fractions import Fraction

import numpy as np
import pytest

from badlab.contfrac import CFWord, value
from badlab.digitspace import DigitSpaceParams, check_membership
from badlab.measure import (
    BlockModel,
    CylinderId,
    MeasureParams,
    conformance_checklist,
    cylinder_measure,
    denominator_sandwich,
    enumerate_cells,
    materialize,
    sample_cylinder,
    sample_point,
)
from badlab.ostrowski import encode_real


PARAMS = MeasureParams(M=2, R=3, m=3, kappa=0.6, epsilon=0.2, j0=1, seed=42)


@pytest.fixture(scope="module")
def model():
    return BlockModel(PARAMS)


def test_block_weights_closed_form(model):
    T = 8**-0.2 + 2 * 12**-0.2
    assert abs(model.T - T) < 1e-12
    cells = enumerate_cells(model)
    assert len(cells) == 3
    by_word = {}
    for a, b, w in cells:
        by_word.setdefault(a, []).append((b, w))
    assert abs(sum(w for _, _, w in cells) - 1.0) < 1e-12
    assert abs(by_word[(2, 1, 2)][0][1] - 8**-0.2 / T) < 1e-12
    for _, w in by_word[(2, 2, 2)]:
        assert abs(w - 12**-0.2 / T) < 1e-12


def test_conditioning_whole_space(model):
    # both log q values sit within 20% of the mean, so E is everything
    assert model.P_E() == pytest.approx(1.0, abs=1e-12)
    assert model.c_lambda() == pytest.approx(1.0, abs=1e-12)


def test_level1_cylinders(model):
    T = model.T
    cells = enumerate_cells(model)
    nus = []
    for a, b, _ in cells:
        cid = CylinderId(PARAMS, a, b)
        rep = cylinder_measure(model, cid)
        nus.append(rep.nu)
        assert rep.in_E
        assert rep.sandwich_ok, (a, b, rep)
        assert rep.lower <= rep.nu <= rep.upper
    assert abs(math.fsum(nus) - 1.0) < 1e-12
    assert abs(nus[0] - 0.3516) < 1e-4 or abs(max(nus) - 0.3516) < 1e-4


def test_level2_cylinders_sum_and_sandwich(model):
    cells = enumerate_cells(model)
    nus = []
    for a1, b1, _ in cells:
        for a2, b2, _ in cells:
            cid = CylinderId(PARAMS, a1 + a2, b1 + b2)
            rep = cylinder_measure(model, cid)
            nus.append(rep.nu)
            assert rep.sandwich_ok
    assert len(nus) == 9
    assert abs(math.fsum(nus) - 1.0) < 1e-12


def test_cylinder_rejects_bad_pair():
    with pytest.raises(Exception):
        CylinderId(PARAMS, (2, 1, 2), (0, 0, 1))  # b_1 must be >= 1


def test_sample_words_are_admissible(model):
    space = DigitSpaceParams(PARAMS.M, PARAMS.R)
    for stream in range(20):
        cid = sample_cylinder(model, n_blocks=4, stream=stream)
        assert check_membership(cid.a_digits, cid.b_digits, space)


def test_sample_point_materialization(model):
    pt = sample_point(model, n_blocks=3, stream=0)
    word = CFWord(pt.cylinder.a_digits, PARAMS.M)
    assert pt.alpha == value(word)
    # gamma decodes inside the fundamental domain
    assert -pt.alpha <= pt.gamma < 1 - pt.alpha
    assert pt.reencode_ok
    # denominators: q_J of the concatenated word
    assert pt.q_J > pt.q_Jm1 > 0


def test_sampler_determinism(model):
    a = sample_cylinder(model, n_blocks=5, stream=7)
    b = sample_cylinder(model, n_blocks=5, stream=7)
    assert a == b
    c = sample_cylinder(model, n_blocks=5, stream=8)
    assert c != a


def test_marginals_match_weights(model):
    # frequency of the (2,1,2) block over many draws within 3 stderr
    n = 20000
    rng_draws = model.draw_superblocks(
        __import__("badlab.rng", fromlist=["stream_generator"]).stream_generator(
            PARAMS.seed, 12345
        ),
        n,
        conditioning=True,
    )
    freq = float(np.mean(model.q[rng_draws[:, 0]] == 8))
    p = 8**-0.2 / model.T
    stderr = math.sqrt(p * (1 - p) / n)
    assert abs(freq - p) <= 3 * stderr


def test_denominator_sandwich_conditioned(model):
    for stream in range(10):
        pt = sample_point(model, n_blocks=6, stream=stream)
        check = denominator_sandwich(model, pt)
        assert check.ok_qJ and check.ok_qJm1


def test_conformance_checklist(model):
    checks = conformance_checklist(model)
    # desk scale: m is small, T_m below 4 at this kappa
    assert checks["m_at_least_100"] is False
    assert checks["kappa_below_kappa_star"] is True
    assert checks["E_mass_exceeds_half"] is True
    assert checks["sigma_at_least_third"] is True
    assert checks["kappa_in_paper_range"] is False  # 0.6 < 1


def test_no_conditioning_mode(model):
    cells = enumerate_cells(model)
    a, b, w = cells[0]
    cid = CylinderId(PARAMS, a, b)
    rep = cylinder_measure(model, cid, conditioning=False)
    assert rep.nu == pytest.approx(w, rel=1e-12)
