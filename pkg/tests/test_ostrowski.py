"""Ostrowski encoders against exhaustive enumeration and direct evaluation."""

import itertools
import random
from fractions import Fraction

import pytest

from badlab.contfrac import CFWord, DepthError, DomainError, convergents, dist_to_int, value
from badlab.ostrowski import (
    IntegerOstrowski,
    OstrowskiDigits,
    decode_int,
    decode_real,
    encode_int,
    encode_real,
    legal_int_digits,
    nag_evaluate,
)


def all_legal_int_strings(word):
    """Oracle: every digit string satisfying the integer rules, brute force."""
    ranges = []
    for k in range(1, len(word) + 1):
        top = word[k] - 1 if k == 1 else word[k]
        ranges.append(range(0, top + 1))
    out = []
    for combo in itertools.product(*ranges):
        ok = all(
            not (combo[k] == word[k + 1] and combo[k - 1] != 0)
            for k in range(1, len(combo))
        )
        if ok:
            out.append(combo)
    return out


def test_expansion_bijection_small_words():
    # legal strings decode bijectively onto [0, q_J)
    rng = random.Random(5)
    for _ in range(25):
        digits = [rng.randint(1, 3) for _ in range(rng.randint(2, 6))]
        word = CFWord(digits)
        t = convergents(word)
        qJ = t.q(len(word))
        decodes = sorted(
            sum(c * t.q(k) for k, c in enumerate(s)) for s in all_legal_int_strings(word)
        )
        assert decodes == list(range(qJ))


def test_encode_int_example_fib():
    word = CFWord([1] * 12)
    enc = encode_int(10, word)
    assert enc.c == (0, 0, 1, 0, 0, 1)
    assert decode_int(enc) == 10
    # uniqueness oracle: exactly one legal string sums to 10
    t = convergents(word)
    matches = [
        s
        for s in all_legal_int_strings(CFWord([1] * 8))
        if sum(c * t.q(k) for k, c in enumerate(s)) == 10
    ]
    assert len(matches) == 1


def test_encode_int_base_elements():
    word = CFWord([2, 3, 2, 3, 2])
    t = convergents(word)
    for k in range(1, 5):
        enc = encode_int(t.q(k), word)
        expected = tuple([0] * k + [1])
        assert enc.c == expected


def test_encode_int_example_4():
    word = CFWord([1] * 8)
    enc = encode_int(4, word)
    assert enc.c == (0, 1, 0, 1)


def test_encode_int_domain_errors():
    word = CFWord([2, 2, 2])
    with pytest.raises(DomainError):
        encode_int(0, word)
    with pytest.raises(DepthError):
        encode_int(12, word)  # q_3 = 12


def test_int_roundtrip_random():
    rng = random.Random(9)
    for _ in range(20):
        digits = [rng.randint(1, 10) for _ in range(12)]
        word = CFWord(digits)
        qJ = convergents(word).q(12)
        for _ in range(50):
            n = rng.randint(1, qJ - 1)
            assert decode_int(encode_int(n, word)) == n


def test_illegal_digits_rejected():
    word = CFWord([2, 2, 2])
    with pytest.raises(DomainError):
        IntegerOstrowski(word, (2, 0, 0), 4)  # c_1 must be < a_1
    with pytest.raises(DomainError):
        IntegerOstrowski(word, (1, 2, 1), 0)  # c_2 = a_2 needs c_1 = 0
    with pytest.raises(DomainError):
        OstrowskiDigits(word, (0, 2, 2))  # b_3 = a_3 needs b_2 = 0


def test_encode_real_single_term():
    word = CFWord([4, 2, 3, 2])
    alpha = value(word)
    for b in range(1, 4):
        dig, res = encode_real(b * alpha, word)
        assert dig.b == (b, 0, 0, 0)
        assert res == 0


def test_encode_real_zero():
    word = CFWord([3, 1, 4, 1])
    dig, res = encode_real(Fraction(0), word)
    assert dig.b == (0, 0, 0, 0)
    assert res == 0


def test_encode_real_left_endpoint():
    # gamma = -alpha takes digits a_{k} at alternating positions
    word = CFWord([2, 3, 2, 3, 2, 3])
    alpha = value(word)
    dig, res = encode_real(-alpha, word)
    assert dig.b == (0, 3, 0, 3, 0, 3)
    assert abs(res) <= abs_D(word, 5)


def abs_D(word, k):
    t = convergents(word)
    return abs(t.q(k) * t.value() - t.p(k))


def test_encode_real_roundtrip_random():
    rng = random.Random(31)
    for _ in range(30):
        digits = [rng.randint(1, 6) for _ in range(rng.randint(3, 12))]
        word = CFWord(digits)
        alpha = value(word)
        J = len(word)
        for _ in range(20):
            # random gamma in [-alpha, 1-alpha)
            num = rng.randint(0, 10**6 - 1)
            gamma = -alpha + Fraction(num, 10**6)
            dig, res = encode_real(gamma, word)
            assert decode_real(dig) + res == gamma
            assert abs(res) <= abs_D(word, J - 1)


def test_encode_real_domain():
    word = CFWord([2, 2, 2])
    alpha = value(word)
    with pytest.raises(DomainError):
        encode_real(1 - alpha, word)  # right endpoint excluded
    with pytest.raises(DomainError):
        encode_real(-alpha - Fraction(1, 100), word)


def test_decode_real_direct():
    word = CFWord([2, 2, 2])
    t = convergents(word)
    alpha = t.value()
    dig = OstrowskiDigits(word, (1, 0, 1))
    D0 = alpha
    D2 = t.q(2) * alpha - t.p(2)
    assert decode_real(dig) == D0 + D2


def test_nag_exhaustive_small():
    word = CFWord([2] * 18)
    gamma = Fraction(1, 3)
    for n in range(1, 120):
        rep = nag_evaluate(n, word, gamma)
        assert rep.lemma_ok
        assert rep.sign_ok
        assert not rep.degenerate
        if rep.m is not None:
            assert rep.corollary_ok
        # direct distance agrees with an independent evaluation
        assert rep.dist_direct == dist_to_int(n * value(word) - gamma)


def test_nag_matching_digits():
    # n whose digits match gamma's leading digits gives a small distance
    word = CFWord([3] * 20)
    t = convergents(word)
    gamma_digits = (1, 2, 0, 1, 1)
    gamma = decode_real(OstrowskiDigits(word, gamma_digits + (0,) * 15))
    n = sum(c * t.q(k) for k, c in enumerate(gamma_digits))
    rep = nag_evaluate(n, word, gamma)
    assert rep.m is None or rep.m >= len(gamma_digits)
    assert rep.dist_direct <= Fraction(4 * max(1, rep.bound_B), t.q(len(gamma_digits)))


def test_nag_depth_guard():
    word = CFWord([2] * 6)
    with pytest.raises(DepthError):
        nag_evaluate(10**6, word, Fraction(1, 3))
    with pytest.raises(DepthError):
        nag_evaluate(3, word, Fraction(1, 3), threshold=Fraction(1, 10**9))


def test_legal_int_digits_oracle_agreement():
    word = CFWord([2, 3, 2])
    brute = set(all_legal_int_strings(word))
    for combo in itertools.product(range(4), repeat=3):
        assert legal_int_digits(combo, word) == (combo in brute)
