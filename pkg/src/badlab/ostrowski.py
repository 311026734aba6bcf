"""Ostrowski numeration of integers and reals with respect to a finite word.

Integers n in [1, q_J) expand over the base (q_0, q_1, ...); reals gamma in
[-alpha, 1-alpha) expand over the signed base (D_0, D_1, ...).  Encoding is
greedy (largest base element first for integers; smallest-valid digit for
reals) and is validated against exhaustive enumeration at small scale in the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .contfrac import (
    CFWord,
    ConvergentTable,
    DepthError,
    DomainError,
    convergents,
    dist_to_int,
    error_numerators,
)


def legal_int_digits(c: tuple[int, ...], word: CFWord) -> bool:
    """Digit rules for integer expansions: c_1 < a_1, c_{k+1} <= a_{k+1},
    and c_{k+1} = a_{k+1} forces c_k = 0."""
    if len(c) > len(word):
        return False
    for k, digit in enumerate(c, start=1):
        if digit < 0:
            return False
        if k == 1:
            if digit >= word[1]:
                return False
        else:
            if digit > word[k]:
                return False
            if digit == word[k] and c[k - 2] != 0:
                return False
    return True


def legal_real_digits(b: tuple[int, ...], word: CFWord, strict_b1: bool = True) -> bool:
    """Digit rules for real expansions.

    With ``strict_b1`` (the default), b_1 <= a_1 - 1 as in the expansion of
    gamma; with it off, b_1 <= a_1 is tolerated (the wider range some
    constructions use before the constrained digit space prunes it).
    """
    if len(b) > len(word):
        return False
    for k, digit in enumerate(b, start=1):
        if digit < 0:
            return False
        top = word[1] - 1 if (k == 1 and strict_b1) else word[k]
        if digit > top:
            return False
        if k >= 2 and digit == word[k] and b[k - 2] != 0:
            return False
    return True


@dataclass(frozen=True)
class IntegerOstrowski:
    word: CFWord
    c: tuple[int, ...]
    n: int

    def __post_init__(self):
        if not legal_int_digits(self.c, self.word):
            raise DomainError(f"illegal integer digits {self.c}")

    def serialize(self) -> str:
        return f"# base {self.word.serialize()}\n" + ",".join(map(str, self.c))


@dataclass(frozen=True)
class OstrowskiDigits:
    word: CFWord
    b: tuple[int, ...]

    def __post_init__(self):
        if not legal_real_digits(self.b, self.word):
            raise DomainError(f"illegal real digits {self.b}")

    def serialize(self) -> str:
        return f"# base {self.word.serialize()}\n" + ",".join(map(str, self.b))


def encode_int(n: int, word: CFWord) -> IntegerOstrowski:
    """Greedy expansion of 1 <= n < q_J over the denominators of ``word``."""
    if n < 1:
        raise DomainError(f"n={n} must be >= 1")
    table = convergents(word)
    J = len(word)
    if n >= table.q(J):
        raise DepthError(f"n={n} >= q_J={table.q(J)}; extend the word")
    K = max(k for k in range(0, J) if table.q(k) <= n)
    digits = [0] * (K + 1)
    rem = n
    for k in range(K, -1, -1):
        digits[k], rem = divmod(rem, table.q(k))
    assert rem == 0
    return IntegerOstrowski(word, tuple(digits), n)


def decode_int(digits: IntegerOstrowski) -> int:
    table = convergents(digits.word)
    return sum(c * table.q(k) for k, c in enumerate(digits.c))


def encode_real(
    gamma: Fraction, word: CFWord
) -> tuple[OstrowskiDigits, Fraction]:
    """Greedy digits of gamma in [-alpha, 1-alpha) plus the exact residual.

    The residual gamma - sum b_{k+1} D_k satisfies |residual| <= |D_{J-1}|.
    Digit choice: the smallest b making the remaining tail representable,
    which keeps the carry rule satisfied automatically.
    """
    gamma = Fraction(gamma)
    table = convergents(word)
    J = len(word)
    alpha = table.value()
    if not -alpha <= gamma < 1 - alpha:
        raise DomainError(f"gamma={gamma} outside [-{alpha}, {1 - alpha})")
    qJ = table.q(J)
    nums = error_numerators(word)  # |D_k| = nums[k]/qJ

    import math

    digits = []
    # s_k = sgn(D_k) * (remaining tail); valid band is [-|D_k|, |D_{k-1}|].
    # Taking the smallest digit that keeps the next band reachable satisfies
    # the carry rule automatically (a forced b=a_{k+1} only follows b_k=0).
    s = gamma  # sgn(D_0) = +1
    for k in range(J):
        absd = Fraction(nums[k], qJ)
        absd_next = Fraction(nums[k + 1], qJ)
        b = max(0, math.ceil((s - absd_next) / absd))
        digits.append(b)
        s = b * absd - s
    dig = OstrowskiDigits(word, tuple(digits))
    residual = gamma - decode_real(dig)
    if abs(residual) > Fraction(nums[J - 1], qJ):
        raise AssertionError("residual bound violated; encoder bug")
    return dig, residual


def decode_real(digits: OstrowskiDigits) -> Fraction:
    """Exact sum b_{k+1} D_k over the word's depth."""
    table = convergents(digits.word)
    J = len(digits.word)
    qJ = table.q(J)
    nums = error_numerators(digits.word)
    total = sum(
        b * (nums[k] if k % 2 == 0 else -nums[k])
        for k, b in enumerate(digits.b)
    )
    return Fraction(total, qJ)


def decode(digits: Union[IntegerOstrowski, OstrowskiDigits]):
    if isinstance(digits, IntegerOstrowski):
        return decode_int(digits)
    return decode_real(digits)


@dataclass(frozen=True)
class NagReport:
    """Outcome of the digit-difference evaluation of ||n alpha - gamma||."""

    n: int
    m: Optional[int]  # smallest index with delta_{m+1} != 0; None if all zero
    delta: tuple[int, ...]
    S: Fraction
    dist_direct: Fraction  # exact ||n alpha - gamma|| for the truncated data
    dist_from_S: Fraction  # min(|S|, 1 - |S|)
    residual: Fraction  # encode_real residual of gamma
    bound_B: int
    lemma_ok: bool  # |dist_direct - dist_from_S| <= |residual|
    sign_ok: bool  # |S| = sgn(delta_{m+1} D_m) S
    corollary_ok: Optional[bool]  # dist <= 4B/q_m ; None when m is None
    degenerate: bool  # n alpha - gamma is an exact integer


def nag_evaluate(
    n: int,
    word: CFWord,
    gamma: Fraction,
    threshold: Optional[Fraction] = None,
) -> NagReport:
    """Compare the digit-difference distance formula against direct
    evaluation, exactly up to the encoding residual.

    Requires n < q_{J-2}; if ``threshold`` is given, the depth rule
    q_{J-1} >= max(10/threshold, 10 n) is enforced so residuals stay
    provably below it.
    """
    gamma = Fraction(gamma)
    table = convergents(word)
    J = len(word)
    if J < 3 or n >= table.q(J - 2):
        raise DepthError(f"need n < q_(J-2); n={n}")
    if threshold is not None:
        need = max(Fraction(10, 1) / threshold, Fraction(10 * n))
        if table.q(J - 1) < need:
            raise DepthError(
                f"q_(J-1)={table.q(J - 1)} below depth rule {need} "
                f"for threshold {threshold}"
            )
    alpha = table.value()

    int_digits = encode_int(n, word)
    real_digits, residual = encode_real(gamma, word)
    c = int_digits.c + (0,) * (J - len(int_digits.c))
    b = real_digits.b
    delta = tuple(ci - bi for ci, bi in zip(c, b))

    qJ = table.q(J)
    nums = error_numerators(word)

    m = next((k for k, d in enumerate(delta) if d != 0), None)

    x = n * alpha - gamma
    degenerate = x.denominator == 1
    dist_direct = dist_to_int(x)
    B = max((abs(d) for d in delta), default=0)

    if m is None:
        S = Fraction(0)
        dist_S = Fraction(0)
        sign_ok = True
        corollary_ok = None
    else:
        S = Fraction(
            sum(
                delta[k] * (nums[k] if k % 2 == 0 else -nums[k])
                for k in range(m, J)
            ),
            qJ,
        )
        dist_S = min(abs(S), 1 - abs(S))
        sgn_dm = 1 if m % 2 == 0 else -1
        sgn = 1 if delta[m] * sgn_dm > 0 else -1
        sign_ok = abs(S) == sgn * S
        corollary_ok = dist_direct <= Fraction(4 * B, table.q(m))

    lemma_ok = abs(dist_direct - dist_S) <= abs(residual)
    return NagReport(
        n=n,
        m=m,
        delta=delta,
        S=S,
        dist_direct=dist_direct,
        dist_from_S=dist_S,
        residual=residual,
        bound_B=B,
        lemma_ok=lemma_ok,
        sign_ok=sign_ok,
        corollary_ok=corollary_ok,
        degenerate=degenerate,
    )
