"""Exact continued-fraction arithmetic over finite words.

A real number is always represented here as the exact rational value of a
finite word of partial quotients; all identities are checked in big-integer
or big-rational arithmetic with zero tolerance.  Indices follow the usual
convention p_{-1}=1, p_0=0, q_{-1}=0, q_0=1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class DepthError(ValueError):
    """An operation asked for an index beyond the word's depth."""


class DomainError(ValueError):
    """An argument lies outside the operation's domain."""


def parse_word(text: str) -> tuple[int, ...]:
    """Parse a comma-separated digit string like ``"1,2,3"``."""
    return tuple(int(part) for part in text.strip().split(","))


def format_word(digits: Sequence[int]) -> str:
    return ",".join(str(d) for d in digits)


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` (or a bare integer) into a Fraction."""
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class CFWord:
    """A finite word of partial quotients, optionally capped by M."""

    digits: tuple[int, ...]
    cap: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if len(self.digits) < 1:
            raise DomainError("word must have at least one digit")
        if any(d < 1 for d in self.digits):
            raise DomainError("partial quotients must be >= 1")
        if self.cap is not None and any(d > self.cap for d in self.digits):
            raise DomainError(f"digit exceeds cap M={self.cap}")

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, k: int) -> int:
        """1-indexed partial quotient a_k."""
        if not 1 <= k <= len(self.digits):
            raise DepthError(f"index {k} outside word of length {len(self.digits)}")
        return self.digits[k - 1]

    def reversed(self) -> "CFWord":
        return CFWord(self.digits[::-1], self.cap)

    def prefix(self, k: int) -> "CFWord":
        if not 1 <= k <= len(self.digits):
            raise DepthError(f"prefix length {k} invalid")
        return CFWord(self.digits[:k], self.cap)

    def suffix(self, k: int) -> "CFWord":
        """The word (a_{k+1}, ..., a_J); requires k < J."""
        if not 0 <= k < len(self.digits):
            raise DepthError(f"suffix start {k} invalid")
        return CFWord(self.digits[k:], self.cap)

    def concat(self, other: "CFWord") -> "CFWord":
        cap = None
        if self.cap is not None and other.cap is not None:
            cap = max(self.cap, other.cap)
        return CFWord(self.digits + other.digits, cap)

    def serialize(self) -> str:
        return format_word(self.digits)

    @classmethod
    def parse(cls, text: str, cap: Optional[int] = None) -> "CFWord":
        return cls(parse_word(text), cap)


@dataclass(frozen=True)
class ConvergentTable:
    """Exact numerators p_{-1}..p_J and denominators q_{-1}..q_J."""

    word: CFWord
    _p: tuple[int, ...] = field(repr=False)
    _q: tuple[int, ...] = field(repr=False)

    def p(self, k: int) -> int:
        if not -1 <= k <= len(self.word):
            raise DepthError(f"p index {k} outside [-1, {len(self.word)}]")
        return self._p[k + 1]

    def q(self, k: int) -> int:
        if not -1 <= k <= len(self.word):
            raise DepthError(f"q index {k} outside [-1, {len(self.word)}]")
        return self._q[k + 1]

    @property
    def depth(self) -> int:
        return len(self.word)

    def value(self) -> Fraction:
        """The exact value p_J/q_J of the full word."""
        return Fraction(self.p(self.depth), self.q(self.depth))

    def convergent(self, k: int) -> Fraction:
        return Fraction(self.p(k), self.q(k))


def convergents(word: CFWord) -> ConvergentTable:
    """Run the two-term recursion for the whole word."""
    p = [1, 0]
    q = [0, 1]
    for a in word.digits:
        p.append(a * p[-1] + p[-2])
        q.append(a * q[-1] + q[-2])
    return ConvergentTable(word, tuple(p), tuple(q))


def value(word: CFWord) -> Fraction:
    return convergents(word).value()


def fibonacci(k: int) -> int:
    """F_1 = F_2 = 1 convention; F_0 = 0."""
    if k <= 0:
        return 0
    a, b = 0, 1
    for _ in range(k - 1):
        a, b = b, a + b
    return b


def dist_to_int(x: Fraction) -> Fraction:
    """Exact distance from x to the nearest integer."""
    x = Fraction(x)
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def error_numerators(word: CFWord) -> tuple[int, ...]:
    """Integer numerators n_0..n_J with D_k = (-1)^k n_k / q_J.

    n_k is the top denominator of the suffix word (a_{k+2},...,a_J); the
    backward recursion n_k = a_{k+2} n_{k+1} + n_{k+2} runs in plain ints,
    which keeps identity checks exact without Fraction overhead.
    """
    J = len(word)
    n = [0] * (J + 2)
    n[J] = 0
    n[J - 1] = 1 if J >= 1 else 0
    for k in range(J - 2, -1, -1):
        n[k] = word[k + 2] * n[k + 1] + n[k + 2]
    return tuple(n[: J + 1])


@dataclass(frozen=True)
class ApproxErrorTable:
    """Errors D_k = q_k alpha - p_k and remainders r_k for a finite word."""

    word: CFWord
    alpha: Fraction
    D: tuple[Fraction, ...]  # D_0 .. D_{J-1}
    r: tuple[Fraction, ...]  # r_0 .. r_{J-1}

    def check_invariants(self) -> None:
        table = convergents(self.word)
        J = len(self.word)
        prod = Fraction(1)
        for k in range(J):
            d = self.D[k]
            if d != table.q(k) * self.alpha - table.p(k):
                raise AssertionError(f"D_{k} mismatch")
            if (d > 0) != (k % 2 == 0) or d == 0:
                raise AssertionError(f"sign of D_{k} wrong")
            if 1 <= k <= J - 2 and abs(d) > Fraction(1, table.q(k + 1)):
                raise AssertionError(f"|D_{k}| > 1/q_{k + 1}")
            prod *= self.r[k]
            if d != (-1) ** k * prod:
                raise AssertionError(f"remainder product fails at {k}")


def approx_errors(word: CFWord) -> ApproxErrorTable:
    """Exact D_k and r_k tables; requires depth >= 2."""
    J = len(word)
    if J < 2:
        raise DomainError("approx_errors needs a word of length >= 2")
    table = convergents(word)
    alpha = table.value()
    qJ = table.q(J)
    nums = error_numerators(word)
    D = tuple(Fraction((-1) ** k * nums[k], qJ) for k in range(J))
    # r_k = value of the suffix (a_{k+1},...,a_J); |D_k| = nums[k]/qJ gives
    # r_k = |D_k|/|D_{k-1}| with |D_{-1}| = 1, so one division per index.
    r = []
    prev = qJ  # numerator of |D_{k-1}| scaled by qJ; |D_{-1}| = qJ/qJ
    for k in range(J):
        r.append(Fraction(nums[k], prev))
        prev = nums[k]
    return ApproxErrorTable(word, alpha, D, tuple(r))


def compose_tail(word: CFWord, t: Fraction) -> Fraction:
    """(p_J + t p_{J-1})/(q_J + t q_{J-1}); exact concatenation if t is a
    continuation word's value."""
    t = Fraction(t)
    if not 0 <= t < 1:
        raise DomainError(f"tail {t} outside [0,1)")
    table = convergents(word)
    J = len(word)
    return (table.p(J) + t * table.p(J - 1)) / (table.q(J) + t * table.q(J - 1))


def endpoint_partial_sums(word: CFWord, k: int) -> list[tuple[Fraction, Fraction]]:
    """Exact partial sums of sum_i a_{k+2i} |D_{k+2i-1}| with remainders.

    Each entry is (partial_sum, remainder); partial_sum + remainder equals
    |D_{k-2}| exactly, with remainder = |D_{k+2t}| after t+1 terms.  Valid
    for 1 <= k <= J-1; D_{-1} = -1 is used for k = 1.
    """
    J = len(word)
    if not 1 <= k <= J - 1:
        raise DepthError(f"k={k} outside [1, {J - 1}]")
    table = convergents(word)
    qJ = table.q(J)
    nums = error_numerators(word)

    def absD(i: int) -> Fraction:
        if i == -1:
            return Fraction(1)
        return Fraction(nums[i], qJ)

    total = absD(k - 2)
    out = []
    s = Fraction(0)
    i = 0
    while k + 2 * i <= J:
        s += word[k + 2 * i] * absD(k + 2 * i - 1)
        out.append((s, total - s))
        i += 1
    return out


@dataclass(frozen=True)
class IdentityReport:
    """Per-identity pass flags from one word."""

    word: CFWord
    recursion: bool
    determinant: bool
    coprime: bool
    reversal: bool
    concatenation: bool
    inverse_ratio: bool
    q_size: bool
    fibonacci_growth: bool
    d_signs: bool
    d_size: bool
    d_product: bool
    endpoint_sums: bool
    tail_relation: bool

    def all_pass(self) -> bool:
        return all(
            getattr(self, name)
            for name in (
                "recursion",
                "determinant",
                "coprime",
                "reversal",
                "concatenation",
                "inverse_ratio",
                "q_size",
                "fibonacci_growth",
                "d_signs",
                "d_size",
                "d_product",
                "endpoint_sums",
                "tail_relation",
            )
        )

    def as_dict(self) -> dict:
        return {
            name: bool(getattr(self, name))
            for name in self.__dataclass_fields__
            if name != "word"
        }


def identity_suite(word: CFWord, split: Optional[int] = None) -> IdentityReport:
    """Check the full identity battery exactly; requires depth >= 2.

    ``split`` selects the tail-relation split point J' (default J//2).
    """
    J = len(word)
    if J < 2:
        raise DomainError("identity_suite needs depth >= 2")
    table = convergents(word)
    import math

    recursion = all(
        table.p(k + 1) == word[k + 1] * table.p(k) + table.p(k - 1)
        and table.q(k + 1) == word[k + 1] * table.q(k) + table.q(k - 1)
        for k in range(0, J)
    )
    determinant = all(
        table.p(k - 1) * table.q(k) - table.p(k) * table.q(k - 1) == (-1) ** k
        for k in range(1, J + 1)
    )
    coprime = all(math.gcd(table.p(k), table.q(k)) == 1 for k in range(1, J + 1))

    reversal = convergents(word.reversed()).q(J) == table.q(J)

    concat_ok = True
    for k in range(1, J):
        qk = convergents(word.prefix(k)).q(k)
        ql = convergents(word.suffix(k)).q(J - k)
        ratio = Fraction(table.q(J), qk * ql)
        if not 1 <= ratio <= 2:
            concat_ok = False
            break

    inverse_ratio = all(
        Fraction(table.q(k - 1), table.q(k)) == value(word.prefix(k).reversed())
        for k in range(1, J + 1)
    )

    q_size = all(
        2 ** (k - 2) <= table.q(k) ** 2 for k in range(1, J + 1)
    ) and all(
        table.q(k) <= prod_plus_one(word.digits[:k]) for k in range(1, J + 1)
    )

    fibonacci_growth = all(
        table.q(m + k) >= fibonacci(k) * table.q(m)
        for m in range(0, J + 1)
        for k in range(0, J + 1 - m)
    )

    errs = approx_errors(word)
    d_signs = all((errs.D[k] > 0) == (k % 2 == 0) for k in range(J))
    d_size = all(
        abs(errs.D[k]) <= Fraction(1, table.q(k + 1)) for k in range(1, J - 1)
    )
    prod = Fraction(1)
    d_product = True
    for k in range(J):
        prod *= errs.r[k]
        if errs.D[k] != (-1) ** k * prod:
            d_product = False
            break

    endpoint_ok = True
    for k in range(1, J):
        for s, rem in endpoint_partial_sums(word, k):
            if rem < 0:
                endpoint_ok = False

    tail_relation = check_tail_relation(word, split)

    return IdentityReport(
        word=word,
        recursion=recursion,
        determinant=determinant,
        coprime=coprime,
        reversal=reversal,
        concatenation=concat_ok,
        inverse_ratio=inverse_ratio,
        q_size=q_size,
        fibonacci_growth=fibonacci_growth,
        d_signs=d_signs,
        d_size=d_size,
        d_product=d_product,
        endpoint_sums=endpoint_ok,
        tail_relation=tail_relation,
    )


def prod_plus_one(digits: Iterable[int]) -> int:
    out = 1
    for d in digits:
        out *= d + 1
    return out


def check_tail_relation(word: CFWord, split: Optional[int] = None) -> bool:
    """D_k(t) = -D_{J'+k}(alpha) / D_{J'-1}(alpha) for the suffix value t.

    Exact over k = 0..J-J'; both sides are rationals with D_{J-J'}(t) = 0
    matching D_J(alpha) = 0.
    """
    J = len(word)
    if split is None:
        split = max(1, J // 2)
    if not 1 <= split < J:
        raise DomainError(f"split {split} outside [1, {J - 1}]")
    tail = word.suffix(split)
    t = value(tail)
    table = convergents(word)
    qJ = table.q(J)
    nums = error_numerators(word)

    tail_table = convergents(tail)
    tail_nums = error_numerators(tail)
    Jt = len(tail)
    qt = tail_table.q(Jt)

    def D_alpha(k: int) -> Fraction:
        return Fraction((-1) ** k * nums[k], qJ)

    def D_tail(k: int) -> Fraction:
        return Fraction((-1) ** k * tail_nums[k], qt)

    denom = D_alpha(split - 1)
    for k in range(0, Jt + 1):
        lhs = D_tail(k) if k < Jt else Fraction(0)
        top = D_alpha(split + k) if split + k < J else Fraction(0)
        if lhs != -top / denom:
            return False
    return True


def bad_lower_bound_check(
    word: CFWord, exhaustive_limit: int = 2000
) -> tuple[bool, bool]:
    """Check ||n p_J/q_J|| >= 1/(2(M+1)n) for 1 <= n < q_J/2.

    Returns (exhaustive_ok, block_ok).  The exhaustive part verifies n up to
    min(exhaustive_limit, q_J/2 - 1) directly on numerators.  The block part
    certifies the remaining range: for each k, every n with q_k <= n < q_{k+1}
    has ||n alpha|| >= |D_k| (best-approximation step), so it suffices that
    2 (M+1) (q_{k+1} - 1) |D_k| >= 1 holds for each k, with |D_k| = n_k/q_J.
    """
    if word.cap is None:
        raise DomainError("bad_lower_bound_check needs a capped word")
    M = word.cap
    table = convergents(word)
    J = len(word)
    qJ = table.q(J)
    pJ = table.p(J)
    half = (qJ - 1) // 2

    exhaustive_ok = True
    for n in range(1, min(exhaustive_limit, half) + 1):
        r = (n * pJ) % qJ
        # ||n alpha|| = min(r, qJ - r)/qJ ; inequality cross-multiplied
        if 2 * (M + 1) * n * min(r, qJ - r) < qJ:
            exhaustive_ok = False
            break

    nums = error_numerators(word)
    block_ok = True
    for k in range(0, J):
        upper = min(table.q(k + 1) - 1, half)
        if upper < table.q(k):
            continue
        # |D_k| = nums[k]/qJ ; require 2(M+1) * upper * |D_k| >= 1
        if 2 * (M + 1) * upper * nums[k] < qJ:
            block_ok = False
            break
    return exhaustive_ok, block_ok
