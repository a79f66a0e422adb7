"""Beta-expansions of one, the code Y_beta and the language of S_beta.

Digit words are plain tuples of non-negative ints.  Digits can be larger
than 9, so words are always rendered comma separated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from .algebraic import AlgebraicReal, ApproximateReal, FieldElement, as_exact_base, floor_and_frac
from .errors import ApproximateModeInconclusive, HorizonExceeded, NotAdmissible, UnknownTail

DEFAULT_HORIZON = 10_000

DigitWord = tuple


def parse_word(text: str) -> DigitWord:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


TEXT_DIGITS = 60  # digits shown by str() of an unterminated expansion


def format_word(word: Sequence[int]) -> str:
    return ",".join(str(d) for d in word)


def primitive_root(word: Sequence) -> tuple:
    """The shortest u with word = u^k."""
    word = tuple(word)
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


def normalize_periodic(head: Sequence, period: Sequence) -> tuple:
    """Shortest preperiod and primitive period describing head . period^inf."""
    head, period = tuple(head), primitive_root(period)
    while head and head[-1] == period[-1]:
        period = (head[-1],) + period[:-1]
        head = head[:-1]
    return head, period


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Finite:
    kind = "finite"

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Periodic:
    period: tuple
    kind = "periodic"

    def to_json(self):
        return {"kind": self.kind, "period": list(self.period)}


@dataclass(frozen=True)
class Unknown:
    horizon: int
    kind = "unknown"

    def to_json(self):
        return {"kind": self.kind, "horizon": self.horizon}


Tail = Union[Finite, Periodic, Unknown]


@dataclass(frozen=True)
class BetaExpansion:
    """A digit sequence head . tail where tail is 0^inf, a period, or unknown."""

    head: tuple
    tail: Tail
    exact: bool = True

    def prefix(self, n: int) -> tuple:
        """The first ``n`` digits."""
        if n <= len(self.head):
            return self.head[:n]
        if isinstance(self.tail, Finite):
            return self.head + (0,) * (n - len(self.head))
        if isinstance(self.tail, Periodic):
            per = self.tail.period
            reps = (n - len(self.head)) // len(per) + 1
            return (self.head + per * reps)[:n]
        raise HorizonExceeded(f"only {len(self.head)} digits are known, {n} requested")

    def to_json(self):
        return {"digits": list(self.head), "tail": self.tail.to_json(), "exact": self.exact}

    def __str__(self):
        head = format_word(self.head)
        if isinstance(self.tail, Finite):
            return head
        if isinstance(self.tail, Periodic):
            return f"{head}({format_word(self.tail.period)})^inf"
        # only a readable prefix; the full list is in to_json()
        shown = format_word(self.head[:TEXT_DIGITS])
        return f"{shown}... (no repeat within {self.tail.horizon} digits)"


def _expand_approx(beta: ApproximateReal, horizon: int, xi) -> BetaExpansion:
    digits = []
    with mpmath.workprec(beta.precision_bits):
        b = beta.mpf()
        state = mpmath.mpf(xi.numerator) / xi.denominator
        # each digit consumes about log2(beta) bits of precision
        trusted = max(1, int((beta.precision_bits - 16) / max(math.log2(float(b)), 1e-9)))
        for _ in range(min(horizon, trusted)):
            v = b * state
            k = int(mpmath.floor(v))
            digits.append(k)
            state = v - k
            if state == 0:
                return BetaExpansion(tuple(digits), Finite(), exact=False)
    limit = min(horizon, trusted)
    raise ApproximateModeInconclusive(
        f"approximate base: no termination detected within {limit} digits", digits
    )


def expand_one(beta, horizon: int = DEFAULT_HORIZON, xi=1) -> BetaExpansion:
    """The greedy beta-expansion d(xi, beta), by default of xi = 1.

    Every intermediate state T^i(xi) is an exact field element, so a repeated
    state proves eventual periodicity and a zero state proves finiteness.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    base = as_exact_base(beta)
    if isinstance(base, ApproximateReal):
        return _expand_approx(base, horizon, Fraction(xi))
    b = base.element()
    if float(base) <= 1:
        raise ValueError("base must exceed 1")
    state = xi if isinstance(xi, FieldElement) else base.constant(xi)
    seen = {state.key(): 0}
    digits = []
    for i in range(1, horizon + 1):
        if state.is_zero:
            break
        k, state = floor_and_frac(b * state)
        digits.append(k)
        key = state.key()
        if key in seen:
            head, period = normalize_periodic(digits[: seen[key]], digits[seen[key]:])
            return BetaExpansion(head, Periodic(period))
        seen[key] = i
    if state.is_zero:
        return BetaExpansion(tuple(digits), Finite())
    return BetaExpansion(tuple(digits), Unknown(horizon))


# ---------------------------------------------------------------------------
# d*(beta)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DigitStream:
    """An eventually periodic digit stream, or a finite known prefix when
    ``period`` is None."""

    prefix: tuple
    period: tuple | None = None

    @property
    def known_length(self):
        return None if self.period is not None else len(self.prefix)

    def take(self, n: int) -> tuple:
        if n <= len(self.prefix):
            return self.prefix[:n]
        if self.period is None:
            raise HorizonExceeded(f"stream known only to {len(self.prefix)} digits, {n} requested")
        reps = (n - len(self.prefix)) // len(self.period) + 1
        return (self.prefix + self.period * reps)[:n]

    def __getitem__(self, i: int) -> int:
        return self.take(i + 1)[i]

    def to_json(self):
        return {"prefix": list(self.prefix), "period": None if self.period is None else list(self.period)}

    def __str__(self):
        if self.period is None:
            return format_word(self.prefix[:TEXT_DIGITS]) + "..."
        return f"{format_word(self.prefix)}({format_word(self.period)})^inf"


def d_star(exp: BetaExpansion) -> DigitStream:
    if isinstance(exp.tail, Finite):
        if not exp.head:
            raise ValueError("d* is undefined for the zero expansion")
        return DigitStream((), exp.head[:-1] + (exp.head[-1] - 1,))
    if isinstance(exp.tail, Periodic):
        return DigitStream(exp.head, exp.tail.period)
    raise UnknownTail("d* needs a finite or eventually periodic expansion")


# ---------------------------------------------------------------------------
# descriptors and classification
# ---------------------------------------------------------------------------

class ShiftClass(str, Enum):
    SFT = "SFT"
    SOFIC = "Sofic"
    NOT_SOFIC_UP_TO = "NotSoficUpTo"


@dataclass(frozen=True)
class BetaShiftDescriptor:
    beta: AlgebraicReal | ApproximateReal
    expansion: BetaExpansion
    dstar: DigitStream
    shift_class: ShiftClass
    horizon: int | None = None

    @property
    def conclusive(self) -> bool:
        return self.expansion.exact and self.shift_class is not ShiftClass.NOT_SOFIC_UP_TO

    @property
    def alphabet_size(self) -> int:
        return self.dstar[0] + 1

    def to_json(self):
        out = {
            "beta": _beta_json(self.beta),
            "digits": list(self.expansion.head),
            "tail": self.expansion.tail.to_json(),
            "class": self.shift_class.value,
            "dstar": self.dstar.to_json(),
            "conclusive": self.conclusive,
        }
        if self.shift_class is ShiftClass.NOT_SOFIC_UP_TO:
            out["horizon"] = self.horizon
        if not self.expansion.exact:
            out["mode"] = "approximate"
        return out


def _beta_json(beta):
    if isinstance(beta, ApproximateReal):
        return {"approximate": beta.value, "precision_bits": beta.precision_bits}
    return {
        "minimal_polynomial": beta.defining.format(),
        "isolator": [str(beta.lo), str(beta.hi)],
        "approx": float(beta),
    }


def classify(beta, horizon: int = DEFAULT_HORIZON) -> BetaShiftDescriptor:
    """Expand one in base beta and classify S_beta as SFT, sofic, or undecided."""
    base = as_exact_base(beta)
    try:
        exp = expand_one(base, horizon)
    except ApproximateModeInconclusive as exc:
        exp = BetaExpansion(exc.digits, Unknown(len(exc.digits)), exact=False)
    if isinstance(exp.tail, Finite):
        return BetaShiftDescriptor(base, exp, d_star(exp), ShiftClass.SFT)
    if isinstance(exp.tail, Periodic):
        return BetaShiftDescriptor(base, exp, d_star(exp), ShiftClass.SOFIC)
    return BetaShiftDescriptor(
        base, exp, DigitStream(exp.head, None), ShiftClass.NOT_SOFIC_UP_TO, exp.tail.horizon
    )


# ---------------------------------------------------------------------------
# the code Y_beta and the language of S_beta
# ---------------------------------------------------------------------------

def code_words(desc: BetaShiftDescriptor, max_len: int) -> list:
    """Elements of Y_beta = {d_0 ... d_(n-1) b : 0 <= b < d_n} of length <= max_len.

    Returned in order of length, then lexicographically.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive")
    d = desc.expansion.prefix(max_len)
    return [d[:n] + (b,) for n in range(max_len) for b in range(d[n])]


def is_admissible(desc: BetaShiftDescriptor, word: Sequence[int]) -> bool:
    """Whether ``word`` occurs in S_beta.

    Every suffix must be lexicographically at most the prefix of d*(beta)
    of the same length; a word passing this test extends to the point
    0^inf . word 0^inf of S_beta.
    """
    w = tuple(word)
    n = len(w)
    if not n:
        return True
    D = desc.dstar.take(n)
    for i in range(n):
        if w[i:] > D[: n - i]:
            return False
    return True


@dataclass(frozen=True)
class CodeParse:
    words: tuple
    remainder: tuple

    @property
    def complete(self) -> bool:
        return not self.remainder

    def to_json(self):
        return {"words": [list(w) for w in self.words], "remainder": list(self.remainder)}


def parse_code(desc: BetaShiftDescriptor, word: Sequence[int]) -> CodeParse:
    """Factor an admissible word into code words of Y_beta, left to right.

    Y_beta is a prefix code so the factorization is unique; what is left at
    the end is a proper prefix of some code word.
    """
    w = tuple(word)
    if not is_admissible(desc, w):
        raise NotAdmissible(f"{format_word(w)} is not in the language of S_beta")
    d = desc.expansion.prefix(len(w) + 1)
    out = []
    i = 0
    while i < len(w):
        n = 0
        while i + n < len(w) and w[i + n] == d[n]:
            n += 1
        if i + n == len(w):
            return CodeParse(tuple(out), w[i:])
        if w[i + n] > d[n]:
            raise NotAdmissible(f"{format_word(w)} exceeds d(beta) at position {i + n}")
        out.append(w[i : i + n + 1])
        i += n + 1
    return CodeParse(tuple(out), ())


def compare_eventually_periodic(a_prefix, a_period, b_prefix, b_period) -> int:
    """Lexicographic comparison of u v^inf with x y^inf."""
    n = max(len(a_prefix), len(b_prefix)) + len(a_period) * len(b_period) // math.gcd(len(a_period), len(b_period))
    a = DigitStream(tuple(a_prefix), tuple(a_period)).take(n)
    b = DigitStream(tuple(b_prefix), tuple(b_period)).take(n)
    return (a > b) - (a < b)
