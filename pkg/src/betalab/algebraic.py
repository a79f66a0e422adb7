"""Exact arithmetic with real algebraic numbers.

A real algebraic number is stored as its minimal polynomial over the
integers together with a rational isolating interval.  Elements of the
number field Q(beta) are polynomials in beta reduced modulo the minimal
polynomial; equality is decided symbolically and signs by evaluating the
element on ever narrower isolators.  Because the minimal polynomial is
irreducible, a nonzero residue never vanishes at beta, so every sign query
terminates.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import BaseMismatch, MalformedEquation

DEFAULT_ISOLATOR_BITS = 32


# ---------------------------------------------------------------------------
# dense polynomial helpers; coefficient tuples are lowest degree first
# ---------------------------------------------------------------------------

def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _padd(p, q):
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _psub(p, q):
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n))


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _pdivmod(p, q):
    """Quotient and remainder over the rationals."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in p]
    lead = Fraction(q[-1])
    dq = len(q) - 1
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    for k in range(len(p) - 1 - dq, -1, -1):
        c = rem[k + dq] / lead
        quot[k] = c
        if c:
            for j, b in enumerate(q):
                rem[k + j] -= c * b
    return _trim(quot), _trim(rem[:dq])


def _pmod(p, q):
    return _pdivmod(p, q)[1]


def _pderiv(p):
    return _trim(i * c for i, c in enumerate(p) if i)


def _monic(p):
    lead = Fraction(p[-1])
    return tuple(Fraction(c) / lead for c in p)


def _pgcd(p, q):
    p, q = _trim(p), _trim(q)
    while q:
        p, q = q, _pmod(p, q)
    return _monic(p) if p else ()


def _horner(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(v):
    return (v > 0) - (v < 0)


def _primitive_int(p):
    """Scale rational coefficients to coprime integers with positive leading term."""
    p = _trim(Fraction(c) for c in p)
    if not p:
        return ()
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def _interval_eval(coeffs, lo, hi):
    """Bounds of a rational polynomial over the interval [lo, hi]."""
    a = b = Fraction(0)
    for c in reversed(coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def sturm_sequence(p):
    seq = [_trim(Fraction(c) for c in p)]
    d = _pderiv(seq[0])
    if d:
        seq.append(d)
    while len(seq) > 1:
        r = _pmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(tuple(-c for c in r))
    return seq


def _variations(seq, x):
    signs = [_sign(_horner(s, x)) for s in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    coeffs = p.coefficients if isinstance(p, IntPolynomial) else p
    seq = sturm_sequence(coeffs)
    return _variations(seq, Fraction(lo)) - _variations(seq, Fraction(hi))


def characteristic_polynomial(matrix) -> tuple:
    """det(xI - M) by the Faddeev-LeVerrier recurrence, lowest degree first.

    All divisions are exact, so integer input gives integer (Fraction with
    denominator 1) output.
    """
    n = len(matrix)
    A = [[Fraction(v) for v in row] for row in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[n - k + 1]
        M = AM
        tr = sum(sum(A[i][t] * M[t][i] for t in range(n)) for i in range(n))
        coeffs[n - k] = -tr / k
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# integer polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, lowest degree first."""

    coefficients: tuple

    def __post_init__(self):
        ints = []
        for c in self.coefficients:
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"non-integer coefficient {c}")
                c = c.numerator
            ints.append(int(c))
        object.__setattr__(self, "coefficients", _trim(ints))

    @classmethod
    def from_highest_first(cls, coeffs: Iterable[int]) -> "IntPolynomial":
        return cls(tuple(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def __call__(self, x):
        return _horner(self.coefficients, x)

    def __add__(self, other):
        return IntPolynomial(_padd(self.coefficients, other.coefficients))

    def __sub__(self, other):
        return IntPolynomial(_psub(self.coefficients, other.coefficients))

    def __mul__(self, other):
        return IntPolynomial(_pmul(self.coefficients, other.coefficients))

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(_pderiv(self.coefficients))

    def reversed(self) -> "IntPolynomial":
        """x^deg p(1/x)."""
        return IntPolynomial(tuple(reversed(self.coefficients)))

    def scaled_root(self, n: int) -> "IntPolynomial":
        """The polynomial whose roots are n times the roots of this one.

        Computed as n^d p(y/n), whose coefficients are c_k n^(d-k), then
        reduced to primitive form.
        """
        d = self.degree
        out = tuple(c * n ** (d - k) for k, c in enumerate(self.coefficients))
        return IntPolynomial(_primitive_int(out))

    def squarefree_part(self) -> "IntPolynomial":
        p = self.coefficients
        g = _pgcd(p, _pderiv(p))
        if len(g) <= 1:
            return IntPolynomial(_primitive_int(p))
        return IntPolynomial(_primitive_int(_pdivmod(p, g)[0]))

    def format(self, var: str = "x", ascending: bool = False) -> str:
        terms = [(k, c) for k, c in enumerate(self.coefficients) if c]
        if not terms:
            return "0"
        if not ascending:
            terms.reverse()
        out = []
        for idx, (k, c) in enumerate(terms):
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}{mono}"
            if idx == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append(("- " if c < 0 else "+ ") + body)
        return " ".join(out)

    def __str__(self):
        return self.format()


_TERM = re.compile(r"^(?P<coef>\d+)?\*?(?:(?P<var>[a-z])(?:(?:\^|\*\*)(?P<exp>\d+))?)?$")


def parse_polynomial(text: str) -> IntPolynomial:
    """Parse "x^2-x-1" or a coefficient list "1,-1,-1" (highest degree first)."""
    s = text.replace(" ", "").replace("−", "-")
    if not s:
        raise MalformedEquation("empty polynomial")
    if not re.search(r"[a-z]", s):
        try:
            return IntPolynomial.from_highest_first(int(part) for part in s.split(","))
        except ValueError as exc:
            raise MalformedEquation(f"bad coefficient list {text!r}") from exc
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise MalformedEquation(f"cannot parse polynomial {text!r}")
    coeffs: dict[int, int] = {}
    variable = None
    for term in terms:
        sign = -1 if term[0] == "-" else 1
        body = term.lstrip("+-")
        m = _TERM.match(body)
        if not m or not body:
            raise MalformedEquation(f"cannot parse term {term!r} in {text!r}")
        if m["var"]:
            if variable not in (None, m["var"]):
                raise MalformedEquation(f"mixed variables in {text!r}")
            variable = m["var"]
            exp = int(m["exp"]) if m["exp"] else 1
        elif m["exp"]:
            raise MalformedEquation(f"exponent without variable in {text!r}")
        else:
            exp = 0
        coef = int(m["coef"]) if m["coef"] else 1
        coeffs[exp] = coeffs.get(exp, 0) + sign * coef
    deg = max(coeffs)
    return IntPolynomial(tuple(coeffs.get(k, 0) for k in range(deg + 1)))


def _irreducible_factors(p: IntPolynomial) -> list:
    if p.degree <= 1:
        return [p]
    import sympy

    x = sympy.Symbol("x")
    expr = sum(c * x**k for k, c in enumerate(p.coefficients))
    _, factors = sympy.factor_list(expr)
    out = []
    for f, _mult in factors:
        coeffs = [int(c) for c in sympy.Poly(f, x).all_coeffs()]
        q = IntPolynomial.from_highest_first(coeffs)
        if q.degree >= 1:
            out.append(IntPolynomial(_primitive_int(q.coefficients)))
    return out


# ---------------------------------------------------------------------------
# real algebraic numbers
# ---------------------------------------------------------------------------

def _newton_refine(coeffs, lo, hi, bits):
    """Try to shrink [lo, hi] below 2**-bits with a high-precision Newton step.

    Returns None when the candidate bracket fails the exact sign check.
    """
    highest = [int(c) for c in reversed(coeffs)]
    deriv = [int(c) for c in reversed(_pderiv(coeffs))]
    with mpmath.workprec(bits + 64):
        x = (mpmath.mpf(lo.numerator) / lo.denominator + mpmath.mpf(hi.numerator) / hi.denominator) / 2
        tol = mpmath.ldexp(1, -(bits + 8))
        for _ in range(4 * bits.bit_length() + 40):
            slope = mpmath.polyval(deriv, x)
            if not slope:
                return None
            step = mpmath.polyval(highest, x) / slope
            x -= step
            if abs(step) < tol:
                break
        scale_bits = bits + 2
        k = int(mpmath.floor(mpmath.ldexp(x, scale_bits)))
    scale = 1 << scale_bits
    cand_lo = max(lo, Fraction(k - 1, scale))
    cand_hi = min(hi, Fraction(k + 2, scale))
    if cand_lo >= cand_hi:
        return None
    s_lo, s_hi = _sign(_horner(coeffs, cand_lo)), _sign(_horner(coeffs, cand_hi))
    if s_lo * s_hi < 0:
        return cand_lo, cand_hi
    return None


def _bisect(coeffs, lo, hi, bits):
    target = Fraction(1, 1 << bits)
    s_lo = _sign(_horner(coeffs, lo))
    while hi - lo > target:
        mid = (lo + hi) / 2
        s_mid = _sign(_horner(coeffs, mid))
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


@dataclass(frozen=True, eq=False)
class AlgebraicReal:
    """A real root of an irreducible integer polynomial, pinned by an isolator.

    Build instances with :meth:`from_isolator`, :meth:`rational` or
    :func:`unique_positive_root`; the plain constructor checks the isolator
    but trusts that ``defining`` is irreducible.
    """

    defining: IntPolynomial
    lo: Fraction
    hi: Fraction
    _refinements: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        p = self.defining
        if p.degree < 1 or p.leading <= 0:
            raise ValueError("defining polynomial must be non-constant with positive leading coefficient")
        if lo > hi:
            raise ValueError("empty isolator")
        if lo == hi:
            if p(lo) != 0:
                raise ValueError("degenerate isolator is not a root")
        elif _sign(p(lo)) * _sign(p(hi)) >= 0:
            raise ValueError("isolator endpoints must have opposite signs")

    @classmethod
    def rational(cls, q) -> "AlgebraicReal":
        q = Fraction(q)
        return cls(IntPolynomial((-q.numerator, q.denominator)), q, q)

    @classmethod
    def from_isolator(cls, p: IntPolynomial, lo, hi, bits: int = DEFAULT_ISOLATOR_BITS) -> "AlgebraicReal":
        """The unique root of ``p`` in [lo, hi], re-expressed over its minimal polynomial."""
        lo, hi = Fraction(lo), Fraction(hi)
        for f in _irreducible_factors(p):
            if f.degree == 1:
                root = Fraction(-f.coefficients[0], f.coefficients[1])
                if lo <= root <= hi:
                    return cls.rational(root)
                continue
            if f(lo) == 0 or f(hi) == 0:
                continue
            count = sturm_count(f, lo, hi)
            if count == 1:
                return cls(f, lo, hi).refine(bits)
            if count > 1:
                raise ValueError("interval contains several roots")
        raise ValueError("interval contains no root")

    @property
    def degree(self) -> int:
        return self.defining.degree

    @property
    def is_rational(self) -> bool:
        return self.defining.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational number")
        return self.lo

    def isolator(self, bits: int = DEFAULT_ISOLATOR_BITS) -> tuple:
        """A sub-isolator of width at most 2**-bits (cached per ``bits``)."""
        lo, hi = self.lo, self.hi
        if hi - lo <= Fraction(1, 1 << bits):
            return lo, hi
        cached = self._refinements.get(bits)
        if cached is not None:
            return cached
        for b in sorted(k for k in self._refinements if isinstance(k, int)):
            if b < bits:
                lo, hi = self._refinements[b]
        coeffs = self.defining.coefficients
        if hi - lo > Fraction(1, 1 << DEFAULT_ISOLATOR_BITS):
            lo, hi = _bisect(coeffs, lo, hi, min(bits, DEFAULT_ISOLATOR_BITS))
        found = _newton_refine(coeffs, lo, hi, bits) if hi - lo > Fraction(1, 1 << bits) else (lo, hi)
        if found is None:
            found = _bisect(coeffs, lo, hi, bits)
        self._refinements[bits] = found
        return found

    def power_bounds(self, bits: int) -> tuple:
        """Fixed-point bounds on the powers of beta.

        Returns ``(K, lows, highs)`` with lows[i] / 2**K <= beta**i <= highs[i] / 2**K
        for i < degree, derived from the isolator of width 2**-bits.
        """
        key = ("powers", bits)
        cached = self._refinements.get(key)
        if cached is not None:
            return cached
        lo, hi = self.isolator(bits)
        K = bits + 16
        scale = 1 << K
        lows, highs = [scale], [scale]
        a = b = Fraction(1)
        for _ in range(1, self.degree):
            prods = (a * lo, a * hi, b * lo, b * hi)
            a, b = min(prods), max(prods)
            lows.append(math.floor(a * scale))
            highs.append(math.ceil(b * scale))
        out = (K, tuple(lows), tuple(highs))
        self._refinements[key] = out
        return out

    def refine(self, bits: int) -> "AlgebraicReal":
        lo, hi = self.isolator(bits)
        if (lo, hi) == (self.lo, self.hi):
            return self
        return AlgebraicReal(self.defining, lo, hi)

    def element(self) -> "FieldElement":
        """beta itself as an element of Q(beta)."""
        if self.is_rational:
            return FieldElement(self, (self.lo,))
        return FieldElement(self, (0, 1))

    def constant(self, q) -> "FieldElement":
        return FieldElement(self, (Fraction(q),))

    def mpf(self, bits: int = 64):
        lo, hi = self.isolator(bits)
        with mpmath.workprec(bits + 16):
            return (mpmath.mpf(lo.numerator) / lo.denominator + mpmath.mpf(hi.numerator) / hi.denominator) / 2

    def __float__(self):
        lo, hi = self.isolator(60)
        return float((lo + hi) / 2)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        if self.defining != other.defining:
            return False
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return False
        if self.defining(lo) == 0:
            return True
        return sturm_count(self.defining, lo, hi) >= 1

    def __hash__(self):
        return hash(self.defining)

    def __repr__(self):
        return f"AlgebraicReal({self.defining.format()!r}, ~{float(self):.12g})"


def unique_positive_root(p: IntPolynomial) -> AlgebraicReal:
    """The root beta > 1 of x^d - a_{d-1} x^{d-1} - ... - a_0.

    The coefficients must satisfy a_{d-1} >= 1, a_0 >= 1 and a_i >= 0; any
    other shape raises :class:`MalformedEquation`.
    """
    c = p.coefficients
    d = p.degree
    if d < 1 or c[-1] != 1:
        raise MalformedEquation(f"expected a monic polynomial of degree >= 1, got {p}")
    a = [-v for v in c[:-1]]
    if any(v < 0 for v in a) or a[0] < 1 or a[-1] < 1:
        raise MalformedEquation(f"coefficients of {p} do not have the shape x^d - a_(d-1)x^(d-1) - ... - a_0")
    if d == 1:
        if a[0] < 2:
            raise MalformedEquation("the root must exceed 1")
        return AlgebraicReal.rational(a[0])
    # p(1) = 1 - sum(a) < 0 and p(1 + max a) > 0 by the Cauchy bound.
    return AlgebraicReal.from_isolator(p, 1, 1 + max(a))


def largest_real_root(p: IntPolynomial) -> AlgebraicReal:
    """The largest real root of an arbitrary integer polynomial."""
    if p.degree < 1:
        raise MalformedEquation("constant polynomial has no roots")
    q = p.squarefree_part()
    c = q.coefficients
    bound = 1 + max(abs(Fraction(v, c[-1])) for v in c[:-1]) if q.degree > 0 else 1
    lo, hi = -bound, bound
    if sturm_count(q, lo, hi) == 0:
        raise MalformedEquation(f"{p} has no real roots")
    # shrink lo until exactly one root remains in (lo, hi]
    while sturm_count(q, lo, hi) > 1 or q(lo) == 0:
        mid = (lo + hi) / 2
        if sturm_count(q, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    return AlgebraicReal.from_isolator(q, lo, hi)


# ---------------------------------------------------------------------------
# number field elements
# ---------------------------------------------------------------------------

def _start_bits(coeffs) -> int:
    size = 0
    for c in coeffs:
        size = max(size, abs(c.numerator).bit_length(), c.denominator.bit_length())
    # powers of two so that refined isolators are shared between queries
    return 1 << (64 + 2 * size - 1).bit_length()


@dataclass(frozen=True, eq=False)
class FieldElement:
    """An element of Q(beta): a rational polynomial in beta of degree < deg(beta)."""

    base: AlgebraicReal
    coeffs: tuple

    def __post_init__(self):
        coeffs = _trim(Fraction(c) for c in self.coeffs)
        if len(coeffs) > self.base.degree - 1:
            coeffs = _pmod(coeffs, self.base.defining.coefficients)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    # -- coercion -------------------------------------------------------
    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.base is not self.base and other.base != self.base:
                raise BaseMismatch("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.base, (Fraction(other),))
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    # -- ring operations ------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        return FieldElement(self.base, _padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return FieldElement(self.base, _psub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return FieldElement(self.base, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        other = self._lift(other)
        prod = _pmul(self.coeffs, other.coeffs)
        return FieldElement(self.base, _pmod(prod, self.base.defining.coefficients))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: s*self + t*m = 1
        m = tuple(Fraction(c) for c in self.base.defining.coefficients)
        r0, r1 = m, self.coeffs
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        # r0 is a nonzero constant because m is irreducible
        return FieldElement(self.base, tuple(c / r0[0] for c in s0))

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = FieldElement(self.base, (Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates ----------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def key(self) -> tuple:
        """Canonical hashable form within a fixed field."""
        return self.coeffs

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational and (self.coeffs[0] if self.coeffs else 0) == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.coeffs == other.coeffs and (self.base is other.base or self.base == other.base)

    def __hash__(self):
        if self.is_rational:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash((self.base, self.coeffs))

    # -- ordering ------------------------------------------------------
    def bounds(self, bits: int) -> tuple:
        """Rational bounds for the value using an isolator of width 2**-bits."""
        if self.is_rational:
            v = self.coeffs[0] if self.coeffs else Fraction(0)
            return v, v
        lo_num, hi_num, scale = self._scaled_bounds(bits)
        return Fraction(lo_num, scale), Fraction(hi_num, scale)

    def _scaled_bounds(self, bits):
        K, lows, highs = self.base.power_bounds(bits)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        lo_num = hi_num = 0
        for c, pl, ph in zip(self.coeffs, lows, highs):
            n = c.numerator * (den // c.denominator)
            if n >= 0:
                lo_num += n * pl
                hi_num += n * ph
            else:
                lo_num += n * ph
                hi_num += n * pl
        return lo_num, hi_num, den << K

    def sign(self) -> int:
        if self.is_rational:
            return _sign(self.coeffs[0]) if self.coeffs else 0
        bits = _start_bits(self.coeffs)
        while True:
            lo, hi, _ = self._scaled_bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def floor(self) -> int:
        if self.is_rational:
            return math.floor(self.coeffs[0]) if self.coeffs else 0
        bits = _start_bits(self.coeffs)
        while True:
            lo, hi, scale = self._scaled_bounds(bits)
            k = lo // scale
            if k == hi // scale:
                return k
            bits *= 2

    def __lt__(self, other):
        return compare(self, self._lift(other)) < 0

    def __le__(self, other):
        return compare(self, self._lift(other)) <= 0

    def __gt__(self, other):
        return compare(self, self._lift(other)) > 0

    def __ge__(self, other):
        return compare(self, self._lift(other)) >= 0

    def __float__(self):
        lo, hi = self.bounds(_start_bits(self.coeffs) + 60)
        return float((lo + hi) / 2)

    def __repr__(self):
        poly = " + ".join(f"{c}*b^{k}" for k, c in enumerate(self.coeffs) if c) or "0"
        return f"FieldElement({poly}; ~{float(self):.12g})"

    # -- algebraic structure -------------------------------------------
    def minimal_polynomial(self) -> IntPolynomial:
        """Minimal polynomial over Q, via the characteristic polynomial of multiplication."""
        n = self.base.degree
        power = FieldElement(self.base, (Fraction(1),))
        columns = []
        for _ in range(n):
            col = self * power
            columns.append(list(col.coeffs) + [Fraction(0)] * (n - len(col.coeffs)))
            power = power * self.base.element()
        matrix = [[columns[j][i] for j in range(n)] for i in range(n)]
        chi = characteristic_polynomial(matrix)
        # chi is a power of the minimal polynomial since the base field is a field
        g = _pgcd(chi, _pderiv(chi))
        if len(g) > 1:
            chi = _pdivmod(chi, g)[0]
        return IntPolynomial(_primitive_int(chi))

    def to_algebraic_real(self) -> AlgebraicReal:
        """The value of this element as a standalone :class:`AlgebraicReal`."""
        if self.is_rational:
            return AlgebraicReal.rational(self.coeffs[0] if self.coeffs else 0)
        m = self.minimal_polynomial()
        bits = _start_bits(self.coeffs)
        while True:
            lo, hi = self.bounds(bits)
            if lo < hi and m(lo) != 0 and m(hi) != 0 and sturm_count(m, lo, hi) == 1:
                return AlgebraicReal(m, lo, hi).refine(DEFAULT_ISOLATOR_BITS)
            bits *= 2


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if not (a.base is b.base or a.base == b.base):
        raise BaseMismatch("elements of different number fields")
    return a * b


def compare(a: FieldElement, b: FieldElement) -> int:
    """Exact three-way comparison: -1, 0 or 1."""
    if not (a.base is b.base or a.base == b.base):
        raise BaseMismatch("elements of different number fields")
    diff = a - b
    if diff.is_zero:
        return 0
    return diff.sign()


def floor_and_frac(a: FieldElement) -> tuple:
    """(floor(a), a - floor(a)), decided exactly."""
    k = a.floor()
    return k, a - k


# ---------------------------------------------------------------------------
# approximate mode
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ApproximateReal:
    """A real number known only numerically.

    Results derived from it are never exact; ``precision_bits`` bounds the
    working precision and so the number of trustworthy expansion digits.
    """

    value: str
    precision_bits: int = 256

    def mpf(self):
        with mpmath.workprec(self.precision_bits):
            return mpmath.mpf(self.value)

    def __float__(self):
        return float(self.mpf())


def as_exact_base(beta) -> AlgebraicReal | ApproximateReal:
    """Coerce ints, fractions, polynomials and strings to a base for expansion.

    Polynomials of the shape x^d - a_(d-1) x^(d-1) - ... - a_0 give their
    unique positive root; any other polynomial gives its largest real root.
    """
    if isinstance(beta, (AlgebraicReal, ApproximateReal)):
        return beta
    if isinstance(beta, FieldElement):
        return beta.to_algebraic_real()
    if isinstance(beta, (int, Fraction)):
        return AlgebraicReal.rational(beta)
    if isinstance(beta, str):
        beta = parse_polynomial(beta)
    if isinstance(beta, IntPolynomial):
        try:
            return unique_positive_root(beta)
        except MalformedEquation:
            return largest_real_root(beta)
    if isinstance(beta, float):
        return ApproximateReal(repr(beta))
    raise TypeError(f"unsupported base {beta!r}")


def polynomial_from_digits(digits: Sequence[int]) -> IntPolynomial:
    """x^d - a_{d-1} x^{d-1} - ... - a_0 for the digit word a_{d-1} ... a_0."""
    d = len(digits)
    coeffs = [0] * (d + 1)
    coeffs[d] = 1
    for idx, a in enumerate(digits):
        coeffs[d - 1 - idx] = -int(a)
    return IntPolynomial(tuple(coeffs))
