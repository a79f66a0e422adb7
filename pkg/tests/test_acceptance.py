"""The ten acceptance criteria, each at its stated tolerance and time budget.

Run ``pytest tests/test_acceptance.py -v``; a summary with one PASS/FAIL line
per criterion is printed at the end of the session.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest
import sympy

from betalab.algebraic import FieldElement, floor_and_frac, parse_polynomial, unique_positive_root
from betalab.beta_core import Finite, ShiftClass, classify, code_words, expand_one, is_admissible
from betalab.ca_engine import (
    blocking_candidate_from_expansion,
    codes_agree,
    identity,
    product_ca,
    sensitivity_probe,
    shift_map,
    verify_blocking,
    with_shift,
)
from betalab.conjugacy import verify_conjugacy
from betalab.factorization import PrimeVerdict, ScaleKind, integer_split_test, primeness_obstruction
from betalab.sft_tools import (
    EdgeSFT,
    companion_edge_sft,
    lex_greater_all_shifts,
    nonzero_spectrum,
    periodic_count,
    product_sft,
    zeta_denominator,
)
from betalab.shifts import BetaShift, FullShift

import oracles


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


# -- 1 -------------------------------------------------------------------------

@pytest.mark.acceptance(1, "expansions d(2), d(gamma), d(gamma^2), < 1 s each")
def test_criterion_1_expansions():
    gamma = unique_positive_root(parse_polynomial("x^3-x^2-x-1"))
    gamma_sq = (gamma.element() ** 2).to_algebraic_real()
    for base, digits in [(2, (2,)), (gamma, (1, 1, 1)), (gamma_sq, (3, 1, 1))]:
        with Timer() as t:
            exp = expand_one(base)
        assert exp.head == digits and isinstance(exp.tail, Finite) and exp.exact
        assert t.seconds < 1.0


# -- 2 -------------------------------------------------------------------------

@pytest.mark.acceptance(2, "companion of 311, traces, NoSplitFound with two refutations, < 5 s")
def test_criterion_2_final_example():
    with Timer() as t:
        A = companion_edge_sft((3, 1, 1))
        assert A.adjacency == ((3, 1, 0), (1, 0, 1), (1, 0, 0))
        assert periodic_count(A, 1) == 3 and periodic_count(A, 2) == 11
        report = primeness_obstruction(A, 2)
    assert report.verdict is PrimeVerdict.NO_SPLIT_FOUND
    kinds = sorted(a.obstruction["kind"] for a in report.refutations)
    assert kinds == ["divisibility", "one-point"]
    div = next(a for a in report.refutations if a.obstruction["kind"] == "divisibility")
    assert (div.obstruction["f"], div.obstruction["trace"], div.obstruction["p"]) == (9, 11, 2)
    assert 11 % 9 != 0
    one = next(a for a in report.refutations if a.obstruction["kind"] == "one-point")
    assert all(v == 1 for v in (one.f if one.obstruction["factor"] == "first" else one.g))
    assert not report.candidates
    assert t.seconds < 5.0


# -- 3 -------------------------------------------------------------------------

@pytest.mark.acceptance(3, "S_2 x S_3 conjugate to S_6, census 6^p for p <= 5, < 10 s")
def test_criterion_3_integer_example():
    with Timer() as t:
        verdict = integer_split_test(2, (3,))
        report = verify_conjugacy(2, (3,), max_period=5)
    assert verdict.kind is ScaleKind.CONJUGATE
    assert [c.b_points for c in report.census] == [6, 36, 216, 1296, 7776]
    assert [c.product_points for c in report.census] == [6, 36, 216, 1296, 7776]
    assert t.seconds < 10.0


# -- 4 -------------------------------------------------------------------------

@pytest.mark.acceptance(4, "n=2, w=21: scaled 4,4, round trips and census for p <= 6, < 30 s")
def test_criterion_4_positive_branch():
    with Timer() as t:
        verdict = integer_split_test(2, (2, 1))
        report = verify_conjugacy(2, (2, 1), max_period=6)
    assert verdict.kind is ScaleKind.CONJUGATE and verdict.scaled_word == (4, 4)
    assert lex_greater_all_shifts((4, 4))
    C, B = ((2, 1), (1, 0)), ((4, 1), (4, 0))
    for c in report.census:
        # DERIVED: traces from sympy, independent of the code under test
        expected = 2**c.p * oracles.trace_power(C, c.p)
        assert expected == oracles.trace_power(B, c.p)
        assert c.product_points == c.b_points == expected
    assert [c.p for c in report.census] == [1, 2, 3, 4, 5, 6]
    assert t.seconds < 30.0


# -- 5 -------------------------------------------------------------------------

@pytest.mark.acceptance(5, "n=2, w=11: lex fails, exactly one exact branch reported, < 60 s")
def test_criterion_5_negative_branch():
    with Timer() as t:
        verdict = integer_split_test(2, (1, 1), horizon=10_000)
    assert verdict.scaled_word == (2, 4) and not verdict.scaled_lex_ok
    assert not lex_greater_all_shifts((2, 4))
    # 2 * golden is the positive root of y^2 - 2y - 4
    assert verdict.scaled_base.defining.coefficients == (-4, -2, 1)
    if verdict.kind is ScaleKind.ZETA_MISMATCH:
        assert verdict.zeta_left.poly != verdict.zeta_right.poly
    else:
        assert verdict.kind is ScaleKind.NOT_SFT_UP_TO
        assert verdict.horizon == 10_000
        assert len(verdict.expansion.head) == 10_000
        assert verdict.zeta_left is None
    # DERIVED: the first digits agree with a high precision greedy run
    with_mp = oracles.greedy_digits(verdict.scaled_base.mpf(2000), 200, dps=600)
    assert list(verdict.expansion.head[:200]) == with_mp
    assert t.seconds < 60.0


# -- 6 -------------------------------------------------------------------------

def pairwise_product_denominator(A, B):
    """prod_(i,j) (1 - lambda_i mu_j t) exactly, via a resultant."""
    x, z, t = sympy.symbols("x z t")
    chiA = sympy.Matrix(A).charpoly(x).as_expr()
    m = len(B)
    chiB = sympy.Matrix(B).charpoly(x).as_expr()
    # prod_j (z - mu_j x) = x^m chi_B(z/x)
    shifted = sympy.expand(x**m * chiB.subs(x, z / x))
    R = sympy.Poly(sympy.resultant(chiA, shifted, x), z)
    deg = len(A) * m
    coeffs = R.all_coeffs()  # highest first, degree deg in z
    coeffs = [0] * (deg + 1 - len(coeffs)) + coeffs
    # t^deg R(1/t): the coefficient of t^k is the one of z^(deg-k)
    out = [int(c) for c in coeffs]
    while out and out[-1] == 0:  # singular factors lower the degree
        out.pop()
    return tuple(out)


@pytest.mark.acceptance(6, "zeta of 11, Kronecker zeta vs pairwise products, power sums to 1e-6")
def test_criterion_6_zeta():
    assert str(zeta_denominator(companion_edge_sft((1, 1)))) == "1 - t - t^2"
    assert zeta_denominator(companion_edge_sft((1, 1))).poly.coefficients == (1, -1, -1)
    rng = random.Random(6)
    for _ in range(20):
        a, b = rng.choice([2, 3]), rng.choice([2, 3])
        A = [[rng.randint(0, 3) for _ in range(a)] for _ in range(a)]
        B = [[rng.randint(0, 3) for _ in range(b)] for _ in range(b)]
        got = zeta_denominator(product_sft(EdgeSFT(A), EdgeSFT(B))).poly.coefficients
        want = pairwise_product_denominator(A, B)
        assert got == want, (A, B)
        for M in (A, B, oracles.kron(A, B)):
            X = EdgeSFT(M)
            spec = nonzero_spectrum(X)
            for p in range(1, 9):
                exact = periodic_count(X, p)
                assert abs(sum(v**p for v in spec) - exact) <= 1e-6 * max(1.0, abs(exact))


# -- 7 -------------------------------------------------------------------------

@pytest.mark.acceptance(7, "is_admissible vs code oracle on all words of length <= 10, < 120 s")
def test_criterion_7_language_oracle(descriptors):
    with Timer() as t:
        discrepancies = 0
        for name, k in [("2", 2), ("golden", 2), ("gamma", 2), ("gamma_sq", 4)]:
            desc = descriptors[name]
            lang = oracles.language_from_code(code_words(desc, 12), 10)
            for n in range(11):
                for w in itertools.product(range(k), repeat=n):
                    if is_admissible(desc, w) != (w in lang):
                        discrepancies += 1
    assert discrepancies == 0
    assert t.seconds < 120.0


# -- 8 -------------------------------------------------------------------------

@pytest.mark.acceptance(8, "with_shift identity, VerifiedUpTo(10), probe directions, < 60 s")
def test_criterion_8_directions():
    with Timer() as t:
        S2, S3 = FullShift(2), FullShift(3)
        sigma = shift_map(S2)
        G = with_shift(sigma, -1, 1)
        assert codes_agree(G, identity(S2))
        cert = verify_blocking(G, (0,), 1, 0, 10)
        assert cert.status == "VerifiedUpTo" and cert.verified_up_to == 10

        F = product_ca(shift_map(S2), shift_map(S3, -1))
        for p in (-2, -1, 0, 1, 2):
            res = sensitivity_probe(F, (p, 1), seed=42)
            assert res.flag == "sensitive-like", (p, res.to_json())
            assert res.median > res.median_half > 0

        alone = sensitivity_probe(sigma, (-1, 1), seed=42)
        assert alone.median == 0 and alone.max == 0
    assert t.seconds < 60.0


# -- 9 -------------------------------------------------------------------------

@pytest.mark.acceptance(9, "candidate blocking word verified for identity; sigma on 00 refuted")
def test_criterion_9_blocking():
    desc = classify("x^2-3", 10_000)
    assert desc.shift_class is ShiftClass.NOT_SOFIC_UP_TO
    cand = blocking_candidate_from_expansion(desc, 1)
    X = BetaShift(desc)
    assert X.is_admissible(cand.word)
    cert = verify_blocking(identity(X), cand.word, cand.e, cand.offset, 8)
    assert cert.status == "VerifiedUpTo" and cert.verified_up_to == 8

    sigma = shift_map(FullShift(2))
    ref = verify_blocking(sigma, (0, 0), 1, 0, 3)
    assert ref.status == "Refuted"
    wx, wy = ref.resimulate(sigma)
    assert wx == ref.witness.window_x and wy == ref.witness.window_y and wx != wy
    # DERIVED: redo the witness by hand; sigma^n reads n places to the right
    w = ref.witness
    n = ref.refuted_step
    assert (w.x[n - w.start],) == wx and (w.y[n - w.start],) == wy


# -- 10 ------------------------------------------------------------------------

@pytest.mark.acceptance(10, "10,000 field operations with zero residue; exact integer floors")
def test_criterion_10_exact_arithmetic(gamma):
    x = sympy.symbols("x")
    m = sympy.Poly(x**3 - x**2 - x - 1, x, domain="QQ")
    rng = random.Random(10)

    def rand_elem():
        return FieldElement(gamma, tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)))

    def as_poly(e):
        return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in e.coeffs])) or [0],
                          x, domain="QQ")

    ops = 0
    while ops < 10_000:
        a, b = rand_elem(), rand_elem()
        op = rng.choice("+-*/")
        if op == "/" and b.is_zero:
            continue
        c = {"+": a + b, "-": a - b, "*": a * b, "/": a / b if op == "/" else None}[op]
        pa, pb, pc = as_poly(a), as_poly(b), as_poly(c)
        if op == "+":
            residue = (pa + pb - pc).rem(m)
        elif op == "-":
            residue = (pa - pb - pc).rem(m)
        elif op == "*":
            residue = (pa * pb - pc).rem(m)
        else:
            residue = (pc * pb - pa).rem(m)
        assert residue.is_zero, (a, b, op)
        assert len(c.coeffs) <= 3
        ops += 1

    # exact integers built through non-trivial field identities
    g = gamma.element()
    for i in range(100):
        k = rng.randint(-50, 50)
        a = rand_elem()
        while a.is_zero:
            a = rand_elem()
        v = [
            (a * k) / a,
            g**3 - g**2 - g + (k - 1),
            (g - a) + a - g + k,
            (a * a - a * a) + k,
            (g * g - g - 1) * g - 1 + k,
        ][i % 5]
        assert floor_and_frac(v) == (k, gamma.constant(0)), (i, v)
        # DERIVED: just above and just below k, from a rational approximation of gamma
        lo, hi = gamma.isolator(80)
        above = g - lo + k  # in (k, k + 2^-80]
        below = g - hi + k  # in [k - 2^-80, k)
        assert floor_and_frac(above)[0] == k
        assert floor_and_frac(below)[0] == k - 1
