import pytest
from hypothesis import given, settings, strategies as st

from betalab.errors import NotLexMaximal, NotMixing
from betalab.factorization import (
    PrimeVerdict,
    ScaleKind,
    integer_split_test,
    primeness_obstruction,
    scaled_digit_word,
)
from betalab.sft_tools import EdgeSFT, companion_edge_sft, full_shift, periodic_count, product_sft

import oracles


def test_scaled_word():
    assert scaled_digit_word(2, (2, 1)) == (4, 4)
    assert scaled_digit_word(3, (1, 0, 1)) == (3, 0, 27)
    assert scaled_digit_word(5, (7,)) == (35,)


@given(st.integers(1, 6), st.integers(1, 6), st.lists(st.integers(0, 5), min_size=1, max_size=4))
def test_scaling_is_multiplicative(n, m, w):
    assert scaled_digit_word(n * m, w) == scaled_digit_word(n, scaled_digit_word(m, w))


def test_conjugate_case_for_two_and_three():
    v = integer_split_test(2, (3,))
    assert v.kind is ScaleKind.CONJUGATE
    assert v.scaled_word == (6,)
    assert str(v.zeta_left) == str(v.zeta_right) == "1 - 6t"


def test_conjugate_case_two_one():
    v = integer_split_test(2, (2, 1))
    assert v.kind is ScaleKind.CONJUGATE and v.scaled_word == (4, 4)
    left = product_sft(full_shift(2), companion_edge_sft((2, 1)))
    right = companion_edge_sft((4, 4))
    # DERIVED: Conjugate implies equal periodic point counts
    for p in range(1, 7):
        assert periodic_count(left, p) == periodic_count(right, p) == oracles.trace_power(right.adjacency, p)


def test_scaled_word_failing_lex_is_not_sft():
    # 9,9,27 is not lex maximal, so the scaled base is not an SFT base of this shape
    v = integer_split_test(3, (3, 1, 1), horizon=2000)
    assert not v.scaled_lex_ok
    assert v.kind is not ScaleKind.CONJUGATE


def test_invalid_input_word():
    with pytest.raises(NotLexMaximal):
        integer_split_test(2, (1, 2))


def test_prime_check_gamma_squared():
    report = primeness_obstruction(companion_edge_sft((3, 1, 1)), 2)
    assert report.verdict is PrimeVerdict.NO_SPLIT_FOUND
    assert report.periodic_counts == [3, 11]
    texts = sorted(a.obstruction["text"] for a in report.refutations)
    assert len(texts) == 2
    assert texts[0].startswith("9 does not divide tr(A^2) = 11")
    assert texts[1].startswith("the first factor has one periodic point")


def test_refutations_are_rechecked_from_their_data():
    X = companion_edge_sft((3, 1, 1))
    report = primeness_obstruction(X, 4)
    traces = [oracles.trace_power(X.adjacency, p) for p in range(1, 5)]
    for att in report.refutations:
        obs = att.obstruction
        if obs["kind"] == "divisibility":
            p = obs["p"]
            assert obs["trace"] == traces[p - 1]
            assert traces[p - 1] % obs["f"] != 0 or att.f[p - 1] * att.g[p - 1] != traces[p - 1]
        elif obs["kind"] == "one-point":
            seq = att.f if obs["factor"] == "first" else att.g
            assert all(v == 1 for v in seq)


def test_full_shift_six_has_a_candidate():
    report = primeness_obstruction(full_shift(6), 4)
    assert report.verdict is PrimeVerdict.CANDIDATE_SPLIT
    pairs = {(c.f, c.g) for c in report.candidates}
    assert ((2, 4, 8, 16), (3, 9, 27, 81)) in pairs or ((3, 9, 27, 81), (2, 4, 8, 16)) in pairs


def test_prime_full_shift():
    assert primeness_obstruction(full_shift(2), 4).verdict is PrimeVerdict.NO_SPLIT_FOUND


def test_non_mixing_input():
    with pytest.raises(NotMixing):
        primeness_obstruction(EdgeSFT(((0, 1), (1, 0))), 3)
    with pytest.raises(ValueError):
        primeness_obstruction(full_shift(2), 1)


def mixing_2x2():
    return st.lists(st.lists(st.integers(0, 2), min_size=2, max_size=2), min_size=2, max_size=2).filter(
        lambda A: EdgeSFT(A).is_mixing() and A[0][0] + A[1][1] >= 2
    )


@settings(max_examples=25)
@given(mixing_2x2(), mixing_2x2())
def test_true_products_are_never_declared_prime(A, B):
    # soundness: X x Y with tr >= 2 on both sides must survive the search
    report = primeness_obstruction(product_sft(EdgeSFT(A), EdgeSFT(B)), 4)
    assert report.verdict is not PrimeVerdict.NO_SPLIT_FOUND
