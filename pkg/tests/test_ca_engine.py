import itertools
import random

import pytest
from hypothesis import given, strategies as st

from betalab.beta_core import classify
from betalab.conjugacy import build_phi, build_phi_inverse
from betalab.ca_engine import (
    CellularAutomaton,
    Configuration,
    apply,
    blocking_candidate_from_expansion,
    codes_agree,
    compose,
    conjugate_by,
    identity,
    iterate,
    parse_configuration,
    power,
    product_ca,
    sensitivity_probe,
    shift_map,
    space_time,
    verify_blocking,
    with_shift,
)
from betalab.errors import AmbientMismatch, InadmissibleInput, NoBranchingFound, SpanTooLarge
from betalab.shifts import BetaShift, FullShift

S2 = FullShift(2)


def xor_rule(b):
    return (b[0] + b[1]) % 2


def majority(b):
    return int(sum(b) >= 2)


XOR = CellularAutomaton.from_rule(S2, 0, 1, xor_rule, name="xor")
MAJ = CellularAutomaton.from_rule(S2, -1, 1, majority, name="maj")
SIGMA = shift_map(S2)

bits = st.integers(0, 1)
configs = st.builds(
    Configuration,
    st.lists(bits, min_size=1, max_size=3),
    st.lists(bits, max_size=5),
    st.lists(bits, min_size=1, max_size=3),
    st.integers(-3, 8),
)
automata = st.sampled_from([XOR, MAJ, SIGMA, identity(S2)])


def naive_image(rule, m, a, x, lo, hi):
    # DERIVED: the definition F(x)[i] = f(x[i+m .. i+a]) read off coordinate by coordinate
    return tuple(rule(x.window(i + m, i + a)) for i in range(lo, hi + 1))


# -- configurations ------------------------------------------------------------

def test_parse_configuration():
    x = parse_configuration("0^inf 1 . 1,0 1^inf")
    assert x.window(-3, 4) == (0, 0, 1, 1, 0, 1, 1, 1)
    y = parse_configuration("0^inf . 0^inf")
    assert y == Configuration.periodic((0,))
    with pytest.raises(ValueError):
        parse_configuration("0^inf 1 1^inf")
    with pytest.raises(ValueError):
        parse_configuration("0 . 1^inf")


def test_pair_symbols():
    x = parse_configuration("0:1^inf . 1:2 0:0^inf")
    assert x[0] == (1, 2) and x[-1] == (0, 1) and x[5] == (0, 0)


@given(configs)
def test_text_round_trip(x):
    assert parse_configuration(x.to_text()) == x


@given(configs)
def test_normalization_keeps_the_point(x):
    y = x.normalized()
    assert y.window(-20, 20) == x.window(-20, 20)
    assert y == x and hash(y) == hash(x)


@given(configs, st.integers(-6, 6))
def test_shifted_reads_ahead(x, k):
    assert x.shifted(k).window(-10, 10) == x.window(k - 10, k + 10)


def test_periodic_configurations_compare_by_points():
    assert Configuration.periodic((0, 1)) == Configuration.periodic((0, 1, 0, 1))
    assert Configuration.periodic((0, 1)) != Configuration.periodic((1, 0))
    assert Configuration.periodic((0, 1)).shifted(1) == Configuration.periodic((1, 0))


# -- applying automata -----------------------------------------------------------

@given(automata, configs)
def test_apply_matches_definition(F, x):
    y = apply(F, x)
    assert y.window(-15, 15) == naive_image(F.code.local, F.memory, F.anticipation, x, -15, 15)


@given(automata, configs, st.integers(-5, 5))
def test_apply_commutes_with_shift(F, x, k):
    assert apply(F, x.shifted(k)) == apply(F, x).shifted(k)


@pytest.mark.parametrize("F, G", [(XOR, MAJ), (MAJ, XOR), (SIGMA, XOR), (XOR, XOR)])
def test_composition_on_periodic_points(F, G):
    FG = compose(F, G)
    for p in range(1, 6):
        for w in itertools.product((0, 1), repeat=p):
            x = Configuration.periodic(w)
            assert apply(FG, x) == apply(F, apply(G, x))


@given(automata, configs)
def test_power_is_repeated_application(F, x):
    assert apply(power(F, 2), x) == apply(F, apply(F, x)) == iterate(F, x, 2)
    assert apply(power(F, 0), x) == x


def test_inverse_pair_composes_to_identity():
    back = shift_map(S2, -1)
    assert codes_agree(compose(back, SIGMA), identity(S2))
    x = parse_configuration("0^inf 1 . 1,0,1 0,1^inf")
    assert apply(back, apply(SIGMA, x)) == x


def test_with_shift():
    assert codes_agree(with_shift(SIGMA, -1, 1), identity(S2))
    G = with_shift(XOR, 1, 2)
    assert (G.memory, G.anticipation) == (1, 3)
    with pytest.raises(ValueError):
        with_shift(XOR, 0, 2)
    with pytest.raises(ValueError):
        with_shift(XOR, 2, 2)
    with pytest.raises(ValueError):
        with_shift(XOR, 1, 0)


def test_ambient_checks():
    golden = BetaShift(classify("x^2-x-1"))
    sigma_g = shift_map(golden)
    with pytest.raises(InadmissibleInput):
        apply(sigma_g, parse_configuration("0^inf . 1,1 0^inf"))
    with pytest.raises(AmbientMismatch):
        compose(sigma_g, SIGMA)
    x = parse_configuration("0^inf . 1,0,1 0^inf")
    assert apply(sigma_g, x) == x.shifted(1)


def test_product_automaton_acts_coordinatewise():
    P = product_ca(XOR, SIGMA)
    x = parse_configuration("0:1^inf . 1:0 0:1 1:1 0:0^inf")
    left = Configuration(*(tuple(s[0] for s in part) for part in (x.left_period, x.center, x.right_period)), x.origin_offset)
    right = Configuration(*(tuple(s[1] for s in part) for part in (x.left_period, x.center, x.right_period)), x.origin_offset)
    y = apply(P, x)
    assert tuple(s[0] for s in y.window(-8, 8)) == apply(XOR, left).window(-8, 8)
    assert tuple(s[1] for s in y.window(-8, 8)) == apply(SIGMA, right).window(-8, 8)


@pytest.mark.parametrize("n, w", [(2, (3,)), (2, (2, 1))])
def test_conjugating_the_shift_gives_the_shift(n, w):
    phi, psi = build_phi(n, w), build_phi_inverse(n, w)
    G = conjugate_by(shift_map(phi.target), phi, psi)
    assert codes_agree(G, shift_map(phi.source))


def test_reversible_rule_through_conjugacy():
    # S_2 x S_3 seen through the six-symbol full shift X_B
    phi, psi = build_phi(2, (3,)), build_phi_inverse(2, (3,))
    Y = phi.target

    def rotate(step):
        def rule(b):
            e = b[0]
            i, k = e.label
            return type(e)(e.source, e.target, (i, (k + step) % 3))
        return rule

    F = CellularAutomaton.from_rule(Y, 0, 0, rotate(1), check_closure=True)
    F_inv = CellularAutomaton.from_rule(Y, 0, 0, rotate(-1))
    G, G_inv = conjugate_by(F, phi, psi), conjugate_by(F_inv, phi, psi)
    assert codes_agree(compose(G_inv, G), identity(phi.source))
    symbols = phi.source.alphabet
    rng = random.Random(5)
    for _ in range(50):
        x = Configuration(*(tuple(rng.choice(symbols) for _ in range(rng.randint(lo, 4))) for lo in (1, 0, 1)),
                          rng.randint(-2, 4))
        assert apply(G_inv, apply(G, x)) == x
        # the first track is untouched by a rotation of the X_C labels
        assert apply(G, x).window(-6, 6) != x.window(-6, 6)
        assert [s[0] for s in apply(G, x).window(-6, 6)] == [s[0] for s in x.window(-6, 6)]


# -- space-time ------------------------------------------------------------------

def test_space_time_of_shift_moves_left():
    x = parse_configuration("0^inf 1,1,0 . 1,0,0,1 0,1^inf")
    st_ = space_time(SIGMA, x, 6, (-5, 5))
    for t, row in enumerate(st_.rows):
        assert row == x.window(-5 + t, 5 + t)
    text = st_.ascii().splitlines()
    assert len(text) == 6 and all(len(r) == 11 for r in text)
    assert set("".join(text)) <= {".", "#"}


def test_pgm_header():
    st_ = space_time(XOR, parse_configuration("0^inf . 1 0^inf"), 4, (0, 9))
    data = st_.pgm()
    assert data.startswith(b"P5\n10 4\n255\n")
    assert len(data) == len(b"P5\n10 4\n255\n") + 40


# -- blocking words ----------------------------------------------------------------

def test_shift_refutes_zero_zero():
    cert = verify_blocking(SIGMA, (0, 0), 1, 0, 3)
    assert cert.status == "Refuted" and cert.refuted_step == 2
    assert not cert.meets_definition
    wx, wy = cert.resimulate(SIGMA)
    assert wx != wy
    assert (wx, wy) == (cert.witness.window_x, cert.witness.window_y)
    # both witnesses extend the word at coordinates 0, 1
    w = cert.witness
    assert w.x[-w.start : -w.start + 2] == (0, 0) == w.y[-w.start : -w.start + 2]


def test_identity_blocks_everything():
    cert = verify_blocking(identity(S2), (0, 1), 1, 0, 10)
    assert cert.verified and cert.verified_up_to == 10 and cert.meets_definition
    assert cert.to_json()["status"] == "VerifiedUpTo"


def test_span_budget():
    with pytest.raises(SpanTooLarge):
        verify_blocking(MAJ, (0, 0, 0), 2, 0, 12, budget=1000)


def test_blocking_candidate_from_non_sofic_expansion():
    desc = classify("x^2-3", 2000)
    cand = blocking_candidate_from_expansion(desc, 1)
    assert cand.word == (1, 1, 0, 0, 1)
    assert cand.u == (1, 0, 0) and cand.e == 4 and cand.offset == 0
    assert cand.a < cand.b


def test_no_branching_in_purely_periodic_tail(descriptors):
    with pytest.raises(NoBranchingFound):
        blocking_candidate_from_expansion(descriptors["gamma_sq"], 1)


# -- probe -------------------------------------------------------------------------

def test_probe_flags():
    eq = sensitivity_probe(SIGMA, (-1, 1), trials=20, steps=8, seed=1)
    assert eq.median == 0 and eq.flag == "equicontinuity-like"
    sens = sensitivity_probe(XOR, (0, 1), trials=20, steps=8, seed=1)
    assert sens.flag == "sensitive-like"
    again = sensitivity_probe(XOR, (0, 1), trials=20, steps=8, seed=1)
    assert again.radii == sens.radii


def test_closure_is_checked_on_construction():
    golden = BetaShift(classify("x^2-x-1"))
    # sends 0 to 1 everywhere: 11 is forbidden in the golden mean shift
    with pytest.raises(InadmissibleInput):
        CellularAutomaton.from_rule(golden, 0, 0, lambda b: 1)
    CellularAutomaton.from_rule(golden, 0, 0, lambda b: 0)
