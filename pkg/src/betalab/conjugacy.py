"""The conjugacy S_n x X_C -> X_B for SFT beta-shifts and scaled digit words.

X_C is the labelled graph of the word a_(d-1) ... a_0: states 1..d, a star
edge ('*', j) from j to j+1, and return edges labelled (j, k), k < a_(d-j),
from j to 1.  X_B has the same shape for the scaled word, with return
labels (i_1, ..., i_j, k) where every i is a digit below n.

phi stores the n-ary digits read along a run of stars in the return edge
that ends the run.  psi reads them back by looking right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from ._parallel import ordered_map
from .blockcode import SlidingBlockCode
from .errors import LexConditionFailed, VerificationFailed
from .factorization import scaled_digit_word
from .sft_tools import companion_edge_sft, lex_greater_all_shifts
from .shifts import Edge, EdgeShift, FullShift, ProductShift

STAR = "*"


def _is_star(edge: Edge) -> bool:
    return edge.label[0] == STAR


def _check(n: int, w: Sequence[int]) -> tuple:
    w = tuple(int(d) for d in w)
    if n < 1:
        raise ValueError("n must be positive")
    if not w or w[0] < 1 or w[-1] < 1 or not lex_greater_all_shifts(w):
        raise LexConditionFailed(f"{','.join(map(str, w))} is not a valid SFT expansion word")
    scaled = scaled_digit_word(n, w)
    if not lex_greater_all_shifts(scaled):
        raise LexConditionFailed(
            f"scaled word {','.join(map(str, scaled))} is not lexicographically greater than its shifts"
        )
    return w


def c_graph(w: Sequence[int]) -> EdgeShift:
    w = tuple(w)
    d = len(w)
    edges = []
    for j in range(1, d + 1):
        edges += [Edge(j, 1, (j, k)) for k in range(w[j - 1])]
        if j < d:
            edges.append(Edge(j, j + 1, (STAR, j)))
    return EdgeShift(edges, tuple(range(1, d + 1)))


def b_graph(n: int, w: Sequence[int]) -> EdgeShift:
    w = tuple(w)
    d = len(w)
    edges = []
    for j in range(1, d + 1):
        for digits in itertools.product(range(n), repeat=j):
            edges += [Edge(j, 1, digits + (k,)) for k in range(w[j - 1])]
        if j < d:
            edges.append(Edge(j, j + 1, (STAR, j)))
    return EdgeShift(edges, tuple(range(1, d + 1)))


def build_phi(n: int, w: Sequence[int]) -> SlidingBlockCode:
    """phi : S_n x X_C -> X_B with memory -(d-1) and anticipation 0."""
    w = _check(n, w)
    d = len(w)
    source = ProductShift(FullShift(n), c_graph(w))
    target = b_graph(n, w)

    def rule(block):
        digit, e = block[-1]
        if _is_star(e):
            return Edge(e.source, e.target, e.label)
        j, k = e.label
        digits = tuple(s[0] for s in block[d - j :])
        return Edge(j, 1, digits + (k,))

    return SlidingBlockCode(source, target, -(d - 1), 0, rule, name="phi")


def build_phi_inverse(n: int, w: Sequence[int]) -> SlidingBlockCode:
    """psi : X_B -> S_n x X_C with memory 0 and anticipation d-1."""
    w = _check(n, w)
    d = len(w)
    source = b_graph(n, w)
    target = ProductShift(FullShift(n), c_graph(w))

    def rule(block):
        e = block[0]
        j = e.source
        nxt = next(f for f in block if not _is_star(f))
        digit = nxt.label[j - 1]
        if _is_star(e):
            return (digit, Edge(j, j + 1, (STAR, j)))
        return (digit, Edge(j, 1, (j, e.label[-1])))

    return SlidingBlockCode(source, target, 0, d - 1, rule, name="psi")


@dataclass
class PeriodCensus:
    p: int
    product_points: int
    expected_product: int
    b_points: int
    expected_b: int

    def to_json(self):
        return dict(self.__dict__)


@dataclass
class ConjugacyReport:
    n: int
    word: tuple
    scaled_word: tuple
    max_period: int
    census: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def to_json(self):
        return {
            "n": self.n,
            "digits": list(self.word),
            "scaled_digits": list(self.scaled_word),
            "max_period": self.max_period,
            "census": [c.to_json() for c in self.census],
            "checks": list(self.checks),
            "verified": True,  # failures raise instead
        }


def _rotate(word):
    return word[1:] + word[:1]


def _check_period(args):
    p, n, C, B, X, Y, phi, psi = args
    expected_product = n**p * C.trace_power(p)
    expected_b = B.trace_power(p)
    points = X.periodic_words(p)
    b_points = Y.periodic_words(p)
    if len(points) != expected_product:
        raise VerificationFailed(f"period {p}: {len(points)} points in S_n x X_C, expected {expected_product}",
                                 {"period": p})
    if len(b_points) != expected_b:
        raise VerificationFailed(f"period {p}: {len(b_points)} points in X_B, expected {expected_b}", {"period": p})
    images = set()
    for x in points:
        y = phi.apply_periodic(x)
        if not Y.is_periodic_word(y):
            raise VerificationFailed(f"period {p}: image is not a point of X_B", {"x": x, "phi(x)": y})
        if psi.apply_periodic(y) != x:
            raise VerificationFailed(f"period {p}: psi(phi(x)) != x", {"x": x, "phi(x)": y})
        if phi.apply_periodic(_rotate(x)) != _rotate(y):
            raise VerificationFailed(f"period {p}: phi does not commute with the shift", {"x": x})
        images.add(y)
    if len(images) != len(points):
        raise VerificationFailed(f"period {p}: phi is not injective on periodic points", {"period": p})
    for y in b_points:
        if phi.apply_periodic(psi.apply_periodic(y)) != y:
            raise VerificationFailed(f"period {p}: phi(psi(y)) != y", {"y": y})
    if images != set(b_points):
        raise VerificationFailed(f"period {p}: phi is not onto the points of X_B", {"period": p})
    return PeriodCensus(p, len(points), expected_product, len(b_points), expected_b)


def verify_conjugacy(n: int, w: Sequence[int], max_period: int = 6) -> ConjugacyReport:
    """Check phi and psi on every periodic point of period at most max_period.

    Raises VerificationFailed with a witness on the first failed check.
    """
    if max_period < 1:
        raise ValueError("max_period must be positive")
    w = _check(n, w)
    scaled = scaled_digit_word(n, w)
    phi, psi = build_phi(n, w), build_phi_inverse(n, w)
    X, Y = phi.source, phi.target
    C, B = companion_edge_sft(w), companion_edge_sft(scaled)
    report = ConjugacyReport(n, w, scaled, max_period)

    if Y.adjacency().adjacency != B.adjacency:
        raise VerificationFailed("graph of X_B does not match the scaled companion matrix", {"B": B.adjacency})
    if phi.source.right.adjacency().adjacency != C.adjacency:
        raise VerificationFailed("graph of X_C does not match the companion matrix", {"C": C.adjacency})
    report.checks.append("graphs match companion matrices")

    phi.table()
    psi.table()
    report.checks.append("rules are total on admissible blocks")

    jobs = [(p, n, C, B, X, Y, phi, psi) for p in range(1, max_period + 1)]
    report.census = ordered_map(_check_period, jobs)
    report.checks += [
        "periodic point census matches n^p tr(C^p) = tr(B^p)",
        "psi o phi = id and phi o psi = id on periodic points",
        "phi is a bijection on periodic points",
        "phi commutes with the shift on periodic points",
    ]
    return report
