"""Edge shifts, companion matrices and zeta functions.

Matrices are tuples of tuples of Python ints so that traces of high
powers never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebraic import AlgebraicReal, IntPolynomial, characteristic_polynomial, polynomial_from_digits, unique_positive_root
from .errors import NotLexMaximal, ZeroMatrix


def _as_matrix(rows) -> tuple:
    m = tuple(tuple(int(v) for v in row) for row in rows)
    if any(len(row) != len(m) for row in m):
        raise ValueError("adjacency matrix must be square")
    if any(v < 0 for row in m for v in row):
        raise ValueError("adjacency matrix entries must be non-negative")
    return m


def matmul(A, B) -> tuple:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(k) if A[i][t]) for j in range(m)) for i in range(n)
    )


def matpow(A, p: int) -> tuple:
    n = len(A)
    result = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    base = A
    while p:
        if p & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        p >>= 1
    return result


def kron(A, B) -> tuple:
    return tuple(
        tuple(A[i][j] * B[k][l] for j in range(len(A)) for l in range(len(B)))
        for i in range(len(A))
        for k in range(len(B))
    )


@dataclass(frozen=True)
class EdgeSFT:
    """Edge shift of the multigraph with the given adjacency matrix."""

    adjacency: tuple
    state_names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "adjacency", _as_matrix(self.adjacency))
        if self.state_names is not None:
            names = tuple(self.state_names)
            if len(names) != len(self.adjacency):
                raise ValueError("one name per state expected")
            object.__setattr__(self, "state_names", names)

    @property
    def size(self) -> int:
        return len(self.adjacency)

    def trace_power(self, p: int) -> int:
        P = matpow(self.adjacency, p)
        return sum(P[i][i] for i in range(self.size))

    def _support_power_positive(self, M, k) -> bool:
        B = tuple(tuple(int(v > 0) for v in row) for row in M)
        P = matpow(B, k)
        return all(v > 0 for row in P for v in row)

    def is_irreducible(self) -> bool:
        n = self.size
        if n == 0:
            return False
        M = tuple(tuple(v + (i == j) for j, v in enumerate(row)) for i, row in enumerate(self.adjacency))
        return self._support_power_positive(M, max(n - 1, 1)) and any(any(row) for row in self.adjacency)

    def is_mixing(self) -> bool:
        """Primitivity, tested with Wielandt's exponent bound (n-1)^2 + 1."""
        n = self.size
        if n == 0:
            return False
        return self._support_power_positive(self.adjacency, (n - 1) ** 2 + 1)

    def to_json(self):
        return {"adjacency": [list(r) for r in self.adjacency]}


# ---------------------------------------------------------------------------
# SFT expansions
# ---------------------------------------------------------------------------

def lex_greater_all_shifts(word: Sequence[int]) -> bool:
    """Whether w 0^inf is strictly greater than each of its proper shifts."""
    w = tuple(word)
    if not w or w[0] < 1:
        raise ValueError("expected a nonempty word with a nonzero first digit")
    n = len(w)
    # shifts by n or more give 0^inf, which is smaller since w[0] >= 1
    return all(w > w[i:] + (0,) * i for i in range(1, n))


def _check_sft_word(word) -> tuple:
    w = tuple(int(d) for d in word)
    if not w or w[0] < 1 or w[-1] < 1:
        raise NotLexMaximal("first and last digits must be at least 1")
    if not lex_greater_all_shifts(w):
        raise NotLexMaximal(f"{','.join(map(str, w))} is not lexicographically greater than all its shifts")
    return w


def beta_from_digits(word: Sequence[int]) -> AlgebraicReal:
    """The base beta whose expansion of one is the finite word a_(d-1) ... a_0."""
    w = _check_sft_word(word)
    return unique_positive_root(polynomial_from_digits(w))


def companion_edge_sft(word: Sequence[int]) -> EdgeSFT:
    """First column a_(d-1), ..., a_0 and ones on the superdiagonal."""
    w = _check_sft_word(word)
    d = len(w)
    rows = [[0] * d for _ in range(d)]
    for i in range(d):
        rows[i][0] = w[i]
        if i + 1 < d:
            rows[i][i + 1] = 1
    return EdgeSFT(rows)


def full_shift(n: int) -> EdgeSFT:
    return EdgeSFT(((n,),))


# ---------------------------------------------------------------------------
# zeta functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZetaDenominator:
    """det(I - tA); the zeta function is its reciprocal."""

    poly: IntPolynomial

    def __post_init__(self):
        if self.poly(0) != 1:
            raise ValueError("a zeta denominator has constant term 1")

    def __str__(self):
        return self.poly.format("t", ascending=True)

    def to_json(self):
        return {"coefficients": list(self.poly.coefficients), "text": str(self)}


def zeta_denominator(X: EdgeSFT) -> ZetaDenominator:
    """det(I - tA), the reversal of the characteristic polynomial of A."""
    if X.size == 0:
        return ZetaDenominator(IntPolynomial((1,)))
    chi = characteristic_polynomial(X.adjacency)
    return ZetaDenominator(IntPolynomial(tuple(reversed(chi))))


def periodic_count(X: EdgeSFT, p: int) -> int:
    """Number of points of period p, tr(A^p)."""
    if p < 1:
        raise ValueError("period must be positive")
    return X.trace_power(p)


def product_sft(X: EdgeSFT, Y: EdgeSFT) -> EdgeSFT:
    """X x Y as an edge shift: the Kronecker product of the adjacency matrices."""
    names = None
    if X.state_names is not None and Y.state_names is not None:
        names = tuple((a, b) for a in X.state_names for b in Y.state_names)
    return EdgeSFT(kron(X.adjacency, Y.adjacency), names)


def nonzero_spectrum(X: EdgeSFT, tol: float = 1e-10) -> list:
    """Numeric non-zero eigenvalues with multiplicity, from the zeta denominator."""
    coeffs = zeta_denominator(X).poly.coefficients
    # roots of t^k det(I - A/t) = reversed denominator are the eigenvalues
    highest_first = list(coeffs)
    if len(highest_first) <= 1:
        return []
    roots = np.roots(np.array(highest_first, dtype=float))
    return sorted((complex(r) for r in roots if abs(r) > tol), key=lambda z: (-abs(z), -z.real, -z.imag))


def spectral_radius(X: EdgeSFT, rtol: float = 1e-10, max_iter: int = 100_000) -> float:
    """Perron root by power iteration on A + I.

    The shift by the identity makes the Perron eigenvalue strictly dominant
    even for periodic matrices.
    """
    A = np.array(X.adjacency, dtype=float)
    if not A.any():
        raise ZeroMatrix("spectral radius of the zero matrix")
    n = len(A)
    M = A + np.eye(n)
    v = np.ones(n) / n
    rho = 0.0
    for _ in range(max_iter):
        w = M @ v
        new = float(np.linalg.norm(w, 1))
        w /= new
        if abs(new - rho) <= rtol * new and np.allclose(w, v, rtol=0, atol=rtol):
            return new - 1.0
        v, rho = w, new
    return float(max(abs(np.linalg.eigvals(A))))


def entropy(X: EdgeSFT) -> float:
    return math.log(spectral_radius(X))


def word_counts(word: Sequence[int], max_len: int) -> list:
    """Words of length L = 1..max_len in S_beta for the SFT expansion ``word``.

    Counted as labelled paths of length L leaving state 1 of the companion
    graph: state j has a_(d-j) edges back to state 1 and one edge to j+1,
    and every word of S_beta is read exactly once from state 1.
    """
    C = companion_edge_sft(word).adjacency
    out = []
    P = C
    for _ in range(max_len):
        out.append(sum(P[0]))
        P = matmul(P, C)
    return out
