"""Independent reference computations used by the tests.

Nothing here calls the code under test for the quantity being checked.
"""

import itertools
from fractions import Fraction

import mpmath
import sympy


def bisect_root(coeffs_highest_first, lo, hi, iters=80):
    """Plain float-free bisection with Fractions."""
    def f(x):
        v = Fraction(0)
        for c in coeffs_highest_first:
            v = v * x + c
        return v

    lo, hi = Fraction(lo), Fraction(hi)
    flo = f(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        fm = f(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def greedy_digits(beta_mp, n, dps=400):
    """First n digits of the greedy expansion of 1 at high float precision."""
    with mpmath.workdps(dps):
        b = mpmath.mpf(beta_mp)
        x = mpmath.mpf(1)
        out = []
        for _ in range(n):
            v = b * x
            k = int(mpmath.floor(v))
            out.append(k)
            x = v - k
        return out


def code_set(d, max_len):
    """Y_beta from the digit list d (padded with zeros) directly by the definition."""
    d = list(d) + [0] * max_len
    out = set()
    for n in range(max_len):
        for b in range(d[n]):
            out.add(tuple(d[:n]) + (b,))
    return out


def language_from_code(codes, max_len):
    """Words of length <= max_len occurring in concatenations of the code.

    Such a word is a suffix of a code word followed by code words and cut
    off inside a code word, so suffixes extended by whole code words and
    truncated give every subword.
    """
    codes = [tuple(c) for c in codes]
    starts = {c[i:] for c in codes for i in range(len(c) + 1)}
    frontier = {s[:max_len] for s in starts}
    full = set(frontier)
    while frontier:
        nxt = set()
        for s in frontier:
            if len(s) >= max_len:
                continue
            for c in codes:
                t = (s + c)[:max_len]
                if t not in full:
                    nxt.add(t)
        full |= nxt
        frontier = nxt
    words = set()
    for s in full:
        for k in range(len(s) + 1):
            words.add(s[:k])
    return words


def all_words(alphabet_size, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(alphabet_size), repeat=n)


def det_one_minus_tA(matrix):
    """det(I - tA) by sympy, lowest degree first."""
    t = sympy.symbols("t")
    A = sympy.Matrix(matrix)
    p = sympy.Poly((sympy.eye(A.rows) - t * A).det(method="berkowitz"), t)
    return tuple(int(c) for c in reversed(p.all_coeffs()))


def trace_power(matrix, p):
    A = sympy.Matrix(matrix)
    return int((A**p).trace())


def kron(A, B):
    return [[A[i][j] * B[k][l] for j in range(len(A)) for l in range(len(B))]
            for i in range(len(A)) for k in range(len(B))]


def graph_closed_paths(adjacency, p):
    """Number of closed walks of length p counted by brute-force walking."""
    n = len(adjacency)
    total = 0
    for path in itertools.product(range(n), repeat=p):
        prod = 1
        for i in range(p):
            prod *= adjacency[path[i]][path[(i + 1) % p]]
            if not prod:
                break
        total += prod
    return total
