"""Integer scaling of SFT beta-shifts and obstructions to direct factorization.

A direct product X = Y x Z of edge SFTs has non-zero spectrum equal to the
pairwise products of the spectra of Y and Z, and its periodic point counts
factor as tr(A^p) = f(p) g(p) with f, g the counts of the factors.  The
search below enumerates spectrum splits numerically and then tests the
integer constraints exactly.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from ._parallel import ordered_map
from .algebraic import polynomial_from_digits, unique_positive_root
from .beta_core import DEFAULT_HORIZON, ShiftClass, classify, format_word
from .errors import NotLexMaximal, NotMixing, VerificationFailed
from .sft_tools import (
    EdgeSFT,
    ZetaDenominator,
    companion_edge_sft,
    full_shift,
    lex_greater_all_shifts,
    nonzero_spectrum,
    product_sft,
    zeta_denominator,
)

SPECTRUM_TOL = 1e-6
INTEGER_TOL = 1e-6


def scaled_digit_word(n: int, w: Sequence[int]) -> tuple:
    """(n a_(d-1), n^2 a_(d-2), ..., n^d a_0)."""
    return tuple(n ** (j + 1) * int(a) for j, a in enumerate(w))


# ---------------------------------------------------------------------------
# scaling test
# ---------------------------------------------------------------------------

class ScaleKind(str, Enum):
    CONJUGATE = "Conjugate"
    ZETA_MISMATCH = "NotConjugateZetaMismatch"
    NOT_SFT = "NotSFT"
    NOT_SFT_UP_TO = "NotSFTUpTo"


@dataclass
class ScaleVerdict:
    kind: ScaleKind
    n: int
    word: tuple
    scaled_word: tuple
    scaled_lex_ok: bool
    zeta_left: ZetaDenominator | None = None
    zeta_right: ZetaDenominator | None = None
    horizon: int | None = None
    scaled_base: object = None
    expansion: object = None
    details: str = ""

    def to_json(self):
        out = {
            "kind": self.kind.value,
            "n": self.n,
            "digits": list(self.word),
            "scaled_digits": list(self.scaled_word),
            "scaled_lex_ok": self.scaled_lex_ok,
            "details": self.details,
        }
        if self.scaled_base is not None:
            out["scaled_base"] = {
                "minimal_polynomial": self.scaled_base.defining.format("y"),
                "approx": float(self.scaled_base),
            }
        if self.expansion is not None:
            head = self.expansion.head
            out["expansion"] = {
                "digits": list(head[:64]),
                "digits_computed": len(head),
                "tail": self.expansion.tail.to_json(),
                "exact": self.expansion.exact,
            }
        if self.zeta_left is not None:
            out["zeta_scaled"] = str(self.zeta_left)
            out["zeta_product"] = str(self.zeta_right)
        if self.horizon is not None:
            out["horizon"] = self.horizon
        return out


def integer_split_test(n: int, w: Sequence[int], horizon: int = DEFAULT_HORIZON) -> ScaleVerdict:
    """Decide whether S_(n beta) is conjugate to S_n x S_beta via the scaled word.

    If the scaled word is lexicographically maximal the conjugacy exists.
    Otherwise n*beta is expanded exactly; an SFT answer is backed by unequal
    zeta functions, a periodic one proves S_(n beta) is not an SFT.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    w = tuple(int(a) for a in w)
    if not w or w[0] < 1 or w[-1] < 1 or not lex_greater_all_shifts(w):
        raise NotLexMaximal(f"{format_word(w)} is not a valid SFT expansion word")
    scaled = scaled_digit_word(n, w)
    if lex_greater_all_shifts(scaled):
        left = zeta_denominator(companion_edge_sft(scaled))
        right = zeta_denominator(product_sft(full_shift(n), companion_edge_sft(w)))
        if left.poly != right.poly:
            raise VerificationFailed("conjugate shifts with different zeta functions",
                                     {"scaled": str(left), "product": str(right)})
        return ScaleVerdict(ScaleKind.CONJUGATE, n, w, scaled, True, zeta_left=left, zeta_right=right,
                            details=f"d(n beta) = {format_word(scaled)}")

    # n*beta is the positive root of y^d - n a_(d-1) y^(d-1) - ... - n^d a_0
    base = unique_positive_root(polynomial_from_digits(scaled))
    desc = classify(base, horizon)
    common = dict(n=n, word=w, scaled_word=scaled, scaled_lex_ok=False, scaled_base=base, expansion=desc.expansion)
    if desc.shift_class is ShiftClass.SFT:
        left = zeta_denominator(companion_edge_sft(desc.expansion.head))
        right = zeta_denominator(product_sft(full_shift(n), companion_edge_sft(w)))
        if left.poly == right.poly:
            raise VerificationFailed("scaled base is an SFT with the same zeta function as the product",
                                     {"zeta": str(left)})
        return ScaleVerdict(ScaleKind.ZETA_MISMATCH, zeta_left=left, zeta_right=right,
                            details="different zeta functions, so the shifts are not conjugate", **common)
    if desc.shift_class is ShiftClass.SOFIC:
        return ScaleVerdict(ScaleKind.NOT_SFT, details="d(n beta) is infinite and eventually periodic", **common)
    return ScaleVerdict(ScaleKind.NOT_SFT_UP_TO, horizon=horizon,
                        details=f"no finite or periodic expansion within {horizon} digits", **common)


# ---------------------------------------------------------------------------
# primeness obstruction
# ---------------------------------------------------------------------------

class PrimeVerdict(str, Enum):
    NO_SPLIT_FOUND = "NoSplitFound"
    CANDIDATE_SPLIT = "CandidateSplit"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class SplitAttempt:
    shape: tuple
    left: tuple  # spectrum of the first factor
    right: tuple
    f: tuple  # periodic point counts of the first factor, as found
    g: tuple
    outcome: str  # "refuted" or "candidate"
    obstruction: dict | None = None

    def to_json(self):
        def cx(z):
            return [round(z.real, 10), round(z.imag, 10)]

        return {
            "shape": list(self.shape),
            "left_spectrum": [cx(z) for z in self.left],
            "right_spectrum": [cx(z) for z in self.right],
            "f": [_num(v) for v in self.f],
            "g": [_num(v) for v in self.g],
            "outcome": self.outcome,
            "obstruction": self.obstruction,
        }


def _num(v):
    if isinstance(v, int):
        return v
    return [round(v.real, 10), round(v.imag, 10)]


@dataclass
class PrimenessReport:
    periodic_counts: list
    spectrum: list
    attempted_splits: list = field(default_factory=list)
    verdict: PrimeVerdict = PrimeVerdict.INCONCLUSIVE
    details: str = ""

    @property
    def refutations(self) -> list:
        return [a for a in self.attempted_splits if a.outcome == "refuted"]

    @property
    def candidates(self) -> list:
        return [a for a in self.attempted_splits if a.outcome == "candidate"]

    def to_json(self):
        out = {
            "periodic_counts": list(self.periodic_counts),
            "spectrum": [[round(z.real, 10), round(z.imag, 10)] for z in self.spectrum],
            "attempted_splits": [a.to_json() for a in self.attempted_splits],
            "verdict": self.verdict.value,
            "details": self.details,
        }
        if self.verdict is PrimeVerdict.CANDIDATE_SPLIT:
            c = self.candidates[0]
            out["split"] = {"f": list(c.f), "g": list(c.g)}
        return out


def _multiset_match(a: list, b: list, tol: float) -> bool:
    if len(a) != len(b):
        return False
    pool = list(b)
    for z in a:
        best = min(range(len(pool)), key=lambda i: abs(pool[i] - z))
        if abs(pool[best] - z) > tol * max(1.0, abs(z)):
            return False
        pool.pop(best)
    return True


def _power_sum(values, p) -> complex:
    return sum(v**p for v in values)


def _near_int(z: complex) -> int | None:
    r = round(z.real)
    if abs(z - r) <= INTEGER_TOL * max(1.0, abs(r)):
        return int(r)
    return None


def _divisors(k: int) -> list:
    k = abs(k)
    return [d for d in range(1, k + 1) if k % d == 0]


def _spectrum_splits(spec: list, a: int, b: int) -> list:
    """Pairs (M', N') with M' containing 1 and M' (x) N' = spec numerically.

    Every split M (x) N = spec appears here up to rescaling M by c and N by 1/c.
    """
    s = len(spec)
    out = []
    idx = range(s)
    for N_idx in itertools.combinations(idx, b):
        Np = [spec[i] for i in N_idx]
        for pivot in N_idx:
            rest = [i for i in idx if i != pivot]
            for S in itertools.combinations(rest, a - 1):
                Mp = [1 + 0j] + [spec[i] / spec[pivot] for i in S]
                prods = [m * v for m in Mp for v in Np]
                if _multiset_match(prods, spec, SPECTRUM_TOL):
                    out.append((tuple(Mp), tuple(Np)))
    return out


def _scales(Mp, traces, max_period):
    """Candidate scale factors c, fixed by f(p) = c^p P_M'(p) dividing tr(A^p).

    Uses the first p where both P_M'(p) and tr(A^p) are non-zero.
    """
    for p in range(1, max_period + 1):
        pm = _power_sum(Mp, p)
        if abs(pm) > SPECTRUM_TOL and traces[p - 1] != 0:
            out = []
            for f in _divisors(traces[p - 1]):
                base = f / pm
                # every p-th root of base is a possible scale
                r, th = abs(base) ** (1.0 / p), cmath.phase(base)
                out += [cmath.rect(r, (th + 2 * cmath.pi * k) / p) for k in range(p)]
            return out
    return None


def _test_candidate(Mp, Np, c, traces, max_period):
    M = tuple(c * m for m in Mp)
    N = tuple(v / c for v in Np)
    f, g = [], []
    for p in range(1, max_period + 1):
        fp, gp = _power_sum(M, p), _power_sum(N, p)
        fi, gi = _near_int(fp), _near_int(gp)
        t = traces[p - 1]
        if fi is not None:
            f.append(fi)
        else:
            f.append(fp)
        g.append(gi if gi is not None else gp)
        if fi is None or gi is None or fi < 0 or gi < 0:
            if fi is not None and fi > 0 and t % fi:
                obs = {"kind": "divisibility", "p": p, "f": fi, "trace": t,
                       "text": f"{fi} does not divide tr(A^{p}) = {t}"}
            else:
                obs = {"kind": "non-integer", "p": p,
                       "text": f"periodic counts of the factors are not non-negative integers at p = {p}"}
            return M, N, tuple(f), tuple(g), obs
        if fi * gi != t:
            obs = {"kind": "divisibility", "p": p, "f": fi, "trace": t,
                   "text": f"{fi} * {gi} != tr(A^{p}) = {t}"}
            return M, N, tuple(f), tuple(g), obs
    if all(v == 1 for v in f) or all(v == 1 for v in g):
        side = "first" if all(v == 1 for v in f) else "second"
        obs = {"kind": "one-point", "factor": side,
               "text": f"the {side} factor has one periodic point of each period; "
                       "a mixing SFT with dense periodic points is then a single point"}
        return M, N, tuple(f), tuple(g), obs
    return M, N, tuple(f), tuple(g), None


def primeness_obstruction(X: EdgeSFT, max_period: int) -> PrimenessReport:
    """Search for direct splittings X = Y x Z consistent with the spectrum and
    with the periodic point counts up to max_period.

    NoSplitFound means every enumerated candidate is refuted by a recorded
    arithmetic obstruction.
    """
    if max_period < 2:
        raise ValueError("max_period must be at least 2")
    if not X.is_mixing():
        raise NotMixing("the adjacency matrix is not primitive")
    traces = [X.trace_power(p) for p in range(1, max_period + 1)]
    spec = nonzero_spectrum(X)
    s = len(spec)
    report = PrimenessReport(traces, spec)
    shapes = [(a, s // a) for a in range(1, s + 1) if s % a == 0 and a <= s // a]

    def attempts_for(shape):
        a, b = shape
        found = []
        for Mp, Np in _spectrum_splits(spec, a, b):
            scales = _scales(Mp, traces, max_period)
            if scales is None:
                return None
            for c in scales:
                M, N, f, g, obs = _test_candidate(Mp, Np, c, traces, max_period)
                found.append(SplitAttempt(shape, M, N, f, g, "refuted" if obs else "candidate", obs))
        return found

    inconclusive = False
    seen = set()
    for shape, found in zip(shapes, ordered_map(attempts_for, shapes)):
        if found is None:
            inconclusive = True
            continue
        for att in found:
            # the same pair of counting sequences only needs to be reported once
            key = frozenset([_seq_key(att.f), _seq_key(att.g)])
            if key in seen:
                continue
            seen.add(key)
            report.attempted_splits.append(att)
    report.attempted_splits.sort(key=lambda t: (t.shape, [_sort_num(v) for v in t.f], [_sort_num(v) for v in t.g]))

    if report.candidates:
        report.verdict = PrimeVerdict.CANDIDATE_SPLIT
        c = report.candidates[0]
        report.details = (f"periodic counts split as f(p) = {list(c.f)}, g(p) = {list(c.g)} "
                          f"for p <= {max_period}; this is not a proof of a factorization")
    elif inconclusive:
        report.verdict = PrimeVerdict.INCONCLUSIVE
        report.details = "traces vanish up to the maximal period, scale of a split cannot be fixed"
    else:
        report.verdict = PrimeVerdict.NO_SPLIT_FOUND
        report.details = (
            "every spectrum split is refuted by the integer constraints; since every direct "
            "factorization of a mixing SFT into SFTs splits the non-zero spectrum this way, "
            "X has no such factorization"
        )
    return report


def _seq_key(seq):
    return tuple(v if isinstance(v, int) else (round(v.real, 6), round(v.imag, 6)) for v in seq)


def _sort_num(v):
    if isinstance(v, int):
        return (0, v, 0.0)
    return (1, v.real, v.imag)
