"""Cellular automata on subshifts.

Configurations are spatially eventually periodic points u^inf w . v^inf.
The image of such a point under a sliding block code again has this
shape, so every computation here is exact.
"""

from __future__ import annotations

import math
import random
import re
import statistics
from dataclasses import dataclass, field
from typing import Sequence

from ._parallel import ordered_map
from .beta_core import BetaShiftDescriptor, Finite, Periodic, is_admissible, normalize_periodic, primitive_root
from .blockcode import SlidingBlockCode, codes_agree as _codes_agree, compose as _compose
from .errors import AmbientMismatch, InadmissibleInput, NoBranchingFound, SpanTooLarge
from .shifts import ProductShift, Shift

DEFAULT_BUDGET = 200_000


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------

class Configuration:
    """The point x with x[i] = center[i + origin_offset] inside the center,
    left_period repeated to the left of it and right_period to the right.
    """

    __slots__ = ("left_period", "center", "right_period", "origin_offset")

    def __init__(self, left_period: Sequence, center: Sequence, right_period: Sequence, origin_offset: int = 0):
        left_period, right_period = tuple(left_period), tuple(right_period)
        if not left_period or not right_period:
            raise ValueError("periods must be nonempty")
        self.left_period = left_period
        self.center = tuple(center)
        self.right_period = right_period
        self.origin_offset = int(origin_offset)

    @classmethod
    def periodic(cls, word: Sequence) -> "Configuration":
        return cls(word, (), word, 0).normalized()

    @property
    def start(self) -> int:
        """Coordinate of center[0]."""
        return -self.origin_offset

    @property
    def end(self) -> int:
        """Coordinate just after the center."""
        return len(self.center) - self.origin_offset

    def __getitem__(self, i: int):
        j = i + self.origin_offset
        if j < 0:
            return self.left_period[j % len(self.left_period)]
        if j >= len(self.center):
            return self.right_period[(j - len(self.center)) % len(self.right_period)]
        return self.center[j]

    def window(self, lo: int, hi: int) -> tuple:
        """x[lo .. hi], both ends included."""
        return tuple(self[i] for i in range(lo, hi + 1))

    def normalized(self) -> "Configuration":
        """Primitive periods and the shortest center describing the same point."""
        u = primitive_root(self.left_period)
        head, v = normalize_periodic(self.center, self.right_period)
        c = list(head)
        off = self.origin_offset
        while c and c[0] == u[0]:
            u = u[1:] + (u[0],)
            c.pop(0)
            off -= 1
        return Configuration(u, tuple(c), v, off)

    def shifted(self, k: int = 1) -> "Configuration":
        """sigma^k(x)."""
        return Configuration(self.left_period, self.center, self.right_period, self.origin_offset + k)

    def _span_with(self, other: "Configuration") -> tuple:
        lo = min(self.start, other.start) - math.lcm(len(self.left_period), len(other.left_period))
        hi = max(self.end, other.end) + math.lcm(len(self.right_period), len(other.right_period))
        return lo, hi

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        lo, hi = self._span_with(other)
        return self.window(lo, hi) == other.window(lo, hi)

    def __hash__(self):
        return hash((_min_rotation(primitive_root(self.left_period)), _min_rotation(primitive_root(self.right_period))))

    def check_admissible(self, ambient: Shift) -> bool:
        """Whether every window of the point up to the ambient's forbidden
        word length is admissible.  Exact for SFT ambients; for others the
        window length is a heuristic bound."""
        k = ambient.order
        if k is None:
            k = max(32, 4 * (len(self.left_period) + len(self.right_period) + len(self.center)))
        lo = self.start - k - len(self.left_period)
        hi = self.end + k + len(self.right_period)
        return ambient.is_admissible(self.window(lo, hi))

    def to_text(self) -> str:
        cfg = self
        if not 0 <= self.origin_offset <= len(self.center):
            # unroll periods until the origin sits inside the center
            lo, hi = min(0, self.start), max(0, self.end)
            cfg = Configuration(
                _rotate(self.left_period, (lo - self.start) % len(self.left_period)),
                self.window(lo, hi - 1),
                _rotate(self.right_period, (hi - self.end) % len(self.right_period)),
                -lo,
            )
        left, right = cfg.center[: cfg.origin_offset], cfg.center[cfg.origin_offset :]
        parts = [f"{_fmt(cfg.left_period)}^inf"]
        if left:
            parts.append(_fmt(left))
        parts.append(".")
        if right:
            parts.append(_fmt(right))
        parts.append(f"{_fmt(cfg.right_period)}^inf")
        return " ".join(parts)

    def __repr__(self):
        return f"Configuration({self.to_text()!r})"

    def to_json(self):
        return {
            "left_period": _jsonable(self.left_period),
            "center": _jsonable(self.center),
            "right_period": _jsonable(self.right_period),
            "origin_offset": self.origin_offset,
            "text": self.to_text(),
        }


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _rotate(w: tuple, k: int) -> tuple:
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def _min_rotation(w: tuple) -> tuple:
    return min(_rotate(w, k) for k in range(len(w)))


def _fmt_symbol(s) -> str:
    if isinstance(s, tuple):
        return ":".join(_fmt_symbol(t) for t in s)
    return str(s)


def _fmt(word) -> str:
    return ",".join(_fmt_symbol(s) for s in word)


def _parse_symbol(tok: str):
    tok = tok.strip()
    if ":" in tok:
        return tuple(_parse_symbol(t) for t in tok.split(":"))
    return int(tok)


def _parse_symbols(text: str) -> tuple:
    text = text.replace(" ", ",")
    return tuple(_parse_symbol(t) for t in text.split(",") if t.strip())


_PERIOD_RE = re.compile(r"^(?P<word>.+?)\^inf$")


def parse_configuration(text: str) -> Configuration:
    """Parse ``u^inf w1 . w2 v^inf``.  Symbols are comma separated ints, or
    ``a:b`` pairs for product shifts; the origin is the first symbol after
    the dot."""
    if text.count(".") != 1:
        raise ValueError("configuration needs exactly one '.' marking the origin")
    left, right = text.split(".")
    ltoks, rtoks = left.split(), right.split()
    if not ltoks or not rtoks:
        raise ValueError("expected 'u^inf w . w v^inf'")
    mu, mv = _PERIOD_RE.match(ltoks[0]), _PERIOD_RE.match(rtoks[-1])
    if not mu or not mv:
        raise ValueError("the leftmost and rightmost tokens must have the form 'word^inf'")
    u, v = _parse_symbols(mu["word"]), _parse_symbols(mv["word"])
    w1 = _parse_symbols(",".join(ltoks[1:]))
    w2 = _parse_symbols(",".join(rtoks[:-1]))
    return Configuration(u, w1 + w2, v, len(w1))


# ---------------------------------------------------------------------------
# cellular automata
# ---------------------------------------------------------------------------

class CellularAutomaton:
    """A sliding block code from a shift to itself."""

    def __init__(self, code: SlidingBlockCode, check_closure: bool = False):
        if code.source != code.target:
            raise AmbientMismatch("a cellular automaton maps a shift to itself")
        self.code = code
        if check_closure:
            self.check_closure()

    @classmethod
    def from_rule(cls, ambient: Shift, memory: int, anticipation: int, rule, name=None, check_closure=True):
        return cls(SlidingBlockCode(ambient, ambient, memory, anticipation, rule, name), check_closure)

    @property
    def ambient(self) -> Shift:
        return self.code.source

    @property
    def memory(self) -> int:
        return self.code.memory

    @property
    def anticipation(self) -> int:
        return self.code.anticipation

    @property
    def radius(self) -> int:
        return self.code.radius

    @property
    def name(self):
        return self.code.name

    def check_closure(self, budget: int = DEFAULT_BUDGET) -> None:
        """Every admissible block maps to an admissible word.

        Blocks of length window + order - 1 are enumerated, which is exact
        for SFT ambients.  Skipped when that would exceed ``budget`` blocks.
        """
        k = self.ambient.order
        if k is None:
            return
        n = self.code.window + k - 1
        if len(self.ambient.alphabet) ** n > budget:
            return
        for b in self.ambient.blocks(n):
            img = self.code.apply_word(b)
            if not self.ambient.is_admissible(img):
                raise InadmissibleInput(f"image {img!r} of admissible block {b!r} is not admissible")

    def apply_word(self, word) -> tuple:
        return self.code.apply_word(word)

    def __repr__(self):
        return f"CellularAutomaton({self.name or 'rule'}, m={self.memory}, a={self.anticipation})"

    def to_json(self):
        return self.code.to_json()


def apply(F: CellularAutomaton, x: Configuration, check: bool = True) -> Configuration:
    """F(x), exactly."""
    if check and not x.check_admissible(F.ambient):
        raise InadmissibleInput(f"{x.to_text()} is not a point of the ambient shift")
    m, a = F.memory, F.anticipation
    S, E = x.start, x.end
    nu, nv = len(x.left_period), len(x.right_period)
    lo = S - a - nu + m
    hi = E - m + nv - 1 + a
    img = F.code.apply_word(x.window(lo, hi))
    # img[0] sits at coordinate lo - m
    base = lo - m

    def y(i):
        return img[i - base]

    u = tuple(y(i) for i in range(S - a - nu, S - a))
    c = tuple(y(i) for i in range(S - a, E - m))
    v = tuple(y(i) for i in range(E - m, E - m + nv))
    return Configuration(u, c, v, -(S - a)).normalized()


def iterate(F: CellularAutomaton, x: Configuration, n: int) -> Configuration:
    for i in range(n):
        x = apply(F, x, check=(i == 0))
    return x


def compose(F: CellularAutomaton, G: CellularAutomaton) -> CellularAutomaton:
    """F o G."""
    if F.ambient != G.ambient:
        raise AmbientMismatch("automata act on different shifts")
    return CellularAutomaton(_compose(F.code, G.code))


def identity(ambient: Shift) -> CellularAutomaton:
    return CellularAutomaton.from_rule(ambient, 0, 0, lambda b: b[0], name="id", check_closure=False)


def shift_map(ambient: Shift, k: int = 1) -> CellularAutomaton:
    """sigma^k, with sigma(x)[i] = x[i+1]."""
    name = "sigma" if k == 1 else f"sigma^{k}"
    return CellularAutomaton.from_rule(ambient, k, k, lambda b: b[0], name=name, check_closure=False)


def power(F: CellularAutomaton, q: int) -> CellularAutomaton:
    if q < 0:
        raise ValueError("power must be non-negative")
    if q == 0:
        return identity(F.ambient)
    out = F
    for _ in range(q - 1):
        out = compose(F, out)
    return out


def with_shift(F: CellularAutomaton, p: int, q: int) -> CellularAutomaton:
    """sigma^p o F^q for coprime p, q with q > 0."""
    if q <= 0 or math.gcd(p, q) != 1:
        raise ValueError("direction p/q needs q > 0 and gcd(p, q) = 1")
    G = power(F, q)
    if p == 0:
        return G
    return compose(shift_map(F.ambient, p), G)


def product_ca(F: CellularAutomaton, G: CellularAutomaton) -> CellularAutomaton:
    """F x G acting on pairs."""
    m = min(F.memory, G.memory)
    a = max(F.anticipation, G.anticipation)
    fo, go = F.memory - m, G.memory - m
    fw, gw = F.code.window, G.code.window

    def rule(block):
        xs = tuple(s[0] for s in block)
        ys = tuple(s[1] for s in block)
        return (F.code.local(xs[fo : fo + fw]), G.code.local(ys[go : go + gw]))

    name = f"{F.name}x{G.name}" if F.name and G.name else None
    # closure of each track gives closure of the product
    return CellularAutomaton.from_rule(ProductShift(F.ambient, G.ambient), m, a, rule, name=name, check_closure=False)


def conjugate_by(F: CellularAutomaton, phi: SlidingBlockCode, psi: SlidingBlockCode) -> CellularAutomaton:
    """psi o F o phi, for a conjugacy phi : X -> Y with inverse psi and F on Y."""
    if phi.target != F.ambient or psi.source != F.ambient or phi.source != psi.target:
        raise AmbientMismatch("phi, psi and F do not fit together")
    return CellularAutomaton(_compose(psi, _compose(F.code, phi)))


def codes_agree(F: CellularAutomaton, G: CellularAutomaton) -> bool:
    return _codes_agree(F.code, G.code)


# ---------------------------------------------------------------------------
# space-time diagrams
# ---------------------------------------------------------------------------

_GLYPHS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"


@dataclass
class SpaceTime:
    rows: list
    window: tuple
    alphabet: tuple

    def _index(self, s) -> int:
        return self.alphabet.index(s)

    def ascii(self) -> str:
        if len(self.alphabet) == 2:
            glyphs = ".#"
        else:
            glyphs = _GLYPHS
        lines = []
        for row in self.rows:
            lines.append("".join(glyphs[self._index(s)] if self._index(s) < len(glyphs) else "?" for s in row))
        return "\n".join(lines)

    def pgm(self) -> bytes:
        """Binary PGM (P5), one gray level per symbol, time going down."""
        k = max(len(self.alphabet) - 1, 1)
        h, w = len(self.rows), self.window[1] - self.window[0] + 1
        body = bytes(255 - (255 * self._index(s)) // k for row in self.rows for s in row)
        return f"P5\n{w} {h}\n255\n".encode() + body

    def to_json(self):
        return {"window": list(self.window), "rows": [_jsonable(list(r)) for r in self.rows]}


def space_time(F: CellularAutomaton, x: Configuration, steps: int, window: tuple) -> SpaceTime:
    """Rows F^t(x)[l..r] for t = 0 .. steps-1."""
    if steps < 1:
        raise ValueError("steps must be positive")
    lo, hi = window
    if lo > hi:
        raise ValueError("empty window")
    rows = []
    for t in range(steps):
        if t:
            x = apply(F, x, check=False)
        elif not x.check_admissible(F.ambient):
            raise InadmissibleInput(f"{x.to_text()} is not a point of the ambient shift")
        rows.append(x.window(lo, hi))
    return SpaceTime(rows, (lo, hi), tuple(F.ambient.alphabet))


# ---------------------------------------------------------------------------
# blocking words
# ---------------------------------------------------------------------------

@dataclass
class BlockingWitness:
    step: int
    start: int  # coordinate of the first symbol of both extensions
    x: tuple
    y: tuple
    window_x: tuple
    window_y: tuple

    def to_json(self):
        return {
            "step": self.step,
            "start": self.start,
            "x": _jsonable(self.x),
            "y": _jsonable(self.y),
            "window_x": _jsonable(self.window_x),
            "window_y": _jsonable(self.window_y),
        }


@dataclass
class BlockingCertificate:
    word: tuple
    e: int
    p: int
    verified_up_to: int
    status: str  # "VerifiedUpTo" or "Refuted"
    meets_definition: bool  # e >= r + 1
    refuted_step: int | None = None
    witness: BlockingWitness | None = None
    extensions_checked: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.status == "VerifiedUpTo"

    def resimulate(self, F: CellularAutomaton) -> tuple:
        """Recompute the two windows of the witness pair at the refuted step."""
        if self.witness is None:
            raise ValueError("certificate has no witness")
        w = self.witness
        return (_window_after(F, w.x, w.start, w.step, self.p, self.e),
                _window_after(F, w.y, w.start, w.step, self.p, self.e))

    def to_json(self):
        out = {
            "word": _jsonable(self.word),
            "e": self.e,
            "p": self.p,
            "status": self.status,
            "verified_up_to": self.verified_up_to,
            "meets_definition": self.meets_definition,
            "extensions_checked": list(self.extensions_checked),
        }
        if self.witness is not None:
            out["refuted_step"] = self.refuted_step
            out["witness"] = self.witness.to_json()
        return out


def _window_after(F: CellularAutomaton, word: tuple, start: int, n: int, p: int, e: int) -> tuple:
    z = tuple(word)
    for _ in range(n):
        z = F.code.apply_word(z)
    # after n steps z[0] sits at coordinate start - n*m
    first = start - n * F.memory
    return z[p - first : p - first + e]


def _extensions(ambient: Shift, w: tuple, left: int, right: int, budget: int) -> list:
    """Admissible words u w v with |u| = left and |v| = right."""
    rights = [w]
    for _ in range(right):
        rights = [z + (s,) for z in rights for s in ambient.extensions(z)]
        if len(rights) > budget:
            raise SpanTooLarge(f"more than {budget} right extensions of length {right}")
    out = rights
    for _ in range(left):
        out = [(s,) + z for z in out for s in ambient.prefixes(z)]
        if len(out) > budget:
            raise SpanTooLarge(f"more than {budget} extensions to the span")
    return out


def verify_blocking(F: CellularAutomaton, w: Sequence, e: int, p: int, N: int,
                    budget: int = DEFAULT_BUDGET) -> BlockingCertificate:
    """Check F^n(x)[p, p+e-1] = F^n(y)[p, p+e-1] for all x, y in [w]_0, n <= N.

    For each n every admissible extension of w to the dependence span
    [p + n m, p + e - 1 + n a] is enumerated, so the answer is exact for the
    steps checked.
    """
    w = tuple(w)
    if not F.ambient.is_admissible(w):
        raise InadmissibleInput("the word is not admissible")
    if not 1 <= e <= len(w) or not 0 <= p <= len(w) - e:
        raise ValueError("need 1 <= e <= |w| and 0 <= p <= |w| - e")
    m, a = F.memory, F.anticipation
    cert = BlockingCertificate(w, e, p, 0, "VerifiedUpTo", e >= F.radius + 1)
    for n in range(1, N + 1):
        L = min(0, p + n * m)
        R = max(len(w) - 1, p + e - 1 + n * a)
        exts = _extensions(F.ambient, w, -L, R - (len(w) - 1), budget)
        cert.extensions_checked.append(len(exts))
        seen = {}
        for z in exts:
            win = _window_after(F, z, L, n, p, e)
            if not seen:
                seen[win] = z
            elif win not in seen:
                first_win, first = next(iter(seen.items()))
                cert.status = "Refuted"
                cert.refuted_step = n
                cert.witness = BlockingWitness(n, L, first, z, first_win, win)
                return cert
        cert.verified_up_to = n
    return cert


@dataclass
class BlockingCandidate:
    word: tuple
    e: int
    offset: int
    u: tuple
    a: int
    b: int
    scanned: int

    def to_json(self):
        return {"word": list(self.word), "e": self.e, "offset": self.offset, "u": list(self.u),
                "a": self.a, "b": self.b, "scanned": self.scanned}


def blocking_candidate_from_expansion(desc: BetaShiftDescriptor, r: int) -> BlockingCandidate:
    """Shortest prefix p = p'ub of d(beta) where u has length 3r and ua, ub
    both occur in d(beta) with a < b.  The protected window is p'u, that is
    e = |p| - 1 at offset 0."""
    if r < 1:
        raise ValueError("radius must be positive")
    exp = desc.expansion
    k = 3 * r
    if isinstance(exp.tail, Finite):
        n = len(exp.head) + k + 1
    elif isinstance(exp.tail, Periodic):
        n = len(exp.head) + 2 * len(exp.tail.period) + k + 1
    else:
        n = len(exp.head)
    s = exp.prefix(n)
    follow = {}
    for t in range(k, n):
        follow.setdefault(s[t - k : t], set()).add(s[t])
    for t in range(k, n):
        u, b = s[t - k : t], s[t]
        smaller = [c for c in follow[u] if c < b]
        if smaller and is_admissible(desc, s[: t + 1]):
            word = s[: t + 1]
            return BlockingCandidate(word, len(word) - 1, 0, u, min(smaller), b, n)
    raise NoBranchingFound(f"no word of length {k} with two continuations in the first {n} digits")


# ---------------------------------------------------------------------------
# sensitivity probe
# ---------------------------------------------------------------------------

@dataclass
class ProbeResult:
    direction: tuple
    trials: int
    steps: int
    seed: int
    radii: list
    half_radii: list
    flag: str

    @property
    def min(self):
        return min(self.radii)

    @property
    def max(self):
        return max(self.radii)

    @property
    def median(self):
        return statistics.median(self.radii)

    @property
    def median_half(self):
        return statistics.median(self.half_radii)

    def to_json(self):
        return {
            "direction": list(self.direction),
            "trials": self.trials,
            "steps": self.steps,
            "seed": self.seed,
            "min": self.min,
            "median": self.median,
            "max": self.max,
            "median_at_half": self.median_half,
            "flag": self.flag,
            "heuristic": True,
        }


def _random_word(ambient: Shift, n: int, rng: random.Random) -> tuple:
    w = ()
    for _ in range(n):
        ext = ambient.extensions(w)
        if not ext:
            raise InadmissibleInput("sampling reached a dead end")
        w += (rng.choice(ext),)
    return w


def _probe_trial(args):
    G, H, T, seed = args
    rng = random.Random(seed)
    amb = G.ambient
    for _ in range(100):
        x = _random_word(amb, 2 * H + 1, rng)
        alts = [s for s in amb.alphabet if s != x[H] and amb.is_admissible(x[:H] + (s,) + x[H + 1 :])]
        if alts:
            break
    else:
        raise InadmissibleInput("no admissible flip at the origin found")
    y = x[:H] + (rng.choice(alts),) + x[H + 1 :]
    m = G.memory
    radii = []
    lo = -H
    for t in range(1, T + 1):
        x, y = G.code.apply_word(x), G.code.apply_word(y)
        lo -= m
        diff = [abs(lo + i) for i in range(len(x)) if x[i] != y[i]]
        radii.append(max(diff) if diff else 0)
    return radii


def sensitivity_probe(F: CellularAutomaton, direction: tuple, trials: int = 200, steps: int = 16,
                      seed: int = 0) -> ProbeResult:
    """Heuristic: how far does a one-symbol perturbation at the origin spread
    under G = sigma^p o F^q?

    Each trial samples an admissible word around the origin, changes the
    origin symbol, runs G on both and records the largest |i| with a
    difference.  The sampled window is wide enough that differences moving
    at speed at most the radius stay inside it.
    """
    p, q = direction
    G = with_shift(F, p, q)
    R = max(G.radius, 1)
    H = 2 * steps * R
    master = random.Random(seed)
    seeds = [master.getrandbits(64) for _ in range(trials)]
    runs = ordered_map(_probe_trial, [(G, H, steps, s) for s in seeds])
    final = [r[-1] for r in runs]
    half = [r[max(steps // 2 - 1, 0)] for r in runs]
    med, med_half = statistics.median(final), statistics.median(half)
    if med == 0:
        flag = "equicontinuity-like"
    elif med > med_half:
        flag = "sensitive-like"
    else:
        flag = "bounded-nonzero"
    return ProbeResult((p, q), trials, steps, seed, final, half, flag)
