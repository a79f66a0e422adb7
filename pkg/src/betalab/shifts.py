"""Concrete subshifts used as ambients for block codes and automata.

A shift here only has to answer finite-word questions: is a word in the
language, which symbols extend it, and which cyclic words are periodic
points.  Symbols are arbitrary hashable values (ints, edges, pairs).
"""

from __future__ import annotations

import itertools
import math
from collections import namedtuple
from typing import Iterable, Sequence

from . import beta_core
from .beta_core import BetaShiftDescriptor, ShiftClass, compare_eventually_periodic
from .sft_tools import EdgeSFT

Edge = namedtuple("Edge", "source target label")


class Shift:
    """Base class.  Subclasses define ``alphabet`` and ``is_admissible``."""

    alphabet: tuple = ()
    # forbidden words never need to be longer than this; None if unbounded
    order: int | None = None

    def is_admissible(self, word: Sequence) -> bool:
        raise NotImplementedError

    def extensions(self, word: Sequence) -> list:
        """Symbols s with word + s admissible, in alphabet order."""
        w = tuple(word)
        return [s for s in self.alphabet if self.is_admissible(w + (s,))]

    def prefixes(self, word: Sequence) -> list:
        """Symbols s with s + word admissible, in alphabet order."""
        w = tuple(word)
        return [s for s in self.alphabet if self.is_admissible((s,) + w)]

    def blocks(self, n: int) -> list:
        """All admissible words of length n, in lexicographic alphabet order."""
        words = [()]
        for _ in range(n):
            words = [w + (s,) for w in words for s in self.extensions(w)]
        return words

    def is_periodic_word(self, word: Sequence) -> bool:
        """Whether word^inf (two-sided) is a point of the shift."""
        w = tuple(word)
        if not w:
            return False
        k = max(2, -(-(self.order or 2 * len(w)) // len(w)) + 1)
        return self.is_admissible(w * k)

    def periodic_words(self, p: int) -> list:
        """Words w of length p with w^inf in the shift, one per periodic point."""
        return [w for w in self.blocks(p) if self.is_periodic_word(w)]

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return id(self)


class FullShift(Shift):
    def __init__(self, n: int):
        if n < 1:
            raise ValueError("alphabet size must be positive")
        self.n = n
        self.alphabet = tuple(range(n))
        self.order = 1

    def is_admissible(self, word) -> bool:
        return all(s in range(self.n) for s in word)

    def extensions(self, word) -> list:
        return list(self.alphabet)

    def prefixes(self, word) -> list:
        return list(self.alphabet)

    def blocks(self, n):
        return list(itertools.product(self.alphabet, repeat=n))

    def is_periodic_word(self, word) -> bool:
        return bool(word) and self.is_admissible(word)

    def _key(self):
        return self.n

    def __repr__(self):
        return f"FullShift({self.n})"


class EdgeShift(Shift):
    """Bi-infinite paths in a labelled multigraph; symbols are Edge triples."""

    def __init__(self, edges: Iterable[Edge], states: Sequence | None = None):
        self.edges = tuple(Edge(*e) for e in edges)
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("edges must be distinct")
        self.alphabet = self.edges
        self.order = 2
        if states is None:
            states = sorted({e.source for e in self.edges} | {e.target for e in self.edges})
        self.states = tuple(states)
        self._out = {s: [e for e in self.edges if e.source == s] for s in self.states}
        self._in = {s: [e for e in self.edges if e.target == s] for s in self.states}
        self._set = frozenset(self.edges)

    def adjacency(self) -> EdgeSFT:
        idx = {s: i for i, s in enumerate(self.states)}
        rows = [[0] * len(self.states) for _ in self.states]
        for e in self.edges:
            rows[idx[e.source]][idx[e.target]] += 1
        return EdgeSFT(rows, self.states)

    def is_admissible(self, word) -> bool:
        w = tuple(word)
        if any(e not in self._set for e in w):
            return False
        return all(w[i].target == w[i + 1].source for i in range(len(w) - 1))

    def extensions(self, word) -> list:
        w = tuple(word)
        return list(self._out[w[-1].target]) if w else list(self.edges)

    def prefixes(self, word) -> list:
        w = tuple(word)
        return list(self._in[w[0].source]) if w else list(self.edges)

    def is_periodic_word(self, word) -> bool:
        w = tuple(word)
        return bool(w) and self.is_admissible(w) and w[-1].target == w[0].source

    def periodic_words(self, p: int) -> list:
        """Closed paths of length p, enumerated by depth-first search."""
        out = []

        def walk(path):
            if len(path) == p:
                if path[-1].target == path[0].source:
                    out.append(tuple(path))
                return
            for e in self._out[path[-1].target]:
                path.append(e)
                walk(path)
                path.pop()

        for e in self.edges:
            walk([e])
        return out

    def _key(self):
        return self.edges

    def __repr__(self):
        return f"EdgeShift({len(self.states)} states, {len(self.edges)} edges)"


class BetaShift(Shift):
    """S_beta with words tested against d*(beta).

    For a NotSoficUpTo descriptor only the computed prefix of d(beta) is
    known, and longer words raise HorizonExceeded.
    """

    def __init__(self, desc: BetaShiftDescriptor):
        self.desc = desc
        self.alphabet = tuple(range(desc.alphabet_size))
        if desc.shift_class is ShiftClass.SFT:
            self.order = len(desc.expansion.head)
        else:
            self.order = None

    def is_admissible(self, word) -> bool:
        return beta_core.is_admissible(self.desc, word)

    def extensions(self, word) -> list:
        # only suffixes ending at the new symbol need checking
        w = tuple(word)
        n = len(w) + 1
        D = self.desc.dstar.take(n)
        out = []
        for s in self.alphabet:
            v = w + (s,)
            if all(v[i:] <= D[: n - i] for i in range(n)):
                out.append(s)
        return out

    def is_periodic_word(self, word) -> bool:
        w = tuple(word)
        if not w or not self.is_admissible(w):
            return False
        ds = self.desc.dstar
        if ds.period is None:
            return self.is_admissible(w * (len(ds.prefix) // len(w) + 2))
        # every shift of w^inf must be at most d*
        for i in range(len(w)):
            r = w[i:] + w[:i]
            if compare_eventually_periodic((), r, ds.prefix, ds.period) > 0:
                return False
        return True

    def _key(self):
        return (self.desc.expansion.head, self.desc.expansion.tail)

    def __repr__(self):
        return f"BetaShift({beta_core.format_word(self.desc.expansion.head)}, {self.desc.shift_class.value})"


class ProductShift(Shift):
    """X x Y with pair symbols (x, y)."""

    def __init__(self, left: Shift, right: Shift):
        self.left, self.right = left, right
        self.alphabet = tuple(itertools.product(left.alphabet, right.alphabet))
        if left.order is None or right.order is None:
            self.order = None
        else:
            self.order = max(left.order, right.order)

    @staticmethod
    def _split(word):
        w = tuple(word)
        return tuple(s[0] for s in w), tuple(s[1] for s in w)

    def is_admissible(self, word) -> bool:
        a, b = self._split(word)
        if any(len(s) != 2 for s in word):
            return False
        return self.left.is_admissible(a) and self.right.is_admissible(b)

    def extensions(self, word) -> list:
        a, b = self._split(word)
        return list(itertools.product(self.left.extensions(a), self.right.extensions(b)))

    def prefixes(self, word) -> list:
        a, b = self._split(word)
        return list(itertools.product(self.left.prefixes(a), self.right.prefixes(b)))

    def is_periodic_word(self, word) -> bool:
        a, b = self._split(word)
        return bool(word) and self.left.is_periodic_word(a) and self.right.is_periodic_word(b)

    def periodic_words(self, p: int) -> list:
        return [tuple(zip(a, b)) for a in self.left.periodic_words(p) for b in self.right.periodic_words(p)]

    def _key(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"ProductShift({self.left!r}, {self.right!r})"


def cyclic_rotations(word: Sequence) -> list:
    w = tuple(word)
    return [w[i:] + w[:i] for i in range(len(w))]


def least_period(word: Sequence) -> int:
    return len(beta_core.primitive_root(word))


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
