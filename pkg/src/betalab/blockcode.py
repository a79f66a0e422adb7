"""Sliding block codes F(x)[i] = f(x[i+m], ..., x[i+a])."""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import AmbientMismatch, InadmissibleInput
from .shifts import Shift


class SlidingBlockCode:
    """A local rule with memory ``m`` and anticipation ``a`` (m <= a).

    ``rule`` receives the window x[i+m .. i+a] as a tuple.  Results are
    memoized, so a rule given as a function is evaluated once per block.
    """

    def __init__(self, source: Shift, target: Shift, memory: int, anticipation: int,
                 rule: Callable | dict, name: str | None = None):
        if memory > anticipation:
            raise ValueError("memory must not exceed anticipation")
        self.source, self.target = source, target
        self.memory, self.anticipation = memory, anticipation
        self.name = name
        if isinstance(rule, dict):
            table = dict(rule)

            def lookup(block, _t=table):
                try:
                    return _t[block]
                except KeyError:
                    raise InadmissibleInput(f"no rule entry for block {block!r}") from None

            self._fn = lookup
            self._cache = table
        else:
            self._fn = rule
            self._cache = {}

    @property
    def window(self) -> int:
        return self.anticipation - self.memory + 1

    @property
    def diameter(self) -> int:
        return self.anticipation - self.memory

    @property
    def radius(self) -> int:
        return max(-self.memory, self.anticipation, 0)

    def local(self, block: tuple):
        try:
            return self._cache[block]
        except KeyError:
            out = self._cache[block] = self._fn(block)
            return out

    def apply_word(self, word: Sequence) -> tuple:
        """Image of a finite word; the result is shorter by the diameter.

        If word[0] sits at coordinate L the image starts at coordinate L - m.
        """
        w = tuple(word)
        k = self.window
        return tuple(self.local(w[i : i + k]) for i in range(len(w) - k + 1))

    def apply_periodic(self, word: Sequence) -> tuple:
        """Image of the periodic point word^inf, as a word of the same length."""
        w = tuple(word)
        p = len(w)
        m, a = self.memory, self.anticipation
        return tuple(self.local(tuple(w[(i + j) % p] for j in range(m, a + 1))) for i in range(p))

    def table(self) -> dict:
        """The rule on every admissible source block, checked against the target."""
        out = {}
        for b in self.source.blocks(self.window):
            v = self.local(b)
            if not self.target.is_admissible((v,)):
                raise InadmissibleInput(f"image {v!r} of {b!r} is not a target symbol")
            out[b] = v
        return out

    def tabulated(self) -> "SlidingBlockCode":
        return SlidingBlockCode(self.source, self.target, self.memory, self.anticipation, self.table(), self.name)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "memory": self.memory,
            "anticipation": self.anticipation,
            "table": [[_jsonable(list(b)), _jsonable(v)] for b, v in self.table().items()],
        }

    def __repr__(self):
        label = self.name or "rule"
        return f"SlidingBlockCode({label}, m={self.memory}, a={self.anticipation})"


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def compose(outer: SlidingBlockCode, inner: SlidingBlockCode) -> SlidingBlockCode:
    """outer o inner: apply ``inner`` first."""
    if inner.target != outer.source:
        raise AmbientMismatch("target of the inner code differs from the source of the outer code")

    def rule(block):
        return outer.local(inner.apply_word(block))

    name = None
    if outer.name and inner.name:
        name = f"{outer.name}*{inner.name}"
    return SlidingBlockCode(inner.source, outer.target, outer.memory + inner.memory,
                            outer.anticipation + inner.anticipation, rule, name)


def codes_agree(F: SlidingBlockCode, G: SlidingBlockCode) -> bool:
    """Whether two codes define the same map, compared on a common window."""
    if F.source != G.source or F.target != G.target:
        return False
    m = min(F.memory, G.memory)
    a = max(F.anticipation, G.anticipation)
    for b in F.source.blocks(a - m + 1):
        fb = b[F.memory - m : F.memory - m + F.window]
        gb = b[G.memory - m : G.memory - m + G.window]
        if F.local(fb) != G.local(gb):
            return False
    return True
