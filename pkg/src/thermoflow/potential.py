"""Locally constant potentials and roof functions.

A potential of depth ``k`` depends only on the first ``k`` symbols of a
point.  Values are kept in a dense array of shape ``(n,)*k`` that is zero on
inadmissible words; every reduction below looks only at admissible entries.
"""

from __future__ import annotations

from typing import Iterator, Mapping

import numpy as np

from .errors import MismatchedSft, NotPositive, ValidationError, WordTooShort
from .sft import Sft, Word


class LcPotential:
    """Real function on the shift space depending on the first ``depth`` symbols."""

    def __init__(self, sft: Sft, depth: int, values):
        if depth < 1:
            raise ValidationError("depth must be at least 1")
        values = np.array(values, dtype=np.float64)
        shape = (sft.n,) * depth
        if values.shape != shape:
            raise ValidationError(f"values must have shape {shape}, got {values.shape}")
        mask = sft.mask(depth)
        if not np.all(np.isfinite(values[mask])):
            raise ValidationError("potential values must be finite")
        values[~mask] = 0.0
        values.flags.writeable = False
        self.sft = sft
        self.depth = depth
        self.values = values

    @classmethod
    def constant(cls, sft: Sft, c: float):
        return cls(sft, 1, np.full(sft.n, float(c)))

    @classmethod
    def zero(cls, sft: Sft):
        return cls.constant(sft, 0.0)

    @classmethod
    def from_mapping(cls, sft: Sft, depth: int, mapping: Mapping[Word, float]):
        """Build from ``{word: value}``; keys must be exactly the admissible words."""
        mask = sft.mask(depth)
        values = np.zeros((sft.n,) * depth)
        seen = set()
        for word, v in mapping.items():
            word = tuple(word)
            if len(word) != depth or not all(0 <= s < sft.n for s in word):
                raise ValidationError(f"bad word {word} for depth {depth}")
            if not mask[word]:
                raise ValidationError(f"word {word} is not admissible")
            values[word] = v
            seen.add(word)
        missing = int(mask.sum()) - len(seen)
        if missing:
            raise ValidationError(f"{missing} admissible word(s) have no value")
        return cls(sft, depth, values)

    @classmethod
    def from_function(cls, sft: Sft, depth: int, fn):
        vals = np.zeros((sft.n,) * depth)
        for w in sft.word_array(depth):
            w = tuple(int(s) for s in w)
            vals[w] = fn(w)
        return cls(sft, depth, vals)

    def __repr__(self):
        return f"{type(self).__name__}(depth={self.depth}, {dict(self.items())})"

    def __eq__(self, other):
        if not isinstance(other, LcPotential):
            return NotImplemented
        return (
            self.sft == other.sft
            and self.depth == other.depth
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def admissible_values(self) -> np.ndarray:
        """Values on admissible words, in lexicographic word order."""
        return self.values[self.sft.mask(self.depth)]

    def items(self) -> Iterator[tuple[Word, float]]:
        for w in self.sft.word_array(self.depth):
            w = tuple(int(s) for s in w)
            yield w, float(self.values[w])

    def min(self) -> float:
        return float(self.admissible_values().min())

    def max(self) -> float:
        return float(self.admissible_values().max())

    def eval(self, word) -> float:
        word = tuple(word)
        if len(word) < self.depth:
            raise WordTooShort(f"need at least {self.depth} symbols, got {len(word)}")
        return float(self.values[word[: self.depth]])

    def refine(self, depth: int) -> "LcPotential":
        """Same function represented at a larger depth."""
        if depth < self.depth:
            raise ValueError(f"cannot refine depth {self.depth} down to {depth}")
        if depth == self.depth:
            return self
        n = self.sft.n
        extra = depth - self.depth
        vals = np.broadcast_to(self.values.reshape(self.values.shape + (1,) * extra), (n,) * depth)
        return LcPotential(self.sft, depth, vals)

    def __neg__(self):
        return combine(self, 0.0, -1.0, 0.0)

    def __add__(self, other):
        return combine(self, other, 1.0, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        return combine(self, other, 1.0, -1.0)

    def __rsub__(self, other):
        return combine(self, other, -1.0, 1.0)

    def __mul__(self, c):
        if isinstance(c, LcPotential):
            return NotImplemented
        return combine(self, 0.0, float(c), 0.0)

    __rmul__ = __mul__


class Roof(LcPotential):
    """Strictly positive locally constant potential."""

    def __init__(self, sft: Sft, depth: int, values):
        super().__init__(sft, depth, values)
        lo = self.min()
        if not lo > 0:
            raise NotPositive(f"roof must be strictly positive; minimum is {lo!r}")

    @classmethod
    def of(cls, p: LcPotential) -> "Roof":
        if isinstance(p, Roof):
            return p
        return cls(p.sft, p.depth, p.values)

    def refine(self, depth: int) -> "Roof":
        return Roof.of(super().refine(depth))


def _as_potential(x, sft: Sft) -> LcPotential:
    if isinstance(x, LcPotential):
        if x.sft != sft:
            raise MismatchedSft("potentials live on different shifts")
        return x
    return LcPotential.constant(sft, float(x))


def common_depth(*ps: LcPotential) -> list[LcPotential]:
    sft = ps[0].sft
    for p in ps[1:]:
        if p.sft != sft:
            raise MismatchedSft("potentials live on different shifts")
    k = max(p.depth for p in ps)
    return [p.refine(k) for p in ps]


def combine(p, q, alpha: float, beta: float) -> LcPotential:
    """``alpha*p + beta*q`` at the larger of the two depths.

    Either argument may be a plain number, which is read as a depth-1 constant.
    """
    if isinstance(p, LcPotential):
        sft = p.sft
    elif isinstance(q, LcPotential):
        sft = q.sft
    else:
        raise TypeError("at least one operand must be an LcPotential")
    p, q = common_depth(_as_potential(p, sft), _as_potential(q, sft))
    return LcPotential(sft, p.depth, alpha * p.values + beta * q.values)


def sup_norm(p: LcPotential) -> float:
    return float(np.abs(p.admissible_values()).max())


def sup_dist(p: LcPotential, q: LcPotential) -> float:
    return sup_norm(combine(p, q, 1.0, -1.0))


def variation(p: LcPotential, j: int) -> float:
    """Largest oscillation of ``p`` on a cylinder of length ``j``."""
    if j < 1:
        raise ValueError("j must be at least 1")
    if j >= p.depth:
        return 0.0
    n, k = p.sft.n, p.depth
    mask = p.sft.mask(k).reshape(n**j, n ** (k - j))
    vals = p.values.reshape(n**j, n ** (k - j))
    hi = np.where(mask, vals, -np.inf).max(axis=1)
    lo = np.where(mask, vals, np.inf).min(axis=1)
    live = mask.any(axis=1)
    return float((hi[live] - lo[live]).max())
