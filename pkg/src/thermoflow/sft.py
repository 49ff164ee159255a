"""One-sided sub-shifts of finite type.

Symbols are 0-based everywhere inside the package.  The model file format and
the CLI use 1-based symbols; the conversion lives in :mod:`thermoflow.model`.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import RejectAlphabetTooSmall, RejectDeadSymbol, RejectNotPrimitive, ValidationError

Word = tuple[int, ...]


def wielandt_bound(n: int) -> int:
    return n * n - 2 * n + 2


class Sft:
    """A primitive 0/1 transition matrix on ``n >= 2`` symbols.

    Instances are immutable and should be obtained from :func:`validate`.
    ``a[i, j] == 1`` iff symbol ``j`` may follow symbol ``i``.
    """

    def __init__(self, a: np.ndarray, primitivity_exponent: int):
        a = np.array(a, dtype=np.int64)
        a.flags.writeable = False
        self.n = int(a.shape[0])
        self.a = a
        self.primitivity_exponent = int(primitivity_exponent)

    def __eq__(self, other):
        if not isinstance(other, Sft):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash((self.n, self.a.tobytes()))

    def __repr__(self):
        rows = ",".join("".join(str(int(b)) for b in row) for row in self.a)
        return f"Sft(n={self.n}, a=[{rows}])"

    def admissible(self, word) -> bool:
        return all(self.a[x, y] for x, y in zip(word[:-1], word[1:]))

    def mask(self, k: int) -> np.ndarray:
        """Boolean array of shape ``(n,)*k``; True on admissible k-words."""
        cache = self.__dict__.setdefault("_masks", {})
        if k not in cache:
            m = np.ones((self.n,), dtype=bool)
            a = self.a.astype(bool)
            for _ in range(k - 1):
                m = m[..., None] & a.reshape((1,) * (m.ndim - 1) + a.shape)
            m.flags.writeable = False
            cache[k] = m
        return cache[k]

    def word_array(self, k: int) -> np.ndarray:
        """Admissible k-words as an ``(count, k)`` int array, lexicographic."""
        cache = self.__dict__.setdefault("_word_arrays", {})
        if k not in cache:
            arr = np.argwhere(self.mask(k))
            arr.flags.writeable = False
            cache[k] = arr
        return cache[k]


def validate(a, n: int | None = None) -> Sft:
    """Check a raw transition matrix and return an :class:`Sft`.

    Primitivity is certified by boolean matrix powers up to the Wielandt
    bound ``n**2 - 2n + 2``; the minimal exponent found is stored on the
    result.
    """
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"transition matrix must be square, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValidationError(f"declared size {n} does not match matrix size {arr.shape[0]}")
    if not np.all((arr == 0) | (arr == 1)):
        raise ValidationError("transition matrix entries must be 0 or 1")
    size = arr.shape[0]
    if size < 2:
        raise RejectAlphabetTooSmall(f"alphabet has {size} symbol(s); at least 2 required")
    b = arr.astype(bool)
    for i in range(size):
        if not b[i].any():
            raise RejectDeadSymbol(f"symbol {i + 1} has no successor")
        if not b[:, i].any():
            raise RejectDeadSymbol(f"symbol {i + 1} has no predecessor")
    m = primitivity_exponent(b)
    if m is None:
        raise RejectNotPrimitive(
            f"no power up to the Wielandt bound {wielandt_bound(size)} is entrywise positive"
        )
    return Sft(arr.astype(np.int64), m)


def primitivity_exponent(b: np.ndarray) -> int | None:
    """Smallest ``m`` with ``b**m > 0`` entrywise, or None past the Wielandt bound."""
    b = np.asarray(b, dtype=bool)
    f = b.astype(np.float64)
    power = f.copy()
    for m in range(1, wielandt_bound(b.shape[0]) + 1):
        if power.all():
            return m
        power = np.minimum(power @ f, 1.0)
    return None


def words(sft: Sft, k: int) -> list[Word]:
    """All admissible words of length ``k`` in lexicographic order."""
    if k < 1:
        raise ValueError("word length must be at least 1")
    return [tuple(int(s) for s in row) for row in sft.word_array(k)]


def word_count(sft: Sft, k: int) -> int:
    if k == 1:
        return sft.n
    return int(np.linalg.matrix_power(sft.a, k - 1).sum())


def periodic_point_count(sft: Sft, p: int) -> int:
    """Number of points fixed by the p-th iterate of the shift: trace of ``a**p``."""
    if p < 1:
        raise ValueError("period must be at least 1")
    # object dtype keeps the count exact for long periods
    a = np.array(sft.a, dtype=object)
    return int(np.trace(np.linalg.matrix_power(a, p)))


def full_shift(n: int) -> Sft:
    return validate(np.ones((n, n), dtype=int))


def golden_mean() -> Sft:
    return validate([[1, 1], [1, 0]])


def higher_block(sft: Sft, m: int) -> tuple[Sft, np.ndarray]:
    """The m-block presentation of ``sft``.

    Returns the recoded shift, whose symbols are the admissible m-words in
    lexicographic order, together with those words as an ``(N', m)`` array.
    Word ``u`` may be followed by ``v`` iff ``u[1:] == v[:-1]`` and
    ``u + v[-1:]`` is admissible.  ``m == 1`` returns ``sft`` itself.
    """
    cache = sft.__dict__.setdefault("_higher", {})
    if m in cache:
        return cache[m]
    states = sft.word_array(m)
    if m == 1:
        cache[m] = (sft, states)
        return cache[m]
    index = word_index(sft, m)
    ext = sft.word_array(m + 1)
    a2 = np.zeros((len(states), len(states)), dtype=np.int64)
    a2[index[tuple(ext[:, :-1].T)], index[tuple(ext[:, 1:].T)]] = 1
    # the higher-block presentation of a primitive shift is primitive
    m2 = primitivity_exponent(a2.astype(bool))
    if m2 is None:
        raise RejectNotPrimitive("higher-block presentation is not primitive")
    cache[m] = (Sft(a2, m2), states)
    return cache[m]


def enumerate_words_dfs(sft: Sft, k: int):
    """Depth-first generator of admissible k-words; independent of :func:`words`."""
    def extend(prefix):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for s in range(sft.n):
            if not prefix or sft.a[prefix[-1], s]:
                prefix.append(s)
                yield from extend(prefix)
                prefix.pop()

    yield from extend([])


def brute_periodic_points(sft: Sft, p: int) -> int:
    """Count cyclic admissible words of length p by exhaustive product search."""
    count = 0
    for w in itertools.product(range(sft.n), repeat=p):
        if sft.admissible(w + (w[0],)):
            count += 1
    return count


def word_index(sft: Sft, m: int) -> np.ndarray:
    """Dense lookup ``(n,)*m -> position`` of each admissible m-word; -1 elsewhere."""
    cache = sft.__dict__.setdefault("_word_index", {})
    if m not in cache:
        states = sft.word_array(m)
        index = np.full((sft.n,) * m, -1, dtype=np.int64)
        index[tuple(states.T)] = np.arange(len(states))
        index.flags.writeable = False
        cache[m] = index
    return cache[m]
