"""Words over the edge alphabet, the tail-lexicographic order, and the adic map.

Edges into every vertex carry letters ``0..r-1``.  The first ``a_d`` letters
step the vertex index by ``d``, the next ``a_{d-1}`` by ``d-1``, and so on
down to the last ``a_0`` letters which step by zero.  A word is a finite path
read from level 1 upward; two words of the same length and the same total
step compare at the *largest* index where they differ, letters comparing by
label.  Rank, unrank, successor and predecessor below all realize that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (HorizonExhausted, MaximalPath, MinimalPath,
                     PrefixExhausted, RankOutOfRange)
from .poly import DimTable, GenPolynomial


@dataclass(frozen=True)
class LetterTable:
    """Per-letter bookkeeping derived from the generating polynomial."""

    poly: GenPolynomial
    kstep: tuple[int, ...]       # vertex-index increment of each letter
    k1step: tuple[int, ...]      # d - kstep
    group_index: tuple[int, ...]  # 0 for the first (largest-step) letter group
    offset: tuple[int, ...]      # position within the letter's group
    # number of letters with label < c stepping by s, for each letter c
    below: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def letter_table(poly: GenPolynomial) -> LetterTable:
    """Label groups in decreasing step order: sizes (a_d, ..., a_0)."""
    d = poly.degree
    kstep, group_index, offset = [], [], []
    for g, step in enumerate(range(d, -1, -1)):
        for i in range(poly.coeffs[step]):
            kstep.append(step)
            group_index.append(g)
            offset.append(i)
    below = []
    counts = [0] * (d + 1)
    for c in range(poly.alphabet_size):
        below.append(tuple(counts))
        counts[kstep[c]] += 1
    return LetterTable(poly, tuple(kstep), tuple(d - s for s in kstep),
                       tuple(group_index), tuple(offset), tuple(below))


def kappa(word, poly: GenPolynomial) -> int:
    """Vertex index reached by the word: sum of letter steps."""
    ks = letter_table(poly).kstep
    return sum(ks[c] for c in word)


def co_kappa(word, poly: GenPolynomial) -> int:
    """Co-index len(word)*d - kappa(word)."""
    return len(word) * poly.degree - kappa(word, poly)


def word_to_string(word, poly: GenPolynomial) -> str:
    """Digit string for r <= 10, comma-separated labels otherwise."""
    if poly.alphabet_size <= 10:
        return "".join(str(c) for c in word)
    return ",".join(str(c) for c in word)


def word_from_string(text: str, poly: GenPolynomial) -> tuple[int, ...]:
    r = poly.alphabet_size
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        word = tuple(int(p) for p in text.split(","))
    elif r <= 10:
        word = tuple(int(ch) for ch in text)
    else:
        word = (int(text),)
    if any(not 0 <= c < r for c in word):
        raise ValueError(f"letter out of range in {text!r} (alphabet size {r})")
    return word


def rank(word, table: DimTable) -> int:
    """1-based position of the word in its lexicographically ordered tower.

    Counts, level by level, the words that agree above the level and carry a
    smaller letter at it: each letter c below w_j contributes the dimension
    of the vertex reached by the remaining j-1 free levels.
    """
    lt = letter_table(table.poly)
    if len(word) > table.n_max:
        raise ValueError("word longer than table levels")
    r = 1
    kap = 0
    for j, c in enumerate(word, start=1):
        kap += lt.kstep[c]
        for s, cnt in enumerate(lt.below[c]):
            if cnt:
                r += cnt * table.dim(j - 1, kap - s)
    return r


def unrank(n: int, kap: int, index: int, table: DimTable) -> tuple[int, ...]:
    """Word of length n at vertex index kap whose rank equals index."""
    lt = letter_table(table.poly)
    total = table.dim(n, kap)
    if not 1 <= index <= total:
        raise RankOutOfRange(
            f"index {index} outside [1, {total}] at vertex ({n}, {kap})")
    letters = [0] * n
    for level in range(n, 0, -1):
        for c, step in enumerate(lt.kstep):
            block = table.dim(level - 1, kap - step)
            if index <= block:
                letters[level - 1] = c
                kap -= step
                break
            index -= block
    return tuple(letters)


def minimal_word(n: int, kap: int, table: DimTable) -> tuple[int, ...]:
    return unrank(n, kap, 1, table)


def maximal_word(n: int, kap: int, table: DimTable) -> tuple[int, ...]:
    return unrank(n, kap, table.dim(n, kap), table)


def is_minimal(word, table: DimTable) -> bool:
    return rank(word, table) == 1


def is_maximal(word, table: DimTable) -> bool:
    return rank(word, table) == table.dim(len(word), kappa(word, table.poly))


class PathPrefix:
    """The known prefix of an infinite path, extendable on demand.

    ``extend`` is an optional iterator producing further letters; without it
    the prefix is all that will ever be known.  ``max_level`` caps how far
    any search is allowed to materialize the path.
    """

    def __init__(self, letters=(), extend=None, max_level: int | None = None):
        self._letters = list(letters)
        self._extend = iter(extend) if extend is not None else None
        self.max_level = max_level

    def __len__(self) -> int:
        return len(self._letters)

    def known(self) -> tuple[int, ...]:
        return tuple(self._letters)

    def prefix(self, n: int) -> tuple[int, ...]:
        self._ensure(n)
        return tuple(self._letters[:n])

    def letter(self, n: int) -> int:
        """1-based letter at level n, extending the prefix if allowed."""
        self._ensure(n)
        return self._letters[n - 1]

    def _ensure(self, n: int) -> None:
        while len(self._letters) < n:
            nxt = len(self._letters) + 1
            if self.max_level is not None and nxt > self.max_level:
                raise HorizonExhausted(f"level {nxt} beyond horizon {self.max_level}")
            if self._extend is None:
                raise PrefixExhausted(f"no letter at level {nxt} and no extension policy")
            try:
                self._letters.append(int(next(self._extend)))
            except StopIteration:
                self._extend = None
                raise PrefixExhausted(f"extension policy ended before level {nxt}") from None

    def with_head(self, head) -> "PathPrefix":
        """Copy of the prefix with its first len(head) letters replaced."""
        letters = list(head) + self._letters[len(head):]
        out = PathPrefix(letters, max_level=self.max_level)
        out._extend = self._extend  # continuation stream is handed over
        return out


def _as_prefix(x) -> PathPrefix:
    return x if isinstance(x, PathPrefix) else PathPrefix(tuple(x))


def successor(x, table: DimTable) -> PathPrefix:
    """Next path in the tail-lexicographic order.

    Scans upward for the first level whose prefix is not maximal in its
    tower, then replaces exactly that head by the next-ranked word; letters
    above the pivot are untouched.
    """
    x = _as_prefix(x)
    lt = letter_table(table.poly)
    kap = 0
    rnk = 1
    n = 0
    while True:
        n += 1
        try:
            c = x.letter(n)
        except PrefixExhausted as exc:
            raise MaximalPath(f"maximal through level {n - 1}") from exc
        kap += lt.kstep[c]
        for s, cnt in enumerate(lt.below[c]):
            if cnt:
                rnk += cnt * table.dim(n - 1, kap - s)
        if rnk < table.dim(n, kap):
            return x.with_head(unrank(n, kap, rnk + 1, table))


def predecessor(x, table: DimTable) -> PathPrefix:
    """Previous path in the tail-lexicographic order; mirror of successor."""
    x = _as_prefix(x)
    lt = letter_table(table.poly)
    kap = 0
    rnk = 1
    n = 0
    while True:
        n += 1
        try:
            c = x.letter(n)
        except PrefixExhausted as exc:
            raise MinimalPath(f"minimal through level {n - 1}") from exc
        kap += lt.kstep[c]
        for s, cnt in enumerate(lt.below[c]):
            if cnt:
                rnk += cnt * table.dim(n - 1, kap - s)
        if rnk > 1:
            return x.with_head(unrank(n, kap, rnk - 1, table))


def iter_tower(n: int, kap: int, table: DimTable):
    """Yield the words of the tower at vertex (n, kap) in rank order."""
    total = table.dim(n, kap)
    if total == 0:
        return
    word = minimal_word(n, kap, table)
    yield word
    for _ in range(total - 1):
        word = successor(PathPrefix(word), table).known()
        yield word


def prefix_walk(x, table: DimTable, n_max: int):
    """Yield (n, kappa_n, rank_n) for n = 1..n_max along the path prefix.

    Stops early (without error) if the prefix runs out of letters or hits
    its own horizon before n_max.
    """
    x = _as_prefix(x)
    lt = letter_table(table.poly)
    kap = 0
    rnk = 1
    for n in range(1, n_max + 1):
        try:
            c = x.letter(n)
        except (PrefixExhausted, HorizonExhausted):
            return
        kap += lt.kstep[c]
        for s, cnt in enumerate(lt.below[c]):
            if cnt:
                rnk += cnt * table.dim(n - 1, kap - s)
        yield n, kap, rnk
