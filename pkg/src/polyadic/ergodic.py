"""Cylindric functions, exact tower partial sums, and fluctuation curves.

A rank-N cylindric function sees only the first N letters of a path.  Its
partial sum over a lexicographically ordered tower decomposes into blocks:
for every level j and every letter below the word's letter at j, the block of
words agreeing above j contributes a weighted count of bottom completions.
The weights are the per-vertex sums ``h_l`` of the function, so partial sums
reduce to exact integer combinations that stay meaningful when tower heights
dwarf float range; division by the height happens once, at the very end.

Fluctuation curves normalize ``F(tH) - t F(H)`` by its grid maximum; their
stabilized limits are the Takagi-type curves of the companion module.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import CapacityError, DegenerateCurve, NoConvergence
from .paths import (PathPrefix, kappa, letter_table, minimal_word,
                    prefix_walk, successor, word_from_string, word_to_string)
from .poly import DimTable, GenPolynomial

_GRID_BUDGET = 2_000_000
_BRUTE_CAP = 1_000_000


class CylFunction:
    """Rank-N cylindric function: word of length N -> value, default 0."""

    def __init__(self, N: int, values):
        if N < 1:
            raise ValueError("rank must be >= 1")
        self.N = N
        self.values = {}
        for word, val in dict(values).items():
            word = tuple(word)
            if len(word) != N:
                raise ValueError(f"key {word} does not have length {N}")
            if val:
                self.values[word] = float(val)

    def __call__(self, word) -> float:
        if len(word) < self.N:
            raise ValueError(f"need at least {self.N} letters, got {len(word)}")
        return self.values.get(tuple(word[:self.N]), 0.0)

    def validate_for(self, poly: GenPolynomial) -> None:
        r = poly.alphabet_size
        for word in self.values:
            if any(not 0 <= c < r for c in word):
                raise ValueError(f"word {word} outside alphabet of size {r}")

    @classmethod
    def from_table(cls, poly: GenPolynomial, N: int, fn) -> "CylFunction":
        """Tabulate a callable on all words of length N."""
        r = poly.alphabet_size
        if r ** N > _GRID_BUDGET:
            raise CapacityError(f"{r}^{N} words exceed tabulation budget")
        return cls(N, {w: fn(w) for w in product(range(r), repeat=N)})

    @classmethod
    def from_json(cls, text: str, poly: GenPolynomial | None = None):
        """Read {"poly": [...], "N": int, "values": {"word": value}}."""
        doc = json.loads(text)
        file_poly = GenPolynomial(tuple(doc["poly"]))
        if poly is not None and file_poly != poly:
            raise ValueError(f"file polynomial {file_poly} does not match {poly}")
        values = {word_from_string(key, file_poly): val
                  for key, val in doc.get("values", {}).items()}
        g = cls(int(doc["N"]), values)
        g.validate_for(file_poly)
        return file_poly, g

    def to_json(self, poly: GenPolynomial) -> str:
        values = {word_to_string(w, poly): v for w, v in sorted(self.values.items())}
        return json.dumps({"poly": list(poly.coeffs), "N": self.N,
                           "values": values}, sort_keys=True)


@dataclass(frozen=True)
class HCoeffs:
    """Per-vertex sums h_l of a rank-N function over words ending at (N, l)."""

    N: int
    values: tuple[float, ...]


def h_coeffs(g: CylFunction, table: DimTable) -> HCoeffs:
    d = table.poly.degree
    ks = letter_table(table.poly).kstep
    out = [0.0] * (g.N * d + 1)
    for word, val in g.values.items():
        out[sum(ks[c] for c in word)] += val
    return HCoeffs(g.N, tuple(out))


def _h_fractions(h: HCoeffs) -> list[Fraction]:
    return [Fraction(v) for v in h.values]


def tower_total(h: HCoeffs, n: int, kap: int, table: DimTable) -> float:
    """F at the full tower height: sum_l h_l C(n-N, kap-l), exactly combined."""
    if n < h.N:
        raise ValueError("tower level below function rank")
    total = sum(hl * table.dim(n - h.N, kap - l)
                for l, hl in enumerate(_h_fractions(h)))
    return float(total)


@lru_cache(maxsize=64)
def _words_at(poly: GenPolynomial, length: int):
    """All words of a short length, bucketed by vertex index."""
    ks = letter_table(poly).kstep
    buckets: dict[int, list[tuple[int, ...]]] = {}
    for w in product(range(poly.alphabet_size), repeat=length):
        buckets.setdefault(sum(ks[c] for c in w), []).append(w)
    return buckets


def partial_sum_exact(g: CylFunction, word, table: DimTable) -> Fraction:
    """Sum of g over the tower's words up to and including the given word."""
    n = len(word)
    N = g.N
    if n < N:
        raise ValueError("word shorter than function rank")
    lt = letter_table(table.poly)
    hfr = _h_fractions(h_coeffs(g, table))
    kaps = [0]
    for c in word:
        kaps.append(kaps[-1] + lt.kstep[c])
    total = Fraction(0)
    for j in range(1, n + 1):
        for c in range(word[j - 1]):
            kbot = kaps[j] - lt.kstep[c]
            if kbot < 0 or kbot > (j - 1) * table.poly.degree:
                continue
            if j - 1 >= N:
                total += sum(hl * table.dim(j - 1 - N, kbot - l)
                             for l, hl in enumerate(hfr))
            else:
                tail = (c,) + tuple(word[j:N])
                for v in _words_at(table.poly, j - 1).get(kbot, ()):
                    total += Fraction(g(v + tail))
    return total + Fraction(g(word[:N]))


def partial_sum(g: CylFunction, word, table: DimTable) -> float:
    return float(partial_sum_exact(g, word, table))


def brute_tower_sums(g: CylFunction, n: int, kap: int, table: DimTable,
                     cap: int = _BRUTE_CAP) -> list[float]:
    """All partial sums over the tower, by walking successors from the bottom."""
    if n < g.N:
        raise ValueError("tower level below function rank")
    total = table.dim(n, kap)
    if total > cap:
        raise CapacityError(f"tower of {total} words exceeds cap {cap}")
    sums = []
    acc = 0.0
    word = None
    for _ in range(total):
        word = (minimal_word(n, kap, table) if word is None
                else successor(PathPrefix(word), table).known())
        acc += g(word)
        sums.append(acc)
    return sums


def _top_blocks(n: int, kap: int, m: int, table: DimTable):
    """Enumerate valid top-m letter blocks of the tower at (n, kap).

    Yields (top_word, bottom_kappa, rank_of_minimal_completion, blocks)
    where blocks lists (bottom_length, bottom_kappa) for every letter lying
    below the block in the order.
    """
    poly = table.poly
    d = poly.degree
    lt = letter_table(poly)
    r = poly.alphabet_size
    if r ** m > _GRID_BUDGET:
        raise CapacityError(f"{r}^{m} top words exceed grid budget")
    bot = n - m
    for u in product(range(r), repeat=m):
        rem = kap
        blocks = []
        ok = True
        for idx in range(m - 1, -1, -1):
            level = bot + 1 + idx
            cstar = u[idx]
            for c in range(cstar):
                blocks.append((level - 1, rem - lt.kstep[c]))
            rem -= lt.kstep[cstar]
            if rem < 0:
                ok = False
                break
        if not ok or rem > bot * d:
            continue
        rank = 1 + sum(table.dim(bl, kb) for bl, kb in blocks)
        yield u, rem, rank, blocks


def node_grid(n: int, kap: int, m: int, table: DimTable):
    """Minimal completions of all valid top-m blocks, sorted by rank.

    Returns (top_word, rank, representative_word) triples; the rank fractions
    rank/H approach the coding's stationary points of rank m as n grows along
    a fixed vertex direction.
    """
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    out = []
    for u, kb, rank, _ in _top_blocks(n, kap, m, table):
        out.append((u, rank, minimal_word(n - m, kb, table) + u))
    out.sort(key=lambda item: item[1])
    return out


@dataclass(frozen=True)
class PolygonalCurve:
    """Normalized fluctuation curve: sorted nodes with max |y| = 1."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]
    R: float
    n: int
    kappa: int
    depth: int


def _grid_numerators(g: CylFunction, n: int, kap: int, m: int, table: DimTable):
    """Exact H*F(L) - L*F(H) at every depth-m grid node.

    Returns (H, [(L, numerator_fraction), ...]) sorted by L.  Keeping the
    numerator exact makes 'identically zero' a decidable statement and
    defers all rounding to the final normalization.
    """
    N = g.N
    if m < 0 or n - m < N:
        raise ValueError(f"need depth m <= n - N = {n - N}")
    d = table.poly.degree
    H = table.dim(n, kap)
    if H == 0:
        raise ValueError(f"empty tower at ({n}, {kap})")
    hfr = _h_fractions(h_coeffs(g, table))
    T = [table.dim(n - N, kap - l) for l in range(N * d + 1)]
    min_prefix: dict[int, tuple[int, ...]] = {}
    nodes = []
    for u, kb, L, blocks in _top_blocks(n, kap, m, table):
        A = [0] * (N * d + 1)
        for bl, kbot in blocks:
            for l in range(N * d + 1):
                A[l] += table.dim(bl - N, kbot - l)
        if kb not in min_prefix:
            min_prefix[kb] = minimal_word(n - m, kb, table)[:N]
        num = sum(hl * (A[l] * H - T[l] * L) for l, hl in enumerate(hfr))
        num += Fraction(g(min_prefix[kb])) * H
        nodes.append((L, num))
    nodes.sort(key=lambda item: item[0])
    return H, nodes


def fluctuation_curve(g: CylFunction, n: int, kap: int, m: int,
                      table: DimTable) -> PolygonalCurve:
    """Depth-m polygonal fluctuation curve of the tower at (n, kap)."""
    H, nodes = _grid_numerators(g, n, kap, m, table)
    if all(num == 0 for _, num in nodes):
        raise DegenerateCurve(
            f"numerator vanishes on the whole grid at ({n}, {kap}); "
            "the function acts as a constant on this tower")
    R = max(abs(num) for _, num in nodes) / H
    xs, ys = [0.0], [0.0]
    for L, num in nodes:
        x = L / H           # exact ints: correctly rounded even past 2**53
        if x <= xs[-1]:
            continue
        xs.append(x)
        ys.append(float(num / H / R))
    if xs[-1] < 1.0:
        xs.append(1.0)
        ys.append(0.0)
    return PolygonalCurve(tuple(xs), tuple(ys), float(R), n, kap, m)


def curve_value(curve: PolygonalCurve, x: float) -> float:
    """Piecewise-linear value of the curve at x in [0, 1]."""
    xs, ys = curve.xs, curve.ys
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    lo, hi = 0, len(xs) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    span = xs[hi] - xs[lo]
    if span == 0.0:
        return ys[lo]
    w = (x - xs[lo]) / span
    return ys[lo] * (1.0 - w) + ys[hi] * w


def sup_distance(c1: PolygonalCurve, c2: PolygonalCurve) -> float:
    """Sup-metric distance of two polygonal curves on the union of nodes."""
    grid = sorted(set(c1.xs) | set(c2.xs))
    return max(abs(curve_value(c1, x) - curve_value(c2, x)) for x in grid)


def stabilizing_candidates(x, table: DimTable, eps: float, delta: float,
                           n_max: int) -> list[int]:
    """Levels where the prefix sits low in its tower and the vertex is central.

    The rank test rank/H < eps is decided in exact integer arithmetic; the
    vertex test keeps kappa/(n d) within [delta, 1 - delta] (void for the
    degree-0 system, whose only vertex is central).
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError("need 0 < eps <= 1")
    if not 0.0 <= delta < 0.25:
        raise ValueError("need 0 <= delta < 1/4")
    d = table.poly.degree
    eps_f = Fraction(eps)
    delta_f = Fraction(delta)
    out = []
    for n, kap, rnk in prefix_walk(x, table, n_max):
        if Fraction(rnk, table.dim(n, kap)) >= eps_f:
            continue
        if d > 0:
            ratio = Fraction(kap, n * d)
            if not delta_f <= ratio <= 1 - delta_f:
                continue
        out.append(n)
    return out


def measure_ray(mp, n: int) -> int:
    """Vertex the measure concentrates on at level n: round(n * E[step])."""
    ks = letter_table(mp.poly).kstep
    mean = sum(w * s for w, s in zip(mp.weights, ks))
    return math.floor(n * mean + 0.5)


def extract_limiting_curve(g: CylFunction, x, table: DimTable, *,
                           eps: float = 0.1, delta: float = 0.1, m: int = 6,
                           tol: float = 0.05, n_max: int = 300,
                           mp=None, align: int = 1):
    """Walk stabilizing levels until consecutive curves agree within tol.

    Returns (curve, diagnostics); diagnostics carries the candidate levels
    and the sup-distance series whether or not it converged.  Failure to
    drop below tol raises NoConvergence with the same series attached.

    When the sampling measure ``mp`` is given, the walk keeps only the
    candidate levels whose vertex revisits the measure's typical ray (within
    ``align``).  The centered vertex walk is recurrent, so such levels keep
    coming for almost every sampled path, and along them the depth-m curves
    approach the limit without the square-root-scale vertex tilt that a free
    vertex carries at moderate n.
    """
    x = x if isinstance(x, PathPrefix) else PathPrefix(tuple(x))
    levels = [n for n in stabilizing_candidates(x, table, eps, delta, n_max)
              if n - m >= g.N]
    if mp is not None:
        levels = [n for n in levels
                  if abs(kappa(x.prefix(n), table.poly) - measure_ray(mp, n)) <= align]
    diagnostics = {"levels": [], "distances": []}
    prev = None
    for n in levels:
        kap = kappa(x.prefix(n), table.poly)
        curve = fluctuation_curve(g, n, kap, m, table)
        diagnostics["levels"].append(n)
        if prev is not None:
            dist = sup_distance(prev, curve)
            diagnostics["distances"].append(dist)
            if dist < tol:
                diagnostics["converged_at"] = n
                return curve, diagnostics
        prev = curve
    raise NoConvergence(
        f"no consecutive pair below tol={tol} among {len(levels)} candidate levels",
        distances=diagnostics["distances"])


def central_vertex(table: DimTable, n: int) -> int:
    """Vertex index maximizing the dimension at level n (lowest on ties)."""
    row = table.row(n)
    best = max(row)
    return row.index(best)


def cohomology_verdict(g: CylFunction, table: DimTable, n_max: int,
                       m: int = 4):
    """Classify the growth of the normalizing coefficients along the ridge.

    Returns (verdict, series) with verdict BOUNDED, UNBOUNDED or
    INCONCLUSIVE and series the list of (n, R_n) pairs, R_n taken at depth
    min(m, n - N) over the dimension-maximizing vertex.  Bounded growth of
    R is the numerical face of the function being cohomologous to a
    constant; the verdict is a diagnostic, not a proof.
    """
    N = g.N
    if n_max < N:
        raise ValueError("n_max below function rank")
    series = []
    for n in range(N, n_max + 1):
        kap = central_vertex(table, n)
        H, nodes = _grid_numerators(g, n, kap, min(m, n - N), table)
        peak = max(abs(num) for _, num in nodes)
        series.append((n, float(peak / H)))
    values = [v for _, v in series]
    peak = max(values)
    tail = values[len(values) // 2:]
    if peak == 0.0 or max(tail) - min(tail) <= 1e-9 * peak:
        return "BOUNDED", series
    nondecreasing = all(b >= a * (1.0 - 1e-12) for a, b in zip(tail, tail[1:]))
    if nondecreasing and tail[-1] - tail[0] > 1e-9 * peak:
        return "UNBOUNDED", series
    return "INCONCLUSIVE", series
