"""Invariant Bernoulli measures, path sampling, and the interval coding.

For a parameter q the letter weights are ``t^s / q^(s-1)`` where ``s`` is the
letter's vertex step and ``t`` solves
``a_0 q^d + a_1 q^(d-1) t + ... + a_d t^d = q^(d-1)`` in (0, 1).  The product
measure built from these weights is invariant for the adic map because a
cylinder's mass then depends only on its end vertex.

The coding of [0, 1] subdivides nested intervals in letter-label order, first
letter most significant; stationary numbers are the points with a finite
expansion.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from .errors import CapacityError, NoRoot
from .paths import letter_table
from .poly import GenPolynomial

_STATIONARY_BUDGET = 2_000_000


def _weight_poly_coeffs(poly: GenPolynomial, q):
    """Coefficients of t -> sum_j a_j q^(d-j) t^j - q^(d-1)."""
    d = poly.degree
    coeffs = [a * q ** (d - j) for j, a in enumerate(poly.coeffs)]
    coeffs[0] -= q ** (d - 1)
    return coeffs


def _horner(coeffs, t):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    return acc


def solve_t(poly: GenPolynomial, q: float, tol: float = 1e-14) -> float:
    """Root t in (0, 1) of the weight equation; bisection then Newton polish.

    The degenerate degree-0 case has no free parameter: the equation forces
    q = 1/a_0, and t never enters the weights, so it is returned as q.
    """
    d = poly.degree
    a0 = poly.coeffs[0]
    if d == 0:
        if abs(a0 * q - 1.0) > 1e-9:
            raise NoRoot(f"degree-0 system requires q = 1/{a0}")
        return q
    if not 0.0 < q < 1.0 / a0:
        raise NoRoot(f"q={q} outside (0, 1/{a0})")
    coeffs = _weight_poly_coeffs(poly, q)
    deriv = [j * c for j, c in enumerate(coeffs)][1:]
    lo, hi = 0.0, 1.0
    flo = _horner(coeffs, lo)
    if flo >= 0.0 or _horner(coeffs, hi) <= 0.0:
        raise NoRoot(f"no sign change on (0,1) for q={q}")
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if _horner(coeffs, mid) < 0.0:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    for _ in range(60):
        f = _horner(coeffs, t)
        fp = _horner(deriv, t)
        if fp == 0.0:
            break
        nxt = t - f / fp
        if not 0.0 < nxt < 1.0:
            nxt = min(max(nxt, 1e-300), 1.0 - 1e-16)
        if nxt == t:
            break
        t = nxt
    if abs(_horner(coeffs, t)) > tol:
        raise NoRoot(f"Newton polish left residual above {tol} for q={q}")
    return t


def weight_residual(poly: GenPolynomial, q: float, t: float) -> float:
    """Defining-equation residual at (q, t)."""
    if poly.degree == 0:
        return poly.coeffs[0] - 1.0 / q
    return _horner(_weight_poly_coeffs(poly, q), t)


@dataclass(frozen=True)
class MeasureParams:
    """Parameter q, its root t, and the per-letter weight vector."""

    poly: GenPolynomial
    q: float
    t: float
    weights: tuple[float, ...]


@lru_cache(maxsize=512)
def measure_params(poly: GenPolynomial, q: float) -> MeasureParams:
    t = solve_t(poly, q)
    ks = letter_table(poly).kstep
    b = t / q
    weights = tuple(q * b ** s for s in ks)
    total = sum(weights)
    if abs(total - 1.0) > 1e-9:
        raise NoRoot(f"weights sum to {total}, not 1; degenerate parameters")
    return MeasureParams(poly, q, t, weights)


def letter_weights(mp: MeasureParams) -> tuple[float, ...]:
    return mp.weights


def cylinder_measure(mp: MeasureParams, word) -> float:
    """Product of letter weights: q^n (t/q)^kappa, a function of (n, kappa)."""
    out = 1.0
    for c in word:
        out *= mp.weights[c]
    return out


def sample_word(mp: MeasureParams, n: int, seed: int) -> tuple[int, ...]:
    """n i.i.d. letters drawn from the weight vector, reproducible by seed."""
    rng = random.Random(seed)
    cums = _cumulative(mp.weights)
    return tuple(bisect_right(cums, rng.random(), 0, len(mp.weights) - 1)
                 for _ in range(n))


def letter_stream(mp: MeasureParams, seed: int):
    """Endless i.i.d. letter iterator; feeds PathPrefix extension."""
    rng = random.Random(seed)
    cums = _cumulative(mp.weights)
    top = len(mp.weights) - 1
    while True:
        yield bisect_right(cums, rng.random(), 0, top)


def _cumulative(weights) -> list[float]:
    cums = []
    acc = 0.0
    for w in weights:
        acc += w
        cums.append(acc)
    cums[-1] = 1.0
    return cums


@dataclass(frozen=True)
class CodingParams:
    """Measure parameters plus a decoding depth cap."""

    mp: MeasureParams
    max_depth: int = 60

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")


def coding_params(poly: GenPolynomial, q: float, max_depth: int = 60) -> CodingParams:
    return CodingParams(measure_params(poly, q), max_depth)


def _mp_of(params) -> MeasureParams:
    return params.mp if isinstance(params, CodingParams) else params


def encode_theta(params, word) -> float:
    """Left endpoint in [0, 1] of the word's nested coding interval."""
    mp = _mp_of(params)
    lows = _low_cums(mp.weights)
    acc = 0.0
    scale = 1.0
    for c in word:
        acc += scale * lows[c]
        scale *= mp.weights[c]
    return acc


def _low_cums(weights) -> list[float]:
    lows = [0.0]
    for w in weights[:-1]:
        lows.append(lows[-1] + w)
    return lows


def decode_digits(cp: CodingParams, x: float, m: int | None = None) -> tuple[int, ...]:
    """First m letters of the coding of x; half-open intervals, 1 maps high.

    Points on an interval boundary take the right-hand letter, so a
    stationary number decodes to its finite word padded with the lowest
    letter; x = 1 takes the top letter at every depth.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    mp = cp.mp
    if m is None:
        m = cp.max_depth
    weights = mp.weights
    lows = _low_cums(weights)
    top = len(weights) - 1
    out = []
    y = x
    for _ in range(m):
        if y >= 1.0:
            out.append(top)
            y = 1.0
            continue
        c = bisect_right(lows, y) - 1
        out.append(c)
        y = (y - lows[c]) / weights[c]
        if y < 0.0:
            y = 0.0
    return tuple(out)


def stationary_points(cp: CodingParams, m: int) -> list[float]:
    """Sorted left endpoints of all coding intervals of rank m."""
    mp = cp.mp
    r = len(mp.weights)
    if r ** m > _STATIONARY_BUDGET:
        raise CapacityError(f"{r}^{m} stationary points exceed budget")
    lows = _low_cums(mp.weights)
    points = {0.0}
    level = [(0.0, 1.0)]
    for _ in range(m):
        nxt = []
        for start, scale in level:
            for c in range(r):
                nxt.append((start + scale * lows[c], scale * mp.weights[c]))
        level = nxt
    points.update(start for start, _ in level)
    return sorted(points)


# -- high-precision twins -----------------------------------------------------
#
# Decoding a float in double precision loses one letter of accuracy per level
# once the running remainder has been rescaled ~16 decimal digits' worth; the
# reparametrization map and its derivatives need digit streams that stay
# faithful to depth ~60, so they decode through mpmath and only the final
# weighted sums run in floats.

_HP_DPS = 50


def _hp_solve_t(poly: GenPolynomial, q, dps: int = _HP_DPS):
    with mpmath.workdps(dps):
        q = mpmath.mpf(q)
        if poly.degree == 0:
            return q
        coeffs = _weight_poly_coeffs(poly, q)
        deriv = [j * c for j, c in enumerate(coeffs)][1:]
        t = mpmath.mpf(solve_t(poly, float(q)))
        for _ in range(8):
            t = t - _horner(coeffs, t) / _horner(deriv, t)
        return t


@lru_cache(maxsize=128)
def _hp_weights(poly: GenPolynomial, q, dps: int = _HP_DPS):
    with mpmath.workdps(dps):
        q = mpmath.mpf(q)
        t = _hp_solve_t(poly, q, dps)
        b = t / q
        ks = letter_table(poly).kstep
        return tuple(q * b ** s for s in ks)


def _hp_decode(poly: GenPolynomial, q, x, m: int, dps: int = _HP_DPS) -> tuple[int, ...]:
    with mpmath.workdps(dps):
        weights = _hp_weights(poly, q, dps)
        lows = [mpmath.mpf(0)]
        for w in weights[:-1]:
            lows.append(lows[-1] + w)
        top = len(weights) - 1
        y = mpmath.mpf(x)
        out = []
        for _ in range(m):
            if y >= 1:
                out.append(top)
                y = mpmath.mpf(1)
                continue
            c = top
            while c > 0 and lows[c] > y:
                c -= 1
            out.append(c)
            y = (y - lows[c]) / weights[c]
            if y < 0:
                y = mpmath.mpf(0)
        return tuple(out)


def _hp_encode(poly: GenPolynomial, q, word, dps: int = _HP_DPS):
    with mpmath.workdps(dps):
        weights = _hp_weights(poly, q, dps)
        lows = [mpmath.mpf(0)]
        for w in weights[:-1]:
            lows.append(lows[-1] + w)
        acc = mpmath.mpf(0)
        scale = mpmath.mpf(1)
        for c in word:
            acc += scale * lows[c]
            scale *= weights[c]
        return acc


def _hp_cylinder(poly: GenPolynomial, q, word, dps: int = _HP_DPS):
    with mpmath.workdps(dps):
        weights = _hp_weights(poly, q, dps)
        out = mpmath.mpf(1)
        for c in word:
            out *= weights[c]
        return out
