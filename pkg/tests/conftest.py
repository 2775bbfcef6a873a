"""Shared helpers for the test suite."""

from itertools import product

from polyadic import GenPolynomial, kappa


def tail_less(w1, w2) -> bool:
    """Order on equal-length words: compare at the largest differing index."""
    for a, b in zip(reversed(w1), reversed(w2)):
        if a != b:
            return a < b
    return False


def tower_words_sorted(poly: GenPolynomial, n: int, kap: int):
    """Enumeration oracle: the tower's words in most-significant-last order."""
    words = [w for w in product(range(poly.alphabet_size), repeat=n)
             if kappa(w, poly) == kap]
    words.sort(key=lambda w: w[::-1])
    return words


def tower_words_comparison_sorted(poly: GenPolynomial, n: int, kap: int):
    """Insertion sort with the explicit pairwise comparison; small towers only."""
    out = []
    for w in tower_words_sorted(poly, n, kap):
        i = len(out)
        while i > 0 and tail_less(w, out[i - 1]):
            i -= 1
        out.insert(i, w)
    return out


def poly_power_row(coeffs, n):
    """Coefficients of (sum_j a_j x^j)^n by repeated convolution."""
    row = [1]
    for _ in range(n):
        nxt = [0] * (len(row) + len(coeffs) - 1)
        for i, v in enumerate(row):
            for j, a in enumerate(coeffs):
                nxt[i + j] += v * a
        row = nxt
    return row
