import math
import random
from collections import Counter
from fractions import Fraction
from itertools import product

import pytest

from polyadic import (CapacityError, GenPolynomial, NoRoot, build_dim_table,
                      coding_params, cylinder_measure, decode_digits,
                      encode_theta, kappa, letter_stream, letter_table,
                      letter_weights, measure_params, sample_word, solve_t,
                      stationary_points, weight_residual)

P11 = GenPolynomial((1, 1))
P111 = GenPolynomial((1, 1, 1))
P113 = GenPolynomial((1, 1, 3))


def test_solve_t_known_values():
    assert solve_t(P11, 0.3) == pytest.approx(0.7, rel=1e-15)
    assert solve_t(P111, 1 / 3) == pytest.approx(1 / 3, abs=1e-14)
    closed = (-0.25 + math.sqrt(13 / 16)) / 2
    assert solve_t(P111, 0.25) == pytest.approx(closed, rel=1e-13)


def test_solve_t_rejects_bad_q():
    with pytest.raises(NoRoot):
        solve_t(GenPolynomial((2, 1)), 0.6)     # q >= 1/a0
    with pytest.raises(NoRoot):
        solve_t(P11, -0.1)


def test_degree_zero_measure():
    poly = GenPolynomial((3,))
    mp = measure_params(poly, 1 / 3)
    assert mp.weights == (1 / 3, 1 / 3, 1 / 3)
    with pytest.raises(NoRoot):
        solve_t(poly, 0.2)


def test_residual_small_across_grid():
    for coeffs in ((1, 1), (2, 1), (1, 1, 3), (1, 2, 1, 1)):
        poly = GenPolynomial(coeffs)
        for frac in (0.05, 0.2, 0.5, 0.8, 0.95):
            q = frac / poly.coeffs[0]
            t = solve_t(poly, q)
            assert 0 < t < 1
            assert abs(weight_residual(poly, q, t)) <= 1e-14


def test_letter_weights_examples():
    mp = measure_params(P11, 0.3)
    assert mp.weights[0] == pytest.approx(0.7, rel=1e-14)   # step-1 letter
    assert mp.weights[1] == 0.3                              # step-0 letter
    mp = measure_params(P111, 1 / 3)
    assert all(w == pytest.approx(1 / 3, abs=1e-13) for w in mp.weights)
    mp = measure_params(GenPolynomial((2, 1)), 0.2)
    # letter 0 steps by one and carries t; the two step-0 letters carry q
    assert mp.weights == pytest.approx((mp.t, 0.2, 0.2))
    assert mp.t == pytest.approx(1 - 2 * 0.2, rel=1e-14)
    assert sum(letter_weights(mp)) == pytest.approx(1.0, abs=1e-14)


def test_weights_constant_on_groups():
    mp = measure_params(P113, 0.11)
    lt = letter_table(P113)
    for c1 in range(5):
        for c2 in range(5):
            if lt.kstep[c1] == lt.kstep[c2]:
                assert mp.weights[c1] == mp.weights[c2]


def test_degenerate_limits():
    # q near the top of its range concentrates on the step-0 letters,
    # q near zero on the step-d letters
    poly = GenPolynomial((2, 1, 3))
    hi = measure_params(poly, (1 - 1e-9) / 2)
    lt = letter_table(poly)
    for c, w in enumerate(hi.weights):
        target = 0.5 if lt.kstep[c] == 0 else 0.0
        assert w == pytest.approx(target, abs=1e-4)
    lo = measure_params(poly, 1e-9)
    for c, w in enumerate(lo.weights):
        target = 1 / 3 if lt.kstep[c] == 2 else 0.0
        assert w == pytest.approx(target, abs=1e-3)


def test_cylinder_measure():
    mp = measure_params(P11, 0.3)
    assert cylinder_measure(mp, ()) == 1.0
    assert cylinder_measure(mp, (0, 1)) == pytest.approx(0.21, rel=1e-14)
    for n in range(7):
        total = sum(cylinder_measure(mp, w) for w in product((0, 1), repeat=n))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_cylinder_centrality_exhaustive():
    mp = measure_params(P113, 0.13)
    for n in range(7):
        by_vertex = {}
        for w in product(range(5), repeat=n):
            key = kappa(w, P113)
            got = cylinder_measure(mp, w)
            assert got == pytest.approx(by_vertex.setdefault(key, got), rel=1e-12)
            # closed form q^n (t/q)^kappa
            assert got == pytest.approx(mp.q ** n * (mp.t / mp.q) ** key, rel=1e-11)


def test_tower_interval_identity_exact_rational():
    # degree 1 keeps t rational: sum over the tower = dim * q^n (t/q)^kappa
    poly = GenPolynomial((2, 3))
    table = build_dim_table(poly, 6)
    q = Fraction(1, 5)
    t = (1 - 2 * q) / 3
    ks = letter_table(poly).kstep
    for n in range(7):
        for kap in range(n + 1):
            total = sum(
                math.prod([t if ks[c] else q for c in w], start=Fraction(1))
                for w in product(range(5), repeat=n) if kappa(w, poly) == kap)
            assert total == table.dim(n, kap) * q ** n * (t / q) ** kap


def test_sampling_determinism_and_frequencies():
    mp = measure_params(P111, 0.22)
    assert sample_word(mp, 50, 7) == sample_word(mp, 50, 7)
    assert sample_word(mp, 50, 7) != sample_word(mp, 50, 8)
    word = sample_word(mp, 100_000, 5)
    counts = Counter(word)
    for c, w in enumerate(mp.weights):
        sd = math.sqrt(w * (1 - w) * len(word))
        assert abs(counts[c] - w * len(word)) <= 3 * sd
    # mean co-step converges to 2q + t for this polynomial
    k1 = letter_table(P111).k1step
    mean = sum(k1[c] for c in word) / len(word)
    assert mean == pytest.approx(2 * 0.22 + mp.t, abs=0.01)


def test_letter_stream_matches_sample():
    mp = measure_params(P113, 0.15)
    stream = letter_stream(mp, 3)
    assert tuple(next(stream) for _ in range(40)) == sample_word(mp, 40, 3)


def test_encode_theta_label_order():
    cp = coding_params(P11, 0.5)
    assert encode_theta(cp, (1, 0, 1)) == 0.625
    cp3 = coding_params(P11, 0.3)
    assert encode_theta(cp3, (1,)) == pytest.approx(0.7, rel=1e-14)
    cpu = coding_params(P111, 1 / 3)
    assert encode_theta(cpu, (2,)) == pytest.approx(2 / 3, abs=1e-13)
    assert encode_theta(cpu, ()) == 0.0


def test_theta_at_uniform_q_is_positional():
    cp = coding_params(P113, 1 / 5)
    rng = random.Random(9)
    for _ in range(1000):
        w = tuple(rng.randrange(5) for _ in range(30))
        ref = sum(c / 5 ** (i + 1) for i, c in enumerate(w))
        assert abs(encode_theta(cp, w) - ref) <= 1e-12


def test_decode_digits():
    cp = coding_params(P11, 0.5)
    assert decode_digits(cp, 0.625, 3) == (1, 0, 1)
    # stationary points continue with the lowest letter
    assert decode_digits(cp, 0.625, 6) == (1, 0, 1, 0, 0, 0)
    # x = 1 takes the top letter at every depth
    assert decode_digits(cp, 1.0, 4) == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        decode_digits(cp, 1.5, 3)


def test_decode_encode_round_trip_bound():
    cp = coding_params(P113, 0.11)
    p_max = max(cp.mp.weights)
    bound = p_max ** 40 / (1 - p_max) + 5e-13   # tail bound plus float slop
    rng = random.Random(12)
    for _ in range(300):
        x = rng.random()
        back = encode_theta(cp, decode_digits(cp, x, 40))
        assert back <= x + 1e-12
        assert abs(back - x) <= bound


def test_stationary_points():
    cp = coding_params(P11, 0.3)
    assert stationary_points(cp, 1) == pytest.approx([0.0, 0.7])
    cpu = coding_params(P111, 1 / 3)
    assert stationary_points(cpu, 1) == pytest.approx([0.0, 1 / 3, 2 / 3])
    # consecutive gaps are the cylinder measures of the rank-m words in order
    cp2 = coding_params(P113, 0.14)
    pts = stationary_points(cp2, 2)
    words = sorted(product(range(5), repeat=2),
                   key=lambda w: encode_theta(cp2, w))
    gaps = [b - a for a, b in zip(pts, pts[1:])] + [1.0 - pts[-1]]
    for w, gap in zip(words, gaps):
        assert gap == pytest.approx(cylinder_measure(cp2.mp, w), abs=1e-12)
    with pytest.raises(CapacityError):
        stationary_points(cp2, 12)


def test_coding_params_validation():
    with pytest.raises(ValueError):
        coding_params(P11, 0.5, max_depth=0)
