import random

import numpy as np
import pytest

from quditcrypt.baker import (
    BakerPartition,
    baker_apply,
    baker_inverse,
    baker_permutation,
    count_admissible,
    digit_shuffle,
    enumerate_admissible,
    is_admissible,
    permutation_inverse,
    permutation_power,
    sample_admissible,
    scramble_pair,
)
from quditcrypt.sfc import QuditDigits


def brute_force_admissible(t, n):
    """Oracle: DFS over all power-of-t compositions of t^n, filtered."""
    target = t**n
    found = []

    def extend(prefix, total):
        if total == target:
            found.append(tuple(prefix))
            return
        for q in range(n, -1, -1):
            step = t**q
            if total + step > target:
                continue
            if prefix and total % step != 0:
                continue  # t^q must divide the prefix sum
            prefix.append(q)
            extend(prefix, total + step)
            prefix.pop()

    extend([], 0)
    return sorted(found)


def grid_points(t, n):
    size = t**n
    return [(x, y) for x in range(size) for y in range(size)]


# ---------------------------------------------------------------------------
# admissibility and counting
# ---------------------------------------------------------------------------

def test_is_admissible_examples():
    assert is_admissible(BakerPartition(4, 1, (1,)))
    assert is_admissible(BakerPartition(4, 1, (0, 0, 0, 0)))
    assert not is_admissible(BakerPartition(2, 2, (0, 1, 0)))


def test_partition_sum_is_validated():
    with pytest.raises(ValueError):
        BakerPartition(4, 1, (0, 0))


def test_count_examples():
    assert count_admissible(4, 2) == 17
    assert count_admissible(4, 3) == 83522
    assert count_admissible(2, 5) == 458330
    assert count_admissible(8, 3) == 257**8 + 1
    assert count_admissible(8, 3) == 19031147999601100802


def test_count_small_table():
    assert [count_admissible(2, n) for n in range(6)] == [1, 2, 5, 26, 677, 458330]
    assert [count_admissible(4, n) for n in range(4)] == [1, 2, 17, 83522]


def test_count_lower_bounds():
    q_bounds = {4: 64, 5: 260, 6: 1046, 7: 4184, 8: 16742, 9: 66968}
    for n, b in q_bounds.items():
        assert count_admissible(4, n) > 2**b
    p_bounds = {6: 37, 7: 75, 8: 150, 9: 300}
    for n, b in p_bounds.items():
        assert count_admissible(2, n) > 2**b


def test_count_bounds_for_octal_word_sizes():
    # map-parameter space per word size, as quoted in the scheme library
    bounds = {3: 19, 4: 154, 5: 152, 6: 9871, 8: 631748}
    for n, decimal_exponent in bounds.items():
        assert count_admissible(8, n) > 10**decimal_exponent
    assert count_admissible(8, 5) > 10**1233


@pytest.mark.parametrize("t,n", [(2, 1), (2, 2), (2, 3), (4, 1), (4, 2), (8, 1)])
def test_enumeration_matches_brute_force(t, n):
    got = [p.parts for p in enumerate_admissible(t, n)]
    assert got == brute_force_admissible(t, n)
    assert len(got) == count_admissible(t, n)


def test_enumeration_examples():
    assert [p.parts for p in enumerate_admissible(4, 1)] == [(0, 0, 0, 0), (1,)]
    assert len(enumerate_admissible(2, 2)) == 5
    assert len(enumerate_admissible(8, 1)) == 2


def test_enumeration_is_lexicographic():
    parts = [p.parts for p in enumerate_admissible(2, 3)]
    assert parts == sorted(parts)


@pytest.mark.parametrize("t,n", [(2, 4), (2, 5), (4, 3), (8, 2)])
def test_enumeration_length_matches_count_at_scale(t, n):
    # every case whose count stays under the enumeration cap
    assert len(enumerate_admissible(t, n)) == count_admissible(t, n)


def test_enumeration_cap():
    with pytest.raises(ValueError):
        enumerate_admissible(4, 4, cap=10**6)


def test_sampling_is_admissible_and_uniformish():
    rng = random.Random(99)
    seen = set()
    for _ in range(300):
        p = sample_admissible(4, 2, rng)
        assert is_admissible(p)
        seen.add(p.parts)
    # 17 partitions exist; a uniform sampler should see most of them
    assert len(seen) >= 12


def test_sampling_matches_enumeration_support():
    rng = random.Random(1)
    support = {p.parts for p in enumerate_admissible(2, 2)}
    for _ in range(100):
        assert sample_admissible(2, 2, rng).parts in support


# ---------------------------------------------------------------------------
# applying the map
# ---------------------------------------------------------------------------

def test_single_part_is_identity():
    p = BakerPartition(4, 2, (2,))
    for x, y in [(0, 0), (3, 7), (15, 15), (9, 2)]:
        assert baker_apply(p, x, y) == (x, y)


def test_tiny_grid_table():
    p = BakerPartition(2, 1, (0, 0))
    table = {(0, 0): (0, 0), (0, 1): (1, 0), (1, 0): (0, 1), (1, 1): (1, 1)}
    for point, image in table.items():
        assert baker_apply(p, *point) == image


def test_out_of_grid_rejected():
    p = BakerPartition(2, 1, (0, 0))
    with pytest.raises(ValueError):
        baker_apply(p, 2, 0)
    with pytest.raises(ValueError):
        baker_inverse(p, 0, -1)


def bijectivity_check(p):
    size = p.base**p.n
    seen = set()
    for x, y in grid_points(p.base, p.n):
        x2, y2 = baker_apply(p, x, y)
        assert 0 <= x2 < size and 0 <= y2 < size
        seen.add((x2, y2))
        assert baker_inverse(p, x2, y2) == (x, y)
    assert len(seen) == size * size


@pytest.mark.parametrize("t,n", [(2, 1), (2, 2), (2, 3), (4, 1), (4, 2), (8, 1)])
def test_bijectivity_exhaustive(t, n):
    for p in enumerate_admissible(t, n):
        bijectivity_check(p)


@pytest.mark.parametrize("t,n,samples", [(4, 3, 30), (8, 2, 30)])
def test_bijectivity_sampled_vectorized(t, n, samples):
    rng = random.Random(2024)
    size = t**n
    for _ in range(samples):
        p = sample_admissible(t, n, rng)
        perm = baker_permutation(p)
        assert np.array_equal(np.sort(perm), np.arange(size * size))
        inv = permutation_inverse(perm)
        assert np.array_equal(perm[inv], np.arange(size * size))


def test_permutation_matches_scalar_map():
    rng = random.Random(6)
    for t, n in [(2, 2), (4, 2), (8, 1)]:
        p = sample_admissible(t, n, rng)
        size = t**n
        perm = baker_permutation(p)
        for _ in range(50):
            x, y = rng.randrange(size), rng.randrange(size)
            x2, y2 = baker_apply(p, x, y)
            assert perm[x * size + y] == x2 * size + y2


def test_permutation_power_and_inverse():
    p = BakerPartition(4, 2, (1, 1, 1, 1))
    perm = baker_permutation(p)
    assert np.array_equal(permutation_power(perm, 1), perm)
    assert np.array_equal(permutation_power(perm, 2), perm[perm])
    assert np.array_equal(permutation_power(perm, 0), np.arange(len(perm)))
    # binary exponentiation against naive repeated composition
    naive = np.arange(len(perm))
    for _ in range(13):
        naive = perm[naive]
    assert np.array_equal(permutation_power(perm, 13), naive)


# ---------------------------------------------------------------------------
# digit shuffle
# ---------------------------------------------------------------------------

def digits_lsb(value, t, n):
    return tuple((value // t**i) % t for i in range(n))


def undigits_lsb(digits, t):
    value = 0
    for d in reversed(digits):
        value = value * t + d
    return value


def g_map_oracle(t, n, s, x, y):
    """Arithmetic form of the shuffle, independent of digit juggling."""
    w = t ** (n - s)
    size = t**n
    return ((w * x) % size + y % w, (y - y % w) // w + x - x % t**s)


def test_digit_shuffle_identity_and_swap():
    x, y = (1, 2, 3), (0, 3, 1)
    assert digit_shuffle(3, x, y) == (x, y)
    assert digit_shuffle(0, x, y) == (y, x)


def test_digit_shuffle_worked_example():
    # x = 210 base 4, y = 031 base 4 (printed most significant first);
    # s = 1 gives x' = (x0, y1, y0) and y' = (x2, x1, y2)
    x_msb, y_msb = (2, 1, 0), (0, 3, 1)
    x, y = tuple(reversed(x_msb)), tuple(reversed(y_msb))
    x2, y2 = digit_shuffle(1, x, y)
    assert tuple(reversed(x2)) == (0, 3, 1)
    assert tuple(reversed(y2)) == (2, 1, 0)


def test_digit_shuffle_matches_arithmetic_form():
    rng = random.Random(12)
    for t in (2, 4, 8):
        for n in (1, 2, 3):
            size = t**n
            for s in range(n + 1):
                for _ in range(40):
                    x, y = rng.randrange(size), rng.randrange(size)
                    x2d, y2d = digit_shuffle(s, digits_lsb(x, t, n), digits_lsb(y, t, n))
                    got = (undigits_lsb(x2d, t), undigits_lsb(y2d, t))
                    assert got == g_map_oracle(t, n, s, x, y)


def test_digit_shuffle_accepts_qudit_digits():
    x = QuditDigits(4, (0, 1, 2))
    y = QuditDigits(4, (1, 3, 0))
    assert digit_shuffle(3, x, y) == ((0, 1, 2), (1, 3, 0))


def test_piecewise_map_equals_digit_shuffle_on_segments():
    # wherever the divisibility condition holds, the strip map is the
    # shuffle with that strip's exponent
    rng = random.Random(77)
    for t, n in [(2, 2), (2, 3), (4, 2), (8, 1), (4, 3)]:
        size = t**n
        pool = (
            enumerate_admissible(t, n)
            if count_admissible(t, n) <= 100
            else [sample_admissible(t, n, rng) for _ in range(40)]
        )
        for p in pool:
            bounds = p.boundaries()
            for i, q in enumerate(p.parts):
                x = rng.randrange(bounds[i], bounds[i + 1])
                for _ in range(5):
                    y = rng.randrange(size)
                    x2d, y2d = digit_shuffle(q, digits_lsb(x, t, n), digits_lsb(y, t, n))
                    shuffled = (undigits_lsb(x2d, t), undigits_lsb(y2d, t))
                    assert baker_apply(p, x, y) == shuffled


def test_digit_shuffle_length_mismatch():
    with pytest.raises(ValueError):
        digit_shuffle(1, (0, 1), (0, 1, 2))


# ---------------------------------------------------------------------------
# iterated pair scrambling
# ---------------------------------------------------------------------------

def test_scramble_pair_single_iteration():
    p = BakerPartition(4, 2, (1, 1, 1, 1))
    a = QuditDigits(4, (3, 0))
    b = QuditDigits(4, (1, 2))
    a2, b2 = scramble_pair(p, 1, a, b)
    assert (a2.to_int(), b2.to_int()) == baker_apply(p, a.to_int(), b.to_int())


def test_scramble_pair_composes():
    p = BakerPartition(4, 2, (0, 0, 0, 0, 1, 1, 1))
    assert is_admissible(p)
    a = QuditDigits(4, (2, 3))
    b = QuditDigits(4, (0, 1))
    once = scramble_pair(p, 1, a, b)
    twice = scramble_pair(p, 2, a, b)
    assert scramble_pair(p, 1, *once) == twice


def test_scramble_pair_full_period_is_identity():
    # cycle length found by brute force on the whole 16 x 16 grid
    p = BakerPartition(4, 2, (1, 1, 1, 1))
    perm = baker_permutation(p)
    identity = np.arange(len(perm))
    period = 1
    current = perm.copy()
    while not np.array_equal(current, identity):
        current = perm[current]
        period += 1
        assert period < 10**6
    a = QuditDigits(4, (1, 3))
    b = QuditDigits(4, (2, 0))
    assert scramble_pair(p, period, a, b) == (a, b)


def test_scramble_pair_validates_words():
    p = BakerPartition(4, 2, (2,))
    with pytest.raises(ValueError):
        scramble_pair(p, 0, QuditDigits(4, (0, 0)), QuditDigits(4, (0, 0)))
    with pytest.raises(ValueError):
        scramble_pair(p, 1, QuditDigits(2, (0, 0)), QuditDigits(4, (0, 0)))
