"""Generalized discrete baker map on a t^n x t^n grid.

A partition (q_1, ..., q_k) with t^q_1 + ... + t^q_k = t^n slices the grid
into vertical strips; each strip of width t^q_i is stretched flat and
stacked. The partition is admissible when every prefix sum N_{i-1} is
divisible by t^q_i, which is exactly the condition under which the strip
map reduces to a digit shuffle of two base-t words, i.e. to a permutation
a register machine can perform without arithmetic.

Counting is exact: the number of admissible partitions obeys
``count(t, n) = count(t, n - 1)**t + 1`` and grows beyond 2^66000 already
for t = 4, n = 9, so everything here runs on Python big integers.
"""

from __future__ import annotations

import functools
import itertools
import random
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .sfc import QuditDigits

ENUMERATION_CAP = 10**6


@functools.lru_cache(maxsize=None)
def _power_table(t: int, n: int) -> tuple[int, ...]:
    return tuple(t**i for i in range(n + 1))


@dataclass(frozen=True)
class BakerPartition:
    """Ordered exponent list (q_1, ..., q_k) with sum of t^q_i equal to t^n."""

    base: int
    n: int
    parts: tuple[int, ...]

    def __post_init__(self):
        t = self.base
        if t < 2 or t & (t - 1):
            raise ValueError(f"base must be a power of two >= 2, got {t}")
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        object.__setattr__(self, "parts", tuple(int(q) for q in self.parts))
        if not self.parts:
            raise ValueError("partition needs at least one part")
        powers = _power_table(t, self.n)
        total = 0
        for q in self.parts:
            if not 0 <= q <= self.n:
                raise ValueError(f"part exponent {q} out of [0, {self.n}]")
            total += powers[q]
        if total != powers[self.n]:
            raise ValueError(
                f"parts {self.parts} sum to {total}, expected {t}^{self.n} = {powers[self.n]}"
            )

    def boundaries(self) -> list[int]:
        """Prefix sums N_0 = 0, N_1, ..., N_k = t^n."""
        powers = _power_table(self.base, self.n)
        acc = [0]
        for q in self.parts:
            acc.append(acc[-1] + powers[q])
        return acc


def is_admissible(p: BakerPartition) -> bool:
    """True iff every t^q_i divides the prefix sum before it."""
    powers = _power_table(p.base, p.n)
    before = 0
    for i, q in enumerate(p.parts):
        if i > 0 and before % powers[q] != 0:
            return False
        before += powers[q]
    return True


def count_admissible(t: int, n: int) -> int:
    """Exact number of admissible partitions for a t^n x t^n grid."""
    if t < 2 or t & (t - 1):
        raise ValueError(f"base must be a power of two >= 2, got {t}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    count = 1
    for _ in range(n):
        count = count**t + 1
    return count


def _enumerate_parts(t: int, n: int) -> list[tuple[int, ...]]:
    # Lexicographic by construction: an admissible partition of level L is
    # either the glue of t independent level-(L-1) partitions or the single
    # part (L), no partition is a prefix of another, and the product of a
    # lex-sorted level is itself lex-sorted.
    level = [(0,)]
    for ln in range(1, n + 1):
        level = [sum(combo, ()) for combo in itertools.product(level, repeat=t)]
        level.append((ln,))
    return level


def enumerate_admissible(t: int, n: int, cap: int = ENUMERATION_CAP) -> list[BakerPartition]:
    """All admissible partitions in lexicographic order of the exponent lists."""
    total = count_admissible(t, n)
    if total > cap:
        raise ValueError(f"count {total} exceeds enumeration cap {cap}")
    return [BakerPartition(t, n, parts) for parts in _enumerate_parts(t, n)]


def sample_admissible(t: int, n: int, rng: random.Random) -> BakerPartition:
    """Uniform sample over the admissible set, without enumeration.

    Level n is the single part (n) with probability 1/count(t, n), otherwise
    the glue of t independent uniform level-(n-1) samples; the recursion
    makes the draw exactly uniform even where the count exceeds 2^60000.
    """

    def draw(level: int) -> tuple[int, ...]:
        if level == 0:
            return (0,)
        if rng.randrange(count_admissible(t, level)) == 0:
            return (level,)
        parts: tuple[int, ...] = ()
        for _ in range(t):
            parts += draw(level - 1)
        return parts

    return BakerPartition(t, n, draw(n))


# ---------------------------------------------------------------------------
# applying the map
# ---------------------------------------------------------------------------

def _segment_index(boundaries: list[int], value: int) -> int:
    return bisect_right(boundaries, value) - 1


def baker_apply(p: BakerPartition, x: int, y: int) -> tuple[int, int]:
    """One application of the piecewise stretch-and-stack map."""
    t, n = p.base, p.n
    size = t**n
    if not (0 <= x < size and 0 <= y < size):
        raise ValueError(f"point ({x}, {y}) outside the {size}x{size} grid")
    bounds = p.boundaries()
    i = _segment_index(bounds, x)
    q = p.parts[i]
    w = t ** (n - q)
    x2 = w * (x - bounds[i]) + y % w
    y2 = bounds[i] + (y - y % w) // w
    return x2, y2


def baker_inverse(p: BakerPartition, x2: int, y2: int) -> tuple[int, int]:
    """Analytic inverse; the image strip is recovered from y'."""
    t, n = p.base, p.n
    size = t**n
    if not (0 <= x2 < size and 0 <= y2 < size):
        raise ValueError(f"point ({x2}, {y2}) outside the {size}x{size} grid")
    bounds = p.boundaries()
    i = _segment_index(bounds, y2)
    q = p.parts[i]
    w = t ** (n - q)
    x = bounds[i] + x2 // w
    y = (y2 - bounds[i]) * w + x2 % w
    return x, y


def digit_shuffle(s: int, x_digits, y_digits) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The admissible-strip map as a pure digit permutation.

    Takes and returns least-significant-first digit tuples of equal length
    n: x' keeps the s low digits of x above the n-s low digits of y, while
    y' stacks the s high digits of y above the n-s high digits of x.
    """
    x = tuple(x_digits.digits) if isinstance(x_digits, QuditDigits) else tuple(x_digits)
    y = tuple(y_digits.digits) if isinstance(y_digits, QuditDigits) else tuple(y_digits)
    n = len(x)
    if len(y) != n:
        raise ValueError(f"digit strings differ in length: {len(x)} vs {len(y)}")
    if not 0 <= s <= n:
        raise ValueError(f"shuffle parameter {s} out of [0, {n}]")
    x2 = y[: n - s] + x[:s]
    y2 = y[n - s :] + x[s:]
    return x2, y2


def scramble_pair(p: BakerPartition, iterations: int, a: QuditDigits, b: QuditDigits) -> tuple[QuditDigits, QuditDigits]:
    """Iterate the map on the pair of base-t words (a, b)."""
    t, n = p.base, p.n
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if a.radix != t or b.radix != t or len(a) != n or len(b) != n:
        raise ValueError("digit words do not match the partition's base and length")
    x, y = a.to_int(), b.to_int()
    for _ in range(iterations):
        x, y = baker_apply(p, x, y)
    return QuditDigits.from_int(x, t, n), QuditDigits.from_int(y, t, n)


# ---------------------------------------------------------------------------
# whole-grid permutations (vectorized)
# ---------------------------------------------------------------------------

def baker_permutation(p: BakerPartition) -> np.ndarray:
    """Permutation array over the flattened grid: new[x*t^n + y] = old index.

    Entry j of the returned array is the flat destination of flat point j,
    with flat index x * t^n + y. Grid sizes above 2^31 points are refused;
    at that scale the map should only ever be applied through digit words.
    """
    t, n = p.base, p.n
    size = t**n
    if size * size > 2**31:
        raise ValueError(f"grid {size}x{size} too large for an explicit permutation")
    bounds = np.array(p.boundaries(), dtype=np.int64)
    widths = np.array([t ** (n - q) for q in p.parts], dtype=np.int64)
    flat = np.arange(size * size, dtype=np.int64)
    x, y = flat // size, flat % size
    seg = np.searchsorted(bounds, x, side="right") - 1
    w = widths[seg]
    start = bounds[seg]
    x2 = w * (x - start) + y % w
    y2 = start + (y - y % w) // w
    return (x2 * size + y2).astype(np.int64)


def permutation_power(perm: np.ndarray, r: int) -> np.ndarray:
    """r-fold composition of a permutation by binary exponentiation."""
    if r < 0:
        raise ValueError("negative powers are handled through the inverse")
    result = np.arange(len(perm), dtype=perm.dtype)
    square = perm
    while r:
        if r & 1:
            result = square[result]
        square = square[square]
        r >>= 1
    return result


def permutation_inverse(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=perm.dtype)
    return inv
