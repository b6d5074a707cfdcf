"""Space-filling curves and digit encodings of integral hypercube points.

Two curve families live here. The Schoenberg curve on the unit square is
kept as a baseline only: its single step function consumes one ternary
digit of the parameter per coordinate bit, so a pre-image still costs 2n
digits and nothing is saved. The plateau family (kind ``"paper"``) drives
d step functions from one parameter and is the one that buys storage: an
integral point of a d-dimensional hypercube of side 2^n, normally dn bits,
becomes a single length-n digit string over the radix t = 2^d.

Arithmetic is exact where it matters. ``preimage_param`` returns a
``Fraction`` and ``curve_eval`` keeps rational inputs rational internally,
so evaluating the truncated series at a pre-image reproduces the original
dyadic point without float noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

KIND_SCHOENBERG = "schoenberg"
KIND_PAPER = "paper"


@dataclass(frozen=True)
class CurveSpec:
    """Curve family, dimension and series truncation."""

    dimension: int
    kind: str = KIND_PAPER
    n_terms: int = 16

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.kind not in (KIND_SCHOENBERG, KIND_PAPER):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.kind == KIND_SCHOENBERG and self.dimension != 2:
            raise ValueError("the Schoenberg curve is planar; dimension must be 2")
        if self.n_terms < 1:
            raise ValueError(f"n_terms must be >= 1, got {self.n_terms}")


@dataclass(frozen=True)
class QuditDigits:
    """Fixed-length base-2^d digit string, least significant digit first.

    Storage order is least-significant-first everywhere in this package;
    ``__str__`` prints most-significant-first, which is the only order used
    in textual output.
    """

    radix: int
    digits: tuple[int, ...]

    def __post_init__(self):
        t = self.radix
        if t < 2 or t & (t - 1):
            raise ValueError(f"radix must be a power of two >= 2, got {t}")
        object.__setattr__(self, "digits", tuple(int(v) for v in self.digits))
        for v in self.digits:
            if not 0 <= v < t:
                raise ValueError(f"digit {v} out of range for radix {t}")

    def __len__(self) -> int:
        return len(self.digits)

    def to_int(self) -> int:
        value = 0
        for d in reversed(self.digits):
            value = value * self.radix + d
        return value

    @classmethod
    def from_int(cls, value: int, radix: int, length: int) -> "QuditDigits":
        if not 0 <= value < radix**length:
            raise ValueError(f"{value} does not fit in {length} base-{radix} digits")
        digits = []
        for _ in range(length):
            digits.append(value % radix)
            value //= radix
        return cls(radix, tuple(digits))

    def __str__(self) -> str:
        return " ".join(str(d) for d in reversed(self.digits))


# ---------------------------------------------------------------------------
# step functions
# ---------------------------------------------------------------------------

def _plateau_bit(j: int, axis: int, dimension: int) -> int:
    # On plateau j the axis values spell the binary expansion of j,
    # axis 1 carrying the most significant bit.
    return (j >> (dimension - axis)) & 1


def _paper_axis_value(dimension: int, axis: int, u):
    """Plateau value of f_axis at u, linear between plateaus.

    Accepts float or Fraction and preserves exactness for Fractions: on a
    plateau the result is an exact 0 or 1.
    """
    p = 2 ** (dimension + 1)
    v = u % 1
    w = v * p
    half = math.floor(w)
    if half % 2 == 0:
        return _plateau_bit(half // 2, axis, dimension)
    j = (half - 1) // 2
    lo = _plateau_bit(j, axis, dimension)
    hi = _plateau_bit((j + 1) % 2**dimension, axis, dimension)
    return lo + (hi - lo) * (w - half)


def _schoenberg_value(u):
    """Schoenberg's base step function: even, 2-periodic, 0 / ramp / 1."""
    v = u % 2
    if v > 1:
        v = 2 - v
    if 3 * v <= 1:
        return 0
    if 3 * v >= 2:
        return 1
    return 3 * v - 1


def step_function_eval(spec: CurveSpec, axis: int, u) -> float:
    """Evaluate the axis-th coordinate step function at u.

    The plateau-family functions are 1-periodic; the Schoenberg base
    function is even with period two and is shared by both axes.
    """
    if not 1 <= axis <= spec.dimension:
        raise ValueError(f"axis {axis} out of [1, {spec.dimension}]")
    if spec.kind == KIND_SCHOENBERG:
        return float(_schoenberg_value(u))
    return float(_paper_axis_value(spec.dimension, axis, u))


# ---------------------------------------------------------------------------
# curve evaluation
# ---------------------------------------------------------------------------

def _schoenberg_scale(axis: int, k: int) -> int:
    # x(t) sees f(9^(k-1) t), y(t) sees f(3 * 9^(k-1) t).
    return 3 ** (2 * k - 2) if axis == 1 else 3 ** (2 * k - 1)


def curve_eval(spec: CurveSpec, u) -> tuple[float, ...]:
    """Truncated partial sums of the curve series at parameter u in [0, 1].

    Each coordinate is a sum of n_terms terms f_i(scale * u) / 2^k, so it
    lands in [0, 1 - 2^-n_terms]. Passing a Fraction keeps the whole
    computation rational until the final float conversion.
    """
    if not 0 <= u <= 1:
        raise ValueError(f"curve parameter {u} outside [0, 1]")
    d = spec.dimension
    exact = isinstance(u, Fraction)
    coords = []
    for axis in range(1, d + 1):
        acc = Fraction(0) if exact else 0.0
        for k in range(1, spec.n_terms + 1):
            if spec.kind == KIND_SCHOENBERG:
                arg = _schoenberg_scale(axis, k) * u
                term = _schoenberg_value(arg)
            else:
                arg = 2 ** ((d + 1) * (k - 1)) * u
                term = _paper_axis_value(d, axis, arg)
            acc += Fraction(term) / 2**k if exact else term / 2**k
        coords.append(float(acc))
    return tuple(coords)


# ---------------------------------------------------------------------------
# integral point encoding
# ---------------------------------------------------------------------------

def encode_point(coords, d: int, n: int) -> QuditDigits:
    """Interleave the bits of d coordinates into n base-2^d digits.

    Digit at position k packs bit k of every coordinate, the first
    coordinate supplying the most significant bit inside the digit.
    """
    coords = tuple(int(c) for c in coords)
    if len(coords) != d:
        raise ValueError(f"expected {d} coordinates, got {len(coords)}")
    for c in coords:
        if not 0 <= c < 2**n:
            raise ValueError(f"coordinate {c} out of [0, {2**n})")
    digits = []
    for k in range(n):
        level = 0
        for i, c in enumerate(coords):
            level |= ((c >> k) & 1) << (d - 1 - i)
        digits.append(level)
    return QuditDigits(2**d, tuple(digits))


def decode_point(digits: QuditDigits, d: int, n: int) -> tuple[int, ...]:
    """Exact inverse of :func:`encode_point`."""
    if digits.radix != 2**d:
        raise ValueError(f"radix {digits.radix} does not match dimension {d}")
    if len(digits) != n:
        raise ValueError(f"expected {n} digits, got {len(digits)}")
    coords = [0] * d
    for k, level in enumerate(digits.digits):
        for i in range(d):
            coords[i] |= ((level >> (d - 1 - i)) & 1) << k
    return tuple(coords)


def preimage_param(coords, d: int, n: int) -> Fraction:
    """Exact curve parameter whose truncated evaluation yields coords / 2^n.

    The digit at position n-k contributes twice its level over 2^((d+1)k);
    evaluating the kind-"paper" curve there with n_terms = n returns every
    coordinate exactly.
    """
    levels = encode_point(coords, d, n).digits
    u = Fraction(0)
    for k in range(1, n + 1):
        u += Fraction(2 * levels[n - k], 2 ** ((d + 1) * k))
    return u
