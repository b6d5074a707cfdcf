"""Key-stream generation from sine-chaotified hyperchaotic maps.

Two discrete maps are provided: a seven-dimensional system (``yan7d``) and a
four-dimensional one (``wang4d``). Each step evaluates the classic
continuous right-hand sides and wraps every component as
sin(pi * lambda_i * rhs_i), which pins the orbit inside [-1, 1]^dim and
removes any dependence on an integration step size. Orbits seeded from
plaintext statistics feed rank permutations and floor-scale-mod digit
extraction; everything downstream of a seed is a deterministic function of
binary64 arithmetic in a fixed evaluation order, so key material reproduces
bit-for-bit across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

YAN7D = "yan7d"
WANG4D = "wang4d"

# (a, b, c, d, e, f, g, h, l, m); f is the only one with a constrained range.
YAN7D_DEFAULTS = (10.0, 1.0, 28.0, 8.0 / 3.0, 2.0, 7.2, 1.0, 2.0, 1.0, 1.0)
YAN7D_F_RANGE = (6.3, 15.3)
# (a, b, c, r); the fourth coefficient enters the chaotified map as r * w.
WANG4D_DEFAULTS = (10.0, 8.0 / 3.0, 28.0, -1.1)

BURN_IN = 100
_CHEB_RECURSION_MAX = 64


class DegenerateSeedError(RuntimeError):
    """Raised when an orbit fails to produce enough distinct values."""


@dataclass(frozen=True)
class ChaoticParams:
    """A chaotified map instance: system choice plus its coefficient vectors."""

    system: str
    lam: tuple[float, ...]
    base: tuple[float, ...] = ()
    chaotified: bool = True

    def __post_init__(self):
        if self.system not in (YAN7D, WANG4D):
            raise ValueError(f"unknown system {self.system!r}")
        dim = 7 if self.system == YAN7D else 4
        object.__setattr__(self, "lam", tuple(float(v) for v in self.lam))
        if len(self.lam) != dim:
            raise ValueError(f"{self.system} needs {dim} chaotification factors, got {len(self.lam)}")
        defaults = YAN7D_DEFAULTS if self.system == YAN7D else WANG4D_DEFAULTS
        base = tuple(float(v) for v in self.base) if self.base else defaults
        if len(base) != len(defaults):
            raise ValueError(f"{self.system} needs {len(defaults)} base coefficients")
        if self.system == YAN7D and not YAN7D_F_RANGE[0] < base[5] < YAN7D_F_RANGE[1]:
            raise ValueError(f"coefficient f = {base[5]} outside {YAN7D_F_RANGE}")
        object.__setattr__(self, "base", base)

    @property
    def dim(self) -> int:
        return 7 if self.system == YAN7D else 4


def yan7d_params(lam: Sequence[float], f: float | None = None) -> ChaoticParams:
    base = YAN7D_DEFAULTS if f is None else YAN7D_DEFAULTS[:5] + (float(f),) + YAN7D_DEFAULTS[6:]
    return ChaoticParams(YAN7D, tuple(lam), base)


def wang4d_params(mu: Sequence[float]) -> ChaoticParams:
    return ChaoticParams(WANG4D, tuple(mu))


def _yan7d_rhs(b, s):
    a, bb, c, d, e, f, g, h, l, m = b
    x1, x2, x3, x4, x5, x6, x7 = s
    return (
        a * (x2 - x1) + x4 + bb * x6,
        c * x1 - x2 - x1 * x3 + x5,
        -d * x3 + x1 * x2,
        e * x4 - x1 * x3,
        -f * x2 + x6,
        g * x1 + h * x2,
        l * x7 + m * x4,
    )


def _wang4d_rhs(b, s):
    a, bb, c, r = b
    x, y, z, w = s
    return (
        a * (y - x) + w,
        c * x - y - x * z,
        x * y - bb * z,
        -y * z + r * w,
    )


def step(params: ChaoticParams, state: Sequence[float]) -> tuple[float, ...]:
    """One iteration of the discrete map.

    With chaotification on (the normal mode), every output component is
    sin(pi * lambda_i * rhs_i(state)) and therefore lies in [-1, 1].
    """
    if len(state) != params.dim:
        raise ValueError(f"state has {len(state)} components, expected {params.dim}")
    rhs = (_yan7d_rhs if params.system == YAN7D else _wang4d_rhs)(params.base, state)
    if not params.chaotified:
        return tuple(rhs)
    return tuple(math.sin(math.pi * l * r) for l, r in zip(params.lam, rhs))


# ---------------------------------------------------------------------------
# Chebyshev evaluation
# ---------------------------------------------------------------------------

def chebyshev_recursive(k: int, x: float) -> float:
    """Three-term recursion; O(k), fine for small indices."""
    if k == 0:
        return 1.0
    t_prev, t_cur = 1.0, float(x)
    for _ in range(k - 1):
        t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
    return t_cur


def chebyshev_closed(k: int, x: float) -> float:
    """cos(k * arccos x); constant time, used for large indices."""
    return math.cos(k * math.acos(x))


def chebyshev(k: int, x: float) -> float:
    """Degree-k Chebyshev value on [-1, 1].

    The recursion loses roughly k^2 ulps and indices reach 2^24 in some of
    the digit-extraction formulas, so evaluation switches to the closed form
    beyond degree 64.
    """
    if k < 0:
        raise ValueError(f"index must be >= 0, got {k}")
    if abs(x) > 1.0:
        raise ValueError(f"argument {x} outside [-1, 1]; fold it first")
    if k <= _CHEB_RECURSION_MAX:
        return chebyshev_recursive(k, x)
    return chebyshev_closed(k, x)


def fold_unit(x: float) -> float:
    """Triangle-wave fold of the real line onto [-1, 1], identity inside."""
    if not math.isfinite(x):
        raise ValueError(f"cannot fold non-finite value {x}")
    y = (x + 1.0) % 4.0
    return y - 1.0 if y <= 2.0 else 3.0 - y


# ---------------------------------------------------------------------------
# sequences, ranks, key streams
# ---------------------------------------------------------------------------

def generate_sequences(
    params: ChaoticParams,
    seed: Sequence[float],
    counts: Sequence[int],
) -> tuple[list[float], ...]:
    """Collect per-coordinate sequences of distinct orbit values.

    The first hundred iterations are discarded; the first collected state is
    therefore exactly the hundredth iterate of the seed. A value equal (as a
    binary64) to one already collected in the same coordinate's sequence is
    skipped, so each output sequence is duplicate-free. Coordinates with a
    zero count collect nothing.
    """
    if len(counts) != params.dim:
        raise ValueError(f"need {params.dim} counts, got {len(counts)}")
    state = tuple(float(v) for v in seed)
    for _ in range(BURN_IN):
        state = step(params, state)
    sequences: tuple[list[float], ...] = tuple([] for _ in counts)
    seen: tuple[set, ...] = tuple(set() for _ in counts)
    budget = 1000 * max(counts) if max(counts, default=0) > 0 else 0
    steps_used = 0
    while any(len(seq) < want for seq, want in zip(sequences, counts)):
        for i, want in enumerate(counts):
            if len(sequences[i]) < want and state[i] not in seen[i]:
                sequences[i].append(state[i])
                seen[i].add(state[i])
        if all(len(seq) >= want for seq, want in zip(sequences, counts)):
            break
        if steps_used >= budget:
            raise DegenerateSeedError(
                f"orbit produced too few distinct values within {budget} iterations"
            )
        state = step(params, state)
        steps_used += 1
    return sequences


def rank_permutation(seq: Sequence[float]) -> list[int]:
    """Position of each element in the ascending sort; always a permutation."""
    if len(set(seq)) != len(seq):
        raise ValueError("sequence contains duplicate values")
    order = sorted(range(len(seq)), key=lambda i: seq[i])
    ranks = [0] * len(seq)
    for position, index in enumerate(order):
        ranks[index] = position
    return ranks


def orbit_export(
    params: ChaoticParams,
    seed: Sequence[float],
    n_points: int,
    coords: tuple[int, int, int],
) -> np.ndarray:
    """Post-burn-in orbit, projected to three coordinates; shape (n, 3)."""
    for c in coords:
        if not 0 <= c < params.dim:
            raise ValueError(f"coordinate index {c} out of [0, {params.dim})")
    state = tuple(float(v) for v in seed)
    for _ in range(BURN_IN):
        state = step(params, state)
    out = np.empty((n_points, 3), dtype=np.float64)
    for i in range(n_points):
        out[i] = [state[coords[0]], state[coords[1]], state[coords[2]]]
        state = step(params, state)
    return out


# ---------------------------------------------------------------------------
# plaintext-dependent seeding
# ---------------------------------------------------------------------------

def _chebyshev_of_total(index: int, x0: float) -> float:
    return chebyshev(index, fold_unit(x0))


def seed_ququart(state) -> tuple[float, ...]:
    """Seven initial conditions derived from a quart-grid multi-image.

    The first component is the grid's digit total over the number of
    (block, image, pixel) addresses; the rest are Chebyshev transforms of
    its folded value whose degrees are per-channel digit totals averaged
    over pixel positions, then over image slots. Any single-digit change in
    the plaintext moves the seed.
    """
    layout = state.layout
    if layout.radix != 4 or len(layout.value_channels) != 3:
        raise ValueError("seed_ququart needs a quart layout with three value channels")
    h, w = layout.image_shape
    positions = layout.block_capacity * layout.images_per_block * h * w
    x0 = state.total() / positions
    indices = [state.total(c) // (h * w) for c in range(3)]
    indices += [
        state.total(c) // (layout.block_capacity * layout.images_per_block) for c in range(3)
    ]
    return (x0,) + tuple(_chebyshev_of_total(i, x0) for i in indices)


def seed_quoctit(state) -> tuple[float, ...]:
    """Four initial conditions derived from a bit-valued octal grid.

    Components: the bit total over the number of value slots; then
    Chebyshev transforms of the folded total with degrees equal to the
    total itself, its average per pixel position, and its average per
    (block, plane-color-image triple) group.
    """
    layout = state.layout
    if layout.radix != 8:
        raise ValueError("seed_quoctit needs an octal layout")
    loc = layout.find_component("plane")
    if loc is None:
        raise ValueError("seed_quoctit needs a plane component")
    h, w = layout.image_shape
    total = state.total()
    x0 = total / layout.cell_count()
    triple = layout.axis_capacity(loc[0])
    s1 = total
    s2 = total // (h * w)
    s3 = total // (layout.block_capacity * triple)
    return (
        x0,
        _chebyshev_of_total(s1, x0),
        _chebyshev_of_total(s2, x0),
        _chebyshev_of_total(s3, x0),
    )


@dataclass
class KeyStream:
    """Derived pseudo-random material, addressable by name.

    ``sequences`` and ``ranks`` are keyed "<name>.<block>" (or
    "<name>.<channel>.<block>" where systems are per color); secret digit
    arrays live in ``secret_digits`` under scheme-defined names.
    """

    sequences: dict[str, tuple[float, ...]] = field(default_factory=dict)
    ranks: dict[str, tuple[int, ...]] = field(default_factory=dict)
    secret_digits: dict[str, np.ndarray] = field(default_factory=dict)

    def seq(self, name: str, block: int = 0) -> tuple[float, ...]:
        return self.sequences[f"{name}.{block}"]

    def rank(self, name: str, block: int = 0) -> tuple[int, ...]:
        return self.ranks[f"{name}.{block}"]


def floor_scale_mod(product: float, scale: float, modulus: int) -> int:
    """floor(product * scale) mod modulus, exact for any binary64 input."""
    return int(math.floor(product * scale)) % modulus


def key_quarts_ququart(ks: KeyStream, t: int, m: int, z: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """The three per-(block, image, pixel) diffusion keys, as quart 4-tuples.

    Each key is floor(T_a(u) * T_b(v) * 1e10) mod 256 where the degree pair
    comes from the rank permutations of one sequence triple and the
    arguments are reverse-indexed values of the other triple; the result is
    split least-significant-quart-first, one quart per plane.
    """
    size = len(ks.seq("xi", t))
    keys = []
    for rank_a, arg_a, rank_b, arg_b in (
        ("sigma_r", "beta", "tau_r", "zeta"),
        ("sigma_g", "gamma", "tau_g", "xi"),
        ("sigma_b", "alpha", "tau_b", "iota"),
    ):
        u = chebyshev(ks.rank(rank_a, t)[z], ks.seq(arg_a, t)[size - 1 - z])
        v = chebyshev(ks.rank(rank_b, t)[m], ks.seq(arg_b, t)[size - 1 - m])
        word = floor_scale_mod(u * v, 1e10, 256)
        keys.append(tuple((word >> (2 * i)) & 3 for i in range(4)))
    return keys[0], keys[1], keys[2]


# scheme id -> (width in bits, scale factor)
SECRET_BIT_SCHEMES: Mapping[str, tuple[int, float]] = {
    "three_stage": (1, 1e5),
    "mixed_a": (24, 1e20),
    "mixed_b": (8, 1e10),
    "monster": (8, 1.0),
}


def secret_bits(scheme: str, ks: KeyStream, address: tuple[int, ...], block: int = 0) -> tuple[int, ...]:
    """Scheme-specific diffusion bits for one address, most significant first.

    three_stage: address (i, j, l) -> floor(T_{n_i}(y_j) T_{m_j}(z_l)
    T_{k_l}(x_i) * 1e5) mod 2. mixed_a / mixed_b: address (k,) with all three
    factors indexed by k, 24 or 8 bits. monster: address (k, m), two factors
    with reverse-indexed arguments and no scale factor, 8 bits; the block
    slot selects the per-color stream.
    """
    try:
        width, scale = SECRET_BIT_SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown secret-bit scheme {scheme!r}") from None
    if scheme == "three_stage":
        i, j, l = address
        prod = (
            chebyshev(ks.rank("x", block)[i], ks.seq("y", block)[j])
            * chebyshev(ks.rank("y", block)[j], ks.seq("z", block)[l])
            * chebyshev(ks.rank("z", block)[l], ks.seq("x", block)[i])
        )
    elif scheme in ("mixed_a", "mixed_b"):
        (k,) = address
        prod = (
            chebyshev(ks.rank("x", block)[k], ks.seq("y", block)[k])
            * chebyshev(ks.rank("y", block)[k], ks.seq("z", block)[k])
            * chebyshev(ks.rank("z", block)[k], ks.seq("x", block)[k])
        )
    else:  # monster, per-color streams live under the channel slot
        k, m = address
        size = len(ks.seq("x", block))
        prod = chebyshev(ks.rank("x", block)[k], ks.seq("y", block)[size - 1 - k]) * chebyshev(
            ks.rank("y", block)[m], ks.seq("x", block)[size - 1 - m]
        )
    word = floor_scale_mod(prod, scale, 2**width)
    return tuple((word >> (width - 1 - b)) & 1 for b in range(width))
