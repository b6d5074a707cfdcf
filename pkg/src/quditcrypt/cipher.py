"""Scheme plans and the scramble-plus-diffuse pipelines.

A scheme plan names a layout, an ordered list of scramble stages and a
diffusion recipe. Scramble stages pick two disjoint equal-length groups of
address digit positions and shuffle the pair of base-t words they spell
with a keyed baker map, once per assignment of the remaining digits;
optional control digits select among keyed map variants, which is how
block- and plane-dependent shuffling works. Diffusion adds or XORs
chaos-derived digits onto the value channels.

Encryption seeds the chaotic systems from plaintext statistics, so the key
file written next to a ciphertext records those seeds (and the image
count); decryption regenerates the identical streams from the file and
applies the inverse gates in reverse order. There is no authentication
layer: a wrong key or a mismatched layout yields garbage, not an error.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from . import chaos
from .baker import (
    BakerPartition,
    baker_permutation,
    permutation_inverse,
    permutation_power,
)
from .chaos import KeyStream, chebyshev, floor_scale_mod, fold_unit
from .multiimage import AxisLayout, MultiImageState, pack, unpack

MODE_QUART_ADD = "quart_add"
MODE_BIT_XOR = "bit_xor"
MODE_MIXED = "mixed"

# key widths supported by the mixed-diffusion extraction and their scales
MIXED_SCALES = {1: 1e5, 8: 1e10, 24: 1e20}


class KeyMaterialError(ValueError):
    """Missing or inconsistent key-file material."""


@dataclass(frozen=True)
class ScrambleStage:
    """Digit selections for one baker-map pass.

    ``left`` and ``right`` list global digit positions, most significant
    first; the left word is the stretched coordinate. ``controls`` name the
    digit positions whose values pick the keyed map variant.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    controls: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "controls", tuple(self.controls))
        if len(self.left) != len(self.right):
            raise ValueError("scramble words must have equal digit counts")
        picked = self.left + self.right + self.controls
        if len(set(picked)) != len(picked):
            raise ValueError("digit selections overlap")


@dataclass(frozen=True)
class DiffusionPlan:
    """How value digits get keyed: mode, recipe and stream scope."""

    mode: str
    recipe: str
    system: str
    scope: str = "block"  # "block", "color" or "global" stream instances
    control_digits: tuple[int, ...] = ()

    def __post_init__(self):
        if self.mode not in (MODE_QUART_ADD, MODE_BIT_XOR, MODE_MIXED):
            raise ValueError(f"unknown diffusion mode {self.mode!r}")
        object.__setattr__(self, "control_digits", tuple(self.control_digits))


@dataclass(frozen=True)
class SchemePlan:
    """A complete scheme: layout, scramble stages, diffusion recipe."""

    preset_name: str
    layout: AxisLayout
    stages: tuple[ScrambleStage, ...]
    diffusion: DiffusionPlan
    params: tuple[tuple[str, int], ...] = ()
    iteration_range: tuple[int, int] = (1, 1)

    def __post_init__(self):
        total = self.layout.total_digits
        for stage in self.stages:
            for pos in stage.left + stage.right + stage.controls:
                if not 0 <= pos < total:
                    raise ValueError(f"stage digit position {pos} outside the address")
        for pos in self.diffusion.control_digits:
            if not 0 <= pos < total:
                raise ValueError(f"diffusion control digit {pos} outside the address")

    def system_labels(self) -> list[str]:
        if self.diffusion.scope == "color":
            return [f"color.{c}" for c in range(len(self.layout.value_channels))]
        if self.diffusion.scope == "block":
            return [f"block.{b}" for b in range(self.layout.block_capacity)]
        return ["global"]


StageKeyTable = Mapping[tuple[int, ...], tuple[BakerPartition, int]]


@dataclass
class KeyFile:
    """Secret material for one plan, as stored on disk.

    ``seeds`` and ``image_count`` exist only after an encryption has bound
    the key to a plaintext; they are what lets the receiver regenerate the
    plaintext-dependent streams.
    """

    preset_name: str
    preset_params: dict[str, int]
    stage_keys: list[dict[tuple[int, ...], tuple[BakerPartition, int]]]
    lambdas: dict[str, tuple[float, ...]]
    f_param: float | None = None
    seeds: dict[str, tuple[float, ...]] | None = None
    image_count: int | None = None
    version: int = 1

    def bound(self) -> bool:
        return self.seeds is not None and self.image_count is not None


# ---------------------------------------------------------------------------
# the elementary diffusion gate
# ---------------------------------------------------------------------------

def a_gate(k: int, v: int) -> int:
    """Keyed quart addition: v -> (v + k) mod 4."""
    if not (0 <= k < 4 and 0 <= v < 4):
        raise ValueError(f"quart values out of range: k={k}, v={v}")
    return (v + k) % 4


def a_gate_inv(k: int, v: int) -> int:
    """Inverse gate: v -> (v - k) mod 4."""
    if not (0 <= k < 4 and 0 <= v < 4):
        raise ValueError(f"quart values out of range: k={k}, v={v}")
    return (v - k) % 4


# ---------------------------------------------------------------------------
# scrambling
# ---------------------------------------------------------------------------

def _stage_permutations(layout: AxisLayout, stage: ScrambleStage, table: StageKeyTable, invert: bool):
    t = layout.radix
    n = len(stage.left)
    perms = {}
    for control_value, (partition, iterations) in table.items():
        if partition.base != t or partition.n != n:
            raise ValueError(
                f"partition ({partition.base}, {partition.n}) does not fit a "
                f"{t}-ary word of {n} digits"
            )
        perm = permutation_power(baker_permutation(partition), iterations)
        perms[tuple(control_value)] = perm if invert else permutation_inverse(perm)
    return perms


def _apply_stage(state: MultiImageState, stage: ScrambleStage, table: StageKeyTable, invert: bool) -> MultiImageState:
    layout = state.layout
    t = layout.radix
    total = layout.total_digits
    selected = set(stage.left + stage.right + stage.controls)
    rest = [i for i in range(total) if i not in selected]
    order = list(stage.controls) + rest + [total] + list(stage.left) + list(stage.right)
    moved = state.cells.transpose(order)
    kept_shape = moved.shape
    n = len(stage.left)
    word_space = t ** (2 * n)
    ctrl_space = t ** len(stage.controls)
    work = moved.reshape(ctrl_space, -1, word_space).copy()
    gather = _stage_permutations(layout, stage, table, invert)
    for ci, control_value in enumerate(np.ndindex((t,) * len(stage.controls))):
        try:
            indexer = gather[tuple(control_value)]
        except KeyError:
            raise KeyMaterialError(f"no map keyed for control value {control_value}") from None
        work[ci] = work[ci][:, indexer]
    cells = work.reshape(kept_shape).transpose(np.argsort(order)).copy()
    return MultiImageState(layout, cells, state.blank_mask.copy())


def scramble(state: MultiImageState, stage: ScrambleStage, table: StageKeyTable) -> MultiImageState:
    """Apply one keyed stage; a cell permutation, so the value multiset is kept."""
    return _apply_stage(state, stage, table, invert=False)


def unscramble(state: MultiImageState, stage: ScrambleStage, table: StageKeyTable) -> MultiImageState:
    return _apply_stage(state, stage, table, invert=True)


# ---------------------------------------------------------------------------
# plaintext-dependent seeding
# ---------------------------------------------------------------------------

def _axis_index_of(layout: AxisLayout, component: str) -> int:
    loc = layout.find_component(component)
    if loc is None:
        raise KeyMaterialError(f"layout has no {component!r} component")
    return loc[0]


def _pixel_positions(layout: AxisLayout) -> int:
    h, w = layout.image_shape
    return h * w


def _chebyshev_seed(index: int, x0: float) -> float:
    return chebyshev(index, fold_unit(x0))


def compute_seeds(plan: SchemePlan, state: MultiImageState) -> dict[str, tuple[float, ...]]:
    """Initial conditions derived from the packed plaintext.

    Every component is either a normalized digit total or a Chebyshev value
    of the folded total whose degree is a floor-averaged digit count, so a
    change to any single plaintext digit moves the seed.
    """
    layout = plan.layout
    recipe = plan.diffusion.recipe
    total = state.total()
    slots = layout.cell_count()
    blocks = layout.block_capacity

    if recipe == "ququart":
        return {"main": chaos.seed_ququart(state)}
    if recipe == "triple_xor":
        return {"main": chaos.seed_quoctit(state)}

    if recipe in ("mixed_a", "alpha"):
        x0 = total / slots
        fused = layout.axis_capacity(_axis_index_of(layout, "image"))
        s1 = total
        s2 = total // fused
        s3 = total // (blocks * layout.planes_per_channel)
    elif recipe == "mixed_b":
        x0 = total / slots
        fused = layout.axis_capacity(_axis_index_of(layout, "image"))
        colors = layout.component_capacity("color")
        s1 = total
        s2 = total // fused
        s3 = total // (blocks * colors * layout.planes_per_channel)
    elif recipe == "beta":
        x0 = total / slots
        fused = layout.axis_capacity(_axis_index_of(layout, "block"))
        s1 = total
        s2 = total // _pixel_positions(layout)
        s3 = total // (fused * layout.images_per_block)
    elif recipe == "mixed":
        x0 = total / slots
        s1 = total
        s2 = total // layout.axis_capacity(0)
        s3 = total // layout.axis_capacity(1)
    elif recipe == "monster":
        seeds = {}
        addresses = layout.radix**layout.total_digits
        x0 = total / slots
        fused = layout.axis_capacity(_axis_index_of(layout, "block"))
        for c in range(len(layout.value_channels)):
            tc = state.total(c)
            y0 = tc / addresses
            s = tc // fused
            s_prime = tc // layout.images_per_block
            seeds[f"color.{c}"] = (
                x0,
                y0,
                _chebyshev_seed(s, x0),
                _chebyshev_seed(s_prime, x0),
            )
        return seeds
    else:
        raise KeyMaterialError(f"unknown diffusion recipe {recipe!r}")

    seed = (x0, _chebyshev_seed(s1, x0), _chebyshev_seed(s2, x0), _chebyshev_seed(s3, x0))
    return {"main": seed}


# ---------------------------------------------------------------------------
# key streams
# ---------------------------------------------------------------------------

def _qc_threads() -> int:
    try:
        return max(1, int(os.environ.get("QC_THREADS", "1")))
    except ValueError:
        return 1


def _sequence_counts(plan: SchemePlan) -> tuple[int, ...]:
    layout = plan.layout
    recipe = plan.diffusion.recipe
    if recipe == "ququart":
        size = layout.images_per_block
        return (size,) * 6 + (0,)
    if recipe == "triple_xor":
        h, w = layout.image_shape
        fused = layout.axis_capacity(_axis_index_of(layout, "plane"))
        return (w, h, fused, 0)
    if recipe in ("mixed_a", "mixed_b", "alpha"):
        fused = layout.axis_capacity(_axis_index_of(layout, "image"))
        return (fused, fused, fused, 0)
    if recipe == "beta":
        h, w = layout.image_shape
        return (w, h, layout.images_per_block, 0)
    if recipe == "mixed":
        space = layout.radix ** len(plan.diffusion.control_digits)
        return (space, space, space, 0)
    if recipe == "monster":
        fused = layout.axis_capacity(_axis_index_of(layout, "block"))
        return (fused, layout.images_per_block, 0, 0)
    raise KeyMaterialError(f"unknown diffusion recipe {recipe!r}")


_QUQUART_NAMES = ("xi", "iota", "zeta", "alpha", "beta", "gamma")
_QUQUART_RANKS = (
    ("sigma_r", "xi"),
    ("sigma_b", "iota"),
    ("sigma_g", "zeta"),
    ("tau_r", "alpha"),
    ("tau_b", "beta"),
    ("tau_g", "gamma"),
)


def _system_params(plan: SchemePlan, key: KeyFile, label: str) -> chaos.ChaoticParams:
    try:
        lam = key.lambdas[label]
    except KeyError:
        raise KeyMaterialError(f"key file lacks chaotification factors for {label}") from None
    if plan.diffusion.system == chaos.YAN7D:
        return chaos.yan7d_params(lam, f=key.f_param)
    return chaos.wang4d_params(lam)


def _label_seed(plan: SchemePlan, key: KeyFile, label: str) -> tuple[float, ...]:
    if key.seeds is None:
        raise KeyMaterialError("key file carries no plaintext seeds; encrypt first")
    if plan.diffusion.scope == "color":
        return key.seeds[label]
    return key.seeds["main"]


def _label_index(label: str) -> int:
    return int(label.rsplit(".", 1)[1]) if "." in label else 0


def _stream_for_label(plan: SchemePlan, key: KeyFile, label: str, counts) -> tuple[str, tuple]:
    params = _system_params(plan, key, label)
    seqs = chaos.generate_sequences(params, _label_seed(plan, key, label), counts)
    return label, seqs


def build_keystream(plan: SchemePlan, key: KeyFile) -> KeyStream:
    """Regenerate every sequence, rank permutation and secret-digit array.

    One chaotic-system instance runs per scope label (block, color or
    global); QC_THREADS caps how many labels run concurrently.
    """
    counts = _sequence_counts(plan)
    labels = plan.system_labels()
    ks = KeyStream()
    workers = min(_qc_threads(), len(labels))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(
                pool.map(lambda lb: _stream_for_label(plan, key, lb, counts), labels)
            )
    else:
        results = dict(_stream_for_label(plan, key, lb, counts) for lb in labels)

    recipe = plan.diffusion.recipe
    for label in labels:
        seqs = results[label]
        idx = _label_index(label)
        if recipe == "ququart":
            for name, seq in zip(_QUQUART_NAMES, seqs):
                ks.sequences[f"{name}.{idx}"] = tuple(seq)
            for rank_name, seq_name in _QUQUART_RANKS:
                ks.ranks[f"{rank_name}.{idx}"] = tuple(
                    chaos.rank_permutation(ks.sequences[f"{seq_name}.{idx}"])
                )
        elif recipe == "monster":
            for name, seq in zip(("x", "y"), seqs):
                ks.sequences[f"{name}.{idx}"] = tuple(seq)
                ks.ranks[f"{name}.{idx}"] = tuple(chaos.rank_permutation(tuple(seq)))
        else:
            for name, seq in zip(("x", "y", "z"), seqs):
                ks.sequences[f"{name}.{idx}"] = tuple(seq)
                ks.ranks[f"{name}.{idx}"] = tuple(chaos.rank_permutation(tuple(seq)))
    _assemble_secret_digits(plan, ks)
    return ks


def _cheb_vector(ranks: Sequence[int], args: Sequence[float]) -> np.ndarray:
    return np.array([chebyshev(k, x) for k, x in zip(ranks, args)], dtype=np.float64)


def _assemble_secret_digits(plan: SchemePlan, ks: KeyStream) -> None:
    layout = plan.layout
    recipe = plan.diffusion.recipe
    if recipe == "ququart":
        size = layout.images_per_block
        for b in range(layout.block_capacity):
            rev = list(range(size - 1, -1, -1))
            for name, (rank_a, arg_a, rank_b, arg_b) in zip(
                ("K", "L", "M"),
                (
                    ("sigma_r", "beta", "tau_r", "zeta"),
                    ("sigma_g", "gamma", "tau_g", "xi"),
                    ("sigma_b", "alpha", "tau_b", "iota"),
                ),
            ):
                u = _cheb_vector(ks.rank(rank_a, b), [ks.seq(arg_a, b)[i] for i in rev])
                v = _cheb_vector(ks.rank(rank_b, b), [ks.seq(arg_b, b)[i] for i in rev])
                words = np.floor(np.multiply.outer(v, u) * 1e10).astype(np.int64) % 256
                ks.secret_digits[f"{name}.{b}"] = words  # indexed (image, pixel)
    elif recipe in ("triple_xor", "beta"):
        for b in range(len(plan.system_labels())):
            xs, ys, zs = ks.seq("x", b), ks.seq("y", b), ks.seq("z", b)
            a = np.empty((len(xs), len(ys)))
            for i, k in enumerate(ks.rank("x", b)):
                a[i] = [chebyshev(k, y) for y in ys]
            bm = np.empty((len(ys), len(zs)))
            for j, k in enumerate(ks.rank("y", b)):
                bm[j] = [chebyshev(k, z) for z in zs]
            cm = np.empty((len(zs), len(xs)))
            for l, k in enumerate(ks.rank("z", b)):
                cm[l] = [chebyshev(k, x) for x in xs]
            prod = (a[:, :, None] * bm[None, :, :]) * cm.T[:, None, :]
            ks.secret_digits[f"bits.{b}"] = (
                np.floor(prod * 1e5).astype(np.int64) % 2
            ).astype(np.uint8)  # indexed (i, j, l)
    elif recipe in ("mixed_a", "mixed_b", "alpha"):
        width = 8 if recipe == "mixed_b" else 24
        scale = MIXED_SCALES[width]
        for b in range(len(plan.system_labels())):
            xs, ys, zs = ks.seq("x", b), ks.seq("y", b), ks.seq("z", b)
            rx, ry, rz = ks.rank("x", b), ks.rank("y", b), ks.rank("z", b)
            words = [
                floor_scale_mod(
                    (chebyshev(rx[k], ys[k]) * chebyshev(ry[k], zs[k])) * chebyshev(rz[k], xs[k]),
                    scale,
                    2**width,
                )
                for k in range(len(xs))
            ]
            ks.secret_digits[f"word.{b}"] = np.array(words, dtype=np.int64)
    elif recipe == "monster":
        for c in range(len(plan.layout.value_channels)):
            xs, ys = ks.seq("x", c), ks.seq("y", c)
            size_k, size_m = len(xs), len(ys)
            u = _cheb_vector(ks.rank("x", c), [ys[size_k - 1 - k] for k in range(size_k)])
            v = _cheb_vector(ks.rank("y", c), [xs[size_m - 1 - m] for m in range(size_m)])
            words = np.floor(np.multiply.outer(u, v)).astype(np.int64) % 256
            ks.secret_digits[f"word8.{c}"] = words  # indexed (fused, image)
    elif recipe == "mixed":
        width = _mixed_width(plan)
        scale = MIXED_SCALES[width]
        xs, ys, zs = ks.seq("x", 0), ks.seq("y", 0), ks.seq("z", 0)
        rx, ry, rz = ks.rank("x", 0), ks.rank("y", 0), ks.rank("z", 0)
        words = [
            floor_scale_mod(
                (chebyshev(rx[k], ys[k]) * chebyshev(ry[k], zs[k])) * chebyshev(rz[k], xs[k]),
                scale,
                2**width,
            )
            for k in range(len(xs))
        ]
        ks.secret_digits["word.global"] = np.array(words, dtype=np.int64)
    else:
        raise KeyMaterialError(f"unknown diffusion recipe {recipe!r}")


def _mixed_plane_axis(plan: SchemePlan) -> int | None:
    """The plane axis, when it is plain and disjoint from the control digits."""
    layout = plan.layout
    loc = layout.find_component("plane")
    if loc is None or layout.axes[loc[0]].fused:
        return None
    plane_digits = set(layout.digit_range(loc[0]))
    if plane_digits & set(plan.diffusion.control_digits):
        return None
    return loc[0]


def _mixed_width(plan: SchemePlan) -> int:
    planes = plan.layout.planes_per_channel if _mixed_plane_axis(plan) is not None else 1
    width = planes * len(plan.layout.value_channels)
    if width not in MIXED_SCALES:
        raise KeyMaterialError(f"mixed diffusion does not support {width}-bit targets")
    return width


def mixed_keystream_size(plan: SchemePlan) -> tuple[int, int]:
    """(control-value count, secret bits per value) for a mixed-diffusion plan."""
    if plan.diffusion.mode != MODE_MIXED:
        raise ValueError("plan does not use mixed diffusion")
    return plan.layout.radix ** len(plan.diffusion.control_digits), _mixed_width(plan)


# ---------------------------------------------------------------------------
# diffusion
# ---------------------------------------------------------------------------

def _aligned(arr: np.ndarray, dims: Sequence, layout: AxisLayout) -> np.ndarray:
    """Reshape a logical key array so it broadcasts against the axis view.

    ``dims`` names the layout axis index of each array dimension ("C" for
    the channel dimension); axes the array does not mention broadcast.
    """
    n_ax = len(layout.axes)
    targets = [n_ax if d == "C" else d for d in dims]
    order = np.argsort(targets, kind="stable")
    moved = arr.transpose(tuple(order))
    shape = [1] * (n_ax + 1)
    for size, pos in zip(moved.shape, sorted(targets)):
        shape[pos] = size
    return moved.reshape(shape)


def _quart_shift_cube(words: np.ndarray, planes: int) -> np.ndarray:
    # words (..., ) -> quarts (..., planes) with plane 0 least significant
    shifts = 2 * np.arange(planes, dtype=np.int64)
    return ((words[..., None] >> shifts) & 3).astype(np.uint8)


def _bit_plane_cube(words: np.ndarray, planes: int) -> np.ndarray:
    shifts = np.arange(planes, dtype=np.int64)
    return ((words[..., None] >> shifts) & 1).astype(np.uint8)


def _diffusion_key_array(plan: SchemePlan, ks: KeyStream) -> np.ndarray:
    """The full keyed-digit array, broadcastable against the axis view."""
    layout = plan.layout
    recipe = plan.diffusion.recipe
    planes = layout.planes_per_channel
    n_channels = len(layout.value_channels)
    if recipe == "ququart":
        image_ax = _axis_index_of(layout, "image")
        pixel_ax = _axis_index_of(layout, "row")
        plane_ax = _axis_index_of(layout, "plane")
        per_channel = []
        for c, name in enumerate(("K", "L", "M")[:n_channels]):
            blocks = [
                _quart_shift_cube(ks.secret_digits[f"{name}.{b}"], planes)
                for b in range(layout.block_capacity)
            ]
            per_channel.append(np.stack(blocks))  # (B, M, Z, Q)
        key = np.stack(per_channel, axis=-1)  # (B, M, Z, Q, C)
        dims: list = [image_ax, pixel_ax, plane_ax, "C"]
        if layout.find_component("block"):
            dims = [_axis_index_of(layout, "block")] + dims
        else:
            key = key[0]
        return _aligned(key, dims, layout)
    if recipe == "triple_xor":
        fused_ax = _axis_index_of(layout, "plane")
        bits = np.stack([ks.secret_digits[f"bits.{b}"] for b in range(layout.block_capacity)])
        if layout.find_component("pixel"):
            h, w = layout.image_shape
            pix = np.arange(h * w)
            bits = bits[:, pix % w, pix // w, :]  # (B, pixel, L)
            dims = [_axis_index_of(layout, "pixel"), fused_ax]
        else:
            bits = bits.transpose(0, 2, 1, 3)  # (B, row, col, L) from (B, col, row, L)
            dims = [_axis_index_of(layout, "row"), _axis_index_of(layout, "col"), fused_ax]
        if layout.find_component("block"):
            dims = [_axis_index_of(layout, "block")] + dims
        else:
            bits = bits[0]
        return _aligned(bits.astype(np.uint8)[..., None], dims + ["C"], layout)
    if recipe in ("mixed_a", "alpha"):
        fused_ax = _axis_index_of(layout, "image")
        block_ax = _axis_index_of(layout, "block")
        plane_ax = _axis_index_of(layout, "plane")
        words = np.stack([ks.secret_digits[f"word.{b}"] for b in range(layout.block_capacity)])
        shifts = np.array([8 * (n_channels - 1 - c) + q for c in range(n_channels) for q in range(planes)])
        cube = ((words[..., None] >> shifts) & 1).astype(np.uint8)
        cube = cube.reshape(words.shape + (n_channels, planes)).transpose(0, 1, 3, 2)
        return _aligned(cube, [block_ax, fused_ax, plane_ax, "C"], layout)
    if recipe == "mixed_b":
        fused_ax = _axis_index_of(layout, "image")
        plane_ax = _axis_index_of(layout, "plane")
        words = np.stack([ks.secret_digits[f"word.{b}"] for b in range(layout.block_capacity)])
        cube = _bit_plane_cube(words, planes)  # (B, K, Q)
        dims = [fused_ax, plane_ax]
        if layout.find_component("block"):
            dims = [_axis_index_of(layout, "block")] + dims
        else:
            cube = cube[0]
        return _aligned(cube[..., None], dims + ["C"], layout)
    if recipe == "beta":
        bits = ks.secret_digits["bits.0"]  # (col, row, image)
        bits = bits.transpose(1, 0, 2).astype(np.uint8)
        dims = [_axis_index_of(layout, "row"), _axis_index_of(layout, "col"),
                _axis_index_of(layout, "image")]
        return _aligned(bits[..., None], dims + ["C"], layout)
    if recipe == "monster":
        fused_ax = _axis_index_of(layout, "block")
        image_ax = _axis_index_of(layout, "image")
        plane_ax = _axis_index_of(layout, "plane")
        cubes = [
            _bit_plane_cube(ks.secret_digits[f"word8.{c}"], planes)
            for c in range(n_channels)
        ]
        key = np.stack(cubes, axis=-1)  # (K, M, Q, C)
        return _aligned(key, [fused_ax, image_ax, plane_ax, "C"], layout)
    raise KeyMaterialError(f"unknown diffusion recipe {recipe!r}")


def _apply_mixed(state: MultiImageState, plan: SchemePlan, ks: KeyStream) -> np.ndarray:
    layout = state.layout
    t = layout.radix
    controls = plan.diffusion.control_digits
    total = layout.total_digits
    plane_ax = _mixed_plane_axis(plan)
    plane_digits = list(layout.digit_range(plane_ax)) if plane_ax is not None else []
    rest = [i for i in range(total) if i not in controls and i not in plane_digits]
    order = list(controls) + rest + plane_digits + [total]
    moved = state.cells.transpose(order)
    shape = moved.shape
    planes = layout.planes_per_channel if plane_ax is not None else 1
    n_channels = len(layout.value_channels)
    work = moved.reshape(t ** len(controls), -1, planes, n_channels).copy()
    words = ks.secret_digits["word.global"]
    if planes > 1 or n_channels > 1:
        shifts = np.array(
            [8 * (n_channels - 1 - c) + q for q in range(planes) for c in range(n_channels)]
        ).reshape(planes, n_channels)
    else:
        shifts = np.zeros((1, 1), dtype=np.int64)
    key = ((words[:, None, None] >> shifts) & 1).astype(np.uint8)  # (ctrl, Q, C)
    work ^= key[:, None, :, :]
    return work.reshape(shape).transpose(np.argsort(order)).copy()


def diffuse(state: MultiImageState, plan: SchemePlan, ks: KeyStream) -> MultiImageState:
    """Key the value digits: quart addition, plane-bit XOR, or mixed XOR."""
    view = state.axis_view()
    if plan.diffusion.mode == MODE_QUART_ADD:
        key = _diffusion_key_array(plan, ks)
        cells = ((view + key) % 4).astype(np.uint8).reshape(state.cells.shape)
    elif plan.diffusion.mode == MODE_BIT_XOR:
        key = _diffusion_key_array(plan, ks)
        cells = (view ^ key).reshape(state.cells.shape)
    else:
        cells = _apply_mixed(state, plan, ks)
    return MultiImageState(state.layout, np.ascontiguousarray(cells), state.blank_mask.copy())


def undiffuse(state: MultiImageState, plan: SchemePlan, ks: KeyStream) -> MultiImageState:
    if plan.diffusion.mode == MODE_QUART_ADD:
        view = state.axis_view()
        key = _diffusion_key_array(plan, ks)
        cells = ((view + 4 - key) % 4).astype(np.uint8).reshape(state.cells.shape)
        return MultiImageState(state.layout, np.ascontiguousarray(cells), state.blank_mask.copy())
    return diffuse(state, plan, ks)  # XOR modes are involutions


# ---------------------------------------------------------------------------
# the pipelines
# ---------------------------------------------------------------------------

def encrypt_state(plan: SchemePlan, key: KeyFile, images: Sequence[np.ndarray]) -> tuple[MultiImageState, KeyFile]:
    """Pack, seed from the plaintext, scramble, diffuse.

    Returns the ciphertext grid and the key file re-bound to this plaintext
    (seeds plus image count); the caller persists the updated key.
    """
    if len(key.stage_keys) != len(plan.stages):
        raise KeyMaterialError(
            f"key file holds {len(key.stage_keys)} stage entries, plan has {len(plan.stages)}"
        )
    state = pack(images, plan.layout)
    seeds = compute_seeds(plan, state)
    bound = replace(key, seeds=seeds, image_count=len(images))
    ks = build_keystream(plan, bound)
    for stage, table in zip(plan.stages, bound.stage_keys):
        state = scramble(state, stage, table)
    state = diffuse(state, plan, ks)
    return state, bound


def decrypt_state(plan: SchemePlan, key: KeyFile, state: MultiImageState) -> list[np.ndarray]:
    """Inverse gates in reverse order, then the blank padding is dropped."""
    if not key.bound():
        raise KeyMaterialError("key file carries no plaintext seeds; nothing to decrypt")
    ks = build_keystream(plan, key)
    work = undiffuse(state, plan, ks)
    for stage, table in zip(reversed(plan.stages), reversed(key.stage_keys)):
        work = unscramble(work, stage, table)
    return unpack(work, count=key.image_count)


def encrypt(plan: SchemePlan, key: KeyFile, images: Sequence[np.ndarray]) -> tuple[list[np.ndarray], KeyFile]:
    """Ciphertext as a multi-image; blank slots stay part of the ciphertext."""
    state, bound = encrypt_state(plan, key, images)
    return unpack(state, keep_blanks=True), bound


def decrypt(plan: SchemePlan, key: KeyFile, cipher_images: Sequence[np.ndarray]) -> list[np.ndarray]:
    slots = plan.layout.block_capacity * plan.layout.images_per_block
    if len(cipher_images) != slots:
        raise KeyMaterialError(f"ciphertext must carry all {slots} slots, got {len(cipher_images)}")
    state = pack(cipher_images, plan.layout)
    return decrypt_state(plan, key, state)
