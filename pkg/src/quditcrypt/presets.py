"""The scheme library: one plan builder per scheme variant.

``preset(name)`` returns the full-scale plan; ``preset(name, desk=True)``
returns its desk-scale twin, the same structure with the axis exponents
shrunk far enough that the whole grid fits in memory and the acceptance
suite can run the complete pipeline. Numeric aliases "scheme1".."scheme7"
follow the library table column order.

Full-scale head counts, for orientation (blocks parameter T where the
scheme leaves it open): three_stage 10+log8(T) quoctits, mixed_a 13+,
mixed_b 11+, mixed_c 11+, alpha 16, beta 13, monster 20.
"""

from __future__ import annotations

import random
from typing import Callable

from .baker import sample_admissible
from .chaos import WANG4D, YAN7D, YAN7D_F_RANGE
from .cipher import (
    MODE_BIT_XOR,
    MODE_MIXED,
    MODE_QUART_ADD,
    DiffusionPlan,
    KeyFile,
    SchemePlan,
    ScrambleStage,
)
from .multiimage import AxisLayout, AxisSpec, ququart_layout

# Named palette colors have no canonical codes; these are the fixed CSS
# values this implementation uses, in a fixed documented order.
PALETTE8 = (
    (255, 0, 0),      # red
    (255, 255, 0),    # yellow
    (255, 165, 0),    # orange
    (0, 0, 255),      # blue
    (0, 128, 0),      # green
    (128, 0, 128),    # purple
    (0, 0, 0),        # black
    (255, 192, 203),  # pink
)
PALETTE16 = (
    (0, 0, 0),        # black
    (255, 255, 0),    # yellow
    (255, 215, 0),    # gold
    (255, 0, 0),      # red
    (128, 0, 32),     # burgundy
    (255, 165, 0),    # orange
    (255, 192, 203),  # pink
    (128, 0, 128),    # purple
    (238, 130, 238),  # violet
    (0, 128, 0),      # green
    (128, 128, 0),    # olive
    (0, 255, 0),      # lime
    (0, 0, 255),      # blue
    (0, 255, 255),    # cyan
    (245, 245, 220),  # beige
    (165, 42, 42),    # brown
)

LAMBDA_RANGE = (0.5, 8.0)


def _digits(layout: AxisLayout, axis_index: int) -> tuple[int, ...]:
    return layout.digit_range(axis_index)


def _build_ququart(n: int, blocks: int) -> SchemePlan:
    layout = ququart_layout(n=n, block_digits=blocks, name=f"ququart(n={n})")
    offset = blocks
    image = tuple(range(offset, offset + n))
    pixel = tuple(range(offset + n, offset + 2 * n))
    controls = tuple(range(blocks)) + (offset + 2 * n,)
    stage = ScrambleStage(left=image, right=pixel, controls=controls)
    return SchemePlan(
        preset_name="ququart",
        layout=layout,
        stages=(stage,),
        diffusion=DiffusionPlan(MODE_QUART_ADD, "ququart", YAN7D, scope="block"),
        params=(("n", n), ("blocks", blocks)),
        iteration_range=(1, 1000),
    )


def _build_three_stage(pix: int, tri: int, blocks: int) -> SchemePlan:
    if pix != tri:
        raise ValueError("the three-stage pairing needs equal pixel and triple words")
    axes = []
    if blocks:
        axes.append(AxisSpec(("block",), blocks))
    axes += [
        AxisSpec(("col",), pix),
        AxisSpec(("row",), pix),
        AxisSpec(("plane", "color", "image"), tri),
    ]
    layout = AxisLayout(
        radix=8,
        axes=tuple(axes),
        value_channels=("P",),
        planes_per_channel=2**tri,
        bits_per_plane=1,
        palette=PALETTE8 if tri == 3 else PALETTE8[: 2**tri],
        name=f"three_stage(pix={pix})",
    )
    col = _digits(layout, 1 if blocks else 0)
    row = _digits(layout, 2 if blocks else 1)
    fused = _digits(layout, 3 if blocks else 2)
    stages = (
        ScrambleStage(left=col, right=fused),
        ScrambleStage(left=row, right=fused),
        ScrambleStage(left=col, right=row),
    )
    return SchemePlan(
        preset_name="three_stage",
        layout=layout,
        stages=stages,
        diffusion=DiffusionPlan(MODE_BIT_XOR, "triple_xor", WANG4D, scope="block"),
        params=(("pix", pix), ("tri", tri), ("blocks", blocks)),
    )


def _halves(pool: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    half = len(pool) // 2
    return pool[:half], pool[half:]


def _build_mixed_a(n: int, blocks: int) -> SchemePlan:
    layout = AxisLayout(
        radix=8,
        axes=(
            AxisSpec(("block",), blocks),
            AxisSpec(("col", "row", "image"), n),
            AxisSpec(("plane",), 1),
        ),
        value_channels=("R", "G", "B"),
        planes_per_channel=8,
        bits_per_plane=1,
        name=f"mixed_a(n={n})",
    )
    pool = _digits(layout, 1) + _digits(layout, 2)
    left, right = _halves(pool)
    return SchemePlan(
        preset_name="mixed_a",
        layout=layout,
        stages=(ScrambleStage(left=left, right=right),),
        diffusion=DiffusionPlan(MODE_BIT_XOR, "mixed_a", WANG4D, scope="block"),
        params=(("n", n), ("blocks", blocks)),
    )


def _build_mixed_b(n: int, blocks: int) -> SchemePlan:
    axes = []
    if blocks:
        axes.append(AxisSpec(("block",), blocks))
    axes += [
        AxisSpec(("col", "row", "image"), n),
        AxisSpec(("color",), 1),
        AxisSpec(("plane",), 1),
    ]
    layout = AxisLayout(
        radix=8,
        axes=tuple(axes),
        value_channels=("P",),
        planes_per_channel=8,
        bits_per_plane=1,
        palette=PALETTE8,
        name=f"mixed_b(n={n})",
    )
    base = 1 if blocks else 0
    pool = _digits(layout, base) + _digits(layout, base + 1) + _digits(layout, base + 2)
    left, right = _halves(pool)
    return SchemePlan(
        preset_name="mixed_b",
        layout=layout,
        stages=(ScrambleStage(left=left, right=right),),
        diffusion=DiffusionPlan(MODE_BIT_XOR, "mixed_b", WANG4D, scope="block"),
        params=(("n", n), ("blocks", blocks)),
    )


def _build_mixed_c(pix: int, tri: int, blocks: int) -> SchemePlan:
    axes = []
    if blocks:
        axes.append(AxisSpec(("block",), blocks))
    axes += [
        AxisSpec(("pixel",), pix),
        AxisSpec(("image", "color", "plane"), tri),
    ]
    layout = AxisLayout(
        radix=8,
        axes=tuple(axes),
        value_channels=("P",),
        planes_per_channel=2**tri,
        bits_per_plane=1,
        palette=PALETTE16 if tri == 4 else PALETTE16[: 2**tri],
        name=f"mixed_c(pix={pix})",
    )
    base = 1 if blocks else 0
    pool = _digits(layout, base) + _digits(layout, base + 1)
    left, right = _halves(pool)
    return SchemePlan(
        preset_name="mixed_c",
        layout=layout,
        stages=(ScrambleStage(left=left, right=right),),
        diffusion=DiffusionPlan(MODE_BIT_XOR, "triple_xor", WANG4D, scope="block"),
        params=(("pix", pix), ("tri", tri), ("blocks", blocks)),
    )


def _build_alpha(nf: int, blocks: int) -> SchemePlan:
    if blocks != nf // 2:
        raise ValueError("the block word must match half the fused word")
    layout = AxisLayout(
        radix=8,
        axes=(
            AxisSpec(("col", "row", "image"), nf),
            AxisSpec(("block",), blocks),
            AxisSpec(("plane",), 1),
        ),
        value_channels=("R", "G", "B"),
        planes_per_channel=8,
        bits_per_plane=1,
        name=f"alpha(nf={nf})",
    )
    fused = _digits(layout, 0)
    a, b = _halves(fused)
    c = _digits(layout, 1)
    stages = (
        ScrambleStage(left=a, right=c),
        ScrambleStage(left=b, right=c),
        ScrambleStage(left=a, right=b),
    )
    return SchemePlan(
        preset_name="alpha",
        layout=layout,
        stages=stages,
        diffusion=DiffusionPlan(MODE_BIT_XOR, "alpha", WANG4D, scope="block"),
        params=(("nf", nf), ("blocks", blocks)),
    )


def _build_beta(nf: int, pix: int) -> SchemePlan:
    layout = AxisLayout(
        radix=8,
        axes=(
            AxisSpec(("block", "color", "plane"), nf),
            AxisSpec(("image",), nf),
            AxisSpec(("col",), pix),
            AxisSpec(("row",), pix),
        ),
        value_channels=("P",),
        planes_per_channel=2**nf,
        bits_per_plane=1,
        palette=PALETTE8 if nf == 3 else PALETTE8[: 2**nf],
        name=f"beta(nf={nf})",
    )
    return SchemePlan(
        preset_name="beta",
        layout=layout,
        stages=(ScrambleStage(left=_digits(layout, 0), right=_digits(layout, 1)),),
        diffusion=DiffusionPlan(MODE_BIT_XOR, "beta", WANG4D, scope="global"),
        params=(("nf", nf), ("pix", pix)),
    )


def _interleaved(pool: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return pool[0::2], pool[1::2]


def _build_beta2(n1: int, n2: int, n_controls: int) -> SchemePlan:
    layout = AxisLayout(
        radix=8,
        axes=(
            AxisSpec(("image", "color", "plane"), n1),
            AxisSpec(("block", "col", "row"), n2),
        ),
        value_channels=("P",),
        planes_per_channel=2**n1,
        bits_per_plane=1,
        palette=PALETTE16 if n1 == 4 else PALETTE16[: 2**n1],
        name=f"beta2(n1={n1},n2={n2})",
    )
    pool = _digits(layout, 0) + _digits(layout, 1)
    left, right = _interleaved(pool)
    controls = left[: n_controls // 2] + right[: n_controls - n_controls // 2]
    return SchemePlan(
        preset_name="beta2",
        layout=layout,
        stages=(ScrambleStage(left=left, right=right),),
        diffusion=DiffusionPlan(MODE_MIXED, "mixed", WANG4D, scope="global", control_digits=controls),
        params=(("n1", n1), ("n2", n2), ("n_controls", n_controls)),
    )


def _monster_layout(nk: int) -> AxisLayout:
    return AxisLayout(
        radix=8,
        axes=(
            AxisSpec(("col", "row", "block"), nk),
            AxisSpec(("image",), nk),
            AxisSpec(("plane",), 1),
        ),
        value_channels=("R", "G", "B"),
        planes_per_channel=8,
        bits_per_plane=1,
        name=f"monster(nk={nk})",
    )


def _build_monster(nk: int) -> SchemePlan:
    layout = _monster_layout(nk)
    return SchemePlan(
        preset_name="monster",
        layout=layout,
        stages=(ScrambleStage(left=_digits(layout, 0), right=_digits(layout, 1)),),
        diffusion=DiffusionPlan(MODE_BIT_XOR, "monster", WANG4D, scope="color"),
        params=(("nk", nk),),
    )


def _build_monster_mixed(nk: int, n_controls: int) -> SchemePlan:
    layout = _monster_layout(nk)
    left, right = _digits(layout, 0), _digits(layout, 1)
    controls = left[: n_controls // 2] + right[: n_controls - n_controls // 2]
    return SchemePlan(
        preset_name="monster_mixed",
        layout=layout,
        stages=(ScrambleStage(left=left, right=right),),
        diffusion=DiffusionPlan(MODE_MIXED, "mixed", WANG4D, scope="global", control_digits=controls),
        params=(("nk", nk), ("n_controls", n_controls)),
    )


# builder, full-scale parameters, desk-twin parameters
_PRESETS: dict[str, tuple[Callable[..., SchemePlan], dict, dict]] = {
    "ququart": (_build_ququart, {"n": 8, "blocks": 0}, {"n": 2, "blocks": 0}),
    "three_stage": (
        _build_three_stage,
        {"pix": 3, "tri": 3, "blocks": 1},
        {"pix": 2, "tri": 2, "blocks": 0},
    ),
    "mixed_a": (_build_mixed_a, {"n": 9, "blocks": 1}, {"n": 3, "blocks": 1}),
    "mixed_b": (_build_mixed_b, {"n": 8, "blocks": 2}, {"n": 4, "blocks": 0}),
    "mixed_c": (
        _build_mixed_c,
        {"pix": 6, "tri": 4, "blocks": 3},
        {"pix": 2, "tri": 2, "blocks": 1},
    ),
    "alpha": (_build_alpha, {"nf": 8, "blocks": 4}, {"nf": 2, "blocks": 1}),
    "beta": (_build_beta, {"nf": 3, "pix": 3}, {"nf": 2, "pix": 1}),
    "beta2": (
        _build_beta2,
        {"n1": 4, "n2": 8, "n_controls": 6},
        {"n1": 2, "n2": 2, "n_controls": 2},
    ),
    "monster": (_build_monster, {"nk": 8}, {"nk": 2}),
    "monster_mixed": (
        _build_monster_mixed,
        {"nk": 8, "n_controls": 6},
        {"nk": 2, "n_controls": 2},
    ),
}

# library-table column order
_ALIASES = {
    "scheme1": "three_stage",
    "scheme2": "mixed_a",
    "scheme3": "mixed_b",
    "scheme4": "mixed_c",
    "scheme5": "alpha",
    "scheme6": "beta",
    "scheme6b": "beta2",
    "scheme7": "monster",
    "scheme7b": "monster_mixed",
}

PRESET_NAMES = tuple(_PRESETS)


def preset(name: str, desk: bool = False, **overrides: int) -> SchemePlan:
    """Build a named plan at full scale or as its desk twin.

    Keyword overrides replace individual scale parameters; the stage
    structure, diffusion recipe and digit bookkeeping follow automatically.
    """
    canonical = _ALIASES.get(name, name)
    try:
        builder, full, desk_params = _PRESETS[canonical]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}") from None
    params = dict(desk_params if desk else full)
    for key, value in overrides.items():
        if key not in params:
            raise ValueError(f"preset {canonical!r} has no parameter {key!r}")
        params[key] = int(value)
    return builder(**params)


def plan_from_params(name: str, params: dict[str, int]) -> SchemePlan:
    """Rebuild a plan from the parameters a key file recorded."""
    canonical = _ALIASES.get(name, name)
    builder, _, _ = _PRESETS[canonical]
    return builder(**params)


# ---------------------------------------------------------------------------
# key generation
# ---------------------------------------------------------------------------

def generate_key(plan: SchemePlan, rng: random.Random) -> KeyFile:
    """Fresh key material for a plan: map variants, iterations, factors.

    Partitions are drawn uniformly from the admissible set through the
    recursive segment sampler, iteration counts uniformly from the plan's
    range, chaotification factors uniformly from a fixed band.
    """
    t = plan.layout.radix
    stage_keys = []
    for stage in plan.stages:
        n = len(stage.left)
        table = {}
        if stage.controls:
            combos = _control_combinations(t, len(stage.controls))
        else:
            combos = [()]
        for combo in combos:
            partition = sample_admissible(t, n, rng)
            iterations = rng.randint(*plan.iteration_range)
            table[combo] = (partition, iterations)
        stage_keys.append(table)
    lambdas = {
        label: tuple(rng.uniform(*LAMBDA_RANGE) for _ in range(7 if plan.diffusion.system == YAN7D else 4))
        for label in plan.system_labels()
    }
    f_param = None
    if plan.diffusion.system == YAN7D:
        lo, hi = YAN7D_F_RANGE
        f_param = rng.uniform(lo + 0.001, hi - 0.001)
    return KeyFile(
        preset_name=plan.preset_name,
        preset_params={k: v for k, v in plan.params},
        stage_keys=stage_keys,
        lambdas=lambdas,
        f_param=f_param,
    )


def _control_combinations(t: int, count: int):
    combos = [()]
    for _ in range(count):
        combos = [c + (v,) for c in combos for v in range(t)]
    return combos
