"""Digit-grid data model for multi-image representations.

A multi-image lives in a dense array of base-t digits. Every cell is
addressed by a string of t-ary digits laid out axis by axis (block, image,
pixel, plane, color, possibly several of those fused into one axis through
the bit-interleaving of :mod:`quditcrypt.sfc`), and holds one digit per
value channel. Packing a list of rasters into the grid and unpacking it
back are exact inverses; blank padding images are all-zero and tracked in a
mask so they can be discarded after decryption.

Component names carry the semantics: "block", "image", "row", "col",
"pixel" (fused raster index row * width + col), "plane" and "color". An
axis with one component is a plain base-t counter; an axis with d = log2(t)
components interleaves one bit of each component into every digit, the
first-listed component supplying the most significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

COMPONENT_NAMES = {"block", "image", "row", "col", "pixel", "plane", "color"}


@dataclass(frozen=True)
class AxisSpec:
    """One axis of the digit address: component names plus its digit count."""

    names: tuple[str, ...]
    digits: int

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("axis needs at least one component name")
        for name in self.names:
            if name not in COMPONENT_NAMES:
                raise ValueError(f"unknown component name {name!r}")
        if self.digits < 1:
            raise ValueError(f"axis digit count must be >= 1, got {self.digits}")

    @property
    def fused(self) -> bool:
        return len(self.names) > 1


@dataclass(frozen=True)
class AxisLayout:
    """Shape of the digit grid for one representation.

    ``value_channels`` names the digits stored per address (e.g. R, G, B
    quarts, or a single bit). ``planes_as_channels`` covers the
    representation that displays every plane digit of a gray sample side by
    side instead of indexing planes by an address digit.
    """

    radix: int
    axes: tuple[AxisSpec, ...]
    value_channels: tuple[str, ...]
    planes_per_channel: int
    bits_per_plane: int
    palette: tuple[tuple[int, int, int], ...] | None = None
    planes_as_channels: bool = False
    name: str = ""

    def __post_init__(self):
        t = self.radix
        if t < 2 or t & (t - 1):
            raise ValueError(f"radix must be a power of two >= 2, got {t}")
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "value_channels", tuple(self.value_channels))
        if not self.value_channels:
            raise ValueError("at least one value channel is required")
        if self.bits_per_plane not in (1, 2):
            raise ValueError("bits_per_plane must be 1 (bit planes) or 2 (quart planes)")
        depth = self.planes_per_channel * self.bits_per_plane
        if depth not in (2, 4, 8, 16):
            raise ValueError(f"unsupported channel depth {depth}")
        d = self.d_log
        for axis in self.axes:
            if axis.fused and len(axis.names) != d:
                raise ValueError(
                    f"fused axis {axis.names} needs exactly {d} components for radix {t}"
                )
        seen: list[str] = []
        for axis in self.axes:
            seen.extend(axis.names)
        if len(seen) != len(set(seen)):
            raise ValueError(f"duplicate component names in layout: {seen}")
        if "pixel" in seen:
            if "row" in seen or "col" in seen:
                raise ValueError("pixel axis excludes separate row/col components")
            bits = self.component_bits("pixel")
            if bits % 2:
                raise ValueError("a fused pixel axis needs an even bit count")
        elif not ("row" in seen and "col" in seen):
            raise ValueError("layout needs row and col components or a pixel component")
        if self.planes_as_channels:
            if len(self.value_channels) != self.planes_per_channel:
                raise ValueError("planes_as_channels needs one value channel per plane")
            if "plane" in seen:
                raise ValueError("planes_as_channels excludes a plane component")
        elif self.planes_per_channel > 1:
            if "plane" not in seen:
                raise ValueError("multi-plane layout needs a plane component")
            if self.component_capacity("plane") != self.planes_per_channel:
                raise ValueError("plane component capacity must equal planes_per_channel")
        if self.palette is not None:
            object.__setattr__(self, "palette", tuple(tuple(c) for c in self.palette))
            if "color" not in seen:
                raise ValueError("a palette layout needs a color component")
            if self.component_capacity("color") != len(self.palette):
                raise ValueError("palette size must equal the color component capacity")

    # -- derived geometry ---------------------------------------------------

    @property
    def d_log(self) -> int:
        return self.radix.bit_length() - 1

    @property
    def total_digits(self) -> int:
        return sum(a.digits for a in self.axes)

    def digit_offset(self, axis_index: int) -> int:
        return sum(a.digits for a in self.axes[:axis_index])

    def digit_range(self, axis_index: int) -> tuple[int, ...]:
        off = self.digit_offset(axis_index)
        return tuple(range(off, off + self.axes[axis_index].digits))

    def find_component(self, name: str) -> tuple[int, int] | None:
        for ai, axis in enumerate(self.axes):
            if name in axis.names:
                return ai, axis.names.index(name)
        return None

    def component_bits(self, name: str) -> int:
        loc = self.find_component(name)
        if loc is None:
            return 0
        axis = self.axes[loc[0]]
        return axis.digits if axis.fused else axis.digits * self.d_log

    def component_capacity(self, name: str) -> int:
        return 2 ** self.component_bits(name) if self.find_component(name) else 1

    def axis_capacity(self, axis_index: int) -> int:
        return self.radix ** self.axes[axis_index].digits

    @property
    def image_shape(self) -> tuple[int, int]:
        if self.find_component("pixel"):
            side = 2 ** (self.component_bits("pixel") // 2)
            return side, side
        return self.component_capacity("row"), self.component_capacity("col")

    @property
    def images_per_block(self) -> int:
        return self.component_capacity("image")

    @property
    def block_capacity(self) -> int:
        return self.component_capacity("block")

    @property
    def raster_channels(self) -> int:
        if self.find_component("color"):
            return self.component_capacity("color")
        if self.planes_as_channels:
            return 1
        return len(self.value_channels)

    @property
    def sample_depth(self) -> int:
        return self.planes_per_channel * self.bits_per_plane

    @property
    def raster_dtype(self) -> np.dtype:
        return np.dtype(np.uint16 if self.sample_depth > 8 else np.uint8)

    @property
    def cells_shape(self) -> tuple[int, ...]:
        return (self.radix,) * self.total_digits + (len(self.value_channels),)

    @property
    def axis_shape(self) -> tuple[int, ...]:
        return tuple(self.axis_capacity(i) for i in range(len(self.axes))) + (
            len(self.value_channels),
        )

    def cell_count(self) -> int:
        return self.radix**self.total_digits * len(self.value_channels)


@dataclass
class MultiImageState:
    """Dense digit grid plus the mask of blank padding slots."""

    layout: AxisLayout
    cells: np.ndarray
    blank_mask: np.ndarray

    def copy(self) -> "MultiImageState":
        return MultiImageState(self.layout, self.cells.copy(), self.blank_mask.copy())

    def axis_view(self) -> np.ndarray:
        """The cells regrouped one dimension per axis (plus channels)."""
        return self.cells.reshape(self.layout.axis_shape)

    def total(self, channel: int | None = None) -> int:
        if channel is None:
            return int(self.cells.sum(dtype=np.int64))
        return int(self.cells[..., channel].sum(dtype=np.int64))

    def image_count(self) -> int:
        return int((~self.blank_mask).sum())


# ---------------------------------------------------------------------------
# plane digits
# ---------------------------------------------------------------------------

def quart_planes_from_byte(b: int) -> tuple[int, int, int, int]:
    """Split a byte into four quarts, least significant plane first."""
    if not 0 <= b <= 255:
        raise ValueError(f"byte value {b} out of range")
    return tuple((b >> (2 * i)) & 3 for i in range(4))


def byte_from_quart_planes(quarts: Sequence[int]) -> int:
    """Exact inverse of :func:`quart_planes_from_byte`."""
    if len(quarts) != 4:
        raise ValueError(f"expected 4 quarts, got {len(quarts)}")
    value = 0
    for i, q in enumerate(quarts):
        if not 0 <= q <= 3:
            raise ValueError(f"quart value {q} out of range")
        value |= q << (2 * i)
    return value


# ---------------------------------------------------------------------------
# pack / unpack
# ---------------------------------------------------------------------------

def _component_values(layout, block, image, plane, color, rows, cols):
    w = layout.image_shape[1]
    return {
        "block": block,
        "image": image,
        "plane": plane,
        "color": color,
        "row": rows,
        "col": cols,
        "pixel": rows * w + cols,
    }


def _digit_indices(layout: AxisLayout, values: dict) -> tuple:
    """Per-digit index arrays (or scalars) for one scatter/gather pass."""
    t = layout.radix
    d = layout.d_log
    idx: list = []
    for axis in layout.axes:
        n = axis.digits
        if axis.fused:
            for j in range(n):
                shift = n - 1 - j
                digit = 0
                for i, name in enumerate(axis.names):
                    digit = digit + (((values[name] >> shift) & 1) << (d - 1 - i))
                idx.append(digit)
        else:
            v = values[axis.names[0]]
            for j in range(n):
                idx.append((v >> ((n - 1 - j) * d)) & (t - 1))
    return tuple(idx)


def _normalize_raster(img: np.ndarray, layout: AxisLayout) -> np.ndarray:
    arr = np.asarray(img)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    h, w = layout.image_shape
    rc = layout.raster_channels
    if arr.shape != (h, w, rc):
        raise ValueError(f"raster shape {arr.shape} does not match layout {(h, w, rc)}")
    if arr.dtype != layout.raster_dtype:
        if np.issubdtype(arr.dtype, np.integer) and arr.max(initial=0) < 2**layout.sample_depth:
            arr = arr.astype(layout.raster_dtype)
        else:
            raise ValueError(f"raster dtype {arr.dtype} does not match {layout.raster_dtype}")
    if int(arr.max(initial=0)) >= 2**layout.sample_depth:
        raise ValueError(f"sample values exceed the {layout.sample_depth}-bit depth")
    return arr


def _plane_passes(layout: AxisLayout):
    """(raster channel, plane, color-axis value, value-channel index) tuples."""
    has_color_axis = layout.find_component("color") is not None
    passes = []
    for ch in range(layout.raster_channels):
        for p in range(layout.planes_per_channel):
            color = ch if has_color_axis else 0
            if layout.planes_as_channels:
                vc = p
            elif has_color_axis:
                vc = 0
            else:
                vc = ch
            passes.append((ch, p, color, vc))
    return passes


def pack(images: Sequence[np.ndarray], layout: AxisLayout) -> MultiImageState:
    """Scatter rasters into the digit grid, zero-filling blank slots.

    Images fill blocks in order; slot capacity is the block capacity times
    the images per block, and exceeding it is an error. Pixel positions and
    fused component groups are addressed through bit interleaving, so a
    scramble of address digits moves whole pixels, images, planes and blocks
    around in one stroke.
    """
    per_block = layout.images_per_block
    blocks = layout.block_capacity
    if len(images) > per_block * blocks:
        raise ValueError(f"{len(images)} images exceed capacity {per_block * blocks}")
    h, w = layout.image_shape
    rows, cols = np.indices((h, w))
    cells = np.zeros(layout.cells_shape, dtype=np.uint8)
    blank = np.ones((blocks, per_block), dtype=bool)
    mask = (1 << layout.bits_per_plane) - 1
    for slot, img in enumerate(images):
        arr = _normalize_raster(img, layout)
        b, m = divmod(slot, per_block)
        blank[b, m] = False
        for ch, p, color, vc in _plane_passes(layout):
            sample = arr[:, :, ch].astype(np.int64)
            vals = (sample >> (p * layout.bits_per_plane)) & mask
            values = _component_values(layout, b, m, p, color, rows, cols)
            idx = _digit_indices(layout, values)
            cells[idx + (vc,)] = vals.astype(np.uint8)
    return MultiImageState(layout, cells, blank)


def unpack(state: MultiImageState, count: int | None = None, keep_blanks: bool = False) -> list[np.ndarray]:
    """Gather rasters back out of the grid; inverse of :func:`pack`.

    ``count`` limits the result to the first slots; by default blanks are
    dropped (they are the trailing slots), while ``keep_blanks`` extracts
    every slot, which is how a ciphertext grid becomes a ciphertext
    multi-image.
    """
    layout = state.layout
    per_block = layout.images_per_block
    slots = per_block * layout.block_capacity
    if count is None:
        count = slots if keep_blanks else state.image_count()
    if count > slots:
        raise ValueError(f"cannot extract {count} images from {slots} slots")
    h, w = layout.image_shape
    rows, cols = np.indices((h, w))
    out = []
    for slot in range(count):
        b, m = divmod(slot, per_block)
        acc = np.zeros((h, w, layout.raster_channels), dtype=np.int64)
        for ch, p, color, vc in _plane_passes(layout):
            values = _component_values(layout, b, m, p, color, rows, cols)
            idx = _digit_indices(layout, values)
            acc[:, :, ch] |= state.cells[idx + (vc,)].astype(np.int64) << (p * layout.bits_per_plane)
        out.append(acc.astype(layout.raster_dtype))
    return out


def qudit_count(layout: AxisLayout) -> int:
    """Total digits in the representation, value digits included."""
    return layout.total_digits + len(layout.value_channels)


def block_digits_for(image_count: int, images_per_block: int, radix: int) -> int:
    """Digits needed for the block axis: ceil(log_radix ceil(count / per_block))."""
    if image_count < 1:
        raise ValueError("need at least one image")
    blocks = -(-image_count // images_per_block)
    digits = 0
    while radix**digits < blocks:
        digits += 1
    return digits


# ---------------------------------------------------------------------------
# stock ququart layouts
# ---------------------------------------------------------------------------

def ququart_layout(
    n: int,
    block_digits: int = 0,
    channels: tuple[str, ...] = ("R", "G", "B"),
    planes: int = 4,
    bits_per_plane: int = 2,
    name: str = "",
) -> AxisLayout:
    """Block / image / fused-pixel / plane layout over quarts.

    ``n`` is the image-side exponent: 4^n images of 2^n x 2^n pixels per
    block. Channel values are stored as separate value quarts.
    """
    axes = []
    if block_digits:
        axes.append(AxisSpec(("block",), block_digits))
    axes.append(AxisSpec(("image",), n))
    axes.append(AxisSpec(("row", "col"), n))
    if planes > 1:
        plane_digits, cap = 0, 1
        while cap < planes:
            cap, plane_digits = cap * 4, plane_digits + 1
        if cap != planes:
            raise ValueError(f"plane count {planes} is not a power of the radix")
        axes.append(AxisSpec(("plane",), plane_digits))
    return AxisLayout(
        radix=4,
        axes=tuple(axes),
        value_channels=channels,
        planes_per_channel=planes,
        bits_per_plane=bits_per_plane,
        name=name or f"ququart(n={n},blocks=4^{block_digits})",
    )


def qqrmi_layout(n: int, planes: int = 4, name: str = "") -> AxisLayout:
    """Gray multi-image layout that displays all plane quarts as channels."""
    return AxisLayout(
        radix=4,
        axes=(AxisSpec(("image",), n), AxisSpec(("row", "col"), n)),
        value_channels=tuple(f"P{i}" for i in range(planes)),
        planes_per_channel=planes,
        bits_per_plane=2,
        planes_as_channels=True,
        name=name or f"qqrmi(n={n})",
    )
