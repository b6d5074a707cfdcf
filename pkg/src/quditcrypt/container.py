"""Ciphertext container: the raw digit grid behind a fixed 64-byte header.

Header fields are little-endian: an 8-byte magic, u32 version, u32 radix,
u32 total digit count, u32 channel count, u32 axis count, then one byte per
axis with its digit count, zero-padded to 64 bytes. The payload is the cell
array flattened in C order, one digit per byte.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .multiimage import AxisLayout, MultiImageState

MAGIC = b"QDITGRID"
HEADER_SIZE = 64
CONTAINER_VERSION = 1


class ContainerError(ValueError):
    pass


def write_container_bytes(state: MultiImageState) -> bytes:
    layout = state.layout
    axis_digits = [a.digits for a in layout.axes]
    header = MAGIC + struct.pack(
        "<5I",
        CONTAINER_VERSION,
        layout.radix,
        layout.total_digits,
        len(layout.value_channels),
        len(axis_digits),
    )
    header += bytes(axis_digits)
    if len(header) > HEADER_SIZE:
        raise ContainerError(f"layout has too many axes for the header ({len(axis_digits)})")
    header += b"\x00" * (HEADER_SIZE - len(header))
    return header + state.cells.tobytes()


def read_container_bytes(data: bytes, layout: AxisLayout) -> MultiImageState:
    """Check the header against the expected layout and rebuild the grid."""
    if len(data) < HEADER_SIZE:
        raise ContainerError("container shorter than its header")
    if data[:8] != MAGIC:
        raise ContainerError("bad container magic")
    version, radix, digits, channels, axis_count = struct.unpack("<5I", data[8:28])
    if version != CONTAINER_VERSION:
        raise ContainerError(f"unsupported container version {version}")
    axis_digits = list(data[28 : 28 + axis_count])
    expected = [a.digits for a in layout.axes]
    if (radix, digits, channels, axis_digits) != (
        layout.radix,
        layout.total_digits,
        len(layout.value_channels),
        expected,
    ):
        raise ContainerError(
            "container geometry does not match the key's scheme layout "
            f"(radix {radix}, digits {digits}, channels {channels}, axes {axis_digits})"
        )
    payload = data[HEADER_SIZE:]
    size = layout.cell_count()
    if len(payload) != size:
        raise ContainerError(f"payload holds {len(payload)} digits, layout needs {size}")
    cells = np.frombuffer(payload, dtype=np.uint8).reshape(layout.cells_shape).copy()
    if int(cells.max(initial=0)) >= layout.radix:
        raise ContainerError("payload contains digits outside the radix")
    blank = np.zeros((layout.block_capacity, layout.images_per_block), dtype=bool)
    return MultiImageState(layout, cells, blank)


def save_container(path, state: MultiImageState) -> None:
    Path(path).write_bytes(write_container_bytes(state))


def load_container(path, layout: AxisLayout) -> MultiImageState:
    return read_container_bytes(Path(path).read_bytes(), layout)
