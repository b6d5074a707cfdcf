"""Raster file I/O and palette-component conversion.

PNG goes through Pillow; PPM (P6) and PGM (P5) are handled directly,
binary, maxval 255 or 65535 with the usual big-endian two-byte samples.
Palette schemes carry one intensity layer per named color; ordinary RGB
files enter them through nearest-palette quantization (full intensity on
the matched layer), which is lossy and documented as such.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image


def read_image(path) -> np.ndarray:
    """Load a raster as (H, W) or (H, W, 3), dtype uint8 or uint16."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in (".ppm", ".pgm", ".pnm"):
        return _read_netpbm(path.read_bytes())
    with Image.open(path) as img:
        if img.mode in ("I;16", "I;16B", "I"):
            arr = np.array(img, dtype=np.uint32)
            if arr.max(initial=0) > 0xFFFF:
                raise ValueError(f"{path}: sample depth beyond 16 bits")
            return arr.astype(np.uint16)
        if img.mode not in ("L", "RGB"):
            img = img.convert("RGB")
        return np.array(img)


def write_image(path, arr: np.ndarray) -> None:
    path = Path(path)
    arr = np.asarray(arr)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    suffix = path.suffix.lower()
    if suffix in (".ppm", ".pgm", ".pnm"):
        path.write_bytes(_write_netpbm(arr))
        return
    if arr.dtype == np.uint16:
        if arr.ndim != 2:
            raise ValueError("16-bit output is single-channel only")
        Image.fromarray(arr).save(path)  # mode I;16
        return
    Image.fromarray(arr.astype(np.uint8)).save(path)


def _read_netpbm(data: bytes) -> np.ndarray:
    fields: list[bytes] = []
    pos = 0

    def next_token():
        nonlocal pos
        while pos < len(data):
            if data[pos : pos + 1].isspace():
                pos += 1
            elif data[pos : pos + 1] == b"#":
                while pos < len(data) and data[pos : pos + 1] != b"\n":
                    pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        return data[start:pos]

    magic = next_token()
    if magic not in (b"P5", b"P6"):
        raise ValueError(f"unsupported netpbm magic {magic!r}")
    width = int(next_token())
    height = int(next_token())
    maxval = int(next_token())
    if maxval not in (255, 65535):
        raise ValueError(f"unsupported maxval {maxval}")
    pos += 1  # single whitespace byte after the header
    channels = 3 if magic == b"P6" else 1
    dtype = np.dtype(">u2") if maxval == 65535 else np.dtype(np.uint8)
    count = width * height * channels
    raster = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    arr = raster.astype(np.uint16 if maxval == 65535 else np.uint8)
    arr = arr.reshape(height, width, channels)
    return arr[:, :, 0] if channels == 1 else arr


def _write_netpbm(arr: np.ndarray) -> bytes:
    if arr.ndim == 2:
        magic, channels = b"P5", 1
    elif arr.ndim == 3 and arr.shape[2] == 3:
        magic, channels = b"P6", 3
    else:
        raise ValueError(f"netpbm needs gray or RGB data, got shape {arr.shape}")
    maxval = 65535 if arr.dtype == np.uint16 else 255
    header = b"%s\n%d %d\n%d\n" % (magic, arr.shape[1], arr.shape[0], maxval)
    payload = arr.astype(">u2" if maxval == 65535 else np.uint8).tobytes()
    return header + payload


def read_manifest(path) -> list[Path]:
    """Image paths, one per line, resolved relative to the manifest."""
    path = Path(path)
    base = path.parent
    out = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            p = Path(line)
            out.append(p if p.is_absolute() else base / p)
    return out


# ---------------------------------------------------------------------------
# palette components
# ---------------------------------------------------------------------------

def palette_components(rgb: np.ndarray, palette, depth: int) -> np.ndarray:
    """Quantize an RGB raster into per-palette-color intensity layers.

    Each pixel lights its nearest palette color at full scale; all other
    layers stay dark. Lossy by construction.
    """
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected an RGB raster, got shape {rgb.shape}")
    pal = np.asarray(palette, dtype=np.int64)
    flat = rgb.reshape(-1, 3).astype(np.int64)
    dist = ((flat[:, None, :] - pal[None, :, :]) ** 2).sum(axis=2)
    nearest = dist.argmin(axis=1)
    dtype = np.uint16 if depth > 8 else np.uint8
    comp = np.zeros((flat.shape[0], len(palette)), dtype=dtype)
    comp[np.arange(flat.shape[0]), nearest] = 2**depth - 1
    return comp.reshape(rgb.shape[0], rgb.shape[1], len(palette))


def components_to_rgb(components: np.ndarray, palette) -> np.ndarray:
    """Collapse intensity layers back to RGB through the brightest layer."""
    pal = np.asarray(palette, dtype=np.uint8)
    nearest = components.argmax(axis=2)
    return pal[nearest]
