import numpy as np
import pytest

from quditcrypt.imageio import (
    components_to_rgb,
    palette_components,
    read_image,
    read_manifest,
    write_image,
)
from quditcrypt.presets import PALETTE8, PALETTE16


def test_png_round_trip_rgb(tmp_path):
    rng = np.random.default_rng(0)
    arr = rng.integers(0, 256, size=(8, 8, 3)).astype(np.uint8)
    path = tmp_path / "img.png"
    write_image(path, arr)
    assert np.array_equal(read_image(path), arr)


def test_png_round_trip_gray_16bit(tmp_path):
    rng = np.random.default_rng(1)
    arr = rng.integers(0, 2**16, size=(8, 8)).astype(np.uint16)
    path = tmp_path / "img16.png"
    write_image(path, arr)
    back = read_image(path)
    assert back.dtype == np.uint16
    assert np.array_equal(back, arr)


def test_ppm_round_trip(tmp_path):
    rng = np.random.default_rng(2)
    arr = rng.integers(0, 256, size=(5, 7, 3)).astype(np.uint8)
    path = tmp_path / "img.ppm"
    write_image(path, arr)
    assert np.array_equal(read_image(path), arr)


def test_pgm_round_trip_8_and_16(tmp_path):
    rng = np.random.default_rng(3)
    for dtype, hi in ((np.uint8, 256), (np.uint16, 2**16)):
        arr = rng.integers(0, hi, size=(6, 4)).astype(dtype)
        path = tmp_path / f"img_{hi}.pgm"
        write_image(path, arr)
        back = read_image(path)
        assert back.dtype == dtype
        assert np.array_equal(back, arr)


def test_pgm_16bit_is_big_endian(tmp_path):
    arr = np.array([[0x1234]], dtype=np.uint16)
    path = tmp_path / "sample.pgm"
    write_image(path, arr)
    data = path.read_bytes()
    assert data.endswith(b"\x12\x34")


def test_netpbm_rejects_ascii_variants(tmp_path):
    path = tmp_path / "bad.pgm"
    path.write_bytes(b"P2\n1 1\n255\n0\n")
    with pytest.raises(ValueError):
        read_image(path)


def test_manifest_paths_resolve_relative(tmp_path):
    (tmp_path / "a.png").write_bytes(b"")
    manifest = tmp_path / "m.txt"
    manifest.write_text("a.png\n# comment\n\n/abs/b.png\n")
    paths = read_manifest(manifest)
    assert paths[0] == tmp_path / "a.png"
    assert str(paths[1]) == "/abs/b.png"


def test_palette_components_round_trip_on_palette_colors():
    # an image made of exact palette colors survives the quantization cycle
    rng = np.random.default_rng(4)
    idx = rng.integers(0, 8, size=(8, 8))
    rgb = np.array(PALETTE8, dtype=np.uint8)[idx]
    comp = palette_components(rgb, PALETTE8, depth=8)
    assert comp.shape == (8, 8, 8)
    assert np.array_equal(components_to_rgb(comp, PALETTE8), rgb)


def test_palette_components_quantize_arbitrary_rgb():
    rgb = np.array([[[250, 5, 5], [2, 2, 250]]], dtype=np.uint8)
    comp = palette_components(rgb, PALETTE16, depth=16)
    assert comp.dtype == np.uint16
    back = components_to_rgb(comp, PALETTE16)
    assert tuple(back[0, 0]) == (255, 0, 0)  # nearest is red
    assert tuple(back[0, 1]) == (0, 0, 255)  # nearest is blue
