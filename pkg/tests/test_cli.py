import numpy as np
import pytest

from quditcrypt.cli import main
from quditcrypt.imageio import read_image, write_image


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def make_manifest(tmp_path, count=16, size=4, channels=3, seed=0):
    rng = np.random.default_rng(seed)
    names = []
    for i in range(count):
        arr = rng.integers(0, 256, size=(size, size, channels)).astype(np.uint8)
        name = f"img_{i:03d}.png"
        write_image(tmp_path / name, arr)
        names.append(name)
    manifest = tmp_path / "manifest.txt"
    manifest.write_text("\n".join(names) + "\n")
    return manifest


# ---------------------------------------------------------------------------
# table / curve / orbit
# ---------------------------------------------------------------------------

def test_table_values_and_note(capsys):
    code, out, _ = run(capsys, "table", "3")
    assert code == 0
    lines = out.strip().splitlines()
    data = [line.split() for line in lines[1:5]]
    assert [row[1] for row in data] == ["1", "2", "5", "26"]
    assert [row[2] for row in data] == ["1", "2", "17", "83522"]
    assert data[3][3] == "19031147999601100802"
    assert "19031147999601100801" in out  # the often-quoted value, footnoted


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "0,1,1,1"


def test_curve_csv_row_count_and_values(tmp_path, capsys):
    out_file = tmp_path / "curve.csv"
    code, _, _ = run(
        capsys, "curve", "--kind", "paper", "--dim", "2", "--terms", "2",
        "--samples", "32", "--out", str(out_file),
    )
    assert code == 0
    rows = out_file.read_text().strip().splitlines()
    assert len(rows) == 33
    first = rows[0].split(",")
    assert [float(v) for v in first] == [0.0, 0.0, 0.0]
    # u = 17/32 is the pre-image of the grid point (2, 1) at two terms
    row17 = rows[17].split(",")
    assert [float(v) for v in row17] == [17 / 32, 0.5, 0.25]


def test_orbit_export_range(tmp_path, capsys):
    out_file = tmp_path / "orbit.csv"
    code, _, _ = run(
        capsys, "orbit", "--system", "yan7d", "--lambda", "2,1.5,1,7,0.5,6,1",
        "--points", "200", "--coords", "4,5,6", "--out", str(out_file),
    )
    assert code == 0
    data = np.loadtxt(out_file, delimiter=",")
    assert data.shape == (200, 3)
    assert np.all(np.isfinite(data)) and np.all(np.abs(data) <= 1.0)


def test_orbit_bad_coords_is_data_error(tmp_path, capsys):
    code, _, err = run(
        capsys, "orbit", "--points", "10", "--coords", "0,1",
        "--out", str(tmp_path / "o.csv"),
    )
    assert code == 3
    assert "error:" in err


def test_usage_error_exit_code(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["curve", "--dim"])  # missing value
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# keygen / encrypt / decrypt round trip
# ---------------------------------------------------------------------------

def test_keygen_deterministic_with_seed(tmp_path, capsys):
    k1, k2, k3 = (tmp_path / n for n in ("k1.txt", "k2.txt", "k3.txt"))
    for path in (k1, k2):
        code, _, _ = run(
            capsys, "keygen", "--preset", "ququart", "--desk",
            "--seed", "7", "--out", str(path),
        )
        assert code == 0
    run(capsys, "keygen", "--preset", "ququart", "--desk", "--seed", "8", "--out", str(k3))
    assert k1.read_text() == k2.read_text()
    assert k1.read_text() != k3.read_text()


def test_keygen_without_seed_draws_fresh_material(tmp_path, capsys):
    k1, k2 = tmp_path / "k1.txt", tmp_path / "k2.txt"
    for path in (k1, k2):
        code, _, _ = run(capsys, "keygen", "--preset", "monster", "--desk", "--out", str(path))
        assert code == 0
    assert k1.read_text() != k2.read_text()
    # parsing validates every recorded partition
    from quditcrypt.keyfile import load_key

    plan, key = load_key(k1)
    assert len(key.stage_keys) == len(plan.stages)


def test_cli_round_trip(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=7)
    key = tmp_path / "key.txt"
    container = tmp_path / "cipher.bin"
    out_dir = tmp_path / "decrypted"
    code, _, _ = run(capsys, "keygen", "--preset", "ququart", "--desk", "--seed", "1", "--out", str(key))
    assert code == 0
    code, _, _ = run(capsys, "encrypt", "--key", str(key), "--manifest", str(manifest), "--out", str(container))
    assert code == 0
    assert "images = 7" in key.read_text()
    code, _, _ = run(capsys, "decrypt", "--key", str(key), "--container", str(container), "--out-dir", str(out_dir))
    assert code == 0
    from quditcrypt.imageio import read_manifest

    for i, src in enumerate(read_manifest(manifest)):
        assert np.array_equal(read_image(out_dir / f"image_{i:05d}.png"), read_image(src))


def test_cli_palette_scheme_round_trip(tmp_path, capsys):
    # palette ingestion quantizes; images made of exact palette colors
    # survive the whole file-level cycle pixel-identically
    from quditcrypt.presets import PALETTE8

    rng = np.random.default_rng(11)
    pal = np.array(PALETTE8, dtype=np.uint8)
    names = []
    for i in range(9):
        rgb = pal[rng.integers(0, 8, size=(16, 16))]
        name = f"pal_{i}.png"
        write_image(tmp_path / name, rgb)
        names.append(name)
    manifest = tmp_path / "pal.txt"
    manifest.write_text("\n".join(names) + "\n")
    key = tmp_path / "key.txt"
    container = tmp_path / "cipher.bin"
    out_dir = tmp_path / "out"
    code, _, _ = run(capsys, "keygen", "--preset", "mixed_b", "--desk", "--param", "n=4",
                     "--seed", "5", "--out", str(key))
    assert code == 0
    code, _, _ = run(capsys, "encrypt", "--key", str(key), "--manifest", str(manifest),
                     "--out", str(container))
    assert code == 0
    code, _, _ = run(capsys, "decrypt", "--key", str(key), "--container", str(container),
                     "--out-dir", str(out_dir))
    assert code == 0
    for i, name in enumerate(names):
        assert np.array_equal(
            read_image(out_dir / f"image_{i:05d}.png"), read_image(tmp_path / name)
        )


def test_empty_manifest_rejected(tmp_path, capsys):
    key = tmp_path / "key.txt"
    run(capsys, "keygen", "--preset", "ququart", "--desk", "--seed", "1", "--out", str(key))
    manifest = tmp_path / "m.txt"
    manifest.write_text("\n")
    code, _, err = run(capsys, "encrypt", "--key", str(key), "--manifest", str(manifest), "--out", str(tmp_path / "c.bin"))
    assert code == 3
    assert "no images" in err


def test_decrypt_with_unbound_key_is_data_error(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=4)
    key = tmp_path / "key.txt"
    fresh = tmp_path / "fresh.txt"
    container = tmp_path / "c.bin"
    run(capsys, "keygen", "--preset", "ququart", "--desk", "--seed", "2", "--out", str(key))
    fresh.write_text(key.read_text())
    code, _, _ = run(capsys, "encrypt", "--key", str(key), "--manifest", str(manifest), "--out", str(container))
    assert code == 0
    # the unbound copy never saw the plaintext seeds
    code, _, err = run(capsys, "decrypt", "--key", str(fresh), "--container", str(container), "--out-dir", str(tmp_path / "d"))
    assert code == 3
    assert "seeds" in err


def test_analyze_byte_unit(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=64, size=8, seed=9)
    key, container, _ = encrypt_fixture(tmp_path, capsys, seed=9, manifest=manifest)
    code, out, _ = run(capsys, "analyze", str(container), "--key", str(key),
                       "--unit", "byte", "--format", "csv")
    assert code == 0
    rows = dict(line.split(",") for line in out.strip().splitlines()[1:])
    assert float(rows["entropy_max"]) == 8.0
    assert float(rows["entropy_bits"]) > 7.5


def test_curve_schoenberg_kind(tmp_path, capsys):
    out_file = tmp_path / "s.csv"
    code, _, _ = run(capsys, "curve", "--kind", "schoenberg", "--dim", "2",
                     "--terms", "6", "--samples", "16", "--out", str(out_file))
    assert code == 0
    rows = out_file.read_text().strip().splitlines()
    assert len(rows) == 17
    values = np.array([[float(v) for v in row.split(",")] for row in rows])
    assert np.all((values[:, 1:] >= 0) & (values[:, 1:] <= 1))


def test_missing_key_file_is_data_error(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=1)
    code, _, err = run(
        capsys, "encrypt", "--key", str(tmp_path / "nope.txt"),
        "--manifest", str(manifest), "--out", str(tmp_path / "c.bin"),
    )
    assert code == 3
    assert "not found" in err


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def encrypt_fixture(tmp_path, capsys, seed=1, manifest=None):
    manifest = manifest or make_manifest(tmp_path, count=16, seed=seed)
    key = tmp_path / f"key_{seed}.txt"
    container = tmp_path / f"cipher_{seed}.bin"
    run(capsys, "keygen", "--preset", "ququart", "--desk", "--param", "n=3",
        "--seed", str(seed), "--out", str(key))
    code, _, _ = run(capsys, "encrypt", "--key", str(key), "--manifest", str(manifest), "--out", str(container))
    assert code == 0
    return key, container, manifest


def test_analyze_ciphertext_entropy(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=64, size=8, seed=3)
    key, container, _ = encrypt_fixture(tmp_path, capsys, seed=3, manifest=manifest)
    code, out, _ = run(capsys, "analyze", str(container), "--key", str(key), "--format", "csv")
    assert code == 0
    rows = dict(line.split(",") for line in out.strip().splitlines()[1:])
    assert float(rows["entropy_bits"]) > 1.95
    assert abs(float(rows["correlation_horizontal"])) < 0.1


def test_analyze_identical_pair_npcr_zero(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=64, size=8, seed=4)
    key, container, _ = encrypt_fixture(tmp_path, capsys, seed=4, manifest=manifest)
    code, out, _ = run(
        capsys, "analyze", str(container), "--pair", str(container),
        "--key", str(key), "--format", "csv",
    )
    assert code == 0
    rows = dict(line.split(",") for line in out.strip().splitlines()[1:])
    assert float(rows["npcr"]) == 0.0
    assert float(rows["uaci"]) == 0.0


def test_analyze_container_without_key_is_data_error(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=16, size=8, seed=6)
    _, container, _ = encrypt_fixture(tmp_path, capsys, seed=6, manifest=manifest)
    code, _, err = run(capsys, "analyze", str(container))
    assert code == 3
    assert "--key" in err


def test_analyze_pair_geometry_mismatch(tmp_path, capsys):
    manifest = make_manifest(tmp_path, count=16, size=8, seed=7)
    key, container, _ = encrypt_fixture(tmp_path, capsys, seed=7, manifest=manifest)
    code, _, err = run(capsys, "analyze", str(container), "--pair", str(manifest), "--key", str(key))
    assert code == 3
    assert "matching" in err


def test_keygen_bad_param_is_data_error(tmp_path, capsys):
    code, _, err = run(capsys, "keygen", "--preset", "ququart", "--desk",
                       "--param", "nonsense", "--out", str(tmp_path / "k.txt"))
    assert code == 3
    assert "name=value" in err
    code, _, err = run(capsys, "keygen", "--preset", "ququart", "--desk",
                       "--param", "bogus=3", "--out", str(tmp_path / "k.txt"))
    assert code == 3


def test_analyze_constant_images_entropy_zero(tmp_path, capsys):
    arr = np.full((8, 8, 3), 7, dtype=np.uint8)
    write_image(tmp_path / "c.png", arr)
    manifest = tmp_path / "m.txt"
    manifest.write_text("c.png\n")
    code, out, _ = run(capsys, "analyze", str(manifest), "--format", "csv")
    assert code == 0
    rows = dict(line.split(",") for line in out.strip().splitlines()[1:])
    assert float(rows["entropy_bits"]) == 0.0
