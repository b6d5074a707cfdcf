"""Command-line front door.

Subcommands: keygen, encrypt, decrypt, analyze, table, curve, orbit.
Exit codes: 0 success, 2 usage error, 3 data error. Every command is
deterministic given its flags (keygen needs --seed for that). QC_THREADS
caps worker threads during key-stream generation.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import baker, chaos, sfc
from .analysis import analyze_values
from .cipher import KeyMaterialError, decrypt_state, encrypt_state
from .container import ContainerError, load_container, save_container
from .imageio import (
    components_to_rgb,
    palette_components,
    read_image,
    read_manifest,
    write_image,
)
from .keyfile import load_key, save_key
from .multiimage import unpack
from .presets import PRESET_NAMES, generate_key, preset

EXIT_DATA_ERROR = 3


class DataError(RuntimeError):
    pass


def _fmt15(v: float) -> str:
    return format(float(v), ".15g")


# ---------------------------------------------------------------------------
# keygen / encrypt / decrypt
# ---------------------------------------------------------------------------

def cmd_keygen(args) -> int:
    overrides = {}
    for item in args.param or []:
        name, _, value = item.partition("=")
        if not value:
            raise DataError(f"--param needs name=value, got {item!r}")
        overrides[name] = int(value)
    plan = preset(args.preset, desk=args.desk, **overrides)
    rng = random.Random(args.seed)  # None seeds from OS entropy
    key = generate_key(plan, rng)
    save_key(args.out, plan, key)
    print(f"wrote key for preset {plan.preset_name} to {args.out}")
    return 0


def _load_plan_key(path):
    try:
        return load_key(path)
    except FileNotFoundError:
        raise DataError(f"key file not found: {path}") from None


def _rasters_for_layout(paths, layout):
    images = []
    for p in paths:
        arr = read_image(p)
        if layout.palette is not None:
            if arr.ndim != 3 or arr.shape[2] != 3:
                raise DataError(f"{p}: palette schemes ingest RGB files")
            arr = palette_components(arr, layout.palette, layout.sample_depth)
        elif layout.raster_channels == 1 and arr.ndim == 3:
            raise DataError(f"{p}: layout expects single-channel images")
        elif layout.raster_channels == 3 and (arr.ndim != 3 or arr.shape[2] != 3):
            raise DataError(f"{p}: layout expects RGB images")
        images.append(arr)
    return images


def cmd_encrypt(args) -> int:
    plan, key = _load_plan_key(args.key)
    paths = read_manifest(args.manifest)
    if not paths:
        raise DataError(f"manifest {args.manifest} lists no images")
    images = _rasters_for_layout(paths, plan.layout)
    try:
        state, bound = encrypt_state(plan, key, images)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    save_container(args.out, state)
    key_out = args.key_out or args.key
    save_key(key_out, plan, bound)
    print(f"wrote ciphertext to {args.out}; key with plaintext seeds to {key_out}")
    return 0


def cmd_decrypt(args) -> int:
    plan, key = _load_plan_key(args.key)
    state = load_container(args.container, plan.layout)
    images = decrypt_state(plan, key, state)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = args.image_format
    for i, arr in enumerate(images):
        if plan.layout.palette is not None:
            arr = components_to_rgb(arr, plan.layout.palette)
        write_image(out_dir / f"image_{i:05d}.{ext}", arr)
    print(f"wrote {len(images)} images to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _analysis_values(source: str, args):
    if source.endswith(".txt"):
        paths = read_manifest(source)
        arrays = [read_image(p) for p in paths]
        depth = 16 if any(a.dtype == np.uint16 for a in arrays) else 8
        values = np.concatenate([a.reshape(-1) for a in arrays])
        return values, 2**depth
    plan, _ = _load_plan_key(args.key) if args.key else (None, None)
    if plan is None:
        raise DataError("analyzing a container needs --key for its layout")
    state = load_container(source, plan.layout)
    if args.unit == "byte":
        rasters = unpack(state, keep_blanks=True)
        values = np.concatenate([r.reshape(-1) for r in rasters])
        return values, 2**plan.layout.sample_depth
    return state.cells.reshape(-1), plan.layout.radix


def cmd_analyze(args) -> int:
    values, levels = _analysis_values(args.source, args)
    other = None
    if args.pair:
        other, levels2 = _analysis_values(args.pair, args)
        if levels2 != levels or other.shape != values.shape:
            raise DataError("paired metrics need two sources with matching geometry")
    report = analyze_values(values, levels, other=other, samples=args.samples)
    rows = [(name, v) for name, v in report.rows() if v is not None]
    if args.format == "csv":
        print("metric,value")
        for name, v in rows:
            print(f"{name},{_fmt15(v)}")
    else:
        for name, v in rows:
            print(f"{name} = {_fmt15(v)}")
    return 0


# ---------------------------------------------------------------------------
# table / curve / orbit
# ---------------------------------------------------------------------------

TABLE_NOTE = (
    "note: for base 8, n = 3 the recursion count**8 + 1 gives "
    "19031147999601100802; the often-quoted 19031147999601100801 is 257**8, "
    "missing the final +1 of the recursion."
)


def cmd_table(args) -> int:
    rows = [("n", "P_n (base 2)", "Q_n (base 4)", "T_n (base 8)")]
    for n in range(args.max_n + 1):
        rows.append(
            (
                str(n),
                str(baker.count_admissible(2, n)),
                str(baker.count_admissible(4, n)),
                str(baker.count_admissible(8, n)),
            )
        )
    if args.format == "csv":
        for row in rows:
            print(",".join(row))
    else:
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        for row in rows:
            print("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    if args.max_n >= 3:
        print(TABLE_NOTE)
    return 0


def cmd_curve(args) -> int:
    spec = sfc.CurveSpec(dimension=args.dim, kind=args.kind, n_terms=args.terms)
    lines = []
    for i in range(args.samples + 1):
        u = Fraction(i, args.samples)
        point = sfc.curve_eval(spec, u)
        lines.append(",".join([_fmt15(float(u))] + [_fmt15(c) for c in point]))
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {args.samples + 1} samples to {args.out}")
    return 0


def _parse_floats(text: str, expected: int, what: str) -> tuple[float, ...]:
    parts = [p for p in text.replace(",", " ").split() if p]
    values = tuple(float(p) for p in parts)
    if len(values) != expected:
        raise DataError(f"{what} needs {expected} values, got {len(values)}")
    return values


def cmd_orbit(args) -> int:
    dim = 7 if args.system == chaos.YAN7D else 4
    lam = _parse_floats(args.lam, dim, "--lambda") if args.lam else None
    if lam is None:
        lam = (2.0, 1.5, 1.0, 7.0, 0.5, 6.0, 1.0) if dim == 7 else (2.0, 1.5, 1.0, 7.0)[:dim]
    seed = _parse_floats(args.seed, dim, "--seed") if args.seed else (0.1,) * dim
    coords = tuple(int(v) for v in args.coords.split(","))
    if len(coords) != 3:
        raise DataError("--coords needs three comma-separated indices")
    params = (
        chaos.yan7d_params(lam) if args.system == chaos.YAN7D else chaos.wang4d_params(lam)
    )
    try:
        points = chaos.orbit_export(params, seed, args.points, coords)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    lines = [",".join(_fmt15(v) for v in row) for row in points]
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {args.points} orbit points to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditcrypt",
        description="Qudit multi-image cipher simulator and toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a fresh key file for a preset")
    p.add_argument("--preset", required=True, help=f"one of {', '.join(PRESET_NAMES)} or schemeN")
    p.add_argument("--desk", action="store_true", help="build the desk-scale twin")
    p.add_argument("--seed", type=int, default=None, help="PRNG seed for reproducible keys")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="override a scale parameter")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt the images listed in a manifest")
    p.add_argument("--key", required=True)
    p.add_argument("--manifest", required=True, help="text file, one image path per line")
    p.add_argument("--out", required=True, help="ciphertext container path")
    p.add_argument("--key-out", default=None, help="where to write the seed-bound key (default: in place)")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a ciphertext container")
    p.add_argument("--key", required=True)
    p.add_argument("--container", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--image-format", default="png", choices=("png", "ppm", "pgm"))
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("analyze", help="entropy / correlation / NPCR / UACI")
    p.add_argument("source", help="container path, or a .txt manifest of images")
    p.add_argument("--pair", default=None, help="second source for NPCR and UACI")
    p.add_argument("--key", default=None, help="key file naming the container's scheme")
    p.add_argument("--unit", default="digit", choices=("digit", "byte"))
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--format", default="text", choices=("text", "csv"))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", help="admissible-partition counts per grid exponent")
    p.add_argument("max_n", type=int)
    p.add_argument("--format", default="text", choices=("text", "csv"))
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("curve", help="sample a space-filling curve to CSV")
    p.add_argument("--kind", default=sfc.KIND_PAPER, choices=(sfc.KIND_SCHOENBERG, sfc.KIND_PAPER))
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--terms", type=int, default=8)
    p.add_argument("--samples", type=int, default=1024)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("orbit", help="export a chaotified orbit projection to CSV")
    p.add_argument("--system", default=chaos.YAN7D, choices=(chaos.YAN7D, chaos.WANG4D))
    p.add_argument("--lambda", dest="lam", default=None, help="comma-separated chaotification factors")
    p.add_argument("--seed", default=None, help="comma-separated initial state")
    p.add_argument("--points", type=int, default=10**4)
    p.add_argument("--coords", default="0,1,2")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_orbit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, KeyMaterialError, ContainerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
