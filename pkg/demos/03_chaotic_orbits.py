#!/usr/bin/env python3
"""Orbits of the sine-chaotified systems and the key material they yield.

Exports three projections of the seven-dimensional orbit with the stock
projection factors, demonstrates seed sensitivity, and
walks from a sequence to its rank permutation and extracted digits.
"""

from pathlib import Path

import numpy as np

from quditcrypt import chaos

OUT = Path(__file__).resolve().parent / "demo_output"
OUT.mkdir(exist_ok=True)

PROJECTION_LAMBDA = (2.0, 1.5, 1.0, 7.0, 0.5, 6.0, 1.0)


def main():
    params = chaos.yan7d_params(PROJECTION_LAMBDA)
    seed = (0.1,) * 7
    for label, coords in (("first", (0, 1, 2)), ("middle", (2, 3, 4)), ("last", (4, 5, 6))):
        points = chaos.orbit_export(params, seed, 20000, coords)
        path = OUT / f"orbit_{label}.csv"
        np.savetxt(path, points, delimiter=",", fmt="%.15g")
        print(f"{label} three coordinates -> {path} (all in [-1, 1]: "
              f"{bool(np.all(np.abs(points) <= 1))})")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig = plt.figure(figsize=(12, 4))
        for i, label in enumerate(("first", "middle", "last")):
            pts = np.loadtxt(OUT / f"orbit_{label}.csv", delimiter=",")
            ax = fig.add_subplot(1, 3, i + 1, projection="3d")
            ax.scatter(pts[:, 0], pts[:, 1], pts[:, 2], s=0.2)
            ax.set_title(f"{label} three coordinates")
        fig.savefig(OUT / "orbits.png", dpi=130)
        print(f"wrote {OUT / 'orbits.png'}")
    except ImportError:
        print("matplotlib not available; skipped the plots")

    print("\n== seed sensitivity ==")
    a = seed
    b = (seed[0] + 1e-12,) + seed[1:]
    for i in range(1, 151):
        a, b = chaos.step(params, a), chaos.step(params, b)
        if i in (1, 50, 100, 150):
            gap = max(abs(u - v) for u, v in zip(a, b))
            print(f"  after {i:3d} steps, sup-norm gap = {gap:.3e}")

    print("\n== from orbit values to key digits ==")
    wparams = chaos.wang4d_params((1.3, 2.1, 0.9, 1.7))
    xs, ys, zs, _ = chaos.generate_sequences(wparams, (0.2, -0.1, 0.4, 0.6), (8, 8, 8, 0))
    ranks = chaos.rank_permutation(xs)
    print(f"  sequence x: {[round(v, 4) for v in xs]}")
    print(f"  ranks     : {ranks}")
    ks = chaos.KeyStream()
    for name, seq in (("x", xs), ("y", ys), ("z", zs)):
        ks.sequences[f"{name}.0"] = tuple(seq)
        ks.ranks[f"{name}.0"] = tuple(chaos.rank_permutation(seq))
    bits = [chaos.secret_bits("three_stage", ks, (i, (i * 3) % 8, (i * 5) % 8))[0] for i in range(8)]
    print(f"  extracted stream bits: {bits}")


if __name__ == "__main__":
    main()
