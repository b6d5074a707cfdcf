#!/usr/bin/env python3
"""Walk through the space-filling curves and the digit encoding they induce.

Evaluates the planar plateau curve and Schoenberg's baseline, shows that a
grid point's pre-image parameter reproduces the point exactly under the
truncated series, and prints the digit strings behind a few encodings.
Writes curve samples to demo_output/ and, when matplotlib is around, a
plot of the traced curve.
"""

from fractions import Fraction
from pathlib import Path

from quditcrypt import sfc

OUT = Path(__file__).resolve().parent / "demo_output"
OUT.mkdir(exist_ok=True)


def main():
    spec = sfc.CurveSpec(dimension=2, kind=sfc.KIND_PAPER, n_terms=8)

    print("== plateau step functions (d = 2) ==")
    for u in (Fraction(1, 16), Fraction(5, 16), Fraction(9, 16), Fraction(13, 16), Fraction(7, 16)):
        f = sfc.step_function_eval(spec, 1, u)
        g = sfc.step_function_eval(spec, 2, u)
        print(f"  u = {str(u):5s}  ->  f = {f:.3f}, g = {g:.3f}")

    print("\n== encoding grid points as base-4 digit words ==")
    for point in ((0, 0), (2, 1), (3, 3)):
        digits = sfc.encode_point(point, d=2, n=2)
        u = sfc.preimage_param(point, d=2, n=2)
        back = sfc.curve_eval(sfc.CurveSpec(2, sfc.KIND_PAPER, n_terms=2), u)
        print(f"  {point} -> digits [{digits}] (msb first), pre-image u = {u}, curve(u) = {back}")

    print("\n== a 3-D example packs three coordinates into octal digits ==")
    digits = sfc.encode_point((5, 1, 3), d=3, n=3)
    print(f"  (5, 1, 3) -> [{digits}] base 8; decoded: {sfc.decode_point(digits, 3, 3)}")

    # sample both planar curves to CSV
    samples = 2048
    for kind in (sfc.KIND_PAPER, sfc.KIND_SCHOENBERG):
        spec = sfc.CurveSpec(dimension=2, kind=kind, n_terms=10)
        rows = []
        for i in range(samples + 1):
            u = Fraction(i, samples)
            x, y = sfc.curve_eval(spec, u)
            rows.append(f"{float(u):.15g},{x:.15g},{y:.15g}")
        path = OUT / f"curve_{kind}.csv"
        path.write_text("\n".join(rows) + "\n")
        print(f"wrote {path}")

    try:
        import numpy as np
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        data = np.loadtxt(OUT / "curve_paper.csv", delimiter=",")
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.plot(data[:, 1], data[:, 2], lw=0.4)
        ax.set_title("plateau-family curve, 10-term truncation")
        fig.savefig(OUT / "curve_paper.png", dpi=150)
        print(f"wrote {OUT / 'curve_paper.png'}")
    except ImportError:
        print("matplotlib not available; skipped the plot")


if __name__ == "__main__":
    main()
