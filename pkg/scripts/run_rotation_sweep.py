#!/usr/bin/env python3
"""Sweep the sequential-rotation ancilla count and record the 1/N infidelity law.

Writes a CSV of (N, 1-F) and optionally an SVG chart, and prints the
(1-F)*N products so the convergence to a constant is visible.
"""

import argparse

from modent import RotationProtocolParams, sequential_rotation
from modent.plotting import line_chart


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-list", default="4,8,16,32,64,128,256",
                        help="comma list of ancilla counts")
    parser.add_argument("--alpha", type=float, default=0.8)
    parser.add_argument("--beta", type=float, default=0.6)
    parser.add_argument("--out", default="rotation_sweep.csv")
    parser.add_argument("--plot", default=None, help="optional SVG path")
    args = parser.parse_args()

    ns = [int(x) for x in args.n_list.split(",")]
    rows = []
    print(f"target = {args.alpha}|g> + {args.beta}|e>")
    print(f"{'N':>6} {'1-F':>16} {'(1-F)*N':>12}")
    for n in ns:
        res = sequential_rotation(RotationProtocolParams(args.alpha, args.beta, n))
        err = res.scalars["infidelity"]
        rows.append((float(n), err))
        print(f"{n:>6} {err:>16.10e} {err * n:>12.6f}")

    with open(args.out, "w", newline="") as fh:
        fh.write("n_ancillas,infidelity\n")
        for n, err in rows:
            fh.write(f"{n:.12g},{err:.12g}\n")
    print(f"wrote {args.out}")

    if args.plot:
        with open(args.plot, "w", newline="") as fh:
            fh.write(line_chart(rows, "n_ancillas", "infidelity", "infidelity vs ancilla count"))
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()
