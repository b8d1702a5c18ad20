#!/usr/bin/env python3
"""Grid-search the mixing angles of the entangled-pair protocol.

Writes the concurrence surface as CSV and (for one or two pairs) an SVG chart;
prints the refined optimum.
"""

import argparse

from modent import optimize_angles
from modent.plotting import heatmap, line_chart


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=2)
    parser.add_argument("--grid", type=int, default=64)
    parser.add_argument("--refine", type=int, default=3)
    parser.add_argument("--out", default="angle_grid.csv")
    parser.add_argument("--plot", default=None, help="optional SVG path")
    args = parser.parse_args()

    best_t, best_c, grid = optimize_angles(args.pairs, args.grid, args.refine)
    angles = ", ".join(f"{t:.6f}" for t in best_t)
    print(f"best angles = ({angles}) rad")
    print(f"best concurrence = {best_c:.12f}")

    columns = [f"theta_{i}" for i in range(1, args.pairs + 1)] + ["concurrence"]
    with open(args.out, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in grid:
            fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
    print(f"wrote {args.out}")

    if args.plot:
        if args.pairs == 1:
            svg = line_chart([(r[0], r[1]) for r in grid], "theta_1", "concurrence",
                             "concurrence vs mixing angle")
        elif args.pairs == 2:
            svg = heatmap(grid, "theta_1", "theta_2", "concurrence over the angle grid")
        else:
            parser.error("plotting supports 1 or 2 pairs")
        with open(args.plot, "w", newline="") as fh:
            fh.write(svg)
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()
