#!/usr/bin/env python3
"""Print the per-particle-class concurrence summary for a given ancilla count."""

import argparse

from modent import table1_summary


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=50, help="ancilla count N (default 50)")
    args = parser.parse_args()

    rows = table1_summary(args.n)
    print(f"N = {args.n}")
    print(f"{'particle type':<20} {'concurrence':>12} {'repetitions':>12}")
    for row in rows:
        conc = "-" if row.concurrence is None else f"{row.concurrence:.10f}"
        print(f"{row.particle_type:<20} {conc:>12} {row.repetitions:>12}")
        for key, val in row.details.items():
            print(f"    {key} = {val:.12g}")


if __name__ == "__main__":
    main()
