"""Exhaustive census of bridges by below-axis time.

Every column of a row should equal the Catalan number for that n.
"""
import argparse
import time

from stepprop.combinatorics import catalan
from stepprop.lattice import MAX_ENUMERATION_N, enumerate_bridges


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=MAX_ENUMERATION_N)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    for n in range(args.max_n + 1):
        start = time.perf_counter()
        hist = enumerate_bridges(n, workers=args.threads)
        flat = set(hist.counts) == {catalan(n)}
        elapsed = time.perf_counter() - start
        print(f"n={n:2d} total={hist.total:>9d} C_n={catalan(n):>7d} flat={flat} ({elapsed:.2f}s)")


if __name__ == "__main__":
    main()
