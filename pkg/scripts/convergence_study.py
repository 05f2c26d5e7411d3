"""Lattice edge amplitude vs its continuum value as the step count grows.

Prints one row per n with the relative error and the ratio to the previous
row; O(1/n) convergence shows up as a ratio near n_prev / n.
"""
import argparse

from stepprop.lattice import continuum_edge_estimate
from stepprop.propagators import edge_euclidean


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=float, default=1.0)
    parser.add_argument("--v0", type=float, default=1.0)
    parser.add_argument("--t", type=float, default=1.0)
    parser.add_argument("--n", type=int, nargs="+", default=[10, 100, 1000, 10000, 100000])
    args = parser.parse_args()

    exact = edge_euclidean(args.t, args.m, args.v0)
    print(f"continuum edge value {exact:.16e}")
    print(f"{'n':>8} {'estimate':>24} {'rel_error':>12} {'ratio':>8}")
    previous = None
    for n in args.n:
        estimate = continuum_edge_estimate(n, args.m, args.v0, args.t)
        error = abs(estimate / exact - 1)
        ratio = f"{error / previous:8.4f}" if previous else " " * 8
        print(f"{n:>8} {estimate:24.16e} {error:12.4e} {ratio}")
        previous = error


if __name__ == "__main__":
    main()
