"""Sweep PDX against the transfer-matrix oracle over a grid of queries.

For each query the oracle runs at every requested lattice spacing; both the
first- and second-order Richardson values are reported, since the lattice
error turns out to be quadratic in eta.
"""
import argparse
import time

from stepprop.oracle import GridMismatchError, OracleGrid, richardson_extrapolate, transfer_matrix_propagator
from stepprop.pdx import PropagationQuery, assemble_euclidean
from stepprop.propagators import PhysicalParams

ENDPOINTS = [(0.5, 0.5), (-0.5, 0.75), (-1.0, 1.0), (-0.5, -0.5), (1.0, 0.25)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=float, default=1.0)
    parser.add_argument("--v0", type=float, nargs="+", default=[0.0, 1.0, 4.0])
    parser.add_argument("--t", type=float, nargs="+", default=[0.5, 1.0])
    parser.add_argument("--eta", type=float, nargs="+", default=[0.005, 0.0025])
    args = parser.parse_args()

    header = f"{'x0':>6} {'x1':>6} {'T':>5} {'V0':>5} {'pdx':>14} {'raw':>10} {'rich1':>10} {'rich2':>10} {'sec':>6}"
    print(header)
    for V0 in args.v0:
        p = PhysicalParams(args.m, V0)
        for T in args.t:
            for x0, x1 in ENDPOINTS:
                q = PropagationQuery(x0, x1, T)
                start = time.perf_counter()
                try:
                    levels = [
                        (eta, transfer_matrix_propagator(q, p, OracleGrid.build(q, args.m, eta)).value)
                        for eta in args.eta
                    ]
                except GridMismatchError as exc:
                    print(f"{x0:6.2f} {x1:6.2f} {T:5.2f} {V0:5.2f} skipped: {exc}")
                    continue
                value = assemble_euclidean(q, p)
                gaps = [
                    abs(levels[-1][1] / value - 1),
                    abs(richardson_extrapolate(levels) / value - 1),
                    abs(richardson_extrapolate(levels, order=2) / value - 1),
                ]
                elapsed = time.perf_counter() - start
                print(
                    f"{x0:6.2f} {x1:6.2f} {T:5.2f} {V0:5.2f} {value:14.8e} "
                    + " ".join(f"{g:10.2e}" for g in gaps)
                    + f" {elapsed:6.1f}"
                )


if __name__ == "__main__":
    main()
