"""Command-line front end.

Every command writes a table whose rows repeat the parameters that produced
them, so any output file can be re-run from its own contents. Floats are
printed with 17 significant digits in lowercase scientific notation.

Exit status: 0 on success, 2 for invalid parameters, 3 when a numerical
method fails to converge. Failures print a JSON error record on stderr.
"""
import argparse
import csv
import io
import json
import math
import sys

import mpmath

from . import __version__
from .combinatorics import catalan, catalan_asymptotic
from .lattice import (
    EnumerationLimitError,
    LatticeSpec,
    continuum_edge_estimate,
    enumerate_bridges,
)
from .oracle import OracleGrid, richardson_extrapolate, transfer_matrix_propagator
from .pdx import (
    PropagationQuery,
    QuadratureError,
    QuadratureSpec,
    assemble_euclidean,
    assemble_terms,
)
from .propagators import PhysicalParams, edge_euclidean, edge_realtime

COLUMNS = {
    "catalan-table": ["n", "catalan", "asymptotic", "ratio"],
    "bridge-histogram": ["n", "counts", "total", "catalan", "chung_feller"],
    "edge": ["domain", "m", "v0", "t", "value", "real", "imag"],
    "converge": ["n", "m", "v0", "t", "epsilon", "eta", "estimate", "exact", "abs_error", "rel_error"],
    "pdx": [
        "x0", "x1", "t", "m", "v0", "outer_nodes", "inner_nodes",
        "diagonal_substitution", "endpoint_substitution", "rtol",
        "same_side", "crossing", "value",
    ],
    "oracle-compare": [
        "x0", "x1", "t", "m", "v0", "order", "level", "eta", "steps",
        "oracle", "pdx", "rel_error",
    ],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def format_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, mpmath.mpf):
        text = mpmath.nstr(value, 17, min_fixed=0, max_fixed=0, strip_zeros=False)
        mantissa, _, exponent = text.partition("e")
        return f"{mantissa}e{int(exponent or 0):+03d}"
    if isinstance(value, (list, tuple)):
        return ",".join(format_value(v) for v in value)
    if isinstance(value, str):
        return value
    return f"{float(value):.16e}"


def _json_value(value):
    if isinstance(value, mpmath.mpf):
        return format_value(value)
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, float):
        # round-trip through the CSV text so both formats carry the same number
        return float(format_value(value))
    return value


def _floats(text):
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _positive(value, name):
    if not (value > 0 and math.isfinite(value)):
        raise UsageError(f"--{name} must be positive and finite, got {value}")


def _nonnegative(value, name):
    if not (value >= 0 and math.isfinite(value)):
        raise UsageError(f"--{name} must be nonnegative and finite, got {value}")


def cmd_catalan_table(args):
    for n in args.n:
        if n < 0:
            raise UsageError(f"--n entries must be nonnegative, got {n}")
        exact = catalan(n)
        approx = catalan_asymptotic(n) if n > 0 else None
        ratio = float(mpmath.mpf(exact) / approx) if n > 0 else None
        yield {"n": n, "catalan": exact, "asymptotic": approx, "ratio": ratio}


def cmd_bridge_histogram(args):
    for n in args.n:
        hist = enumerate_bridges(n, workers=args.threads)
        c = catalan(n)
        yield {
            "n": n,
            "counts": list(hist.counts),
            "total": hist.total,
            "catalan": c,
            "chung_feller": all(k == c for k in hist.counts),
        }


def cmd_edge(args):
    _positive(args.m, "m")
    _positive(args.t, "t")
    _nonnegative(args.v0, "v0")
    row = {"domain": args.domain, "m": args.m, "v0": args.v0, "t": args.t}
    if args.domain == "euclidean":
        value = float(edge_euclidean(args.t, args.m, args.v0))
        row.update(value=value, real=value, imag=0.0)
    else:
        g = edge_realtime(args.t, args.m, args.v0)
        row.update(value=abs(g), real=g.real, imag=g.imag)
    yield row


def cmd_converge(args):
    _positive(args.m, "m")
    _positive(args.t, "t")
    _nonnegative(args.v0, "v0")
    exact = float(edge_euclidean(args.t, args.m, args.v0))
    for n in args.n:
        if n < 1:
            raise UsageError(f"--n entries must be positive, got {n}")
        spec = LatticeSpec.from_time(n, args.t, args.m)
        estimate = continuum_edge_estimate(n, args.m, args.v0, args.t)
        yield {
            "n": n, "m": args.m, "v0": args.v0, "t": args.t,
            "epsilon": spec.epsilon, "eta": spec.eta,
            "estimate": estimate, "exact": exact,
            "abs_error": abs(estimate - exact),
            "rel_error": abs(estimate / exact - 1),
        }


def _query(args):
    _positive(args.m, "m")
    _positive(args.t, "t")
    _nonnegative(args.v0, "v0")
    if args.x0 == 0 or args.x1 == 0:
        raise UsageError("--x0 and --x1 must be nonzero for PDX assembly")
    return PropagationQuery(args.x0, args.x1, args.t), PhysicalParams(args.m, args.v0)


def _quadrature(args):
    return QuadratureSpec(
        outer_nodes=args.outer_nodes,
        inner_nodes=args.inner_nodes,
        diagonal_substitution=not args.no_diagonal_substitution,
        endpoint_substitution=not args.no_endpoint_substitution,
        rtol=args.rtol,
    )


def cmd_pdx(args):
    q, p = _query(args)
    quad = _quadrature(args)
    same, crossing = assemble_terms(q, p, quad)
    yield {
        "x0": q.x0, "x1": q.x1, "t": q.T, "m": p.mass, "v0": p.V0,
        "outer_nodes": quad.outer_nodes, "inner_nodes": quad.inner_nodes,
        "diagonal_substitution": quad.diagonal_substitution,
        "endpoint_substitution": quad.endpoint_substitution,
        "rtol": quad.rtol,
        "same_side": same, "crossing": crossing, "value": same + crossing,
    }


def cmd_oracle_compare(args):
    q, p = _query(args)
    reference = assemble_euclidean(q, p)
    base = {"x0": q.x0, "x1": q.x1, "t": q.T, "m": p.mass, "v0": p.V0, "order": args.order}
    levels = []
    for i, eta in enumerate(args.eta):
        _positive(eta, "eta")
        grid = OracleGrid.build(q, p.mass, eta)
        value = transfer_matrix_propagator(q, p, grid).value
        levels.append((eta, value))
        yield dict(
            base, level=str(i), eta=eta, steps=grid.steps, oracle=value,
            pdx=reference, rel_error=abs(value / reference - 1),
        )
    if len(levels) >= 2:
        value = richardson_extrapolate(levels, order=args.order)
        yield dict(
            base, level="richardson", eta=None, steps=None, oracle=value,
            pdx=reference, rel_error=abs(value / reference - 1),
        )


COMMANDS = {
    "catalan-table": cmd_catalan_table,
    "bridge-histogram": cmd_bridge_histogram,
    "edge": cmd_edge,
    "converge": cmd_converge,
    "pdx": cmd_pdx,
    "oracle-compare": cmd_oracle_compare,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", default="-", help="output path, '-' for stdout")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for enumeration; output does not depend on it")

    parser = _Parser(prog="stepprop", description="Step-potential propagator toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("catalan-table", parents=[common], help="exact vs asymptotic Catalan numbers")
    p.add_argument("--n", type=_ints, required=True)

    p = sub.add_parser("bridge-histogram", parents=[common], help="exhaustive bridge census")
    p.add_argument("--n", type=_ints, required=True)

    def physics(p):
        p.add_argument("--m", type=float, required=True)
        p.add_argument("--v0", type=float, required=True)
        p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("edge", parents=[common], help="closed-form edge propagator")
    p.add_argument("--domain", choices=["euclidean", "realtime"], default="euclidean")
    physics(p)

    p = sub.add_parser("converge", parents=[common], help="lattice estimate vs closed form")
    physics(p)
    p.add_argument("--n", type=_ints, required=True)

    def endpoints(p):
        p.add_argument("--x0", type=float, required=True)
        p.add_argument("--x1", type=float, required=True)
        physics(p)

    p = sub.add_parser("pdx", parents=[common], help="PDX assembly for arbitrary endpoints")
    endpoints(p)
    p.add_argument("--outer-nodes", type=int, default=64)
    p.add_argument("--inner-nodes", type=int, default=64)
    p.add_argument("--no-diagonal-substitution", action="store_true")
    p.add_argument("--no-endpoint-substitution", action="store_true")
    p.add_argument("--rtol", type=float, default=1e-4)

    p = sub.add_parser("oracle-compare", parents=[common], help="PDX vs transfer-matrix oracle")
    endpoints(p)
    p.add_argument("--eta", type=_floats, default=[0.005, 0.0025])
    p.add_argument("--order", type=int, default=1,
                   help="assumed convergence order in eta for the extrapolation")
    return parser


def render(command, params, rows, fmt):
    columns = COLUMNS[command]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(c)) for c in columns])
        return buf.getvalue()
    payload = {
        "command": command,
        "params": {k: _json_value(v) for k, v in params.items()},
        "columns": columns,
        "rows": [{c: _json_value(row.get(c)) for c in columns} for row in rows],
        "meta": {"program": "stepprop", "version": __version__},
    }
    return json.dumps(payload, indent=2) + "\n"


def _fail(kind, status, message, **extra):
    record = {"error": kind, "status": status, "message": message}
    record.update(extra)
    sys.stderr.write(json.dumps(record) + "\n")
    return status


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError(f"--threads must be positive, got {args.threads}")
        rows = list(COMMANDS[args.command](args))
    except UsageError as exc:
        return _fail("usage", 2, str(exc))
    except QuadratureError as exc:
        return _fail("numerical", 3, str(exc), coarse=exc.coarse, fine=exc.fine, rtol=exc.rtol)
    except (ValueError, TypeError, EnumerationLimitError) as exc:
        return _fail("usage", 2, str(exc))
    params = {
        k: v for k, v in vars(args).items() if k not in ("output", "format", "threads")
    }
    text = render(args.command, params, rows, args.format)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
