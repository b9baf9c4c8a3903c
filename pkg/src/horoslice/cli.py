"""Command-line front end.

Subcommands:
  verify      run the property suites on a space spec (exit 1 on failure)
  control     horocycle distortion control table in a single hyperbolic plane
  distortion  intrinsic-vs-extrinsic net scan on a product horosphere
  fill        cone-fill areas for chart-circle loops in the maximal slice
  chart       evaluate the slice chart and an in-slice path on seeded inputs

Exit codes: 0 success, 1 property failure, 2 usage error.  Diagnostics go
to stderr; data go to --out files (or stdout).  Numeric CSV fields carry 17
significant digits and LF line endings, so identical configurations produce
byte-identical files.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import GeometryError, SpecSyntaxError, UsageError
from .experiments import (
    DistortionConfig,
    default_scan_slice,
    distortion_scan,
    fill_family,
    horocycle_control,
)
from .slices import Horosphere
from .specparse import parse_space_spec
from .verify import run_verify, _canonical_base


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def write_csv(out: str | None, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    payload = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(payload)
    else:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(payload)


def _space_argument(parser: argparse.ArgumentParser, required: bool = True):
    parser.add_argument("--space", required=required,
                        help="space spec, e.g. 'h2*h2 theta=0.6,0.8 "
                             "xi1=inf xi2=inf'")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="horoslice",
        description="Horosphere geometry experiments on products of "
                    "Hadamard model spaces")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the property suites")
    _space_argument(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=200, help="samples per suite")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="closed-form vs limit tolerance")

    p = sub.add_parser("control", help="horocycle distortion control table")
    p.add_argument("--amax", type=float, default=8.0,
                   help="largest horocyclic offset a")
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--out", default=None, help="CSV path (default stdout)")

    p = sub.add_parser("distortion", help="intrinsic vs extrinsic net scan")
    _space_argument(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=20000, help="net node budget")
    p.add_argument("--eps", type=float, default=None,
                   help="net connection radius (default 2.5 lattice spacings)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("fill", help="cone-fill areas for chart-circle loops")
    _space_argument(p)
    p.add_argument("--seed", type=int, default=0,
                   help="accepted for uniformity; the fill is deterministic")
    p.add_argument("--n", type=int, default=256, help="loop vertices")
    p.add_argument("--out", default=None)

    p = sub.add_parser("chart", help="evaluate the slice chart on seeded inputs")
    _space_argument(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=5, help="sample count")
    return top


def _horosphere_for(spec) -> Horosphere:
    base = spec.space.check_point(tuple(_canonical_base(f)
                                        for f in spec.space.factors))
    return Horosphere(spec.space, spec.direction, base)


def cmd_verify(args) -> int:
    spec = parse_space_spec(args.space)
    results = run_verify(spec, args.seed, n=args.n, tol=args.tol)
    ok = True
    for r in results:
        print(r.line())
        ok = ok and r.passed
    total_checks = sum(r.checks for r in results)
    total_failures = sum(r.failures for r in results)
    print(f"{'PASS' if ok else 'FAIL'}  total: {total_checks} checks, "
          f"{total_failures} failures")
    return 0 if ok else 1


def cmd_control(args) -> int:
    res = horocycle_control(args.amax, args.step, eps=args.eps)
    write_csv(args.out, ["a", "extrinsic", "intrinsic_exact", "intrinsic_net"],
              res.csv_rows())
    print(f"control: {len(res.rows)} rows, net of {res.n_nodes} nodes at "
          f"eps={res.eps:g}", file=sys.stderr)
    return 0


def cmd_distortion(args) -> int:
    spec = parse_space_spec(args.space)
    if len(spec.direction.active) < 2:
        raise UsageError("q must be at least 2 for a distortion scan")
    horo = _horosphere_for(spec)
    config = DistortionConfig(n_nodes=args.n, eps=args.eps)
    res = distortion_scan(horo, args.seed, config)
    write_csv(args.out, ["pair_id", "extrinsic", "intrinsic", "ratio"],
              res.csv_rows())
    print(f"distortion: {len(res.rows)} pairs over {res.n_nodes} nodes, "
          f"{res.n_edges} edges, eps={res.eps:.6g}; "
          f"log-log slope {res.slope:.4f}", file=sys.stderr)
    return 0


def cmd_fill(args) -> int:
    spec = parse_space_spec(args.space)
    if len(spec.direction.active) < 2:
        raise UsageError("q must be at least 2 to build a 1-slice")
    slc = default_scan_slice(_horosphere_for(spec))
    res = fill_family(slc, n_boundary=args.n)
    write_csv(args.out, ["loop_id", "boundary_length", "area", "n_triangles"],
              res.csv_rows())
    print(f"fill: plane {res.plane}, radii {list(res.radii)}, "
          f"log-log slope {res.slope:.4f}", file=sys.stderr)
    return 0


def cmd_chart(args) -> int:
    spec = parse_space_spec(args.space)
    slc = default_scan_slice(_horosphere_for(spec)) \
        if len(spec.direction.active) >= 2 else None
    if slc is None:
        raise UsageError("q must be at least 2 for a chart with coordinates")
    rng = np.random.Generator(np.random.Philox(key=np.uint64(args.seed)))
    print(f"slice: {slc!r} on {spec.space.describe()}; chart carries "
          f"{slc.chart_dim_note}")
    lo, up = slc.bilipschitz_constants()
    print(f"bilipschitz constants: lower {_fmt(lo)}, upper {_fmt(up)}; "
          f"path constant {_fmt(slc.path_constant)}")
    pts = []
    for k in range(args.n):
        c = slc.random_chart_point(rng)
        x = slc.chart_inverse(c)
        c2 = slc.chart_forward(x)
        resid = abs(slc.horosphere.value(x))
        rt = float(np.max(np.abs(c2.params - c.params))) if c.params.size else 0.0
        print(f"sample {k}: params {[f'{p:.17g}' for p in c.params]} "
              f"membership {resid:.3e} roundtrip {rt:.3e}")
        pts.append(x)
    if len(pts) >= 2:
        path = slc.path(pts[0], pts[1], samples=512)
        print(f"path: chart_dist {_fmt(path.chart_dist)} length "
              f"{_fmt(path.length)} bound {_fmt(path.bound)} "
              f"max_membership {float(np.max(np.abs(path.membership_residuals()))):.3e}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return int(exc.code or 0)
    handlers = {
        "verify": cmd_verify,
        "control": cmd_control,
        "distortion": cmd_distortion,
        "fill": cmd_fill,
        "chart": cmd_chart,
    }
    try:
        return handlers[args.command](args)
    except (SpecSyntaxError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
