"""Command-line interface: ``lpdual {theta,classify,branches,curve,sweep,verify}``."""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import os
import sys

import numpy as np

from .branches import enumerate_branches
from .classify import classify_embedded
from .errors import ConvergenceError, DomainError, LpDualError, NumericalError
from .period import DEFAULT_CONFIG, QuadratureConfig, theta
from .reconstruct import (
    ClosedFormParams,
    Family,
    assemble_closed,
    closed_form,
    integrate_arc,
    support_to_curve,
)

CHECK_NAMES = (
    "constants", "near_one", "second_order", "large_r", "duality", "monotonicity",
    "classification", "reconstruction", "closed_forms", "comparison_bounds",
    "expansion", "extreme", "region_map",
)

EXIT_FAIL = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_NO_BRANCH = 4
EXIT_UNWRITABLE = 5


class NoBranch(LpDualError):
    pass


def fmt(x) -> str:
    """17 significant digits: enough for an exact double round trip."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _open_out(path):
    if path in (None, "-"):
        return contextlib.nullcontext(sys.stdout)
    return open(path, "w", newline="", encoding="utf-8")


# ---------------------------------------------------------------------------


def cmd_theta(args):
    cfg = QuadratureConfig(exact_special=False) if args.no_special else DEFAULT_CONFIG
    v = theta((args.p, args.q), args.r, cfg)
    if args.json:
        out = {
            "p": args.p,
            "q": args.q,
            "r": args.r,
            "theta": v.theta,
            "err_estimate": v.err_estimate,
            "method": v.method.value,
            "nodes": v.nodes,
            "scheme": v.scheme or None,
        }
        print(json.dumps(out))
    else:
        extra = f" nodes={v.nodes} scheme={v.scheme}" if v.nodes else ""
        print(f"{fmt(v.theta)} err={v.err_estimate:.3e} method={v.method.value}{extra}")
    return 0


def cmd_classify(args):
    rep = classify_embedded((args.p, args.q))
    if args.json:
        print(json.dumps(rep.to_dict(), ensure_ascii=False))
        return 0
    print(rep.summary())
    print(f"  qualifier: {rep.qualifier.value}")
    if rep.count is not None:
        print(f"  count (incl. constant): {rep.count}")
    if rep.xi is not None:
        print(f"  xi: {fmt(rep.xi)}")
        print(f"  k bucket: {rep.k_bucket}")
    return 0


def cmd_branches(args):
    found = enumerate_branches((args.p, args.q), args.n, r_max=args.r_max, grid=args.grid, workers=args.workers)
    text = json.dumps([b.to_dict() for b in found], indent=2)
    with _open_out(args.output) as fh:
        print(text, file=fh)
    return 0


def _closed_form_profile(args):
    pq = (args.p, args.q)
    if args.lam is not None:
        fams = {(1.0, 2.0): Family.TRANSLATE12, (-2.0, 2.0): Family.ELLIPSE2}
        if pq not in fams:
            raise DomainError("--lambda applies to (p, q) = (1, 2) or (-2, 2)")
        return closed_form(ClosedFormParams(fams[pq], args.lam, args.theta0), args.samples)
    if pq != (-2.0, -1.0):
        raise DomainError("--mu applies to (p, q) = (-2, -1)")
    return closed_form(ClosedFormParams(Family.POLAR2M1, args.mu, args.theta0), args.samples)


def _branch_profile(args):
    found = enumerate_branches((args.p, args.q), args.n)
    if args.m is not None:
        found = [b for b in found if b.m == args.m]
    if not found:
        want = f"m={args.m}, " if args.m is not None else ""
        raise NoBranch(f"no branch with {want}n={args.n} for (p, q) = ({args.p}, {args.q})")
    ms = sorted({b.m for b in found})
    if len(ms) > 1:
        raise NoBranch(f"several branches (m in {ms}); choose one with -m")
    br = found[0]
    arc = integrate_arc((args.p, args.q), br.r_root, max(8, args.samples // (2 * br.m) + 1))
    return assemble_closed(arc, br.n, br.m)


def write_curve_csv(fh, profile, points):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["theta", "u", "u_theta", "x", "y"])
    for i in range(len(profile.u)):
        w.writerow(
            [fmt(profile.thetas[i]), fmt(profile.u[i]), fmt(profile.u_theta[i]), fmt(points[i, 0]), fmt(points[i, 1])]
        )


def curve_svg(points) -> str:
    """Single closed path; y is flipped so the picture has the usual orientation."""
    xs, ys = points[:, 0], -points[:, 1]
    x0, x1, y0, y1 = xs.min(), xs.max(), ys.min(), ys.max()
    pad = 0.01 * max(x1 - x0, y1 - y0)
    box = (x0 - pad, y0 - pad, x1 - x0 + 2 * pad, y1 - y0 + 2 * pad)
    d = "M " + " L ".join(f"{x:.9g} {y:.9g}" for x, y in zip(xs, ys)) + " Z"
    stroke = box[2] / 300
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{" ".join(f"{v:.9g}" for v in box)}" width="600" height="{600 * box[3] / box[2]:.0f}">\n'
        f'  <path d="{d}" fill="none" stroke="black" stroke-width="{stroke:.6g}"/>\n'
        "</svg>\n"
    )


def cmd_curve(args):
    if args.lam is not None or args.mu is not None:
        prof = _closed_form_profile(args)
    else:
        prof = _branch_profile(args)
    curve = support_to_curve(prof)
    pts = curve.points[: len(prof.u)]
    targets = [(args.output, args.output and args.output.lower().endswith(".svg"))]
    if args.svg:
        targets.append((args.svg, True))
    for path, is_svg in targets:
        with _open_out(path) as fh:
            if is_svg:
                fh.write(curve_svg(curve.points))
            else:
                write_curve_csv(fh, prof, pts)
    print(
        f"closure gap {curve.closure_gap:.3e}, total curvature {fmt(curve.total_curvature)}, "
        f"symmetry (n, m) = {curve.symmetry}",
        file=sys.stderr,
    )
    return 0


def cmd_sweep(args):
    from .sweep import COLUMNS, SweepSpec, run_sweep

    if args.step is not None:
        spec = SweepSpec.from_step(tuple(args.p_range), tuple(args.q_range), args.step)
    else:
        n = args.resolution
        if n < 2:
            raise DomainError("resolution must be >= 2")
        spec = SweepSpec(tuple(args.p_range), tuple(args.q_range), n, n)
    # fail before doing the work when the target cannot be written
    fh = _open_out(args.output)
    rows = run_sweep(spec, workers=args.workers)
    with fh as out:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(COLUMNS)
        for p, q, case, qual, count, xi in rows:
            w.writerow([fmt(p), fmt(q), case, qual, fmt(count), fmt(xi)])
    return 0


def cmd_verify(args):
    from .verification import CHECKS, QUICK, run_checks

    if args.check:
        names = args.check
    elif args.quick:
        names = QUICK
    else:
        names = list(CHECKS)
    res = run_checks(names, workers=args.workers, stream=sys.stdout)
    bad = [r.name for r in res if not r.passed]
    print(f"{len(res) - len(bad)}/{len(res)} checks passed" + (f"; failed: {', '.join(bad)}" if bad else ""))
    return EXIT_FAIL if bad else 0


# ---------------------------------------------------------------------------


def _finite(s):
    v = float(s)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"{s!r} is not a finite number")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lpdual", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def pq(sp):
        sp.add_argument("-p", type=_finite, required=True)
        sp.add_argument("-q", type=_finite, required=True)

    sp = sub.add_parser("theta", help="evaluate the period function")
    pq(sp)
    sp.add_argument("-r", type=_finite, required=True)
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--no-special", action="store_true", help="skip the closed-form short-circuit")
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("classify", help="embedded-solution verdict for (p, q)")
    pq(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("branches", help="solutions of Theta = pi n / m as JSON")
    pq(sp)
    sp.add_argument("-n", type=int, default=1)
    sp.add_argument("--r-max", type=float, default=1e6)
    sp.add_argument("--grid", type=int, default=512)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_branches)

    sp = sub.add_parser("curve", help="reconstruct a branch or a closed-form solution")
    pq(sp)
    sp.add_argument("-m", type=int, default=None)
    sp.add_argument("-n", type=int, default=1)
    fam = sp.add_mutually_exclusive_group()
    fam.add_argument("--lambda", dest="lam", type=_finite, default=None)
    fam.add_argument("--mu", type=_finite, default=None)
    sp.add_argument("--theta0", type=_finite, default=0.0)
    sp.add_argument("--samples", type=int, default=2048)
    sp.add_argument("-o", "--output", default=None, help="CSV, or SVG if the name ends in .svg")
    sp.add_argument("--svg", default=None, help="additional SVG output")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("sweep", help="classification over a (p, q) grid as CSV")
    sp.add_argument("--p-range", nargs=2, type=_finite, default=[-8.0, 8.0], metavar=("LO", "HI"))
    sp.add_argument("--q-range", nargs=2, type=_finite, default=[-4.0, 12.0], metavar=("LO", "HI"))
    res = sp.add_mutually_exclusive_group()
    res.add_argument("--step", type=_finite, default=None)
    res.add_argument("--resolution", type=int, default=65, help="points per axis")
    sp.add_argument("--workers", type=int, default=os.cpu_count())
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the acceptance checks")
    lvl = sp.add_mutually_exclusive_group()
    lvl.add_argument("--quick", action="store_true", help="checks 1-6")
    lvl.add_argument("--full", action="store_true", help="all checks (default)")
    lvl.add_argument("--check", action="append", choices=CHECK_NAMES, help="run one named check (repeatable)")
    sp.add_argument("--workers", type=int, default=os.cpu_count())
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoBranch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_BRANCH
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_UNWRITABLE
    except (ConvergenceError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
