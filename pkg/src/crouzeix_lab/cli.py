"""Command-line front end.

    crouzeix-lab ellipse-map --b 1 --at 0.3,0.1
    crouzeix-lab verify --suite crouzeix --b 2
    crouzeix-lab numrange --matrix 1,2,0,-1 --out csv --path -
    crouzeix-lab ratio --matrix 0,2,0,0 --degree 1
    crouzeix-lab domain --quintic 0.25,0.05 --out svg --path fig.svg

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import conformal, crouzeix, matrices
from .errors import LabError
from .numerics import CurveSamples

SVG_SIZE = 1000.0
SVG_MARGIN = 0.05


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------------------
# Output formats
# ---------------------------------------------------------------------------

def emit_csv(curve: CurveSamples, sink: TextIO) -> None:
    """Write ``theta,re,im`` rows with 17 significant digits."""
    sink.write("theta,re,im\n")
    for t, z in zip(curve.params, curve.points):
        sink.write(f"{t:.17g},{z.real:.17g},{z.imag:.17g}\n")


def emit_svg(curves: Sequence[CurveSamples], sink: TextIO) -> None:
    """Write a standalone SVG with one closed polyline per curve.

    Coordinates are scaled uniformly so the larger side of the padded
    bounding box spans 1000 user units; y points up.
    """
    if not curves:
        raise ValueError("emit_svg needs at least one curve")
    pts = np.concatenate([c.points for c in curves])
    x0, x1 = float(pts.real.min()), float(pts.real.max())
    y0, y1 = float(pts.imag.min()), float(pts.imag.max())
    span = max(x1 - x0, y1 - y0) or 1.0
    pad = SVG_MARGIN * span
    scale = SVG_SIZE / (span + 2 * pad)
    vb = ((x0 - pad) * scale, -(y1 + pad) * scale,
          (x1 - x0 + 2 * pad) * scale, (y1 - y0 + 2 * pad) * scale)
    sink.write('<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n')
    sink.write(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{vb[2]:.6f}" height="{vb[3]:.6f}" '
        f'viewBox="{vb[0]:.6f} {vb[1]:.6f} {vb[2]:.6f} {vb[3]:.6f}">\n'
    )
    for c in curves:
        ring = np.append(c.points, c.points[:1])
        coords = " ".join(f"{z.real * scale:.6f},{-z.imag * scale:.6f}" for z in ring)
        sink.write(f'  <polyline fill="none" stroke="black" stroke-width="2" points="{coords}"/>\n')
    sink.write("</svg>\n")


@contextlib.contextmanager
def _open_sink(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


# ---------------------------------------------------------------------------
# Argument parsing helpers
# ---------------------------------------------------------------------------

def parse_complex(token: str) -> complex:
    """Parse ``re``, ``re+imi`` or ``re-imi`` (no spaces)."""
    if not token or any(ch.isspace() for ch in token) or "j" in token.lower() or "(" in token:
        raise UsageError(f"bad complex number {token!r}")
    try:
        z = complex(token.replace("i", "j"))
    except ValueError:
        raise UsageError(f"bad complex number {token!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"non-finite complex number {token!r}")
    return z


def parse_matrix(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(f"--matrix needs 4 comma-separated entries, got {len(parts)}")
    return matrices.matrix2(*(parse_complex(p) for p in parts))


def parse_pair(text: str, name: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"{name} needs two comma-separated numbers")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"{name}: bad number in {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)):
        raise UsageError(f"{name}: values must be finite")
    return a, b


def parse_quintic(text: str) -> conformal.QuinticMap:
    a, b = parse_pair(text, "--quintic")
    if a <= 0 or b <= 0 or not conformal.quintic_admissible(a, b):
        raise UsageError(f"quintic parameters ({a}, {b}) are not admissible "
                         "(need a, b > 0, 3a+5b <= 1, ab+4b <= a)")
    return conformal.QuinticMap(a, b)


def read_profile(path: str) -> conformal.ProfileDomain:
    """Read ``theta,radius`` rows; blank lines, '#' comments and a header are skipped."""
    thetas, radii = [], []
    try:
        with open(path, encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip() or row[0].lstrip().startswith("#"):
                    continue
                try:
                    t, r = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if not thetas:
                        continue
                    raise UsageError(f"malformed profile row {row!r} in {path}") from None
                thetas.append(t)
                radii.append(r)
    except OSError as exc:
        raise UsageError(f"cannot read profile file {path}: {exc.strerror}") from None
    try:
        return conformal.ProfileDomain(np.array(thetas), np.array(radii))
    except LabError as exc:
        raise UsageError(f"invalid profile in {path}: {exc}") from None


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(x) and x > 0):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crouzeix-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ellipse-map", help="constants of the ellipse-to-disk map")
    p.add_argument("--b", type=_positive_float, required=True)
    p.add_argument("--eps", type=_positive_float, default=1e-12)
    p.add_argument("--at", help="evaluate phi at re,im")

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=["jack", "schwarz-jack", "bicirc", "crouzeix"], required=True)
    p.add_argument("--b", type=_positive_float)
    p.add_argument("--quintic")
    p.add_argument("--grid", type=_positive_int, default=200)
    p.add_argument("--tol", type=_positive_float, default=1e-8)

    p = sub.add_parser("numrange", help="sample the boundary of W(A)")
    p.add_argument("--matrix", required=True)
    p.add_argument("--points", type=_positive_int, default=360)
    p.add_argument("--out", choices=["csv", "svg"], default="csv")
    p.add_argument("--path", default="-")

    p = sub.add_parser("ratio", help="search for a large Crouzeix ratio")
    p.add_argument("--matrix", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--restarts", type=_positive_int, default=32)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("domain", help="draw a bi-circularly symmetric domain")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--quintic")
    src.add_argument("--profile")
    p.add_argument("--points", type=_positive_int, default=720)
    p.add_argument("--out", choices=["svg"], required=True)
    p.add_argument("--path", required=True)
    return parser


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _print_checks(rows: Iterable[tuple[str, bool, float]], out: TextIO) -> bool:
    ok = True
    for name, passed, margin in rows:
        ok &= bool(passed)
        out.write(f"{'PASS' if passed else 'FAIL'}  {name}  (margin {margin:.3e})\n")
    out.write("all checks passed\n" if ok else "some checks FAILED\n")
    return ok


def _cmd_ellipse_map(args, out) -> int:
    if args.eps > 1e-6:
        raise UsageError("--eps must be at most 1e-6")
    rho, phi1, phip0 = conformal.ellipse_constants(args.b, args.eps)
    m = conformal.EllipseMapSeries(args.b, args.eps)
    out.write(f"b        = {args.b:.17g}\n")
    out.write(f"a        = {m.a:.17g}\n")
    out.write(f"rho      = {rho:.17g}\n")
    out.write(f"phi(1)   = {phi1:.17g}\n")
    out.write(f"phi'(0)  = {phip0:.17g}\n")
    out.write(f"2/rho    = {2 / rho:.17g}\n")
    out.write(f"N terms  = {m.n_terms}\n")
    if args.at is not None:
        x, y = parse_pair(args.at, "--at")
        try:
            w = m(complex(x, y))
        except LabError as exc:
            raise UsageError(str(exc)) from None
        out.write(f"phi(z)   = {w.real:.17g}{w.imag:+.17g}i\n")
    return 0


def _map_for(args):
    if args.quintic is not None and args.b is not None:
        raise UsageError("give at most one of --quintic and --b")
    if args.b is not None:
        m = conformal.EllipseMapSeries(args.b)
        return f"inverse ellipse map, b={args.b}", m.inverse
    q = parse_quintic(args.quintic or "0.25,0.05")
    return f"quintic z+{q.a}z^3-{q.b}z^5", q


def _cmd_verify(args, out) -> int:
    n = args.grid
    if args.suite == "crouzeix":
        if args.quintic is not None:
            raise UsageError("--quintic does not apply to the crouzeix suite")
        b = args.b if args.b is not None else 1.0
        rep = crouzeix.verify_cp_bound(b)
        out.write(f"b = {rep.b:.17g}  rho = {rep.rho:.17g}\n")
        out.write(f"phi(1) = {rep.phi1:.17g}  phi'(0) = {rep.phip0:.17g}\n")
        out.write(f"||phi(A)+psi(A)*|| = {rep.cp_norm:.17g}  ||phi(A)|| = {rep.phi_norm:.17g}\n")
        ok = _print_checks(((c.name, c.passed, c.margin) for c in rep.checks), out)
        return 0 if ok else 1

    label, f = _map_for(args)
    out.write(f"map: {label}\n")
    r_grid = np.linspace(0.999 / n, 0.999, n)
    theta_grid = 2 * math.pi * np.arange(n) / n
    rows = []
    if args.suite in ("jack", "bicirc"):
        rep = conformal.verify_symmetry(f, args.suite, r_grid, theta_grid, args.tol)
        rows.append((f"{args.suite} symmetry, worst {rep.worst_check} at r={rep.worst_r:.4g}, "
                     f"theta={rep.worst_theta:.4g}", rep.passed, -rep.worst_violation))
    if args.suite == "bicirc":
        grid = np.linspace(0.0, 0.999, max(n, 3))
        margins = conformal.bicirc_profile_verify(f, grid, args.tol)
        for key, val in margins.items():
            if key != "passed":
                rows.append((f"profile {key}", val >= -args.tol, val))
    if args.suite == "schwarz-jack":
        grid = np.linspace(0.0, 0.999, max(n, 3))
        rep = conformal.schwarz_jack_verify(f, grid, args.tol, theta_grid=theta_grid)
        rows.append(("jack condition", rep.symmetry.passed, -rep.symmetry.worst_violation))
        rows.append(("real on [0, r_max]", rep.max_imag <= args.tol, -rep.max_imag))
        for key, val in rep.margins.items():
            rows.append((key, val >= -args.tol, val))
        out.write(f"r_max = {rep.r_max}\n")
    return 0 if _print_checks(rows, out) else 1


def _cmd_numrange(args, out) -> int:
    A = parse_matrix(args.matrix)
    if args.points < 8:
        raise UsageError("--points must be at least 8")
    curve = matrices.nr_boundary(A, args.points)
    with _open_sink(args.path) as sink:
        if args.out == "csv":
            emit_csv(curve, sink)
        else:
            emit_svg([curve], sink)
    return 0


def _cmd_ratio(args, out) -> int:
    A = parse_matrix(args.matrix)
    if args.degree < 0:
        raise UsageError("--degree must be non-negative")
    try:
        rep = crouzeix.ratio_search(A, args.degree, args.restarts, args.seed)
    except LabError as exc:
        raise UsageError(str(exc)) from None
    out.write(f"best ratio  = {rep.best_ratio:.17g}\n")
    coeffs = ", ".join(f"{c.real:.12g}{c.imag:+.12g}i" for c in rep.best_poly.coeffs)
    out.write(f"polynomial  = [{coeffs}]  (coefficients of z^0, z^1, ...)\n")
    out.write(f"evaluations = {rep.evaluations}\n")
    out.write(f"seed        = {rep.seed}\n")
    return 0


def _cmd_domain(args, out) -> int:
    if args.profile is not None:
        domain = read_profile(args.profile)
        if args.points % 4:
            raise UsageError("--points must be a multiple of 4 for profile domains")
        curve = conformal.bicirc_from_profile(domain, args.points)
    else:
        q = parse_quintic(args.quintic or "0.25,0.05")
        curve = conformal.map_circle(q, args.points)
    with _open_sink(args.path) as sink:
        emit_svg([curve], sink)
    return 0


COMMANDS = {
    "ellipse-map": _cmd_ellipse_map,
    "verify": _cmd_verify,
    "numrange": _cmd_numrange,
    "ratio": _cmd_ratio,
    "domain": _cmd_domain,
}


def run(argv: Sequence[str], out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(list(argv))
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"crouzeix-lab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"crouzeix-lab: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
