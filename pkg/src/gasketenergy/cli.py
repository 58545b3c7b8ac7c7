"""Command-line front end.

One-shot exact queries print a rational followed by its float value; scan
commands emit CSV (the canonical artifact) or a minimal static SVG bar
chart.  Everything is controlled by flags, and the same arguments always
produce byte-identical output, whatever the parallelism degree.

Exit codes: 0 success, 1 invariant failure (``verify``), 2 argument error,
3 internal cross-route disagreement.
"""

from __future__ import annotations

import argparse
import sys
from typing import Iterable, Optional, Sequence

from .core import VertexAddress, check_word, format_rational
from .derivatives import edge_profile, rn_derivative, rn_derivative_via_mass
from .measures import measure_of_cell, parse_coeffs
from . import bvectors as bv
from . import dynamics as dy
from .verify import SUITES, run_suites

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2
EXIT_ROUTES = 3


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def _csv(rows: Iterable[Sequence[object]]) -> str:
    return "".join(",".join(str(x) for x in row) + "\n" for row in rows)


def _svg_bars(values: Sequence[float], title: str) -> str:
    """A static bar chart: one rect per bin, a baseline, nothing else."""
    width, height, pad = 840, 360, 20
    top = max(values) if values and max(values) > 0 else 1.0
    bar_w = (width - 2 * pad) / max(len(values), 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f"<title>{title}</title>",
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i, v in enumerate(values):
        h = (height - 2 * pad) * (v / top)
        x = pad + i * bar_w
        y = height - pad - h
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{bar_w:.2f}" height="{h:.2f}" fill="#4878a8"/>'
        )
    parts.append(
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _histogram_rows(hist: dy.Histogram, unit: str, value_name: str):
    yield (f"bin_lo_{unit}", f"bin_hi_{unit}", "count", value_name)
    values = hist.normalized_values()
    for i, (count, value) in enumerate(zip(hist.counts, values)):
        yield (repr(hist.bin_edges[i]), repr(hist.bin_edges[i + 1]), count, repr(value))


def _emit_histogram(hist: dy.Histogram, unit: str, value_name: str, fmt: str,
                    path: Optional[str], title: str) -> None:
    if fmt == "svg":
        _emit(_svg_bars(hist.normalized_values(), title), path)
    else:
        _emit(_csv(_histogram_rows(hist, unit, value_name)), path)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_measure(args: argparse.Namespace) -> int:
    c = parse_coeffs(args.coeffs)
    check_word(args.word)
    value = measure_of_cell(c, args.word)
    print(f"{format_rational(value)} {float(value)!r}")
    return EXIT_OK


def cmd_derivative(args: argparse.Namespace) -> int:
    c = parse_coeffs(args.coeffs)
    vertex = VertexAddress.parse(args.vertex)
    value = rn_derivative(c, vertex)
    other = rn_derivative_via_mass(c, vertex)
    if value != other:
        print(
            f"routes-disagree at {vertex}: {format_rational(value)} vs {format_rational(other)}",
            file=sys.stderr,
        )
        return EXIT_ROUTES
    print(f"{format_rational(value)} {float(value)!r} routes-agree")
    return EXIT_OK


_B_ROUTES = {
    "matrix": bv.b_from_mass,
    "recursion": bv.b_from_word,
    "kusuoka": bv.b_from_kusuoka,
}


def _bvector_by(method: str, word: str):
    """The weight triple for one word, or None when 'all' routes disagree."""
    if method != "all":
        return _B_ROUTES[method](word)
    triples = {name: route(word) for name, route in _B_ROUTES.items()}
    first = triples["matrix"]
    if any(t != first for t in triples.values()):
        return None
    return first


def cmd_bvector(args: argparse.Namespace) -> int:
    if args.level is not None:
        rows = [("word", "b0", "b1", "b2", "b0_f", "b1_f", "b2_f")]
        for word, b in bv.enumerate_bvectors(args.level):
            if args.method == "all" and _bvector_by("all", word) is None:
                print(f"routes-disagree at {word!r}", file=sys.stderr)
                return EXIT_ROUTES
            rows.append(
                (word,) + tuple(format_rational(x) for x in b) + tuple(repr(float(x)) for x in b)
            )
        _emit(_csv(rows), args.output)
        return EXIT_OK
    check_word(args.word)
    b = _bvector_by(args.method, args.word)
    if b is None:
        print(f"routes-disagree at {args.word!r}", file=sys.stderr)
        return EXIT_ROUTES
    print(",".join(format_rational(x) for x in b))
    print(",".join(repr(float(x)) for x in b))
    return EXIT_OK


def cmd_edge_profile(args: argparse.Namespace) -> int:
    c = parse_coeffs(args.coeffs)
    try:
        j, k = (int(part) for part in args.edge.split(","))
    except ValueError:
        raise ValueError(f"edge must be two corners like '0,1', got {args.edge!r}") from None
    profile = edge_profile(c, args.word, (j, k), args.depth)
    rows: list[Sequence[object]] = [("position", "position_float", "value", "value_float")]
    for pos, value in profile:
        rows.append((format_rational(pos), repr(float(pos)), format_rational(value), repr(float(value))))
    _emit(_csv(rows), args.output)
    return EXIT_OK


def cmd_ifs(args: argparse.Namespace) -> int:
    if args.mode == "angular":
        hist = dy.angular_histogram(args.level, slices=args.slices, arc=args.arc, jobs=args.jobs)
        _emit_histogram(hist, "rad", "mean_one_density", args.format, args.output,
                        f"angular level {args.level} ({args.arc})")
    elif args.mode == "radial":
        hist = dy.radial_histogram(args.level, bins=args.bins, jobs=args.jobs)
        _emit_histogram(hist, "r", "mass_ratio", args.format, args.output,
                        f"radial level {args.level}")
    else:
        hist = dy.boundary_orbit_histogram(iters=args.iters, bins=args.bins,
                                           arc=args.arc, jobs=args.jobs)
        _emit_histogram(hist, "rad", "mean_one_density", args.format, args.output,
                        f"boundary orbit {args.iters} iterations ({args.arc})")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    ok = run_suites(args.suite, max_depth=args.max_depth)
    return EXIT_OK if ok else EXIT_INVARIANT


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gasketenergy",
        description="Exact energy-measure computations on the Sierpinski gasket.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="exact cell mass of a coefficient measure")
    p.add_argument("--coeffs", required=True, help="three comma-separated rationals, e.g. 1,1,1")
    p.add_argument("--word", default="", help="cell address over {0,1,2}; empty for the whole set")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("derivative", help="exact derivative against the reference measure")
    p.add_argument("--coeffs", required=True, help="three comma-separated rationals")
    p.add_argument("--vertex", required=True, help="vertex address '<word>:<corner>', e.g. 01:2")
    p.set_defaults(func=cmd_derivative)

    p = sub.add_parser("bvector", help="cell-averaging weight triple of a word")
    p.add_argument("--word", default="", help="cell address over {0,1,2}")
    p.add_argument("--method", choices=["matrix", "recursion", "kusuoka", "all"], default="all",
                   help="computation route; 'all' checks the three routes agree")
    p.add_argument("--level", type=int, default=None,
                   help="emit a CSV of every word at this level instead of one triple")
    p.add_argument("--output", default=None, help="write to this path instead of stdout")
    p.set_defaults(func=cmd_bvector)

    p = sub.add_parser("edge-profile", help="derivative restricted to one cell edge, as CSV")
    p.add_argument("--coeffs", required=True, help="three comma-separated rationals")
    p.add_argument("--word", default="", help="cell whose edge is profiled")
    p.add_argument("--edge", default="1,2", help="two distinct corners, e.g. 1,2")
    p.add_argument("--depth", type=int, default=6, help="dyadic subdivision depth along the edge")
    p.add_argument("--output", default=None, help="write to this path instead of stdout")
    p.set_defaults(func=cmd_edge_profile)

    p = sub.add_parser("ifs", help="histograms of the induced disk dynamics")
    ifs_sub = p.add_subparsers(dest="mode", required=True)

    q = ifs_sub.add_parser("angular", help="angular distribution of the level-m weight cloud")
    q.add_argument("--level", type=int, default=11, help="enumeration depth m")
    q.add_argument("--slices", type=int, default=100, help="number of angular bins")
    q.add_argument("--arc", choices=["full", "third", "sixth"], default="third",
                   help="reporting arc; points are folded in by the rotation symmetry")
    _common_ifs_flags(q)

    q = ifs_sub.add_parser("radial", help="radial distribution of the level-m weight cloud")
    q.add_argument("--level", type=int, default=11, help="enumeration depth m")
    q.add_argument("--bins", type=int, default=300, help="number of radial bins")
    _common_ifs_flags(q)

    q = ifs_sub.add_parser("orbit", help="boundary-circle orbit histogram")
    q.add_argument("--iters", type=int, default=14, help="number of map iterations")
    q.add_argument("--bins", type=int, default=800, help="number of angular bins")
    q.add_argument("--arc", choices=["full", "third", "sixth"], default="sixth",
                   help="reporting arc; points are folded in by the symmetries")
    _common_ifs_flags(q)

    p = sub.add_parser("verify", help="run module invariant suites")
    p.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    p.add_argument("--max-depth", type=int, default=4, help="word-length budget for the scans")
    p.set_defaults(func=cmd_verify)

    return parser


def _common_ifs_flags(q: argparse.ArgumentParser) -> None:
    q.add_argument("--jobs", type=int, default=1, help="worker processes for the enumeration")
    q.add_argument("--format", choices=["csv", "svg"], default="csv")
    q.add_argument("--output", default=None, help="write to this path instead of stdout")
    q.set_defaults(func=cmd_ifs)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
