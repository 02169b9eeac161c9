"""Command line front end: ``bladeangle angle | generate | check``.

Exit codes
----------
0  success
1  ``check`` found a pair whose deviation exceeds ``--tol``
2  unreadable/invalid input or bad arguments
3  degenerate span (dependent or zero spanning vectors)
4  grade mismatch (spans of different length)
5  numerical failure (iteration cap, failed bivector split)
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import io
from .errors import BladeAngleError
from .orientation import TOL_ANGLE

EXIT_BREACH = 1


def _fail(exc: BaseException, source=None) -> int:
    obj = io.error_object(exc, source)
    print(json.dumps(obj), file=sys.stderr)
    return obj["exit_code"]


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _angle_text(doc: dict) -> str:
    cl = doc["clifford"]
    lines = [
        f"n = {doc['input']['n']}, r = {doc['input']['r']}",
        f"cos_total          {cl['cos_total']:+.12f}",
        f"sin_product_abs    {cl['sin_product_abs']:.12f}",
        f"s (intersection)   {cl['s_intersection']}",
        f"t (perpendicular)  {cl['t_perpendicular']}",
        "",
        f"{'k':>3}  {'angle [rad]':>16}  {'angle [deg]':>14}",
    ]
    for k, (rad, deg) in enumerate(zip(cl["principal_angles"], cl["principal_angles_deg"]), 1):
        lines.append(f"{k:>3}  {rad:16.12f}  {deg:14.9f}")
    if "agreement" in doc:
        lines.append("")
        lines.append(f"oracle max deviation  {doc['agreement']['max_angle_deviation']:.3e}")
    return "\n".join(lines) + "\n"


def _render(doc: dict, fmt: str) -> str:
    if fmt == "text":
        return _angle_text(doc)
    return json.dumps(doc, indent=2) + "\n"


def cmd_angle(args) -> int:
    try:
        spec = io.load_spec(args.input)
        doc = io.evaluate(spec, oracle=args.oracle, tol_angle=args.tol, source=args.input)
    except BladeAngleError as exc:
        return _fail(exc, args.input)
    _emit(_render(doc, args.format), args.out)
    return 0


def _parse_planted(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"--planted expects comma-separated radians, got {text!r}") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise ValueError(f"--planted expects comma-separated radians, got {text!r}")
    return vals


def cmd_generate(args) -> int:
    try:
        planted = None if args.planted is None else _parse_planted(args.planted)
        specs = io.generate(args.n, args.r, args.count, args.seed, planted)
    except ValueError as exc:
        return _fail(io.ParseError(str(exc)))
    if args.out is None:
        for spec in specs:
            sys.stdout.write(json.dumps(json.loads(io.render_spec(spec))) + "\n")
        return 0
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = max(5, len(str(len(specs) - 1)))
    for i, spec in enumerate(specs):
        (out / f"pair_{i:0{width}d}.json").write_text(io.render_spec(spec), encoding="utf-8")
    return 0


def _check_one(item):
    path, spec = item
    try:
        doc = io.evaluate(spec, oracle=True, source=path)
    except BladeAngleError as exc:
        return path, None, io.error_object(exc, path)
    return path, doc["agreement"]["max_angle_deviation"], None


def cmd_check(args) -> int:
    root = Path(args.directory)
    if not root.is_dir():
        return _fail(io.ParseError(f"{root} is not a directory"), root)
    files = sorted(p for p in root.iterdir() if p.suffix == ".json" and p.is_file())
    if not files:
        return _fail(io.ParseError("no inputs"), root)
    items = []
    for p in files:
        try:
            items.append((str(p), io.load_spec(p)))
        except BladeAngleError as exc:
            return _fail(exc, p)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_check_one, items, chunksize=8))
    else:
        results = [_check_one(it) for it in items]

    errors = [err for _, _, err in results if err is not None]
    if errors:
        for err in errors:
            print(json.dumps(err), file=sys.stderr)
        return errors[0]["exit_code"]

    worst = max(dev for _, dev, _ in results)
    breaches = [path for path, dev, _ in results if dev > args.tol]
    if args.format == "json":
        summary = {
            "pairs": [{"file": Path(p).name, "max_angle_deviation": dev} for p, dev, _ in results],
            "count": len(results),
            "max_deviation": worst,
            "tol": args.tol,
            "breaches": [Path(p).name for p in breaches],
        }
        sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    else:
        w = max(len(Path(p).name) for p, _, _ in results)
        lines = [f"{'file':<{w}}  {'max deviation':>13}  status"]
        for p, dev, _ in results:
            lines.append(f"{Path(p).name:<{w}}  {dev:13.3e}  {'ok' if dev <= args.tol else 'FAIL'}")
        lines.append(f"{len(results)} pairs, max deviation {worst:.3e} (tol {args.tol:.1e})")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_BREACH if breaches else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bladeangle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("angle", help="relative orientation of one subspace pair")
    p.add_argument("input", help="pair file {'n', 'A', 'B'}")
    p.add_argument("--oracle", action="store_true", help="also run the QR + SVD oracle")
    p.add_argument("--tol", type=float, default=TOL_ANGLE, help="zero / right angle classification tolerance")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("-o", "--out", help="write report here instead of stdout")
    p.set_defaults(func=cmd_angle)

    p = sub.add_parser("generate", help="write seeded random or planted-angle pair files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--planted", help="comma-separated principal angles in radians")
    p.add_argument("-o", "--out", help="output directory (default: JSON lines on stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("check", help="compare Clifford and oracle angles over a directory")
    p.add_argument("directory")
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
