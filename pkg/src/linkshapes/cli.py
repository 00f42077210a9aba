"""Command-line front end.

JSON goes to stdout (or ``--output``), one-line summaries to stderr.  Exit
status is 0 on success, 1 on bad input or a library error, 2 when the only
problem is that no Newton restart converged.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from .biquandle import Shaping, verify_shaping
from .decoration import eigenvalue_decoration
from .diagram import LinkDiagram, diagram_stats, parse_diagram
from .errors import NonConvergence, ShapingError
from .gluing import build_a_system, build_b_system, build_lifted_b_system
from .holonomy import verify_holonomy
from .numeric import cjson, default_tol, from_cjson
from .octahedra import tetrahedra, verify_gluing_equations, volume
from .solver import ShapingSolver
from .twist import TorusKnotFamily, riley_roots, torus_knot_diagram, torus_knot_shaping, \
    twist_solution

log = logging.getLogger("linkshapes")


class UsageError(Exception):
    pass


def _complex(text: str) -> complex:
    try:
        return from_cjson(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _m_values(text: str | None):
    if text is None or text.lower() == "free":
        return None
    values = [_complex(v) for v in text.split(",")]
    return values[0] if len(values) == 1 else values


def _diagram(args) -> LinkDiagram:
    if args.braid is not None and args.diagram is not None:
        raise UsageError("give either --braid or --diagram, not both")
    if args.braid is not None:
        return parse_diagram(args.braid)
    if args.diagram is not None:
        if os.path.exists(args.diagram):
            with open(args.diagram, encoding="utf-8") as fh:
                return parse_diagram(json.load(fh))
        return parse_diagram(args.diagram)
    raise UsageError("a diagram is required (--braid WORD or --diagram FILE)")


def _load_shaping(path: str, index: int) -> Shaping:
    """Read a shaping, a torus-knot record or a solve result (``solutions[index]``)."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "solutions" in data:
        sols = data["solutions"]
        if not 0 <= index < len(sols):
            raise UsageError(f"{path} has {len(sols)} solutions; index {index} is out of range")
        data = sols[index]
    if isinstance(data, dict) and "shaping" in data:
        data = data["shaping"]
    try:
        return Shaping.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path} does not contain a shaping ({exc})") from None


def _check_lengths(diagram: LinkDiagram, shaping: Shaping):
    if len(shaping) != diagram.n_segments:
        raise UsageError(f"shaping has {len(shaping)} segments, diagram has {diagram.n_segments}")


def _full_report(diagram: LinkDiagram, shaping: Shaping, tol: float) -> dict:
    shp = verify_shaping(diagram, shaping, tol)
    hol = verify_holonomy(diagram, shaping, tol)
    checks = {"shaping": shp.to_dict(), "holonomy": hol.to_dict()}
    oks = [shp.ok, hol.ok]
    # five-term needs non-degenerate crossings, four-term non-pinched ones
    kinds = [k for k, bad in (("five", shp.degenerate), ("four", shp.pinched)) if not any(bad)]
    for kind in kinds:
        rep = verify_gluing_equations(diagram, shaping, kind, tol)
        checks[f"gluing_{kind}"] = rep.to_dict()
        oks.append(rep.ok)
    if diagram.crossings and not any(shp.pinched) and not any(shp.degenerate):
        dec = eigenvalue_decoration(diagram, shaping, tol)
        checks["decoration"] = dec.to_dict()
        oks.append(dec.ok)
    return {"ok": all(oks), "tol": tol, "checks": checks}


def _emit(args, payload: dict):
    text = json.dumps(payload, indent=2 if args.pretty else None)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _solve(args, kind: str) -> int:
    diagram = _diagram(args)
    m = _m_values(args.m)
    if kind == "a" and m is None:
        raise UsageError("solve-a needs --m")
    solver = ShapingSolver(kind=kind, m=m, restarts=args.restarts, seed=args.seed,
                           newton_tol=args.newton_tol,
                           gauge=None if args.gauge is None else _gauge(args.gauge))
    solver.fit(diagram)
    out = solver.result_.to_dict()
    out["diagram"] = diagram.to_dict()
    out["gauge"] = solver.gauge_
    for sol, rec in zip(solver.solutions_, out["solutions"]):
        ell = [cjson(z) for z in eigenvalue_decoration(diagram, sol.shaping,
                                                       matrix_checks=False).ell]
        rec["ell"] = ell[0] if len(ell) == 1 else ell
    _emit(args, out)
    print(f"{solver.n_classes_} solution class(es) from {args.restarts} restarts "
          f"({solver.result_.converged} converged)", file=sys.stderr)
    if solver.n_classes_ == 0 and solver.result_.converged == 0:
        return 2
    return 0


def _gauge(text: str) -> tuple[int, ...]:
    try:
        g = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"bad gauge {text!r}; expected three segment ids like 0,1,2") from None
    if len(g) != 3:
        raise UsageError("the gauge needs exactly three segment ids")
    return g


def cmd_solve_b(args) -> int:
    return _solve(args, "b")


def cmd_solve_a(args) -> int:
    return _solve(args, "a")


def cmd_verify(args) -> int:
    diagram = _diagram(args)
    shaping = _load_shaping(args.shaping, args.index)
    _check_lengths(diagram, shaping)
    report = _full_report(diagram, shaping, args.tol)
    _emit(args, report)
    print("all checks passed" if report["ok"] else "some checks failed", file=sys.stderr)
    return 0


def cmd_decorate(args) -> int:
    diagram = _diagram(args)
    shaping = _load_shaping(args.shaping, args.index)
    _check_lengths(diagram, shaping)
    dec = eigenvalue_decoration(diagram, shaping, args.tol)
    _emit(args, dec.to_dict())
    print(", ".join(f"component {j}: m={c.m:.6g} ell={c.ell:.6g}"
                    for j, c in enumerate(dec.components)), file=sys.stderr)
    return 0


def cmd_octahedra(args) -> int:
    diagram = _diagram(args)
    shaping = _load_shaping(args.shaping, args.index)
    _check_lengths(diagram, shaping)
    rep = verify_gluing_equations(diagram, shaping, args.kind, args.tol)
    out = {"kind": args.kind, "tetrahedra": tetrahedra(diagram, shaping, args.kind),
           "gluing": rep.to_dict(), "volume": volume(diagram, shaping, args.kind)}
    _emit(args, out)
    print(f"{len(out['tetrahedra'])} tetrahedra, volume {out['volume']:.10g}", file=sys.stderr)
    return 0


def cmd_torus_knot(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    fam = TorusKnotFamily.from_root(args.n, args.m, args.root, args.p, args.q, args.r)
    diagram = torus_knot_diagram(args.n)
    shaping = torus_knot_shaping(fam, diagram)
    dec = eigenvalue_decoration(diagram, shaping, args.tol)
    out = {"n": args.n, "N": fam.N, "root": args.root, "Lambda": cjson(fam.Lambda),
           "riley_roots": [cjson(z) for z in riley_roots(args.n)],
           "p": cjson(fam.p), "q": cjson(fam.q), "r": cjson(fam.r), "m": cjson(fam.m),
           "diagram": diagram.to_dict(), "shaping": shaping.to_dict(),
           "b": [cjson(z) for z in shaping.b], "decoration": dec.to_dict(),
           "ell": cjson(dec.ell[0])}
    _emit(args, out)
    print(f"(2,{fam.N}) torus knot, Lambda={fam.Lambda:.6g}, ell={dec.ell[0]:.6g}",
          file=sys.stderr)
    return 0


def cmd_twist(args) -> int:
    rows = []
    for i in range(args.start, args.stop + 1):
        x, y = twist_solution(args.x1, args.x2, args.y1, args.y2, args.m, i, args.W)
        rows.append({"i": i, "x": cjson(x), "y": cjson(y)})
    _emit(args, {"values": rows})
    print(f"{len(rows)} twist values", file=sys.stderr)
    return 0


def cmd_export_system(args) -> int:
    diagram = _diagram(args)
    m = _m_values(args.m)
    gauge = None if args.gauge is None else _gauge(args.gauge)
    if args.kind == "a":
        if m is None:
            raise UsageError("the region system needs --m")
        system = build_a_system(diagram, m)
    elif args.kind == "ab":
        if m is None:
            raise UsageError("the lifted system needs --m")
        system = build_lifted_b_system(diagram, m, gauge=gauge)
    else:
        system = build_b_system(diagram, m, gauge=gauge)
    _emit(args, system.to_dict())
    print(f"{len(system.equations)} equations in {system.n_vars} unknowns", file=sys.stderr)
    return 0


def cmd_info(args) -> int:
    _emit(args, diagram_stats(_diagram(args)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkshapes",
                                     description="Shape coordinates for SL2(C)-structures "
                                                 "on link complements.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write JSON here instead of stdout")
    common.add_argument("--pretty", action="store_true", help="indent the JSON")
    common.add_argument("--tol", type=float, default=None,
                        help="verification tolerance (default from LINKSHAPES_TOL or 1e-9)")

    diag = argparse.ArgumentParser(add_help=False)
    diag.add_argument("--braid", help='braid word such as "a a a" or "1 -2 1 -2"')
    diag.add_argument("--diagram", help="diagram JSON file or inline JSON")

    solve = argparse.ArgumentParser(add_help=False)
    solve.add_argument("--m", help="meridian eigenvalue(s), comma separated per component")
    solve.add_argument("--restarts", type=int, default=200)
    solve.add_argument("--seed", type=int, default=42)
    solve.add_argument("--newton-tol", type=float, default=1e-10)
    solve.add_argument("--gauge", help="three segment ids fixing the b gauge, e.g. 0,1,2")

    shaped = argparse.ArgumentParser(add_help=False)
    shaped.add_argument("--shaping", required=True,
                        help="shaping JSON, torus-knot output or solve output")
    shaped.add_argument("--index", type=int, default=0,
                        help="which solution to use from a solve output")

    p = sub.add_parser("solve-b", parents=[common, diag, solve],
                       help="solve the segment equations")
    p.set_defaults(func=cmd_solve_b)
    p = sub.add_parser("solve-a", parents=[common, diag, solve],
                       help="solve the region equations")
    p.set_defaults(func=cmd_solve_a)
    p = sub.add_parser("verify", parents=[common, diag, shaped], help="run every verifier")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("decorate", parents=[common, diag, shaped],
                       help="meridian and longitude eigenvalues")
    p.set_defaults(func=cmd_decorate)
    p = sub.add_parser("octahedra", parents=[common, diag, shaped],
                       help="tetrahedron shapes, gluing report and volume")
    p.add_argument("--kind", choices=("five", "four"), default="five")
    p.set_defaults(func=cmd_octahedra)

    p = sub.add_parser("torus-knot", parents=[common],
                       help="closed-form shaping of a (2, 2n+1) torus knot")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=_complex, required=True)
    p.add_argument("--root", type=int, default=0, help="index into the sorted Riley roots")
    p.add_argument("--p", type=_complex, default=1.0)
    p.add_argument("--q", type=_complex, default=1.0 + 0.5j)
    p.add_argument("--r", type=_complex, default=0.7 - 0.4j)
    p.set_defaults(func=cmd_torus_knot)

    p = sub.add_parser("twist", parents=[common], help="b-values along a twist region")
    for name in ("x1", "x2", "y1", "y2"):
        p.add_argument(f"--{name}", type=_complex, required=True)
    p.add_argument("--m", type=_complex, default=1.0)
    p.add_argument("--W", type=_complex, default=None)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--stop", type=int, default=6)
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("export-system", parents=[common, diag],
                       help="dump a polynomial system as JSON")
    p.add_argument("--kind", choices=("b", "ab", "a"), default="b")
    p.add_argument("--m", help="meridian eigenvalue(s); omit or 'free' to leave them unknown")
    p.add_argument("--gauge")
    p.set_defaults(func=cmd_export_system)

    p = sub.add_parser("info", parents=[common, diag], help="diagram statistics")
    p.set_defaults(func=cmd_info)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "tol", None) is None:
        args.tol = default_tol()
    try:
        with np.errstate(all="ignore"):
            return args.func(args)
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ShapingError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
