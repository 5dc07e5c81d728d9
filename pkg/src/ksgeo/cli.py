"""Command-line front end.

Exit codes: 0 success / colorable, 1 uncolorable (or certificate rejected),
2 I/O error, 3 geometry validation failure, 4 precondition failure,
5 parse error, 6 undecided (``verify --mode propagate-only`` only).
"""

import argparse
import json
import os
import sys

from . import construct, csp, descent, formats, geom
from .errors import FormatError, GeometryError, NotDerivable, PreconditionError
from .tolerances import DEFAULT

EXIT_OK, EXIT_UNCOLORABLE, EXIT_IO, EXIT_GEOMETRY, EXIT_PRECONDITION, EXIT_PARSE = range(6)
EXIT_UNDECIDED = 6


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(args, human, data):
    if getattr(args, "json", False):
        print(json.dumps(data, sort_keys=True))
    else:
        print(human)


def _tolerances(args):
    over = {}
    for item in getattr(args, "tol", None) or []:
        key, _, val = item.partition("=")
        over[key] = val
    return DEFAULT.override(**over) if over else DEFAULT


def _summary(sys_):
    return {"points": len(sys_), "triples": len(sys_.triples),
            "pairs": len(sys_.pairs), "spans": len(sys_.spans)}


def _check_writable(*paths):
    for path in paths:
        if path and not os.path.isdir(os.path.dirname(os.path.abspath(path))):
            raise FileNotFoundError(f"no directory for output {path!r}")


def cmd_construct(args):
    _check_writable(args.out, args.svg)
    tol = _tolerances(args)
    system = construct.build_system(args.step_deg, tol)
    bad = construct.validate_geometry(system, tol)
    if bad:
        for msg in bad[:20]:
            print(msg, file=sys.stderr)
        return EXIT_GEOMETRY
    _write(args.out, formats.write_system(system))
    if args.svg:
        circ = construct.build_circuit(args.step_deg)
        g = construct.build_gadget(circ.points[0], circ.points[1], args.step_deg, tol=tol)
        # circuit points on or below the gadget frame's equator cannot be drawn
        shown = {lab: v for lab, v in zip(circ.labels, circ.points)
                 if abs(g.frame.local(v)[2]) > 1e-6}
        shown = {lab: v if g.frame.local(v)[2] > 0 else -v for lab, v in shown.items()}
        _write(args.svg, formats.render_svg(g.frame, shown, [g.chain], tol=tol))
    _emit(args, f"wrote {args.out}: {system.summary()}", _summary(system))
    return EXIT_OK


def _coloring_text(system, col):
    return " ".join(f"{system.label(i)}={'R' if v else 'G'}" for i, v in enumerate(col))


def cmd_verify(args):
    system = formats.parse_system(_read(args.system))
    bad = construct.validate_geometry(system)
    if bad:
        for msg in bad[:20]:
            print(msg, file=sys.stderr)
        return EXIT_GEOMETRY
    out = {"mode": args.mode, **_summary(system)}
    if args.mode == "brute":
        n = csp.count_colorings(system)
        out.update(verdict="VALID" if n else "UNCOLORABLE", colorings=n)
        _emit(args, f"{out['verdict']} ({n} valid colorings)", out)
        code = EXIT_OK if n else EXIT_UNCOLORABLE
    elif args.mode == "propagate-only":
        res = csp.propagate(system)
        if isinstance(res, csp.Conflict):
            out.update(verdict="UNCOLORABLE", conflict=res.constraint)
            code = EXIT_UNCOLORABLE
        elif res.is_total and csp.is_valid_coloring(system, res.values):
            out.update(verdict="VALID", coloring=_coloring_text(system, res.values))
            code = EXIT_OK
        else:
            out.update(verdict="UNDECIDED")
            code = EXIT_UNDECIDED
        _emit(args, out["verdict"], out)
    else:
        res = csp.solve(system)
        if res.colorable:
            out.update(verdict="VALID", coloring=_coloring_text(system, res.coloring.values))
            _emit(args, f"VALID\n{out['coloring']}", out)
            code = EXIT_OK
        else:
            out.update(verdict="UNCOLORABLE")
            _emit(args, "UNCOLORABLE", out)
            code = EXIT_UNCOLORABLE
    if args.certificate and code == EXIT_UNCOLORABLE:
        corners = system.corner_triple()
        try:
            if corners is None:
                raise NotDerivable("system document names no circuit")
            cert = csp.prove_paper_style(system, corners, system.circuit)
        except NotDerivable as exc:
            print(f"certificate: NotDerivable ({exc})", file=sys.stderr)
        else:
            _write(args.certificate, formats.write_certificate(cert))
            print(f"certificate: wrote {args.certificate} ({cert.n_steps} steps)",
                  file=sys.stderr)
    return code


def cmd_export_cnf(args):
    system = formats.parse_system(_read(args.system))
    text = formats.write_dimacs(csp.to_cnf(system))
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_plan_descent(args):
    path = descent.plan(geom.STANDARD, (args.from_lat, args.from_lon),
                        (args.to_lat, args.to_lon))
    problems = descent.validate(path)
    if problems:
        for i, msg in problems:
            print(f"point {i}: {msg}", file=sys.stderr)
        return EXIT_GEOMETRY
    if args.json:
        print(json.dumps(formats.path_to_doc(path), sort_keys=True))
        return EXIT_OK
    print(f"{len(path)} steps")
    for i, p in enumerate(path.points):
        lat, lon = geom.vec_to_latlon(geom.STANDARD, p)
        beta = f"  beta={path.steps[i - 1].beta_deg:+.6f}" if i else ""
        print(f"{i:3d}  lat={lat:.9f}  lon={lon:.9f}{beta}")
    return EXIT_OK


def cmd_derive(args):
    text = _read(args.vectors)
    if text.lstrip().startswith("{"):
        base = formats.parse_system(text)
        ids, vecs = list(base.labels), list(base.points)
    else:
        ids, vecs = formats.parse_vectors(text)
    system = formats.derive_constraints(vecs, not args.no_triples, not args.no_pairs,
                                        not args.no_spans, labels=ids, tol=_tolerances(args))
    _write(args.out, formats.write_system(system))
    _emit(args, f"wrote {args.out}: {system.summary()}", _summary(system))
    return EXIT_OK


def cmd_check_cert(args):
    system = formats.parse_system(_read(args.system))
    cert = formats.parse_certificate(_read(args.certificate))
    res = csp.check_certificate(system, cert)
    if res.ok:
        _emit(args, "ok", {"ok": True})
        return EXIT_OK
    _emit(args, f"invalid at step {'/'.join(map(str, res.path))}: {res.message}",
          {"ok": False, "path": list(res.path), "message": res.message})
    return EXIT_UNCOLORABLE


def build_parser():
    p = argparse.ArgumentParser(prog="ksgeo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def tol_opt(sp):
        sp.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help="tolerance override, e.g. orth=1e-10")

    sp = sub.add_parser("construct", help="build the circuit-of-gadgets system")
    sp.add_argument("--step-deg", type=float, default=30.0)
    sp.add_argument("--out", required=True)
    sp.add_argument("--svg")
    sp.add_argument("--json", action="store_true")
    tol_opt(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="decide colorability of a system document")
    sp.add_argument("system")
    sp.add_argument("--mode", choices=("propagate-only", "full", "brute"), default="full")
    sp.add_argument("--certificate", metavar="OUT")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("export-cnf", help="write DIMACS CNF")
    sp.add_argument("system")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_export_cnf)

    sp = sub.add_parser("plan-descent", help="plan great-circle descents (standard frame)")
    for name in ("from-lat", "from-lon", "to-lat", "to-lon"):
        sp.add_argument(f"--{name}", type=float, required=True)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_plan_descent)

    sp = sub.add_parser("derive", help="derive constraints from a vector list")
    sp.add_argument("vectors")
    sp.add_argument("--out", required=True)
    sp.add_argument("--no-triples", action="store_true")
    sp.add_argument("--no-pairs", action="store_true")
    sp.add_argument("--no-spans", action="store_true")
    sp.add_argument("--json", action="store_true")
    tol_opt(sp)
    sp.set_defaults(func=cmd_derive)

    sp = sub.add_parser("check-cert", help="replay a certificate against a system")
    sp.add_argument("system")
    sp.add_argument("certificate")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check_cert)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GeometryError as exc:
        print(f"geometry error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except (PreconditionError, KeyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
