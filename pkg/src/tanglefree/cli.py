"""Command-line entry point: ``tanglefree <command> [flags]``.

Exit status: 0 success, 1 bad input, 2 inconclusive within budget,
3 a certified surface failed a check its certificate implies.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from . import geodesics as G
from . import graphs, hyperbolic, tangle, volumes
from .domain import BudgetExceeded, DomainFailure
from .quadrature import QuadratureError
from .surfaces import FNCoordinates, SurfaceError, build_surface, load_surface

SCHEMA_VERSION = 1
EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_INCONSISTENT = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _surface_flags(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--surface", help="surface file (JSON)")
    src.add_argument("--fn", help='Fenchel-Nielsen data, e.g. "g=2;l=2,2,2;t=0,0,0"')


def _common(p):
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="directory for report files (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tanglefree", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="validate a surface and print its summary")
    _surface_flags(p)
    _common(p)

    p = sub.add_parser("enum", help="closed geodesics up to length L (CSV)")
    _surface_flags(p)
    _common(p)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--max-word", type=int, default=8)

    for name, helptext in (("certify", "witness or depth-stamped certificate at L"),
                           ("collars", "collar, intersection and ball checks at L")):
        p = sub.add_parser(name, help=helptext)
        _surface_flags(p)
        _common(p)
        p.add_argument("--L", type=float, required=True)
        p.add_argument("--max-word", type=int, default=8)
        p.add_argument("--cutoff", type=float, help="enumeration cutoff (default 2L)")
        p.add_argument("--points", type=int, default=20 if name == "certify" else 100)

    p = sub.add_parser("wp-bound", help="Markov bound on being tangled, over a grid of a")
    _common(p)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--a", default="0.1,0.25,0.5,0.75,0.9", help="comma-separated values of a")
    p.add_argument("--volumes", help="extra volume table (default: the shipped table)")
    p.add_argument("--mode", choices=("table", "asymptotic"), default="table")
    p.add_argument("--constants", default="", help='for asymptotic mode, e.g. "C=1,C0=1,C1=1"')

    p = sub.add_parser("graph", help="tangle-free fraction of random regular graphs (CSV)")
    _common(p)
    p.add_argument("--n", required=True, help="comma-separated vertex counts")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--a", type=float, default=0.2)
    p.add_argument("--trials", type=int, default=200)

    p = sub.add_parser("formulas", help="evaluate closed-form formulas")
    p.add_argument("--bavard", type=int, metavar="G")
    p.add_argument("--figure-eight", metavar="L1,L2,L3")
    p.add_argument("--collar", type=float, metavar="L")
    p.add_argument("--fermi-volume", metavar="L,W")
    p.add_argument("--fermi-length", metavar="L,W")
    p.add_argument("--trace", type=float, metavar="T", help="translation length for trace T")
    p.add_argument("--petri", action="store_true", help="the constant int_1^2 (e^t + e^-t - 2)/t dt")
    p.add_argument("--json", action="store_true")
    return ap


# --- reports --------------------------------------------------------------------


def _clean(x):
    """JSON-safe copy: non-finite floats become null, tuples become lists."""
    if isinstance(x, float):
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return _clean(x.item())
    return x


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def payload_hash(result) -> str:
    return hashlib.sha256(json.dumps(_clean(result), sort_keys=True, allow_nan=False).encode()).hexdigest()


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("out",)}


def make_report(args, result: dict, inputs: dict, wall: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "tanglefree",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "inputs": inputs,
        "result": result,
        "payload_sha256": payload_hash(result),
        "wall_time_s": wall,  # outside the hashed payload
    }


def _emit(args, report: dict, extra_files: dict | None = None, stdout_text: str | None = None):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}.json").write_text(dumps(report), encoding="utf-8")
        for name, text in (extra_files or {}).items():
            (out / name).write_text(text, encoding="utf-8")
        print(f"wrote {out / (args.command + '.json')}")
    else:
        sys.stdout.write(stdout_text if stdout_text is not None else dumps(report))


def _check_common(args):
    tol = getattr(args, "tol", None)
    if tol is not None and not 0 < tol < 1e-3:
        raise InputError("--tol must lie in (0, 1e-3)")
    if getattr(args, "threads", 1) < 1:
        raise InputError("--threads must be positive")
    for name in ("L", "cutoff"):
        v = getattr(args, name, None)
        if v is not None and not v > 0:
            raise InputError(f"--{name} must be positive")
    if getattr(args, "max_word", 1) < 1:
        raise InputError("--max-word must be positive")


def _surface(args):
    if args.surface:
        path = Path(args.surface)
        if not path.is_file():
            raise InputError(f"surface file not found: {path}")
        data = path.read_bytes()
        return load_surface(path), {"surface_file": str(path), "surface_file_sha256": hashlib.sha256(data).hexdigest()}
    try:
        fn = FNCoordinates.parse(args.fn)
    except (ValueError, KeyError) as exc:
        raise InputError(f"bad --fn value: {exc}") from None
    return build_surface(fn), {"fn": args.fn}


# --- commands -------------------------------------------------------------------


def cmd_build(args):
    surface, inputs = _surface(args)
    inputs["surface_hash"] = surface.fingerprint()
    dom = surface.domain
    result = dict(surface.summary(), domain={"faces": len(dom.faces), "radius": dom.radius, "area": dom.area})
    return result, inputs, {}, None, EXIT_OK


def cmd_enum(args):
    surface, inputs = _surface(args)
    inputs["surface_hash"] = surface.fingerprint()
    inv = G.enumerate_geodesics(surface, args.L, max_word=args.max_word)
    csv_text = inv.to_csv()
    prim = inv.primitive()
    result = {
        "cutoff": inv.L,
        "scheme_version": G.SCHEME_VERSION,
        "classes": len(inv.geodesics),
        "primitive": len(prim),
        "simple": sum(1 for g in prim if g.self_intersections == 0),
        "systole": prim[0].length if prim else None,
        "inventory_sha256": hashlib.sha256(csv_text.encode()).hexdigest(),
    }
    return result, inputs, {"inventory.csv": csv_text}, csv_text, EXIT_OK


def _certify(args, n_points):
    surface, inputs = _surface(args)
    inputs["surface_hash"] = surface.fingerprint()
    cutoff = args.cutoff if args.cutoff else 2 * args.L
    inv = G.enumerate_geodesics(surface, cutoff, max_word=args.max_word)
    cert = tangle.certify_tangle_free(surface, args.L, inv, n_points=n_points, seed=args.seed)
    result = dict(cert.as_dict(), surface_hash=surface.fingerprint(), tolerance=args.tol)
    if cert.witness is not None:
        f8 = tangle.witness_to_figure_eight(surface, cert.witness)
        bound = 2 * args.L + 2 * math.pi
        result["figure_eight"] = {"word": f8.word_text(), "length": f8.length, "bound": bound,
                                  "margin": bound - f8.length,
                                  "self_intersections": f8.self_intersections}
        if cert.witness.kind == "pants":
            # the sharper constant available for pants witnesses
            result["figure_eight"]["margin_log6"] = 2 * args.L + 2 * math.log(6) - f8.length
    return surface, inv, cert, result, inputs


def cmd_certify(args):
    _, _, cert, result, inputs = _certify(args, args.points)
    code = EXIT_OK if cert.consistent() else EXIT_INCONSISTENT
    return result, inputs, {}, None, code


def cmd_collars(args):
    surface, inv, cert, result, inputs = _certify(args, args.points)
    if cert.tangle_free:
        prim = [g for g in inv.primitive() if g.length < args.L]
        result["collars"] = [tangle.improved_collar_check(surface, g, args.L).as_dict() for g in prim]
    else:
        result["collars"] = {"skipped": True, "reason": "surface is not certified tangle-free"}
    code = EXIT_OK if cert.consistent() else EXIT_INCONSISTENT
    return result, inputs, {}, None, code


def _constants(text: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, val = part.partition("=")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise InputError(f"bad constant {part!r}") from None
    return out


def cmd_wp_bound(args):
    table = volumes.shipped_table()
    inputs = {"volume_table": "shipped"}
    if args.volumes:
        path = Path(args.volumes)
        if not path.is_file():
            raise InputError(f"volume table not found: {path}")
        extra = volumes.load_volume_table(path)
        for sig, p in extra.entries.items():
            if sig in table and table.get(*sig).coeffs != p.coeffs:
                raise InputError(f"{path}: V{sig} conflicts with the shipped table")
            table.entries[sig] = p
        inputs = {"volume_table": str(path), "volume_table_sha256": hashlib.sha256(path.read_bytes()).hexdigest()}
    grid = _floats(args.a)
    if not grid or any(not 0 < a < 1 for a in grid):
        raise InputError("--a values must lie in (0, 1)")
    consts = _constants(args.constants)
    if args.mode == "asymptotic" and not {"C", "C0", "C1"} <= set(consts):
        raise InputError("asymptotic mode needs --constants C=...,C0=...,C1=...")
    rows = [volumes.tangled_probability_bound(args.g, a, table, args.mode, consts or None) for a in sorted(grid)]
    result = {
        "genus": args.g,
        "mode": args.mode,
        "rows": rows,
        "volume_monotone": volumes.volume_monotone_check(table),
        "growth_constant": volumes.measured_growth_constant(table),
        "split_constants": {str(n): volumes.measured_split_constant(table, n) for n in (0, 1)},
    }
    return result, inputs, {}, None, EXIT_OK


def cmd_graph(args):
    ns = _ints(args.n)
    if not ns or any(n <= 0 for n in ns):
        raise InputError("--n needs positive vertex counts")
    if any(n * args.d % 2 for n in ns):
        raise InputError("n*d must be even")
    if args.trials < 0:
        raise InputError("--trials must be non-negative")
    rows = graphs.tangle_phase(ns, args.d, args.a, args.trials, args.seed, workers=args.threads)
    csv_text = graphs.phase_to_csv(rows)
    result = {"d": args.d, "a": args.a, "rows": rows}
    return result, {}, {"graph.csv": csv_text}, "# schema_version=1\n" + csv_text, EXIT_OK


def cmd_formulas(args):
    vals = {}
    if args.bavard is not None:
        vals[f"bavard_bound({args.bavard})"] = hyperbolic.bavard_bound(args.bavard)
    if args.figure_eight:
        ls = _floats(args.figure_eight)
        if len(ls) != 3:
            raise InputError("--figure-eight needs three lengths")
        vals["figure_eight_length({},{},{})".format(*ls)] = hyperbolic.figure_eight_length(*ls)
    if args.collar is not None:
        vals[f"standard_collar_width({args.collar})"] = hyperbolic.standard_collar_width(args.collar)
    for flag, fn in (("fermi_volume", hyperbolic.fermi_cylinder_volume), ("fermi_length", hyperbolic.fermi_boundary_length)):
        text = getattr(args, flag)
        if text:
            lw = _floats(text)
            if len(lw) != 2:
                raise InputError(f"--{flag.replace('_', '-')} needs L,W")
            vals[f"{fn.__name__}({lw[0]},{lw[1]})"] = fn(*lw)
    if args.trace is not None:
        vals[f"length_from_trace({args.trace})"] = hyperbolic.length_from_trace(args.trace)
    if args.petri:
        vals["petri_constant"] = volumes.mirzakhani_petri_constant()
    if not vals:
        raise InputError("no formula requested")
    if args.json:
        text = dumps({"schema_version": SCHEMA_VERSION, "values": vals})
    elif len(vals) == 1:
        text = f"{next(iter(vals.values())):.17g}\n"
    else:
        text = "".join(f"{k} = {v:.17g}\n" for k, v in vals.items())
    sys.stdout.write(text)
    return None


COMMANDS = {
    "build": cmd_build,
    "enum": cmd_enum,
    "certify": cmd_certify,
    "collars": cmd_collars,
    "wp-bound": cmd_wp_bound,
    "graph": cmd_graph,
}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    t0 = time.perf_counter()
    try:
        _check_common(args)
        if args.command == "formulas":
            cmd_formulas(args)
            return EXIT_OK
        result, inputs, files, text, code = COMMANDS[args.command](args)
    except (InputError, SurfaceError, volumes.TableError, volumes.MissingVolume, FileNotFoundError,
            hyperbolic.DomainError, tangle.PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, DomainFailure, G.Inconclusive, QuadratureError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except tangle.InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    report = make_report(args, result, inputs, time.perf_counter() - t0)
    _emit(args, report, files, text)
    if code == EXIT_INCONSISTENT:
        print("internal inconsistency: a certificate consequence failed", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
