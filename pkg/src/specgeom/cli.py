"""Command-line entry point: tables, certificates and experiments written to flat files.

Every file-emitting command writes its CSV/JSON-lines outputs to ``--out``
and finishes with ``manifest.json``.  Exit codes: 0 success, 1 a verification
check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from . import ball_spectrum as bs
from . import bounds, experiments
from .errors import DomainError, SpecGeomError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="specgeom", description="Dirichlet eigenvalue bounds, tables and planar experiments.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, out_required=True):
        sp.add_argument("--out", type=Path, required=out_required, help="output directory")
        sp.add_argument("--tol", type=float, default=None, help="numeric tolerance override")

    tables = sub.add_parser("tables", help="component-count tables")
    tsub = tables.add_subparsers(dest="table", parser_class=_Parser)
    tsub.required = True
    t2 = tsub.add_parser("theorem2v", help="boundary-measure constraint, k <= m+1")
    t2.add_argument("--m-max", type=int, required=True)
    common(t2)
    c5 = tsub.add_parser("corollary5", help="Lebesgue (beta=m) or torsion (beta=m+2) constraint")
    c5.add_argument("--beta", choices=["m", "m+2"], required=True)
    c5.add_argument("--m-max", type=int, required=True)
    common(c5)

    bnd = sub.add_parser("bounds", help="scale-free eigenvalue estimates")
    bsub = bnd.add_subparsers(dest="bound", parser_class=_Parser)
    bsub.required = True
    l2 = bsub.add_parser("lambda2star")
    l2.add_argument("--m", type=int, required=True)
    common(l2, out_required=False)

    cert = sub.add_parser("certify", help="certificates")
    csub = cert.add_subparsers(dest="certificate", parser_class=_Parser)
    csub.required = True
    bnm = csub.add_parser("ball-not-minimiser")
    g = bnm.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--asymptotic", action="store_true")
    common(bnm, out_required=False)

    cf = sub.add_parser("configs", help="admissible component configurations")
    cf.add_argument("--m", type=int, required=True)
    cf.add_argument("--k", type=int, required=True)
    cf.add_argument("--beta", type=float, required=True)
    cf.add_argument("--refined", action="store_true")
    common(cf, out_required=False)

    ex = sub.add_parser("experiment", help="numerical experiments")
    ex.add_argument("name", choices=["ellipse", "lemma6", "quadrature"])
    ex.add_argument("--h", type=float, default=0.05, help="target mesh size (FEM experiments)")
    ex.add_argument("--t-values", type=_float_list, default=[0.02, 0.04, 0.06, 0.08])
    ex.add_argument("--eps-values", type=_float_list, default=[0.02, 0.05, 0.1])
    ex.add_argument("--radius", type=float, default=1.0)
    common(ex)

    op = sub.add_parser("optimize", help="convex polygon search for perimeter^2 * lambda_k")
    op.add_argument("--k", type=int, required=True)
    op.add_argument("--vertices", type=int, default=16)
    op.add_argument("--iters", type=int, default=10)
    op.add_argument("--seed", type=int, default=0)
    op.add_argument("--h", type=float, default=0.03)
    common(op)

    tc = sub.add_parser("torsion-check", help="FEM torsional rigidity and the eigenvalue lower bound")
    tc.add_argument("--shape", choices=["disk", "square"], required=True)
    tc.add_argument("--h", type=float, default=0.05)
    tc.add_argument("--k-max", type=int, default=50)
    common(tc)
    return p


# --------------------------------------------------------------------------
# command implementations; each returns (passed, outputs, parameters)


def _report_rows(rows):
    return [[r.row()[f] for f in bounds.REPORT_FIELDS] for r in rows]


def _cmd_tables(args, out: Path):
    tol = args.tol or bounds.DEFAULT_TOL
    if args.table == "theorem2v":
        rows = bounds.theorem2v_table(args.m_max, tol)
        name = "theorem2v.csv"
    else:
        kind = "LebesgueMeasure" if args.beta == "m" else "TorsionalRigidity"
        rows = bounds.corollary5_tables(kind, args.m_max, tol)
        name = f"corollary5_beta_{'m' if args.beta == 'm' else 'm_plus_2'}.csv"
    path = out / name
    experiments.write_csv(path, bounds.REPORT_FIELDS, _report_rows(rows))
    passed = not any(r.err_flag for r in rows)
    return passed, [path], {"table": args.table, "m_max": args.m_max, "tol": tol}


def _cmd_bounds(args, out: Path | None):
    est = bounds.lambda2_star_bounds(args.m)
    rec = {"m": est.dimension, "lower": est.lower, "upper": est.upper, "gap": est.gap, "expansion_coeff": est.expansion_coeff}
    print(json.dumps(rec, sort_keys=True))
    outputs = []
    if out is not None:
        path = out / "lambda2star.jsonl"
        experiments.write_jsonl(path, [rec])
        outputs.append(path)
    return est.lower <= est.upper, outputs, {"m": args.m}


def _cmd_certify(args, out: Path | None):
    tol = args.tol or bounds.DEFAULT_TOL
    if args.asymptotic:
        rep = bounds.asymptotic_omega_bound()
        closed = bounds.closed_form_asymptotic_omega()
        ok = rep.applicable and rep.omega_max == closed
        rec = {
            "certificate": "asymptotic",
            "m": rep.dimension,
            "omega_max": rep.omega_max,
            "closed_form_omega": closed,
            "ball_excluded": bounds.ball_not_minimiser_check(rep.dimension),
        } | rep.extras
        params = {"asymptotic": True}
    else:
        ok = bounds.ball_not_minimiser_check(args.m, tol)
        rec = {"certificate": "ball-not-minimiser", "m": args.m, "ball_excluded": ok}
        if args.m < bounds.ASYMPTOTIC_M:
            rec["margin"] = bounds.ball_not_minimiser_margin(args.m, tol)
        params = {"m": args.m, "tol": tol}
    print("true" if ok else "false")
    outputs = []
    if out is not None:
        path = out / "certificate.jsonl"
        experiments.write_jsonl(path, [rec])
        outputs.append(path)
    return ok, outputs, params


def _cmd_configs(args, out: Path | None):
    confs = bounds.enumerate_configurations(args.m, args.k, args.beta, refined=args.refined)
    for c in confs:
        print(f"{c.k1},{c.k2}")
    outputs = []
    if out is not None:
        path = out / "configs.csv"
        experiments.write_csv(path, ["k1", "k2", "omega"], [[c.k1, c.k2, c.omega] for c in confs])
        outputs.append(path)
    return True, outputs, {"m": args.m, "k": args.k, "beta": args.beta, "refined": args.refined}


def _cmd_experiment(args, out: Path):
    if args.name == "quadrature":
        tol = args.tol or 1e-8
        rep = experiments.quadrature_report(tol)
        rows = [["ratio", rep["ratio"]], ["orthogonality_integral", rep["orthogonality_integral"]]]
        rows += [[k, v] for k, v in rep["angular_integrals"].items()]
        header = ["quantity", "value"]
        params = {"tol": tol}
    elif args.name == "ellipse":
        cfg = experiments.EllipseConfig(tuple(args.t_values), args.h)
        rep = experiments.ellipse_experiment(cfg).report()
        header = ["t", "perimeter", "lambda2", "f", "ratio"]
        rows = [[p["t"], p["perimeter"], p["lambda2"], p["f"], p["ratio"]] for p in rep["points"]]
        params = {"t_values": list(cfg.t_values), "h": cfg.target_h}
    else:
        tol = args.tol or 1e-8
        cfg = experiments.OverlapConfig(args.radius, tuple(args.eps_values), args.h)
        rep = experiments.lemma6_experiment(cfg, tol).report()
        header = ["eps", "lambda2_union", "lambda1_half"]
        rows = [[p["eps"], p["lambda2_union"], p["lambda1_half"]] for p in rep["points"]]
        params = {"R": cfg.R, "eps_values": list(cfg.eps_values), "h": cfg.target_h, "tol": tol}
    jpath = out / f"{args.name}.jsonl"
    cpath = out / f"{args.name}.csv"
    experiments.write_jsonl(jpath, [rep])
    experiments.write_csv(cpath, header, rows)
    print(json.dumps({"experiment": args.name, "passed": rep["passed"], "checks": rep["checks"]}, sort_keys=True))
    return rep["passed"], [jpath, cpath], params


def _cmd_optimize(args, out: Path):
    state = experiments.optimize_lambda_k(args.k, args.vertices, args.iters, args.seed, target_h=args.h)
    rep = experiments.optimizer_report(state, args.k, args.seed)
    jpath = out / "optimize.jsonl"
    hpath = out / "optimize_history.csv"
    vpath = out / "optimize_vertices.csv"
    experiments.write_jsonl(jpath, [rep])
    experiments.write_csv(hpath, ["step", "objective"], [[i, f] for i, f in enumerate(state.history)])
    experiments.write_csv(vpath, ["vertex", "x", "y"], [[i, float(x), float(y)] for i, (x, y) in enumerate(state.vertices)])
    print(json.dumps({"objective": state.objective, "passed": rep["passed"], "checks": rep["checks"]}, sort_keys=True))
    params = {"k": args.k, "vertices": args.vertices, "iters": args.iters, "seed": args.seed, "h": args.h}
    return rep["passed"], [jpath, hpath, vpath], params


def _cmd_torsion(args, out: Path):
    rep = experiments.torsion_report(args.shape, args.h, args.k_max)
    jpath = out / f"torsion_{args.shape}.jsonl"
    cpath = out / f"torsion_{args.shape}_bound.csv"
    experiments.write_jsonl(jpath, [rep])
    experiments.write_csv(cpath, ["k", "lambda_k", "lower_bound"], rep["bound_rows"])
    print(json.dumps({"shape": args.shape, "passed": rep["passed"], "checks": rep["checks"]}, sort_keys=True))
    return rep["passed"], [jpath, cpath], {"shape": args.shape, "h": args.h, "k_max": args.k_max}


_DISPATCH = {
    "tables": _cmd_tables,
    "bounds": _cmd_bounds,
    "certify": _cmd_certify,
    "configs": _cmd_configs,
    "experiment": _cmd_experiment,
    "optimize": _cmd_optimize,
    "torsion-check": _cmd_torsion,
}


def write_manifest(out: Path, command: str, parameters: dict, outputs: list[Path], wall: float) -> Path:
    """Write ``manifest.json`` after checking every listed output exists."""
    missing = [str(p) for p in outputs if not Path(p).exists()]
    if missing:
        raise SpecGeomError(f"outputs missing before manifest: {missing}")
    manifest = {
        "command": command,
        "parameters": parameters,
        "tool_version": __version__,
        "outputs": [str(p) for p in outputs],
        "wall_time_seconds": wall,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    out = args.out
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    try:
        passed, outputs, params = _DISPATCH[args.command](args, out)
    except DomainError as exc:
        print(f"specgeom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecGeomError as exc:
        print(f"specgeom: failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if out is not None:
        write_manifest(out, " ".join(["specgeom", *argv]), params, outputs, time.perf_counter() - start)
    return EXIT_OK if passed else EXIT_FAILED


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
