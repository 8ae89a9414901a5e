"""Command-line harness for batch experiments.

Subcommands: solve, walk, fni-scan, mu-estimate, kway, cover,
trivialize, diagram, tps-check, config-scan, constants, ck-search.
Families come from bundled fixtures (--family) or JSON config files
(--config); every run writes deterministic JSON reports (plus CSV traces
where applicable) into --out, embedding the exact lambda-feasibility
verdict for the run's lambda.  Errors exit nonzero after writing a
machine-readable error report.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import combinatorics as combi
from . import constants as consts
from . import diagrams, families, metric, walks
from .errors import ConfigError, ContragridError
from .grid import OrbitGrid, check_fni, estimate_mu, mu_infinity_table, write_rho_csv

_FLOAT_FMT = "%.17g"


def _ints(text: str) -> tuple:
    return tuple(int(t) for t in text.split(","))


def _floats(text: str) -> tuple:
    return tuple(float(t) for t in text.split(","))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is combi.INFINITE:
        return "INFINITE"
    if obj is diagrams.NONCANONICAL:
        return "NONCANONICAL"
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_csv(path: Path, header: list, rows: list) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    _FLOAT_FMT % v if isinstance(v, float) else str(v) for v in row
                )
                + "\n"
            )


def _run_lambda(args, family=None) -> Fraction:
    if getattr(args, "lam", None):
        return Fraction(args.lam)
    if family is not None:
        return Fraction(family.lam)
    return consts.LAMBDA_STAR


def _feasibility(lam: Fraction) -> dict:
    ledger = consts.build_ledger()
    return consts.verdict_to_json_dict(consts.check_lambda(ledger, lam))


def _load_family(args, require_contractive: bool = True):
    """Family + base point from --config or a bundled id, axiom-checked.

    ``require_contractive=False`` skips the pairwise contraction check
    (used by the power-witness solver, whose premise is that some power
    contracts, not the operator itself); commutation and metric axioms
    are still verified.
    """
    if getattr(args, "config", None):
        fam = metric.load_family_config(args.config)
        base = np.zeros(fam.space.dim)
        fam_id = Path(args.config).name
    else:
        name = getattr(args, "family", None) or "half3"
        fam, base = families.get_bundled(name)
        fam_id = name
    if getattr(args, "lam", None):
        fam = metric.make_family(fam.space, fam.ops, float(Fraction(args.lam)))
    rng = np.random.default_rng(args.seed)
    dim = fam.space.dim
    sample = [
        (rng.standard_normal(dim) * 2.0, rng.standard_normal(dim) * 2.0)
        for _ in range(6)
    ]
    report = metric.validate_family_axioms(fam, sample)
    contraction_ok = report.n_contraction_failures == 0 or not require_contractive
    axioms_ok = (
        report.max_commute_residual <= metric.TOL_COMMUTE
        and report.max_metric_violation <= metric.TOL_METRIC
    )
    if not (contraction_ok and axioms_ok):
        raise ConfigError(
            f"family '{fam_id}' failed axiom validation: "
            f"{report.n_contraction_failures} contraction failures, "
            f"max commute residual {report.max_commute_residual:.3e}"
        )
    if getattr(args, "p0", None):
        base = np.asarray(_floats(args.p0), dtype=np.float64)
    return fam_id, fam, base


# ---------------------------------------------------------------------------
# Handlers (each returns the report payload; files beyond the report are
# written here and listed under "artifacts")
# ---------------------------------------------------------------------------

def _cmd_solve(args, out: Path) -> dict:
    fam_id, fam, base = _load_family(args, require_contractive=not args.gbct)
    tol = args.tol if args.tol is not None else 1e-10
    trace = []

    def observe(step, direction, point):
        resids = [fam.distance(f(point), point) for f in fam.ops]
        trace.append([step, direction] + [float(r) for r in resids])

    if args.gbct:
        f = fam.ops[0]
        fixed = walks.gbct_orbit_solve(
            f, args.gbct, fam.lam, base, tol=tol,
            distance=fam.distance, on_step=observe,
        )
    else:
        fixed = walks.common_fixed_point(fam, base, tol=tol, on_step=observe)
    residuals = [float(fam.distance(f(fixed), fixed)) for f in fam.ops]
    header = ["step", "direction"] + [f"residual_{i+1}" for i in range(fam.n)]
    _write_csv(out / "solve-trace.csv", header, trace)
    return {
        "family": fam_id,
        "lambda": float(fam.lam),
        "tol": tol,
        "mode": "gbct" if args.gbct else "common",
        "fixed_point": [float(v) for v in fixed],
        "residuals": residuals,
        "n_steps": len(trace),
        "artifacts": ["solve-trace.csv"],
    }


def _cmd_walk(args, out: Path) -> dict:
    fam_id, fam, base = _load_family(args)
    grid = OrbitGrid(fam, base)
    w = args.window if args.window is not None else 4
    rng = np.random.default_rng(args.seed)
    src = _ints(args.src) if args.src else tuple(int(v) for v in rng.integers(0, w + 1, fam.n))
    dst = _ints(args.dst) if args.dst else tuple(int(v) for v in rng.integers(0, w + 1, fam.n))
    eps = args.tol if args.tol is not None else 1e-12
    walk = walks.greedy_walk(grid, src, dst, epsilon=eps)
    rows = [
        [k + 1, s.direction, float(s.distance_to_target)]
        for k, s in enumerate(walk.steps)
    ]
    _write_csv(out / "walk-trace.csv", ["step", "direction", "distance_to_target"], rows)
    return {
        "family": fam_id,
        "from": list(src),
        "to": list(dst),
        "epsilon": eps,
        "converged": walk.converged,
        "n_steps": len(walk.steps),
        "final_index": list(walk.final_index) if walk.steps else list(src),
        "premise_failure": (
            [list(p) for p in walk.premise_failure] if walk.premise_failure else None
        ),
        "artifacts": ["walk-trace.csv"],
    }


def _cmd_fni_scan(args, out: Path) -> dict:
    fam_id, fam, base = _load_family(args)
    grid = OrbitGrid(fam, base)
    w = args.window if args.window is not None else 4
    tol = args.tol if args.tol is not None else metric.TOL_CONTRACT
    rep = check_fni(grid, w, tol=tol)
    return {
        "family": fam_id,
        "window": w,
        "n_pairs": rep.n_pairs,
        "clean": rep.clean,
        "violations": [
            {"a": list(v.a), "b": list(v.b), "lhs": v.lhs, "rhs": v.rhs}
            for v in rep.violations
        ],
        "premise_failures": [
            {"a": list(p.a), "b": list(p.b)} for p in rep.premise_failures
        ],
    }


def _cmd_mu_estimate(args, out: Path) -> dict:
    fam_id, fam, base = _load_family(args)
    grid = OrbitGrid(fam, base)
    w = args.window if args.window is not None else 4
    est = estimate_mu(grid, w)
    table = mu_infinity_table(grid, w, args.kmax)
    write_rho_csv(grid, w, out / "rho.csv")
    return {
        "family": fam_id,
        "window": w,
        "mu_hat": est.mu_hat,
        "argmin": list(est.argmin),
        "note": "window minimum; upper bound only",
        "anchored_minima": [
            {"k": k, "mu_hat": v, "argmin": list(a)} for k, v, a in table
        ],
        "artifacts": ["rho.csv"],
    }


def _cmd_kway(args, out: Path) -> dict:
    anchor = _ints(args.anchor)
    side = args.side
    if args.shape == "tw":
        wset = combi.WindowSet.full(anchor, side)
        default_k = len(anchor)
    elif args.shape == "quarter":
        t = _ints(args.t_offset) if args.t_offset else (0,) * len(anchor)
        wset = combi.quarter_plane_window(anchor, side, args.i1, args.i2, t)
        default_k = 2
    else:
        t = _ints(args.t_offset) if args.t_offset else (0,) * len(anchor)
        wset = combi.column_window(anchor, side, args.direction, t)
        default_k = 1
    k = args.k if args.k is not None else default_k
    rep = combi.verify_kway(wset, k)
    qp = combi.detect_quarter_plane(wset) if wset.n == 3 else None
    return {
        "shape": args.shape,
        "anchor": list(anchor),
        "side": side,
        "k": k,
        "ok": rep.ok,
        "violations": [
            {"index": list(idx), "count": c} for idx, c in rep.violations
        ],
        "n_boundary_indeterminate": len(rep.boundary),
        "quarter_plane": (
            {"i1": qp[0], "i2": qp[1], "t": list(qp[2])} if qp else None
        ),
    }


def _read_graph_file(path: str, k_colors: int) -> combi.ColoredCompleteGraph:
    edges = []
    n = 0
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ConfigError(f"bad edge line {line!r}; expected 'u v c'")
            u, v, c = (int(p) for p in parts)
            edges.append((u, v, c))
            n = max(n, u + 1, v + 1)
    return combi.ColoredCompleteGraph.from_edges(n, edges, k_colors)


def _cmd_cover(args, out: Path) -> dict:
    if args.graph:
        graph = _read_graph_file(args.graph, 3)
        source = args.graph
    else:
        n = args.n if args.n is not None else 20
        graph = combi.ColoredCompleteGraph.random(n, 3, args.seed)
        source = f"random(n={n}, seed={args.seed})"
    res = combi.cover_two_sets(graph)
    return {
        "graph": source,
        "n_vertices": graph.n_vertices,
        "A": sorted(res.A),
        "c_A": res.c_A,
        "diam_A": res.diam_A,
        "B": sorted(res.B),
        "c_B": res.c_B,
        "diam_B": res.diam_B,
        "pivot_added": res.pivot_added,
        "verified": True,
    }


def _make_coloring(args) -> combi.GridColoring:
    beta = _ints(args.beta)
    side = args.side
    mode = args.mode
    if mode.startswith("constant-"):
        return combi.GridColoring.constant(beta, side, int(mode[-1]))
    if mode == "face-1":
        return combi.face_noise_coloring(beta, side, 1, args.seed)
    if mode == "face-2":
        return combi.face_noise_coloring(beta, side, 2, args.seed)
    if mode == "parity":
        return combi.parity_slice_coloring(beta, side)
    if mode == "stray-line":
        return combi.deep_stray_line_coloring(beta, side)
    if mode == "file":
        if not args.coloring_file:
            raise ConfigError("mode 'file' needs --coloring-file")
        with open(args.coloring_file) as fh:
            data = json.load(fh)
        arr = np.asarray(data["colors"], dtype=np.uint8)
        return combi.GridColoring(
            beta=tuple(data.get("beta", beta)),
            box_side=int(data.get("side", arr.shape[0] - 1)),
            colors=arr,
        )
    raise ConfigError(f"unknown coloring mode {mode!r}")


def _cmd_trivialize(args, out: Path) -> dict:
    coloring = _make_coloring(args)
    result = combi.trivialize_coloring(coloring)
    base = {
        "mode": args.mode,
        "beta": list(coloring.beta),
        "side": coloring.box_side,
    }
    if isinstance(result, combi.MonoWindow):
        base.update(
            result="window",
            anchor=list(result.window.anchor),
            window_side=result.window.box_side,
            color=result.color,
        )
    else:
        base.update(
            result="violation",
            hypothesis=result.hypothesis,
            points=[list(p) for p in result.points],
            colors=[list(c) if isinstance(c, tuple) else c for c in result.colors],
            detail=result.detail,
        )
    return base


def _cmd_diagram(args, out: Path) -> dict:
    fam_id, fam, base = _load_family(args)
    grid = OrbitGrid(fam, base)
    x = _ints(args.index) if args.index else (0, 0, 0)
    d = diagrams.compute_diagram(grid, x)
    entry = diagrams.canonicalize(d)
    cid = diagrams.classify_appendix(entry)
    payload = diagrams.diagram_to_json_dict(d)
    payload.update(
        family=fam_id,
        distances=[float(v) for v in d.distances],
        satisfied=list(d.satisfied),
        admissible=entry.admissible,
        catalog_id=cid if cid is not diagrams.NONCANONICAL else "NONCANONICAL",
    )
    return payload


def _cmd_tps_check(args, out: Path) -> dict:
    fam_id, fam, base = _load_family(args)
    grid = OrbitGrid(fam, base)
    w = args.window if args.window is not None else 4
    x0 = _ints(args.x0) if args.x0 else (0, 0, 0)
    xs = []
    for i, flag in enumerate((args.x1, args.x2, args.x3), start=1):
        if flag:
            xs.append(_ints(flag))
        else:
            xs.append(tuple(v + (1 if j == i - 1 else 0) for j, v in enumerate(x0)))
    x = _ints(args.probe) if args.probe else xs[0]
    mu_hat = args.mu if args.mu is not None else estimate_mu(grid, w).mu_hat
    rep = diagrams.check_tps(
        grid, x0, xs[0], xs[1], xs[2], x, args.k_const, fam.lam, mu_hat
    )
    return {
        "family": fam_id,
        "K": args.k_const,
        "mu_hat": mu_hat,
        "x0": list(x0),
        "x": list(x),
        "premises_hold": rep.premises_hold,
        "hypotheses": [
            {"name": h.name, "lhs": h.lhs, "bound": h.bound, "holds": h.holds}
            for h in rep.hypotheses
        ],
        "conclusions": [
            {
                "c": c.c,
                "triggered": c.triggered,
                "lhs": c.lhs,
                "bound": c.bound,
                "holds": c.holds,
            }
            for c in rep.conclusions
        ],
    }


def _cmd_config_scan(args, out: Path) -> dict:
    fam_id, fam, base = _load_family(args)
    grid = OrbitGrid(fam, base)
    w = args.window if args.window is not None else 4
    est = estimate_mu(grid, w)
    mu_hat = args.mu if args.mu is not None else est.mu_hat
    forb = diagrams.scan_forbidden_configs(grid, args.k_const, fam.lam, mu_hat, w)
    x0 = forb.x0 if forb.x0 is not None else est.argmin
    si = diagrams.scan_si_and_forbidden_t(grid, x0, args.k_const, fam.lam, mu_hat, w)
    return {
        "family": fam_id,
        "window": w,
        "K": args.k_const,
        "mu_hat": mu_hat,
        "degenerate": forb.degenerate,
        "empty_window": forb.empty_window,
        "x0": list(x0) if x0 is not None else None,
        "occurrences": [
            {
                "config": o.config,
                "indices": [list(i) for i in o.indices],
                "values": {k: v for k, v in o.values},
            }
            for o in forb.occurrences
        ],
        "si_scan": {
            "precondition_ok": si.precondition_ok,
            "lambda_ok": si.lambda_ok,
            "s_set_sizes": [len(s) for s in si.s_sets],
            "witness": (
                {"t": list(si.witness[0]), "i": si.witness[1]} if si.witness else None
            ),
        },
    }


def _cmd_constants(args, out: Path) -> dict:
    ledger = consts.build_ledger()
    return {"ledger": consts.ledger_to_json_dict(ledger)}


def _cmd_ck_search(args, out: Path) -> dict:
    rep = combi.ck_search(
        args.k_colors,
        args.max_n,
        samples=args.samples,
        seed=args.seed,
    )
    return {
        "k": rep.k,
        "n_range": list(rep.n_range),
        "exhaustive": rep.exhaustive,
        "min_passing_C": _jsonable(rep.min_passing_C),
        "witness": {
            "n": rep.witness_n,
            "edges": [list(e) for e in rep.witness_edges],
        },
        "levels": [
            {
                "n": lv.n,
                "examined": lv.examined,
                "exhaustive": lv.exhaustive,
                "max_value": _jsonable(lv.max_value),
            }
            for lv in rep.levels
        ],
        "backend": rep.backend,
    }


_HANDLERS = {
    "solve": _cmd_solve,
    "walk": _cmd_walk,
    "fni-scan": _cmd_fni_scan,
    "mu-estimate": _cmd_mu_estimate,
    "kway": _cmd_kway,
    "cover": _cmd_cover,
    "trivialize": _cmd_trivialize,
    "diagram": _cmd_diagram,
    "tps-check": _cmd_tps_check,
    "config-scan": _cmd_config_scan,
    "constants": _cmd_constants,
    "ck-search": _cmd_ck_search,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contragrid",
        description="Experiments over commuting contractive families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        p.add_argument("--config", help="family config JSON path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--lambda", dest="lam", default=None,
                       help="exact lambda override (fraction or decimal string)")
        p.add_argument("--window", type=int, default=None)
        if family:
            p.add_argument("--family", default=None,
                           help=f"bundled id ({', '.join(sorted(families.BUNDLED))})")

    p = sub.add_parser("solve", help="common fixed point of a family")
    common(p)
    p.add_argument("--p0", help="start point, comma floats")
    p.add_argument("--gbct", type=int, default=0, metavar="N",
                   help="treat op 1 as f and solve via powers f^1..f^N")

    p = sub.add_parser("walk", help="greedy walk between grid indices")
    common(p)
    p.add_argument("--from", dest="src", help="source index, comma ints")
    p.add_argument("--to", dest="dst", help="target index, comma ints")

    p = sub.add_parser("fni-scan", help="finite-neighborhood inequality scan")
    common(p)

    p = sub.add_parser("mu-estimate", help="window minima of rho")
    common(p)
    p.add_argument("--kmax", type=int, default=3)

    p = sub.add_parser("kway", help="verify k-way property of a window set")
    common(p, family=False)
    p.add_argument("--shape", choices=("tw", "quarter", "column"), default="tw")
    p.add_argument("--anchor", default="0,0,0")
    p.add_argument("--side", type=int, default=4)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--i1", type=int, default=1)
    p.add_argument("--i2", type=int, default=2)
    p.add_argument("--direction", type=int, default=3)
    p.add_argument("--t-offset", dest="t_offset", default=None)

    p = sub.add_parser("cover", help="two-set cover of a 3-colored K_n")
    common(p, family=False)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--graph", help="edge list file: lines 'u v c'")

    p = sub.add_parser("trivialize", help="reduce a grid coloring")
    common(p, family=False)
    p.add_argument("--mode", default="constant-1",
                   choices=("constant-1", "constant-2", "constant-3", "face-1",
                            "face-2", "parity", "stray-line", "file"))
    p.add_argument("--beta", default="0,0,0")
    p.add_argument("--side", type=int, default=25)
    p.add_argument("--coloring-file", dest="coloring_file", default=None)

    p = sub.add_parser("diagram", help="contraction diagram at a grid point")
    common(p)
    p.add_argument("--index", help="grid index, comma ints")

    p = sub.add_parser("tps-check", help="three-point-star proposition check")
    common(p)
    p.add_argument("--x0", default=None)
    p.add_argument("--x1", default=None)
    p.add_argument("--x2", default=None)
    p.add_argument("--x3", default=None)
    p.add_argument("--probe", default=None, help="the probe point x")
    p.add_argument("--K", dest="k_const", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=None, help="override mu_hat")

    p = sub.add_parser("config-scan", help="forbidden-configuration scans")
    common(p)
    p.add_argument("--K", dest="k_const", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=None, help="override mu_hat")

    p = sub.add_parser("constants", help="exact constant ledger")
    common(p, family=False)

    p = sub.add_parser("ck-search", help="search the smallest cover constant")
    common(p, family=False)
    p.add_argument("--k", dest="k_colors", type=int, default=2)
    p.add_argument("--max-n", dest="max_n", type=int, default=7)
    p.add_argument("--samples", type=int, default=200)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    report_path = out / f"{args.command}.json"
    try:
        payload = _HANDLERS[args.command](args, out)
        fam_lam = None
        if "lambda" in payload:
            fam_lam = Fraction(payload["lambda"])
        payload["lambda_feasibility"] = _feasibility(
            Fraction(args.lam) if getattr(args, "lam", None) else (
                fam_lam if fam_lam is not None else consts.LAMBDA_STAR
            )
        )
        _write_json(report_path, payload)
        print(f"wrote {report_path}")
        return 0
    except ContragridError as exc:
        err = {
            "error": {
                "type": type(exc).__name__,
                "message": str(exc),
            }
        }
        _write_json(out / f"{args.command}-error.json", err)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
