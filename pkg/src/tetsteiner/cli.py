"""Command line entry point: ``tetsteiner <command> --input FILE [options]``.

Exit codes: 0 success, 2 bad input, 3 no convergence, 4 any other solver error.
Errors are written to stderr as ``{"code", "message", "context"}``.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from .degeneracy import check_nondegenerate
from .equilibrium import WeightSystem
from .errors import InputError, NoConvergence, SteinerError
from .geometry import skew_frame
from .oracle import minimize_two_nodes
from .pipeline import (
    RunOptions,
    batch_worker,
    degeneracy_dict,
    error_dict,
    ft_block,
    solve_all_pairings,
    solve_spec,
)
from .serialize import _vec, deg, dumps, export_tree, iter_jsonl, load_instance, records_to_csv
from .simpson import solve_instance
from .twist import twist_angle, twist_angle_normal_oracle

EXIT_OK, EXIT_INPUT, EXIT_NOCONV, EXIT_SOLVER = 0, 2, 3, 4


def exit_code_for(err: SteinerError) -> int:
    if isinstance(err, InputError):
        return EXIT_INPUT
    if isinstance(err, NoConvergence):
        return EXIT_NOCONV
    return EXIT_SOLVER


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", "-i", required=True, help="instance JSON (JSONL for batch)")
    p.add_argument("--output", "-o", help="write here instead of stdout")
    p.add_argument("--tol", type=float, help="relative convergence tolerance (default 1e-12)")
    p.add_argument("--max-iter", type=int, dest="max_iter", help="iteration cap (default 10000)")
    p.add_argument("--seed", type=int, help="oracle restart seed (default 0)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tetsteiner", description="Weighted Steiner trees for four points in space."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Simpson-line construction of the two-node tree")
    _common(p)
    p.add_argument("--oracle", action="store_true", help="cross-check against the direct minimiser")
    p.add_argument("--ft", action="store_true", help="also solve the single-point problem")
    p.add_argument("--all-pairings", action="store_true", dest="all_pairings")
    p.add_argument("--trace", action="store_true", help="include the (t12, t34) iterates")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("ft", help="single Fermat-Torricelli point via its Simpson line")
    _common(p)

    p = sub.add_parser("twist", help="twist angle from given or solved t12, t34")
    _common(p)
    p.add_argument("--t12", type=float)
    p.add_argument("--t34", type=float)
    p.add_argument("--signed", action="store_true", help="also report the signed twist")

    p = sub.add_parser("check", help="certify that both nodes are interior")
    _common(p)
    p.add_argument("--binding", choices=("effective", "terminals"), default="effective")

    p = sub.add_parser("oracle", help="direct minimisation of the tree length")
    _common(p)
    p.add_argument("--restarts", type=int, default=8)

    p = sub.add_parser("export", help="write the tree as an OBJ line mesh or edge CSV")
    _common(p)
    p.add_argument("--format", choices=("obj", "csv"), default="obj")

    p = sub.add_parser("batch", help="one record per JSONL line, solved in parallel")
    _common(p)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--ft", action="store_true")
    p.add_argument("--format", choices=("jsonl", "csv"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    return ap


def _overrides(args) -> dict[str, Any]:
    return {k: getattr(args, k, None) for k in ("tol", "max_iter", "seed")}


def _emit(args, text: str | bytes) -> None:
    data = text.encode() if isinstance(text, str) else text
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _load(args):
    spec = load_instance(args.input)
    opts = RunOptions().merged(spec.options, _overrides(args))
    return spec, opts


def cmd_solve(args) -> int:
    spec, opts = _load(args)
    opts = RunOptions(**{**opts.__dict__, "oracle": args.oracle, "ft": args.ft, "trace": args.trace})
    recs = solve_all_pairings(spec, opts) if args.all_pairings else [solve_spec(spec, opts)[0]]
    if args.format == "csv":
        _emit(args, records_to_csv(recs))
    else:
        payload = [r.to_dict() for r in recs] if args.all_pairings else recs[0].to_dict()
        _emit(args, dumps(payload, indent=2) + "\n")
    if not args.all_pairings and recs[0].status != "ok":
        _report_error(recs[0].error)
        return EXIT_NOCONV if recs[0].status == NoConvergence.code else EXIT_SOLVER
    return EXIT_OK


def cmd_ft(args) -> int:
    spec, opts = _load(args)
    block = ft_block(spec.tet.canonical(), opts)
    frame = skew_frame(spec.tet.canonical())
    block.update({"id": spec.id, "H": frame.H, "phi_deg": deg(frame.phi)})
    _emit(args, dumps(block, indent=2) + "\n")
    if block["status"] != "ok":
        _report_error(block["error"])
        return EXIT_NOCONV if block["status"] == NoConvergence.code else EXIT_SOLVER
    return EXIT_OK


def cmd_twist(args) -> int:
    spec, opts = _load(args)
    tet = spec.tet.canonical()
    frame = skew_frame(tet)
    if (args.t12 is None) != (args.t34 is None):
        raise InputError("give both --t12 and --t34, or neither")
    if args.t12 is None:
        _, sol = solve_instance(tet, tol=opts.tol, max_iter=opts.max_iter)
        t12, t34 = sol.t12, sol.t34
    else:
        t12, t34 = args.t12, args.t34
    rep = twist_angle(frame, t12, t34, signed=args.signed)
    out = {
        "id": spec.id, "t12": t12, "t34": t34,
        "phi_deg": deg(frame.phi), "phi12_deg": deg(rep.phi12), "phi34_deg": deg(rep.phi34),
        "omega_deg": deg(rep.omega), "simpson_length": rep.simpson_length,
        "special_case": rep.special_case.value,
        "omega_normals_deg": deg(twist_angle_normal_oracle(frame, frame.point12(t12), frame.point34(t34))),
    }
    if args.signed:
        out["signed_omega_deg"] = deg(rep.signed_omega)
    _emit(args, dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    spec, _ = _load(args)
    tet = spec.tet.canonical()
    rep = check_nondegenerate(tet, WeightSystem.from_instance(tet), binding=args.binding)
    _emit(args, dumps({"id": spec.id, **degeneracy_dict(rep)}, indent=2) + "\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec, opts = _load(args)
    r = minimize_two_nodes(spec.tet.canonical(), restarts=args.restarts, seed=opts.seed)
    out = {
        "id": spec.id, "O12": _vec(r.O12), "O34": _vec(r.O34), "cost": r.cost,
        "iterations": r.iterations, "gradient_norm": r.gradient_norm,
        "degenerate": r.degenerate, "restart_costs": r.restart_costs,
    }
    _emit(args, dumps(out, indent=2) + "\n")
    return EXIT_OK


def cmd_export(args) -> int:
    spec, opts = _load(args)
    rec, tree = solve_spec(spec, opts)
    if tree is None:
        _report_error(rec.error)
        return EXIT_NOCONV if rec.status == NoConvergence.code else EXIT_SOLVER
    _emit(args, export_tree(tree, args.format))
    return EXIT_OK


def cmd_batch(args) -> int:
    base = RunOptions(oracle=args.oracle, ft=args.ft)
    work = [(i, obj, base, _overrides(args)) for i, obj in iter_jsonl(args.input)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            # map preserves input order whatever the completion order
            recs = list(pool.map(batch_worker, work, chunksize=4))
    else:
        recs = [batch_worker(w) for w in work]
    if args.format == "csv":
        _emit(args, records_to_csv(recs))
    else:
        _emit(args, "".join(r.to_json() + "\n" for r in recs))
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve, "ft": cmd_ft, "twist": cmd_twist, "check": cmd_check,
    "oracle": cmd_oracle, "export": cmd_export, "batch": cmd_batch,
}


def _report_error(err: dict[str, Any] | None) -> None:
    if err is not None:
        sys.stderr.write(dumps(err) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SteinerError as err:
        _report_error(error_dict(err))
        return exit_code_for(err)


if __name__ == "__main__":
    sys.exit(main())
